//! Translation generalized quadrangles built from Kantor families over
//! finite elementary abelian groups.

pub mod algebra;
pub mod kantor;
pub mod cosetgeom;
pub mod gq;
pub mod kernel;
pub mod egg;
pub mod dirlim;
pub mod cli;
