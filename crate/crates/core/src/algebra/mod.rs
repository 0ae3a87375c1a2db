//! Exact arithmetic over prime fields and their extensions, plus the
//! row-reduced subspace calculus used by every other module.
//!
//! Groups are elementary abelian `p`-groups, identified with `F_p^n`.
//! Elements are row vectors and endomorphisms act on the right, so
//! `v ↦ vM` and "apply `A` then `B`" is the matrix product `AB`.

mod fq;
mod matrix;
mod prime;
mod subspace;
mod vector;

pub use fq::{default_irreducible, fq_ops, is_irreducible, FieldSpec, FiniteField, FqElem};
pub use matrix::{solve_homogeneous, Endo};
pub use prime::{is_prime, prime_power, PrimeField};
pub use subspace::{apply_endo, rref, subspace_meet_join, Subspace};
pub use vector::GroupElement;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("ambient mismatch: F_{}^{} vs F_{}^{}", .left.0, .left.1, .right.0, .right.1)]
    AmbientMismatch {
        left: (u32, usize),
        right: (u32, usize),
    },
    #[error("residue {value} out of range for modulus {p}")]
    OutOfRange { value: u64, p: u32 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("modulus polynomial must be monic of degree {degree}")]
    BadModulus { degree: usize },
    #[error("modulus polynomial is reducible over F_{0}")]
    Reducible(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("zero has no inverse")]
    ZeroInverse,
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;
