//! The projective representation of a family whose kernel is a field:
//! `A` as a vector space over the kernel field `K`, and the members as
//! `K`-subspaces.
//!
//! A `K`-scalar is written as the index of its kernel coordinates,
//! `ring.coords(M).encode(p)`; index 0 is zero.

use thiserror::Error;

use crate::algebra::{AlgebraError, Endo, GroupElement, Subspace};
use crate::kantor::KantorFamily;
use crate::kernel::{classify, KernelElement, KernelRing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EggError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("kernel of size {0} is not a field")]
    NotAField(u64),
    #[error("kernel dimension {e} does not divide n = {n}")]
    Dimension { n: usize, e: usize },
    #[error("member {member} (star: {star}) is not closed under the kernel field")]
    NotClosed { member: usize, star: bool },
    #[error("members {0} and {1} meet nontrivially")]
    NotDisjoint(usize, usize),
    #[error("member {0} is not contained in its tangent space")]
    NotInStar(usize),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("element belongs to another kernel ring")]
    RingMismatch,
    #[error("the image of member {0} is not a member")]
    NotPermuting(usize),
}

pub type Result<T, E = EggError> = std::result::Result<T, E>;

/// A `K`-subspace of `K^m` given by a greedy `K`-basis in coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KSubspace {
    pub dim: usize,
    pub basis: Vec<Vec<usize>>,
}

impl KSubspace {
    /// `[k,k,..;k,k,..]`, or `0` for the zero subspace.
    pub fn token(&self) -> String {
        if self.basis.is_empty() {
            return "0".into();
        }
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|r| r.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
            .collect();
        format!("[{}]", rows.join(";"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EggMember {
    pub a: KSubspace,
    pub star: KSubspace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EggRepresentation {
    family: KantorFamily,
    /// Kernel basis over `F_p`, as matrices.
    k_basis: Vec<Endo>,
    /// `|K| = p^e`.
    e: usize,
    m: usize,
    basis: Vec<GroupElement>,
    /// Inverse of the matrix with rows `b_j β_l`, `j`-major.
    to_coords: Endo,
    members: Vec<EggMember>,
}

/// `K`-span of `vectors`, as an `F_p` subspace.
fn k_span(k_basis: &[Endo], p: u32, n: usize, vectors: &[GroupElement]) -> Subspace {
    let rows: Vec<GroupElement> = vectors
        .iter()
        .flat_map(|v| k_basis.iter().map(move |b| b.apply(v).expect("square")))
        .collect();
    Subspace::span(p, n, &rows).expect("ambient n")
}

/// Lex-least vectors of `within` outside the running `K`-span.
fn greedy_k_basis(k_basis: &[Endo], within: &Subspace) -> Vec<GroupElement> {
    let (p, n) = within.ambient();
    let mut chosen = Vec::new();
    let mut span = Subspace::zero(p, n);
    for v in GroupElement::all(p, n) {
        if span == *within {
            break;
        }
        if within.contains(&v) && !span.contains(&v) {
            chosen.push(v);
            span = k_span(k_basis, p, n, &chosen);
        }
    }
    chosen
}

fn closed(k_basis: &[Endo], s: &Subspace) -> bool {
    k_basis.iter().all(|b| s.image(b).expect("same n").is_subspace_of(s))
}

pub fn build_egg(fam: &KantorFamily, ring: &KernelRing) -> Result<EggRepresentation> {
    let cls = classify(ring);
    if !cls.is_field {
        return Err(EggError::NotAField(cls.size));
    }
    let (p, n) = (fam.p(), fam.n());
    let k_basis = ring.basis().to_vec();
    let e = k_basis.len();
    if n % e != 0 {
        return Err(EggError::Dimension { n, e });
    }
    for (i, mem) in fam.members().iter().enumerate() {
        if !closed(&k_basis, &mem.a) {
            return Err(EggError::NotClosed { member: i, star: false });
        }
        if !closed(&k_basis, &mem.star) {
            return Err(EggError::NotClosed { member: i, star: true });
        }
        if !mem.a.is_subspace_of(&mem.star) {
            return Err(EggError::NotInStar(i));
        }
        for (j, other) in fam.members().iter().enumerate().skip(i + 1) {
            if !mem.a.meet(&other.a)?.is_zero() {
                return Err(EggError::NotDisjoint(i, j));
            }
        }
    }
    let basis = greedy_k_basis(&k_basis, &Subspace::full(p, n));
    let m = basis.len();
    if m * e != n {
        return Err(EggError::Dimension { n, e });
    }
    let rows: Vec<Vec<u32>> = basis
        .iter()
        .flat_map(|b| k_basis.iter().map(move |k| k.apply(b).expect("square").into_coords()))
        .collect();
    let to_coords = Endo::from_rows(p, rows)?
        .inverse()
        .expect("a K-basis spans A over F_p");
    let mut egg = EggRepresentation {
        family: fam.clone(),
        k_basis,
        e,
        m,
        basis,
        to_coords,
        members: Vec::new(),
    };
    egg.members = fam
        .members()
        .iter()
        .map(|mem| EggMember {
            a: egg.k_subspace(&mem.a),
            star: egg.k_subspace(&mem.star),
        })
        .collect();
    Ok(egg)
}

impl EggRepresentation {
    pub fn family(&self) -> &KantorFamily {
        &self.family
    }

    pub fn field_size(&self) -> u64 {
        u64::from(self.family.p()).pow(self.e as u32)
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn basis(&self) -> &[GroupElement] {
        &self.basis
    }

    pub fn members(&self) -> &[EggMember] {
        &self.members
    }

    /// The matrix of the scalar with index `k`.
    pub fn scalar(&self, k: usize) -> Endo {
        let (p, n) = (self.family.p(), self.family.n());
        let c = GroupElement::decode(k, p, self.e);
        let mut acc = Endo::zero(p, n);
        for (b, &cl) in self.k_basis.iter().zip(c.coords()) {
            acc = acc.add(&b.scale(cl)).expect("same shape");
        }
        acc
    }

    /// `K`-coordinates of an `F_p` vector.
    pub fn k_coords(&self, v: &GroupElement) -> Result<Vec<usize>> {
        let c = self.to_coords.apply(v)?;
        let p = self.family.p();
        Ok(c.chunks(self.e)
            .map(|ch| GroupElement::from_reduced(ch.to_vec()).encode(p))
            .collect())
    }

    /// `Σ_j b_j k_j`.
    pub fn from_k_coords(&self, coords: &[usize]) -> Result<GroupElement> {
        let (p, n) = (self.family.p(), self.family.n());
        if coords.len() != self.m {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.m,
                got: coords.len(),
            }
            .into());
        }
        let f = crate::algebra::PrimeField::new(p)?;
        let mut acc = GroupElement::zero(n);
        for (b, &k) in self.basis.iter().zip(coords) {
            acc = acc.add(&self.scalar(k).apply(b)?, f);
        }
        Ok(acc)
    }

    fn k_subspace(&self, s: &Subspace) -> KSubspace {
        let basis = greedy_k_basis(&self.k_basis, s);
        KSubspace {
            dim: basis.len(),
            basis: basis.iter().map(|v| self.k_coords(v).expect("length n")).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EggPermutation {
    /// `A_i α = A_{members[i]}`.
    pub members: Vec<usize>,
    pub stars: Vec<usize>,
    /// Some vector of some member is moved.
    pub moves_points: bool,
}

impl EggPermutation {
    pub fn is_identity(&self) -> bool {
        self.members.iter().enumerate().all(|(i, &j)| i == j) && self.stars.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// The permutation of the egg induced by a kernel unit.
pub fn verify_unit_egg_permutation(egg: &EggRepresentation, alpha: &KernelElement) -> Result<EggPermutation> {
    if alpha.ring().family() != &egg.family {
        return Err(EggError::RingMismatch);
    }
    if !alpha.is_unit() {
        return Err(EggError::NotAUnit);
    }
    let m = alpha.matrix();
    let fam = &egg.family;
    let find = |img: &Subspace, star: bool| {
        fam.members()
            .iter()
            .position(|mem| if star { mem.star == *img } else { mem.a == *img })
    };
    let mut members = Vec::new();
    let mut stars = Vec::new();
    let mut moves_points = false;
    for (i, mem) in fam.members().iter().enumerate() {
        members.push(find(&mem.a.image(m)?, false).ok_or(EggError::NotPermuting(i))?);
        stars.push(find(&mem.star.image(m)?, true).ok_or(EggError::NotPermuting(i))?);
        moves_points |= mem.a.basis().iter().any(|v| m.apply(v).map_or(true, |w| &w != v));
    }
    Ok(EggPermutation {
        members,
        stars,
        moves_points,
    })
}

#[cfg(test)]
mod tests;
