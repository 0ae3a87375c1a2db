//! The kernel of a Kantor family: matrices `M` over `F_p` with
//! `A_i M ≤ A_i` for every member (and `A_i* M ≤ A_i*` in the default
//! mode), as a subalgebra of `Mat_n(F_p)`.

use std::fmt;

use thiserror::Error;

use crate::algebra::{solve_homogeneous, AlgebraError, Endo, GroupElement, PrimeField, Subspace};
use crate::kantor::{image_family, KantorError, KantorFamily};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KernelError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Kantor(#[from] KantorError),
    #[error("elements belong to different kernel rings")]
    RingMismatch,
    #[error("matrix does not preserve the constrained subspaces")]
    NotInKernel,
    #[error("element is not a unit")]
    NotAUnit,
}

pub type Result<T, E = KernelError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ConstraintMode {
    /// Preserve the `A_i` only.
    FOnly,
    /// Preserve the `A_i` and the `A_i*`.
    #[default]
    FAndFStar,
}

impl ConstraintMode {
    pub fn token(&self) -> &'static str {
        match self {
            ConstraintMode::FOnly => "f",
            ConstraintMode::FAndFStar => "fstar",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelRing {
    family: KantorFamily,
    mode: ConstraintMode,
    constraints: Vec<Subspace>,
    /// Flattened matrices of the ring as a subspace of `F_p^{n²}`; its
    /// reduced basis doubles as the ring basis.
    span: Subspace,
    basis: Vec<Endo>,
}

/// Linear conditions on the `n²` entries of `M` (row-major) saying
/// `vM ∈ V` for each basis row `v` of `V`.
fn constraint_rows(v: &Subspace, rows: &mut Vec<Vec<u32>>) {
    let n = v.n();
    let f = PrimeField::new(v.p()).expect("prime");
    let pivots = v.pivots();
    for b in v.basis() {
        // (vM)_k − Σ_j (vM)_{piv_j} · basis_j[k] = 0 for k off the pivots
        for k in (0..n).filter(|k| !pivots.contains(k)) {
            let mut row = vec![0u32; n * n];
            for (r, &vr) in b.iter().enumerate() {
                if vr == 0 {
                    continue;
                }
                row[r * n + k] = f.add(row[r * n + k], vr);
                for (bj, &pc) in v.basis().iter().zip(pivots) {
                    let c = f.mul(vr, bj[k]);
                    row[r * n + pc] = f.sub(row[r * n + pc], c);
                }
            }
            rows.push(row);
        }
    }
}

/// Solves the preservation constraints for the kernel in the given mode.
pub fn compute_kernel(fam: &KantorFamily, mode: ConstraintMode) -> KernelRing {
    let (p, n) = (fam.p(), fam.n());
    let mut constraints: Vec<Subspace> = Vec::new();
    for m in fam.members() {
        let mut add = |s: &Subspace| {
            if !constraints.contains(s) {
                constraints.push(s.clone());
            }
        };
        add(&m.a);
        if mode == ConstraintMode::FAndFStar {
            add(&m.star);
        }
    }
    let mut rows = Vec::new();
    for v in &constraints {
        constraint_rows(v, &mut rows);
    }
    let f = PrimeField::new(p).expect("prime");
    let null: Vec<GroupElement> = solve_homogeneous(f, n * n, &rows)
        .into_iter()
        .map(GroupElement::from_reduced)
        .collect();
    let span = Subspace::span(p, n * n, &null).expect("n² columns");
    let basis = span
        .basis()
        .iter()
        .map(|b| Endo::from_flat(p, n, b.coords()).expect("n² entries"))
        .collect();
    KernelRing {
        family: fam.clone(),
        mode,
        constraints,
        span,
        basis,
    }
}

impl KernelRing {
    pub fn family(&self) -> &KantorFamily {
        &self.family
    }

    pub fn mode(&self) -> ConstraintMode {
        self.mode
    }

    pub fn p(&self) -> u32 {
        self.family.p()
    }

    pub fn n(&self) -> usize {
        self.family.n()
    }

    pub fn constraints(&self) -> &[Subspace] {
        &self.constraints
    }

    pub fn basis(&self) -> &[Endo] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn size(&self) -> u64 {
        (self.p() as u64).pow(self.dim() as u32)
    }

    /// Direct check that `m` maps every constrained subspace into itself.
    pub fn preserves(&self, m: &Endo) -> bool {
        m.n() == self.n()
            && m.p() == self.p()
            && self.constraints.iter().all(|v| {
                v.basis()
                    .iter()
                    .all(|b| m.apply(b).map(|w| v.contains(&w)).unwrap_or(false))
            })
    }

    pub fn element(&self, m: &Endo) -> Result<KernelElement<'_>> {
        if m.n() != self.n() || m.p() != self.p() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.n(),
                got: m.n(),
            }
            .into());
        }
        if !self.preserves(m) {
            return Err(KernelError::NotInKernel);
        }
        Ok(KernelElement {
            ring: self,
            m: m.clone(),
        })
    }

    fn wrap(&self, m: Endo) -> KernelElement<'_> {
        KernelElement { ring: self, m }
    }

    pub fn zero(&self) -> KernelElement<'_> {
        self.wrap(Endo::zero(self.p(), self.n()))
    }

    pub fn one(&self) -> KernelElement<'_> {
        self.wrap(Endo::identity(self.p(), self.n()))
    }

    /// Coordinates of a ring element over the reduced basis.
    pub fn coords(&self, m: &Endo) -> GroupElement {
        let flat = m.flat();
        GroupElement::from_reduced(self.span.pivots().iter().map(|&c| flat[c]).collect())
    }

    pub fn from_coords(&self, c: &GroupElement) -> KernelElement<'_> {
        let mut acc = Endo::zero(self.p(), self.n());
        for (b, &x) in self.basis.iter().zip(c.iter()) {
            if x != 0 {
                acc = acc.add(&b.scale(x)).expect("same shape");
            }
        }
        self.wrap(acc)
    }

    /// All `p^dim` elements, ordered by coordinates.
    pub fn elements(&self) -> impl Iterator<Item = KernelElement<'_>> + '_ {
        GroupElement::all(self.p(), self.dim()).map(move |c| self.from_coords(&c))
    }

    /// First pair of basis indices whose product leaves the span.
    pub fn verify_closure(&self) -> Option<(usize, usize)> {
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let prod = GroupElement::from_reduced(a.mul(b).expect("same shape").flat());
                if !self.span.contains(&prod) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// The scalar `(m mod p)·I`.
    pub fn multiplication_endo(&self, m: i64) -> KernelElement<'_> {
        self.wrap(Endo::scalar(self.p(), self.n(), m))
    }

    /// Matrix of `b ↦ ab` on ring coordinates.
    fn left_mult(&self, a: &Endo) -> Endo {
        let rows = self
            .basis
            .iter()
            .map(|b| self.coords(&a.mul(b).expect("same shape")).into_coords())
            .collect();
        Endo::from_rows(self.p(), rows).expect("square")
    }
}

/// An element of a specific kernel ring.
#[derive(Clone, PartialEq, Eq)]
pub struct KernelElement<'r> {
    ring: &'r KernelRing,
    m: Endo,
}

impl fmt::Debug for KernelElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KernelElement({})", self.m.token())
    }
}

impl<'r> KernelElement<'r> {
    pub fn matrix(&self) -> &Endo {
        &self.m
    }

    pub fn ring(&self) -> &'r KernelRing {
        self.ring
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if std::ptr::eq(self.ring, other.ring) {
            Ok(())
        } else {
            Err(KernelError::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.ring.wrap(self.m.add(&other.m)?))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.ring.wrap(self.m.sub(&other.m)?))
    }

    pub fn neg(&self) -> Self {
        self.ring.wrap(self.m.neg())
    }

    /// `self` then `other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.ring.wrap(self.m.mul(&other.m)?))
    }

    pub fn pow(&self, e: u64) -> Self {
        self.ring.wrap(self.m.pow(e))
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.ring.left_mult(&self.m).is_injective()
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(KernelError::NotAUnit);
        }
        Ok(self.ring.wrap(self.m.inverse().ok_or(KernelError::NotAUnit)?))
    }

    /// `Σ c_i β^i` with integer coefficients, lowest degree first.
    pub fn eval_poly(&self, coeffs: &[i64]) -> Self {
        let (p, n) = (self.ring.p(), self.ring.n());
        // Horner
        let mut acc = Endo::zero(p, n);
        for &c in coeffs.iter().rev() {
            acc = acc.mul(&self.m).expect("same shape").add(&Endo::scalar(p, n, c)).expect("same shape");
        }
        self.ring.wrap(acc)
    }

    /// The family `(A_i α, A_i* α)` of the ring's family.
    pub fn image_family(&self) -> Result<KantorFamily> {
        Ok(image_family(self.ring.family(), &self.m)?)
    }
}

/// Multiplicative order of a unit.
pub fn unit_order(e: &KernelElement) -> Result<u64> {
    if !e.is_unit() {
        return Err(KernelError::NotAUnit);
    }
    let one = Endo::identity(e.ring.p(), e.ring.n());
    let mut acc = e.m.clone();
    let mut k = 1;
    while acc != one {
        acc = acc.mul(&e.m)?;
        k += 1;
    }
    Ok(k)
}

/// The scalar `(m mod p)·I` of `ring`.
pub fn multiplication_endo(ring: &KernelRing, m: i64) -> KernelElement<'_> {
    ring.multiplication_endo(m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub size: u64,
    pub is_commutative: bool,
    pub is_integral_domain: bool,
    pub is_field: bool,
    pub characteristic: u64,
    pub prime_field_size: u64,
    pub unit_count: u64,
    /// Nonzero `a`, `b` with `ab = 0`.
    pub zero_divisor: Option<(Endo, Endo)>,
    /// Basis elements that do not commute.
    pub non_commuting: Option<(usize, usize)>,
}

/// Exhaustive classification over all ring elements.
pub fn classify(ring: &KernelRing) -> Classification {
    let mut non_commuting = None;
    'outer: for (i, a) in ring.basis().iter().enumerate() {
        for (j, b) in ring.basis().iter().enumerate().skip(i + 1) {
            if a.mul(b).expect("same shape") != b.mul(a).expect("same shape") {
                non_commuting = Some((i, j));
                break 'outer;
            }
        }
    }
    let mut unit_count = 0;
    let mut zero_divisor = None;
    for e in ring.elements() {
        if e.is_zero() {
            continue;
        }
        let l = ring.left_mult(e.matrix());
        if l.is_injective() {
            unit_count += 1;
        } else if zero_divisor.is_none() {
            let c = GroupElement::from_reduced(l.kernel_basis()[0].coords().to_vec());
            zero_divisor = Some((e.matrix().clone(), ring.from_coords(&c).matrix().clone()));
        }
    }
    let one = ring.one();
    let mut characteristic = 1;
    let mut acc = one.clone();
    while !acc.is_zero() {
        acc = acc.add(&one).expect("same ring");
        characteristic += 1;
    }
    let size = ring.size();
    let is_commutative = non_commuting.is_none();
    let is_integral_domain = is_commutative && zero_divisor.is_none() && size > 1;
    Classification {
        size,
        is_commutative,
        is_integral_domain,
        is_field: is_integral_domain && unit_count == size - 1,
        characteristic,
        // the span of 1 has one element per residue of the characteristic
        prime_field_size: characteristic,
        unit_count,
        zero_divisor,
        non_commuting,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectivityReport {
    pub checked: u64,
    /// Nonzero elements with a nontrivial kernel, with a kernel basis.
    pub failures: Vec<(Endo, Vec<GroupElement>)>,
}

impl InjectivityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Rank check of every nonzero element.
pub fn injectivity_check(ring: &KernelRing) -> InjectivityReport {
    let mut checked = 0;
    let mut failures = Vec::new();
    for e in ring.elements().filter(|e| !e.is_zero()) {
        checked += 1;
        if !e.matrix().is_injective() {
            failures.push((e.matrix().clone(), e.matrix().kernel_basis()));
        }
    }
    InjectivityReport { checked, failures }
}

#[cfg(test)]
mod tests;
