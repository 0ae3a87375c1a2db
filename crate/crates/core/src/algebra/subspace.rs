use std::fmt;

use super::matrix::rref_rows;
use super::{AlgebraError, Endo, GroupElement, PrimeField, Result};

/// A subspace of `F_p^n` held by its reduced row-echelon basis.
///
/// The basis is canonical, so structural equality is subspace equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    p: u32,
    n: usize,
    basis: Vec<GroupElement>,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Canonical span of `rows`.
    pub fn span(p: u32, n: usize, rows: &[GroupElement]) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let mut raw = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != n {
                return Err(AlgebraError::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            if let Some(&value) = row.iter().find(|&&c| c >= p) {
                return Err(AlgebraError::OutOfRange {
                    value: value as u64,
                    p,
                });
            }
            raw.push(row.coords().to_vec());
        }
        Ok(Self::from_raw(field, n, raw))
    }

    fn from_raw(field: PrimeField, n: usize, mut raw: Vec<Vec<u32>>) -> Self {
        let pivots = rref_rows(field, &mut raw, n);
        Self {
            p: field.p(),
            n,
            basis: raw.into_iter().map(GroupElement::from_reduced).collect(),
            pivots,
        }
    }

    pub fn zero(p: u32, n: usize) -> Self {
        Self {
            p,
            n,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(p: u32, n: usize) -> Self {
        Self {
            p,
            n,
            basis: (0..n).map(|k| GroupElement::unit(n, k)).collect(),
            pivots: (0..n).collect(),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ambient(&self) -> (u32, usize) {
        (self.p, self.n)
    }

    pub fn basis(&self) -> &[GroupElement] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Number of elements, `p^dim`.
    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.dim() as u32)
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.n
    }

    fn field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("validated at construction")
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient() != other.ambient() {
            return Err(AlgebraError::AmbientMismatch {
                left: self.ambient(),
                right: other.ambient(),
            });
        }
        Ok(())
    }

    /// Clears the pivot columns of `v`. The result is zero iff `v` lies in
    /// the subspace, and is the lexicographically least element of the
    /// coset `v + U` in general.
    pub fn reduce(&self, v: &GroupElement) -> GroupElement {
        let f = self.field();
        let mut out = v.coords().to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = out[pc];
            if c != 0 {
                for (o, &r) in out.iter_mut().zip(row.iter()) {
                    *o = f.sub(*o, f.mul(c, r));
                }
            }
        }
        GroupElement::from_reduced(out)
    }

    pub fn contains(&self, v: &GroupElement) -> bool {
        v.len() == self.n && self.reduce(v).is_zero()
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient() == other.ambient() && self.basis.iter().all(|b| other.contains(b))
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let raw = self
            .basis
            .iter()
            .chain(&other.basis)
            .map(|g| g.coords().to_vec())
            .collect();
        Ok(Self::from_raw(self.field(), self.n, raw))
    }

    /// Intersection via Zassenhaus: reduce `[u | u]` stacked on `[v | 0]`.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let n = self.n;
        let mut raw: Vec<Vec<u32>> = Vec::with_capacity(self.dim() + other.dim());
        for u in &self.basis {
            let mut row = u.coords().to_vec();
            row.extend_from_slice(u.coords());
            raw.push(row);
        }
        for v in &other.basis {
            let mut row = v.coords().to_vec();
            row.extend(std::iter::repeat(0).take(n));
            raw.push(row);
        }
        let field = self.field();
        rref_rows(field, &mut raw, 2 * n);
        let meet_rows = raw
            .into_iter()
            .filter(|r| r[..n].iter().all(|&x| x == 0))
            .map(|r| r[n..].to_vec())
            .collect();
        Ok(Self::from_raw(field, n, meet_rows))
    }

    /// `{uM : u ∈ U}` in canonical form.
    pub fn image(&self, m: &Endo) -> Result<Self> {
        if m.n() != self.n || m.p() != self.p {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.n,
                got: m.n(),
            });
        }
        let raw = self
            .basis
            .iter()
            .map(|b| m.apply(b).map(GroupElement::into_coords))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_raw(self.field(), self.n, raw))
    }

    /// `{u + g : u ∈ U}` is the same subspace for `g ∈ U`; this returns the
    /// canonical representative of `g + U`.
    pub fn coset_rep(&self, g: &GroupElement) -> GroupElement {
        self.reduce(g)
    }

    /// All elements, ordered by their coefficient tuples over the basis.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let field = self.field();
        let count = self.order() as usize;
        (0..count).map(move |i| {
            let coeffs = GroupElement::decode(i, self.p, self.dim());
            self.combination(field, coeffs.coords())
        })
    }

    fn combination(&self, field: PrimeField, coeffs: &[u32]) -> GroupElement {
        let mut out = vec![0u32; self.n];
        for (row, &c) in self.basis.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for (o, &r) in out.iter_mut().zip(row.iter()) {
                *o = field.add(*o, field.mul(c, r));
            }
        }
        GroupElement::from_reduced(out)
    }

    /// Canonical representatives of all cosets of `self` in `F_p^n`,
    /// in lexicographic order. These are exactly the vectors vanishing on
    /// the pivot columns.
    pub fn coset_reps(&self) -> Vec<GroupElement> {
        let free: Vec<usize> = (0..self.n).filter(|c| !self.pivots.contains(c)).collect();
        GroupElement::all(self.p, free.len())
            .map(|vals| {
                let mut v = vec![0; self.n];
                for (&c, &x) in free.iter().zip(vals.iter()) {
                    v[c] = x;
                }
                GroupElement::from_reduced(v)
            })
            .collect()
    }

    /// Returns a vector of `F_p^n` outside the subspace, if any.
    pub fn non_member(&self) -> Option<GroupElement> {
        (0..self.n)
            .map(|k| GroupElement::unit(self.n, k))
            .find(|e| !self.contains(e))
    }

    /// Basis tokens separated by `;`, or `0` for the zero subspace.
    pub fn token(&self) -> String {
        if self.basis.is_empty() {
            return "0".into();
        }
        self.basis.iter().map(GroupElement::token).collect::<Vec<_>>().join(";")
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.token())
    }
}

/// Canonical reduced row-echelon basis of the span of `rows`.
pub fn rref(p: u32, n: usize, rows: &[GroupElement]) -> Result<Subspace> {
    Subspace::span(p, n, rows)
}

pub fn subspace_meet_join(u: &Subspace, v: &Subspace) -> Result<(Subspace, Subspace)> {
    Ok((u.meet(v)?, u.join(v)?))
}

pub fn apply_endo(m: &Endo, u: &Subspace) -> Result<Subspace> {
    u.image(m)
}
