use std::fmt;

use super::{AlgebraError, GroupElement, PrimeField, Result};

/// In-place reduced row-echelon form; returns the pivot columns.
/// Zero rows are removed.
pub(crate) fn rref_rows(field: PrimeField, rows: &mut Vec<Vec<u32>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else {
            continue;
        };
        rows.swap(r, k);
        let inv = field.inv(rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for k in 0..rows.len() {
            if k != r && rows[k][c] != 0 {
                let f = rows[k][c];
                for j in c..ncols {
                    let v = field.mul(f, rows[r][j]);
                    rows[k][j] = field.sub(rows[k][j], v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x ∈ F_p^ncols : row·x = 0 for every row}`.
///
/// The basis is the standard one read off the reduced constraint matrix:
/// one vector per free column, in increasing column order.
pub fn solve_homogeneous(field: PrimeField, ncols: usize, rows: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut reduced: Vec<Vec<u32>> = rows.to_vec();
    let pivots = rref_rows(field, &mut reduced, ncols);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut x = vec![0; ncols];
        x[free] = 1;
        for (row, &pc) in reduced.iter().zip(&pivots) {
            x[pc] = field.neg(row[free]);
        }
        basis.push(x);
    }
    basis
}

/// An endomorphism of `F_p^n`: an `n×n` matrix acting on row vectors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endo {
    p: u32,
    n: usize,
    rows: Vec<Vec<u32>>,
}

impl Endo {
    pub fn from_rows(p: u32, rows: Vec<Vec<u32>>) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let n = rows.len();
        for row in &rows {
            if row.len() != n {
                return Err(AlgebraError::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
            if let Some(&value) = row.iter().find(|&&x| x >= field.p()) {
                return Err(AlgebraError::OutOfRange {
                    value: value as u64,
                    p,
                });
            }
        }
        Ok(Self { p, n, rows })
    }

    /// Builds from a flat row-major entry list of length `n²`.
    pub fn from_flat(p: u32, n: usize, entries: &[u32]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(AlgebraError::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        Self::from_rows(p, entries.chunks(n.max(1)).take(n).map(<[u32]>::to_vec).collect())
    }

    pub fn zero(p: u32, n: usize) -> Self {
        Self {
            p,
            n,
            rows: vec![vec![0; n]; n],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        Self::scalar(p, n, 1)
    }

    /// `(m mod p)·I`.
    pub fn scalar(p: u32, n: usize, m: i64) -> Self {
        let c = m.rem_euclid(p as i64) as u32;
        let mut e = Self::zero(p, n);
        for i in 0..n {
            e.rows[i][i] = c;
        }
        e
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn entry(&self, r: usize, c: usize) -> u32 {
        self.rows[r][c]
    }

    pub fn flat(&self) -> Vec<u32> {
        self.rows.iter().flatten().copied().collect()
    }

    fn field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("validated at construction")
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.p != other.p || self.n != other.n {
            return Err(AlgebraError::AmbientMismatch {
                left: (self.p, self.n),
                right: (other.p, other.n),
            });
        }
        Ok(())
    }

    /// `v ↦ vM`.
    pub fn apply(&self, v: &GroupElement) -> Result<GroupElement> {
        if v.len() != self.n {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        let f = self.field();
        let mut out = vec![0u32; self.n];
        for (r, &vr) in v.iter().enumerate() {
            if vr == 0 {
                continue;
            }
            for (c, slot) in out.iter_mut().enumerate() {
                *slot = f.add(*slot, f.mul(vr, self.rows[r][c]));
            }
        }
        Ok(GroupElement::from_reduced(out))
    }

    /// Matrix product `self · other`, i.e. apply `self` first.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let f = self.field();
        let mut rows = vec![vec![0u32; self.n]; self.n];
        for i in 0..self.n {
            for k in 0..self.n {
                let a = self.rows[i][k];
                if a == 0 {
                    continue;
                }
                for j in 0..self.n {
                    rows[i][j] = f.add(rows[i][j], f.mul(a, other.rows[k][j]));
                }
            }
        }
        Ok(Self { p: self.p, n: self.n, rows })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let f = self.field();
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect())
            .collect();
        Ok(Self { p: self.p, n: self.n, rows })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(self.p - 1)
    }

    pub fn scale(&self, c: u32) -> Self {
        let f = self.field();
        let rows = self
            .rows
            .iter()
            .map(|row| row.iter().map(|&x| f.mul(x, c)).collect())
            .collect();
        Self { p: self.p, n: self.n, rows }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.p, self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same shape");
            }
            base = base.mul(&base).expect("same shape");
            e >>= 1;
        }
        acc
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.n)
            .map(|c| (0..self.n).map(|r| self.rows[r][c]).collect())
            .collect();
        Self { p: self.p, n: self.n, rows }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.p, self.n)
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        rref_rows(self.field(), &mut rows, self.n).len()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.n
    }

    /// Basis of `{v : vM = 0}`.
    pub fn kernel_basis(&self) -> Vec<GroupElement> {
        let columns = self.transpose().rows;
        solve_homogeneous(self.field(), self.n, &columns)
            .into_iter()
            .map(GroupElement::from_reduced)
            .collect()
    }

    pub fn inverse(&self) -> Option<Self> {
        let f = self.field();
        let n = self.n;
        let mut aug: Vec<Vec<u32>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..n).map(|j| u32::from(i == j)));
                r
            })
            .collect();
        let pivots = rref_rows(f, &mut aug, 2 * n);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let rows = aug.into_iter().map(|r| r[n..].to_vec()).collect();
        Some(Self { p: self.p, n, rows })
    }

    /// Semicolon-separated rows of comma-separated entries.
    pub fn token(&self) -> String {
        self.rows
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Debug for Endo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Endo[F_{}; {}]", self.p, self.token())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(p: u32, rows: &[&[u32]]) -> Endo {
        Endo::from_rows(p, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn row_vector_convention() {
        // (1,0)·[[0,1],[1,0]] = (0,1)
        let swap = e(2, &[&[0, 1], &[1, 0]]);
        let v = GroupElement::from_reduced(vec![1, 0]);
        assert_eq!(swap.apply(&v).unwrap().coords(), &[0, 1]);
    }

    #[test]
    fn inverse_and_rank() {
        let m = e(5, &[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        let singular = e(5, &[&[1, 2], &[2, 4]]);
        assert_eq!(singular.rank(), 1);
        assert!(singular.inverse().is_none());
        let k = singular.kernel_basis();
        assert_eq!(k.len(), 1);
        assert!(singular.apply(&k[0]).unwrap().is_zero());
    }

    #[test]
    fn homogeneous_solutions_satisfy_constraints() {
        let f = PrimeField::new(3).unwrap();
        let rows = vec![vec![1, 2, 0, 1], vec![0, 1, 1, 2]];
        let basis = solve_homogeneous(f, 4, &rows);
        assert_eq!(basis.len(), 2);
        for x in &basis {
            for r in &rows {
                let dot = r.iter().zip(x).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                assert_eq!(dot, 0);
            }
        }
    }

    #[test]
    fn scalar_reduces_negative_multipliers() {
        assert_eq!(Endo::scalar(5, 2, -1), Endo::scalar(5, 2, 4));
        assert!(Endo::scalar(3, 2, 4).is_identity());
        assert!(Endo::scalar(3, 2, 3).is_zero());
    }
}
