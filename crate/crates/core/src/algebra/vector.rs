use std::fmt;
use std::ops::Deref;

use super::{AlgebraError, PrimeField, Result};

/// An element of `F_p^n`, stored as residues in `[0, p)`.
///
/// Ordering is lexicographic on coordinates, which is also the order of
/// [`GroupElement::encode`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(Vec<u32>);

impl GroupElement {
    pub fn new(coords: Vec<u32>, p: u32) -> Result<Self> {
        if let Some(&value) = coords.iter().find(|&&c| c >= p) {
            return Err(AlgebraError::OutOfRange {
                value: value as u64,
                p,
            });
        }
        Ok(Self(coords))
    }

    /// Wraps coordinates that are already reduced.
    pub fn from_reduced(coords: Vec<u32>) -> Self {
        Self(coords)
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut v = vec![0; n];
        v[k] = 1;
        Self(v)
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<u32> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self, field: PrimeField) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| field.add(a, b))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self, field: PrimeField) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| field.sub(a, b))
                .collect(),
        )
    }

    pub fn neg(&self, field: PrimeField) -> Self {
        Self(self.0.iter().map(|&a| field.neg(a)).collect())
    }

    pub fn scale(&self, c: u32, field: PrimeField) -> Self {
        Self(self.0.iter().map(|&a| field.mul(a, c)).collect())
    }

    /// Base-`p` integer with the first coordinate most significant.
    pub fn encode(&self, p: u32) -> usize {
        self.0
            .iter()
            .fold(0usize, |acc, &c| acc * p as usize + c as usize)
    }

    pub fn decode(mut index: usize, p: u32, n: usize) -> Self {
        let mut coords = vec![0; n];
        for slot in coords.iter_mut().rev() {
            *slot = (index % p as usize) as u32;
            index /= p as usize;
        }
        Self(coords)
    }

    /// All `p^n` elements in lexicographic order.
    pub fn all(p: u32, n: usize) -> impl Iterator<Item = GroupElement> {
        let total = (p as usize).pow(n as u32);
        (0..total).map(move |i| GroupElement::decode(i, p, n))
    }

    /// Comma-separated coordinates, the token form used in files and reports.
    pub fn token(&self) -> String {
        self.0
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl Deref for GroupElement {
    type Target = [u32];

    fn deref(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.token())
    }
}
