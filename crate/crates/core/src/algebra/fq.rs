//! Extension fields `F_q = F_p[x]/(f)` with elements encoded as
//! coefficient tuples.
//!
//! An element is stored as the integer `Σ c_i p^i` of its coefficient
//! tuple `(c_0, …, c_{d-1})`. [`FiniteField::coeffs`] and
//! [`FiniteField::from_coeffs`] convert between the two forms.
//!
//! The default modulus of each degree is the lexicographically least
//! monic irreducible, comparing coefficients from `x^{d-1}` downwards.
//! For reference:
//!
//! | field | modulus |
//! |-------|---------|
//! | F_4   | x² + x + 1 |
//! | F_8   | x³ + x + 1 |
//! | F_9   | x² + 1 |
//! | F_16  | x⁴ + x + 1 |
//! | F_25  | x² + 2 |
//! | F_27  | x³ + 2x + 1 |

use std::fmt;

use super::{is_prime, prime_power, AlgebraError, GroupElement, PrimeField, Result};

/// Parameters of `F_{p^d}`; `modulus` is monic, low-to-high, length `d + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    d: usize,
    modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn new(p: u32, d: usize, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(AlgebraError::NotPrime(p as u64));
        }
        if d == 0 {
            return Err(AlgebraError::ZeroDegree);
        }
        if modulus.len() != d + 1 || modulus[d] != 1 {
            return Err(AlgebraError::BadModulus { degree: d });
        }
        if let Some(&value) = modulus.iter().find(|&&c| c >= p) {
            return Err(AlgebraError::OutOfRange {
                value: value as u64,
                p,
            });
        }
        if !is_irreducible(p, &modulus) {
            return Err(AlgebraError::Reducible(p));
        }
        Ok(Self { p, d, modulus })
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, vec![0, 1])
    }

    pub fn with_default_modulus(p: u32, d: usize) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(AlgebraError::NotPrime(p as u64));
        }
        if d == 0 {
            return Err(AlgebraError::ZeroDegree);
        }
        Self::new(p, d, default_irreducible(p, d))
    }

    /// `F_q` with the default modulus.
    pub fn for_order(q: u64) -> Result<Self> {
        let (p, d) = prime_power(q)?;
        Self::with_default_modulus(p, d)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.d as u32)
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
}

fn poly_degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

/// Remainder of `a` modulo monic-or-not `b` (nonzero) over `F_p`.
fn poly_rem(f: PrimeField, a: &[u32], b: &[u32]) -> Vec<u32> {
    let db = poly_degree(b).expect("nonzero divisor");
    let lead_inv = f.inv(b[db]).expect("nonzero lead");
    let mut r = a.to_vec();
    while let Some(dr) = poly_degree(&r) {
        if dr < db {
            break;
        }
        let c = f.mul(r[dr], lead_inv);
        for i in 0..=db {
            let sub = f.mul(c, b[i]);
            r[dr - db + i] = f.sub(r[dr - db + i], sub);
        }
    }
    r
}

/// Trial division by every monic polynomial of degree `1..=d/2`.
pub fn is_irreducible(p: u32, poly: &[u32]) -> bool {
    let Ok(f) = PrimeField::new(p) else {
        return false;
    };
    let Some(d) = poly_degree(poly) else {
        return false;
    };
    if d == 0 {
        return false;
    }
    for k in 1..=d / 2 {
        for low in GroupElement::all(p, k) {
            let mut divisor = low.coords().to_vec();
            divisor.reverse();
            divisor.push(1);
            if poly_degree(&poly_rem(f, poly, &divisor)).is_none() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically least monic irreducible of degree `d` over `F_p`.
pub fn default_irreducible(p: u32, d: usize) -> Vec<u32> {
    // Encoding `k = Σ c_i p^i` makes `c_{d-1}` the most significant digit,
    // so increasing `k` walks the lexicographic order.
    let total = (p as u64).pow(d as u32);
    for k in 0..total {
        let mut poly = Vec::with_capacity(d + 1);
        let mut rest = k;
        for _ in 0..d {
            poly.push((rest % p as u64) as u32);
            rest /= p as u64;
        }
        poly.push(1);
        if is_irreducible(p, &poly) {
            return poly;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// An element of `F_q`, identified by its coefficient-tuple index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(pub u32);

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Arithmetic in `F_q` for a fixed [`FieldSpec`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteField {
    spec: FieldSpec,
    base: PrimeField,
    q: u32,
}

/// Arithmetic provider for `spec`.
pub fn fq_ops(spec: &FieldSpec) -> FiniteField {
    FiniteField::new(spec.clone())
}

impl FiniteField {
    pub fn new(spec: FieldSpec) -> Self {
        let base = PrimeField::new(spec.p).expect("validated spec");
        let q = spec.q() as u32;
        Self { spec, base, q }
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn prime_field(&self) -> PrimeField {
        self.base
    }

    pub fn p(&self) -> u32 {
        self.spec.p
    }

    pub fn d(&self) -> usize {
        self.spec.d
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn zero(&self) -> FqElem {
        FqElem(0)
    }

    pub fn one(&self) -> FqElem {
        FqElem(1)
    }

    /// The class of `x` modulo the field polynomial.
    pub fn x(&self) -> FqElem {
        if self.spec.d == 1 {
            FqElem(self.base.neg(self.spec.modulus[0]))
        } else {
            FqElem(self.spec.p)
        }
    }

    pub fn element(&self, index: u32) -> Result<FqElem> {
        if index >= self.q {
            return Err(AlgebraError::OutOfRange {
                value: index as u64,
                p: self.q,
            });
        }
        Ok(FqElem(index))
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.q).map(FqElem)
    }

    pub fn coeffs(&self, a: FqElem) -> Vec<u32> {
        let p = self.spec.p;
        let mut rest = a.0;
        (0..self.spec.d)
            .map(|_| {
                let c = rest % p;
                rest /= p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FqElem> {
        if coeffs.len() != self.spec.d {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.spec.d,
                got: coeffs.len(),
            });
        }
        let p = self.spec.p;
        let mut index = 0u32;
        for &c in coeffs.iter().rev() {
            if c >= p {
                return Err(AlgebraError::OutOfRange { value: c as u64, p });
            }
            index = index * p + c;
        }
        Ok(FqElem(index))
    }

    fn pack(&self, coeffs: &[u32]) -> FqElem {
        self.from_coeffs(coeffs).expect("reduced coefficients")
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        let (ca, cb) = (self.coeffs(a), self.coeffs(b));
        let sum: Vec<u32> = ca.iter().zip(&cb).map(|(&x, &y)| self.base.add(x, y)).collect();
        self.pack(&sum)
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        let c: Vec<u32> = self.coeffs(a).iter().map(|&x| self.base.neg(x)).collect();
        self.pack(&c)
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        let d = self.spec.d;
        let (ca, cb) = (self.coeffs(a), self.coeffs(b));
        let mut prod = vec![0u32; 2 * d];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = self.base.add(prod[i + j], self.base.mul(x, y));
            }
        }
        let mut r = poly_rem(self.base, &prod, &self.spec.modulus);
        r.resize(d, 0);
        self.pack(&r)
    }

    pub fn pow(&self, a: FqElem, mut e: u64) -> FqElem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a == self.zero() {
            return Err(AlgebraError::ZeroInverse);
        }
        Ok(self.pow(a, self.q as u64 - 2))
    }

    pub fn frobenius(&self, a: FqElem) -> FqElem {
        self.pow(a, self.spec.p as u64)
    }

    /// `F_p`-coordinates of a vector over `F_q`: the coefficient tuples of
    /// its entries, concatenated.
    pub fn embed(&self, v: &[FqElem]) -> GroupElement {
        GroupElement::from_reduced(v.iter().flat_map(|&a| self.coeffs(a)).collect())
    }

    /// Inverse of [`FiniteField::embed`].
    pub fn unembed(&self, g: &GroupElement) -> Result<Vec<FqElem>> {
        let d = self.spec.d;
        if g.len() % d != 0 {
            return Err(AlgebraError::DimensionMismatch {
                expected: d * (g.len() / d + 1),
                got: g.len(),
            });
        }
        g.chunks(d).map(|c| self.from_coeffs(c)).collect()
    }

    /// `F_p`-basis of the `F_q`-span of `vectors`: the vectors scaled by
    /// `1, x, …, x^{d-1}`.
    pub fn span_rows(&self, vectors: &[Vec<FqElem>]) -> Vec<GroupElement> {
        let x = self.x();
        let mut rows = Vec::with_capacity(vectors.len() * self.spec.d);
        for v in vectors {
            let mut scaled = v.clone();
            for _ in 0..self.spec.d {
                rows.push(self.embed(&scaled));
                scaled = scaled.iter().map(|&a| self.mul(a, x)).collect();
            }
        }
        rows
    }
}
