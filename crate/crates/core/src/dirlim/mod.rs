//! Direct limits of a finitely generated abelian group along an injective
//! endomorphism `ζ`.
//!
//! Elements are pairs `(g, i)` with `(g, i) ~ (ζg, i + 1)`: a higher level
//! is a deeper image, and the level-`i` copy sits inside the level-`i + 1`
//! copy. Vectors are columns and `ζ` acts as `g ↦ ζg`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::is_prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DirlimError {
    #[error("matrix is not square or is empty")]
    NotSquare,
    #[error("zeta is not injective")]
    NotInjective,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("expected length {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("phi does not commute with zeta")]
    NotCommuting,
}

pub type Result<T, E = DirlimError> = std::result::Result<T, E>;

pub type Matrix = Vec<Vec<BigInt>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Base {
    /// `ℤ^rank`.
    Lattice { rank: usize },
    /// `F_p^n`.
    Elementary { p: u64, n: usize },
}

impl Base {
    pub fn rank(&self) -> usize {
        match *self {
            Base::Lattice { rank } => rank,
            Base::Elementary { n, .. } => n,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Base::Elementary { .. })
    }

    pub fn token(&self) -> String {
        match *self {
            Base::Lattice { rank: 1 } => "Z".into(),
            Base::Lattice { rank } => format!("Z^{rank}"),
            Base::Elementary { p, n } => format!("F{p}^{n}"),
        }
    }
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|r| (0..n).map(|c| BigInt::from((r == c) as i32)).collect())
        .collect()
}

pub fn from_i64(rows: &[Vec<i64>]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|c| row.iter().zip(b).map(|(x, brow)| x * &brow[c]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, v: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn mat_pow(a: &Matrix, mut e: u64) -> Matrix {
    let mut acc = identity(a.len());
    let mut base = a.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(&acc, &base);
        }
        base = mat_mul(&base, &base);
        e >>= 1;
    }
    acc
}

/// Fraction-free elimination.
pub fn det(a: &Matrix) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

pub fn adjugate(a: &Matrix) -> Matrix {
    let n = a.len();
    if n == 1 {
        return vec![vec![BigInt::one()]];
    }
    let minor = |r: usize, c: usize| -> Matrix {
        a.iter()
            .enumerate()
            .filter(|&(i, _)| i != r)
            .map(|(_, row)| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, x)| x.clone()).collect())
            .collect()
    };
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    // adj[i][j] is the (j, i) cofactor
                    let d = det(&minor(j, i));
                    if (i + j) % 2 == 0 {
                        d
                    } else {
                        -d
                    }
                })
                .collect()
        })
        .collect()
}

/// `h` with `a h = g` over `ℤ`, if one exists; `a` nonsingular.
pub fn solve_integral(a: &Matrix, g: &[BigInt]) -> Option<Vec<BigInt>> {
    let d = det(a);
    let num = mat_vec(&adjugate(a), g);
    num.iter().all(|x| x.is_multiple_of(&d)).then(|| num.iter().map(|x| x / &d).collect())
}

/// `h` with `a h = g` over `F_p`, `a` invertible mod `p`.
fn solve_mod(a: &Matrix, g: &[BigInt], p: &BigInt) -> Option<Vec<BigInt>> {
    let d = det(a).mod_floor(p);
    if d.is_zero() {
        return None;
    }
    let d_inv = d.modpow(&(p - 2u32), p);
    let num = mat_vec(&adjugate(a), g);
    Some(num.iter().map(|x| (x * &d_inv).mod_floor(p)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedSystem {
    base: Base,
    zeta: Matrix,
    det: BigInt,
}

impl DirectedSystem {
    pub fn lattice(zeta: Matrix) -> Result<Self> {
        let rank = square(&zeta)?;
        let d = det(&zeta);
        if d.is_zero() {
            return Err(DirlimError::NotInjective);
        }
        Ok(Self {
            base: Base::Lattice { rank },
            zeta,
            det: d,
        })
    }

    pub fn elementary(p: u64, zeta: Matrix) -> Result<Self> {
        if !is_prime(p) {
            return Err(DirlimError::NotPrime(p));
        }
        let n = square(&zeta)?;
        let pb = BigInt::from(p);
        let zeta: Matrix = zeta.iter().map(|r| r.iter().map(|x| x.mod_floor(&pb)).collect()).collect();
        let d = det(&zeta).mod_floor(&pb);
        if d.is_zero() {
            return Err(DirlimError::NotInjective);
        }
        Ok(Self {
            base: Base::Elementary { p, n },
            zeta,
            det: d,
        })
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn zeta(&self) -> &Matrix {
        &self.zeta
    }

    /// Over `ℤ`, the integer determinant; over `F_p`, its residue.
    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn rank(&self) -> usize {
        self.base.rank()
    }

    /// `ζ` is bijective: finite base, or `|det| = 1`.
    pub fn is_trivializing(&self) -> bool {
        self.base.is_finite() || self.det.abs().is_one()
    }

    fn modulus(&self) -> Option<BigInt> {
        match self.base {
            Base::Elementary { p, .. } => Some(BigInt::from(p)),
            Base::Lattice { .. } => None,
        }
    }

    fn reduce(&self, v: Vec<BigInt>) -> Vec<BigInt> {
        match self.modulus() {
            Some(p) => v.iter().map(|x| x.mod_floor(&p)).collect(),
            None => v,
        }
    }

    fn reduce_matrix(&self, m: Matrix) -> Matrix {
        match self.modulus() {
            Some(p) => m.iter().map(|r| r.iter().map(|x| x.mod_floor(&p)).collect()).collect(),
            None => m,
        }
    }

    /// `ζ^k`.
    pub fn zeta_pow(&self, k: u64) -> Matrix {
        // reduce per step so entries stay small over F_p
        let mut acc = identity(self.rank());
        for _ in 0..k {
            acc = self.reduce_matrix(mat_mul(&self.zeta, &acc));
        }
        acc
    }

    pub fn apply(&self, m: &Matrix, g: &[BigInt]) -> Vec<BigInt> {
        self.reduce(mat_vec(m, g))
    }

    pub fn element(&self, g: Vec<BigInt>, level: i64) -> Result<ColimitElement> {
        self.check(&g)?;
        Ok(ColimitElement { g: self.reduce(g), level })
    }

    pub fn element_i64(&self, g: &[i64], level: i64) -> Result<ColimitElement> {
        self.element(g.iter().map(|&x| BigInt::from(x)).collect(), level)
    }

    pub fn zero(&self) -> ColimitElement {
        ColimitElement {
            g: vec![BigInt::zero(); self.rank()],
            level: 0,
        }
    }

    fn check(&self, g: &[BigInt]) -> Result<()> {
        if g.len() == self.rank() {
            Ok(())
        } else {
            Err(DirlimError::Dimension {
                expected: self.rank(),
                got: g.len(),
            })
        }
    }

    /// The representative of `e` at level `j ≥ e.level`.
    fn lift(&self, e: &ColimitElement, j: i64) -> Vec<BigInt> {
        debug_assert!(j >= e.level);
        self.apply(&self.zeta_pow((j - e.level) as u64), &e.g)
    }

    /// The representative of `e` at level `j`, if `e` lies in that copy.
    pub fn at_level(&self, e: &ColimitElement, j: i64) -> Result<Option<Vec<BigInt>>> {
        self.check(&e.g)?;
        if j >= e.level {
            return Ok(Some(self.lift(e, j)));
        }
        let z = self.zeta_pow((e.level - j) as u64);
        Ok(match self.modulus() {
            Some(p) => solve_mod(&z, &e.g, &p),
            None => solve_integral(&z, &e.g),
        })
    }

    pub fn equal(&self, a: &ColimitElement, b: &ColimitElement) -> Result<bool> {
        self.check(&a.g)?;
        self.check(&b.g)?;
        let top = a.level.max(b.level);
        Ok(self.lift(a, top) == self.lift(b, top))
    }

    pub fn add(&self, a: &ColimitElement, b: &ColimitElement) -> Result<ColimitElement> {
        self.check(&a.g)?;
        self.check(&b.g)?;
        let top = a.level.max(b.level);
        let g = self.lift(a, top).iter().zip(self.lift(b, top)).map(|(x, y)| x + y).collect();
        Ok(ColimitElement { g: self.reduce(g), level: top })
    }

    pub fn neg(&self, a: &ColimitElement) -> ColimitElement {
        ColimitElement {
            g: self.reduce(a.g.iter().map(|x| -x).collect()),
            level: a.level,
        }
    }

    /// `α̃(g, i) = (ζg, i)`.
    pub fn alpha_tilde(&self, a: &ColimitElement) -> ColimitElement {
        ColimitElement {
            g: self.apply(&self.zeta, &a.g),
            level: a.level,
        }
    }

    /// `α̃⁻¹(g, i) = (g, i + 1)`.
    pub fn alpha_tilde_inv(&self, a: &ColimitElement) -> ColimitElement {
        ColimitElement {
            g: a.g.clone(),
            level: a.level + 1,
        }
    }

    /// The stable extension of a commuting `φ`: `(g, i) ↦ (φg, i)`.
    pub fn extend(&self, phi: &Matrix, a: &ColimitElement) -> ColimitElement {
        ColimitElement {
            g: self.apply(phi, &a.g),
            level: a.level,
        }
    }

    pub fn random_element(&self, rng: &mut impl Rng, levels: i64, range: i64) -> ColimitElement {
        let g = (0..self.rank())
            .map(|_| BigInt::from(rng.gen_range(-range..=range)))
            .collect();
        ColimitElement {
            g: self.reduce(g),
            level: rng.gen_range(-levels..=levels),
        }
    }
}

fn square(m: &Matrix) -> Result<usize> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(DirlimError::NotSquare);
    }
    Ok(n)
}

/// `(g, level)`; compare with [`DirectedSystem::equal`], not `==`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColimitElement {
    pub g: Vec<BigInt>,
    pub level: i64,
}

impl ColimitElement {
    pub fn token(&self) -> String {
        let coords: Vec<String> = self.g.iter().map(BigInt::to_string).collect();
        format!("({};{})", coords.join(","), self.level)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NonStrictReason {
    FiniteBase,
    Unimodular,
}

impl NonStrictReason {
    pub fn token(&self) -> &'static str {
        match self {
            NonStrictReason::FiniteBase => "finite-base",
            NonStrictReason::Unimodular => "unimodular",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Strictness {
    /// `witnesses[j - 1]` lies at level `j` but not at level `j - 1`.
    Strict { witnesses: Vec<ColimitElement> },
    /// Every generator at each level `1..=depth` already lies at level 0.
    NonStrict { reason: NonStrictReason, collapse_verified: bool },
}

impl Strictness {
    pub fn is_strict(&self) -> bool {
        matches!(self, Strictness::Strict { .. })
    }
}

/// Whether the chain of level copies grows at each of the first `depth`
/// steps.
pub fn strictness_test(sys: &DirectedSystem, depth: u32) -> Strictness {
    let n = sys.rank();
    let unit = |k: usize| -> Vec<BigInt> { (0..n).map(|i| BigInt::from((i == k) as i32)).collect() };
    if sys.is_trivializing() {
        let reason = if sys.base.is_finite() {
            NonStrictReason::FiniteBase
        } else {
            NonStrictReason::Unimodular
        };
        let collapse_verified = (1..=depth as i64).all(|j| {
            (0..n).all(|k| {
                let e = ColimitElement { g: unit(k), level: j };
                matches!(sys.at_level(&e, 0), Ok(Some(_)))
            })
        });
        return Strictness::NonStrict { reason, collapse_verified };
    }
    // a proper image misses some standard basis vector
    let k = (0..n)
        .find(|&k| solve_integral(&sys.zeta, &unit(k)).is_none())
        .expect("|det| ≥ 2 so ζ is not onto");
    let witnesses = (1..=depth as i64)
        .map(|j| ColimitElement { g: unit(k), level: j })
        .collect();
    Strictness::Strict { witnesses }
}

/// `(g, j)` does not lie in the level `j - 1` copy.
pub fn recheck_strict_witness(sys: &DirectedSystem, w: &ColimitElement) -> bool {
    matches!(sys.at_level(w, w.level - 1), Ok(None))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareReport {
    pub levels: u32,
    pub checks: usize,
    /// `(level, g)` where the square fails.
    pub failure: Option<(u32, Vec<BigInt>)>,
}

impl SquareReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// For each level `0..=depth` and each standard basis vector and their
/// sum, `ζ^j φ g = φ ζ^j g`, and the extension `φ̃` respects the
/// identification `(g, j) ~ (ζg, j + 1)`.
pub fn verify_commuting_square(sys: &DirectedSystem, phi: &Matrix, depth: u32) -> Result<SquareReport> {
    let n = sys.rank();
    if phi.len() != n || phi.iter().any(|r| r.len() != n) {
        return Err(DirlimError::Dimension {
            expected: n,
            got: phi.len(),
        });
    }
    let phi = sys.reduce_matrix(phi.clone());
    if sys.reduce_matrix(mat_mul(&phi, &sys.zeta)) != sys.reduce_matrix(mat_mul(&sys.zeta, &phi)) {
        return Err(DirlimError::NotCommuting);
    }
    let mut samples: Vec<Vec<BigInt>> = (0..n)
        .map(|k| (0..n).map(|i| BigInt::from((i == k) as i32)).collect())
        .collect();
    samples.push(vec![BigInt::one(); n]);
    let mut checks = 0;
    for j in 0..=depth {
        let zj = sys.zeta_pow(j as u64);
        for g in &samples {
            checks += 1;
            let lhs = sys.apply(&zj, &sys.apply(&phi, g));
            let rhs = sys.apply(&phi, &sys.apply(&zj, g));
            let e = ColimitElement { g: g.clone(), level: j as i64 };
            let moved = ColimitElement { g: sys.apply(&zj, g), level: 2 * j as i64 };
            let coherent = sys.equal(&sys.extend(&phi, &e), &sys.extend(&phi, &moved))?;
            if lhs != rhs || !coherent {
                return Ok(SquareReport {
                    levels: depth,
                    checks,
                    failure: Some((j, g.clone())),
                });
            }
        }
    }
    Ok(SquareReport {
        levels: depth,
        checks,
        failure: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub samples: usize,
    /// Name of the first failing law, with the offending elements.
    pub failure: Option<(String, Vec<ColimitElement>)>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

const LEVELS: i64 = 4;
const RANGE: i64 = 50;

fn run_suite(
    sys: &DirectedSystem,
    samples: usize,
    seed: u64,
    draws: usize,
    law: impl Fn(&[ColimitElement]) -> Result<Option<&'static str>>,
) -> Result<SuiteReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let es: Vec<ColimitElement> = (0..draws).map(|_| sys.random_element(&mut rng, LEVELS, RANGE)).collect();
        if let Some(name) = law(&es)? {
            return Ok(SuiteReport {
                samples,
                failure: Some((name.to_string(), es)),
            });
        }
    }
    Ok(SuiteReport { samples, failure: None })
}

/// Abelian group laws on random triples.
pub fn group_law_suite(sys: &DirectedSystem, samples: usize, seed: u64) -> Result<SuiteReport> {
    run_suite(sys, samples, seed, 3, |es| {
        let (a, b, c) = (&es[0], &es[1], &es[2]);
        let zero = sys.zero();
        let checks = [
            ("associativity", sys.equal(&sys.add(&sys.add(a, b)?, c)?, &sys.add(a, &sys.add(b, c)?)?)?),
            ("commutativity", sys.equal(&sys.add(a, b)?, &sys.add(b, a)?)?),
            ("identity", sys.equal(&sys.add(a, &zero)?, a)?),
            ("inverse", sys.equal(&sys.add(a, &sys.neg(a))?, &zero)?),
            ("reflexivity", sys.equal(a, a)?),
        ];
        Ok(checks.iter().find(|(_, ok)| !ok).map(|(name, _)| *name))
    })
}

/// `α̃` is a homomorphism with two-sided inverse and restricts to `ζ` on
/// each copy.
pub fn automorphism_suite(sys: &DirectedSystem, samples: usize, seed: u64) -> Result<SuiteReport> {
    run_suite(sys, samples, seed, 2, |es| {
        let (a, b) = (&es[0], &es[1]);
        let (at, inv) = (|e| sys.alpha_tilde(e), |e| sys.alpha_tilde_inv(e));
        let checks = [
            ("homomorphism", sys.equal(&at(&sys.add(a, b)?), &sys.add(&at(a), &at(b))?)?),
            ("inverse-homomorphism", sys.equal(&inv(&sys.add(a, b)?), &sys.add(&inv(a), &inv(b))?)?),
            ("right-inverse", sys.equal(&at(&inv(a)), a)?),
            ("left-inverse", sys.equal(&inv(&at(a)), a)?),
            ("well-defined", sys.equal(&at(a), &at(&sys.alpha_tilde_inv(&sys.alpha_tilde(a))))?),
            ("restricts-to-zeta", at(a).g == sys.apply(&sys.zeta, &a.g) && at(a).level == a.level),
        ];
        Ok(checks.iter().find(|(_, ok)| !ok).map(|(name, _)| *name))
    })
}

/// The extension of a commuting `φ` is a well-defined endomorphism of the
/// colimit commuting with `α̃`.
pub fn commuting_square_suite(sys: &DirectedSystem, phi: &Matrix, samples: usize, seed: u64) -> Result<SuiteReport> {
    let phi = sys.reduce_matrix(phi.clone());
    if sys.reduce_matrix(mat_mul(&phi, &sys.zeta)) != sys.reduce_matrix(mat_mul(&sys.zeta, &phi)) {
        return Err(DirlimError::NotCommuting);
    }
    run_suite(sys, samples, seed, 2, |es| {
        let (a, b) = (&es[0], &es[1]);
        let ext = |e: &ColimitElement| sys.extend(&phi, e);
        let lifted = ColimitElement {
            g: sys.apply(&sys.zeta, &a.g),
            level: a.level + 1,
        };
        let checks = [
            ("well-defined", sys.equal(&ext(a), &ext(&lifted))?),
            ("homomorphism", sys.equal(&ext(&sys.add(a, b)?), &sys.add(&ext(a), &ext(b))?)?),
            ("commutes-with-alpha", sys.equal(&ext(&sys.alpha_tilde(a)), &sys.alpha_tilde(&ext(a)))?),
        ];
        Ok(checks.iter().find(|(_, ok)| !ok).map(|(name, _)| *name))
    })
}

/// `Σ c_k ζ^k`.
pub fn zeta_polynomial(sys: &DirectedSystem, coeffs: &[i64]) -> Matrix {
    let n = sys.rank();
    let mut acc = vec![vec![BigInt::zero(); n]; n];
    for &c in coeffs.iter().rev() {
        acc = mat_mul(&acc, &sys.zeta);
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] += c;
        }
    }
    sys.reduce_matrix(acc)
}

#[cfg(test)]
mod tests;
