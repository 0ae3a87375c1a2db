//! Kantor families `(A, F, F*)` in `A = F_p^n`, the four defining axioms,
//! and the standard constructions from ovals and hyperovals.

mod constructions;
pub mod plane;

pub use constructions::{build_secant2, build_secant2_from, build_t2_oval, OvalKind, OvalSpec};

use std::fmt;

use thiserror::Error;

use crate::algebra::{AlgebraError, Endo, GroupElement, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KantorError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("a Kantor family needs at least 3 members, got {0}")]
    TooFewMembers(usize),
    #[error("member {index} does not live in F_{}^{}", .expected.0, .expected.1)]
    AmbientMismatch { index: usize, expected: (u32, usize) },
    #[error("not an oval: {0}")]
    NotAnOval(String),
    #[error("not a hyperoval: {0}")]
    NotAHyperoval(String),
    #[error("q = {0} is odd; the nucleus completion needs even q")]
    OddCharacteristic(u64),
    #[error("point index {index} out of range for a {len}-point set")]
    PointIndex { index: usize, len: usize },
    #[error("there is no axiom KF{0}")]
    NoSuchAxiom(u8),
}

pub type Result<T, E = KantorError> = std::result::Result<T, E>;

/// One pair `(A_i, A_i*)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Member {
    pub a: Subspace,
    pub star: Subspace,
}

/// An indexed list of pairs of subspaces of `F_p^n`.
///
/// Only structural well-formedness is enforced here; the axioms are
/// checked by [`verify_kf`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KantorFamily {
    p: u32,
    n: usize,
    members: Vec<Member>,
}

impl KantorFamily {
    pub fn new(p: u32, n: usize, members: Vec<Member>) -> Result<Self> {
        if members.len() < 3 {
            return Err(KantorError::TooFewMembers(members.len()));
        }
        for (index, m) in members.iter().enumerate() {
            if m.a.ambient() != (p, n) || m.star.ambient() != (p, n) {
                return Err(KantorError::AmbientMismatch {
                    index,
                    expected: (p, n),
                });
            }
        }
        Ok(Self { p, n, members })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &Member {
        &self.members[i]
    }

    /// `t`, one less than the number of members.
    pub fn t(&self) -> usize {
        self.members.len() - 1
    }

    pub fn group_order(&self) -> u64 {
        (self.p as u64).pow(self.n as u32)
    }

    pub fn full(&self) -> Subspace {
        Subspace::full(self.p, self.n)
    }

    /// Replaces one member, keeping the rest. Used to build mutants.
    pub fn with_member(&self, i: usize, member: Member) -> Result<Self> {
        let mut members = self.members.clone();
        members[i] = member;
        Self::new(self.p, self.n, members)
    }
}

/// One of the subgroups compared in the partition axiom for a fixed `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kf4Part {
    /// `A_L*`
    Star,
    /// `A_L + A_M`
    Join(usize),
}

impl fmt::Display for Kf4Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kf4Part::Star => write!(f, "star"),
            Kf4Part::Join(m) => write!(f, "join{m}"),
        }
    }
}

/// A concrete violation of one axiom. [`Violation::recheck`] confirms it
/// against a family using only membership tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `g ∈ A_i` but `g ∉ A_i*`.
    Kf1NotContained { i: usize, g: GroupElement },
    /// `A_i = A_i*`.
    Kf1Equal { i: usize },
    /// `g ∉ A_i + A_j*` for `i ≠ j`.
    Kf2 { i: usize, j: usize, g: GroupElement },
    /// `0 ≠ g ∈ (A_i + A_j) ∩ A_k`.
    Kf3 { i: usize, j: usize, k: usize, g: GroupElement },
    /// The coset `g + A_l ≠ A_l` lies in two of the partition parts.
    Kf4Overlap {
        l: usize,
        first: Kf4Part,
        second: Kf4Part,
        g: GroupElement,
    },
    /// The coset `g + A_l` lies in none of the parts.
    Kf4Uncovered { l: usize, g: GroupElement },
}

impl Violation {
    pub fn axiom(&self) -> u8 {
        match self {
            Violation::Kf1NotContained { .. } | Violation::Kf1Equal { .. } => 1,
            Violation::Kf2 { .. } => 2,
            Violation::Kf3 { .. } => 3,
            Violation::Kf4Overlap { .. } | Violation::Kf4Uncovered { .. } => 4,
        }
    }

    pub fn recheck(&self, fam: &KantorFamily) -> bool {
        let m = fam.members();
        let t1 = m.len();
        let join_has = |a: &Subspace, b: &Subspace, g: &GroupElement| {
            a.join(b).map(|s| s.contains(g)).unwrap_or(false)
        };
        let part = |l: usize, part: Kf4Part| -> Option<Subspace> {
            let base = &m[l].a;
            match part {
                Kf4Part::Star => base.join(&m[l].star).ok(),
                Kf4Part::Join(x) if x < t1 && x != l => base.join(&m[x].a).ok(),
                Kf4Part::Join(_) => None,
            }
        };
        match self {
            Violation::Kf1NotContained { i, g } => {
                *i < t1 && m[*i].a.contains(g) && !m[*i].star.contains(g)
            }
            Violation::Kf1Equal { i } => *i < t1 && m[*i].a == m[*i].star,
            Violation::Kf2 { i, j, g } => {
                *i < t1 && *j < t1 && i != j && !join_has(&m[*i].a, &m[*j].star, g)
            }
            Violation::Kf3 { i, j, k, g } => {
                let idx = [*i, *j, *k];
                idx.iter().all(|&x| x < t1)
                    && i != j
                    && j != k
                    && i != k
                    && !g.is_zero()
                    && m[*k].a.contains(g)
                    && join_has(&m[*i].a, &m[*j].a, g)
            }
            Violation::Kf4Overlap { l, first, second, g } => {
                if *l >= t1 || first == second || m[*l].a.contains(g) {
                    return false;
                }
                match (part(*l, *first), part(*l, *second)) {
                    (Some(x), Some(y)) => x.contains(g) && y.contains(g),
                    _ => false,
                }
            }
            Violation::Kf4Uncovered { l, g } => {
                if *l >= t1 || m[*l].a.contains(g) {
                    return false;
                }
                let mut parts = vec![Kf4Part::Star];
                parts.extend((0..t1).filter(|x| x != l).map(Kf4Part::Join));
                parts
                    .into_iter()
                    .all(|pt| part(*l, pt).map_or(false, |s| !s.contains(g)))
            }
        }
    }

    /// Space-separated witness tokens for reports.
    pub fn tokens(&self) -> String {
        match self {
            Violation::Kf1NotContained { i, g } => format!("i={i} g={}", g.token()),
            Violation::Kf1Equal { i } => format!("i={i} equal"),
            Violation::Kf2 { i, j, g } => format!("i={i} j={j} g={}", g.token()),
            Violation::Kf3 { i, j, k, g } => format!("i={i} j={j} k={k} g={}", g.token()),
            Violation::Kf4Overlap { l, first, second, g } => {
                format!("l={l} parts={first},{second} g={}", g.token())
            }
            Violation::Kf4Uncovered { l, g } => format!("l={l} uncovered g={}", g.token()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomVerdict {
    Pass,
    Fail(Violation),
}

impl AxiomVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, AxiomVerdict::Pass)
    }

    pub fn violation(&self) -> Option<&Violation> {
        match self {
            AxiomVerdict::Pass => None,
            AxiomVerdict::Fail(v) => Some(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KfReport {
    pub kf1: AxiomVerdict,
    pub kf2: AxiomVerdict,
    pub kf3: AxiomVerdict,
    pub kf4: AxiomVerdict,
    /// `|A_0|`
    pub s: u64,
    pub t: usize,
    /// `|A| = s²t`
    pub consistent: bool,
}

impl KfReport {
    pub fn passed(&self) -> bool {
        self.axioms().iter().all(|v| v.passed())
    }

    pub fn axioms(&self) -> [&AxiomVerdict; 4] {
        [&self.kf1, &self.kf2, &self.kf3, &self.kf4]
    }
}

fn check_kf1(fam: &KantorFamily) -> AxiomVerdict {
    for (i, m) in fam.members().iter().enumerate() {
        if let Some(g) = m.a.basis().iter().find(|b| !m.star.contains(b)) {
            return AxiomVerdict::Fail(Violation::Kf1NotContained { i, g: g.clone() });
        }
        if m.a == m.star {
            return AxiomVerdict::Fail(Violation::Kf1Equal { i });
        }
    }
    AxiomVerdict::Pass
}

fn check_kf2(fam: &KantorFamily) -> AxiomVerdict {
    let m = fam.members();
    for i in 0..m.len() {
        for j in (0..m.len()).filter(|&j| j != i) {
            let sum = m[i].a.join(&m[j].star).expect("same ambient");
            if let Some(g) = sum.non_member() {
                return AxiomVerdict::Fail(Violation::Kf2 { i, j, g });
            }
        }
    }
    AxiomVerdict::Pass
}

fn check_kf3(fam: &KantorFamily) -> AxiomVerdict {
    let m = fam.members();
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            let sum = m[i].a.join(&m[j].a).expect("same ambient");
            for k in (0..m.len()).filter(|&k| k != i && k != j) {
                let cap = sum.meet(&m[k].a).expect("same ambient");
                if let Some(g) = cap.basis().first() {
                    return AxiomVerdict::Fail(Violation::Kf3 { i, j, k, g: g.clone() });
                }
            }
        }
    }
    AxiomVerdict::Pass
}

/// For each `L`, the images of `A_L*` and of `A_L + A_M` (`M ≠ L`) in
/// `A/A_L` must meet pairwise trivially and cover the quotient.
fn check_kf4(fam: &KantorFamily) -> AxiomVerdict {
    let m = fam.members();
    let p = fam.p() as u64;
    for l in 0..m.len() {
        let base = &m[l].a;
        let mut parts: Vec<(Kf4Part, Subspace)> =
            vec![(Kf4Part::Star, base.join(&m[l].star).expect("same ambient"))];
        for x in (0..m.len()).filter(|&x| x != l) {
            parts.push((Kf4Part::Join(x), base.join(&m[x].a).expect("same ambient")));
        }
        for a in 0..parts.len() {
            for b in a + 1..parts.len() {
                let cap = parts[a].1.meet(&parts[b].1).expect("same ambient");
                if let Some(g) = cap.basis().iter().find(|g| !base.contains(g)) {
                    return AxiomVerdict::Fail(Violation::Kf4Overlap {
                        l,
                        first: parts[a].0,
                        second: parts[b].0,
                        g: g.clone(),
                    });
                }
            }
        }
        // Pairwise trivial overlaps: the union covers A/A_L iff the
        // nontrivial coset counts add up.
        let covered: u64 = parts
            .iter()
            .map(|(_, s)| p.pow((s.dim() - base.dim()) as u32) - 1)
            .sum();
        let quotient = p.pow((fam.n() - base.dim()) as u32) - 1;
        if covered != quotient {
            let g = GroupElement::all(fam.p(), fam.n())
                .find(|g| parts.iter().all(|(_, s)| !s.contains(g)))
                .expect("some coset is uncovered");
            return AxiomVerdict::Fail(Violation::Kf4Uncovered { l, g });
        }
    }
    AxiomVerdict::Pass
}

/// Checks KF1–KF4 and reports the derived parameters.
pub fn verify_kf(fam: &KantorFamily) -> KfReport {
    let s = fam.member(0).a.order();
    let t = fam.t();
    KfReport {
        kf1: check_kf1(fam),
        kf2: check_kf2(fam),
        kf3: check_kf3(fam),
        kf4: check_kf4(fam),
        s,
        t,
        consistent: fam.group_order() == s * s * t as u64,
    }
}

/// The family `(A_i M, A_i* M)`. No kernel membership check is made here;
/// see `kernel::KernelElement::image_family` for the checked form.
pub fn image_family(fam: &KantorFamily, m: &Endo) -> Result<KantorFamily> {
    let members = fam
        .members()
        .iter()
        .map(|mem| {
            Ok(Member {
                a: mem.a.image(m)?,
                star: mem.star.image(m)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    KantorFamily::new(fam.p(), fam.n(), members)
}

/// A copy of `fam` with one member replaced so that the given axiom
/// fails:
///
/// - 1: `A_0* := A_1*`
/// - 2: `A_0* := A_0 + A_1`
/// - 3: `A_2 :=` the diagonal of the bases of `A_0` and `A_1`, with `A_2*`
///   enlarged to contain it
/// - 4: `A_0* :=` the whole group
///
/// Needs at least three members with `dim A_0 = dim A_1`.
pub fn axiom_mutant(fam: &KantorFamily, axiom: u8) -> Result<KantorFamily> {
    let (m0, m1) = (fam.member(0), fam.member(1));
    let (i, member) = match axiom {
        1 => (0, Member { a: m0.a.clone(), star: m1.star.clone() }),
        2 => (0, Member { a: m0.a.clone(), star: m0.a.join(&m1.a)? }),
        3 => {
            let f = crate::algebra::PrimeField::new(fam.p())?;
            let diag: Vec<GroupElement> = m0.a.basis().iter().zip(m1.a.basis()).map(|(x, y)| x.add(y, f)).collect();
            let a = Subspace::span(fam.p(), fam.n(), &diag)?;
            (2, Member { star: fam.member(2).star.join(&a)?, a })
        }
        4 => (0, Member { a: m0.a.clone(), star: fam.full() }),
        _ => return Err(KantorError::NoSuchAxiom(axiom)),
    };
    fam.with_member(i, member)
}
