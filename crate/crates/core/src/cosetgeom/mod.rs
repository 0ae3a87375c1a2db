//! The coset geometry of a Kantor family and the translation action on it.
//!
//! Points are `Affine(g)` for `g ∈ A`, `StarCoset(i, A_i* + g)` and a
//! single `Infinity`. Lines are `Coset(i, A_i + g)` and `StarLine(i)`.
//! `Affine(g)` lies on `Coset(i, C)` iff `g ∈ C`; `StarCoset(i, D)` lies on
//! `Coset(i, C)` iff `C ⊆ D`; `StarLine(i)` carries every `StarCoset(i, ·)`
//! and `Infinity`.

mod structure;

pub use structure::{IncidenceStructure, LineLabel, PointLabel};

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::algebra::{Endo, GroupElement, PrimeField};
use crate::kantor::{verify_kf, KantorError, KantorFamily};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CosetGeomError {
    #[error(transparent)]
    Kantor(#[from] KantorError),
    #[error("family fails KF{0}; pass an explicit waiver to expand anyway")]
    Unverified(u8),
    #[error("malformed incidence structure: {0}")]
    Malformed(String),
    #[error("label {0} is not part of the coset model")]
    ForeignLabel(String),
    #[error("endomorphism does not permute the family: {0}")]
    NotFamilyPermuting(String),
}

pub type Result<T, E = CosetGeomError> = std::result::Result<T, E>;

fn field(fam: &KantorFamily) -> PrimeField {
    PrimeField::new(fam.p()).expect("family over a prime field")
}

/// Expands a family after checking KF1–KF4.
pub fn expand(fam: &KantorFamily) -> Result<IncidenceStructure> {
    let report = verify_kf(fam);
    if let Some(v) = report.axioms().iter().find_map(|a| a.violation()) {
        return Err(CosetGeomError::Unverified(v.axiom()));
    }
    Ok(expand_unverified(fam))
}

/// Expands without checking the axioms; the result need not be a GQ.
pub fn expand_unverified(fam: &KantorFamily) -> IncidenceStructure {
    let f = field(fam);
    let members = fam.members();
    let mut points: Vec<PointLabel> = GroupElement::all(fam.p(), fam.n()).map(PointLabel::Affine).collect();
    let mut star_offset = Vec::with_capacity(members.len());
    let mut star_index = HashMap::new();
    for (i, m) in members.iter().enumerate() {
        star_offset.push(points.len());
        for r in m.star.coset_reps() {
            star_index.insert((i, r.clone()), points.len());
            points.push(PointLabel::StarCoset(i, r));
        }
    }
    let infinity = points.len();
    points.push(PointLabel::Infinity);

    let mut line_labels = Vec::new();
    let mut lines = Vec::new();
    for (i, m) in members.iter().enumerate() {
        let elems: Vec<GroupElement> = m.a.elements().collect();
        for r in m.a.coset_reps() {
            let mut pts: Vec<usize> = elems.iter().map(|a| r.add(a, f).encode(fam.p())).collect();
            pts.push(star_index[&(i, m.star.reduce(&r))]);
            line_labels.push(LineLabel::Coset(i, r));
            lines.push(pts);
        }
    }
    for i in 0..members.len() {
        let end = star_offset.get(i + 1).copied().unwrap_or(infinity);
        let mut pts: Vec<usize> = (star_offset[i]..end).collect();
        pts.push(infinity);
        line_labels.push(LineLabel::StarLine(i));
        lines.push(pts);
    }
    IncidenceStructure::new(points, line_labels, lines).expect("coset model is well indexed")
}

/// A point and line permutation of a structure, `points[x]` being the
/// image of point `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collineation {
    pub points: Vec<usize>,
    pub lines: Vec<usize>,
}

impl Collineation {
    pub fn compose(&self, then: &Collineation) -> Collineation {
        Collineation {
            points: self.points.iter().map(|&x| then.points[x]).collect(),
            lines: self.lines.iter().map(|&x| then.lines[x]).collect(),
        }
    }

    /// First line whose image point set is not the point set of its image
    /// line, if any.
    pub fn broken_line(&self, geom: &IncidenceStructure) -> Option<usize> {
        (0..geom.num_lines()).find(|&j| {
            let mut img: Vec<usize> = geom.line(j).iter().map(|&x| self.points[x]).collect();
            img.sort_unstable();
            img != geom.line(self.lines[j])
        })
    }

    pub fn is_automorphism(&self, geom: &IncidenceStructure) -> bool {
        let bijective = |v: &[usize], n: usize| {
            v.len() == n && v.iter().collect::<HashSet<_>>().len() == n && v.iter().all(|&x| x < n)
        };
        bijective(&self.points, geom.num_points())
            && bijective(&self.lines, geom.num_lines())
            && self.broken_line(geom).is_none()
    }
}

fn relabel<P, L>(geom: &IncidenceStructure, mut point: P, mut line: L) -> Result<Collineation>
where
    P: FnMut(&PointLabel) -> Result<PointLabel>,
    L: FnMut(&LineLabel) -> Result<LineLabel>,
{
    let missing = |l: String| CosetGeomError::ForeignLabel(l);
    let points = geom
        .point_labels()
        .iter()
        .map(|l| {
            let img = point(l)?;
            geom.point_index(&img).ok_or_else(|| missing(img.token()))
        })
        .collect::<Result<_>>()?;
    let lines = geom
        .line_labels()
        .iter()
        .map(|l| {
            let img = line(l)?;
            geom.line_index(&img).ok_or_else(|| missing(img.token()))
        })
        .collect::<Result<_>>()?;
    Ok(Collineation { points, lines })
}

/// The right translation by `g` acting on labels.
pub fn translation_permutation(fam: &KantorFamily, geom: &IncidenceStructure, g: &GroupElement) -> Result<Collineation> {
    let f = field(fam);
    let m = fam.members();
    let member = |i: usize| m.get(i).ok_or_else(|| CosetGeomError::ForeignLabel(format!("member {i}")));
    relabel(
        geom,
        |l| match l {
            PointLabel::Affine(h) => Ok(PointLabel::Affine(h.add(g, f))),
            PointLabel::StarCoset(i, r) => Ok(PointLabel::StarCoset(*i, member(*i)?.star.reduce(&r.add(g, f)))),
            PointLabel::Infinity => Ok(PointLabel::Infinity),
            PointLabel::Named(s) => Err(CosetGeomError::ForeignLabel(s.clone())),
        },
        |l| match l {
            LineLabel::Coset(i, r) => Ok(LineLabel::Coset(*i, member(*i)?.a.reduce(&r.add(g, f)))),
            LineLabel::StarLine(i) => Ok(LineLabel::StarLine(*i)),
            LineLabel::Named(s) => Err(CosetGeomError::ForeignLabel(s.clone())),
        },
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TranslationFailure {
    /// The translation by `g` could not be expressed on the labels.
    Labels { g: GroupElement, detail: String },
    /// Translation by `g` maps `line` onto a non-line.
    NotAutomorphism { g: GroupElement, line: usize },
    /// Translation by `g` moves a line through `Infinity`.
    MovesStarLine { g: GroupElement, line: usize },
    /// Two group elements send `Affine(0)` to the same point.
    NotSharp { g: GroupElement, h: GroupElement, point: usize },
    /// An affine-orbit point collinear with `Infinity`, or a point not
    /// collinear with `Infinity` outside the orbit.
    OrbitMismatch { point: usize },
    /// The action of `g + h` differs from doing `g` then `h`, or the two
    /// generators do not commute.
    NotHomomorphism { g: GroupElement, h: GroupElement },
}

impl TranslationFailure {
    pub fn tokens(&self) -> String {
        match self {
            TranslationFailure::Labels { g, detail } => format!("g={} labels={detail}", g.token()),
            TranslationFailure::NotAutomorphism { g, line } => format!("g={} line={line}", g.token()),
            TranslationFailure::MovesStarLine { g, line } => format!("g={} moves={line}", g.token()),
            TranslationFailure::NotSharp { g, h, point } => {
                format!("g={} h={} point={point}", g.token(), h.token())
            }
            TranslationFailure::OrbitMismatch { point } => format!("point={point}"),
            TranslationFailure::NotHomomorphism { g, h } => format!("g={} h={}", g.token(), h.token()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationReport {
    pub result: std::result::Result<(), TranslationFailure>,
    /// Size of the orbit of `Affine(0)`.
    pub orbit: usize,
    pub group_order: u64,
}

impl TranslationReport {
    pub fn passed(&self) -> bool {
        self.result.is_ok()
    }
}

/// Points collinear with `x`, excluding `x`.
fn neighbours(geom: &IncidenceStructure, x: usize) -> HashSet<usize> {
    geom.lines_through(x)
        .iter()
        .flat_map(|&j| geom.line(j).iter().copied())
        .filter(|&y| y != x)
        .collect()
}

/// Checks that `A` acts on `geom` by automorphisms fixing every line
/// through `Infinity`, sharply transitively on the points opposite it.
pub fn verify_translation_action(fam: &KantorFamily, geom: &IncidenceStructure) -> TranslationReport {
    let group_order = fam.group_order();
    let fail = |e| TranslationReport {
        result: Err(e),
        orbit: 0,
        group_order,
    };
    let zero = GroupElement::zero(fam.n());
    let Some(origin) = geom.point_index(&PointLabel::Affine(zero.clone())) else {
        return fail(TranslationFailure::Labels {
            g: zero,
            detail: "A(0) missing".into(),
        });
    };
    let Some(infinity) = geom.point_index(&PointLabel::Infinity) else {
        return fail(TranslationFailure::Labels {
            g: zero,
            detail: "INF missing".into(),
        });
    };
    let star_lines: Vec<usize> = geom.lines_through(infinity).to_vec();
    let mut seen: Vec<Option<GroupElement>> = vec![None; geom.num_points()];
    let mut orbit = 0;
    for g in GroupElement::all(fam.p(), fam.n()) {
        let c = match translation_permutation(fam, geom, &g) {
            Ok(c) => c,
            Err(e) => {
                return fail(TranslationFailure::Labels {
                    g,
                    detail: e.to_string().replace(' ', "_"),
                })
            }
        };
        if let Some(line) = c.broken_line(geom) {
            return fail(TranslationFailure::NotAutomorphism { g, line });
        }
        if let Some(&line) = star_lines.iter().find(|&&j| c.lines[j] != j) {
            return fail(TranslationFailure::MovesStarLine { g, line });
        }
        let img = c.points[origin];
        if let Some(h) = seen[img].replace(g.clone()) {
            return fail(TranslationFailure::NotSharp { g, h, point: img });
        }
        orbit += 1;
    }
    let near = neighbours(geom, infinity);
    for x in 0..geom.num_points() {
        let opposite = x != infinity && !near.contains(&x);
        if opposite != seen[x].is_some() {
            return fail(TranslationFailure::OrbitMismatch { point: x });
        }
    }
    // The map g ↦ translation is a homomorphism from an abelian group.
    let f = field(fam);
    let gens: Vec<GroupElement> = (0..fam.n()).map(|k| GroupElement::unit(fam.n(), k)).collect();
    for a in &gens {
        for b in &gens {
            let perm = |g: &GroupElement| translation_permutation(fam, geom, g).expect("checked above");
            let (pa, pb, pab) = (perm(a), perm(b), perm(&a.add(b, f)));
            if pa.compose(&pb) != pab || pa.compose(&pb) != pb.compose(&pa) {
                return fail(TranslationFailure::NotHomomorphism { g: a.clone(), h: b.clone() });
            }
        }
    }
    TranslationReport {
        result: Ok(()),
        orbit,
        group_order,
    }
}

/// The collineation induced by an endomorphism `α` that permutes the
/// family: `Affine(h) ↦ Affine(hα)`, cosets of `A_i` go to cosets of
/// `A_i α = A_j`, and likewise for the stars.
pub fn induced_collineation(fam: &KantorFamily, geom: &IncidenceStructure, alpha: &Endo) -> Result<Collineation> {
    let m = fam.members();
    let mut a_perm = Vec::with_capacity(m.len());
    let mut star_perm = Vec::with_capacity(m.len());
    for (i, mem) in m.iter().enumerate() {
        let a = mem.a.image(alpha).map_err(KantorError::from)?;
        let s = mem.star.image(alpha).map_err(KantorError::from)?;
        let j = m
            .iter()
            .position(|x| x.a == a)
            .ok_or_else(|| CosetGeomError::NotFamilyPermuting(format!("A_{i}")))?;
        let k = m
            .iter()
            .position(|x| x.star == s)
            .ok_or_else(|| CosetGeomError::NotFamilyPermuting(format!("A_{i}*")))?;
        if j != k {
            return Err(CosetGeomError::NotFamilyPermuting(format!("pair {i} splits")));
        }
        a_perm.push(j);
        star_perm.push(k);
    }
    let apply = |g: &GroupElement| alpha.apply(g).expect("dimension checked");
    relabel(
        geom,
        |l| match l {
            PointLabel::Affine(h) => Ok(PointLabel::Affine(apply(h))),
            PointLabel::StarCoset(i, r) => {
                let j = star_perm[*i];
                Ok(PointLabel::StarCoset(j, m[j].star.reduce(&apply(r))))
            }
            PointLabel::Infinity => Ok(PointLabel::Infinity),
            PointLabel::Named(s) => Err(CosetGeomError::ForeignLabel(s.clone())),
        },
        |l| match l {
            LineLabel::Coset(i, r) => {
                let j = a_perm[*i];
                Ok(LineLabel::Coset(j, m[j].a.reduce(&apply(r))))
            }
            LineLabel::StarLine(i) => Ok(LineLabel::StarLine(star_perm[*i])),
            LineLabel::Named(s) => Err(CosetGeomError::ForeignLabel(s.clone())),
        },
    )
}
