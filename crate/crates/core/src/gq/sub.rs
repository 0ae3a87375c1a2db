use std::collections::{BTreeSet, VecDeque};

use crate::cosetgeom::IncidenceStructure;

use super::{verify_gq, GqError, GqReport, GqView, Result};

/// Point and line subsets of an ambient structure, with the induced
/// incidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substructure<'g> {
    ambient: &'g IncidenceStructure,
    points: Vec<usize>,
    lines: Vec<usize>,
}

impl<'g> Substructure<'g> {
    pub fn new(ambient: &'g IncidenceStructure, points: impl IntoIterator<Item = usize>, lines: impl IntoIterator<Item = usize>) -> Result<Self> {
        let points: Vec<usize> = points.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let lines: Vec<usize> = lines.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if let Some(&x) = points.iter().find(|&&x| x >= ambient.num_points()) {
            return Err(GqError::UnknownPoint(x));
        }
        if let Some(&j) = lines.iter().find(|&&j| j >= ambient.num_lines()) {
            return Err(GqError::UnknownLine(j));
        }
        Ok(Self { ambient, points, lines })
    }

    pub fn whole(ambient: &'g IncidenceStructure) -> Self {
        Self {
            ambient,
            points: (0..ambient.num_points()).collect(),
            lines: (0..ambient.num_lines()).collect(),
        }
    }

    pub fn ambient(&self) -> &'g IncidenceStructure {
        self.ambient
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn lines(&self) -> &[usize] {
        &self.lines
    }

    pub fn contains_point(&self, x: usize) -> bool {
        self.points.binary_search(&x).is_ok()
    }

    pub fn contains_line(&self, j: usize) -> bool {
        self.lines.binary_search(&j).is_ok()
    }

    pub fn is_whole(&self) -> bool {
        self.points.len() == self.ambient.num_points() && self.lines.len() == self.ambient.num_lines()
    }

    /// The induced structure, keeping the ambient labels.
    pub fn induced(&self) -> IncidenceStructure {
        let mut local = vec![usize::MAX; self.ambient.num_points()];
        for (k, &x) in self.points.iter().enumerate() {
            local[x] = k;
        }
        let lines = self
            .lines
            .iter()
            .map(|&j| {
                self.ambient
                    .line(j)
                    .iter()
                    .filter(|&&x| local[x] != usize::MAX)
                    .map(|&x| local[x])
                    .collect()
            })
            .collect();
        IncidenceStructure::new(
            self.points.iter().map(|&x| self.ambient.point_label(x).clone()).collect(),
            self.lines.iter().map(|&j| self.ambient.line_label(j).clone()).collect(),
            lines,
        )
        .expect("restriction of a valid structure")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealVerdict {
    Ideal(GqReport),
    /// The induced structure fails the quadrangle axioms.
    NotGq(GqReport),
    /// `line` passes through the sub-point `point` but is missing.
    MissingLine { point: usize, line: usize },
}

impl IdealVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, IdealVerdict::Ideal(_))
    }
}

/// Induced structure is a (possibly thin) GQ and carries every ambient
/// line through each of its points.
pub fn verify_ideal_subgq(sub: &Substructure) -> IdealVerdict {
    let geom = sub.ambient();
    for &x in sub.points() {
        if let Some(&line) = geom.lines_through(x).iter().find(|&&j| !sub.contains_line(j)) {
            return IdealVerdict::MissingLine { point: x, line };
        }
    }
    let report = verify_gq(&sub.induced());
    if report.passed() {
        IdealVerdict::Ideal(report)
    } else {
        IdealVerdict::NotGq(report)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularPair<'g> {
    pub regular: bool,
    /// `{x, y}^⊥`
    pub perp: Vec<usize>,
    /// `{x, y}^⊥⊥`
    pub perp_perp: Vec<usize>,
    /// The thin ideal subGQ on `{x,y}^⊥ ∪ {x,y}^⊥⊥` when regular.
    pub sub: Option<Substructure<'g>>,
    /// A line of the candidate meeting the point set in other than two
    /// points, when that is why the pair fails.
    pub bad_line: Option<usize>,
}

fn regular_pair_view<'g>(view: &GqView<'g>, x: usize, y: usize) -> Result<RegularPair<'g>> {
    let geom = view.geom();
    view.check_point(x)?;
    view.check_point(y)?;
    if view.collinear(x, y) {
        return Err(GqError::Collinear(x, y));
    }
    let perp = view.perp(&[x, y])?;
    let perp_perp = view.perp(&perp)?;
    let points: BTreeSet<usize> = perp.iter().chain(&perp_perp).copied().collect();
    let lines: BTreeSet<usize> = points.iter().flat_map(|&p| geom.lines_through(p).iter().copied()).collect();
    let bad_line = lines
        .iter()
        .copied()
        .find(|&j| geom.line(j).iter().filter(|p| points.contains(p)).count() != 2);
    let mut out = RegularPair {
        regular: false,
        perp,
        perp_perp,
        sub: None,
        bad_line,
    };
    if bad_line.is_some() {
        return Ok(out);
    }
    let sub = Substructure::new(geom, points, lines)?;
    let report = verify_gq(&sub.induced());
    // full line-degree at each point is automatic: B' carries every line
    // through P'
    if report.is_thin_gq() && report.order.map(|(s, _)| s) == Some(1) {
        out.regular = true;
        out.sub = Some(sub);
    }
    Ok(out)
}

/// `{x, y}` is regular when `{x,y}^⊥ ∪ {x,y}^⊥⊥` with all lines through
/// it forms a thin ideal subGQ.
pub fn regular_pair(geom: &IncidenceStructure, x: usize, y: usize) -> Result<RegularPair<'_>> {
    regular_pair_view(&GqView::new(geom), x, y)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegularPointVerdict {
    Regular,
    /// `{x, y}` is not regular.
    NotRegular { y: usize, perp_perp: usize },
}

impl RegularPointVerdict {
    pub fn is_regular(&self) -> bool {
        matches!(self, RegularPointVerdict::Regular)
    }
}

pub fn is_regular_point(geom: &IncidenceStructure, x: usize) -> Result<RegularPointVerdict> {
    let view = GqView::new(geom);
    view.check_point(x)?;
    for y in 0..geom.num_points() {
        if view.collinear(x, y) {
            continue;
        }
        let r = regular_pair_view(&view, x, y)?;
        if !r.regular {
            return Ok(RegularPointVerdict::NotRegular {
                y,
                perp_perp: r.perp_perp.len(),
            });
        }
    }
    Ok(RegularPointVerdict::Regular)
}

/// Regularity of a line, as regularity of the point in the dual.
pub fn is_regular_line(geom: &IncidenceStructure, line: usize) -> Result<RegularPointVerdict> {
    if line >= geom.num_lines() {
        return Err(GqError::UnknownLine(line));
    }
    is_regular_point(&geom.dual(), line)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureClass {
    Whole,
    ThinIdeal,
    ThickIdeal,
    NotSubGq,
}

impl ClosureClass {
    pub fn token(&self) -> &'static str {
        match self {
            ClosureClass::Whole => "whole",
            ClosureClass::ThinIdeal => "thin-ideal",
            ClosureClass::ThickIdeal => "thick-ideal",
            ClosureClass::NotSubGq => "not-a-subgq",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureResult<'g> {
    pub sub: Substructure<'g>,
    pub class: ClosureClass,
}

/// Least point/line set containing the seeds that is closed under
/// (R1) adding every line through a member point and (R2) adding the
/// projection `(q, M)` of a member point onto a member line. It lies in
/// every ideal subGQ containing the seeds, and is the least such when it
/// is one itself.
pub fn ideal_closure<'g>(geom: &'g IncidenceStructure, seeds: &[usize]) -> Result<ClosureResult<'g>> {
    let view = GqView::new(geom);
    for &x in seeds {
        view.check_point(x)?;
    }
    if let [x, z, ..] = *seeds {
        if view.collinear(x, z) {
            return Err(GqError::Collinear(x, z));
        }
    }
    let mut in_pts = vec![false; geom.num_points()];
    let mut in_lines = vec![false; geom.num_lines()];
    let mut pts: Vec<usize> = Vec::new();
    let mut lines: Vec<usize> = Vec::new();
    let mut queue: VecDeque<Item> = seeds.iter().map(|&x| Item::Point(x)).collect();
    while let Some(item) = queue.pop_front() {
        match item {
            Item::Point(x) => {
                if std::mem::replace(&mut in_pts[x], true) {
                    continue;
                }
                pts.push(x);
                queue.extend(geom.lines_through(x).iter().map(|&j| Item::Line(j)));
                for &l in &lines {
                    push_projection(&view, x, l, &mut queue);
                }
            }
            Item::Line(l) => {
                if std::mem::replace(&mut in_lines[l], true) {
                    continue;
                }
                lines.push(l);
                for &x in &pts {
                    push_projection(&view, x, l, &mut queue);
                }
            }
        }
    }
    let sub = Substructure::new(geom, pts, lines)?;
    let class = if sub.is_whole() {
        ClosureClass::Whole
    } else {
        match verify_ideal_subgq(&sub) {
            IdealVerdict::Ideal(r) if r.is_thin_gq() => ClosureClass::ThinIdeal,
            IdealVerdict::Ideal(_) => ClosureClass::ThickIdeal,
            _ => ClosureClass::NotSubGq,
        }
    };
    Ok(ClosureResult { sub, class })
}

#[derive(Clone, Copy)]
enum Item {
    Point(usize),
    Line(usize),
}

/// For `x` off `l`, queue the points of `l` collinear with `x` and the
/// joining lines (exactly one pair in a GQ).
fn push_projection(view: &GqView, x: usize, l: usize, queue: &mut VecDeque<Item>) {
    if view.geom().incident(x, l) {
        return;
    }
    for q in view.projections(x, l) {
        queue.push_back(Item::Point(q));
        queue.push_back(Item::Line(view.join(x, q).expect("collinear")));
    }
}
