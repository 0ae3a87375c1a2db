//! Generalized quadrangle axioms and structural analysis for arbitrary
//! finite incidence structures.

mod sub;
mod symmetry;

pub use sub::{
    ideal_closure, is_regular_line, is_regular_point, regular_pair, verify_ideal_subgq, ClosureClass,
    ClosureResult, IdealVerdict, RegularPair, RegularPointVerdict, Substructure,
};
pub use symmetry::{verify_axis_of_symmetry, verify_symmetry_group, SymmetryFailure, SymmetryReport};

use thiserror::Error;

use crate::cosetgeom::IncidenceStructure;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GqError {
    #[error("point index {0} out of range")]
    UnknownPoint(usize),
    #[error("line index {0} out of range")]
    UnknownLine(usize),
    #[error("points {0} and {1} are collinear")]
    Collinear(usize, usize),
    #[error("empty point set")]
    Empty,
    #[error("member index {index} out of range for {len} members")]
    MemberIndex { index: usize, len: usize },
    #[error("structure has no label {0}")]
    MissingLabel(String),
}

pub type Result<T, E = GqError> = std::result::Result<T, E>;

const NONE: u32 = u32::MAX;

/// A structure together with its point-pair join table, shared by the
/// analyses below.
#[derive(Debug, Clone)]
pub struct GqView<'g> {
    geom: &'g IncidenceStructure,
    joins: Vec<u32>,
    /// Some pair of points lies on two lines.
    digon: Option<Digon>,
}

impl<'g> GqView<'g> {
    pub fn new(geom: &'g IncidenceStructure) -> Self {
        let n = geom.num_points();
        let mut joins = vec![NONE; n * n];
        let mut digon = None;
        for (j, line) in geom.lines().iter().enumerate() {
            for (a, &x) in line.iter().enumerate() {
                for &y in &line[a + 1..] {
                    let slot = &mut joins[x * n + y];
                    if *slot != NONE && digon.is_none() {
                        digon = Some(Digon {
                            points: (x, y),
                            lines: (*slot as usize, j),
                        });
                    }
                    *slot = j as u32;
                    joins[y * n + x] = j as u32;
                }
            }
        }
        Self { geom, joins, digon }
    }

    pub fn geom(&self) -> &'g IncidenceStructure {
        self.geom
    }

    /// The line through two distinct points, if they are collinear.
    pub fn join(&self, x: usize, y: usize) -> Option<usize> {
        let j = self.joins[x * self.geom.num_points() + y];
        (j != NONE).then_some(j as usize)
    }

    /// `x ~ y`, with `x ~ x`.
    pub fn collinear(&self, x: usize, y: usize) -> bool {
        x == y || self.join(x, y).is_some()
    }

    fn check_point(&self, x: usize) -> Result<()> {
        if x < self.geom.num_points() {
            Ok(())
        } else {
            Err(GqError::UnknownPoint(x))
        }
    }

    /// Points collinear with every member of `set`.
    pub fn perp(&self, set: &[usize]) -> Result<Vec<usize>> {
        if set.is_empty() {
            return Err(GqError::Empty);
        }
        for &x in set {
            self.check_point(x)?;
        }
        // Start from the smallest neighbourhood.
        let &seed = set
            .iter()
            .min_by_key(|&&x| self.geom.lines_through(x).len())
            .expect("nonempty");
        let mut cand: Vec<usize> = self
            .geom
            .lines_through(seed)
            .iter()
            .flat_map(|&j| self.geom.line(j).iter().copied())
            .chain(std::iter::once(seed))
            .collect();
        cand.sort_unstable();
        cand.dedup();
        cand.retain(|&y| set.iter().all(|&x| self.collinear(x, y)));
        Ok(cand)
    }

    /// Points `q` on `line` collinear with `x`, for `x` off the line.
    pub fn projections(&self, x: usize, line: usize) -> Vec<usize> {
        self.geom.line(line).iter().copied().filter(|&y| self.join(x, y).is_some()).collect()
    }
}

/// Two points joined by two distinct lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Digon {
    pub points: (usize, usize),
    pub lines: (usize, usize),
}

/// Three pairwise collinear points not on a common line; `lines[k]` joins
/// `points[k]` and `points[(k + 1) % 3]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triangle {
    pub points: [usize; 3],
    pub lines: [usize; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom1 {
    Pass,
    Digon(Digon),
    Triangle(Triangle),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom2 {
    Pass,
    /// `count` points of `line` are collinear with the non-incident `point`.
    Projections { point: usize, line: usize, count: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom3 {
    Thick,
    /// Constant degrees with `s = 1` or `t = 1`.
    Thin,
    /// Nonconstant degrees, a line with fewer than 2 points, or a point on
    /// fewer than 2 lines. `point` or `line` names an offender.
    Degenerate { point: Option<usize>, line: Option<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GqReport {
    pub axiom_i: Axiom1,
    pub axiom_ii: Axiom2,
    pub axiom_iii: Axiom3,
    /// `(s, t)` when all lines have `s + 1` points and all points lie on
    /// `t + 1` lines.
    pub order: Option<(usize, usize)>,
}

impl GqReport {
    /// Axioms i and ii hold and the degrees are not degenerate; thin
    /// structures pass.
    pub fn passed(&self) -> bool {
        self.axiom_i == Axiom1::Pass
            && self.axiom_ii == Axiom2::Pass
            && !matches!(self.axiom_iii, Axiom3::Degenerate { .. })
    }

    pub fn is_thick_gq(&self) -> bool {
        self.passed() && self.axiom_iii == Axiom3::Thick
    }

    pub fn is_thin_gq(&self) -> bool {
        self.passed() && self.axiom_iii == Axiom3::Thin
    }
}

impl Axiom1 {
    pub fn recheck(&self, geom: &IncidenceStructure) -> bool {
        let in_range = |pts: &[usize], lines: &[usize]| {
            pts.iter().all(|&x| x < geom.num_points()) && lines.iter().all(|&j| j < geom.num_lines())
        };
        match *self {
            Axiom1::Pass => true,
            Axiom1::Digon(d) if !in_range(&[d.points.0, d.points.1], &[d.lines.0, d.lines.1]) => false,
            Axiom1::Triangle(t) if !in_range(&t.points, &t.lines) => false,
            Axiom1::Digon(d) => {
                let (x, y) = d.points;
                let (a, b) = d.lines;
                x != y
                    && a != b
                    && [a, b].iter().all(|&l| geom.incident(x, l) && geom.incident(y, l))
            }
            Axiom1::Triangle(t) => {
                let p = t.points;
                let distinct = p[0] != p[1] && p[1] != p[2] && p[0] != p[2];
                let sides = (0..3).all(|k| geom.incident(p[k], t.lines[k]) && geom.incident(p[(k + 1) % 3], t.lines[k]));
                let not_flat = (0..3).all(|k| !geom.incident(p[(k + 2) % 3], t.lines[k]));
                distinct && sides && not_flat
            }
        }
    }

    pub fn tokens(&self) -> String {
        match self {
            Axiom1::Pass => String::new(),
            Axiom1::Digon(d) => format!(
                "digon points={},{} lines={},{}",
                d.points.0, d.points.1, d.lines.0, d.lines.1
            ),
            Axiom1::Triangle(t) => format!(
                "triangle points={},{},{} lines={},{},{}",
                t.points[0], t.points[1], t.points[2], t.lines[0], t.lines[1], t.lines[2]
            ),
        }
    }
}

fn axiom_i(view: &GqView) -> Axiom1 {
    if let Some(d) = view.digon {
        return Axiom1::Digon(d);
    }
    let geom = view.geom;
    for x in 0..geom.num_points() {
        let through = geom.lines_through(x);
        for (a, &l1) in through.iter().enumerate() {
            for &l2 in &through[a + 1..] {
                for &y in geom.line(l1).iter().filter(|&&y| y != x) {
                    for &z in geom.line(l2).iter().filter(|&&z| z != x) {
                        if let Some(l3) = view.join(y, z) {
                            return Axiom1::Triangle(Triangle {
                                points: [x, y, z],
                                lines: [l1, l3, l2],
                            });
                        }
                    }
                }
            }
        }
    }
    Axiom1::Pass
}

fn axiom_ii(view: &GqView) -> Axiom2 {
    let geom = view.geom;
    for x in 0..geom.num_points() {
        for line in 0..geom.num_lines() {
            if geom.incident(x, line) {
                continue;
            }
            let count = view.projections(x, line).len();
            if count != 1 {
                return Axiom2::Projections { point: x, line, count };
            }
        }
    }
    Axiom2::Pass
}

fn axiom_iii(geom: &IncidenceStructure) -> (Axiom3, Option<(usize, usize)>) {
    let line_sizes: Vec<usize> = geom.lines().iter().map(Vec::len).collect();
    let point_degs: Vec<usize> = (0..geom.num_points()).map(|x| geom.lines_through(x).len()).collect();
    let degenerate = |point, line| (Axiom3::Degenerate { point, line }, None);
    if let Some(j) = line_sizes.iter().position(|&k| k < 2) {
        return degenerate(None, Some(j));
    }
    if let Some(x) = point_degs.iter().position(|&k| k < 2) {
        return degenerate(Some(x), None);
    }
    if let Some(j) = line_sizes.iter().position(|&k| k != line_sizes[0]) {
        return degenerate(None, Some(j));
    }
    if let Some(x) = point_degs.iter().position(|&k| k != point_degs[0]) {
        return degenerate(Some(x), None);
    }
    let (Some(&ls), Some(&pd)) = (line_sizes.first(), point_degs.first()) else {
        return degenerate(None, None);
    };
    let order = (ls - 1, pd - 1);
    let verdict = if order.0 >= 2 && order.1 >= 2 {
        Axiom3::Thick
    } else {
        Axiom3::Thin
    };
    (verdict, Some(order))
}

/// Checks the three quadrangle axioms. With axioms i and ii in place,
/// constant degrees of at least 3 yield an ordinary pentagon, so
/// thickness is decided from the degrees.
pub fn verify_gq(geom: &IncidenceStructure) -> GqReport {
    verify_gq_view(&GqView::new(geom))
}

pub fn verify_gq_view(view: &GqView) -> GqReport {
    let (axiom_iii, order) = axiom_iii(view.geom);
    GqReport {
        axiom_i: axiom_i(view),
        axiom_ii: axiom_ii(view),
        axiom_iii,
        order,
    }
}

/// Points collinear with every point of `set` (each point is collinear
/// with itself).
pub fn perp(geom: &IncidenceStructure, set: &[usize]) -> Result<Vec<usize>> {
    GqView::new(geom).perp(set)
}
