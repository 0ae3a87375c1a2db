use crate::algebra::{fq_ops, FieldSpec, FiniteField, Subspace};

use super::plane::{self, ProjPoint};
use super::{KantorError, KantorFamily, Member, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OvalKind {
    Conic,
    Points(Vec<ProjPoint>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OvalSpec {
    pub field: FieldSpec,
    pub kind: OvalKind,
    /// Append the nucleus (even `q` only), turning an oval into a
    /// hyperoval.
    pub nucleus: bool,
}

impl OvalSpec {
    pub fn conic(field: FieldSpec) -> Self {
        Self {
            field,
            kind: OvalKind::Conic,
            nucleus: false,
        }
    }

    pub fn points_list(field: FieldSpec, points: Vec<ProjPoint>) -> Self {
        Self {
            field,
            kind: OvalKind::Points(points),
            nucleus: false,
        }
    }

    /// The normalized point set, validated to contain no three collinear
    /// points.
    pub fn points(&self) -> Result<Vec<ProjPoint>> {
        let f = fq_ops(&self.field);
        let mut pts = match &self.kind {
            OvalKind::Conic => plane::conic(&f),
            OvalKind::Points(raw) => {
                let mut pts = Vec::with_capacity(raw.len());
                for v in raw {
                    if v.iter().any(|c| c.0 >= f.order()) {
                        return Err(KantorError::NotAnOval(format!(
                            "coordinate out of range in {v:?}"
                        )));
                    }
                    let v = plane::normalize(&f, *v)
                        .ok_or_else(|| KantorError::NotAnOval("zero vector in point list".into()))?;
                    if pts.contains(&v) {
                        return Err(KantorError::NotAnOval(format!("repeated point {v:?}")));
                    }
                    pts.push(v);
                }
                pts
            }
        };
        check_arc(&f, &pts).map_err(KantorError::NotAnOval)?;
        if self.nucleus {
            if f.p() != 2 {
                return Err(KantorError::OddCharacteristic(self.field.q()));
            }
            let n = nucleus(&f, &pts)?;
            pts.push(n);
        }
        Ok(pts)
    }
}

fn check_arc(f: &FiniteField, pts: &[ProjPoint]) -> std::result::Result<(), String> {
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            for k in j + 1..pts.len() {
                if plane::collinear(f, &pts[i], &pts[j], &pts[k]) {
                    return Err(format!(
                        "points {:?}, {:?}, {:?} are collinear",
                        pts[i], pts[j], pts[k]
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Common point of the tangents of an oval in even characteristic.
fn nucleus(f: &FiniteField, oval: &[ProjPoint]) -> Result<ProjPoint> {
    let lines: Vec<ProjPoint> = oval
        .iter()
        .map(|s| {
            let t = plane::tangents(f, oval, s);
            match t.as_slice() {
                [(a, b)] => Ok(plane::join(f, a, b).expect("distinct")),
                _ => Err(KantorError::NotAnOval(format!(
                    "point {s:?} has {} tangents",
                    t.len()
                ))),
            }
        })
        .collect::<Result<_>>()?;
    plane::all_points(f)
        .into_iter()
        .find(|x| lines.iter().all(|l| plane::dot(f, l, x) == f.zero()))
        .ok_or_else(|| KantorError::NotAnOval("tangents are not concurrent".into()))
}

fn fq_subspace(f: &FiniteField, vectors: &[ProjPoint]) -> Result<Subspace> {
    let rows = f.span_rows(&vectors.iter().map(|v| v.to_vec()).collect::<Vec<_>>());
    Ok(Subspace::span(f.p(), 3 * f.d(), &rows)?)
}

/// `T2(O)`: for each oval point `s`, `A_s` is the `F_q`-line of `s` and
/// `A_s*` the `F_q`-plane of the tangent at `s`, inside `F_q³ = F_p^{3d}`.
pub fn build_t2_oval(oval: &OvalSpec) -> Result<KantorFamily> {
    let f = fq_ops(&oval.field);
    let pts = oval.points()?;
    let mut members = Vec::with_capacity(pts.len());
    for s in &pts {
        let tangent = match plane::tangents(&f, &pts, s).as_slice() {
            [(_, r)] => *r,
            [] => return Err(KantorError::NotAnOval(format!("no tangent at {s:?}"))),
            many => {
                return Err(KantorError::NotAnOval(format!(
                    "{} tangents at {s:?}",
                    many.len()
                )))
            }
        };
        members.push(Member {
            a: fq_subspace(&f, &[*s])?,
            star: fq_subspace(&f, &[*s, tangent])?,
        });
    }
    KantorFamily::new(f.p(), 3 * f.d(), members)
}

/// Family from a hyperoval `S` and a removed point `c = S[c_index]`:
/// members `T_s`, `T_s ⊕ T_c` for `s ∈ S \ {c}`, in the order of `S`.
pub fn build_secant2_from(field: &FieldSpec, hyperoval: &[ProjPoint], c_index: usize) -> Result<KantorFamily> {
    let f = fq_ops(field);
    let q = field.q();
    if f.p() != 2 {
        return Err(KantorError::OddCharacteristic(q));
    }
    if hyperoval.len() as u64 != q + 2 {
        return Err(KantorError::NotAHyperoval(format!(
            "{} points, expected {}",
            hyperoval.len(),
            q + 2
        )));
    }
    check_arc(&f, hyperoval).map_err(KantorError::NotAHyperoval)?;
    let c = *hyperoval.get(c_index).ok_or(KantorError::PointIndex {
        index: c_index,
        len: hyperoval.len(),
    })?;
    let tc = fq_subspace(&f, &[c])?;
    let mut members = Vec::with_capacity(hyperoval.len() - 1);
    for (i, s) in hyperoval.iter().enumerate() {
        if i == c_index {
            continue;
        }
        let a = fq_subspace(&f, &[*s])?;
        let star = a.join(&tc)?;
        members.push(Member { a, star });
    }
    KantorFamily::new(f.p(), 3 * f.d(), members)
}

/// The standard hyperoval: conic `(1, t, t²)`, then `(0, 0, 1)`, then the
/// nucleus `(0, 1, 0)`. `c_index` picks the removed point in that order.
pub fn build_secant2(field: &FieldSpec, c_index: usize) -> Result<KantorFamily> {
    if field.p() != 2 {
        return Err(KantorError::OddCharacteristic(field.q()));
    }
    let spec = OvalSpec {
        field: field.clone(),
        kind: OvalKind::Conic,
        nucleus: true,
    };
    build_secant2_from(field, &spec.points()?, c_index)
}
