//! Points, lines and arcs of `PG(2, q)`.

use crate::algebra::{FiniteField, FqElem};

pub type ProjPoint = [FqElem; 3];

/// Scales so that the first nonzero coordinate is 1. `None` for the zero
/// vector.
pub fn normalize(f: &FiniteField, v: ProjPoint) -> Option<ProjPoint> {
    let lead = *v.iter().find(|&&c| c != f.zero())?;
    let inv = f.inv(lead).ok()?;
    Some(v.map(|c| f.mul(c, inv)))
}

/// Every point of `PG(2, q)` in normalized form.
pub fn all_points(f: &FiniteField) -> Vec<ProjPoint> {
    let (zero, one) = (f.zero(), f.one());
    let mut pts = Vec::new();
    for a in f.elements() {
        for b in f.elements() {
            pts.push([one, a, b]);
        }
    }
    for b in f.elements() {
        pts.push([zero, one, b]);
    }
    pts.push([zero, zero, one]);
    pts
}

pub fn dot(f: &FiniteField, a: &ProjPoint, b: &ProjPoint) -> FqElem {
    (0..3).fold(f.zero(), |acc, i| f.add(acc, f.mul(a[i], b[i])))
}

/// Dual coordinates of the line through two distinct points.
pub fn join(f: &FiniteField, a: &ProjPoint, b: &ProjPoint) -> Option<ProjPoint> {
    let c = [
        f.sub(f.mul(a[1], b[2]), f.mul(a[2], b[1])),
        f.sub(f.mul(a[2], b[0]), f.mul(a[0], b[2])),
        f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0])),
    ];
    normalize(f, c)
}

pub fn collinear(f: &FiniteField, a: &ProjPoint, b: &ProjPoint, c: &ProjPoint) -> bool {
    match join(f, a, b) {
        Some(line) => dot(f, &line, c) == f.zero(),
        None => true,
    }
}

/// `{(1, t, t²) : t ∈ F_q} ∪ {(0, 0, 1)}`, with `t` in element order.
pub fn conic(f: &FiniteField) -> Vec<ProjPoint> {
    let mut pts: Vec<ProjPoint> = f
        .elements()
        .map(|t| [f.one(), t, f.mul(t, t)])
        .collect();
    pts.push([f.zero(), f.zero(), f.one()]);
    pts
}

/// The nucleus of the standard conic in even characteristic.
pub fn conic_nucleus(f: &FiniteField) -> ProjPoint {
    [f.zero(), f.one(), f.zero()]
}

/// Lines through `s` meeting `arc` in `s` only, each given by `s` and one
/// further point on it.
pub fn tangents(f: &FiniteField, arc: &[ProjPoint], s: &ProjPoint) -> Vec<(ProjPoint, ProjPoint)> {
    let mut seen = Vec::new();
    let mut out = Vec::new();
    for r in all_points(f) {
        if &r == s {
            continue;
        }
        let line = join(f, s, &r).expect("distinct points");
        if seen.contains(&line) {
            continue;
        }
        seen.push(line);
        let hits = arc.iter().filter(|a| dot(f, &line, a) == f.zero()).count();
        if hits == 1 {
            out.push((*s, r));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{fq_ops, FieldSpec};

    #[test]
    fn plane_has_q2_q_1_points() {
        for q in [2u64, 3, 4, 5] {
            let f = fq_ops(&FieldSpec::for_order(q).unwrap());
            assert_eq!(all_points(&f).len() as u64, q * q + q + 1);
        }
    }

    #[test]
    fn conic_tangent_at_origin_q2_passes_through_nucleus() {
        let f = fq_ops(&FieldSpec::for_order(2).unwrap());
        let c = conic(&f);
        let e1 = [FqElem(1), FqElem(0), FqElem(0)];
        let t = tangents(&f, &c, &e1);
        assert_eq!(t.len(), 1);
        let line = join(&f, &t[0].0, &t[0].1).unwrap();
        assert_eq!(dot(&f, &line, &conic_nucleus(&f)), f.zero());
    }

    #[test]
    fn conic_is_an_arc() {
        for q in [3u64, 4, 5, 7] {
            let f = fq_ops(&FieldSpec::for_order(q).unwrap());
            let c = conic(&f);
            for i in 0..c.len() {
                for j in i + 1..c.len() {
                    for k in j + 1..c.len() {
                        assert!(!collinear(&f, &c[i], &c[j], &c[k]));
                    }
                }
            }
        }
    }
}
