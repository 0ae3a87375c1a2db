use std::collections::BTreeSet;

use super::*;
use crate::algebra::{fq_ops, FieldSpec};
use crate::kantor::{build_secant2, build_t2_oval, plane, OvalSpec};
use crate::kernel::{compute_kernel, ConstraintMode};

fn t2(q: u64) -> KantorFamily {
    build_t2_oval(&OvalSpec::conic(FieldSpec::for_order(q).unwrap())).unwrap()
}

fn egg_of(fam: &KantorFamily) -> (KernelRing, EggRepresentation) {
    let ring = compute_kernel(fam, ConstraintMode::FAndFStar);
    let egg = build_egg(fam, &ring).unwrap();
    (ring, egg)
}

fn dims(egg: &EggRepresentation) -> Vec<(usize, usize)> {
    egg.members().iter().map(|m| (m.a.dim, m.star.dim)).collect()
}

#[test]
fn t2_q4_is_over_f4() {
    let fam = t2(4);
    let (_, egg) = egg_of(&fam);
    assert_eq!((egg.field_size(), egg.e(), egg.m()), (4, 2, 3));
    assert!(dims(&egg).iter().all(|&d| d == (1, 2)));
    assert_eq!(egg.members().len(), 5);
}

#[test]
fn t2_q2_is_the_conic_directions() {
    let fam = t2(2);
    let (_, egg) = egg_of(&fam);
    assert_eq!((egg.field_size(), egg.m()), (2, 3));
    assert!(dims(&egg).iter().all(|&d| d == (1, 2)));
    // over F_2 a 1-dimensional member is its unique nonzero vector
    let f = fq_ops(&FieldSpec::for_order(2).unwrap());
    let conic: BTreeSet<GroupElement> = plane::conic(&f).iter().map(|pt| f.embed(pt)).collect();
    let dirs: BTreeSet<GroupElement> = egg
        .members()
        .iter()
        .map(|m| egg.from_k_coords(&m.a.basis[0]).unwrap())
        .collect();
    assert_eq!(dirs, conic);
}

#[test]
fn secant2_q4_tangent_dims_double() {
    let fam = build_secant2(&FieldSpec::for_order(4).unwrap(), 0).unwrap();
    let (_, egg) = egg_of(&fam);
    assert_eq!(egg.e() * egg.m(), fam.n());
    for (a, star) in dims(&egg) {
        assert_eq!(star, 2 * a);
    }
}

#[test]
fn k_subspaces_span_the_members() {
    for q in [2, 3, 4, 5] {
        let fam = t2(q);
        let (_, egg) = egg_of(&fam);
        for (mem, em) in fam.members().iter().zip(egg.members()) {
            for (s, ks) in [(&mem.a, &em.a), (&mem.star, &em.star)] {
                assert_eq!(ks.dim * egg.e(), s.dim());
                let span: Vec<GroupElement> = (0..egg.field_size() as usize)
                    .flat_map(|k| ks.basis.iter().map(move |r| (k, r)))
                    .map(|(k, r)| egg.scalar(k).apply(&egg.from_k_coords(r).unwrap()).unwrap())
                    .collect();
                assert_eq!(Subspace::span(fam.p(), fam.n(), &span).unwrap(), *s);
            }
        }
    }
}

#[test]
fn coordinates_round_trip() {
    for q in [3, 4] {
        let fam = t2(q);
        let (_, egg) = egg_of(&fam);
        for v in GroupElement::all(fam.p(), fam.n()) {
            let c = egg.k_coords(&v).unwrap();
            assert_eq!(egg.from_k_coords(&c).unwrap(), v);
        }
        assert!(egg.from_k_coords(&[0]).is_err());
    }
}

#[test]
fn f_only_q2_kernel_is_refused() {
    let fam = t2(2);
    let ring = compute_kernel(&fam, ConstraintMode::FOnly);
    assert_eq!(build_egg(&fam, &ring), Err(EggError::NotAField(8)));
}

#[test]
fn identity_and_scalars_fix_the_egg() {
    let fam = t2(5);
    let (ring, egg) = egg_of(&fam);
    for m in 1..5 {
        let perm = verify_unit_egg_permutation(&egg, &ring.multiplication_endo(m)).unwrap();
        assert!(perm.is_identity());
        assert_eq!(perm.moves_points, m != 1);
    }
    assert_eq!(
        verify_unit_egg_permutation(&egg, &ring.zero()),
        Err(EggError::NotAUnit)
    );
}

#[test]
fn f4_generator_moves_points_but_not_members() {
    let fam = t2(4);
    let (ring, egg) = egg_of(&fam);
    let gen = ring
        .elements()
        .find(|e| e.is_unit() && !e.matrix().is_identity())
        .unwrap();
    assert_eq!(crate::kernel::unit_order(&gen).unwrap(), 3);
    let perm = verify_unit_egg_permutation(&egg, &gen).unwrap();
    assert!(perm.is_identity());
    assert!(perm.moves_points);
}

#[test]
fn foreign_ring_is_rejected() {
    let (_, egg) = egg_of(&t2(3));
    let other = compute_kernel(&t2(5), ConstraintMode::FAndFStar);
    assert_eq!(
        verify_unit_egg_permutation(&egg, &other.one()),
        Err(EggError::RingMismatch)
    );
}
