use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::algebra::{fq_ops, FieldSpec};
use crate::kantor::{build_secant2, build_t2_oval, OvalSpec};

fn t2(q: u64) -> KantorFamily {
    build_t2_oval(&OvalSpec::conic(FieldSpec::for_order(q).unwrap())).unwrap()
}

/// All matrices of `Mat_n(F_p)` mapping each listed subspace into itself,
/// by enumeration.
fn oracle(fam: &KantorFamily, mode: ConstraintMode) -> BTreeSet<Vec<u32>> {
    let (p, n) = (fam.p(), fam.n());
    let mut subs = Vec::new();
    for m in fam.members() {
        subs.push(m.a.clone());
        if mode == ConstraintMode::FAndFStar {
            subs.push(m.star.clone());
        }
    }
    let total = (p as usize).pow((n * n) as u32);
    (0..total)
        .map(|k| GroupElement::decode(k, p, n * n).into_coords())
        .filter(|flat| {
            let m = Endo::from_flat(p, n, flat).unwrap();
            subs.iter()
                .all(|s| s.elements().all(|v| s.contains(&m.apply(&v).unwrap())))
        })
        .collect()
}

fn ring_set(ring: &KernelRing) -> BTreeSet<Vec<u32>> {
    ring.elements().map(|e| e.matrix().flat()).collect()
}

#[test]
fn q2_fstar_matches_enumeration() {
    let fam = t2(2);
    let ring = compute_kernel(&fam, ConstraintMode::FAndFStar);
    assert_eq!(ring.size(), 2);
    assert_eq!(ring_set(&ring), oracle(&fam, ConstraintMode::FAndFStar));
}

#[test]
fn q2_f_only_matches_enumeration() {
    let fam = t2(2);
    let ring = compute_kernel(&fam, ConstraintMode::FOnly);
    assert_eq!((ring.size(), ring.dim()), (8, 3));
    assert_eq!(ring_set(&ring), oracle(&fam, ConstraintMode::FOnly));
}

#[test]
fn q3_fstar_matches_enumeration() {
    let fam = t2(3);
    let ring = compute_kernel(&fam, ConstraintMode::FAndFStar);
    assert_eq!(ring.size(), 3);
    assert_eq!(ring_set(&ring), oracle(&fam, ConstraintMode::FAndFStar));
}

/// Multiplication by each `c ∈ F_q`, coordinatewise on `F_q³`.
fn fq_scalars(q: u64) -> BTreeSet<Vec<u32>> {
    let f = fq_ops(&FieldSpec::for_order(q).unwrap());
    let n = 3 * f.d();
    f.elements()
        .map(|c| {
            (0..n)
                .flat_map(|k| {
                    let v = f.unembed(&GroupElement::unit(n, k)).unwrap();
                    let w: Vec<_> = v.iter().map(|&x| f.mul(c, x)).collect();
                    f.embed(&w).into_coords()
                })
                .collect()
        })
        .collect()
}

#[test]
fn q4_fstar_is_the_f4_scalars() {
    let fam = t2(4);
    let ring = compute_kernel(&fam, ConstraintMode::FAndFStar);
    assert_eq!(ring.size(), 4);
    assert_eq!(ring_set(&ring), fq_scalars(4));
}

#[test]
fn closure_under_products() {
    for q in [2, 3, 4, 5] {
        for mode in [ConstraintMode::FOnly, ConstraintMode::FAndFStar] {
            assert_eq!(compute_kernel(&t2(q), mode).verify_closure(), None);
        }
    }
}

#[test]
fn classification_of_fields() {
    for (q, p) in [(2u64, 2u64), (3, 3), (4, 2), (5, 5)] {
        let c = classify(&compute_kernel(&t2(q), ConstraintMode::FAndFStar));
        assert!(c.is_field && c.is_commutative && c.is_integral_domain, "q = {q}");
        assert_eq!(c.size, q);
        assert_eq!(c.characteristic, p);
        assert_eq!(c.prime_field_size, p);
        assert_eq!(c.unit_count, q - 1);
    }
}

#[test]
fn q2_f_only_has_zero_divisors() {
    let ring = compute_kernel(&t2(2), ConstraintMode::FOnly);
    let c = classify(&ring);
    assert!(!c.is_integral_domain);
    let (a, b) = c.zero_divisor.unwrap();
    assert!(!a.is_zero() && !b.is_zero());
    assert!(a.mul(&b).unwrap().is_zero());
    assert!(ring.preserves(&a) && ring.preserves(&b));
    assert!(!injectivity_check(&ring).passed());
}

#[test]
fn nonzero_elements_injective_in_fstar_mode() {
    for q in [3, 4, 5] {
        let r = injectivity_check(&compute_kernel(&t2(q), ConstraintMode::FAndFStar));
        assert!(r.passed());
        assert_eq!(r.checked, q - 1);
    }
}

#[test]
fn injectivity_failures_carry_kernel_vectors() {
    let ring = compute_kernel(&t2(2), ConstraintMode::FOnly);
    for (m, ker) in injectivity_check(&ring).failures {
        assert!(!ker.is_empty());
        assert!(ker.iter().all(|v| m.apply(v).unwrap().is_zero()));
    }
}

#[test]
fn scalar_orders_divide_p_minus_1() {
    let ring = compute_kernel(&t2(5), ConstraintMode::FAndFStar);
    let two = multiplication_endo(&ring, 2);
    assert_eq!(unit_order(&two).unwrap(), 4);
    assert!(two.pow(4).matrix().is_identity());
    for m in 1..5 {
        let e = ring.multiplication_endo(m);
        assert_eq!(4 % unit_order(&e).unwrap(), 0);
        assert!(e.pow(4).matrix().is_identity());
    }
    let zero = ring.multiplication_endo(5);
    assert!(zero.is_zero());
    assert_eq!(unit_order(&zero), Err(KernelError::NotAUnit));
}

#[test]
fn four_is_one_mod_3() {
    let ring = compute_kernel(&t2(3), ConstraintMode::FAndFStar);
    assert!(ring.multiplication_endo(4).matrix().is_identity());
}

#[test]
fn prime_field_is_the_scalars() {
    let ring = compute_kernel(&t2(4), ConstraintMode::FAndFStar);
    let scalars: BTreeSet<_> = (0..2).map(|m| ring.multiplication_endo(m).matrix().flat()).collect();
    let one = ring.one();
    let span: BTreeSet<_> = [ring.zero(), one.clone()].iter().map(|e| e.matrix().flat()).collect();
    assert_eq!(scalars, span);
}

#[test]
fn polynomial_evaluation() {
    let ring = compute_kernel(&t2(5), ConstraintMode::FAndFStar);
    let two = ring.multiplication_endo(2);
    assert_eq!(two.eval_poly(&[-1, 0, 1]), ring.multiplication_endo(3));
    assert_eq!(two.add(&ring.zero()).unwrap(), two);
    assert_eq!(two.eval_poly(&[]), ring.zero());
}

#[test]
fn ring_mismatch_is_an_error() {
    let r1 = compute_kernel(&t2(3), ConstraintMode::FAndFStar);
    let r2 = compute_kernel(&t2(3), ConstraintMode::FOnly);
    assert_eq!(r1.one().add(&r2.one()), Err(KernelError::RingMismatch));
    assert_eq!(r1.one().mul(&r2.one()), Err(KernelError::RingMismatch));
}

#[test]
fn non_kernel_matrix_is_rejected() {
    let ring = compute_kernel(&t2(3), ConstraintMode::FAndFStar);
    let swap = Endo::from_rows(3, vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]).unwrap();
    assert_eq!(ring.element(&swap), Err(KernelError::NotInKernel));
    assert!(ring.element(&Endo::identity(3, 2)).is_err());
}

#[test]
fn units_fix_the_family() {
    let families = [t2(3), t2(4), t2(5), build_secant2(&FieldSpec::for_order(4).unwrap(), 0).unwrap()];
    for fam in families {
        let ring = compute_kernel(&fam, ConstraintMode::FAndFStar);
        for u in ring.elements().filter(|e| e.is_unit()) {
            assert_eq!(u.image_family().unwrap(), fam);
            assert!(u.inverse().unwrap().mul(&u).unwrap().matrix().is_identity());
        }
    }
}

#[test]
fn zero_image_fails_kf1() {
    let ring = compute_kernel(&t2(3), ConstraintMode::FAndFStar);
    let img = ring.zero().image_family().unwrap();
    assert!(!crate::kantor::verify_kf(&img).kf1.passed());
}

#[test]
fn coordinates_round_trip() {
    let ring = compute_kernel(&t2(2), ConstraintMode::FOnly);
    for e in ring.elements() {
        assert_eq!(ring.from_coords(&ring.coords(e.matrix())), e);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn polynomials_in_one_element_commute(
        m in 0i64..100,
        r in proptest::collection::vec(-20i64..20, 0..5),
        h in proptest::collection::vec(-20i64..20, 0..5),
    ) {
        let ring = compute_kernel(&t2(4), ConstraintMode::FAndFStar);
        let e = ring.elements().nth((m % 4) as usize).unwrap();
        let (a, b) = (e.eval_poly(&r), e.eval_poly(&h));
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert!(ring.preserves(a.matrix()));
    }
}
