use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

fn z(k: i64) -> DirectedSystem {
    DirectedSystem::lattice(from_i64(&[vec![k]])).unwrap()
}

fn diag23() -> DirectedSystem {
    DirectedSystem::lattice(from_i64(&[vec![2, 0], vec![0, 3]])).unwrap()
}

fn companion() -> DirectedSystem {
    // x² − x − 1
    DirectedSystem::lattice(from_i64(&[vec![0, 1], vec![1, 1]])).unwrap()
}

fn el(sys: &DirectedSystem, g: &[i64], level: i64) -> ColimitElement {
    sys.element_i64(g, level).unwrap()
}

/// Leibniz expansion.
fn det_oracle(a: &[Vec<i64>]) -> i64 {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for k in 0..n {
                let mut q = p.clone();
                q.insert(k, n - 1);
                out.push(q);
            }
        }
        out
    }
    let n = a.len();
    perms(n)
        .iter()
        .map(|p| {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let sign = if inversions % 2 == 0 { 1 } else { -1 };
            sign * (0..n).map(|i| a[i][p[i]]).product::<i64>()
        })
        .sum()
}

#[test]
fn scalar_examples() {
    let s = z(2);
    assert!(s.equal(&el(&s, &[1], 0), &el(&s, &[2], 1)).unwrap());
    assert!(!s.equal(&el(&s, &[1], 0), &el(&s, &[1], 1)).unwrap());
    assert!(s.equal(&el(&s, &[0], 5), &el(&s, &[0], -7)).unwrap());
    let sum = s.add(&el(&s, &[1], 0), &el(&s, &[1], 1)).unwrap();
    assert_eq!(sum, el(&s, &[3], 1));
    let a = s.alpha_tilde(&el(&s, &[1], 1));
    assert_eq!(a, el(&s, &[2], 1));
    assert!(s.equal(&a, &el(&s, &[1], 0)).unwrap());
    assert_eq!(s.alpha_tilde(&el(&s, &[3], 0)), el(&s, &[6], 0));
}

#[test]
fn construction_errors() {
    assert_eq!(DirectedSystem::lattice(from_i64(&[vec![1, 2], vec![2, 4]])), Err(DirlimError::NotInjective));
    assert_eq!(DirectedSystem::lattice(from_i64(&[vec![1, 2]])), Err(DirlimError::NotSquare));
    assert_eq!(DirectedSystem::elementary(4, from_i64(&[vec![1]])), Err(DirlimError::NotPrime(4)));
    assert_eq!(DirectedSystem::elementary(3, from_i64(&[vec![3]])), Err(DirlimError::NotInjective));
    let s = diag23();
    assert!(s.equal(&el(&s, &[1, 0], 0), &s.element_i64(&[1], 0).unwrap_or(s.zero())).is_ok());
    assert!(s.element_i64(&[1], 0).is_err());
    let bad = ColimitElement { g: vec![BigInt::from(1)], level: 0 };
    assert!(s.equal(&bad, &s.zero()).is_err());
}

#[test]
fn det_matches_leibniz() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=4 {
        for _ in 0..50 {
            let a: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-5..=5)).collect()).collect();
            assert_eq!(det(&from_i64(&a)), BigInt::from(det_oracle(&a)), "{a:?}");
            let adj = adjugate(&from_i64(&a));
            let d = det(&from_i64(&a));
            let prod = mat_mul(&from_i64(&a), &adj);
            for (i, row) in prod.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    assert_eq!(*x, if i == j { d.clone() } else { BigInt::zero() });
                }
            }
        }
    }
}

#[test]
fn membership_matches_box_search() {
    for sys in [diag23(), companion(), DirectedSystem::lattice(from_i64(&[vec![1, 2], vec![-1, 3]])).unwrap()] {
        for g0 in -6i64..=6 {
            for g1 in -6i64..=6 {
                let g = [BigInt::from(g0), BigInt::from(g1)];
                let found = (-30i64..=30).any(|h0| {
                    (-30i64..=30).any(|h1| mat_vec(sys.zeta(), &[BigInt::from(h0), BigInt::from(h1)]) == g)
                });
                assert_eq!(solve_integral(sys.zeta(), &g).is_some(), found, "{g0} {g1}");
            }
        }
    }
}

#[test]
fn at_level_recovers_preimages() {
    let s = diag23();
    let e = el(&s, &[4, 9], 2);
    assert_eq!(s.at_level(&e, 0).unwrap(), Some(vec![BigInt::from(1), BigInt::from(1)]));
    assert_eq!(s.at_level(&el(&s, &[4, 3], 2), 0).unwrap(), None);
    assert_eq!(s.at_level(&el(&s, &[1, 1], 0), 1).unwrap(), Some(vec![BigInt::from(2), BigInt::from(3)]));
}

#[test]
fn strictness_of_doubling() {
    let s = z(2);
    let Strictness::Strict { witnesses } = strictness_test(&s, 5) else { panic!() };
    assert_eq!(witnesses.len(), 5);
    for (j, w) in witnesses.iter().enumerate() {
        assert_eq!(*w, el(&s, &[1], j as i64 + 1));
        assert!(recheck_strict_witness(&s, w));
        // and no level j - 1 element equals it, in a window
        assert!((-40..=40).all(|h| !s.equal(w, &el(&s, &[h], j as i64)).unwrap()));
    }
    assert!(!recheck_strict_witness(&s, &el(&s, &[2], 1)));
    assert!(strictness_test(&diag23(), 5).is_strict());
}

#[test]
fn trivializing_systems() {
    let id = DirectedSystem::lattice(identity(2)).unwrap();
    assert_eq!(
        strictness_test(&id, 5),
        Strictness::NonStrict { reason: NonStrictReason::Unimodular, collapse_verified: true }
    );
    assert_eq!(
        strictness_test(&companion(), 5),
        Strictness::NonStrict { reason: NonStrictReason::Unimodular, collapse_verified: true }
    );
    for zeta in [vec![vec![1, 1], vec![0, 1]], vec![vec![2, 0], vec![0, 2]], vec![vec![0, 1], vec![1, 1]]] {
        let s = DirectedSystem::elementary(3, from_i64(&zeta)).unwrap();
        assert_eq!(
            strictness_test(&s, 5),
            Strictness::NonStrict { reason: NonStrictReason::FiniteBase, collapse_verified: true }
        );
        // every element of every level up to 3 equals a level-0 element
        for level in 0..=3 {
            for a in 0..3 {
                for b in 0..3 {
                    let e = el(&s, &[a, b], level);
                    let found = (0..9).any(|k| s.equal(&e, &el(&s, &[k / 3, k % 3], 0)).unwrap());
                    assert!(found);
                }
            }
        }
    }
}

#[test]
fn commuting_squares() {
    for sys in [z(2), diag23(), companion()] {
        for m in [-3i64, 0, 1, 5] {
            let phi = zeta_polynomial(&sys, &[m]);
            assert!(verify_commuting_square(&sys, &phi, 6).unwrap().passed());
        }
        assert!(verify_commuting_square(&sys, sys.zeta(), 6).unwrap().passed());
        let h = zeta_polynomial(&sys, &[2, -1, 3]);
        let r = verify_commuting_square(&sys, &h, 6).unwrap();
        assert!(r.passed());
        assert_eq!(r.checks, 7 * (sys.rank() + 1));
    }
    let swap = from_i64(&[vec![0, 1], vec![1, 0]]);
    assert_eq!(verify_commuting_square(&diag23(), &swap, 3), Err(DirlimError::NotCommuting));
    assert_eq!(commuting_square_suite(&diag23(), &swap, 10, 0), Err(DirlimError::NotCommuting));
}

#[test]
fn zeta_polynomial_matches_powers() {
    let s = companion();
    let h = zeta_polynomial(&s, &[1, 2, 3]);
    let expect: Matrix = {
        let (a, b) = (mat_pow(s.zeta(), 1), mat_pow(s.zeta(), 2));
        (0..2)
            .map(|i| (0..2).map(|j| BigInt::from((i == j) as i32) + 2 * &a[i][j] + 3 * &b[i][j]).collect())
            .collect()
    };
    assert_eq!(h, expect);
}

#[test]
fn property_suites_pass() {
    for (seed, sys) in [z(2), diag23(), companion()].into_iter().enumerate() {
        let seed = seed as u64;
        assert!(group_law_suite(&sys, 1000, seed).unwrap().passed());
        assert!(automorphism_suite(&sys, 1000, seed).unwrap().passed());
        let h = zeta_polynomial(&sys, &[1, -2, 1]);
        assert!(commuting_square_suite(&sys, &h, 1000, seed).unwrap().passed());
    }
}

#[test]
fn finite_base_suites_pass() {
    let s = DirectedSystem::elementary(5, from_i64(&[vec![2, 1], vec![0, 3]])).unwrap();
    assert!(group_law_suite(&s, 200, 1).unwrap().passed());
    assert!(automorphism_suite(&s, 200, 1).unwrap().passed());
}

proptest! {
    #[test]
    fn equal_agrees_with_lifting(g in -100i64..100, h in -100i64..100, i in -3i64..3, j in -3i64..3) {
        let s = z(2);
        let (a, b) = (el(&s, &[g], i), el(&s, &[h], j));
        let top = i.max(j);
        let expect = g * 2i64.pow((top - i) as u32) == h * 2i64.pow((top - j) as u32);
        prop_assert_eq!(s.equal(&a, &b).unwrap(), expect);
        prop_assert_eq!(s.equal(&b, &a).unwrap(), expect);
    }

    #[test]
    fn level_copies_are_subgroups(g in proptest::collection::vec(-50i64..50, 2), h in proptest::collection::vec(-50i64..50, 2), j in 0i64..4) {
        let s = diag23();
        let (a, b) = (el(&s, &g, j), el(&s, &h, j));
        let sum = s.add(&a, &b).unwrap();
        prop_assert_eq!(sum.level, j);
        // the level-j copy embeds in the level-(j + 1) copy
        prop_assert!(s.at_level(&a, j + 1).unwrap().is_some());
    }
}
