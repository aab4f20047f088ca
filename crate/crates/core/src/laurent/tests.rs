use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::ffield::{enumerate_torus, make_field, FieldSpec, FqElem};
use crate::EnumConfig;

fn lp(field: &FieldSpec, n: usize, terms: &[(i64, &[i64])]) -> LaurentPoly<FqElem> {
    LaurentPoly::from_terms(n, terms.iter().map(|(c, w)| (w.to_vec(), field.from_i64(*c)))).unwrap()
}

fn kloosterman(field: &FieldSpec) -> LaurentPoly<FqElem> {
    lp(field, 1, &[(1, &[1]), (1, &[-1])])
}

fn cfg() -> EnumConfig {
    EnumConfig::with_budget(10_000_000)
}

#[test]
fn evaluate_examples() {
    let f5 = make_field(5, 1).unwrap();
    let two = f5.from_i64(2);
    assert!(kloosterman(&f5).evaluate(&[two.clone()]).unwrap().is_zero());
    assert!(LaurentPoly::<FqElem>::zero(1).evaluate(&[two.clone()]).unwrap().is_zero());
    assert_eq!(lp(&f5, 1, &[(3, &[0])]).evaluate(&[two]).unwrap(), f5.from_i64(3));
    assert_eq!(
        kloosterman(&f5).evaluate(&[f5.zero()]).unwrap_err(),
        LaurentError::ZeroCoordinate
    );
    assert!(matches!(
        kloosterman(&f5).evaluate(&[]),
        Err(LaurentError::ArityMismatch { .. })
    ));
}

#[test]
fn log_derivative_examples() {
    let f7 = make_field(7, 1).unwrap();
    let f = lp(&f7, 2, &[(1, &[1, 2])]);
    assert_eq!(f.log_derivative(1), lp(&f7, 2, &[(2, &[1, 2])]));
    assert_eq!(kloosterman(&f7).log_derivative(0), lp(&f7, 1, &[(1, &[1]), (-1, &[-1])]));
    assert!(lp(&f7, 1, &[(1, &[7])]).log_derivative(0).is_zero());
}

#[test]
fn specialize_examples() {
    let f5 = make_field(5, 1).unwrap();
    let f = kloosterman(&f5);
    let d = Deformation::new(
        f5.clone(),
        f.clone(),
        vec![lp(&f5, 1, &[(1, &[0])])],
        DeformationKind::Subdiagram,
    )
    .unwrap();
    assert_eq!(d.specialize(&[f5.zero()]).unwrap(), f);
    assert_eq!(
        d.specialize(&[f5.from_i64(3)]).unwrap(),
        lp(&f5, 1, &[(1, &[1]), (1, &[-1]), (3, &[0])])
    );
    let t = lp(&f5, 1, &[(1, &[1])]);
    let cancel = Deformation::new(
        f5.clone(),
        t.clone(),
        vec![t.clone()],
        DeformationKind::NewtonPreserving,
    )
    .unwrap();
    assert!(cancel.specialize(&[f5.from_i64(-1)]).unwrap().is_zero());
    // t is on the boundary of [0, 1], so it is not a subdiagram direction.
    assert!(matches!(
        Deformation::new(f5.clone(), t.clone(), vec![t], DeformationKind::Subdiagram),
        Err(LaurentError::KindViolation { .. })
    ));
}

#[test]
fn phi_map_examples() {
    let f5 = make_field(5, 1).unwrap();
    let d = Deformation::new(
        f5.clone(),
        kloosterman(&f5),
        vec![lp(&f5, 1, &[(1, &[0])])],
        DeformationKind::Subdiagram,
    )
    .unwrap();
    let table = MonomialTable::new(1, vec![vec![1], vec![-1], vec![0]]).unwrap();
    let tau = f5.from_i64(2);
    let c = f5.from_i64(4);
    let y = phi_map(&d, &table, &tau, &[c.clone()]).unwrap();
    assert_eq!(y, vec![tau.clone(), tau.clone(), &tau * &c]);
    let y0 = phi_map(&d, &table, &f5.one(), &[f5.zero()]).unwrap();
    assert_eq!(y0, vec![f5.one(), f5.one(), f5.zero()]);
    assert_eq!(
        phi_map(&d, &table, &f5.zero(), &[c.clone()]).unwrap_err(),
        LaurentError::ZeroTau
    );
    let short = MonomialTable::new(1, vec![vec![1], vec![-1]]).unwrap();
    assert_eq!(
        phi_map(&d, &short, &tau, &[c]).unwrap_err(),
        LaurentError::TableMismatch(vec![0])
    );
    assert_eq!(
        MonomialTable::from_deformation(&d).points(),
        &[vec![-1], vec![1], vec![0]]
    );
    assert!(MonomialTable::new(1, vec![vec![1], vec![1]]).is_err());
}

#[test]
fn phi_map_reproduces_the_family() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (p, m) in [(5u64, 1usize), (5, 2), (3, 2), (7, 1)] {
        let field = make_field(p, m).unwrap();
        let f = lp(&field, 2, &[(1, &[1, 0]), (1, &[0, 1]), (1, &[-1, -1])]);
        let dirs = vec![lp(&field, 2, &[(1, &[0, 0])]), lp(&field, 2, &[(2, &[0, 0]), (1, &[1, 0])])];
        let d = Deformation::new(field.clone(), f, dirs, DeformationKind::NewtonPreserving).unwrap();
        let table = MonomialTable::from_deformation(&d);
        for _ in 0..100 {
            let tau = field.random_nonzero(&mut rng);
            let x: Vec<FqElem> = (0..2).map(|_| field.random(&mut rng)).collect();
            let t: Vec<FqElem> = (0..2).map(|_| field.random_nonzero(&mut rng)).collect();
            let lhs = &tau * &d.specialize(&x).unwrap().evaluate(&t).unwrap();
            let y = phi_map(&d, &table, &tau, &x).unwrap();
            let rhs = table.polynomial(&y).unwrap().evaluate(&t).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn specialize_is_affine_linear() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let field = make_field(7, 2).unwrap();
    let f = lp(&field, 1, &[(1, &[2]), (3, &[-1])]);
    let dirs = vec![lp(&field, 1, &[(1, &[1]), (1, &[0])]), lp(&field, 1, &[(5, &[0])])];
    let d = Deformation::new(field.clone(), f.clone(), dirs, DeformationKind::Subdiagram).unwrap();
    for _ in 0..50 {
        let x: Vec<FqElem> = (0..2).map(|_| field.random(&mut rng)).collect();
        let y: Vec<FqElem> = (0..2).map(|_| field.random(&mut rng)).collect();
        let xy: Vec<FqElem> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
        let minus_one = field.from_i64(-1);
        let combo = d
            .specialize(&xy)
            .unwrap()
            .add(&d.specialize(&x).unwrap().scale(&minus_one))
            .add(&d.specialize(&y).unwrap().scale(&minus_one))
            .add(&f);
        assert!(combo.is_zero());
    }
}

fn arb_rational_poly() -> impl Strategy<Value = LaurentPoly<BigRational>> {
    prop::collection::vec((prop::collection::vec(-2i64..=2, 2), -5i64..=5), 0..5).prop_map(|terms| {
        LaurentPoly::from_terms(
            2,
            terms
                .into_iter()
                .map(|(w, c)| (w, BigRational::from_integer(BigInt::from(c)))),
        )
        .unwrap()
    })
}

proptest! {
    #[test]
    fn leibniz_rule_over_q(f in arb_rational_poly(), g in arb_rational_poly(), axis in 0usize..2) {
        let lhs = f.mul(&g).log_derivative(axis);
        let rhs = f.mul(&g.log_derivative(axis)).add(&g.mul(&f.log_derivative(axis)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn leibniz_rule_over_f7(
        f in prop::collection::vec((prop::collection::vec(-9i64..=9, 2), 0i64..7), 0..5),
        g in prop::collection::vec((prop::collection::vec(-9i64..=9, 2), 0i64..7), 0..5),
        axis in 0usize..2,
    ) {
        let field = make_field(7, 1).unwrap();
        let mk = |terms: &[(Vec<i64>, i64)]| {
            LaurentPoly::from_terms(2, terms.iter().map(|(w, c)| (w.clone(), field.from_i64(*c)))).unwrap()
        };
        let (f, g) = (mk(&f), mk(&g));
        let lhs = f.mul(&g).log_derivative(axis);
        let rhs = f.mul(&g.log_derivative(axis)).add(&g.mul(&f.log_derivative(axis)));
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn nondegeneracy_examples() {
    for p in [3u64, 5, 7] {
        let field = make_field(p, 1).unwrap();
        let f = kloosterman(&field);
        let delta = f.newton_polyhedron().unwrap();
        assert_eq!(
            check_nondegenerate(&f, &field, &delta, 3, &cfg()).unwrap(),
            Nondegeneracy::VerifiedUpTo { max_k: 3, conclusive: true }
        );
        // (t - 1)^2 = t^2 - 2t + 1: the only face avoiding 0 is the vertex {2}.
        let sq = lp(&field, 1, &[(1, &[2]), (-2, &[1]), (1, &[0])]);
        let delta = sq.newton_polyhedron().unwrap();
        assert_eq!(
            check_nondegenerate(&sq, &field, &delta, 2, &cfg()).unwrap(),
            Nondegeneracy::VerifiedUpTo { max_k: 2, conclusive: true }
        );
    }
    let f2 = make_field(2, 1).unwrap();
    let f = lp(&f2, 2, &[(1, &[1, 0]), (1, &[0, 1]), (1, &[1, 1])]);
    let delta = f.newton_polyhedron().unwrap();
    assert_eq!(
        check_nondegenerate(&f, &f2, &delta, 3, &cfg()).unwrap(),
        Nondegeneracy::VerifiedUpTo { max_k: 3, conclusive: false }
    );
    // A vertex whose exponent vanishes mod p.
    let f3 = make_field(3, 1).unwrap();
    let cube = lp(&f3, 1, &[(1, &[3]), (1, &[-1])]);
    let delta = cube.newton_polyhedron().unwrap();
    match check_nondegenerate(&cube, &f3, &delta, 1, &cfg()).unwrap() {
        Nondegeneracy::DegenerateAt { face, k, .. } => {
            assert_eq!(face, vec![vec![3]]);
            assert_eq!(k, 1);
        }
        other => panic!("expected a witness, got {other:?}"),
    }
}

#[test]
fn degenerate_edge_has_a_genuine_witness() {
    // (t1 + t2)^2: along the edge from (2,0) to (0,2) both logarithmic
    // derivatives vanish on t2 = -t1.
    let field = make_field(5, 1).unwrap();
    let f = lp(&field, 2, &[(1, &[2, 0]), (2, &[1, 1]), (1, &[0, 2]), (1, &[-1, -1])]);
    let delta = f.newton_polyhedron().unwrap();
    match check_nondegenerate(&f, &field, &delta, 2, &cfg()).unwrap() {
        Nondegeneracy::DegenerateAt { face, point, k } => {
            assert_eq!(k, 1);
            assert_eq!(face, vec![vec![0, 2], vec![2, 0]]);
            let f_sigma = lp(&field, 2, &[(1, &[2, 0]), (2, &[1, 1]), (1, &[0, 2])]);
            for axis in 0..2 {
                assert!(f_sigma.log_derivative(axis).evaluate(&point).unwrap().is_zero());
            }
        }
        other => panic!("expected a witness, got {other:?}"),
    }
}

#[test]
fn nondegeneracy_respects_budget() {
    let field = make_field(101, 1).unwrap();
    let f = lp(&field, 2, &[(1, &[1, 0]), (1, &[0, 1]), (1, &[1, 1])]);
    let delta = f.newton_polyhedron().unwrap();
    let err = check_nondegenerate(&f, &field, &delta, 3, &EnumConfig::with_budget(1000)).unwrap_err();
    assert!(err.is_budget());
}

#[test]
fn critical_count_examples() {
    let f5 = make_field(5, 1).unwrap();
    assert_eq!(critical_count(&kloosterman(&f5), &f5, 1, &cfg()).unwrap(), 2);
    for k in 1..=3 {
        assert_eq!(critical_count(&lp(&f5, 1, &[(1, &[1])]), &f5, k, &cfg()).unwrap(), 0);
    }
    let f3 = make_field(3, 1).unwrap();
    let f = lp(&f3, 2, &[(1, &[1, 0]), (1, &[0, 1]), (1, &[-1, -1])]);
    for k in 1..=4 {
        assert_eq!(critical_count(&f, &f3, k, &cfg()).unwrap(), 1, "k = {k}");
    }
    let check = rank_check(&kloosterman(&f5), &f5, 2, &cfg()).unwrap();
    assert_eq!(check.normalized_volume, 2);
    assert!(check.bound_ok && check.rank_confirmed);
}

/// Critical points by plain enumeration and direct evaluation.
fn brute_critical(f: &LaurentPoly<FqElem>, field: &FieldSpec) -> u64 {
    let derivs: Vec<_> = (0..f.nvars()).map(|i| f.log_derivative(i)).collect();
    enumerate_torus(field, f.nvars(), u64::MAX)
        .unwrap()
        .iter()
        .filter(|t| derivs.iter().all(|g| g.evaluate(t).unwrap().is_zero()))
        .count() as u64
}

#[test]
fn critical_count_matches_direct_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (p, m) in [(5u64, 1usize), (7, 1), (3, 2), (2, 3)] {
        let field = make_field(p, m).unwrap();
        for _ in 0..6 {
            let terms: Vec<(Vec<i64>, FqElem)> = (0..4)
                .map(|_| {
                    let w = vec![rand::Rng::random_range(&mut rng, -3..=3), rand::Rng::random_range(&mut rng, -3..=3)];
                    (w, field.random(&mut rng))
                })
                .collect();
            let f = LaurentPoly::from_terms(2, terms).unwrap();
            for parts in [1, 3] {
                let got = critical_count(&f, &field, 1, &cfg().with_partitions(parts)).unwrap();
                assert_eq!(got, brute_critical(&f, &field));
            }
        }
    }
}
