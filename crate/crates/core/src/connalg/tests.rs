use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn mat(nvars: usize, rows: &[Vec<i64>]) -> RMat {
    RMat::from_integers(nvars, rows).unwrap()
}

fn e(size: usize, nvars: usize, i: usize, j: usize) -> RMat {
    RMat::unit(size, nvars, i, j)
}

fn x(nvars: usize, i: usize) -> RatFunc {
    RatFunc::var(nvars, i)
}

fn zero_form(size: usize, m: usize) -> MatForm {
    MatForm::zero(1, size, m)
}

/// `E12 dx`, `R_0 = I`, `R_∞ = diag(0, d)`, `A = 0` on a line.
fn e12_tuple(d: i64) -> FtsTuple {
    FtsTuple::new(
        1,
        vec![RMat::zero(2, 2)],
        vec![e(2, 2, 0, 1)],
        RMat::identity(2, 2),
        mat(2, &[vec![0, 0], vec![0, d]]),
        None,
    )
    .unwrap()
}

#[test]
fn rational_function_normalization() {
    let n = 2;
    let t = x(n, 0);
    let u = x(n, 1);
    // (t^2 - u^2) / (t - u) reduces to t + u.
    let f = RatFunc::new(
        t.mul(&t).sub(&u.mul(&u)).numerator().clone(),
        t.sub(&u).numerator().clone(),
    )
    .unwrap();
    assert!(f.denominator().is_constant());
    assert_eq!(f, t.add(&u));
    // t / (t^2 (1 + u)) has a simple pole.
    let g = t.mul(&t.mul(&t).mul(&RatFunc::one(n).add(&u)).inv().unwrap());
    assert_eq!(g.pole_order_t(), 1);
    assert_eq!(g.mul_t_power(1).at_t0(), Some(RatFunc::one(n).add(&u).inv().unwrap()));
    assert_eq!(RatFunc::inverse_t_power(n, 2).invert_t(), t.mul(&t));
    assert!(RatFunc::new(MPoly::one(n), MPoly::zero(n)).is_none());
}

#[test]
fn curvature_examples() {
    assert!(curvature(&zero_form(2, 2)).is_zero());

    let n = 2;
    let m = mat(n, &[vec![1, 2], vec![3, 4]]);
    let a = MatForm::one_form(RMat::zero(2, n), vec![m]).unwrap();
    assert!(curvature(&a).is_zero());

    // A = E12 x dy + E21 y dx with x = x1, y = x2.
    let n = 3;
    let (xx, yy) = (x(n, 1), x(n, 2));
    let a = MatForm::one_form(
        RMat::zero(2, n),
        vec![e(2, n, 1, 0).scale(&yy), e(2, n, 0, 1).scale(&xx)],
    )
    .unwrap();
    let f = curvature(&a);
    let expected = e(2, n, 0, 1)
        .sub(&e(2, n, 1, 0))
        .add(&e(2, n, 1, 1).sub(&e(2, n, 0, 0)).scale(&xx.mul(&yy)));
    assert_eq!(f.wedge_component(1, 2), &expected);
    assert!(f.wedge_component(0, 1).is_zero());
    assert!(f.wedge_component(0, 2).is_zero());
}

#[test]
fn gauge_transforms_of_zero_are_flat() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let r = rand::Rng::random_range(&mut rng, 1..=3usize);
        let m = rand::Rng::random_range(&mut rng, 1..=2usize);
        let n = m + 1;
        // Unipotent frame with polynomial entries in t and x, times a
        // diagonal factor (1 + x1) to bring in genuine denominators.
        let mut g = RMat::identity(r, n);
        for i in 0..r {
            for j in i + 1..r {
                let c = rand::Rng::random_range(&mut rng, -2i64..=2);
                let k = rand::Rng::random_range(&mut rng, 0..n);
                g.set(i, j, x(n, k).mul(&x(n, k)).scale(&q(c)).add(&x(n, 0)));
            }
        }
        g.set(0, 0, RatFunc::one(n).add(&x(n, 1)));
        let inv = g.inverse().unwrap();
        assert_eq!(inv.mul(&g), RMat::identity(r, n));
        let comps: Vec<RMat> = (0..n).map(|k| inv.mul(&g.derivative(k))).collect();
        let a = MatForm::one_form(comps[0].clone(), comps[1..].to_vec()).unwrap();
        assert!(curvature(&a).is_zero());
    }
}

#[test]
fn poincare_rank_examples() {
    let n = 2;
    let omega = RMat::identity(2, n).scale(&x(n, 1));
    let log = MatForm::one_form(omega.scale(&RatFunc::inverse_t_power(n, 1)), vec![RMat::zero(2, n)]).unwrap();
    assert_eq!(poincare_rank(&log), 0);

    let phi = e(2, n, 0, 1).scale(&x(n, 1));
    let r0 = mat(n, &[vec![1, 0], vec![0, 2]]);
    let irregular = MatForm::one_form(
        r0.scale(&RatFunc::inverse_t_power(n, 2)),
        vec![phi.scale(&RatFunc::inverse_t_power(n, 1))],
    )
    .unwrap();
    assert_eq!(poincare_rank(&irregular), 1);

    let holo = MatForm::one_form(RMat::zero(2, n), vec![mat(n, &[vec![1, 1], vec![0, 1]])]).unwrap();
    assert_eq!(poincare_rank(&holo), -1);

    // dx/t^3 alone has rank 3.
    let steep = MatForm::one_form(RMat::zero(1, n), vec![RMat::identity(1, n).scale(&RatFunc::inverse_t_power(n, 3))]).unwrap();
    assert_eq!(poincare_rank(&steep), 3);
}

#[test]
fn log_restriction_examples() {
    let n = 2;
    let c = mat(n, &[vec![1, 2], vec![0, 3]]);
    let a = MatForm::one_form(c.scale(&RatFunc::inverse_t_power(n, 1)), vec![RMat::zero(2, n)]).unwrap();
    let res = log_restriction(&a).unwrap();
    assert_eq!(res.residue, c);
    assert!(res.restriction.iter().all(RMat::is_zero));
    assert!(res.report.passed());

    let mut omega = RMat::zero(2, n);
    omega.set(0, 0, x(n, 1));
    let a = MatForm::one_form(omega.scale(&RatFunc::inverse_t_power(n, 1)), vec![RMat::zero(2, n)]).unwrap();
    assert_eq!(log_restriction(&a).unwrap_err(), ConnError::NotFlat);

    let holo = MatForm::one_form(RMat::zero(2, n), vec![c]).unwrap();
    assert_eq!(
        log_restriction(&holo).unwrap_err(),
        ConnError::WrongRank { wanted: 0, found: -1 }
    );
}

#[test]
fn infinity_chart_is_logarithmic_with_residue_rinf() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut seen = 0;
    for _ in 0..60 {
        let t = random_tuple(&mut rng, RandomTupleSpec::default());
        if !verify_fts(&t).unwrap().flat {
            continue;
        }
        seen += 1;
        let s = to_s_chart(&assemble_nabla(&t));
        // In s = 1/t the connection reads ▽ + sΦ + (-s R_0 + R_∞) ds/s.
        let expected_ds = t.rinf().scale(&RatFunc::inverse_t_power(t.nvars(), 1)).sub(t.r0());
        assert_eq!(s.dt(), &expected_ds);
        assert!(poincare_rank(&s) <= 0);
        if poincare_rank(&s) == 0 {
            let res = log_restriction(&s).unwrap();
            assert_eq!(&res.residue, t.rinf());
            assert_eq!(res.restriction, t.nabla());
            assert!(res.report.passed());
        }
    }
    assert!(seen >= 10, "only {seen} flat tuples");
}

#[test]
fn rank1_restriction_round_trip() {
    let t = e12_tuple(1);
    let a = assemble_nabla(&t);
    let res = rank1_restriction(&a).unwrap();
    assert_eq!(res.phi, t.phi());
    assert_eq!(&res.r0, t.r0());
    assert!(res.report.higgs && res.report.commute);

    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut seen = 0;
    for _ in 0..60 {
        let t = random_tuple(&mut rng, RandomTupleSpec::default());
        let a = assemble_nabla(&t);
        if !verify_fts(&t).unwrap().flat || poincare_rank(&a) != 1 {
            continue;
        }
        seen += 1;
        let res = rank1_restriction(&a).unwrap();
        assert_eq!(res.phi, t.phi());
        assert_eq!(&res.r0, t.r0());
    }
    assert!(seen >= 10, "only {seen} usable tuples");
}

#[test]
fn rank1_scalar_and_guards() {
    let n = 2;
    let scalar = FtsTuple::new(
        1,
        vec![RMat::zero(1, n)],
        vec![mat(n, &[vec![0]])],
        mat(n, &[vec![3]]),
        mat(n, &[vec![1]]),
        None,
    )
    .unwrap();
    let res = rank1_restriction(&assemble_nabla(&scalar)).unwrap();
    assert!(res.report.higgs && res.report.commute);

    assert_eq!(
        rank1_restriction(&assemble_nabla(&e12_tuple(2))).unwrap_err(),
        ConnError::NotFlat
    );
    let log = MatForm::one_form(RMat::identity(1, n).scale(&RatFunc::inverse_t_power(n, 1)), vec![RMat::zero(1, n)]).unwrap();
    assert_eq!(
        rank1_restriction(&log).unwrap_err(),
        ConnError::WrongRank { wanted: 1, found: 0 }
    );
}

#[test]
fn assemble_examples() {
    assert!(assemble_nabla(&FtsTuple::zero(2, 1)).is_zero());

    let t = e12_tuple(1);
    let a = assemble_nabla(&t);
    let n = 2;
    let inv_t = RatFunc::inverse_t_power(n, 1);
    assert_eq!(a.dx(1), &e(2, n, 0, 1).scale(&inv_t));
    let dt = RMat::identity(2, n)
        .scale(&inv_t)
        .sub(&mat(n, &[vec![0, 0], vec![0, 1]]))
        .scale(&inv_t);
    assert_eq!(a.dt(), &dt);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..40 {
        let t = random_tuple(&mut rng, RandomTupleSpec::default());
        let a = assemble_nabla(&t);
        assert!(poincare_rank(&a) <= 1);
        let lead = a.dt().map(|e| e.mul_t_power(2).at_t0().unwrap());
        assert_eq!(&lead, t.r0());
        assert!(poincare_rank(&to_s_chart(&a)) <= 0);
    }
}

#[test]
fn six_conditions_examples() {
    let good = verify_fts(&e12_tuple(1)).unwrap();
    assert!(good.all_conditions() && good.flat);

    let bad = verify_fts(&e12_tuple(2)).unwrap();
    assert!(!bad.flat);
    let failing: Vec<&str> = bad.conditions.iter().filter(|c| !c.holds).map(|c| c.name).collect();
    assert_eq!(failing, vec![CONDITION_NAMES[5]]);

    let zero = verify_fts(&FtsTuple::zero(3, 2)).unwrap();
    assert!(zero.all_conditions() && zero.flat);
}

#[test]
fn six_conditions_match_flatness_on_random_tuples() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut flat, mut curved) = (0, 0);
    let mut failed_each = [0usize; 6];
    for _ in 0..200 {
        let t = random_tuple(&mut rng, RandomTupleSpec::default());
        let report = verify_fts(&t).expect("verdicts agree");
        if report.flat {
            flat += 1;
        } else {
            curved += 1;
        }
        for (k, c) in report.conditions.iter().enumerate() {
            if !c.holds {
                failed_each[k] += 1;
            }
        }
    }
    assert!(flat >= 40 && curved >= 40, "flat {flat}, curved {curved}");
    // Every condition fails somewhere; r = 1 tuples make Φ∧Φ and [Φ, R_0]
    // rarer, so only require presence.
    assert!(failed_each.iter().all(|&c| c > 0), "{failed_each:?}");
}

#[test]
fn metric_examples() {
    let n = 2;
    let id = RMat::identity(2, n);
    let zero = FtsTuple::zero(2, 1).with_metric(id.clone()).unwrap();
    let rep = verify_metric(&zero).unwrap();
    assert!(rep.identities_hold() && rep.pairing_flat);

    let skew = FtsTuple::new(
        1,
        vec![RMat::zero(2, n)],
        vec![RMat::zero(2, n)],
        RMat::zero(2, n),
        mat(n, &[vec![0, 1], vec![-1, 0]]),
        Some(id.clone()),
    )
    .unwrap();
    assert!(verify_metric(&skew).unwrap().rinf_skew_adjoint);

    let bad_r0 = FtsTuple::new(
        1,
        vec![RMat::zero(2, n)],
        vec![RMat::zero(2, n)],
        e(2, n, 0, 1),
        RMat::zero(2, n),
        Some(id),
    )
    .unwrap();
    let rep = verify_metric(&bad_r0).unwrap();
    assert!(!rep.r0_self_adjoint && !rep.pairing_flat);

    assert_eq!(verify_metric(&FtsTuple::zero(2, 1)).unwrap_err(), ConnError::NoMetric);
    let singular = FtsTuple::zero(2, 1).with_metric(mat(n, &[vec![1, 1], vec![1, 1]]));
    assert_eq!(singular.unwrap_err(), ConnError::SingularMetric);
    let asym = FtsTuple::zero(2, 1).with_metric(mat(n, &[vec![1, 1], vec![0, 1]]));
    assert_eq!(asym.unwrap_err(), ConnError::NotSymmetric);
}

#[test]
fn metric_identities_match_pairing_flatness() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (mut yes, mut no) = (0, 0);
    for _ in 0..150 {
        let t = random_metric_tuple(&mut rng, RandomTupleSpec::default());
        let rep = verify_metric(&t).expect("routes agree");
        if rep.pairing_flat {
            yes += 1;
        } else {
            no += 1;
        }
    }
    assert!(yes >= 20 && no >= 20, "flat {yes}, not flat {no}");
}

#[test]
fn tuple_construction_rejects_bad_input() {
    let n = 2;
    let with_t = RMat::identity(1, n).scale(&x(n, 0));
    let err = FtsTuple::new(1, vec![RMat::zero(1, n)], vec![with_t], RMat::zero(1, n), RMat::zero(1, n), None);
    assert_eq!(err.unwrap_err(), ConnError::TDependent);
    let err = FtsTuple::new(1, vec![], vec![RMat::zero(1, n)], RMat::zero(1, n), RMat::zero(1, n), None);
    assert!(matches!(err.unwrap_err(), ConnError::Shape(_)));
    assert!(RMat::from_integers(n, &[vec![1, 2]]).is_none());
}

#[test]
fn json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let t = random_metric_tuple(&mut rng, RandomTupleSpec::default());
        let text = serde_json::to_string(&TupleJson::from_tuple(&t)).unwrap();
        let back: TupleJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_tuple().unwrap(), t);

        let a = assemble_nabla(&t);
        let text = serde_json::to_string(&ConnectionJson::from_form(&a)).unwrap();
        let back: ConnectionJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_form().unwrap(), a);
    }
}

#[test]
fn json_reports_paths() {
    let text = r#"{"m":1,"dt":[["0"]],"dx":[[[[{"c":"1","deg":{"y":1}}]]]]}"#;
    let c: ConnectionJson = serde_json::from_str(text).unwrap();
    match c.to_form().unwrap_err() {
        ConnError::Parse { path, .. } => assert_eq!(path, "dx[0][0][0][0].deg"),
        other => panic!("unexpected {other:?}"),
    }
    let text = r#"{"m":1,"dt":[["0"]],"dx":[[["1/0"]]]}"#;
    let c: ConnectionJson = serde_json::from_str(text).unwrap();
    assert!(matches!(c.to_form().unwrap_err(), ConnError::Parse { .. }));
}

fn arb_ratfunc() -> impl Strategy<Value = RatFunc> {
    let term = (prop::collection::vec(0u32..3, 3), -3i64..=3);
    let poly = prop::collection::vec(term, 0..4)
        .prop_map(|ts| MPoly::from_terms(3, ts.into_iter().map(|(e, c)| (e, q(c)))));
    (poly.clone(), poly).prop_filter_map("nonzero denominator", |(a, b)| RatFunc::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in arb_ratfunc(), b in arb_ratfunc(), c in arb_ratfunc()) {
        prop_assert_eq!(a.add(&b).sub(&b), a.clone());
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        if !b.is_zero() {
            prop_assert_eq!(a.mul(&b).mul(&b.inv().unwrap()), a.clone());
        }
    }

    #[test]
    fn leibniz_rule(a in arb_ratfunc(), b in arb_ratfunc(), v in 0usize..3) {
        let lhs = a.mul(&b).derivative(v);
        let rhs = a.derivative(v).mul(&b).add(&a.mul(&b.derivative(v)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn chart_changes_are_involutions(a in arb_ratfunc()) {
        prop_assert_eq!(a.invert_t().invert_t(), a.clone());
        prop_assert_eq!(a.negate_t().negate_t(), a.clone());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in arb_ratfunc(), b in arb_ratfunc(), p in prop::collection::vec(-3i64..=3, 3)) {
        let pt: Vec<BigRational> = p.into_iter().map(q).collect();
        if let (Some(x), Some(y)) = (a.eval(&pt), b.eval(&pt)) {
            prop_assert_eq!(a.mul(&b).eval(&pt), Some(&x * &y));
        }
    }
}
