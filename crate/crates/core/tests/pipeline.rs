//! End-to-end use of the public API across modules.

use num_bigint::BigInt;
use num_rational::BigRational;

use arith_lg_core::connalg::{
    assemble_nabla, curvature, rank1_restriction, verify_fts, FtsTuple, RMat, RatFunc, TupleJson,
};
use arith_lg_core::cyclotomic::{linear_recurrence_reconstruct, CycloNum, CycloPoly};
use arith_lg_core::expsum::{family_sum, reference, Character};
use arith_lg_core::ffield::{make_field, FieldSpec, FqElem};
use arith_lg_core::frobdata::{frobenius_report, monodromy_filtration, QMatrix, DEFAULT_MAX_RANK};
use arith_lg_core::laurent::{Deformation, LaurentPoly};
use arith_lg_core::EnumConfig;

fn poly(field: &FieldSpec, n: usize, terms: &[(i64, &[i64])]) -> LaurentPoly<FqElem> {
    LaurentPoly::from_terms(n, terms.iter().map(|(c, w)| (w.to_vec(), field.from_i64(*c)))).unwrap()
}

/// `sum_{t in F_p^*} zeta^(t + 1/t)` with integer arithmetic only.
fn kloosterman_by_hand(p: u64) -> CycloNum {
    let mut weights = vec![0i64; p as usize];
    for t in 1..p {
        let inv = (1..p).find(|u| t * u % p == 1).unwrap();
        weights[((t + inv) % p) as usize] += 1;
    }
    CycloNum::from_exponent_weights(p, &weights)
}

#[test]
fn kloosterman_frobenius_over_f7_and_f11() {
    let config = EnumConfig::default();
    for p in [7u64, 11] {
        let field = make_field(p, 1).unwrap();
        let d = Deformation::trivial(field.clone(), poly(&field, 1, &[(1, &[1]), (1, &[-1])])).unwrap();
        let r = frobenius_report(&d, &field.one(), &[], DEFAULT_MAX_RANK, &config).unwrap();
        assert_eq!(r.power_sums[0], -&kloosterman_by_hand(p));
        assert_eq!(
            r.char_poly.coeff(0).as_rational(),
            Some(&BigRational::from_integer(BigInt::from(p)))
        );
        assert!(r.purity_ok && r.duality_ok);
    }
}

#[test]
fn table_kernel_matches_pointwise_reference_over_f8() {
    let config = EnumConfig::default();
    let f2 = make_field(2, 1).unwrap();
    let f = poly(&f2, 2, &[(1, &[1, 0]), (1, &[0, 1]), (1, &[-1, -1]), (1, &[1, 1])]);
    let d = Deformation::trivial(f2.clone(), f).unwrap();
    let f8 = make_field(2, 3).unwrap();
    for tau in f8.elements().filter(|a| !a.is_zero()) {
        let fast = family_sum(&d, 3, &tau, &[], &config).unwrap();
        let slow = reference::family_sum(&d, 3, &tau, &[], Character::Psi, &config).unwrap();
        assert_eq!(fast, slow);
    }
}

#[test]
fn planted_l_function_is_recovered() {
    // L = (1 - 2T) / (1 - 3T) has c_k = 3^k - 2^k.
    let c: Vec<CycloNum> = (1..=8u32)
        .map(|k| CycloNum::from_integer(5, 3i64.pow(k) - 2i64.pow(k)))
        .collect();
    let rf = linear_recurrence_reconstruct(&c).unwrap();
    assert_eq!(rf.numerator, CycloPoly::from_integers(5, &[1, -2]));
    assert_eq!(rf.denominator, CycloPoly::from_integers(5, &[1, -3]));
    assert!(rf.stable);
}

#[test]
fn jordan_type_two_two() {
    let n = QMatrix::from_integers(&[
        vec![0, 1, 0, 0],
        vec![0, 0, 0, 0],
        vec![0, 0, 0, 1],
        vec![0, 0, 0, 0],
    ])
    .unwrap();
    let f = monodromy_filtration(&n).unwrap();
    let dims: Vec<(i64, usize)> = f.graded_dims().into_iter().collect();
    assert_eq!(dims, vec![(-1, 2), (1, 2)]);
}

#[test]
fn gauged_tuple_stays_flat_through_json() {
    // A flat constant tuple on two base coordinates, moved by a frame that
    // depends on x1 and x2.
    let n = 3;
    let phi = RMat::unit(2, n, 0, 1);
    let base = FtsTuple::new(
        2,
        vec![RMat::zero(2, n), RMat::zero(2, n)],
        vec![phi.clone(), phi.scale(&RatFunc::integer(n, 2))],
        RMat::identity(2, n).scale(&RatFunc::integer(n, 3)),
        RMat::from_integers(n, &[vec![1, 0], vec![0, 2]]).unwrap(),
        None,
    )
    .unwrap();
    let mut frame = RMat::identity(2, n);
    frame.set(0, 1, RatFunc::var(n, 1).mul(&RatFunc::var(n, 2)));
    let t = base.gauge(&frame).unwrap();
    let report = verify_fts(&t).unwrap();
    assert!(report.flat && report.all_conditions());

    let text = serde_json::to_string(&TupleJson::from_tuple(&t)).unwrap();
    let back = serde_json::from_str::<TupleJson>(&text).unwrap().to_tuple().unwrap();
    let a = assemble_nabla(&back);
    assert!(curvature(&a).is_zero());
    let res = rank1_restriction(&a).unwrap();
    assert_eq!(res.phi, back.phi());
    assert_eq!(&res.r0, back.r0());
}
