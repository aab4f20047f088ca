use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::ffield::make_field;

fn int(p: u64, n: i64) -> CycloNum {
    CycloNum::from_integer(p, n)
}

fn z(p: u64, e: i64) -> CycloNum {
    CycloNum::zeta_pow(p, e)
}

/// `sum_i coeffs[i] zeta^i` with `i` ranging over all residues.
fn cyclo(p: u64, coeffs: &[i64]) -> CycloNum {
    CycloNum::from_exponent_weights(p, coeffs)
}

#[test]
fn psi_examples() {
    let f5 = make_field(5, 1).unwrap();
    assert!(psi(&f5.zero()).is_one());
    assert_eq!(psi(&f5.from_i64(2)), z(5, 2));
    for (p, m) in [(2u64, 1usize), (3, 2), (5, 2), (2, 3), (7, 1)] {
        let field = make_field(p, m).unwrap();
        let total = field
            .elements()
            .fold(CycloNum::zero(p), |acc, a| &acc + &psi(&a));
        assert!(total.is_zero(), "orthogonality over F_{p}^{m}");
        assert!(field.elements().any(|a| !psi(&a).is_one()));
    }
}

#[test]
fn psi_is_additive() {
    let field = make_field(3, 2).unwrap();
    for a in field.elements() {
        for b in field.elements() {
            assert_eq!(psi(&(&a + &b)), &psi(&a) * &psi(&b));
        }
    }
}

#[test]
fn conj_sigma_examples() {
    assert_eq!(z(7, 1).conj_sigma(6).unwrap(), z(7, 6));
    assert_eq!(z(7, 1).conj_sigma(-1).unwrap(), z(7, -1));
    let q = CycloNum::from_rational(5, BigRational::new(3.into(), 7.into()));
    for a in 1..5 {
        assert_eq!(q.conj_sigma(a).unwrap(), q);
    }
    let w = &(&int(5, 2) + &z(5, 2)) + &z(5, 3);
    assert_eq!(w.conj_sigma(4).unwrap(), w);
    assert_eq!(
        z(5, 1).conj_sigma(10).unwrap_err(),
        CycloError::BadIndex { a: 10, p: 5 }
    );
    assert!(z(5, 1).conj_sigma(1).unwrap() == z(5, 1));
}

#[test]
fn embed_complex_examples() {
    assert!((int(5, 1).embed_complex(3).unwrap() - 1.0).norm() < 1e-15);
    let w = &z(5, 1) + &z(5, -1);
    let v = w.embed_complex(1).unwrap();
    assert!((v.re - 0.618_033_988_7).abs() < 1e-10 && v.im.abs() < 1e-15);
    assert!((v.re - 2.0 * (std::f64::consts::TAU / 5.0).cos()).abs() < 1e-15);
    for p in [2u64, 3, 5, 11] {
        let all = cyclo(p, &vec![1; p as usize]);
        assert!(all.is_zero());
        for a in 1..p as i64 {
            assert!(all.embed_complex(a).unwrap().norm() < 1e-12);
        }
    }
    assert!(int(5, 1).embed_complex(0).is_err());
}

#[test]
fn embedding_is_a_ring_map() {
    let a = cyclo(7, &[1, -2, 0, 3, 0, 0, 5]);
    let b = cyclo(7, &[0, 4, 1, 0, -1, 2, 0]);
    for e in 1..7 {
        let lhs = (&a * &b).embed_complex(e).unwrap();
        let rhs = a.embed_complex(e).unwrap() * b.embed_complex(e).unwrap();
        assert!((lhs - rhs).norm() < 1e-10 * rhs.norm().max(1.0));
    }
}

#[test]
fn inverse_and_norm() {
    assert_eq!(z(2, 1).norm(), BigRational::from_integer((-1).into()));
    for p in [2u64, 3, 5, 7] {
        if p > 2 {
            assert_eq!(z(p, 1).norm(), BigRational::from_integer(1.into()));
        }
        let a = &int(p, 2) + &z(p, 1);
        assert!((&a * &a.inv().unwrap()).is_one());
    }
    assert!(CycloNum::zero(5).inv().is_none());
    // N(1 - zeta) = p.
    assert_eq!((&int(5, 1) - &z(5, 1)).norm(), BigRational::from_integer(5.into()));
}

#[test]
fn p_two_degenerates_to_rationals() {
    assert_eq!(z(2, 1), int(2, -1));
    assert_eq!(z(2, 1).conj_sigma(1).unwrap(), int(2, -1));
    assert_eq!(z(2, 1).embed_complex(1).unwrap().re, -1.0);
}

#[test]
fn display_forms() {
    let w = &(&int(5, 2) + &z(5, 2)) + &z(5, 3);
    assert_eq!(w.to_string(), "2 + ζ^2 + ζ^3");
    assert_eq!((-&w).to_string(), "-2 - ζ^2 - ζ^3");
    assert_eq!(CycloNum::zero(5).to_string(), "0");
    let poly = CycloPoly::new(5, vec![int(5, 5), -&w, int(5, 1)]);
    assert_eq!(poly.to_string(), "T^2 + (-2 - ζ^2 - ζ^3)·T + 5");
}

#[test]
fn json_round_trip() {
    let w = &(&int(5, 2) + &z(5, 2)) + &z(5, 3);
    let s = serde_json::to_string(&w).unwrap();
    assert_eq!(s, r#"{"p":"5","coords":["2","0","1","1"]}"#);
    let back: CycloNum = serde_json::from_str(&s).unwrap();
    assert_eq!(back, w);
    let half: CycloNum = serde_json::from_str(r#"{"p":"3","coords":["1/2","-3"]}"#).unwrap();
    assert_eq!(half.coords()[0], BigRational::new(1.into(), 2.into()));
    assert!(serde_json::from_str::<CycloNum>(r#"{"p":"5","coords":["1"]}"#).is_err());
    assert!(serde_json::from_str::<CycloNum>(r#"{"p":"4","coords":["1","2","3"]}"#).is_err());
    assert!(serde_json::from_str::<CycloNum>(r#"{"p":"3","coords":["1","2"],"x":1}"#).is_err());
    let poly = CycloPoly::new(5, vec![int(5, 5), -&w, int(5, 1)]);
    let back: CycloPoly = serde_json::from_str(&serde_json::to_string(&poly).unwrap()).unwrap();
    assert_eq!(back, poly);
}

#[test]
fn char_poly_examples() {
    let p = 5;
    assert_eq!(
        char_poly_from_power_sums(&[int(p, 0), int(p, 0)], 2).unwrap(),
        CycloPoly::from_integers(p, &[0, 0, 1])
    );
    let s = &int(p, 3) + &z(p, 1);
    assert_eq!(
        char_poly_from_power_sums(&[s.clone(), &s * &s], 1).unwrap(),
        CycloPoly::new(p, vec![-&s, int(p, 1)])
    );
    assert_eq!(
        char_poly_from_power_sums(&[int(p, 5), int(p, 13)], 2).unwrap(),
        CycloPoly::from_integers(p, &[6, -5, 1])
    );
    assert_eq!(
        char_poly_from_power_sums(&[int(p, 5)], 2).unwrap_err(),
        CycloError::LengthTooShort { needed: 2, found: 1 }
    );
}

#[test]
fn validate_examples() {
    let p = 5;
    let s = &int(p, 3) + &z(p, 1);
    let lin = CycloPoly::new(p, vec![-&s, int(p, 1)]);
    assert!(validate_power_sums(&lin, &[s.clone(), &s * &s, s.pow(3)]));
    let quad = CycloPoly::from_integers(p, &[6, -5, 1]);
    assert!(validate_power_sums(&quad, &[int(p, 5), int(p, 13), int(p, 35)]));
    assert!(!validate_power_sums(&quad, &[int(p, 5), int(p, 13), int(p, 36)]));
    assert!(!validate_power_sums(&CycloPoly::from_integers(p, &[6, -5, 2]), &[int(p, 5)]));
}

#[test]
fn reconstruct_examples() {
    let p = 3;
    let zero = vec![int(p, 0); 6];
    let rf = linear_recurrence_reconstruct(&zero).unwrap();
    assert!(rf.numerator.is_one_poly() && rf.denominator.is_one_poly() && rf.stable);

    let a = BigRational::new(2.into(), 3.into());
    let geo: Vec<CycloNum> = (1..=6)
        .map(|k| CycloNum::from_rational(p, num_traits::Pow::pow(&a, k as u32)))
        .collect();
    let rf = linear_recurrence_reconstruct(&geo).unwrap();
    assert!(rf.numerator.is_one_poly());
    assert_eq!(
        rf.denominator,
        CycloPoly::new(p, vec![int(p, 1), CycloNum::from_rational(p, -a)])
    );

    let c: Vec<CycloNum> = [2, -10, 26, -82, 242, -730].iter().map(|&v| int(p, v)).collect();
    let rf = linear_recurrence_reconstruct(&c).unwrap();
    assert_eq!(rf.numerator, CycloPoly::from_integers(p, &[1, 2, -3]));
    assert!(rf.denominator.is_one_poly());
    assert!(rf.stable);
    // Two distinct inverse roots 1 and -3 make the minimal recurrence quadratic.
    assert_eq!(rf.recurrence, CycloPoly::from_integers(p, &[1, 2, -3]));
}

#[test]
fn reconstruct_reports_too_short_data() {
    // (1 - T)(1 - 2T)(1 - 3T) has total degree 3; six terms only allow 2.
    let c: Vec<CycloNum> = (1..=6u32)
        .map(|k| int(5, -(1 + 2i64.pow(k) + 3i64.pow(k))))
        .collect();
    assert!(matches!(
        linear_recurrence_reconstruct(&c),
        Err(CycloError::Unstable { .. })
    ));
    assert!(linear_recurrence_reconstruct(&c[..1]).is_err());
}

#[test]
fn squarefree_and_roots() {
    let p = 5;
    // (T - 1)^2 (T + 2)
    let f = CycloPoly::from_integers(p, &[2, -3, 0, 1]);
    let sq = f.squarefree_decomposition();
    assert_eq!(
        sq,
        vec![
            (CycloPoly::from_integers(p, &[2, 1]), 1),
            (CycloPoly::from_integers(p, &[-1, 1]), 2)
        ]
    );
    let mut roots: Vec<f64> = complex_roots(&f, 1).unwrap().iter().map(|r| r.re).collect();
    roots.sort_by(f64::total_cmp);
    for (r, e) in roots.iter().zip([-2.0, 1.0, 1.0]) {
        assert!((r - e).abs() < 1e-12);
    }
    // T^2 - zeta has roots of modulus 1 in every embedding.
    let g = CycloPoly::new(p, vec![-&z(p, 1), int(p, 0), int(p, 1)]);
    for a in 1..5 {
        for r in complex_roots(&g, a).unwrap() {
            assert!((r.norm() - 1.0).abs() < 1e-13);
        }
    }
}

impl CycloPoly {
    fn is_one_poly(&self) -> bool {
        self.degree() == Some(0) && self.coeffs()[0].is_one()
    }
}

fn arb_cyclo(p: u64, bound: i64) -> impl Strategy<Value = CycloNum> {
    prop::collection::vec(-bound..=bound, p as usize)
        .prop_map(move |w| CycloNum::from_exponent_weights(p, &w))
}

fn arb_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

/// Power-series coefficients of `a / b` up to `T^n`, with `b(0) = 1`.
fn series_div(a: &CycloPoly, b: &CycloPoly, n: usize) -> Vec<CycloNum> {
    let p = a.p();
    let mut out: Vec<CycloNum> = Vec::new();
    for k in 0..=n {
        let mut acc = a.coeff(k);
        for j in 1..=k {
            acc = &acc - &(&b.coeff(j) * &out[k - j]);
        }
        out.push(acc);
    }
    let _ = p;
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn relation_polynomial_is_invisible(
        (a, b) in arb_prime().prop_flat_map(|p| (arb_cyclo(p, 9), arb_cyclo(p, 9)))
    ) {
        let p = a.p();
        let relation = CycloNum::from_exponent_weights(p, &vec![1i64; p as usize]);
        prop_assert!(relation.is_zero());
        prop_assert_eq!(&a + &(&relation * &b), a.clone());
    }

    #[test]
    fn conj_sigma_composes(
        (x, a, b) in arb_prime().prop_flat_map(|p| (arb_cyclo(p, 9), 1..p as i64, 1..p as i64))
    ) {
        let p = x.p() as i64;
        let lhs = x.conj_sigma(b).unwrap().conj_sigma(a).unwrap();
        prop_assert_eq!(lhs, x.conj_sigma(a * b % p).unwrap());
    }

    #[test]
    fn conj_sigma_is_a_ring_map(
        (x, y, a) in arb_prime().prop_flat_map(|p| (arb_cyclo(p, 9), arb_cyclo(p, 9), 1..p as i64))
    ) {
        prop_assert_eq!((&x * &y).conj_sigma(a).unwrap(),
            &x.conj_sigma(a).unwrap() * &y.conj_sigma(a).unwrap());
    }

    #[test]
    fn embedding_intertwines_conjugation(
        (x, a, b) in arb_prime().prop_flat_map(|p| (arb_cyclo(p, 1000), 1..p as i64, 1..p as i64))
    ) {
        let p = x.p() as i64;
        let lhs = x.conj_sigma(b).unwrap().embed_complex(a).unwrap();
        let rhs = x.embed_complex(a * b % p).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn inverse_round_trip(x in arb_prime().prop_flat_map(|p| arb_cyclo(p, 5))) {
        prop_assume!(!x.is_zero());
        prop_assert!((&x * &x.inv().unwrap()).is_one());
    }

    #[test]
    fn char_poly_round_trip(
        coeffs in (1usize..=6).prop_flat_map(|r| prop::collection::vec(arb_cyclo(5, 3), r))
    ) {
        let p = 5;
        let r = coeffs.len();
        let mut all = coeffs;
        all.push(CycloNum::one(p));
        let poly = CycloPoly::new(p, all);
        let ps = power_sums_of_roots(&poly, 2 * r);
        prop_assert_eq!(char_poly_from_power_sums(&ps, r).unwrap(), poly.clone());
        prop_assert!(validate_power_sums(&poly, &ps));
    }

    #[test]
    fn reconstruct_round_trip(
        (num_tail, den_tail) in (0usize..=2, 0usize..=2).prop_flat_map(|(a, b)| (
            prop::collection::vec(arb_cyclo(3, 2), a),
            prop::collection::vec(arb_cyclo(3, 2), b),
        ))
    ) {
        let p = 3;
        let mk = |tail: &[CycloNum]| {
            let mut v = vec![CycloNum::one(p)];
            v.extend_from_slice(tail);
            CycloPoly::new(p, v)
        };
        let num = mk(&num_tail);
        let den = mk(&den_tail);
        prop_assume!(num.gcd(&den).degree() == Some(0));
        let total = num.degree().unwrap() + den.degree().unwrap();
        let k = 2 * total + 4;
        // c_k are the coefficients of T L'/L = T (N'D - ND') / (ND).
        let top = &(&num.derivative() * &den) - &(&num * &den.derivative());
        let top = &CycloPoly::monomial(CycloNum::one(p), 1) * &top;
        let c: Vec<CycloNum> = series_div(&top, &(&num * &den), k)[1..].to_vec();
        let rf = linear_recurrence_reconstruct(&c).unwrap();
        prop_assert_eq!(rf.numerator, num);
        prop_assert_eq!(rf.denominator, den);
        prop_assert!(rf.stable);
    }
}

#[test]
fn power_sums_of_known_roots() {
    // Roots 2 and 3.
    let ps = power_sums_of_roots(&CycloPoly::from_integers(5, &[6, -5, 1]), 3);
    assert_eq!(ps, vec![int(5, 5), int(5, 13), int(5, 35)]);
    let _ = BigInt::from(0);
}
