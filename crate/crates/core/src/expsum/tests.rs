use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::cyclotomic::conj_sigma;
use crate::ffield::{make_field, FieldSpec};
use crate::laurent::{phi_map, DeformationKind};

fn lp(field: &FieldSpec, n: usize, terms: &[(i64, &[i64])]) -> LaurentPoly<FqElem> {
    LaurentPoly::from_terms(n, terms.iter().map(|(c, w)| (w.to_vec(), field.from_i64(*c)))).unwrap()
}

fn cfg() -> EnumConfig {
    EnumConfig::with_budget(10_000_000)
}

fn kloosterman(field: &FieldSpec) -> Deformation {
    Deformation::trivial(field.clone(), lp(field, 1, &[(1, &[1]), (1, &[-1])])).unwrap()
}

/// Histogram of `F(t) mod p` over `(F_p^*)^n`, with `F` given by integer
/// coefficients and evaluated in plain modular arithmetic.
fn prime_field_oracle(p: u64, n: usize, terms: &[(i64, Vec<i64>)]) -> Vec<u64> {
    let pow = |b: u64, e: i64| -> u64 {
        let e = e.rem_euclid(p as i64 - 1) as u32;
        (0..e).fold(1u64, |acc, _| acc * b % p)
    };
    let mut hist = vec![0u64; p as usize];
    let total = (p - 1).pow(n as u32);
    for idx in 0..total {
        let mut rest = idx;
        let t: Vec<u64> = (0..n)
            .map(|_| {
                let v = rest % (p - 1) + 1;
                rest /= p - 1;
                v
            })
            .collect();
        let mut v = 0u64;
        for (c, w) in terms {
            let mono = w.iter().zip(&t).fold(1u64, |acc, (&e, &ti)| acc * pow(ti, e) % p);
            v = (v + c.rem_euclid(p as i64) as u64 * mono) % p;
        }
        hist[v as usize] += 1;
    }
    hist
}

#[test]
fn kloosterman_over_f5() {
    let f5 = make_field(5, 1).unwrap();
    let s = family_sum(&kloosterman(&f5), 1, &f5.one(), &[], &cfg()).unwrap();
    // t + 1/t takes the values 2, 0, 0, 3 on t = 1..4.
    let expected = CycloNum::from_exponent_weights(5, &[2u64, 0, 1, 1, 0]);
    assert_eq!(s, expected);
    assert_eq!(s.to_string(), "2 + ζ^2 + ζ^3");
    let z = s.embed_complex(1).unwrap();
    assert!((z.re - 0.381966).abs() < 1e-6 && z.im.abs() < 1e-9);
}

#[test]
fn trivial_sums() {
    let f7 = make_field(7, 1).unwrap();
    let d = Deformation::trivial(f7.clone(), lp(&f7, 1, &[(1, &[1])])).unwrap();
    assert_eq!(
        family_sum(&d, 1, &f7.one(), &[], &cfg()).unwrap(),
        CycloNum::from_integer(7, -1)
    );

    // (t1 + t2) - (t1 + t2) = 0 identically: every point contributes psi(0) = 1.
    let line = lp(&f7, 2, &[(1, &[1, 0]), (1, &[0, 1])]);
    let d = Deformation::new(
        f7.clone(),
        line.clone(),
        vec![line],
        DeformationKind::NewtonPreserving,
    )
    .unwrap();
    let x = [f7.from_i64(-1)];
    for k in 1..=2 {
        let q = 7u64.pow(k as u32);
        assert_eq!(
            family_sum(&d, k, &f7.from_i64(3), &x, &cfg()).unwrap(),
            CycloNum::from_integer(7, ((q - 1) * (q - 1)) as i64)
        );
        assert_eq!(zero_count(&d, k, &x, &cfg()).unwrap(), (q - 1) * (q - 1));
    }
    assert_eq!(
        family_sum(&d, 1, &f7.zero(), &x, &cfg()).unwrap_err(),
        ExpSumError::ZeroTau
    );
}

#[test]
fn matches_modular_oracle_over_prime_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for &p in &[3u64, 5, 7, 11] {
        let field = make_field(p, 1).unwrap();
        for n in 1..=2usize {
            for _ in 0..4 {
                let terms: Vec<(i64, Vec<i64>)> = (0..rng.random_range(1..5))
                    .map(|_| {
                        let w = (0..n).map(|_| rng.random_range(-3..=3)).collect();
                        (rng.random_range(1..p as i64), w)
                    })
                    .collect();
                let mut poly = LaurentPoly::zero(n);
                for (c, w) in &terms {
                    poly = poly.add(&LaurentPoly::monomial(w.clone(), field.from_i64(*c)));
                }
                let hist = prime_field_oracle(p, n, &terms);
                let expected = CycloNum::from_exponent_weights(p, &hist);
                let d = Deformation::trivial(field.clone(), poly).unwrap();
                assert_eq!(family_sum(&d, 1, &field.one(), &[], &cfg()).unwrap(), expected);
                assert_eq!(zero_count(&d, 1, &[], &cfg()).unwrap(), hist[0]);
            }
        }
    }
}

fn random_deformation(field: &FieldSpec, n: usize, rng: &mut ChaCha8Rng) -> Deformation {
    // A box-shaped base keeps every small exponent inside the polytope.
    let mut base = LaurentPoly::zero(n);
    for i in 0..n {
        for s in [-2i64, 2] {
            let mut w = vec![0; n];
            w[i] = s;
            base = base.add(&LaurentPoly::monomial(w, field.random_nonzero(rng)));
        }
    }
    let directions = (0..2)
        .map(|_| {
            let w: Vec<i64> = (0..n).map(|_| rng.random_range(-1..=1)).collect();
            LaurentPoly::monomial(w, field.random_nonzero(rng))
        })
        .collect();
    Deformation::new(field.clone(), base, directions, DeformationKind::NewtonPreserving).unwrap()
}

#[test]
fn table_kernel_matches_field_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (p, m) in [(2u64, 2usize), (3, 2), (2, 3), (5, 1), (7, 1)] {
        let field = make_field(p, m).unwrap();
        for n in 1..=2 {
            let d = random_deformation(&field, n, &mut rng);
            for k in 1..=2usize {
                let e = field.extension(k).unwrap();
                let tau = e.random_nonzero(&mut rng);
                let x: Vec<FqElem> = (0..2).map(|_| e.random(&mut rng)).collect();
                for chi in [Character::Psi, Character::PsiInverse] {
                    assert_eq!(
                        family_sum_with(&d, k, &tau, &x, chi, &cfg()).unwrap(),
                        reference::family_sum(&d, k, &tau, &x, chi, &cfg()).unwrap()
                    );
                }
                assert_eq!(
                    zero_count(&d, k, &x, &cfg()).unwrap(),
                    reference::zero_count(&d, k, &x, &cfg()).unwrap()
                );
            }
        }
    }
}

#[test]
fn partition_count_does_not_matter() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let field = make_field(3, 2).unwrap();
    let d = random_deformation(&field, 2, &mut rng);
    let tau = field.random_nonzero(&mut rng);
    let x: Vec<FqElem> = (0..2).map(|_| field.random(&mut rng)).collect();
    let base = family_sum(&d, 1, &tau, &x, &cfg().with_partitions(1)).unwrap();
    let z = zero_count(&d, 1, &x, &cfg().with_partitions(1)).unwrap();
    for parts in [2, 3, 7, 64, 1000] {
        let c = cfg().with_partitions(parts);
        assert_eq!(family_sum(&d, 1, &tau, &x, &c).unwrap(), base);
        assert_eq!(zero_count(&d, 1, &x, &c).unwrap(), z);
    }
}

#[test]
fn gkz_examples() {
    let f5 = make_field(5, 1).unwrap();
    let table = MonomialTable::new(1, vec![vec![1], vec![-1]]).unwrap();
    assert_eq!(
        gkz_sum(&table, &f5, 1, &[f5.one(), f5.one()], &cfg()).unwrap().to_string(),
        "2 + ζ^2 + ζ^3"
    );
    assert_eq!(
        gkz_sum(&table, &f5, 2, &[f5.zero(), f5.zero()], &cfg()).unwrap(),
        CycloNum::from_integer(5, 24)
    );
    let single = MonomialTable::new(1, vec![vec![1]]).unwrap();
    assert_eq!(
        gkz_sum(&single, &f5, 1, &[f5.one()], &cfg()).unwrap(),
        CycloNum::from_integer(5, -1)
    );
}

#[test]
fn composition_with_parameter_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let field = make_field(5, 1).unwrap();
    let d = random_deformation(&field, 2, &mut rng);
    let table = MonomialTable::from_deformation(&d);
    for _ in 0..100 {
        let k = rng.random_range(1..=2usize);
        let e = field.extension(k).unwrap();
        let tau = e.random_nonzero(&mut rng);
        let x: Vec<FqElem> = (0..2).map(|_| e.random(&mut rng)).collect();
        let y = phi_map(&d, &table, &tau, &x).unwrap();
        assert_eq!(
            family_sum(&d, k, &tau, &x, &cfg()).unwrap(),
            gkz_sum(&table, &field, k, &y, &cfg()).unwrap()
        );
    }
}

#[test]
fn inverse_character_symmetries() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (p, m) in [(5u64, 1usize), (3, 2), (7, 1)] {
        let field = make_field(p, m).unwrap();
        let d = random_deformation(&field, 1, &mut rng);
        for _ in 0..5 {
            let tau = field.random_nonzero(&mut rng);
            let x: Vec<FqElem> = (0..2).map(|_| field.random(&mut rng)).collect();
            let s = family_sum(&d, 1, &tau, &x, &cfg()).unwrap();
            let inv = family_sum_with(&d, 1, &tau, &x, Character::PsiInverse, &cfg()).unwrap();
            assert_eq!(inv, conj_sigma(&s, -1).unwrap());
            assert_eq!(inv, family_sum(&d, 1, &-&tau, &x, &cfg()).unwrap());
        }
    }
}

#[test]
fn frobenius_images_give_the_same_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let field = make_field(3, 1).unwrap();
    let d = random_deformation(&field, 2, &mut rng);
    let e = field.extension(2).unwrap();
    for _ in 0..5 {
        let tau = e.random_nonzero(&mut rng);
        let x: Vec<FqElem> = (0..2).map(|_| e.random(&mut rng)).collect();
        let fx: Vec<FqElem> = x.iter().map(FqElem::frobenius).collect();
        assert_eq!(
            family_sum(&d, 2, &tau, &x, &cfg()).unwrap(),
            family_sum(&d, 2, &tau.frobenius(), &fx, &cfg()).unwrap()
        );
    }
}

#[test]
fn zero_counts_and_tau_traces() {
    let f3 = make_field(3, 1).unwrap();
    let d = kloosterman(&f3);
    assert_eq!(zero_count(&d, 1, &[], &cfg()).unwrap(), 0);
    assert_eq!(zero_count(&d, 2, &[], &cfg()).unwrap(), 2);
    let c1 = tau_summed_trace(&d, 1, &[], &cfg()).unwrap();
    let c2 = tau_summed_trace(&d, 2, &[], &cfg()).unwrap();
    assert_eq!(c1.value, BigInt::from(2));
    assert_eq!(c2.value, BigInt::from(-10));
    assert!(c1.direct_checked && c2.direct_checked);

    let one = Deformation::trivial(f3.clone(), lp(&f3, 1, &[(1, &[0])])).unwrap();
    assert_eq!(zero_count(&one, 1, &[], &cfg()).unwrap(), 0);
    // Z_k = 0 gives (-1)^(n+1) (q^k - 1)^n.
    assert_eq!(tau_summed_trace(&one, 3, &[], &cfg()).unwrap().value, BigInt::from(26));
}

#[test]
fn orthogonality_identity_by_hand() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let field = make_field(2, 2).unwrap();
    let d = random_deformation(&field, 2, &mut rng);
    let x: Vec<FqElem> = (0..2).map(|_| field.random(&mut rng)).collect();
    let mut total = CycloNum::zero(2);
    for tau in field.elements().filter(|a| !a.is_zero()) {
        total = &total + &family_sum(&d, 1, &tau, &x, &cfg()).unwrap();
    }
    let z = reference::zero_count(&d, 1, &x, &cfg()).unwrap() as i64;
    assert_eq!(total, CycloNum::from_integer(2, 4 * z - 9));
}

#[test]
fn budget_is_enforced() {
    let f5 = make_field(5, 1).unwrap();
    let err = family_sum(&kloosterman(&f5), 3, &f5.one(), &[], &EnumConfig::with_budget(100))
        .unwrap_err();
    assert!(err.is_budget());
}

#[test]
fn kloosterman_respects_weil_bound() {
    for p in [3u64, 5, 7, 11, 13] {
        let field = make_field(p, 1).unwrap();
        for k in 1..=2usize {
            let s = family_sum(&kloosterman(&field), k, &field.one(), &[], &cfg()).unwrap();
            let r = sum_report(&s, 2, p.pow(k as u32), 1);
            assert!(r.bound_ok, "p={p} k={k}");
            assert_eq!(r.embeddings.len(), p as usize - 1);
        }
    }
}
