use num_bigint::BigInt;
use num_rational::BigRational;

use super::{CycloError, CycloNum, CycloPoly};

fn frac(n: usize) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(n))
}

/// Monic degree-`r` polynomial whose roots have power sums `ps[0..r]`.
///
/// Newton's identities `k e_k = sum_{i=1}^k (-1)^(i-1) e_{k-i} p_i` give the
/// elementary symmetric functions; the result is
/// `T^r - e_1 T^(r-1) + ... + (-1)^r e_r`. `ps` must be nonempty, since it
/// carries the cyclotomic field.
pub fn char_poly_from_power_sums(ps: &[CycloNum], r: usize) -> Result<CycloPoly, CycloError> {
    if ps.len() < r.max(1) {
        return Err(CycloError::LengthTooShort {
            needed: r.max(1),
            found: ps.len(),
        });
    }
    let p = ps[0].p();
    let mut e = vec![CycloNum::one(p)];
    for k in 1..=r {
        let mut acc = CycloNum::zero(p);
        for i in 1..=k {
            let term = &e[k - i] * &ps[i - 1];
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        e.push(acc.scale(&frac(k)));
    }
    let coeffs = (0..=r)
        .map(|j| {
            // Coefficient of T^j is (-1)^(r-j) e_{r-j}.
            let i = r - j;
            if i % 2 == 0 {
                e[i].clone()
            } else {
                -&e[i]
            }
        })
        .collect();
    Ok(CycloPoly::new(p, coeffs))
}

/// True iff every `p_k` with `k > deg P` obeys the recurrence induced by the
/// monic polynomial `P`. Non-monic input is rejected (returns false).
pub fn validate_power_sums(poly: &CycloPoly, ps: &[CycloNum]) -> bool {
    let Some(r) = poly.degree() else {
        return false;
    };
    if !poly.is_monic() {
        return false;
    }
    let p = poly.p();
    // For k > r: p_k = -sum_{j=0}^{r-1} a_j p_{k-r+j}, with a_j the coefficients.
    (r + 1..=ps.len()).all(|k| {
        let mut acc = CycloNum::zero(p);
        for j in 0..r {
            acc = &acc - &(&poly.coeffs()[j] * &ps[k - r + j - 1]);
        }
        acc == ps[k - 1]
    })
}

/// Power sums `p_1..p_count` of the roots of a monic polynomial, from its
/// coefficients alone.
pub fn power_sums_of_roots(poly: &CycloPoly, count: usize) -> Vec<CycloNum> {
    assert!(poly.is_monic(), "power sums need a monic polynomial");
    let p = poly.p();
    let r = poly.degree().unwrap();
    // e_i = (-1)^i * coefficient of T^(r-i).
    let e: Vec<CycloNum> = (0..=r)
        .map(|i| {
            let c = poly.coeff(r - i);
            if i % 2 == 0 {
                c
            } else {
                -&c
            }
        })
        .collect();
    let mut ps: Vec<CycloNum> = Vec::with_capacity(count);
    for k in 1..=count {
        let mut acc = CycloNum::zero(p);
        for i in 1..k.min(r + 1) {
            let term = &e[i] * &ps[k - i - 1];
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        if k <= r {
            let term = e[k].scale(&BigRational::from_integer(BigInt::from(k)));
            acc = if k % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        ps.push(acc);
    }
    ps
}
