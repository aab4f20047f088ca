//! Rational reconstruction of `L(T) = exp(sum_k c_k T^k / k)` from finitely
//! many `c_k`, by two independent routes:
//!
//! * series: expand `L` to order `K` and take the Padé approximant of least
//!   total degree (extended Euclid against `T^(K+1)`);
//! * recurrence: Berlekamp–Massey on the `c_k` themselves, which yields the
//!   reduced generating function `sum c_k T^k = U / C`.
//!
//! The two agree iff `T L'/L = U / C`, i.e. `U N D = T (N' D - N D') C`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::{CycloError, CycloNum, CycloPoly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalFunction {
    /// `N` with `N(0) = 1`.
    pub numerator: CycloPoly,
    /// `D` with `D(0) = 1`.
    pub denominator: CycloPoly,
    /// Whether dropping the last coefficient gives the same answer.
    pub stable: bool,
    /// Minimal connection polynomial of the `c_k` (from Berlekamp–Massey).
    pub recurrence: CycloPoly,
}

/// Coefficients `l_0..l_K` of `exp(sum_{k=1}^K c_k T^k / k)`, using
/// `n l_n = sum_{k=1}^n c_k l_{n-k}`.
pub fn exp_log_series(c: &[CycloNum], p: u64) -> Vec<CycloNum> {
    let mut l = vec![CycloNum::one(p)];
    for n in 1..=c.len() {
        let mut acc = CycloNum::zero(p);
        for k in 1..=n {
            acc = &acc + &(&c[k - 1] * &l[n - k]);
        }
        l.push(acc.scale(&BigRational::new(BigInt::from(1), BigInt::from(n))));
    }
    l
}

/// Least-total-degree `(N, D)` with `D(0) = 1` and `D L = N mod T^(K+1)`,
/// provided its total degree is at most `max_total`.
fn pade(series: &[CycloNum], p: u64, max_total: usize) -> Option<(CycloPoly, CycloPoly)> {
    let order = series.len();
    let mut r0 = CycloPoly::monomial(CycloNum::one(p), order);
    let mut r1 = CycloPoly::new(p, series.to_vec());
    let mut t0 = CycloPoly::zero(p);
    let mut t1 = CycloPoly::one(p);
    let mut best: Option<(usize, CycloPoly, CycloPoly)> = None;
    while !r1.is_zero() {
        let t_at_0 = t1.coeff(0);
        if let Some(inv) = t_at_0.inv() {
            let total = r1.degree().unwrap() + t1.degree().unwrap();
            if best.as_ref().is_none_or(|(b, _, _)| total < *b) {
                best = Some((total, r1.scale(&inv), t1.scale(&inv)));
            }
        }
        let (q, r2) = r0.divrem(&r1).expect("nonzero divisor");
        let t2 = &t0 - &(&q * &t1);
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    best.filter(|(total, _, _)| *total <= max_total)
        .map(|(_, n, d)| (n, d))
}

/// Berlekamp–Massey: the shortest `C(T) = 1 + C_1 T + ... + C_L T^L` with
/// `sum_i C_i s_{n-i} = 0` for all `L <= n < len`.
pub fn berlekamp_massey(s: &[CycloNum], p: u64) -> CycloPoly {
    let mut c = vec![CycloNum::one(p)];
    let mut b = vec![CycloNum::one(p)];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut last = CycloNum::one(p);
    for n in 0..s.len() {
        let mut d = s[n].clone();
        for i in 1..=l.min(c.len() - 1) {
            d = &d + &(&c[i] * &s[n - i]);
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let coef = &d * &last.inv().expect("nonzero discrepancy");
        let prev = c.clone();
        if c.len() < b.len() + m {
            c.resize(b.len() + m, CycloNum::zero(p));
        }
        for (i, bi) in b.iter().enumerate() {
            c[i + m] = &c[i + m] - &(&coef * bi);
        }
        if 2 * l <= n {
            l = n + 1 - l;
            b = prev;
            last = d;
            m = 1;
        } else {
            m += 1;
        }
    }
    c.truncate(l + 1);
    c.resize(l + 1, CycloNum::zero(p));
    CycloPoly::new(p, c)
}

fn reconstruct_once(
    c: &[CycloNum],
    p: u64,
    max_total: usize,
) -> Result<(CycloPoly, CycloPoly, CycloPoly), CycloError> {
    let k = c.len();
    let series = exp_log_series(c, p);
    let (num, den) = pade(&series, p, max_total).ok_or(CycloError::Unstable {
        terms: k,
        max_degree: max_total,
    })?;

    let conn = berlekamp_massey(c, p);
    // U = (sum_k c_k T^k) * C, truncated past deg C.
    let mut g = vec![CycloNum::zero(p)];
    g.extend_from_slice(c);
    let l = conn.degree().unwrap_or(0);
    let u = (&CycloPoly::new(p, g) * &conn).truncate(l + 1);
    let lhs = &(&u * &num) * &den;
    let log_deriv = &(&num.derivative() * &den) - &(&num * &den.derivative());
    let rhs = &(&CycloPoly::monomial(CycloNum::one(p), 1) * &log_deriv) * &conn;
    let divides = (&num * &den).div_exact(&conn).is_some();
    if lhs != rhs || !divides {
        return Err(CycloError::RouteMismatch);
    }
    Ok((num, den, conn))
}

/// Reconstructs `L = N / D` from `c_1..c_K`. Fails with `Unstable` when no
/// rational function of total degree at most `s = (K-2)/2` fits.
///
/// `stable` reports whether `c_1..c_{K-1}` already determine the same answer
/// under the same degree bound (still unique there, as `K - 1 >= 2s + 1`).
pub fn linear_recurrence_reconstruct(c: &[CycloNum]) -> Result<RationalFunction, CycloError> {
    if c.len() < 2 {
        return Err(CycloError::LengthTooShort {
            needed: 2,
            found: c.len(),
        });
    }
    let p = c[0].p();
    let max_total = (c.len() - 2) / 2;
    let (numerator, denominator, recurrence) = reconstruct_once(c, p, max_total)?;
    let stable = c.len() >= 3
        && reconstruct_once(&c[..c.len() - 1], p, max_total)
            .is_ok_and(|(n, d, _)| n == numerator && d == denominator);
    Ok(RationalFunction {
        numerator,
        denominator,
        stable,
        recurrence,
    })
}
