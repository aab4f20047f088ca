//! Dense polynomials over a prime field, coefficients low-degree-first.
//!
//! These back both the modulus search and the arithmetic of extension
//! fields; an element of `F_p[x]/(mu)` is stored as its reduced
//! coefficient vector.

use super::prime::pow_mod;

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn degree(v: &[u64]) -> Option<usize> {
    v.iter().rposition(|&c| c != 0)
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let len = a.len().max(b.len());
    let mut out: Vec<u64> = (0..len)
        .map(|i| {
            sub_mod(
                a.get(i).copied().unwrap_or(0),
                b.get(i).copied().unwrap_or(0),
                p,
            )
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // Each reduced product is < p, so the u128 accumulators cannot overflow.
    let p128 = p as u128;
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] += (x as u128 * y as u128) % p128;
        }
    }
    let mut out: Vec<u64> = acc.into_iter().map(|c| (c % p128) as u64).collect();
    trim(&mut out);
    out
}

/// Remainder modulo an arbitrary nonzero divisor.
pub(crate) fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let dm = degree(m).expect("division by zero polynomial");
    let lead_inv = inv_mod(m[dm], p);
    let mut r: Vec<u64> = a.to_vec();
    trim(&mut r);
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let c = mul_mod(r[dr], lead_inv, p);
        let shift = dr - dm;
        for (i, &mc) in m[..=dm].iter().enumerate() {
            r[shift + i] = sub_mod(r[shift + i], mul_mod(c, mc, p), p);
        }
        trim(&mut r);
    }
    r
}

pub(crate) fn mul_rem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), m, p)
}

/// `base^(p^k)` style exponentiation with a multi-limb exponent
/// (little-endian u64 limbs).
pub(crate) fn pow_rem_limbs(base: &[u64], exp: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], m, p);
    let base = rem(base, m, p);
    for limb in exp.iter().rev() {
        for bit in (0..64).rev() {
            acc = mul_rem(&acc, &acc, m, p);
            if (limb >> bit) & 1 == 1 {
                acc = mul_rem(&acc, &base, m, p);
            }
        }
    }
    acc
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(d) = degree(&x) {
        let inv = inv_mod(x[d], p);
        for c in x.iter_mut() {
            *c = mul_mod(*c, inv, p);
        }
    }
    x
}

/// Inverse of `a` modulo `m` via the extended Euclidean algorithm.
/// Returns `None` when `gcd(a, m) != 1`.
pub(crate) fn inv_rem(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let (mut r0, mut r1) = (m.to_vec(), rem(a, m, p));
    let (mut s0, mut s1): (Vec<u64>, Vec<u64>) = (Vec::new(), vec![1]);
    trim(&mut r0);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    if degree(&r0) != Some(0) {
        return None;
    }
    let inv = inv_mod(r0[0], p);
    let mut out: Vec<u64> = s0.iter().map(|&c| mul_mod(c, inv, p)).collect();
    trim(&mut out);
    Some(rem(&out, m, p))
}

pub(crate) fn divrem(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let dm = degree(m).expect("division by zero polynomial");
    let lead_inv = inv_mod(m[dm], p);
    let mut r: Vec<u64> = a.to_vec();
    trim(&mut r);
    let mut q = vec![0u64; r.len().saturating_sub(dm)];
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let c = mul_mod(r[dr], lead_inv, p);
        let shift = dr - dm;
        q[shift] = c;
        for (i, &mc) in m[..=dm].iter().enumerate() {
            r[shift + i] = sub_mod(r[shift + i], mul_mod(c, mc, p), p);
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// Rabin's irreducibility test for a monic polynomial of degree `m >= 1`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let m = match degree(f) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if m == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    // x^(p^k) mod f for k = 1..=m, by repeated p-th powering.
    let mut powers = Vec::with_capacity(m);
    let mut cur = x.clone();
    for _ in 0..m {
        cur = pow_rem_limbs(&cur, &[p], f, p);
        powers.push(cur.clone());
    }
    if sub(&powers[m - 1], &x, p).iter().any(|&c| c != 0) {
        return false;
    }
    for (l, _) in super::prime::factorize(m as u64) {
        let k = m / l as usize;
        let h = sub(&powers[k - 1], &x, p);
        if degree(&gcd(f, &h, p)) != Some(0) {
            return false;
        }
    }
    true
}
