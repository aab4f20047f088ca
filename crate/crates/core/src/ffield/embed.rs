//! Field embeddings `F_{p^d} -> F_{p^D}` by explicit root-finding.
//!
//! Between canonical fields the embeddings form a compatible system: for
//! `d | e | D` the composite `F_{p^d} -> F_{p^e} -> F_{p^D}` equals the
//! direct embedding. The system is fixed recursively. For each `D`, the
//! embeddings of the maximal subfields `F_{p^(D/l)}` are chosen in
//! increasing order, each as the smallest root (by index) of the source
//! modulus that agrees with every earlier choice on the common subfield;
//! smaller subfields embed through the smallest maximal subfield above them.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::{make_field, FieldSpec, FqElem};
use super::prime::factorize;
use super::FieldError;

type Poly = Vec<FqElem>;

fn trim(f: &mut Poly) {
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
}

fn deg(f: &Poly) -> Option<usize> {
    f.iter().rposition(|c| !c.is_zero())
}

fn poly_mul(a: &Poly, b: &Poly, field: &FieldSpec) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    trim(&mut out);
    out
}

fn poly_divrem(a: &Poly, m: &Poly, field: &FieldSpec) -> (Poly, Poly) {
    let dm = deg(m).expect("division by zero polynomial");
    let lead_inv = m[dm].inv().unwrap();
    let mut r = a.clone();
    trim(&mut r);
    let mut q = vec![field.zero(); r.len().saturating_sub(dm)];
    while let Some(dr) = deg(&r) {
        if dr < dm {
            break;
        }
        let c = &r[dr] * &lead_inv;
        let shift = dr - dm;
        for (i, mc) in m[..=dm].iter().enumerate() {
            r[shift + i] = &r[shift + i] - &(&c * mc);
        }
        q[shift] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn poly_rem(a: &Poly, m: &Poly, field: &FieldSpec) -> Poly {
    poly_divrem(a, m, field).1
}

fn poly_gcd(a: &Poly, b: &Poly, field: &FieldSpec) -> Poly {
    let (mut x, mut y) = (a.clone(), b.clone());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y, field);
        x = y;
        y = r;
    }
    if let Some(d) = deg(&x) {
        let inv = x[d].inv().unwrap();
        x = x.iter().map(|c| c * &inv).collect();
    }
    x
}

fn poly_pow_rem(base: &Poly, exp: &BigUint, m: &Poly, field: &FieldSpec) -> Poly {
    let mut acc = vec![field.one()];
    let base = poly_rem(base, m, field);
    for bit in (0..exp.bits()).rev() {
        acc = poly_rem(&poly_mul(&acc, &acc, field), m, field);
        if exp.bit(bit) {
            acc = poly_rem(&poly_mul(&acc, &base, field), m, field);
        }
    }
    acc
}

/// One root of a monic `f` that splits into distinct linear factors over
/// `field` (equal-degree splitting).
fn split_root(f: &Poly, field: &FieldSpec) -> FqElem {
    let mut f = f.clone();
    let p = field.p();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0e0b_ed00);
    let half = (field.order() - BigUint::one()) >> 1u32;
    while deg(&f).unwrap() > 1 {
        let delta = field.random(&mut rng);
        let h = if p == 2 {
            // Absolute trace of delta*X modulo f.
            let mut t = vec![field.zero(), delta];
            let mut s = t.clone();
            for _ in 1..field.degree() {
                t = poly_rem(&poly_mul(&t, &t, field), &f, field);
                s = add(&s, &t, field);
            }
            s
        } else {
            let lin = vec![delta, field.one()];
            let mut h = poly_pow_rem(&lin, &half, &f, field);
            if h.is_empty() {
                h.push(field.zero());
            }
            h[0] = &h[0] - &field.one();
            trim(&mut h);
            h
        };
        let g = poly_gcd(&f, &h, field);
        let dg = deg(&g).unwrap_or(0);
        let df = deg(&f).unwrap();
        if dg > 0 && dg < df {
            let cofactor = poly_divrem(&f, &g, field).0;
            f = if dg <= df - dg { g } else { cofactor };
            // Normalize the cofactor to monic.
            let lead_inv = f[deg(&f).unwrap()].inv().unwrap();
            f = f.iter().map(|c| c * &lead_inv).collect();
        }
    }
    -&f[0]
}

fn add(a: &Poly, b: &Poly, field: &FieldSpec) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => field.zero(),
        })
        .collect();
    trim(&mut out);
    out
}

fn lift_modulus(source: &FieldSpec, target: &FieldSpec) -> Poly {
    source
        .modulus()
        .iter()
        .map(|&c| target.one().scale(c))
        .collect()
}

fn index_order(a: &FqElem, b: &FqElem) -> Ordering {
    a.coords().iter().rev().cmp(b.coords().iter().rev())
}

/// All roots of the modulus of `source` inside `target`, sorted by index.
fn sorted_roots(source: &FieldSpec, target: &FieldSpec) -> Vec<FqElem> {
    let f = lift_modulus(source, target);
    let r = split_root(&f, target);
    let mut roots = Vec::with_capacity(source.degree());
    let mut cur = r;
    for _ in 0..source.degree() {
        roots.push(cur.clone());
        cur = cur.frobenius();
    }
    roots.sort_by(index_order);
    roots
}

fn evaluate_at(a: &FqElem, root: &FqElem) -> FqElem {
    let target = root.field();
    a.coords()
        .iter()
        .rev()
        .fold(target.zero(), |acc, &c| &(&acc * root) + &target.one().scale(c))
}

fn root_cache() -> &'static Mutex<HashMap<(u64, usize, usize), Vec<u64>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize, usize), Vec<u64>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Image of the modulus root of canonical `F_{p^small}` in canonical
/// `F_{p^big}` under the compatible system.
fn canonical_root(p: u64, small: usize, big: usize) -> Result<FqElem, FieldError> {
    let target = make_field(p, big)?;
    if small == big {
        let x = if big == 1 { target.zero() } else { target.from_coords(&[0, 1])? };
        return Ok(x);
    }
    if small == 1 {
        return Ok(target.zero());
    }
    if let Some(c) = root_cache().lock().unwrap().get(&(p, small, big)) {
        return Ok(target.from_coords(c)?);
    }
    let mut maximal: Vec<usize> = factorize(big as u64)
        .into_iter()
        .map(|(l, _)| big / l as usize)
        .collect();
    maximal.sort_unstable();
    let root = if !maximal.contains(&small) {
        let via = *maximal.iter().find(|&&e| e % small == 0).unwrap();
        let inner = canonical_root(p, small, via)?;
        canonical_apply(&inner, big)?
    } else {
        let source = make_field(p, small)?;
        let mut constraints = Vec::new();
        for &other in maximal.iter().filter(|&&e| e < small) {
            let g = small.gcd(&other);
            if g > 1 {
                let in_small = canonical_root(p, g, small)?;
                let in_other = canonical_root(p, g, other)?;
                constraints.push((in_small, canonical_apply(&in_other, big)?));
            }
        }
        sorted_roots(&source, &target)
            .into_iter()
            .find(|r| {
                constraints
                    .iter()
                    .all(|(a, image)| &evaluate_at(a, r) == image)
            })
            .expect("compatible embedding always exists")
    };
    root_cache()
        .lock()
        .unwrap()
        .insert((p, small, big), root.coords().to_vec());
    Ok(root)
}

fn canonical_apply(a: &FqElem, big: usize) -> Result<FqElem, FieldError> {
    let source = a.field();
    let root = canonical_root(source.p(), source.degree(), big)?;
    Ok(evaluate_at(a, &root))
}

/// Ring embedding of `a` into `target`, an extension of `a`'s field.
pub fn embed(a: &FqElem, target: &FieldSpec) -> Result<FqElem, FieldError> {
    let source = a.field();
    if source.p() != target.p() {
        return Err(FieldError::IncompatibleCharacteristic {
            from: source.p(),
            to: target.p(),
        });
    }
    if target.degree() % source.degree() != 0 {
        return Err(FieldError::NotAnExtension {
            from: source.degree(),
            to: target.degree(),
        });
    }
    if source == target {
        return Ok(a.clone());
    }
    if let Some(c) = a.as_prime() {
        return Ok(target.one().scale(c));
    }
    if source.is_canonical() && target.is_canonical() {
        return canonical_apply(a, target.degree());
    }
    let root = sorted_roots(source, target).swap_remove(0);
    Ok(evaluate_at(a, &root))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_satisfy_source_modulus() {
        for (p, d, big) in [(2u64, 2usize, 4usize), (3, 2, 4), (5, 2, 6), (2, 3, 6), (3, 3, 6)] {
            let source = make_field(p, d).unwrap();
            let target = make_field(p, big).unwrap();
            let roots = sorted_roots(&source, &target);
            assert_eq!(roots.len(), d);
            let f = lift_modulus(&source, &target);
            for r in &roots {
                let v = f
                    .iter()
                    .rev()
                    .fold(target.zero(), |acc, c| &(&acc * r) + c);
                assert!(v.is_zero());
            }
        }
    }
}
