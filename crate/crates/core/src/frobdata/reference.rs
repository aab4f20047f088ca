//! Exhaustive search for monodromy filtrations in small dimension, in
//! 64-bit rational arithmetic and independent of [`QMatrix`] and
//! [`Subspace`]. Candidate subspaces are all spans of at most `d - 1`
//! vectors drawn from `{-1, 0, 1}^d` together with kernel and image vectors
//! of powers of `N`; every chain of candidates is tested against the
//! defining properties. Meant for cross-checking
//! [`monodromy_filtration`](super::monodromy_filtration) on matrices of
//! dimension at most 3.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};

use super::{Filtration, Subspace};

type V = Vec<Rational64>;


fn rref(mut rows: Vec<V>, d: usize) -> Vec<V> {
    let mut r = 0;
    for c in 0..d {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        rows[r].iter_mut().for_each(|x| *x *= inv);
        let pr = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c];
                row.iter_mut().zip(&pr).for_each(|(x, y)| *x -= f * y);
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

fn apply(n: &[V], v: &V) -> V {
    n.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn mat_mul(a: &[V], b: &[V]) -> Vec<V> {
    let d = a.len();
    (0..d)
        .map(|i| (0..d).map(|j| (0..d).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn kernel(m: &[V], d: usize) -> Vec<V> {
    let r = rref(m.to_vec(), d);
    let pivots: Vec<usize> = r
        .iter()
        .map(|row| row.iter().position(|x| !x.is_zero()).unwrap())
        .collect();
    (0..d)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![Rational64::zero(); d];
            v[f] = Rational64::one();
            for (row, &pc) in r.iter().zip(&pivots) {
                v[pc] = -row[f];
            }
            v
        })
        .collect()
}

fn contains(a: &[V], b: &[V], d: usize) -> bool {
    let mut all = a.to_vec();
    all.extend(b.iter().cloned());
    rref(all, d).len() == a.len()
}

fn image(n: &[V], s: &[V], d: usize) -> Vec<V> {
    rref(s.iter().map(|v| apply(n, v)).collect(), d)
}

/// All filtrations `M_{-(d-1)} ⊆ .. ⊆ M_{d-1} = V` satisfying the
/// defining properties, as reduced bases indexed from `-(d-1)`.
fn search(n_int: &[Vec<i64>]) -> Vec<Vec<Vec<V>>> {
    let d = n_int.len();
    let n: Vec<V> = n_int
        .iter()
        .map(|r| r.iter().map(|&x| Rational64::from_integer(x)).collect())
        .collect();
    let mut pool: Vec<V> = Vec::new();
    for code in 1..3usize.pow(d as u32) {
        let mut c = code;
        pool.push(
            (0..d)
                .map(|_| {
                    let v = (c % 3) as i64 - 1;
                    c /= 3;
                    Rational64::from_integer(v)
                })
                .collect(),
        );
    }
    let mut power: Vec<V> = (0..d)
        .map(|i| (0..d).map(|j| Rational64::from_integer((i == j) as i64)).collect())
        .collect();
    let mut powers = vec![power.clone()];
    for _ in 0..d {
        power = mat_mul(&power, &n);
        powers.push(power.clone());
    }
    let extra: Vec<V> = powers.iter().flat_map(|m| kernel(m, d)).collect();
    for v in &extra {
        for m in &powers {
            pool.push(apply(m, v));
        }
    }
    pool.retain(|v| v.iter().any(|x| !x.is_zero()));

    let mut spaces: Vec<Vec<V>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<V>> = vec![Vec::new()];
    for _ in 1..d {
        let mut next = Vec::new();
        for s in &frontier {
            for v in &pool {
                let mut rows = s.clone();
                rows.push(v.clone());
                let r = rref(rows, d);
                if r.len() == s.len() + 1 && !spaces.contains(&r) {
                    spaces.push(r.clone());
                    next.push(r);
                }
            }
        }
        frontier = next;
    }
    let full = rref(powers[0].clone(), d);
    spaces.push(full.clone());

    let top = d as i64 - 1;
    let slots = (2 * top) as usize; // M_{-top} .. M_{top-1}
    let mut found = Vec::new();
    let mut chain: Vec<Vec<V>> = Vec::new();
    fn level(chain: &[Vec<V>], full: &[V], top: i64, k: i64) -> Vec<V> {
        if k < -top {
            Vec::new()
        } else if k >= top || (k + top) as usize >= chain.len() {
            full.to_vec()
        } else {
            chain[(k + top) as usize].clone()
        }
    }
    #[allow(clippy::too_many_arguments)]
    fn extend(
        chain: &mut Vec<Vec<V>>,
        slots: usize,
        spaces: &[Vec<V>],
        full: &[V],
        n: &[V],
        powers: &[Vec<V>],
        d: usize,
        top: i64,
        found: &mut Vec<Vec<Vec<V>>>,
    ) {
        if chain.len() == slots {
            let lv = |k: i64| level(chain, full, top, k);
            for k in -top..=top {
                if !contains(&lv(k - 2), &image(n, &lv(k), d), d) {
                    return;
                }
            }
            for k in 1..=top {
                let low = lv(-k - 1);
                let gr_k = lv(k).len() - lv(k - 1).len();
                let gr_minus = lv(-k).len() - low.len();
                let mut img = image(&powers[k as usize], &lv(k), d);
                img.extend(low.iter().cloned());
                if gr_k != gr_minus || rref(img, d).len() - low.len() != gr_k {
                    return;
                }
            }
            let mut out = chain.clone();
            out.push(full.to_vec());
            found.push(out);
            return;
        }
        let k = chain.len() as i64 - top;
        for s in spaces {
            let prev = level(chain, full, top, k - 1);
            if !contains(s, &prev, d) {
                continue;
            }
            let below = if k - 2 < -top { Vec::new() } else { chain[(k - 2 + top) as usize].clone() };
            if !contains(&below, &image(n, s, d), d) {
                continue;
            }
            chain.push(s.clone());
            extend(chain, slots, spaces, full, n, powers, d, top, found);
            chain.pop();
        }
    }
    extend(&mut chain, slots, &spaces, &full, &n, &powers, d, top, &mut found);
    found
}

/// Every filtration `M_{-(d-1)} ⊆ .. ⊆ M_{d-1} = V` of `Q^d` with
/// `N M_k ⊆ M_{k-2}` and `N^k: gr_k ≅ gr_{-k}` whose members are found by
/// the candidate search. For nilpotent `N` exactly one should exist.
pub fn search_filtrations(n: &[Vec<i64>]) -> Vec<Filtration> {
    let d = n.len();
    let top = d as i64 - 1;
    search(n)
        .into_iter()
        .map(|chain| {
            let levels: BTreeMap<i64, Subspace> = chain
                .into_iter()
                .enumerate()
                .map(|(i, basis)| {
                    let big = basis
                        .into_iter()
                        .map(|v| {
                            v.into_iter()
                                .map(|x| BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom())))
                                .collect()
                        })
                        .collect();
                    (i as i64 - top, Subspace::span(d, big))
                })
                .collect();
            Filtration { dim: d, levels }
        })
        .collect()
}
