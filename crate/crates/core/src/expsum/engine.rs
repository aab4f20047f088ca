//! Torus enumeration kernels.
//!
//! With `g` the field generator and `t_i = g^(e_i)`, a term `c t^w` with
//! `c = g^l` equals `g^(l + <w, e>)`, so the absolute trace of `G(t)` is a
//! sum of lookups `Tr(g^k)` in a precomputed table. The exponents are kept
//! incrementally: advancing the odometer changes every moved digit by
//! `+1 mod (q-1)`, which adds `w_i` to each term's exponent.

use std::collections::HashMap;
use std::ops::Range;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::ffield::{split_range, torus_size, trace_to_prime, FieldError, FieldSpec, FqElem};
use crate::laurent::LaurentPoly;
use crate::EnumConfig;

/// Largest `q - 1` for which trace and log tables are built.
pub(crate) const TABLE_LIMIT: u64 = 1 << 22;

pub(crate) struct FieldTables {
    p: u64,
    units: u64,
    /// `trace[k] = Tr(g^k)`.
    trace: Vec<u32>,
    /// `log[index(a)] = k` with `a = g^k`; unused at index 0.
    log: Vec<u32>,
}

impl FieldTables {
    fn build(field: &FieldSpec) -> Result<FieldTables, FieldError> {
        let q = field.order_u64().expect("checked by caller");
        let units = q - 1;
        let g = field.generator()?;
        let mut trace = Vec::with_capacity(units as usize);
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = field.one();
        for k in 0..units {
            trace.push(trace_to_prime(&cur) as u32);
            log[cur.index() as usize] = k as u32;
            cur = &cur * &g;
        }
        Ok(FieldTables {
            p: field.p(),
            units,
            trace,
            log,
        })
    }

    fn log_of(&self, a: &FqElem) -> u64 {
        self.log[a.index() as usize] as u64
    }
}

fn tables_for(field: &FieldSpec) -> Result<Arc<FieldTables>, FieldError> {
    type Cache = Mutex<HashMap<(u64, Vec<u64>), Arc<FieldTables>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let key = (field.p(), field.modulus().to_vec());
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&key) {
        return Ok(t.clone());
    }
    let t = Arc::new(FieldTables::build(field)?);
    cache.lock().unwrap().insert(key, t.clone());
    Ok(t)
}

fn fast_path_available(field: &FieldSpec) -> bool {
    field.order_u64().is_some_and(|q| q - 1 <= TABLE_LIMIT) && field.p() < (1 << 32)
}

/// Validates the enumeration size and returns `(q - 1, (q - 1)^n)`.
pub(crate) fn torus_len(field: &FieldSpec, n: usize, budget: u64) -> Result<(u64, u64), FieldError> {
    let q = field
        .order_u64()
        .ok_or_else(|| FieldError::NotEnumerable(field.order().to_string()))?;
    let required = torus_size(q - 1, n);
    if required > budget as u128 {
        return Err(FieldError::BudgetExceeded {
            required: required.to_string(),
            budget,
        });
    }
    Ok((q - 1, required as u64))
}

/// `G` compiled to exponent form over a field with tables.
struct Compiled {
    tables: Arc<FieldTables>,
    n: usize,
    /// Initial exponent `l_j` of each coefficient.
    logs: Vec<u64>,
    /// `steps[i][j] = w_ji mod (q-1)`.
    steps: Vec<Vec<u64>>,
}

impl Compiled {
    fn new(g: &LaurentPoly<FqElem>, tables: Arc<FieldTables>) -> Compiled {
        let units = tables.units as i64;
        let terms: Vec<_> = g.terms().iter().filter(|(_, c)| !c.is_zero()).collect();
        let logs = terms.iter().map(|(_, c)| tables.log_of(c)).collect();
        let steps = (0..g.nvars())
            .map(|i| {
                terms
                    .iter()
                    .map(|(w, _)| w[i].rem_euclid(units) as u64)
                    .collect()
            })
            .collect();
        Compiled {
            tables,
            n: g.nvars(),
            logs,
            steps,
        }
    }

    /// Calls `visit` with the term exponents at every point of `range`.
    fn walk(&self, range: Range<u64>, mut visit: impl FnMut(&[u64])) {
        let units = self.tables.units;
        let mut rest = range.start;
        let mut digits: Vec<u64> = (0..self.n)
            .map(|_| {
                let d = rest % units;
                rest /= units;
                d
            })
            .collect();
        let mut idx: Vec<u64> = self.logs.clone();
        for (i, &d) in digits.iter().enumerate() {
            for (x, &s) in idx.iter_mut().zip(&self.steps[i]) {
                *x = ((*x as u128 + s as u128 * d as u128) % units as u128) as u64;
            }
        }
        let count = range.end - range.start;
        for step in 0..count {
            visit(&idx);
            if step + 1 == count {
                break;
            }
            for i in 0..self.n {
                for (x, &s) in idx.iter_mut().zip(&self.steps[i]) {
                    *x += s;
                    if *x >= units {
                        *x -= units;
                    }
                }
                digits[i] += 1;
                if digits[i] < units {
                    break;
                }
                digits[i] = 0;
            }
        }
    }

    fn trace_at(&self, idx: &[u64]) -> u64 {
        let t = &self.tables.trace;
        idx.iter().map(|&k| t[k as usize] as u64).sum::<u64>() % self.tables.p
    }
}

/// `h[r] = #{t in (E^*)^n : Tr(G(t)) = r}`.
pub(crate) fn trace_histogram(
    g: &LaurentPoly<FqElem>,
    field: &FieldSpec,
    config: &EnumConfig,
    generic: bool,
) -> Result<Vec<u64>, FieldError> {
    let n = g.nvars();
    let (_, len) = torus_len(field, n, config.budget)?;
    let p = field.p() as usize;
    let chunks = split_range(len, config.partitions);
    let merge = |mut a: Vec<u64>, b: Vec<u64>| {
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        a
    };
    if !generic && fast_path_available(field) {
        let compiled = Compiled::new(g, tables_for(field)?);
        Ok(chunks
            .into_par_iter()
            .map(|r| {
                let mut h = vec![0u64; p];
                compiled.walk(r, |idx| h[compiled.trace_at(idx) as usize] += 1);
                h
            })
            .reduce(|| vec![0u64; p], merge))
    } else {
        let torus = crate::ffield::enumerate_torus(field, n, config.budget)?;
        Ok(chunks
            .into_par_iter()
            .map(|r| {
                let mut h = vec![0u64; p];
                for t in torus.iter_range(r) {
                    let v = g.evaluate(&t).expect("torus points are nonzero");
                    h[trace_to_prime(&v) as usize] += 1;
                }
                h
            })
            .reduce(|| vec![0u64; p], merge))
    }
}

/// `#{t in (E^*)^n : G(t) = 0}`. A value vanishes iff its products with
/// every basis element `x^b` have zero trace.
pub(crate) fn count_zeros(
    g: &LaurentPoly<FqElem>,
    field: &FieldSpec,
    config: &EnumConfig,
    generic: bool,
) -> Result<u64, FieldError> {
    let n = g.nvars();
    let (_, len) = torus_len(field, n, config.budget)?;
    let chunks = split_range(len, config.partitions);
    if !generic && fast_path_available(field) {
        let tables = tables_for(field)?;
        let units = tables.units;
        let channels: Vec<u64> = (0..field.degree())
            .map(|b| {
                let mut coords = vec![0u64; field.degree()];
                coords[b] = 1;
                tables.log_of(&field.from_coords(&coords).unwrap())
            })
            .collect();
        let compiled = Compiled::new(g, tables.clone());
        let trace = &tables.trace;
        let p = tables.p;
        Ok(chunks
            .into_par_iter()
            .map(|r| {
                let mut zeros = 0u64;
                compiled.walk(r, |idx| {
                    let vanishes = channels.iter().all(|&s| {
                        idx.iter()
                            .map(|&k| {
                                let e = k + s;
                                let e = if e >= units { e - units } else { e };
                                trace[e as usize] as u64
                            })
                            .sum::<u64>()
                            % p
                            == 0
                    });
                    zeros += u64::from(vanishes);
                });
                zeros
            })
            .sum())
    } else {
        let torus = crate::ffield::enumerate_torus(field, n, config.budget)?;
        Ok(chunks
            .into_par_iter()
            .map(|r| {
                torus
                    .iter_range(r)
                    .filter(|t| g.evaluate(t).expect("nonzero point").is_zero())
                    .count() as u64
            })
            .sum())
    }
}
