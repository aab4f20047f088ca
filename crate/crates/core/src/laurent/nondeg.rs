use std::ops::Range;

use rayon::prelude::*;
use serde::Serialize;

use super::{LaurentError, LaurentPoly};
use crate::ffield::{torus_size, FieldError, FieldSpec, FqElem};
use crate::polytope::{face_restrict, Face, LatticePoint, Polytope};
use crate::EnumConfig;

/// Evaluates Laurent polynomials on `(F^*)^n` through exponent digits:
/// with `t_i = g^(e_i)`, the monomial `t^w` is `g^(<w, e>)`.
pub(crate) struct TorusEvaluator {
    field: FieldSpec,
    n: usize,
    units: u64,
    powers: Vec<FqElem>,
}

impl TorusEvaluator {
    pub(crate) fn new(field: &FieldSpec, n: usize, budget: u64) -> Result<Self, FieldError> {
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
        let g = field.generator()?;
        let mut powers = Vec::with_capacity((q - 1) as usize);
        let mut cur = field.one();
        for _ in 0..q - 1 {
            powers.push(cur.clone());
            cur = &cur * &g;
        }
        Ok(TorusEvaluator {
            field: field.clone(),
            n,
            units: q - 1,
            powers,
        })
    }

    pub(crate) fn len(&self) -> u64 {
        torus_size(self.units, self.n) as u64
    }

    fn digits(&self, mut index: u64) -> Vec<u64> {
        (0..self.n)
            .map(|_| {
                let d = index % self.units;
                index /= self.units;
                d
            })
            .collect()
    }

    pub(crate) fn point(&self, index: u64) -> Vec<FqElem> {
        self.digits(index)
            .into_iter()
            .map(|e| self.powers[e as usize].clone())
            .collect()
    }

    fn compile(&self, f: &LaurentPoly<FqElem>) -> Vec<(Vec<i64>, FqElem)> {
        f.terms()
            .iter()
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect()
    }

    fn value(&self, terms: &[(Vec<i64>, FqElem)], digits: &[u64]) -> FqElem {
        let units = self.units as i128;
        let mut acc = self.field.zero();
        for (w, c) in terms {
            let e: i128 = w.iter().zip(digits).map(|(&a, &d)| a as i128 * d as i128).sum();
            let idx = e.rem_euclid(units) as usize;
            acc = &acc + &(c * &self.powers[idx]);
        }
        acc
    }

    /// First index in `range` where every polynomial vanishes.
    fn first_common_zero(
        &self,
        polys: &[Vec<(Vec<i64>, FqElem)>],
        range: Range<u64>,
    ) -> Option<u64> {
        range
            .into_iter()
            .find(|&i| {
                let d = self.digits(i);
                polys.iter().all(|f| self.value(f, &d).is_zero())
            })
    }

    fn count_common_zeros(&self, polys: &[Vec<(Vec<i64>, FqElem)>], range: Range<u64>) -> u64 {
        range
            .into_iter()
            .filter(|&i| {
                let d = self.digits(i);
                polys.iter().all(|f| self.value(f, &d).is_zero())
            })
            .count() as u64
    }
}

fn log_derivatives(f: &LaurentPoly<FqElem>) -> Vec<LaurentPoly<FqElem>> {
    (0..f.nvars()).map(|i| f.log_derivative(i)).collect()
}

/// Deterministic parallel search for the first torus point (in enumeration
/// order) where all of `polys` vanish.
fn search(
    ev: &TorusEvaluator,
    polys: &[LaurentPoly<FqElem>],
    partitions: usize,
) -> Option<Vec<FqElem>> {
    let compiled: Vec<_> = polys.iter().map(|f| ev.compile(f)).collect();
    crate::ffield::split_range(ev.len(), partitions)
        .into_par_iter()
        .filter_map(|r| ev.first_common_zero(&compiled, r))
        .min()
        .map(|i| ev.point(i))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Nondegeneracy {
    /// A common zero of the logarithmic derivatives of `f_σ` over `F_{q^k}`.
    DegenerateAt {
        face: Vec<LatticePoint>,
        #[serde(serialize_with = "crate::laurent::serialize_elems")]
        point: Vec<FqElem>,
        k: usize,
    },
    /// No witness over `F_{q^k}` for `k <= max_k`. `conclusive` is set when
    /// every face was a vertex, where the test is exact.
    VerifiedUpTo { max_k: usize, conclusive: bool },
}

impl Nondegeneracy {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, Nondegeneracy::DegenerateAt { .. })
    }
}

/// Searches every face `σ` of `delta` with `0 ∉ σ` for a common torus zero of
/// `t_i ∂f_σ/∂t_i`, over `F_{q^k}` for `k = 1..=max_k`.
///
/// A vertex face `{w}` is decided without search: `f_σ = a t^w` is
/// degenerate iff every `w_i` is divisible by `p`.
pub fn check_nondegenerate(
    f: &LaurentPoly<FqElem>,
    field: &FieldSpec,
    delta: &Polytope,
    max_k: usize,
    config: &EnumConfig,
) -> Result<Nondegeneracy, LaurentError> {
    if f.newton_polyhedron()? != *delta {
        return Err(LaurentError::PolytopeMismatch);
    }
    let p = field.p() as i64;
    let faces = delta.faces_not_containing_origin();
    let mut searched: Vec<(&Face, Vec<LaurentPoly<FqElem>>)> = Vec::new();
    for face in &faces {
        if face.dimension == 0 {
            let w = &face.vertices[0];
            if w.iter().all(|&e| e % p == 0) {
                return Ok(Nondegeneracy::DegenerateAt {
                    face: face.vertices.clone(),
                    point: vec![field.one(); f.nvars()],
                    k: 1,
                });
            }
        } else {
            let restricted = face_restrict(f, delta, face)?;
            searched.push((face, log_derivatives(&restricted)));
        }
    }
    if searched.is_empty() {
        return Ok(Nondegeneracy::VerifiedUpTo {
            max_k,
            conclusive: true,
        });
    }
    let top = field.extension(max_k)?;
    TorusEvaluator::new(&top, f.nvars(), config.budget)?;
    for k in 1..=max_k {
        let ext = field.extension(k)?;
        let ev = TorusEvaluator::new(&ext, f.nvars(), config.budget)?;
        for (face, derivs) in &searched {
            let lifted = derivs
                .iter()
                .map(|g| g.embed_into(&ext))
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(point) = search(&ev, &lifted, config.partitions) {
                return Ok(Nondegeneracy::DegenerateAt {
                    face: face.vertices.clone(),
                    point,
                    k,
                });
            }
        }
    }
    Ok(Nondegeneracy::VerifiedUpTo {
        max_k,
        conclusive: false,
    })
}

/// Number of distinct points of `(F_{q^k}^*)^n` where every logarithmic
/// derivative of `f` vanishes.
pub fn critical_count(
    f: &LaurentPoly<FqElem>,
    field: &FieldSpec,
    k: usize,
    config: &EnumConfig,
) -> Result<u64, LaurentError> {
    let ext = field.extension(k)?;
    let ev = TorusEvaluator::new(&ext, f.nvars(), config.budget)?;
    let compiled: Vec<_> = log_derivatives(&f.embed_into(&ext)?)
        .iter()
        .map(|g| ev.compile(g))
        .collect();
    Ok(crate::ffield::split_range(ev.len(), config.partitions)
        .into_par_iter()
        .map(|r| ev.count_common_zeros(&compiled, r))
        .sum())
}

/// Critical-point counts against the normalized volume of the Newton
/// polyhedron.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankCheck {
    pub normalized_volume: u64,
    /// `counts[k-1]` is the critical count over `F_{q^k}`.
    pub counts: Vec<u64>,
    /// Every count is at most the volume.
    pub bound_ok: bool,
    /// Some count equals the volume.
    pub rank_confirmed: bool,
}

pub fn rank_check(
    f: &LaurentPoly<FqElem>,
    field: &FieldSpec,
    max_k: usize,
    config: &EnumConfig,
) -> Result<RankCheck, LaurentError> {
    let volume = f.newton_polyhedron()?.normalized_volume();
    let counts = (1..=max_k)
        .map(|k| critical_count(f, field, k, config))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RankCheck {
        normalized_volume: volume,
        bound_ok: counts.iter().all(|&c| c <= volume),
        rank_confirmed: counts.contains(&volume),
        counts,
    })
}
