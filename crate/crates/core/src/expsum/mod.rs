//! Exponential sums over tori: sums of a deformation at `(tau, x)`, GKZ
//! sums at a coefficient vector `y`, zero counts, and the sums over all
//! `tau` obtained from them by orthogonality.
//!
//! The additive character is `psi(a) = zeta_p^(Tr(a))` with the absolute
//! trace, so over `F_{q^k}` it is automatically `psi` composed with the
//! relative trace down to `F_q`.

mod engine;
#[cfg(test)]
mod tests;

use num_bigint::BigInt;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::{CycloError, CycloNum};
use crate::ffield::{embed, FieldError, FieldSpec, FqElem};
use crate::laurent::{Deformation, LaurentError, LaurentPoly, MonomialTable};
use crate::EnumConfig;

/// Above this many points the double enumeration in [`tau_summed_trace`]
/// is skipped and only the closed form is used.
pub const DIRECT_CHECK_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpSumError {
    #[error("tau must be nonzero")]
    ZeroTau,
    #[error("monomial table is empty")]
    EmptyTable,
    #[error("closed form {closed} disagrees with direct enumeration {direct}")]
    CrossCheck { closed: String, direct: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

impl ExpSumError {
    pub fn is_budget(&self) -> bool {
        match self {
            ExpSumError::Field(FieldError::BudgetExceeded { .. }) => true,
            ExpSumError::Laurent(e) => e.is_budget(),
            _ => false,
        }
    }
}

/// Which additive character the sum is taken against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Character {
    #[default]
    Psi,
    PsiInverse,
}

fn lift(a: &FqElem, target: &FieldSpec) -> Result<FqElem, FieldError> {
    embed(a, target)
}

fn lift_all(v: &[FqElem], target: &FieldSpec) -> Result<Vec<FqElem>, FieldError> {
    v.iter().map(|a| lift(a, target)).collect()
}

fn histogram_to_sum(p: u64, hist: &[u64], chi: Character) -> CycloNum {
    match chi {
        Character::Psi => CycloNum::from_exponent_weights(p, hist),
        Character::PsiInverse => {
            let pu = p as usize;
            let flipped: Vec<u64> = (0..pu).map(|r| hist[(pu - r) % pu]).collect();
            CycloNum::from_exponent_weights(p, &flipped)
        }
    }
}

fn character_sum(
    g: &LaurentPoly<FqElem>,
    field: &FieldSpec,
    chi: Character,
    config: &EnumConfig,
) -> Result<CycloNum, ExpSumError> {
    let hist = engine::trace_histogram(g, field, config, false)?;
    Ok(histogram_to_sum(field.p(), &hist, chi))
}

/// `tau F_x` over `F_{q^k}`, with `tau` and `x` lifted from any subfield.
fn scaled_specialization(
    d: &Deformation,
    k: usize,
    tau: &FqElem,
    x: &[FqElem],
) -> Result<(FieldSpec, LaurentPoly<FqElem>), ExpSumError> {
    if tau.is_zero() {
        return Err(ExpSumError::ZeroTau);
    }
    let e = d.field().extension(k)?;
    let tau = lift(tau, &e)?;
    let x = lift_all(x, &e)?;
    let g = d.specialize_over(&e, &x)?.scale(&tau);
    Ok((e, g))
}

/// `sum_{t in (F_{q^k}^*)^n} psi(tau F_x(t))`.
pub fn family_sum(
    d: &Deformation,
    k: usize,
    tau: &FqElem,
    x: &[FqElem],
    config: &EnumConfig,
) -> Result<CycloNum, ExpSumError> {
    family_sum_with(d, k, tau, x, Character::Psi, config)
}

/// [`family_sum`] against a chosen character.
pub fn family_sum_with(
    d: &Deformation,
    k: usize,
    tau: &FqElem,
    x: &[FqElem],
    chi: Character,
    config: &EnumConfig,
) -> Result<CycloNum, ExpSumError> {
    let (e, g) = scaled_specialization(d, k, tau, x)?;
    character_sum(&g, &e, chi, config)
}

/// `sum_{t in (F_{q^k}^*)^n} psi(sum_j y_j t^(w_j))`, where `q` is the
/// order of `base` and `y` is lifted into `F_{q^k}`.
pub fn gkz_sum(
    table: &MonomialTable,
    base: &FieldSpec,
    k: usize,
    y: &[FqElem],
    config: &EnumConfig,
) -> Result<CycloNum, ExpSumError> {
    if table.is_empty() {
        return Err(ExpSumError::EmptyTable);
    }
    let e = base.extension(k)?;
    let y = lift_all(y, &e)?;
    let g = table.polynomial(&y)?;
    character_sum(&g, &e, Character::Psi, config)
}

/// `#{t in (F_{q^k}^*)^n : F_x(t) = 0}`.
pub fn zero_count(
    d: &Deformation,
    k: usize,
    x: &[FqElem],
    config: &EnumConfig,
) -> Result<u64, ExpSumError> {
    let e = d.field().extension(k)?;
    let x = lift_all(x, &e)?;
    let g = d.specialize_over(&e, &x)?;
    Ok(engine::count_zeros(&g, &e, config, false)?)
}

/// The trace `c_k` of the `tau`-family at `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TauTrace {
    pub k: usize,
    #[serde(serialize_with = "crate::serialize_display")]
    pub value: BigInt,
    pub zero_count: u64,
    /// Whether the double enumeration over `tau` and `t` was carried out
    /// (and agreed).
    pub direct_checked: bool,
}

/// `c_k = (-1)^n [Q Z_k - (Q-1)^n]` with `Q = q^k`, which by orthogonality
/// equals `(-1)^n sum_{tau != 0} family_sum(d, k, tau, x)`. The sum over
/// `tau` is also enumerated directly when it has at most
/// [`DIRECT_CHECK_LIMIT`] points, and the two must agree.
pub fn tau_summed_trace(
    d: &Deformation,
    k: usize,
    x: &[FqElem],
    config: &EnumConfig,
) -> Result<TauTrace, ExpSumError> {
    let e = d.field().extension(k)?;
    let n = d.nvars();
    let z = zero_count(d, k, x, config)?;
    let q = e
        .order_u64()
        .ok_or_else(|| FieldError::NotEnumerable(e.order().to_string()))?;
    let units = BigInt::from(q - 1);
    let torus = num_traits::pow(units.clone(), n);
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let closed = BigInt::from(sign) * (BigInt::from(q) * BigInt::from(z) - &torus);

    let total = torus * &units;
    let direct_checked = total <= BigInt::from(DIRECT_CHECK_LIMIT.min(config.budget));
    if direct_checked {
        let p = e.p();
        let mut acc = CycloNum::zero(p);
        for tau in e.elements().filter(|a| !a.is_zero()) {
            acc = &acc + &family_sum(d, k, &tau, x, config)?;
        }
        let direct = acc.as_rational().cloned();
        let agrees = direct
            .as_ref()
            .is_some_and(|r| r.is_integer() && r.numer() * BigInt::from(sign) == closed);
        if !agrees {
            return Err(ExpSumError::CrossCheck {
                closed: closed.to_string(),
                direct: acc.to_string(),
            });
        }
    }
    Ok(TauTrace {
        k,
        value: closed,
        zero_count: z,
        direct_checked,
    })
}

/// A sum together with its complex embeddings and the bound
/// `vol * Q^(n/2)` they are expected to respect.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SumReport {
    pub exact: CycloNum,
    #[serde(serialize_with = "serialize_complex")]
    pub embeddings: Vec<Complex64>,
    pub bound: f64,
    pub bound_ok: bool,
}

/// Slack allowed on top of the bound.
pub const BOUND_TOLERANCE: f64 = 1e-6;

pub fn sum_report(s: &CycloNum, normalized_volume: u64, q_k: u64, n: usize) -> SumReport {
    let p = s.p() as i64;
    let embeddings: Vec<Complex64> = (1..p)
        .map(|a| s.embed_complex(a).expect("a is a unit"))
        .collect();
    let bound = normalized_volume as f64 * (q_k as f64).powf(n as f64 / 2.0);
    let bound_ok = embeddings.iter().all(|z| z.norm() <= bound + BOUND_TOLERANCE);
    SumReport {
        exact: s.clone(),
        embeddings,
        bound,
        bound_ok,
    }
}

fn serialize_complex<S: serde::Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|z| [z.re, z.im]))
}

/// Reference implementations that evaluate the polynomial point by point
/// in field arithmetic, for cross-checking the table-driven kernels.
pub mod reference {
    use super::*;

    pub fn family_sum(
        d: &Deformation,
        k: usize,
        tau: &FqElem,
        x: &[FqElem],
        chi: Character,
        config: &EnumConfig,
    ) -> Result<CycloNum, ExpSumError> {
        let (e, g) = scaled_specialization(d, k, tau, x)?;
        let hist = engine::trace_histogram(&g, &e, config, true)?;
        Ok(histogram_to_sum(e.p(), &hist, chi))
    }

    pub fn zero_count(
        d: &Deformation,
        k: usize,
        x: &[FqElem],
        config: &EnumConfig,
    ) -> Result<u64, ExpSumError> {
        let e = d.field().extension(k)?;
        let x = lift_all(x, &e)?;
        let g = d.specialize_over(&e, &x)?;
        Ok(engine::count_zeros(&g, &e, config, true)?)
    }
}
