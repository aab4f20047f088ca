//! Frobenius data recovered from exponential sums: characteristic
//! polynomials at a parameter point with purity and duality checks, the
//! L-function of the `tau`-family, and the monodromy filtration of a
//! nilpotent endomorphism.

mod lfunction;
mod monodromy;
mod qmat;
pub mod reference;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::{
    char_poly_from_power_sums, complex_roots, validate_power_sums, CycloError, CycloNum, CycloPoly,
};
use crate::expsum::{family_sum, ExpSumError};
use crate::ffield::{embed, FieldError, FieldSpec, FqElem};
use crate::laurent::{check_nondegenerate, Deformation, LaurentError, Nondegeneracy};
use crate::EnumConfig;

pub use lfunction::{family_l_function, l_function_from_traces, LFunctionFit, LFunctionReport};
pub use monodromy::{monodromy_filtration, Filtration};
pub use qmat::{QMatrix, Subspace};

/// Relative tolerance for archimedean absolute values.
pub const PURITY_TOLERANCE: f64 = 1e-6;

/// Largest rank handled by [`frobenius_report`] unless overridden.
pub const DEFAULT_MAX_RANK: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrobError {
    #[error("power sums beyond the rank do not satisfy the characteristic polynomial")]
    RankMismatch(Box<FrobeniusReport>),
    #[error("absolute values deviate from the expected weight by more than the tolerance")]
    ToleranceExceeded(Box<FrobeniusReport>),
    #[error("rank {rank} exceeds the limit {limit}")]
    RankTooLarge { rank: u64, limit: usize },
    #[error("parameter lives in {found}, which is not an extension of {base}")]
    BadParameterField { base: String, found: String },
    #[error("need at least {needed} traces, got {found}")]
    KmaxTooSmall { needed: usize, found: usize },
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error(transparent)]
    ExpSum(#[from] ExpSumError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl FrobError {
    pub fn is_budget(&self) -> bool {
        match self {
            FrobError::ExpSum(e) => e.is_budget(),
            FrobError::Laurent(e) => e.is_budget(),
            FrobError::Field(FieldError::BudgetExceeded { .. }) => true,
            _ => false,
        }
    }

    /// The report carried by a verification failure.
    pub fn report(&self) -> Option<&FrobeniusReport> {
        match self {
            FrobError::RankMismatch(r) | FrobError::ToleranceExceeded(r) => Some(r),
            _ => None,
        }
    }
}

/// A parameter point `(tau, x)` moved into one field `F_{q^e}`, where `q`
/// is the order of the deformation's field.
struct Point {
    field: FieldSpec,
    degree: usize,
    tau: FqElem,
    x: Vec<FqElem>,
}

fn locate(d: &Deformation, tau: &FqElem, x: &[FqElem]) -> Result<Point, FrobError> {
    let base = d.field();
    let mut field = tau.field().clone();
    for a in x {
        if a.field().degree() > field.degree() {
            field = a.field().clone();
        }
    }
    let bad = || FrobError::BadParameterField {
        base: base.order().to_string(),
        found: field.order().to_string(),
    };
    if field.p() != base.p() || field.degree() % base.degree() != 0 {
        return Err(bad());
    }
    let degree = field.degree() / base.degree();
    let field = base.extension(degree)?;
    let tau = embed(tau, &field).map_err(|_| bad())?;
    let x = x
        .iter()
        .map(|a| embed(a, &field))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| bad())?;
    Ok(Point {
        field,
        degree,
        tau,
        x,
    })
}

/// `p_k = (-1)^n S_k` for `k = 1..=count`, where `S_k` is the sum of the
/// deformation at `(tau, x)` over the degree-`k` extension of the field of
/// the point.
pub fn stalk_power_sums(
    d: &Deformation,
    tau: &FqElem,
    x: &[FqElem],
    count: usize,
    config: &EnumConfig,
) -> Result<Vec<CycloNum>, FrobError> {
    let pt = locate(d, tau, x)?;
    power_sums_at(d, &pt, count, config)
}

fn power_sums_at(
    d: &Deformation,
    pt: &Point,
    count: usize,
    config: &EnumConfig,
) -> Result<Vec<CycloNum>, FrobError> {
    let odd = d.nvars() % 2 == 1;
    (1..=count)
        .map(|k| {
            let s = family_sum(d, pt.degree * k, &pt.tau, &pt.x, config)?;
            Ok(if odd { -&s } else { s })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrobeniusReport {
    #[serde(serialize_with = "crate::serialize_display")]
    pub tau: FqElem,
    #[serde(serialize_with = "crate::laurent::serialize_elems")]
    pub x: Vec<FqElem>,
    /// Order of the field the point is rational over.
    pub q: String,
    pub weight: usize,
    pub rank: u64,
    pub power_sums: Vec<CycloNum>,
    pub char_poly: CycloPoly,
    /// `p_{r+1}..p_{2r}` agree with the characteristic polynomial.
    pub consistent: bool,
    /// Per embedding `a`, the largest `| |alpha| - q^(n/2) | / q^(n/2)`.
    pub purity_deviation: Vec<f64>,
    pub purity_ok: bool,
    /// `T^r P(q^n / T) = c * conj_sigma(P, -1)`; `c` when it exists.
    pub duality_constant: Option<CycloNum>,
    pub duality_ok: bool,
    /// Per embedding, `| |P(0)| - q^(nr/2) | / q^(nr/2)`.
    pub determinant_deviation: Vec<f64>,
    pub determinant_ok: bool,
    pub nondegeneracy: Nondegeneracy,
    pub warnings: Vec<String>,
}

/// `T^r P(Q / T)` for a polynomial of degree at most `r`.
pub fn dual_polynomial(poly: &CycloPoly, r: usize, big_q: &BigRational) -> CycloPoly {
    let p = poly.p();
    let mut scale = BigRational::one();
    let mut coeffs = vec![CycloNum::zero(p); r + 1];
    for j in 0..=r {
        coeffs[r - j] = poly.coeff(j).scale(&scale);
        scale *= big_q;
    }
    CycloPoly::new(p, coeffs)
}

/// The characteristic polynomial at `(tau, x)` with its consistency,
/// purity, duality and determinant checks.
///
/// The rank is the normalized volume of the Newton polyhedron of the
/// undeformed polynomial. A failed consistency check is returned as
/// `RankMismatch` and a failed archimedean check as `ToleranceExceeded`,
/// both carrying the full report.
pub fn frobenius_report(
    d: &Deformation,
    tau: &FqElem,
    x: &[FqElem],
    max_rank: usize,
    config: &EnumConfig,
) -> Result<FrobeniusReport, FrobError> {
    frobenius_report_with_tolerance(d, tau, x, max_rank, PURITY_TOLERANCE, config)
}

/// [`frobenius_report`] with a chosen relative tolerance for the purity and
/// determinant checks.
pub fn frobenius_report_with_tolerance(
    d: &Deformation,
    tau: &FqElem,
    x: &[FqElem],
    max_rank: usize,
    tolerance: f64,
    config: &EnumConfig,
) -> Result<FrobeniusReport, FrobError> {
    let pt = locate(d, tau, x)?;
    let n = d.nvars();
    let delta = d.base().newton_polyhedron().map_err(LaurentError::from)?;
    let rank = delta.normalized_volume();
    if rank > max_rank as u64 {
        return Err(FrobError::RankTooLarge {
            rank,
            limit: max_rank,
        });
    }
    let r = rank as usize;

    let mut warnings = Vec::new();
    let fx = d.specialize_over(&pt.field, &pt.x)?;
    let nondegeneracy = match fx.newton_polyhedron() {
        Ok(dx) => {
            if dx != delta {
                warnings.push("Newton polyhedron changes at this parameter".to_string());
            }
            check_nondegenerate(&fx, &pt.field, &dx, 1, config)?
        }
        Err(_) => {
            warnings.push("specialized polynomial has a degenerate Newton polyhedron".to_string());
            Nondegeneracy::VerifiedUpTo {
                max_k: 0,
                conclusive: false,
            }
        }
    };
    if nondegeneracy.is_degenerate() {
        warnings.push("parameter is degenerate".to_string());
    }

    let power_sums = power_sums_at(d, &pt, 2 * r.max(1), config)?;
    let p = power_sums[0].p();
    let char_poly = char_poly_from_power_sums(&power_sums, r)?;
    let consistent = validate_power_sums(&char_poly, &power_sums);

    let q = pt.field.order_u64().expect("enumerated field");
    let q_f = q as f64;
    let weight_abs = q_f.powf(n as f64 / 2.0);
    let embeddings: Vec<i64> = (1..p as i64).collect();
    let mut purity_deviation = Vec::new();
    let mut determinant_deviation = Vec::new();
    for &a in &embeddings {
        let roots: Vec<Complex64> = if r == 0 {
            Vec::new()
        } else {
            complex_roots(&char_poly, a)?
        };
        let dev = roots
            .iter()
            .map(|z| (z.norm() - weight_abs).abs() / weight_abs)
            .fold(0.0f64, f64::max);
        purity_deviation.push(dev);
        let det = char_poly.coeff(0).embed_complex(a)?.norm();
        let expected = q_f.powf((n * r) as f64 / 2.0);
        determinant_deviation.push((det - expected).abs() / expected);
    }
    let purity_ok = purity_deviation.iter().all(|&v| v < tolerance);
    let determinant_ok = determinant_deviation.iter().all(|&v| v < tolerance);

    let big_q = BigRational::from_integer(num_traits::pow(num_bigint::BigInt::from(q), n));
    let dual = dual_polynomial(&char_poly, r, &big_q);
    let conjugate = char_poly.conj_sigma(-1)?;
    let duality_constant = dual.proportionality(&conjugate);
    let duality_ok = duality_constant.is_some();

    let report = FrobeniusReport {
        tau: pt.tau.clone(),
        x: pt.x.clone(),
        q: q.to_string(),
        weight: n,
        rank,
        power_sums,
        char_poly,
        consistent,
        purity_deviation,
        purity_ok,
        duality_constant,
        duality_ok,
        determinant_deviation,
        determinant_ok,
        nondegeneracy,
        warnings,
    };
    if !report.consistent {
        return Err(FrobError::RankMismatch(Box::new(report)));
    }
    if !report.purity_ok || !report.determinant_ok {
        return Err(FrobError::ToleranceExceeded(Box::new(report)));
    }
    Ok(report)
}
