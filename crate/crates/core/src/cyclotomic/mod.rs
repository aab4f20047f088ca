//! Exact arithmetic in `Q(zeta_p)`, polynomials over it, the additive
//! character `psi(a) = zeta_p^Tr(a)`, power-sum/characteristic-polynomial
//! conversion and rational reconstruction of `exp(sum c_k T^k / k)`.

mod newton;
mod num;
mod poly;
mod recon;
mod roots;

use thiserror::Error;

pub use newton::{char_poly_from_power_sums, power_sums_of_roots, validate_power_sums};
pub use num::CycloNum;
pub use poly::CycloPoly;
pub use recon::{berlekamp_massey, exp_log_series, linear_recurrence_reconstruct, RationalFunction};
pub use roots::complex_roots;

pub(crate) use num::{fmt_rational, parse_rational};

use crate::ffield::{trace_to_prime, FqElem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycloError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{a} is not a unit modulo {p}")]
    BadIndex { a: i64, p: u64 },
    #[error("expected {expected} coordinates, found {found}")]
    CoordinateCount { expected: usize, found: usize },
    #[error("need at least {needed} terms, got {found}")]
    LengthTooShort { needed: usize, found: usize },
    #[error("no rational function of total degree at most {max_degree} fits {terms} coefficients")]
    Unstable { terms: usize, max_degree: usize },
    #[error("series and recurrence reconstructions disagree")]
    RouteMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed number {0:?}")]
    BadRational(String),
    #[error("polynomial has a zero leading coefficient")]
    TrailingZero,
}

/// `psi(a) = zeta_p^(Tr(a))` for `a` in `F_q`, `q = p^m`.
pub fn psi(a: &FqElem) -> CycloNum {
    CycloNum::zeta_pow(a.field().p(), trace_to_prime(a) as i64)
}

/// The Galois automorphism `zeta -> zeta^a` (see [`CycloNum::conj_sigma`]).
pub fn conj_sigma(z: &CycloNum, a: i64) -> Result<CycloNum, CycloError> {
    z.conj_sigma(a)
}

/// The complex embedding `zeta -> exp(2 pi i a / p)`.
pub fn embed_complex(z: &CycloNum, a: i64) -> Result<num_complex::Complex64, CycloError> {
    z.embed_complex(a)
}

#[cfg(test)]
mod tests;
