//! Laurent polynomials over `F_q` and `Q`, deformations
//! `F_x = f + sum x_k g_k`, the parameter map to the monomial coefficients,
//! non-degeneracy testing and critical-point counts.

mod deformation;
mod nondeg;
mod poly;

use serde::Serializer;
use thiserror::Error;

pub use deformation::{phi_map, Deformation, DeformationKind, MonomialTable};
pub use nondeg::{check_nondegenerate, critical_count, rank_check, Nondegeneracy, RankCheck};
pub use poly::{Coefficient, LaurentPoly};


use crate::ffield::{FieldError, FqElem};
use crate::polytope::PolytopeError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("torus point has a zero coordinate")]
    ZeroCoordinate,
    #[error("expected {expected} entries, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("coefficients and arguments live in different fields")]
    FieldMismatch,
    #[error("cannot determine the field of an empty polynomial")]
    UnknownField,
    #[error("exponent {0:?} is missing from the monomial table")]
    TableMismatch(Vec<i64>),
    #[error("exponent {0:?} appears twice in the monomial table")]
    DuplicateTableEntry(Vec<i64>),
    #[error("tau must be nonzero")]
    ZeroTau,
    #[error("exponent {exponent:?} violates the {kind} condition")]
    KindViolation {
        exponent: Vec<i64>,
        kind: DeformationKind,
    },
    #[error("polytope is not the Newton polyhedron of the polynomial")]
    PolytopeMismatch,
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl LaurentError {
    pub fn is_budget(&self) -> bool {
        matches!(self, LaurentError::Field(FieldError::BudgetExceeded { .. }))
    }
}

pub(crate) fn serialize_elems<S: Serializer>(v: &[FqElem], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|a| a.to_string()))
}

#[cfg(test)]
mod tests;
