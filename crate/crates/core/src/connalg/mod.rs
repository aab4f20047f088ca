//! Exact connection calculus on `P^1 x X` over `Q`: curvature, Poincaré
//! rank along `t = 0`, restrictions of flat connections, the connection of
//! a Frobenius type structure and its flatness and metric conditions.

mod form;
mod fts;
mod json;
mod matrix;
mod mpoly;
#[cfg(test)]
mod tests;

use thiserror::Error;

pub use form::{
    curvature, log_restriction, poincare_rank, pull_back_negate_t, rank1_restriction, to_s_chart,
    LogRestriction, LogRestrictionReport, MatForm, Rank1Report, Rank1Restriction,
};
pub use fts::{
    assemble_nabla, random_metric_tuple, random_tuple, verify_fts, verify_metric, Condition,
    FtsReport, FtsTuple, MetricReport, RandomTupleSpec, CONDITION_NAMES,
};
pub use json::{
    entry_to_json, matrix_to_json, ConnectionJson, EntryJson, MatrixJson, QuotientJson, TermJson,
    TupleJson,
};
pub use matrix::RMat;
pub use mpoly::{var_names, MPoly, RatFunc};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConnError {
    #[error("connection is not flat")]
    NotFlat,
    #[error("expected Poincaré rank {wanted}, found {found}")]
    WrongRank { wanted: i64, found: i64 },
    #[error("metric is singular")]
    SingularMetric,
    #[error("metric is not symmetric")]
    NotSymmetric,
    #[error("tuple has no metric")]
    NoMetric,
    #[error("tuple entries must not depend on t")]
    TDependent,
    #[error("{0}")]
    Shape(String),
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("independent checks disagree: {0}")]
    Inconsistent(String),
}
