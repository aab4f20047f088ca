//! Finite fields `F_{p^m}`: arithmetic, traces, embeddings between
//! extensions, and enumeration of the torus `(F_q^*)^n`.
//!
//! Prime fields use plain modular arithmetic; extensions are
//! `F_p[x]/(mu)` with `mu` the first monic irreducible polynomial of the
//! right degree in a fixed scan order (see [`make_field`]).

mod embed;
mod field;
pub(crate) mod fp_poly;
mod prime;
mod torus;

use thiserror::Error;

pub use embed::embed;
pub use field::{make_field, trace_of_one, trace_to_prime, FieldSpec, FqElem};
pub use prime::{factorize, is_prime};
pub use torus::{enumerate_torus, torus_size, TorusEnumeration, TorusIter};

pub(crate) use torus::split_range;

/// Default cap on `q` for fields that are enumerated.
pub const DEFAULT_FIELD_BOUND: u64 = 1 << 40;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    DegreeZero,
    #[error("modulus must be monic")]
    ModulusNotMonic,
    #[error("modulus is reducible")]
    ModulusReducible,
    #[error("expected at most {expected} coordinates, found {found}")]
    CoordinateCount { expected: usize, found: usize },
    #[error("characteristic {from} cannot embed into characteristic {to}")]
    IncompatibleCharacteristic { from: u64, to: u64 },
    #[error("degree {to} is not a multiple of degree {from}")]
    NotAnExtension { from: usize, to: usize },
    #[error("enumeration needs {required} points, budget is {budget}")]
    BudgetExceeded { required: String, budget: u64 },
    #[error("malformed field element {0:?}")]
    BadElement(String),
    #[error("field of order {0} is too large to enumerate")]
    NotEnumerable(String),
}
