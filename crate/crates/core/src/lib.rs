//! Finite-field and exact-arithmetic computations around deformed Laurent
//! polynomials: Newton polytopes, exponential sums and their Frobenius
//! eigenvalues, L-functions of one-parameter families, monodromy
//! filtrations, and flat meromorphic connections.

pub mod connalg;
pub mod cyclotomic;
pub mod expsum;
pub mod ffield;
pub mod frobdata;
pub mod laurent;
pub mod polytope;

/// Default cap on the number of torus points a single enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Enumeration limits shared by every operation that walks a torus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumConfig {
    /// Maximum number of points per enumeration.
    pub budget: u64,
    /// Number of contiguous chunks the torus is split into. Results do not
    /// depend on it.
    pub partitions: usize,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            budget: DEFAULT_BUDGET,
            partitions: rayon::current_num_threads().max(1),
        }
    }
}

impl EnumConfig {
    pub fn with_budget(budget: u64) -> Self {
        EnumConfig {
            budget,
            ..EnumConfig::default()
        }
    }

    pub fn with_partitions(self, partitions: usize) -> Self {
        EnumConfig {
            partitions: partitions.max(1),
            ..self
        }
    }
}

pub(crate) fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(
    v: &T,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}
