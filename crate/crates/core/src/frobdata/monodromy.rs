use std::collections::BTreeMap;

use serde::Serialize;

use super::qmat::{QMatrix, Subspace};
use super::FrobError;

/// An increasing filtration `M_k` of `Q^d`, stored for every `k` from the
/// last zero step to the first full one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Filtration {
    pub dim: usize,
    pub levels: BTreeMap<i64, Subspace>,
}

impl Filtration {
    /// `M_k`, extended by `0` below and the whole space above the stored range.
    pub fn level(&self, k: i64) -> Subspace {
        let (&lo, _) = self.levels.first_key_value().expect("nonempty");
        let (&hi, _) = self.levels.last_key_value().expect("nonempty");
        if k < lo {
            Subspace::zero(self.dim)
        } else if k > hi {
            Subspace::full(self.dim)
        } else {
            self.levels[&k].clone()
        }
    }

    /// `dim M_k / M_{k-1}` for every `k` with a nonzero graded piece.
    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for (&k, m) in &self.levels {
            let below = self.level(k - 1).dim();
            if m.dim() > below {
                out.insert(k, m.dim() - below);
            }
        }
        out
    }

    /// Whether the filtration is increasing, exhaustive, satisfies
    /// `N M_k ⊆ M_{k-2}`, and `N^k` induces `gr_k ≅ gr_{-k}` for `k >= 1`.
    pub fn is_monodromy_filtration_of(&self, n: &QMatrix) -> bool {
        let (&lo, _) = self.levels.first_key_value().expect("nonempty");
        let (&hi, _) = self.levels.last_key_value().expect("nonempty");
        for k in lo..=hi + 1 {
            if !self.level(k).contains(&self.level(k - 1)) {
                return false;
            }
            if !self.level(k - 2).contains(&n.image_of(&self.level(k))) {
                return false;
            }
        }
        if self.level(hi).dim() != self.dim || self.level(lo - 1).dim() != 0 {
            return false;
        }
        let span = lo.unsigned_abs().max(hi.unsigned_abs()) as i64;
        for k in 1..=span {
            let nk = n.pow(k as usize);
            let gr_k = self.level(k).dim() - self.level(k - 1).dim();
            let gr_minus = self.level(-k).dim() - self.level(-k - 1).dim();
            let low = self.level(-k - 1);
            let image = nk.image_of(&self.level(k)).sum(&low);
            if gr_k != gr_minus || image.dim() - low.dim() != gr_k {
                return false;
            }
        }
        true
    }
}

/// The monodromy filtration of a nilpotent `N`:
/// `M_k = sum_{j >= max(0, -k)} N^j (ker N^(k + 2j + 1))`.
/// The result is checked against the defining properties before returning.
pub fn monodromy_filtration(n: &QMatrix) -> Result<Filtration, FrobError> {
    if !n.is_square() {
        return Err(FrobError::NotSquare);
    }
    let d = n.rows();
    if !n.pow(d).is_zero() {
        return Err(FrobError::NotNilpotent);
    }
    let powers: Vec<QMatrix> = (0..=2 * d + 1).map(|j| n.pow(j)).collect();
    let kernels: Vec<Subspace> = powers.iter().map(QMatrix::kernel).collect();
    let top = d as i64;
    let mut levels = BTreeMap::new();
    for k in -top..=top {
        let mut m = Subspace::zero(d);
        let j0 = (-k).max(0) as usize;
        for j in j0..=d {
            let e = k + 2 * j as i64 + 1;
            if e <= 0 {
                continue;
            }
            let e = (e as usize).min(d);
            m = m.sum(&powers[j].image_of(&kernels[e]));
        }
        levels.insert(k, m);
    }
    // Trim to the stretch where the filtration actually moves.
    let lo = levels.iter().find(|(_, m)| m.dim() > 0).map_or(0, |(&k, _)| k);
    let hi = levels.iter().find(|(_, m)| m.dim() == d).map_or(0, |(&k, _)| k);
    let (lo, hi) = (lo.min(hi), hi.max(lo));
    levels.retain(|&k, _| k >= lo && k <= hi);
    let filtration = Filtration { dim: d, levels };
    assert!(
        filtration.is_monodromy_filtration_of(n),
        "convolution formula produced an invalid filtration"
    );
    Ok(filtration)
}
