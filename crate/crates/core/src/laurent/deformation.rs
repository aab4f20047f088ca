use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{LaurentError, LaurentPoly};
use crate::ffield::{FieldSpec, FqElem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeformationKind {
    /// Every deforming exponent lies in the interior of the Newton polyhedron.
    Subdiagram,
    /// Every deforming exponent lies in the Newton polyhedron.
    NewtonPreserving,
}

impl fmt::Display for DeformationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeformationKind::Subdiagram => "subdiagram",
            DeformationKind::NewtonPreserving => "newton_preserving",
        })
    }
}

/// `F_x = f + x_1 g_1 + ... + x_m g_m` over a fixed base field.
#[derive(Debug, Clone, PartialEq)]
pub struct Deformation {
    field: FieldSpec,
    base: LaurentPoly<FqElem>,
    directions: Vec<LaurentPoly<FqElem>>,
    kind: DeformationKind,
}

impl Deformation {
    pub fn new(
        field: FieldSpec,
        base: LaurentPoly<FqElem>,
        directions: Vec<LaurentPoly<FqElem>>,
        kind: DeformationKind,
    ) -> Result<Deformation, LaurentError> {
        let n = base.nvars();
        for g in std::iter::once(&base).chain(&directions) {
            if g.nvars() != n {
                return Err(LaurentError::ArityMismatch {
                    expected: n,
                    found: g.nvars(),
                });
            }
            if g.terms().values().any(|c| c.field() != &field) {
                return Err(LaurentError::FieldMismatch);
            }
        }
        if !directions.is_empty() {
            let delta = base.newton_polyhedron()?;
            for w in directions.iter().flat_map(|g| g.terms().keys()) {
                let ok = match kind {
                    DeformationKind::Subdiagram => delta.contains_in_interior(w),
                    DeformationKind::NewtonPreserving => delta.contains(w),
                };
                if !ok {
                    return Err(LaurentError::KindViolation {
                        exponent: w.clone(),
                        kind,
                    });
                }
            }
        }
        Ok(Deformation {
            field,
            base,
            directions,
            kind,
        })
    }

    /// The undeformed polynomial `f` viewed as a deformation with no parameters.
    pub fn trivial(field: FieldSpec, base: LaurentPoly<FqElem>) -> Result<Deformation, LaurentError> {
        Deformation::new(field, base, Vec::new(), DeformationKind::NewtonPreserving)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn base(&self) -> &LaurentPoly<FqElem> {
        &self.base
    }

    pub fn directions(&self) -> &[LaurentPoly<FqElem>] {
        &self.directions
    }

    pub fn kind(&self) -> DeformationKind {
        self.kind
    }

    pub fn nvars(&self) -> usize {
        self.base.nvars()
    }

    pub fn parameter_count(&self) -> usize {
        self.directions.len()
    }

    /// `F_x`, over the field the parameters live in (the base field when
    /// there are none).
    pub fn specialize(&self, x: &[FqElem]) -> Result<LaurentPoly<FqElem>, LaurentError> {
        let target = x.first().map_or(&self.field, |a| a.field()).clone();
        self.specialize_over(&target, x)
    }

    /// `F_x` over an extension `target` of the base field; `x` must live in
    /// `target`.
    pub fn specialize_over(
        &self,
        target: &FieldSpec,
        x: &[FqElem],
    ) -> Result<LaurentPoly<FqElem>, LaurentError> {
        if x.len() != self.directions.len() {
            return Err(LaurentError::ArityMismatch {
                expected: self.directions.len(),
                found: x.len(),
            });
        }
        if x.iter().any(|a| a.field() != target) {
            return Err(LaurentError::FieldMismatch);
        }
        let mut out = self.base.embed_into(target)?;
        for (g, xk) in self.directions.iter().zip(x) {
            out = out.add(&g.embed_into(target)?.scale(xk));
        }
        Ok(out)
    }
}

/// An ordered list of distinct exponent vectors `w_1..w_N'`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialTable {
    n: usize,
    points: Vec<Vec<i64>>,
}

impl MonomialTable {
    pub fn new(n: usize, points: Vec<Vec<i64>>) -> Result<MonomialTable, LaurentError> {
        let mut seen = BTreeSet::new();
        for w in &points {
            if w.len() != n {
                return Err(LaurentError::ArityMismatch {
                    expected: n,
                    found: w.len(),
                });
            }
            if !seen.insert(w) {
                return Err(LaurentError::DuplicateTableEntry(w.clone()));
            }
        }
        Ok(MonomialTable { n, points })
    }

    /// The support of `f` (in exponent order) followed by the new exponents
    /// of `g_1, g_2, ...`.
    pub fn from_deformation(d: &Deformation) -> MonomialTable {
        let mut points = d.base.support();
        let mut seen: BTreeSet<Vec<i64>> = points.iter().cloned().collect();
        for g in &d.directions {
            for w in g.terms().keys() {
                if seen.insert(w.clone()) {
                    points.push(w.clone());
                }
            }
        }
        MonomialTable {
            n: d.nvars(),
            points,
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, w: &[i64]) -> Option<usize> {
        self.points.iter().position(|p| p == w)
    }

    /// `sum_j y_j t^(w_j)` as a Laurent polynomial.
    pub fn polynomial(&self, y: &[FqElem]) -> Result<LaurentPoly<FqElem>, LaurentError> {
        if y.len() != self.points.len() {
            return Err(LaurentError::ArityMismatch {
                expected: self.points.len(),
                found: y.len(),
            });
        }
        LaurentPoly::from_terms(self.n, self.points.iter().cloned().zip(y.iter().cloned()))
    }
}

/// `(tau y_1(x), ..., tau y_N'(x))` where `y_j(x)` is the coefficient of
/// `t^(w_j)` in `F_x`.
pub fn phi_map(
    d: &Deformation,
    table: &MonomialTable,
    tau: &FqElem,
    x: &[FqElem],
) -> Result<Vec<FqElem>, LaurentError> {
    if tau.is_zero() {
        return Err(LaurentError::ZeroTau);
    }
    if table.nvars() != d.nvars() {
        return Err(LaurentError::ArityMismatch {
            expected: d.nvars(),
            found: table.nvars(),
        });
    }
    for g in std::iter::once(&d.base).chain(&d.directions) {
        if let Some(w) = g.terms().keys().find(|w| table.index_of(w).is_none()) {
            return Err(LaurentError::TableMismatch(w.clone()));
        }
    }
    let target = tau.field();
    let f = d.specialize_over(target, x)?;
    Ok(table
        .points()
        .iter()
        .map(|w| match f.coefficient(w) {
            Some(c) => tau * c,
            None => target.zero(),
        })
        .collect())
}
