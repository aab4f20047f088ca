use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::LaurentError;
use crate::ffield::{embed, FieldSpec, FqElem};
use crate::polytope::{newton_polyhedron, Polytope, PolytopeError};

/// Coefficient ring of a [`LaurentPoly`].
pub trait Coefficient: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// `k * self` for an integer `k`.
    fn scale_int(&self, k: i64) -> Self;
}

impl Coefficient for FqElem {
    fn is_zero(&self) -> bool {
        FqElem::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale_int(&self, k: i64) -> Self {
        let p = self.field().p() as i128;
        self.scale((k as i128).rem_euclid(p) as u64)
    }
}

impl Coefficient for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale_int(&self, k: i64) -> Self {
        self * BigRational::from_integer(BigInt::from(k))
    }
}

/// A Laurent polynomial `sum_w a_w t^w` in `n` variables; zero coefficients
/// are never stored.
#[derive(Clone, PartialEq, Debug)]
pub struct LaurentPoly<C> {
    n: usize,
    terms: BTreeMap<Vec<i64>, C>,
}

impl<C: Coefficient> LaurentPoly<C> {
    pub fn zero(n: usize) -> Self {
        LaurentPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// Collects `(exponent, coefficient)` pairs, merging repeated exponents.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self, LaurentError>
    where
        I: IntoIterator<Item = (Vec<i64>, C)>,
    {
        let mut out = LaurentPoly::zero(n);
        for (w, c) in terms {
            if w.len() != n {
                return Err(LaurentError::ArityMismatch {
                    expected: n,
                    found: w.len(),
                });
            }
            out.add_term(w, c);
        }
        Ok(out)
    }

    pub fn monomial(w: Vec<i64>, c: C) -> Self {
        let mut out = LaurentPoly::zero(w.len());
        out.add_term(w, c);
        out
    }

    fn add_term(&mut self, w: Vec<i64>, c: C) {
        let merged = match self.terms.remove(&w) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(w, merged);
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, C> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> Vec<Vec<i64>> {
        self.terms.keys().cloned().collect()
    }

    pub fn coefficient(&self, w: &[i64]) -> Option<&C> {
        self.terms.get(w)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "variable count mismatch");
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "variable count mismatch");
        let mut out = LaurentPoly::zero(self.n);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let w = w1.iter().zip(w2).map(|(a, b)| a + b).collect();
                out.add_term(w, c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = LaurentPoly::zero(self.n);
        for (w, a) in &self.terms {
            out.add_term(w.clone(), a.mul(c));
        }
        out
    }

    pub fn filter_terms(&self, mut keep: impl FnMut(&[i64]) -> bool) -> Self {
        LaurentPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// `t_i d/dt_i` (axis `i`, counted from 0): each term is multiplied by
    /// its exponent `w_i`.
    pub fn log_derivative(&self, axis: usize) -> Self {
        assert!(axis < self.n, "axis out of range");
        let mut out = LaurentPoly::zero(self.n);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.scale_int(w[axis]));
        }
        out
    }

    pub fn newton_polyhedron(&self) -> Result<Polytope, PolytopeError> {
        if self.terms.is_empty() {
            return Err(PolytopeError::EmptySupport);
        }
        newton_polyhedron(&self.support())
    }
}

impl LaurentPoly<FqElem> {
    /// Value at a torus point; every coordinate must be nonzero.
    pub fn evaluate(&self, t: &[FqElem]) -> Result<FqElem, LaurentError> {
        if t.len() != self.n {
            return Err(LaurentError::ArityMismatch {
                expected: self.n,
                found: t.len(),
            });
        }
        let field = match (t.first(), self.terms.values().next()) {
            (Some(x), _) => x.field().clone(),
            (None, Some(c)) => c.field().clone(),
            (None, None) => return Err(LaurentError::UnknownField),
        };
        if t.iter().any(FqElem::is_zero) {
            return Err(LaurentError::ZeroCoordinate);
        }
        let mut acc = field.zero();
        for (w, c) in &self.terms {
            if c.field() != &field {
                return Err(LaurentError::FieldMismatch);
            }
            let mut term = c.clone();
            for (ti, &e) in t.iter().zip(w) {
                term = &term * &ti.pow_i64(e).expect("nonzero coordinate");
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// The same polynomial with coefficients embedded into an extension.
    pub fn embed_into(&self, target: &FieldSpec) -> Result<Self, LaurentError> {
        let mut terms = BTreeMap::new();
        for (w, c) in &self.terms {
            terms.insert(w.clone(), embed(c, target)?);
        }
        Ok(LaurentPoly { n: self.n, terms })
    }
}

impl<C: Coefficient> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let mono: Vec<String> = w
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e != 0)
                    .map(|(i, &e)| {
                        let var = if self.n == 1 {
                            "t".to_string()
                        } else {
                            format!("t{}", i + 1)
                        };
                        if e == 1 {
                            var
                        } else {
                            format!("{var}^{e}")
                        }
                    })
                    .collect();
                if mono.is_empty() {
                    c.to_string()
                } else {
                    format!("{c}*{}", mono.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
