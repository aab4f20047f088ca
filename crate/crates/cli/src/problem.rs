//! Problem files: a field, a Laurent polynomial, its deformations and
//! optional limits. Every number is a decimal string.

use std::fmt;
use std::marker::PhantomData;
use std::str::FromStr;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize};

use arith_lg_core::ffield::{make_field, FieldSpec, FqElem};
use arith_lg_core::laurent::{Deformation, DeformationKind, LaurentPoly, MonomialTable};

use crate::error::CliError;

/// An integer written as a JSON string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dec<T>(pub T);

impl<'de, T: FromStr> Deserialize<'de> for Dec<T>
where
    T::Err: fmt::Display,
{
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V<T>(PhantomData<T>);
        impl<T: FromStr> Visitor<'_> for V<T>
        where
            T::Err: fmt::Display,
        {
            type Value = Dec<T>;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer written as a decimal string")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<Dec<T>, E> {
                s.trim().parse().map(Dec).map_err(|e| E::custom(format!("{s:?}: {e}")))
            }
        }
        d.deserialize_str(V(PhantomData))
    }
}

impl<T: fmt::Display> Serialize for Dec<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FieldJson {
    pub p: Dec<u64>,
    /// Degree over the prime field; defaults to 1, or to the degree of
    /// `modulus` when that is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Dec<usize>>,
    /// Coefficients of a monic irreducible modulus, constant term first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<Dec<u64>>>,
}

/// `c * t^w`; `c` is an element literal such as `"3"` or `"1:2"`.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub c: String,
    pub w: Vec<Dec<i64>>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub field: FieldJson,
    pub n: Dec<usize>,
    pub f: Vec<TermJson>,
    #[serde(default)]
    pub deformations: Vec<Vec<TermJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<DeformationKind>,
    /// Exponents of the GKZ monomial table; defaults to the union of the
    /// supports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<Dec<i64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<Dec<u64>>,
    /// Relative tolerance for archimedean checks, as a decimal string.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<Dec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_rank: Option<Dec<usize>>,
}

/// A parsed and validated problem.
#[derive(Debug, Clone)]
pub struct Problem {
    pub field: FieldSpec,
    pub deformation: Deformation,
    pub table: MonomialTable,
    pub budget: Option<u64>,
    pub tolerance: Option<f64>,
    pub max_rank: Option<usize>,
}

fn build_field(f: &FieldJson) -> Result<FieldSpec, CliError> {
    let p = f.p.0;
    match &f.modulus {
        Some(modulus) => {
            let coeffs: Vec<u64> = modulus.iter().map(|c| c.0).collect();
            let field = FieldSpec::with_modulus(p, coeffs).map_err(|e| CliError::input("field.modulus", e))?;
            if let Some(m) = f.m {
                if m.0 != field.degree() {
                    return Err(CliError::input(
                        "field.m",
                        format!("modulus has degree {}, not {}", field.degree(), m.0),
                    ));
                }
            }
            Ok(field)
        }
        None => make_field(p, f.m.map_or(1, |m| m.0)).map_err(|e| CliError::input("field", e)),
    }
}

fn build_poly(
    field: &FieldSpec,
    n: usize,
    terms: &[TermJson],
    path: &str,
) -> Result<LaurentPoly<FqElem>, CliError> {
    let mut out = Vec::with_capacity(terms.len());
    for (i, t) in terms.iter().enumerate() {
        let c = field
            .parse_element(&t.c)
            .map_err(|e| CliError::input(format!("{path}[{i}].c"), e))?;
        if t.w.len() != n {
            return Err(CliError::input(
                format!("{path}[{i}].w"),
                format!("expected {n} exponents, found {}", t.w.len()),
            ));
        }
        out.push((t.w.iter().map(|e| e.0).collect(), c));
    }
    LaurentPoly::from_terms(n, out).map_err(|e| CliError::input(path, e))
}

impl ProblemFile {
    pub fn build(&self) -> Result<Problem, CliError> {
        let field = build_field(&self.field)?;
        let n = self.n.0;
        if n == 0 {
            return Err(CliError::input("n", "need at least one variable"));
        }
        let base = build_poly(&field, n, &self.f, "f")?;
        if base.is_zero() {
            return Err(CliError::input("f", "polynomial is zero"));
        }
        let directions = self
            .deformations
            .iter()
            .enumerate()
            .map(|(i, g)| build_poly(&field, n, g, &format!("deformations[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let kind = self.kind.unwrap_or(DeformationKind::NewtonPreserving);
        let deformation = Deformation::new(field.clone(), base, directions, kind)
            .map_err(|e| CliError::input("deformations", e))?;
        let table = match &self.table {
            Some(points) => MonomialTable::new(
                n,
                points.iter().map(|w| w.iter().map(|e| e.0).collect()).collect(),
            )
            .map_err(|e| CliError::input("table", e))?,
            None => MonomialTable::from_deformation(&deformation),
        };
        if let Some(t) = self.tolerance {
            if !(t.0 > 0.0 && t.0.is_finite()) {
                return Err(CliError::input("tolerance", "must be a positive number"));
            }
        }
        Ok(Problem {
            field,
            deformation,
            table,
            budget: self.budget.map(|b| b.0),
            tolerance: self.tolerance.map(|t| t.0),
            max_rank: self.max_rank.map(|r| r.0),
        })
    }
}

/// Deserializes `text` as `T`, reporting the JSON path of the first error.
pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::input(if path == "." { "$".to_string() } else { path }, e.into_inner())
    })
}

pub fn parse_problem(text: &str) -> Result<Problem, CliError> {
    parse_json::<ProblemFile>(text)?.build()
}

/// Parses a comma-separated list of element literals in `field`.
pub fn parse_elements(field: &FieldSpec, text: &str, what: &str) -> Result<Vec<FqElem>, CliError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .enumerate()
        .map(|(i, s)| {
            field
                .parse_element(s)
                .map_err(|e| CliError::input(format!("--{what}[{i}]"), e))
        })
        .collect()
}
