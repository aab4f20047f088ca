//! JSON forms of connections and tuples.
//!
//! An entry is a rational constant (`"3/2"`), a list of terms
//! (`[{"c": "3/2", "deg": {"t": 1, "x1": 2}}]`), or a quotient
//! `{"num": [...], "den": [...]}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::{fmt_rational, parse_rational};

use super::form::MatForm;
use super::fts::FtsTuple;
use super::matrix::RMat;
use super::mpoly::{var_names, MPoly, RatFunc};
use super::ConnError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub c: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub deg: BTreeMap<String, u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientJson {
    pub num: Vec<TermJson>,
    pub den: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryJson {
    Constant(String),
    Poly(Vec<TermJson>),
    Quotient(QuotientJson),
}

pub type MatrixJson = Vec<Vec<EntryJson>>;

/// `A = A_t dt + sum_i A_i dx_i` with `m` base coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionJson {
    pub m: usize,
    pub dt: MatrixJson,
    pub dx: Vec<MatrixJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleJson {
    pub m: usize,
    pub nabla: Vec<MatrixJson>,
    pub phi: Vec<MatrixJson>,
    pub r0: MatrixJson,
    pub rinf: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<MatrixJson>,
}

fn parse_err(path: &str, message: impl Into<String>) -> ConnError {
    ConnError::Parse {
        path: path.to_string(),
        message: message.into(),
    }
}

fn poly_from_json(terms: &[TermJson], nvars: usize, path: &str) -> Result<MPoly, ConnError> {
    let names = var_names(nvars);
    let mut out = Vec::with_capacity(terms.len());
    for (k, term) in terms.iter().enumerate() {
        let here = format!("{path}[{k}]");
        let c = parse_rational(&term.c).map_err(|e| parse_err(&format!("{here}.c"), e.to_string()))?;
        let mut e = vec![0u32; nvars];
        for (name, &power) in &term.deg {
            let v = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| parse_err(&format!("{here}.deg"), format!("unknown variable {name:?}")))?;
            e[v] = power;
        }
        out.push((e, c));
    }
    Ok(MPoly::from_terms(nvars, out))
}

fn entry_from_json(entry: &EntryJson, nvars: usize, path: &str) -> Result<RatFunc, ConnError> {
    match entry {
        EntryJson::Constant(s) => {
            let c = parse_rational(s).map_err(|e| parse_err(path, e.to_string()))?;
            Ok(RatFunc::constant(nvars, c))
        }
        EntryJson::Poly(terms) => Ok(RatFunc::from_poly(poly_from_json(terms, nvars, path)?)),
        EntryJson::Quotient(q) => {
            let num = poly_from_json(&q.num, nvars, &format!("{path}.num"))?;
            let den = poly_from_json(&q.den, nvars, &format!("{path}.den"))?;
            RatFunc::new(num, den).ok_or_else(|| parse_err(&format!("{path}.den"), "zero denominator"))
        }
    }
}

fn matrix_from_json(m: &MatrixJson, nvars: usize, path: &str) -> Result<RMat, ConnError> {
    let rows = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, e)| entry_from_json(e, nvars, &format!("{path}[{i}][{j}]")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    RMat::from_rows(nvars, rows).ok_or_else(|| parse_err(path, "matrix is not square"))
}

fn matrices_from_json(ms: &[MatrixJson], nvars: usize, path: &str) -> Result<Vec<RMat>, ConnError> {
    ms.iter()
        .enumerate()
        .map(|(i, m)| matrix_from_json(m, nvars, &format!("{path}[{i}]")))
        .collect()
}

fn poly_to_json(p: &MPoly) -> Vec<TermJson> {
    let names = var_names(p.nvars());
    p.terms()
        .iter()
        .map(|(e, c)| TermJson {
            c: fmt_rational(c),
            deg: e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(v, &k)| (names[v].clone(), k))
                .collect(),
        })
        .collect()
}

pub fn entry_to_json(f: &RatFunc) -> EntryJson {
    let den = f.denominator();
    if den.is_constant() {
        let num = f.numerator().scale(&den.constant_value().expect("constant").recip());
        if let Some(c) = num.constant_value() {
            return EntryJson::Constant(fmt_rational(&c));
        }
        return EntryJson::Poly(poly_to_json(&num));
    }
    EntryJson::Quotient(QuotientJson {
        num: poly_to_json(f.numerator()),
        den: poly_to_json(den),
    })
}

pub fn matrix_to_json(m: &RMat) -> MatrixJson {
    m.rows().iter().map(|r| r.iter().map(entry_to_json).collect()).collect()
}

impl ConnectionJson {
    pub fn to_form(&self) -> Result<MatForm, ConnError> {
        let n = self.m + 1;
        if self.dx.len() != self.m {
            return Err(parse_err("dx", format!("expected {} matrices, got {}", self.m, self.dx.len())));
        }
        let dt = matrix_from_json(&self.dt, n, "dt")?;
        let dx = matrices_from_json(&self.dx, n, "dx")?;
        MatForm::one_form(dt, dx)
    }

    pub fn from_form(a: &MatForm) -> ConnectionJson {
        ConnectionJson {
            m: a.base_dim(),
            dt: matrix_to_json(a.dt()),
            dx: (1..=a.base_dim()).map(|i| matrix_to_json(a.dx(i))).collect(),
        }
    }
}

impl TupleJson {
    pub fn to_tuple(&self) -> Result<FtsTuple, ConnError> {
        let n = self.m + 1;
        let g = self
            .g
            .as_ref()
            .map(|g| matrix_from_json(g, n, "g"))
            .transpose()?;
        FtsTuple::new(
            self.m,
            matrices_from_json(&self.nabla, n, "nabla")?,
            matrices_from_json(&self.phi, n, "phi")?,
            matrix_from_json(&self.r0, n, "r0")?,
            matrix_from_json(&self.rinf, n, "rinf")?,
            g,
        )
    }

    pub fn from_tuple(t: &FtsTuple) -> TupleJson {
        TupleJson {
            m: t.base_dim(),
            nabla: t.nabla().iter().map(matrix_to_json).collect(),
            phi: t.phi().iter().map(matrix_to_json).collect(),
            r0: matrix_to_json(t.r0()),
            rinf: matrix_to_json(t.rinf()),
            g: t.metric().map(matrix_to_json),
        }
    }
}
