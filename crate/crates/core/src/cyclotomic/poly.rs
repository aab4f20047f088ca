use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::num::{fmt_rational, parse_rational};
use super::{CycloError, CycloNum};

/// Polynomial in `T` with coefficients in `Q(zeta_p)`, low degree first.
/// Trailing zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "CycloPolyJson", into = "CycloPolyJson")]
pub struct CycloPoly {
    p: u64,
    coeffs: Vec<CycloNum>,
}

impl CycloPoly {
    pub fn new(p: u64, mut coeffs: Vec<CycloNum>) -> CycloPoly {
        assert!(coeffs.iter().all(|c| c.p() == p), "coefficient field mismatch");
        while coeffs.last().is_some_and(CycloNum::is_zero) {
            coeffs.pop();
        }
        CycloPoly { p, coeffs }
    }

    pub fn from_integers(p: u64, coeffs: &[i64]) -> CycloPoly {
        CycloPoly::new(p, coeffs.iter().map(|&c| CycloNum::from_integer(p, c)).collect())
    }

    pub fn zero(p: u64) -> CycloPoly {
        CycloPoly { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> CycloPoly {
        CycloPoly::constant(CycloNum::one(p))
    }

    pub fn constant(c: CycloNum) -> CycloPoly {
        let p = c.p();
        CycloPoly::new(p, vec![c])
    }

    /// `c * T^d`.
    pub fn monomial(c: CycloNum, d: usize) -> CycloPoly {
        let p = c.p();
        let mut coeffs = vec![CycloNum::zero(p); d];
        coeffs.push(c);
        CycloPoly::new(p, coeffs)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[CycloNum] {
        &self.coeffs
    }

    /// Coefficient of `T^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> CycloNum {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| CycloNum::zero(self.p))
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&CycloNum> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(CycloNum::is_one)
    }

    pub fn scale(&self, c: &CycloNum) -> CycloPoly {
        CycloPoly::new(self.p, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Result<CycloPoly, CycloError> {
        let lead = self.leading().ok_or(CycloError::DivisionByZero)?;
        Ok(self.scale(&lead.inv().ok_or(CycloError::DivisionByZero)?))
    }

    pub fn divrem(&self, d: &CycloPoly) -> Result<(CycloPoly, CycloPoly), CycloError> {
        let dd = d.degree().ok_or(CycloError::DivisionByZero)?;
        let lead_inv = d.coeffs[dd].inv().ok_or(CycloError::DivisionByZero)?;
        let mut r = self.coeffs.clone();
        let mut q = vec![CycloNum::zero(self.p); r.len().saturating_sub(dd)];
        while r.len() > dd {
            let top = r.len() - 1;
            let c = &r[top] * &lead_inv;
            let shift = top - dd;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    r[shift + i] = &r[shift + i] - &(&c * dc);
                }
            }
            q[shift] = c;
            r.pop();
            while r.last().is_some_and(CycloNum::is_zero) {
                r.pop();
            }
        }
        Ok((CycloPoly::new(self.p, q), CycloPoly::new(self.p, r)))
    }

    /// Exact quotient, or `None` when the division leaves a remainder.
    pub fn div_exact(&self, d: &CycloPoly) -> Option<CycloPoly> {
        let (q, r) = self.divrem(d).ok()?;
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &CycloPoly) -> CycloPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic().expect("nonzero")
        }
    }

    pub fn derivative(&self) -> CycloPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&BigRational::from_integer(BigInt::from(i))))
            .collect();
        CycloPoly::new(self.p, coeffs)
    }

    pub fn eval(&self, x: &CycloNum) -> CycloNum {
        self.coeffs
            .iter()
            .rev()
            .fold(CycloNum::zero(self.p), |acc, c| &(&acc * x) + c)
    }

    /// Reduction modulo `T^n`.
    pub fn truncate(&self, n: usize) -> CycloPoly {
        CycloPoly::new(self.p, self.coeffs.iter().take(n).cloned().collect())
    }

    /// `T^n * P(1/T)`; requires `n >= deg P`.
    pub fn reversed(&self, n: usize) -> CycloPoly {
        assert!(self.coeffs.len() <= n + 1, "reversal degree below polynomial degree");
        let coeffs = (0..=n).map(|i| self.coeff(n - i)).collect();
        CycloPoly::new(self.p, coeffs)
    }

    pub fn conj_sigma(&self, a: i64) -> Result<CycloPoly, CycloError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.conj_sigma(a))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CycloPoly::new(self.p, coeffs))
    }

    pub fn embed_complex(&self, a: i64) -> Result<Vec<Complex64>, CycloError> {
        self.coeffs.iter().map(|c| c.embed_complex(a)).collect()
    }

    /// The constant `c` with `self = c * other`, if one exists.
    pub fn proportionality(&self, other: &CycloPoly) -> Option<CycloNum> {
        if self.degree() != other.degree() {
            return None;
        }
        let Some(lead) = other.leading() else {
            return Some(CycloNum::one(self.p));
        };
        let c = self.leading().unwrap() * &lead.inv()?;
        (other.scale(&c) == *self).then_some(c)
    }

    /// Yun's algorithm: pairs `(g_i, i)` with `P = lc * prod g_i^i`,
    /// each `g_i` monic, squarefree and pairwise coprime. Trivial factors
    /// are omitted.
    pub fn squarefree_decomposition(&self) -> Vec<(CycloPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic().expect("nonzero");
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0).expect("gcd divides");
        let mut c = df.div_exact(&a0).expect("gcd divides");
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            b = b.div_exact(&a).expect("gcd divides");
            c = d.div_exact(&a).expect("gcd divides");
            d = &c - &b.derivative();
            if a.degree().unwrap_or(0) > 0 {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }
}

impl Add for &CycloPoly {
    type Output = CycloPoly;
    fn add(self, o: &CycloPoly) -> CycloPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        CycloPoly::new(self.p, (0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }
}

impl Sub for &CycloPoly {
    type Output = CycloPoly;
    fn sub(self, o: &CycloPoly) -> CycloPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        CycloPoly::new(self.p, (0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }
}

impl Mul for &CycloPoly {
    type Output = CycloPoly;
    fn mul(self, o: &CycloPoly) -> CycloPoly {
        if self.is_zero() || o.is_zero() {
            return CycloPoly::zero(self.p);
        }
        let mut out = vec![CycloNum::zero(self.p); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        CycloPoly::new(self.p, out)
    }
}

impl Neg for &CycloPoly {
    type Output = CycloPoly;
    fn neg(self) -> CycloPoly {
        CycloPoly::new(self.p, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for CycloPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let var = match i {
                0 => String::new(),
                1 => "T".to_string(),
                _ => format!("T^{i}"),
            };
            terms.push(match (i, c.is_one()) {
                (0, _) => c.to_string(),
                (_, true) => var,
                _ => format!("{}·{var}", c.grouped()),
            });
        }
        write!(f, "{}", terms.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CycloPolyJson {
    p: String,
    coefficients: Vec<Vec<String>>,
}

impl TryFrom<CycloPolyJson> for CycloPoly {
    type Error = CycloError;
    fn try_from(j: CycloPolyJson) -> Result<CycloPoly, CycloError> {
        let p = j
            .p
            .trim()
            .parse::<u64>()
            .map_err(|_| CycloError::BadRational(j.p.clone()))?;
        let coeffs = j
            .coefficients
            .iter()
            .map(|coords| {
                let coords = coords
                    .iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<_>, _>>()?;
                CycloNum::from_coords(p, coords)
            })
            .collect::<Result<Vec<_>, _>>()?;
        if coeffs.last().is_some_and(CycloNum::is_zero) {
            return Err(CycloError::TrailingZero);
        }
        Ok(CycloPoly::new(p, coeffs))
    }
}

impl From<CycloPoly> for CycloPolyJson {
    fn from(poly: CycloPoly) -> CycloPolyJson {
        CycloPolyJson {
            p: poly.p.to_string(),
            coefficients: poly
                .coeffs
                .iter()
                .map(|c| c.coords().iter().map(fmt_rational).collect())
                .collect(),
        }
    }
}
