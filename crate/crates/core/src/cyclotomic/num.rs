use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::CycloError;
use crate::ffield::is_prime;

/// An element `sum_{i < p-1} c_i zeta^i` of `Q(zeta_p)`.
///
/// The basis `1, zeta, ..., zeta^(p-2)` makes the representation unique, so
/// equality is coordinate-wise.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "CycloNumJson", into = "CycloNumJson")]
pub struct CycloNum {
    p: u64,
    coords: Vec<BigRational>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl CycloNum {
    pub fn zero(p: u64) -> CycloNum {
        debug_assert!(p >= 2);
        CycloNum {
            p,
            coords: vec![BigRational::zero(); (p - 1) as usize],
        }
    }

    pub fn one(p: u64) -> CycloNum {
        CycloNum::from_integer(p, 1)
    }

    pub fn from_integer(p: u64, n: i64) -> CycloNum {
        CycloNum::from_rational(p, rat(n))
    }

    pub fn from_rational(p: u64, r: BigRational) -> CycloNum {
        let mut z = CycloNum::zero(p);
        z.coords[0] = r;
        z
    }

    /// `zeta^e` for any integer exponent.
    pub fn zeta_pow(p: u64, e: i64) -> CycloNum {
        let mut w = vec![BigRational::zero(); p as usize];
        w[e.rem_euclid(p as i64) as usize] = BigRational::one();
        CycloNum::reduce(p, w)
    }

    /// `sum_r weights[r] zeta^r` for `r < p` (a histogram of exponents).
    pub fn from_exponent_weights<T: Clone + Into<BigInt>>(p: u64, weights: &[T]) -> CycloNum {
        assert!(weights.len() <= p as usize, "more weights than residues");
        let mut w = vec![BigRational::zero(); p as usize];
        for (slot, x) in w.iter_mut().zip(weights) {
            *slot = BigRational::from_integer(x.clone().into());
        }
        CycloNum::reduce(p, w)
    }

    /// Validating constructor from the `p - 1` basis coordinates.
    pub fn from_coords(p: u64, coords: Vec<BigRational>) -> Result<CycloNum, CycloError> {
        if !is_prime(p) {
            return Err(CycloError::NotPrime(p));
        }
        if coords.len() != (p - 1) as usize {
            return Err(CycloError::CoordinateCount {
                expected: (p - 1) as usize,
                found: coords.len(),
            });
        }
        Ok(CycloNum { p, coords })
    }

    /// Folds a length-`p` vector over `zeta^0..zeta^(p-1)` into the basis,
    /// using `zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2))`.
    fn reduce(p: u64, mut w: Vec<BigRational>) -> CycloNum {
        let top = w.pop().expect("length p vector");
        if !top.is_zero() {
            for c in w.iter_mut() {
                *c -= &top;
            }
        }
        CycloNum { p, coords: w }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    /// The value as a rational number, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coords[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| &self.coords[0])
    }

    fn check_prime(&self, other: &CycloNum) {
        assert_eq!(self.p, other.p, "operands live in different cyclotomic fields");
    }

    pub fn scale(&self, r: &BigRational) -> CycloNum {
        CycloNum {
            p: self.p,
            coords: self.coords.iter().map(|c| c * r).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> CycloNum {
        let mut base = self.clone();
        let mut acc = CycloNum::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The Galois automorphism `zeta -> zeta^a`.
    pub fn conj_sigma(&self, a: i64) -> Result<CycloNum, CycloError> {
        let a = unit_index(a, self.p)?;
        let p = self.p as usize;
        let mut w = vec![BigRational::zero(); p];
        for (i, c) in self.coords.iter().enumerate() {
            if !c.is_zero() {
                w[(i * a as usize) % p] = c.clone();
            }
        }
        Ok(CycloNum::reduce(self.p, w))
    }

    /// Image under `zeta -> exp(2 pi i a / p)`.
    pub fn embed_complex(&self, a: i64) -> Result<Complex64, CycloError> {
        let a = unit_index(a, self.p)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = (i as u128 * a as u128 % self.p as u128) as f64;
            let angle = std::f64::consts::TAU * k / self.p as f64;
            acc += Complex64::from_polar(rational_to_f64(c), angle);
        }
        Ok(acc)
    }

    /// Field norm to `Q`: the product of all conjugates.
    pub fn norm(&self) -> BigRational {
        let mut acc = self.clone();
        for a in 2..self.p as i64 {
            acc = &acc * &self.conj_sigma(a).unwrap();
        }
        acc.coords[0].clone()
    }

    pub fn inv(&self) -> Option<CycloNum> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(CycloNum::from_rational(self.p, r.recip()));
        }
        let mut others = CycloNum::one(self.p);
        for a in 2..self.p as i64 {
            others = &others * &self.conj_sigma(a).unwrap();
        }
        let norm = (self * &others).coords[0].clone();
        Some(others.scale(&norm.recip()))
    }

    /// Number of nonzero coordinates.
    fn term_count(&self) -> usize {
        self.coords.iter().filter(|c| !c.is_zero()).count()
    }

    /// Display form, parenthesised when it has more than one term.
    pub(crate) fn grouped(&self) -> String {
        if self.term_count() > 1 {
            format!("({self})")
        } else {
            self.to_string()
        }
    }
}

pub(crate) fn unit_index(a: i64, p: u64) -> Result<u64, CycloError> {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        Err(CycloError::BadIndex { a, p })
    } else {
        Ok(r)
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl Add for &CycloNum {
    type Output = CycloNum;
    fn add(self, o: &CycloNum) -> CycloNum {
        self.check_prime(o);
        CycloNum {
            p: self.p,
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CycloNum {
    type Output = CycloNum;
    fn sub(self, o: &CycloNum) -> CycloNum {
        self.check_prime(o);
        CycloNum {
            p: self.p,
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &CycloNum {
    type Output = CycloNum;
    fn mul(self, o: &CycloNum) -> CycloNum {
        self.check_prime(o);
        if let Some(r) = self.as_rational() {
            return o.scale(r);
        }
        if let Some(r) = o.as_rational() {
            return self.scale(r);
        }
        let p = self.p as usize;
        let mut w = vec![BigRational::zero(); p];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coords.iter().enumerate() {
                if !b.is_zero() {
                    w[(i + j) % p] += a * b;
                }
            }
        }
        CycloNum::reduce(self.p, w)
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum {
            p: self.p,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for CycloNum {
            type Output = CycloNum;
            fn $f(self, o: CycloNum) -> CycloNum { (&self).$f(&o) }
        }
        impl $tr<&CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $f(self, o: &CycloNum) -> CycloNum { (&self).$f(o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let power = match i {
                0 => String::new(),
                1 => "ζ".to_string(),
                _ => format!("ζ^{i}"),
            };
            if i == 0 {
                write!(f, "{}", fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "{power}")?;
            } else {
                write!(f, "{}{power}", fmt_rational(&mag))?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational, CycloError> {
    let bad = || CycloError::BadRational(s.to_string());
    let r = BigRational::from_str(s.trim()).map_err(|_| bad())?;
    Ok(r)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CycloNumJson {
    p: String,
    coords: Vec<String>,
}

impl TryFrom<CycloNumJson> for CycloNum {
    type Error = CycloError;
    fn try_from(j: CycloNumJson) -> Result<CycloNum, CycloError> {
        let p = j
            .p
            .trim()
            .parse::<u64>()
            .map_err(|_| CycloError::BadRational(j.p.clone()))?;
        let coords = j
            .coords
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()?;
        CycloNum::from_coords(p, coords)
    }
}

impl From<CycloNum> for CycloNumJson {
    fn from(z: CycloNum) -> CycloNumJson {
        CycloNumJson {
            p: z.p.to_string(),
            coords: z.coords.iter().map(fmt_rational).collect(),
        }
    }
}
