//! Polynomials and rational functions over `Q` in `t, x_1, .., x_m`.
//! Variable 0 is `t`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cyclotomic::fmt_rational;

/// A polynomial with exponent vectors of fixed length.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> MPoly {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> MPoly {
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> MPoly {
        MPoly::constant(nvars, BigRational::one())
    }

    pub fn var(nvars: usize, v: usize) -> MPoly {
        let mut e = vec![0; nvars];
        e[v] = 1;
        MPoly::monomial(e, BigRational::one())
    }

    pub fn monomial(exps: Vec<u32>, c: BigRational) -> MPoly {
        let nvars = exps.len();
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>) -> MPoly {
        let mut p = MPoly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            // Re-find the key to remove it; entries are few.
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .unwrap();
            self.terms.remove(&key);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    /// Largest exponent of variable `v`, or `None` for the zero polynomial.
    pub fn degree_in(&self, v: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[v]).max()
    }

    /// Smallest exponent of variable `v` (its order of vanishing).
    pub fn order_in(&self, v: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[v]).min()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut acc: BTreeMap<Vec<u32>, BigRational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(BigRational::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MPoly {
            nvars: self.nvars,
            terms: acc,
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        (0..e).fold(MPoly::one(self.nvars), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self, v: usize) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[v] > 0 {
                let mut e2 = e.clone();
                e2[v] -= 1;
                out.add_term(e2, c * BigRational::from_integer(BigInt::from(e[v])));
            }
        }
        out
    }

    /// Divides every exponent of `v` by lowering it by `k`; all exponents
    /// must be at least `k`.
    pub fn shift_down(&self, v: usize, k: u32) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2[v] -= k;
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// The terms with `v`-exponent zero, i.e. the value at `v = 0`.
    pub fn at_zero(&self, v: usize) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[v] == 0)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// `x_v -> -x_v`.
    pub fn negate_var(&self, v: usize) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), if e[v] % 2 == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// `x_v^d p(1/x_v)` with `d >= deg_v p`.
    pub fn reverse_in(&self, v: usize, d: u32) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2[v] = d - e[v];
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    fn leading(&self) -> Option<(&Vec<u32>, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// `self / d` when `d` divides `self` exactly (lexicographic division).
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        let (ld, lc) = d.leading()?;
        let mut rem = self.clone();
        let mut q = MPoly::zero(self.nvars);
        while let Some((lr, rc)) = rem.leading() {
            if lr.iter().zip(ld).any(|(a, b)| a < b) {
                return None;
            }
            let e: Vec<u32> = lr.iter().zip(ld).map(|(a, b)| a - b).collect();
            let t = MPoly::monomial(e, rc / lc);
            rem = rem.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    /// Componentwise minimum exponent over all terms.
    fn monomial_content(&self) -> Vec<u32> {
        let mut m: Option<Vec<u32>> = None;
        for e in self.terms.keys() {
            m = Some(match m {
                None => e.clone(),
                Some(m) => m.iter().zip(e).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        m.unwrap_or_else(|| vec![0; self.nvars])
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (e, c)| {
            let mut term = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    term *= x;
                }
            }
            acc + term
        })
    }

    pub(crate) fn fmt_with(&self, names: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{k}", names[i]) })
                .collect();
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Default variable names `t, x1, .., xm`.
pub fn var_names(nvars: usize) -> Vec<String> {
    std::iter::once("t".to_string())
        .chain((1..nvars).map(|i| format!("x{i}")))
        .collect()
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(&var_names(self.nvars), f)
    }
}

/// A quotient of polynomials. Common monomial factors are cancelled and the
/// denominator is divided out when it divides the numerator; no general gcd
/// is taken, so equality is tested by cross-multiplication.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Option<RatFunc> {
        if den.is_zero() || num.nvars() != den.nvars() {
            return None;
        }
        Some(RatFunc { num, den }.normalized())
    }

    pub fn from_poly(p: MPoly) -> RatFunc {
        let n = p.nvars();
        RatFunc {
            num: p,
            den: MPoly::one(n),
        }
    }

    pub fn zero(nvars: usize) -> RatFunc {
        RatFunc::from_poly(MPoly::zero(nvars))
    }

    pub fn one(nvars: usize) -> RatFunc {
        RatFunc::from_poly(MPoly::one(nvars))
    }

    pub fn constant(nvars: usize, c: BigRational) -> RatFunc {
        RatFunc::from_poly(MPoly::constant(nvars, c))
    }

    pub fn integer(nvars: usize, c: i64) -> RatFunc {
        RatFunc::constant(nvars, BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(nvars: usize, v: usize) -> RatFunc {
        RatFunc::from_poly(MPoly::var(nvars, v))
    }

    /// `t^(-k)`.
    pub fn inverse_t_power(nvars: usize, k: u32) -> RatFunc {
        let mut e = vec![0; nvars];
        e[0] = k;
        RatFunc {
            num: MPoly::one(nvars),
            den: MPoly::monomial(e, BigRational::one()),
        }
    }

    pub fn numerator(&self) -> &MPoly {
        &self.num
    }

    pub fn denominator(&self) -> &MPoly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    fn normalized(self) -> RatFunc {
        let n = self.num.nvars();
        if self.num.is_zero() {
            return RatFunc::zero(n);
        }
        let (mut num, mut den) = (self.num, self.den);
        let cn = num.monomial_content();
        let cd = den.monomial_content();
        for v in 0..n {
            let k = cn[v].min(cd[v]);
            if k > 0 {
                num = num.shift_down(v, k);
                den = den.shift_down(v, k);
            }
        }
        if den.terms.len() > 1 {
            if let Some(q) = num.div_exact(&den) {
                return RatFunc::from_poly(q);
            }
        }
        let lc = den.leading().unwrap().1.clone();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.den == other.den {
            return RatFunc {
                num: self.num.add(&other.num),
                den: self.den.clone(),
            }
            .normalized();
        }
        RatFunc {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
        .normalized()
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero(self.nvars());
        }
        RatFunc {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
        .normalized()
    }

    pub fn scale(&self, c: &BigRational) -> RatFunc {
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
        .normalized()
    }

    pub fn inv(&self) -> Option<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn derivative(&self, v: usize) -> RatFunc {
        if self.den.is_constant() {
            return RatFunc {
                num: self.num.derivative(v),
                den: self.den.clone(),
            }
            .normalized();
        }
        RatFunc {
            num: self
                .num
                .derivative(v)
                .mul(&self.den)
                .sub(&self.num.mul(&self.den.derivative(v))),
            den: self.den.mul(&self.den),
        }
        .normalized()
    }

    /// Whether the function involves variable `v`.
    pub fn depends_on(&self, v: usize) -> bool {
        // After normalization a v-free quotient can still carry v in both
        // parts, so test the derivative instead.
        !self.derivative(v).is_zero()
    }

    /// `max(0, ord_t(den) - ord_t(num))`; zero means regular along `t = 0`.
    pub fn pole_order_t(&self) -> u32 {
        if self.is_zero() {
            return 0;
        }
        let a = self.num.order_in(0).unwrap();
        let b = self.den.order_in(0).unwrap();
        b.saturating_sub(a)
    }

    pub fn is_regular_at_t0(&self) -> bool {
        self.pole_order_t() == 0
    }

    /// The restriction to `t = 0` of a function regular there.
    pub fn at_t0(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let a = self.num.order_in(0).unwrap();
        let b = self.den.order_in(0).unwrap();
        if b > a {
            return None;
        }
        if a > b {
            return Some(RatFunc::zero(self.nvars()));
        }
        let num = self.num.shift_down(0, a).at_zero(0);
        let den = self.den.shift_down(0, b).at_zero(0);
        RatFunc::new(num, den)
    }

    /// `t^k f`.
    pub fn mul_t_power(&self, k: u32) -> RatFunc {
        let mut e = vec![0; self.nvars()];
        e[0] = k;
        self.mul(&RatFunc::from_poly(MPoly::monomial(e, BigRational::one())))
    }

    /// `f(1/t, x)`; the result is again written in variable 0.
    pub fn invert_t(&self) -> RatFunc {
        let d = self
            .num
            .degree_in(0)
            .unwrap_or(0)
            .max(self.den.degree_in(0).unwrap_or(0));
        RatFunc {
            num: self.num.reverse_in(0, d),
            den: self.den.reverse_in(0, d),
        }
        .normalized()
    }

    /// `f(-t, x)`.
    pub fn negate_t(&self) -> RatFunc {
        RatFunc {
            num: self.num.negate_var(0),
            den: self.den.negate_var(0),
        }
        .normalized()
    }

    pub fn eval(&self, point: &[BigRational]) -> Option<BigRational> {
        let d = self.den.eval(point);
        (!d.is_zero()).then(|| self.num.eval(point) / d)
    }

    pub(crate) fn fmt_with(&self, names: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &MPoly| p.terms.len() > 1;
        if self.den.is_constant() {
            return self.num.fmt_with(names, f);
        }
        if wrap(&self.num) {
            write!(f, "(")?;
            self.num.fmt_with(names, f)?;
            write!(f, ")")?;
        } else {
            self.num.fmt_with(names, f)?;
        }
        write!(f, "/")?;
        if wrap(&self.den) {
            write!(f, "(")?;
            self.den.fmt_with(names, f)?;
            write!(f, ")")
        } else {
            self.den.fmt_with(names, f)
        }
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for RatFunc {}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(&var_names(self.nvars()), f)
    }
}
