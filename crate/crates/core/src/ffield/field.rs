use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;

use super::fp_poly::{self, add_mod, mul_mod, sub_mod};
use super::prime::{factorize, is_prime};
use super::FieldError;

/// The finite field `F_{p^m}` realized as `F_p[x]/(modulus)`.
///
/// Cheap to clone; all clones share one immutable description.
#[derive(Clone)]
pub struct FieldSpec(Arc<FieldInner>);

struct FieldInner {
    p: u64,
    m: usize,
    modulus: Vec<u64>,
    canonical: bool,
    order: BigUint,
    order_u64: Option<u64>,
    basis_traces: Vec<u64>,
    generator: OnceLock<Option<Vec<u64>>>,
}

fn canonical_cache() -> &'static Mutex<HashMap<(u64, usize), FieldSpec>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), FieldSpec>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// First monic irreducible polynomial of degree `m` when candidates are
/// ordered by the integer `c_0 + c_1 p + ... + c_{m-1} p^(m-1)`, i.e.
/// lexicographically with the highest non-leading coefficient compared first.
fn canonical_modulus(p: u64, m: usize) -> Vec<u64> {
    if m == 1 {
        return vec![0, 1];
    }
    let mut coeffs = vec![0u64; m];
    loop {
        // c_0 = 0 is skipped outright: x divides the candidate.
        if coeffs[0] != 0 {
            let mut f = coeffs.clone();
            f.push(1);
            if fp_poly::is_irreducible(&f, p) {
                return f;
            }
        }
        // An irreducible polynomial always exists, so the odometer never wraps.
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c < p {
                break;
            }
            *c = 0;
        }
    }
}

/// Builds (or fetches) the canonical field `F_{p^m}`.
///
/// The modulus is the first monic irreducible polynomial in the order of
/// `canonical_modulus`, so equal arguments always produce identical fields.
pub fn make_field(p: u64, m: usize) -> Result<FieldSpec, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if m == 0 {
        return Err(FieldError::DegreeZero);
    }
    if let Some(f) = canonical_cache().lock().unwrap().get(&(p, m)) {
        return Ok(f.clone());
    }
    let field = FieldSpec::build(p, canonical_modulus(p, m), true);
    canonical_cache()
        .lock()
        .unwrap()
        .entry((p, m))
        .or_insert_with(|| field.clone());
    Ok(field)
}

impl FieldSpec {
    /// A field with an explicitly chosen modulus (monic, irreducible).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<FieldSpec, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let mut modulus: Vec<u64> = modulus.into_iter().map(|c| c % p).collect();
        fp_poly::trim(&mut modulus);
        let m = match fp_poly::degree(&modulus) {
            None | Some(0) => return Err(FieldError::DegreeZero),
            Some(d) => d,
        };
        if modulus[m] != 1 {
            return Err(FieldError::ModulusNotMonic);
        }
        if !fp_poly::is_irreducible(&modulus, p) {
            return Err(FieldError::ModulusReducible);
        }
        let canonical = make_field(p, m)?;
        if canonical.modulus() == modulus.as_slice() {
            return Ok(canonical);
        }
        Ok(FieldSpec::build(p, modulus, false))
    }

    fn build(p: u64, modulus: Vec<u64>, canonical: bool) -> FieldSpec {
        let m = modulus.len() - 1;
        let order = BigUint::from(p).pow(m as u32);
        let make = |basis_traces: Vec<u64>| {
            FieldSpec(Arc::new(FieldInner {
                p,
                m,
                modulus: modulus.clone(),
                canonical,
                order_u64: order.to_u64(),
                order: order.clone(),
                basis_traces,
                generator: OnceLock::new(),
            }))
        };
        // Tr(x^i) straight from the definition sum_j (x^i)^(p^j).
        let proto = make(vec![0; m]);
        let traces = (0..m)
            .map(|i| {
                let mut coords = vec![0u64; m];
                coords[i] = 1 % p;
                proto.elem(coords).trace_by_definition()
            })
            .collect();
        make(traces)
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    /// Extension degree `m` over the prime field.
    pub fn degree(&self) -> usize {
        self.0.m
    }

    /// Monic modulus, low-degree-first. Prime fields report `x`.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn is_canonical(&self) -> bool {
        self.0.canonical
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.m == 1
    }

    pub fn order(&self) -> &BigUint {
        &self.0.order
    }

    /// `q`, when it fits in a machine word.
    pub fn order_u64(&self) -> Option<u64> {
        self.0.order_u64
    }

    pub(crate) fn basis_traces(&self) -> &[u64] {
        &self.0.basis_traces
    }

    /// The canonical field `F_{q^k}`.
    pub fn extension(&self, k: usize) -> Result<FieldSpec, FieldError> {
        if k == 1 {
            return Ok(self.clone());
        }
        make_field(self.p(), self.degree() * k)
    }

    pub(crate) fn elem(&self, coords: Vec<u64>) -> FqElem {
        debug_assert_eq!(coords.len(), self.0.m);
        FqElem {
            field: self.clone(),
            coords,
        }
    }

    pub fn zero(&self) -> FqElem {
        self.elem(vec![0; self.0.m])
    }

    pub fn one(&self) -> FqElem {
        let mut c = vec![0; self.0.m];
        c[0] = 1 % self.0.p;
        self.elem(c)
    }

    pub fn from_i64(&self, v: i64) -> FqElem {
        let p = self.0.p as i128;
        let r = (v as i128).rem_euclid(p) as u64;
        let mut c = vec![0; self.0.m];
        c[0] = r;
        self.elem(c)
    }

    /// Element from coordinates in the modulus basis (missing entries are 0,
    /// entries are reduced mod p).
    pub fn from_coords(&self, coords: &[u64]) -> Result<FqElem, FieldError> {
        if coords.len() > self.0.m {
            return Err(FieldError::CoordinateCount {
                expected: self.0.m,
                found: coords.len(),
            });
        }
        let mut c: Vec<u64> = coords.iter().map(|&v| v % self.0.p).collect();
        c.resize(self.0.m, 0);
        Ok(self.elem(c))
    }

    /// Parses an element literal: a single integer (reduced mod p, may be
    /// negative) or coordinates `c0:c1:...` in the modulus basis.
    pub fn parse_element(&self, text: &str) -> Result<FqElem, FieldError> {
        let bad = || FieldError::BadElement(text.to_string());
        let text = text.trim();
        if !text.contains(':') {
            let v: i128 = text.parse().map_err(|_| bad())?;
            let r = v.rem_euclid(self.0.p as i128) as u64;
            return self.from_coords(&[r]);
        }
        let coords = text
            .split(':')
            .map(|c| c.trim().parse::<i128>().map_err(|_| bad()))
            .map(|c| c.map(|v| v.rem_euclid(self.0.p as i128) as u64))
            .collect::<Result<Vec<u64>, _>>()?;
        self.from_coords(&coords)
    }

    /// The element whose coordinates are the base-p digits of `index`.
    pub fn element_from_index(&self, mut index: u64) -> FqElem {
        let p = self.0.p;
        let c = (0..self.0.m)
            .map(|_| {
                let d = index % p;
                index /= p;
                d
            })
            .collect();
        self.elem(c)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FqElem {
        let p = self.0.p;
        let c = (0..self.0.m).map(|_| rng.random_range(0..p)).collect();
        self.elem(c)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FqElem {
        loop {
            let a = self.random(rng);
            if !a.is_zero() {
                return a;
            }
        }
    }

    /// Every element, in index order. Only sensible for small fields.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        let q = self.order_u64().expect("field too large to list");
        (0..q).map(move |i| self.element_from_index(i))
    }

    /// The primitive element of smallest index.
    pub fn generator(&self) -> Result<FqElem, FieldError> {
        let coords = self.0.generator.get_or_init(|| {
            let q = self.order_u64()?;
            let qm1 = q - 1;
            let factors = factorize(qm1);
            (1..q)
                .map(|i| self.element_from_index(i))
                .find(|g| factors.iter().all(|&(l, _)| !g.pow(qm1 / l).is_one()))
                .map(|g| g.coords)
        });
        match coords {
            Some(c) => Ok(self.elem(c.clone())),
            None => Err(FieldError::NotEnumerable(self.order().to_string())),
        }
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl Hash for FieldSpec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_prime_field() {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{} mod {:?}", self.0.p, self.0.m, self.0.modulus)
        }
    }
}

/// An element of a [`FieldSpec`], stored by coordinates in the power basis
/// of the modulus root.
#[derive(Clone)]
pub struct FqElem {
    field: FieldSpec,
    coords: Vec<u64>,
}

impl FqElem {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0] == 1 % self.field.p() && self.coords[1..].iter().all(|&c| c == 0)
    }

    /// Base-p packing of the coordinates (inverse of `element_from_index`).
    pub fn index(&self) -> u64 {
        let p = self.field.p();
        self.coords.iter().rev().fold(0u64, |acc, &c| acc * p + c)
    }

    /// The prime-field value, if this element lies in `F_p`.
    pub fn as_prime(&self) -> Option<u64> {
        self.coords[1..].iter().all(|&c| c == 0).then_some(self.coords[0])
    }

    fn from_poly(field: &FieldSpec, mut v: Vec<u64>) -> FqElem {
        v.resize(field.degree(), 0);
        field.elem(v)
    }

    pub fn inv(&self) -> Option<FqElem> {
        if self.is_zero() {
            return None;
        }
        let p = self.field.p();
        if self.field.is_prime_field() {
            return Some(self.field.elem(vec![fp_poly::inv_mod(self.coords[0], p)]));
        }
        let mut a = self.coords.clone();
        fp_poly::trim(&mut a);
        fp_poly::inv_rem(&a, self.field.modulus(), p).map(|v| FqElem::from_poly(&self.field, v))
    }

    pub fn pow(&self, e: u64) -> FqElem {
        self.pow_limbs(&[e])
    }

    pub fn pow_big(&self, e: &BigUint) -> FqElem {
        self.pow_limbs(&e.to_u64_digits())
    }

    fn pow_limbs(&self, limbs: &[u64]) -> FqElem {
        let mut acc = self.field.one();
        let mut started = false;
        for limb in limbs.iter().rev() {
            for bit in (0..64).rev() {
                if started {
                    acc = &acc * &acc;
                }
                if (limb >> bit) & 1 == 1 {
                    acc = &acc * self;
                    started = true;
                }
            }
        }
        acc
    }

    /// Signed exponent; negative powers go through the inverse.
    pub fn pow_i64(&self, e: i64) -> Option<FqElem> {
        if e >= 0 {
            Some(self.pow(e as u64))
        } else {
            self.inv().map(|i| i.pow(e.unsigned_abs()))
        }
    }

    /// The absolute Frobenius `a -> a^p`.
    pub fn frobenius(&self) -> FqElem {
        self.pow(self.field.p())
    }

    /// `sum_{i<m} a^(p^i)`, computed literally.
    pub fn trace_by_definition(&self) -> u64 {
        let mut acc = self.field.zero();
        let mut cur = self.clone();
        for _ in 0..self.field.degree() {
            acc = &acc + &cur;
            cur = cur.frobenius();
        }
        acc.as_prime().expect("trace escaped the prime field")
    }

    pub fn scale(&self, c: u64) -> FqElem {
        let p = self.field.p();
        let c = c % p;
        self.field
            .elem(self.coords.iter().map(|&a| mul_mod(a, c, p)).collect())
    }
}

impl PartialEq for FqElem {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coords == other.coords
    }
}

impl Eq for FqElem {}

impl Hash for FqElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.hash(state);
        self.coords.hash(state);
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_prime_field() {
            return write!(f, "{}", self.coords[0]);
        }
        // Same syntax as element literals: coordinates joined by ':'.
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(":"))
    }
}

fn check_same(a: &FqElem, b: &FqElem) {
    assert!(
        a.field == b.field,
        "field mismatch: {:?} vs {:?}",
        a.field,
        b.field
    );
}

impl<'a> Add<&'a FqElem> for &'a FqElem {
    type Output = FqElem;
    fn add(self, rhs: &FqElem) -> FqElem {
        check_same(self, rhs);
        let p = self.field.p();
        let c = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(&a, &b)| add_mod(a, b, p))
            .collect();
        self.field.elem(c)
    }
}

impl<'a> Sub<&'a FqElem> for &'a FqElem {
    type Output = FqElem;
    fn sub(self, rhs: &FqElem) -> FqElem {
        check_same(self, rhs);
        let p = self.field.p();
        let c = self
            .coords
            .iter()
            .zip(&rhs.coords)
            .map(|(&a, &b)| sub_mod(a, b, p))
            .collect();
        self.field.elem(c)
    }
}

impl<'a> Mul<&'a FqElem> for &'a FqElem {
    type Output = FqElem;
    fn mul(self, rhs: &FqElem) -> FqElem {
        check_same(self, rhs);
        let p = self.field.p();
        if self.field.is_prime_field() {
            return self.field.elem(vec![mul_mod(self.coords[0], rhs.coords[0], p)]);
        }
        let v = fp_poly::mul_rem(&self.coords, &rhs.coords, self.field.modulus(), p);
        FqElem::from_poly(&self.field, v)
    }
}

impl Neg for &FqElem {
    type Output = FqElem;
    fn neg(self) -> FqElem {
        let p = self.field.p();
        self.field
            .elem(self.coords.iter().map(|&a| sub_mod(0, a, p)).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<FqElem> for FqElem {
            type Output = FqElem;
            fn $m(self, rhs: FqElem) -> FqElem {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FqElem {
    type Output = FqElem;
    fn neg(self) -> FqElem {
        -&self
    }
}

/// `Tr_{F_q/F_p}(a)`, via the precomputed traces of the power basis.
pub fn trace_to_prime(a: &FqElem) -> u64 {
    let field = a.field();
    let p = field.p();
    a.coords()
        .iter()
        .zip(field.basis_traces())
        .fold(0u64, |acc, (&c, &t)| add_mod(acc, mul_mod(c, t, p), p))
}

/// `Tr_{F_q/F_p}(1) = m mod p`, handy for checks.
pub fn trace_of_one(field: &FieldSpec) -> u64 {
    (field.degree() as u64) % field.p()
}
