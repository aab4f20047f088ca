//! Frobenius type structures `(▽, R_0, R_∞, Φ)` with an optional metric,
//! and the connection they assemble to on `P^1 x X`.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use super::form::{curvature, pull_back_negate_t, MatForm};
use super::matrix::RMat;
use super::mpoly::{MPoly, RatFunc};
use super::ConnError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FtsTuple {
    size: usize,
    m: usize,
    nabla: Vec<RMat>,
    phi: Vec<RMat>,
    r0: RMat,
    rinf: RMat,
    g: Option<RMat>,
}

impl FtsTuple {
    /// `nabla` and `phi` hold the `dx_i` coefficients. Every entry must be
    /// free of `t`; a metric must be symmetric with nonzero determinant.
    pub fn new(
        m: usize,
        nabla: Vec<RMat>,
        phi: Vec<RMat>,
        r0: RMat,
        rinf: RMat,
        g: Option<RMat>,
    ) -> Result<FtsTuple, ConnError> {
        let size = r0.size();
        let n = m + 1;
        if nabla.len() != m || phi.len() != m {
            return Err(ConnError::Shape(format!(
                "expected {m} components for nabla and phi, got {} and {}",
                nabla.len(),
                phi.len()
            )));
        }
        let all = nabla.iter().chain(&phi).chain([&r0, &rinf]).chain(g.as_ref());
        for mat in all {
            if mat.size() != size || mat.nvars() != n {
                return Err(ConnError::Shape("matrices differ in size".to_string()));
            }
            if !mat.is_t_free() {
                return Err(ConnError::TDependent);
            }
        }
        if let Some(g) = &g {
            if !g.is_symmetric() {
                return Err(ConnError::NotSymmetric);
            }
            if g.determinant().is_zero() {
                return Err(ConnError::SingularMetric);
            }
        }
        Ok(FtsTuple {
            size,
            m,
            nabla,
            phi,
            r0,
            rinf,
            g,
        })
    }

    /// All components zero, no metric.
    pub fn zero(size: usize, m: usize) -> FtsTuple {
        let z = RMat::zero(size, m + 1);
        FtsTuple {
            size,
            m,
            nabla: vec![z.clone(); m],
            phi: vec![z.clone(); m],
            r0: z.clone(),
            rinf: z,
            g: None,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn base_dim(&self) -> usize {
        self.m
    }

    pub fn nvars(&self) -> usize {
        self.m + 1
    }

    pub fn nabla(&self) -> &[RMat] {
        &self.nabla
    }

    pub fn phi(&self) -> &[RMat] {
        &self.phi
    }

    pub fn r0(&self) -> &RMat {
        &self.r0
    }

    pub fn rinf(&self) -> &RMat {
        &self.rinf
    }

    pub fn metric(&self) -> Option<&RMat> {
        self.g.as_ref()
    }

    pub fn with_metric(self, g: RMat) -> Result<FtsTuple, ConnError> {
        FtsTuple::new(self.m, self.nabla, self.phi, self.r0, self.rinf, Some(g))
    }

    /// Change of frame by an invertible `G(x)`: `A -> G^-1 dG + G^-1 A G`,
    /// endomorphisms by conjugation, `g -> G^T g G`.
    pub fn gauge(&self, frame: &RMat) -> Result<FtsTuple, ConnError> {
        let inv = frame.inverse().ok_or(ConnError::SingularMetric)?;
        let conj = |a: &RMat| inv.mul(a).mul(frame);
        let nabla = (0..self.m)
            .map(|i| inv.mul(&frame.derivative(i + 1)).add(&conj(&self.nabla[i])))
            .collect();
        let phi = self.phi.iter().map(conj).collect();
        let g = self
            .g
            .as_ref()
            .map(|g| frame.transpose().mul(g).mul(frame));
        FtsTuple::new(self.m, nabla, phi, conj(&self.r0), conj(&self.rinf), g)
    }
}

/// `A + Φ/t + (R_0/t - R_∞) dt/t` on `(t, x)`.
pub fn assemble_nabla(t: &FtsTuple) -> MatForm {
    let n = t.nvars();
    let inv_t = RatFunc::inverse_t_power(n, 1);
    let inv_t2 = RatFunc::inverse_t_power(n, 2);
    let dt = t.r0.scale(&inv_t2).sub(&t.rinf.scale(&inv_t));
    let dx = (0..t.m)
        .map(|i| t.nabla[i].add(&t.phi[i].scale(&inv_t)))
        .collect();
    MatForm::one_form(dt, dx).expect("tuple components are consistent")
}

/// One of the six conditions, identified by its formula.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FtsReport {
    pub conditions: Vec<Condition>,
    /// Whether the curvature of the assembled connection vanishes.
    pub flat: bool,
}

impl FtsReport {
    pub fn all_conditions(&self) -> bool {
        self.conditions.iter().all(|c| c.holds)
    }
}

pub const CONDITION_NAMES: [&str; 6] = [
    "▽▽ = 0",
    "▽(R_∞) = 0",
    "Φ∧Φ = 0",
    "[Φ, R_0] = 0",
    "▽(Φ) = 0",
    "▽(R_0) + Φ = [Φ, R_∞]",
];

/// `(▽R)_i = d_i R + [A_i, R]`.
fn covariant(t: &FtsTuple, r: &RMat, i: usize) -> RMat {
    r.derivative(i + 1).add(&t.nabla[i].bracket(r))
}

fn pairs(m: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..m).flat_map(move |i| (i + 1..m).map(move |j| (i, j)))
}

/// The six conditions checked one by one on the tuple, next to the
/// curvature of the assembled connection. The two verdicts must agree.
pub fn verify_fts(t: &FtsTuple) -> Result<FtsReport, ConnError> {
    let m = t.m;
    let (a, phi) = (&t.nabla, &t.phi);
    let holds = [
        pairs(m).all(|(i, j)| {
            a[j].derivative(i + 1)
                .sub(&a[i].derivative(j + 1))
                .add(&a[i].bracket(&a[j]))
                .is_zero()
        }),
        (0..m).all(|i| covariant(t, &t.rinf, i).is_zero()),
        pairs(m).all(|(i, j)| phi[i].bracket(&phi[j]).is_zero()),
        (0..m).all(|i| phi[i].bracket(&t.r0).is_zero()),
        pairs(m).all(|(i, j)| {
            phi[j].derivative(i + 1)
                .sub(&phi[i].derivative(j + 1))
                .add(&a[i].bracket(&phi[j]))
                .add(&phi[i].bracket(&a[j]))
                .is_zero()
        }),
        (0..m).all(|i| covariant(t, &t.r0, i).add(&phi[i]) == phi[i].bracket(&t.rinf)),
    ];
    let report = FtsReport {
        conditions: CONDITION_NAMES
            .iter()
            .zip(holds)
            .map(|(&name, holds)| Condition { name, holds })
            .collect(),
        flat: curvature(&assemble_nabla(t)).is_zero(),
    };
    if report.all_conditions() != report.flat {
        return Err(ConnError::Inconsistent(format!(
            "six conditions give {}, curvature gives {}",
            report.all_conditions(),
            report.flat
        )));
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MetricReport {
    /// `Φ_i^T g = g Φ_i` per `x_i`.
    pub phi_self_adjoint: Vec<bool>,
    pub r0_self_adjoint: bool,
    /// `R_∞^T g = -g R_∞`.
    pub rinf_skew_adjoint: bool,
    /// `d_i g = A_i^T g + g A_i` per `x_i`.
    pub g_flat: Vec<bool>,
    /// The pairing between the fibres at `t` and `-t` is flat for the
    /// assembled connection.
    pub pairing_flat: bool,
}

impl MetricReport {
    pub fn identities_hold(&self) -> bool {
        self.phi_self_adjoint.iter().chain(&self.g_flat).all(|&b| b)
            && self.r0_self_adjoint
            && self.rinf_skew_adjoint
    }
}

/// Adjointness of `Φ, R_0, R_∞` and flatness of `g`, plus flatness of the
/// pairing `E_t x E_{-t} -> O` induced by `g` on the assembled connection.
pub fn verify_metric(t: &FtsTuple) -> Result<MetricReport, ConnError> {
    let g = t.g.as_ref().ok_or(ConnError::NoMetric)?;
    let self_adj = |a: &RMat| a.transpose().mul(g) == g.mul(a);
    let report = MetricReport {
        phi_self_adjoint: t.phi.iter().map(self_adj).collect(),
        r0_self_adjoint: self_adj(&t.r0),
        rinf_skew_adjoint: t.rinf.transpose().mul(g) == g.mul(&t.rinf).neg(),
        g_flat: (0..t.m)
            .map(|i| {
                let a = &t.nabla[i];
                g.derivative(i + 1) == a.transpose().mul(g).add(&g.mul(a))
            })
            .collect(),
        pairing_flat: pairing_flat(g, &assemble_nabla(t)),
    };
    if report.identities_hold() != report.pairing_flat {
        return Err(ConnError::Inconsistent(format!(
            "adjointness identities give {}, pairing flatness gives {}",
            report.identities_hold(),
            report.pairing_flat
        )));
    }
    Ok(report)
}

/// `dg = A^T g + g (j^*A)` in every coordinate direction.
fn pairing_flat(g: &RMat, a: &MatForm) -> bool {
    let pulled = pull_back_negate_t(a);
    (0..a.nvars()).all(|k| {
        let lhs = g.derivative(k);
        let rhs = a
            .component(k)
            .transpose()
            .mul(g)
            .add(&g.mul(pulled.component(k)));
        lhs == rhs
    })
}

/// Shape and sparsity of random tuples.
#[derive(Clone, Copy, Debug)]
pub struct RandomTupleSpec {
    pub max_size: usize,
    pub max_base_dim: usize,
    pub max_degree: u32,
}

impl Default for RandomTupleSpec {
    fn default() -> Self {
        RandomTupleSpec {
            max_size: 3,
            max_base_dim: 2,
            max_degree: 2,
        }
    }
}

fn small(rng: &mut impl Rng) -> BigRational {
    BigRational::from_integer(BigInt::from(rng.random_range(-2i64..=2)))
}

/// A polynomial in `x` with up to three terms of degree at most `deg`.
fn random_poly(rng: &mut impl Rng, m: usize, deg: u32) -> RatFunc {
    let n = m + 1;
    let terms = (0..rng.random_range(1..=3)).map(|_| {
        let mut e = vec![0u32; n];
        let mut left = rng.random_range(0..=deg);
        for v in 1..n {
            let k = rng.random_range(0..=left);
            e[v] = k;
            left -= k;
        }
        (e, small(rng))
    });
    RatFunc::from_poly(MPoly::from_terms(n, terms))
}

fn random_matrix(rng: &mut impl Rng, r: usize, m: usize, deg: u32, density: f64) -> RMat {
    let mut a = RMat::zero(r, m + 1);
    for i in 0..r {
        for j in 0..r {
            if rng.random_bool(density) {
                a.set(i, j, random_poly(rng, m, deg));
            }
        }
    }
    a
}

fn constant(n: usize, c: i64) -> RatFunc {
    RatFunc::integer(n, c)
}

/// A random tuple, flat or not. Starts from a flat tuple with constant data
/// (`A = 0`, `R_0` scalar, `R_∞` diagonal with integer eigenvalues, `Φ`
/// supported where eigenvalues of `R_∞` step by one), changes frame by a
/// random unipotent polynomial matrix, and then with probability one half
/// replaces one component by random polynomial entries.
pub fn random_tuple(rng: &mut impl Rng, spec: RandomTupleSpec) -> FtsTuple {
    let r = rng.random_range(1..=spec.max_size);
    let m = rng.random_range(1..=spec.max_base_dim);
    let n = m + 1;
    let diag: Vec<i64> = (0..r).map(|_| rng.random_range(0..=2)).collect();
    let mut rinf = RMat::zero(r, n);
    for (i, &d) in diag.iter().enumerate() {
        rinf.set(i, i, constant(n, d));
    }
    let r0 = RMat::identity(r, n).scale(&constant(n, rng.random_range(-2..=2)));
    // Φ = [Φ, R_∞] allows entries (a, b) with diag[b] - diag[a] = 1.
    let mut shape = RMat::zero(r, n);
    for a in 0..r {
        for b in 0..r {
            if diag[b] - diag[a] == 1 && rng.random_bool(0.7) {
                shape.set(a, b, constant(n, rng.random_range(1..=2)));
            }
        }
    }
    let phi: Vec<RMat> = (0..m)
        .map(|_| shape.scale(&constant(n, rng.random_range(-1..=1))))
        .collect();
    let base = FtsTuple::new(m, vec![RMat::zero(r, n); m], phi, r0, rinf, None)
        .expect("valid constant tuple");

    let mut frame = RMat::identity(r, n);
    for i in 0..r {
        for j in i + 1..r {
            if rng.random_bool(0.5) {
                frame.set(i, j, random_poly(rng, m, spec.max_degree.min(1)));
            }
        }
    }
    let mut t = base.gauge(&frame).expect("unipotent frame");

    if rng.random_bool(0.5) {
        let noise = random_matrix(rng, r, m, spec.max_degree, 0.4);
        match rng.random_range(0..4) {
            0 => t.nabla[rng.random_range(0..m)] = noise,
            1 => t.phi[rng.random_range(0..m)] = noise,
            2 => t.r0 = noise,
            _ => t.rinf = noise,
        }
    }
    t
}

/// A random tuple with a metric. A base of constant data compatible with
/// `g = I` (`A` skew, `Φ` and `R_0` symmetric, `R_∞` skew) where each piece
/// is independently replaced by arbitrary data with probability one quarter,
/// followed by a random constant change of frame.
pub fn random_metric_tuple(rng: &mut impl Rng, spec: RandomTupleSpec) -> FtsTuple {
    let r = rng.random_range(1..=spec.max_size);
    let m = rng.random_range(1..=spec.max_base_dim);
    let n = m + 1;
    let sym = |rng: &mut dyn rand::RngCore| {
        let mut a = RMat::zero(r, n);
        for i in 0..r {
            for j in i..r {
                let v = constant(n, rng.random_range(-2..=2));
                a.set(i, j, v.clone());
                a.set(j, i, v);
            }
        }
        a
    };
    let skew = |rng: &mut dyn rand::RngCore| {
        let mut a = RMat::zero(r, n);
        for i in 0..r {
            for j in i + 1..r {
                let v = constant(n, rng.random_range(-2..=2));
                a.set(i, j, v.clone());
                a.set(j, i, v.neg());
            }
        }
        a
    };
    let pick = |rng: &mut rand_chacha::ChaCha8Rng, good: &dyn Fn(&mut dyn rand::RngCore) -> RMat| {
        if rng.random_bool(0.25) {
            random_matrix(rng, r, m, spec.max_degree, 0.5)
        } else {
            good(rng)
        }
    };
    let mut local = rand_chacha::ChaCha8Rng::seed_from_u64(rng.random());
    let nabla: Vec<RMat> = (0..m).map(|_| pick(&mut local, &skew)).collect();
    let phi: Vec<RMat> = (0..m).map(|_| pick(&mut local, &sym)).collect();
    let r0 = pick(&mut local, &sym);
    let rinf = pick(&mut local, &skew);
    let t = FtsTuple::new(m, nabla, phi, r0, rinf, Some(RMat::identity(r, n)))
        .expect("identity metric");
    let mut frame = RMat::identity(r, n);
    for i in 0..r {
        for j in 0..r {
            if i != j && local.random_bool(0.3) {
                frame.set(i, j, constant(n, local.random_range(-1..=1)));
            }
        }
    }
    match frame.inverse() {
        Some(_) => t.gauge(&frame).expect("invertible frame"),
        None => t,
    }
}
