//! Matrix-valued differential forms on `(t, x_1, .., x_m)`.

use serde::Serialize;

use super::matrix::RMat;
use super::mpoly::RatFunc;
use super::ConnError;

/// A matrix of forms of degree 0, 1 or 2.
///
/// Coordinate 0 is `t` and coordinate `i` is `x_i`. Degree-1 components
/// are the coefficients of `dt, dx_1, .., dx_m`; degree-2 components are the
/// coefficients of `dy_a ∧ dy_b` for `a < b`, in lexicographic order of
/// `(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatForm {
    degree: u8,
    size: usize,
    m: usize,
    comps: Vec<RMat>,
}

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn pair_index(n: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < n);
    // Pairs (0,1..n-1), (1,2..n-1), ...
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

impl MatForm {
    pub fn zero(degree: u8, size: usize, m: usize) -> MatForm {
        let n = m + 1;
        let count = match degree {
            0 => 1,
            1 => n,
            2 => pair_count(n),
            _ => panic!("forms of degree {degree} are not represented"),
        };
        MatForm {
            degree,
            size,
            m,
            comps: vec![RMat::zero(size, n); count],
        }
    }

    /// A 1-form `A_t dt + sum_i A_i dx_i`.
    pub fn one_form(dt: RMat, dx: Vec<RMat>) -> Result<MatForm, ConnError> {
        let m = dx.len();
        let size = dt.size();
        if dt.nvars() != m + 1 {
            return Err(ConnError::Shape(format!(
                "entries use {} variables, expected {}",
                dt.nvars(),
                m + 1
            )));
        }
        if dx.iter().any(|a| a.size() != size || a.nvars() != m + 1) {
            return Err(ConnError::Shape("components differ in size".to_string()));
        }
        let mut comps = vec![dt];
        comps.extend(dx);
        Ok(MatForm {
            degree: 1,
            size,
            m,
            comps,
        })
    }

    pub fn degree(&self) -> u8 {
        self.degree
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of `x` coordinates.
    pub fn base_dim(&self) -> usize {
        self.m
    }

    pub fn nvars(&self) -> usize {
        self.m + 1
    }

    /// The `dt` coefficient of a 1-form.
    pub fn dt(&self) -> &RMat {
        assert_eq!(self.degree, 1);
        &self.comps[0]
    }

    /// The `dx_i` coefficient of a 1-form, `i` counted from 1.
    pub fn dx(&self, i: usize) -> &RMat {
        assert_eq!(self.degree, 1);
        assert!(i >= 1 && i <= self.m, "x index out of range");
        &self.comps[i]
    }

    /// Coefficient of `dy_a` for a 1-form, with `y_0 = t`.
    pub fn component(&self, a: usize) -> &RMat {
        assert_eq!(self.degree, 1);
        &self.comps[a]
    }

    /// Coefficient of `dy_a ∧ dy_b` (`a < b`) for a 2-form.
    pub fn wedge_component(&self, a: usize, b: usize) -> &RMat {
        assert_eq!(self.degree, 2);
        &self.comps[pair_index(self.m + 1, a, b)]
    }

    pub fn components(&self) -> &[RMat] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(RMat::is_zero)
    }
}

/// `dA + A ∧ A`; the `dy_a ∧ dy_b` component is
/// `d_a A_b - d_b A_a + A_a A_b - A_b A_a`.
pub fn curvature(a: &MatForm) -> MatForm {
    assert_eq!(a.degree, 1, "curvature takes a 1-form");
    let n = a.m + 1;
    let mut out = MatForm::zero(2, a.size, a.m);
    for i in 0..n {
        for j in i + 1..n {
            let (ai, aj) = (&a.comps[i], &a.comps[j]);
            let c = aj
                .derivative(i)
                .sub(&ai.derivative(j))
                .add(&ai.bracket(aj));
            out.comps[pair_index(n, i, j)] = c;
        }
    }
    out
}

fn max_pole(m: &RMat) -> u32 {
    m.entries().iter().map(RatFunc::pole_order_t).max().unwrap_or(0)
}

/// Poincaré rank along `t = 0`: the least `k >= 0` with `t^k A_i` and
/// `t^(k+1) A_t` regular, or `-1` when all components are already regular.
///
/// Rational entries are always meromorphic along `t = 0`, so no error case
/// arises here.
pub fn poincare_rank(a: &MatForm) -> i64 {
    assert_eq!(a.degree, 1, "Poincaré rank takes a 1-form");
    let pt = max_pole(a.dt()) as i64;
    let px = (1..=a.m).map(|i| max_pole(a.dx(i)) as i64).max().unwrap_or(0);
    if pt == 0 && px == 0 {
        return -1;
    }
    px.max(pt - 1)
}

fn at_t0(m: &RMat) -> RMat {
    m.map(|e| e.at_t0().expect("entry regular at t = 0"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogRestrictionReport {
    pub restricted_flat: bool,
    /// Per `x_i`, whether `(dΩ/dx_i - [Ω, Ω_i])` vanishes at `t = 0`.
    pub horizontal: Vec<bool>,
}

impl LogRestrictionReport {
    pub fn passed(&self) -> bool {
        self.restricted_flat && self.horizontal.iter().all(|&b| b)
    }
}

/// Restriction of a flat logarithmic connection to `t = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogRestriction {
    /// `Ω_i(0, x)`, the connection induced on `t = 0`.
    pub restriction: Vec<RMat>,
    /// `Ω(0, x)`.
    pub residue: RMat,
    pub report: LogRestrictionReport,
}

fn check_flat(a: &MatForm) -> Result<(), ConnError> {
    if curvature(a).is_zero() {
        Ok(())
    } else {
        Err(ConnError::NotFlat)
    }
}

fn check_rank(a: &MatForm, wanted: i64) -> Result<(), ConnError> {
    let found = poincare_rank(a);
    if found == wanted {
        Ok(())
    } else {
        Err(ConnError::WrongRank { wanted, found })
    }
}

/// For `A = sum Ω_i dx_i + Ω dt/t` flat with Poincaré rank 0, returns the
/// restriction and residue and re-checks the two identities they satisfy.
pub fn log_restriction(a: &MatForm) -> Result<LogRestriction, ConnError> {
    check_flat(a)?;
    check_rank(a, 0)?;
    let omega = a.dt().map(|e| e.mul_t_power(1));
    let residue = at_t0(&omega);
    let restriction: Vec<RMat> = (1..=a.m).map(|i| at_t0(a.dx(i))).collect();

    let zero_dt = RMat::zero(a.size, a.m + 1);
    let restricted = MatForm::one_form(zero_dt, restriction.clone())?;
    let restricted_flat = curvature(&restricted).is_zero();
    let horizontal = (1..=a.m)
        .map(|i| {
            let lhs = omega.derivative(i).sub(&omega.bracket(a.dx(i)));
            at_t0(&lhs).is_zero()
        })
        .collect();
    Ok(LogRestriction {
        restriction,
        residue,
        report: LogRestrictionReport {
            restricted_flat,
            horizontal,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rank1Report {
    /// `[Φ_i, Φ_j] = 0` for all `i < j`.
    pub higgs: bool,
    /// `[R_0, Φ_i] = 0` for all `i`.
    pub commute: bool,
}

/// Higgs field and `R_0` of a flat connection with Poincaré rank 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rank1Restriction {
    /// `Φ_i = (t A_i)(0, x)`.
    pub phi: Vec<RMat>,
    /// `(t^2 A_t)(0, x)`.
    pub r0: RMat,
    pub report: Rank1Report,
}

pub fn rank1_restriction(a: &MatForm) -> Result<Rank1Restriction, ConnError> {
    check_flat(a)?;
    check_rank(a, 1)?;
    let phi: Vec<RMat> = (1..=a.m)
        .map(|i| at_t0(&a.dx(i).map(|e| e.mul_t_power(1))))
        .collect();
    let r0 = at_t0(&a.dt().map(|e| e.mul_t_power(2)));
    let higgs = (0..phi.len())
        .all(|i| (i + 1..phi.len()).all(|j| phi[i].bracket(&phi[j]).is_zero()));
    let commute = phi.iter().all(|p| r0.bracket(p).is_zero());
    assert!(
        higgs && commute,
        "flat rank-1 connection gave a non-Higgs restriction"
    );
    Ok(Rank1Restriction {
        phi,
        r0,
        report: Rank1Report { higgs, commute },
    })
}

/// The same connection written in `s = 1/t`; variable 0 now stands for `s`.
/// Uses `dt = -ds / s^2`.
pub fn to_s_chart(a: &MatForm) -> MatForm {
    assert_eq!(a.degree, 1, "chart change takes a 1-form");
    let n = a.nvars();
    let minus_s2 = RatFunc::var(n, 0).mul(&RatFunc::var(n, 0)).neg();
    let factor = minus_s2.inv().expect("nonzero");
    let mut comps = vec![a.dt().map(|e| e.invert_t().mul(&factor))];
    comps.extend((1..=a.m).map(|i| a.dx(i).map(RatFunc::invert_t)));
    MatForm {
        degree: 1,
        size: a.size,
        m: a.m,
        comps,
    }
}

/// `(j^* A)` for `j(t, x) = (-t, x)`: `A_i(-t, x) dx_i - A_t(-t, x) dt`.
pub fn pull_back_negate_t(a: &MatForm) -> MatForm {
    assert_eq!(a.degree, 1);
    let mut comps = vec![a.dt().map(|e| e.negate_t().neg())];
    comps.extend((1..=a.m).map(|i| a.dx(i).map(RatFunc::negate_t)));
    MatForm {
        degree: 1,
        size: a.size,
        m: a.m,
        comps,
    }
}
