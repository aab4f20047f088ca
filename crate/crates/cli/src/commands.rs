//! The subcommands, each producing a verdict, a JSON report and a text
//! rendering.

use serde::Serialize;
use serde_json::{json, Value};

use arith_lg_core::connalg::{
    curvature, log_restriction, poincare_rank, rank1_restriction, verify_fts, verify_metric,
    ConnectionJson, MatForm, TupleJson,
};
use arith_lg_core::cyclotomic::CycloNum;
use arith_lg_core::expsum::{family_sum_with, gkz_sum, sum_report, Character};
use arith_lg_core::ffield::{FieldSpec, FqElem};
use arith_lg_core::frobdata::{
    family_l_function, frobenius_report_with_tolerance, monodromy_filtration, FrobError, QMatrix,
    DEFAULT_MAX_RANK, PURITY_TOLERANCE,
};
use arith_lg_core::laurent::{check_nondegenerate, phi_map, rank_check, LaurentError};
use arith_lg_core::EnumConfig;

use crate::error::CliError;
use crate::problem::{parse_elements, parse_json, Problem};

/// The result of a command that ran to completion.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub passed: bool,
    pub report: Value,
    pub text: String,
}

impl Outcome {
    fn new<T: Serialize>(passed: bool, report: &T, text: String) -> Outcome {
        Outcome {
            passed,
            report: serde_json::to_value(report).expect("reports serialize"),
            text,
        }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Parameter point options shared by the field commands.
#[derive(Debug, Clone)]
pub struct PointArgs {
    pub tau: Option<String>,
    pub x: Option<String>,
    /// `tau` and `x` are read in the degree-`degree` extension of the
    /// problem's field.
    pub degree: usize,
}

struct Point {
    field: FieldSpec,
    tau: Option<FqElem>,
    x: Vec<FqElem>,
}

fn point(problem: &Problem, args: &PointArgs) -> Result<Point, CliError> {
    let field = problem
        .field
        .extension(args.degree.max(1))
        .map_err(|e| CliError::input("--degree", e))?;
    let tau = args
        .tau
        .as_deref()
        .map(|t| field.parse_element(t).map_err(|e| CliError::input("--tau", e)))
        .transpose()?;
    let m = problem.deformation.parameter_count();
    let x = match &args.x {
        Some(text) => parse_elements(&field, text, "x")?,
        None => vec![field.zero(); m],
    };
    if x.len() != m {
        return Err(CliError::input(
            "--x",
            format!("the deformation has {m} parameters, got {}", x.len()),
        ));
    }
    Ok(Point { field, tau, x })
}

fn require_tau(p: &Point) -> Result<FqElem, CliError> {
    match &p.tau {
        Some(t) if !t.is_zero() => Ok(t.clone()),
        Some(_) => Err(CliError::input("--tau", "tau must be nonzero")),
        None => Err(CliError::input("--tau", "missing")),
    }
}

fn rank_of(problem: &Problem) -> Result<u64, CliError> {
    Ok(problem
        .deformation
        .base()
        .newton_polyhedron()
        .map_err(LaurentError::from)?
        .normalized_volume())
}

fn elems(v: &[FqElem]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

pub fn analyze_polytope(problem: &Problem) -> Result<Outcome, CliError> {
    let delta = problem
        .deformation
        .base()
        .newton_polyhedron()
        .map_err(|e| CliError::input("f", e))?;
    let report = delta.report();
    let text = format!(
        "f = {}\nvertices: {:?}\ndimension: {}\nconvenient: {}\nnormalized volume: {}\nfaces not containing 0: {}",
        problem.deformation.base(),
        report.vertices,
        report.dimension,
        report.convenient,
        report.normalized_volume,
        report.faces_not_containing_origin,
    );
    Ok(Outcome::new(true, &report, text))
}

pub fn check_nondegenerate_cmd(
    problem: &Problem,
    args: &PointArgs,
    max_k: usize,
    config: &EnumConfig,
) -> Result<Outcome, CliError> {
    let p = point(problem, args)?;
    let fx = problem.deformation.specialize_over(&p.field, &p.x)?;
    let delta = fx.newton_polyhedron().map_err(|e| CliError::input("f", e))?;
    let nondeg = check_nondegenerate(&fx, &p.field, &delta, max_k, config)?;
    let ranks = rank_check(&fx, &p.field, max_k, config)?;
    let passed = !nondeg.is_degenerate();
    let report = json!({
        "polynomial": fx.to_string(),
        "x": p.x.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "nondegeneracy": nondeg,
        "rank_check": ranks,
    });
    let text = format!(
        "F_x = {fx}\nnondegeneracy: {} ({})\ncritical points per extension degree: {:?} (normalized volume {})",
        verdict(passed),
        serde_json::to_string(&nondeg).expect("serializes"),
        ranks.counts,
        ranks.normalized_volume,
    );
    Ok(Outcome {
        passed,
        report,
        text,
    })
}

#[derive(Serialize)]
struct ExpSumOutput {
    k: usize,
    tau: String,
    x: Vec<String>,
    character: &'static str,
    sum: arith_lg_core::expsum::SumReport,
    gkz_sum: Option<CycloNum>,
    composition_ok: Option<bool>,
}

pub fn expsum_cmd(
    problem: &Problem,
    args: &PointArgs,
    k: usize,
    inverse: bool,
    config: &EnumConfig,
) -> Result<Outcome, CliError> {
    let p = point(problem, args)?;
    let tau = require_tau(&p)?;
    let d = &problem.deformation;
    let chi = if inverse { Character::PsiInverse } else { Character::Psi };
    let s = family_sum_with(d, k, &tau, &p.x, chi, config)?;
    let q_k = d
        .field()
        .extension(k)?
        .order_u64()
        .ok_or_else(|| CliError::input("--k", "field too large to enumerate"))?;
    let report = sum_report(&s, rank_of(problem)?, q_k, d.nvars());
    // The composition with the GKZ sum is only defined for psi.
    let gkz = if inverse {
        None
    } else {
        let y = phi_map(d, &problem.table, &tau, &p.x)?;
        Some(gkz_sum(&problem.table, d.field(), k, &y, config)?)
    };
    let composition_ok = gkz.as_ref().map(|g| g == &s);
    let passed = report.bound_ok && composition_ok.unwrap_or(true);
    let mut text = format!(
        "S = {}\nbound {:.6}: {}\nmax |S| over embeddings: {:.6}",
        s,
        report.bound,
        verdict(report.bound_ok),
        report.embeddings.iter().map(|z| z.norm()).fold(0.0, f64::max),
    );
    if let Some(ok) = composition_ok {
        text.push_str(&format!("\nGKZ composition: {}", verdict(ok)));
    }
    let out = ExpSumOutput {
        k,
        tau: tau.to_string(),
        x: p.x.iter().map(ToString::to_string).collect(),
        character: if inverse { "psi_inverse" } else { "psi" },
        sum: report,
        gkz_sum: gkz,
        composition_ok,
    };
    Ok(Outcome::new(passed, &out, text))
}

pub fn frobenius_cmd(
    problem: &Problem,
    args: &PointArgs,
    config: &EnumConfig,
) -> Result<Outcome, CliError> {
    let p = point(problem, args)?;
    let tau = require_tau(&p)?;
    let result = frobenius_report_with_tolerance(
        &problem.deformation,
        &tau,
        &p.x,
        problem.max_rank.unwrap_or(DEFAULT_MAX_RANK),
        problem.tolerance.unwrap_or(PURITY_TOLERANCE),
        config,
    );
    let report = match result {
        Ok(r) => r,
        Err(e @ (FrobError::RankMismatch(_) | FrobError::ToleranceExceeded(_))) => {
            e.report().expect("carries a report").clone()
        }
        Err(e) => return Err(e.into()),
    };
    let passed = report.consistent && report.purity_ok && report.determinant_ok && report.duality_ok;
    let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    let mut text = format!(
        "point tau = {}, x = [{}] over F_{}\nrank {}\nP(T) = {}\nconsistency: {}\npurity (weight {}): {} (max deviation {:.3e})\ndeterminant: {} (max deviation {:.3e})\nduality: {}",
        report.tau,
        elems(&report.x),
        report.q,
        report.rank,
        report.char_poly,
        verdict(report.consistent),
        report.weight,
        verdict(report.purity_ok),
        max(&report.purity_deviation),
        verdict(report.determinant_ok),
        max(&report.determinant_deviation),
        verdict(report.duality_ok),
    );
    for w in &report.warnings {
        text.push_str(&format!("\nwarning: {w}"));
    }
    Ok(Outcome::new(passed, &report, text))
}

pub fn l_function_cmd(
    problem: &Problem,
    args: &PointArgs,
    kmax: Option<usize>,
    config: &EnumConfig,
) -> Result<Outcome, CliError> {
    let p = point(problem, args)?;
    if args.degree > 1 {
        return Err(CliError::input("--degree", "the L-function is taken over the problem's field"));
    }
    let rank = rank_of(problem)? as usize;
    let kmax = kmax.unwrap_or(2 * (rank + 1));
    let report = family_l_function(&problem.deformation, &p.x, kmax, config)?;
    let mut text = format!(
        "L(T) = ({}) / ({})\n-chi_c = {} against rank {}: {}\nstable: {}\nlisse input: {}",
        report.numerator,
        report.denominator,
        report.minus_chi_c,
        report.rank,
        verdict(report.swan_bound_ok),
        verdict(report.stable),
        verdict(report.lisse_input),
    );
    for t in &report.traces {
        text.push_str(&format!(
            "\nc_{} = {}{}",
            t.k,
            t.value,
            if t.direct_checked { " (direct)" } else { "" }
        ));
    }
    Ok(Outcome::new(report.passed(), &report, text))
}

pub fn verify_connection_cmd(text: &str) -> Result<Outcome, CliError> {
    let a: MatForm = parse_json::<ConnectionJson>(text)?.to_form()?;
    let f = curvature(&a);
    let flat = f.is_zero();
    let rank = poincare_rank(&a);
    let n = a.nvars();
    let names = arith_lg_core::connalg::var_names(n);
    let mut nonzero = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let c = f.wedge_component(i, j);
            if !c.is_zero() {
                nonzero.push(json!({
                    "component": format!("d{}^d{}", names[i], names[j]),
                    "matrix": arith_lg_core::connalg::matrix_to_json(c),
                }));
            }
        }
    }
    let mut out = format!(
        "flat: {}\nPoincaré rank along t = 0: {}",
        verdict(flat),
        rank
    );
    let mut restriction = Value::Null;
    let mut restriction_ok = true;
    if flat && rank == 0 {
        let r = log_restriction(&a)?;
        restriction_ok = r.report.passed();
        out.push_str(&format!(
            "\nresidue: {}\nrestricted flatness: {}\nresidue horizontal: {}",
            r.residue,
            verdict(r.report.restricted_flat),
            verdict(r.report.horizontal.iter().all(|&b| b)),
        ));
        restriction = json!({
            "residue": arith_lg_core::connalg::matrix_to_json(&r.residue),
            "restriction": r.restriction.iter().map(arith_lg_core::connalg::matrix_to_json).collect::<Vec<_>>(),
            "report": r.report,
        });
    } else if flat && rank == 1 {
        let r = rank1_restriction(&a)?;
        out.push_str(&format!(
            "\nR_0: {}\nPhi: {}\nPhi^Phi = 0: {}\n[R_0, Phi] = 0: {}",
            r.r0,
            r.phi.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
            verdict(r.report.higgs),
            verdict(r.report.commute),
        ));
        restriction = json!({
            "r0": arith_lg_core::connalg::matrix_to_json(&r.r0),
            "phi": r.phi.iter().map(arith_lg_core::connalg::matrix_to_json).collect::<Vec<_>>(),
            "report": r.report,
        });
    }
    for c in &nonzero {
        out.push_str(&format!("\ncurvature {}: nonzero", c["component"].as_str().unwrap_or("")));
    }
    let report = json!({
        "flat": flat,
        "poincare_rank": rank,
        "curvature": nonzero,
        "restriction": restriction,
    });
    Ok(Outcome {
        passed: flat && restriction_ok,
        report,
        text: out,
    })
}

pub fn verify_fts_cmd(text: &str) -> Result<Outcome, CliError> {
    let t = parse_json::<TupleJson>(text)?.to_tuple()?;
    let fts = verify_fts(&t)?;
    let metric = t.metric().map(|_| verify_metric(&t)).transpose()?;
    let mut out = String::new();
    for c in &fts.conditions {
        out.push_str(&format!("{}: {}\n", c.name, verdict(c.holds)));
    }
    out.push_str(&format!("assembled connection flat: {}", verdict(fts.flat)));
    if let Some(m) = &metric {
        out.push_str(&format!(
            "\nPhi self-adjoint: {}\nR_0 self-adjoint: {}\nR_inf skew-adjoint: {}\ng flat: {}\npairing flat: {}",
            verdict(m.phi_self_adjoint.iter().all(|&b| b)),
            verdict(m.r0_self_adjoint),
            verdict(m.rinf_skew_adjoint),
            verdict(m.g_flat.iter().all(|&b| b)),
            verdict(m.pairing_flat),
        ));
    }
    let passed = fts.flat && metric.as_ref().is_none_or(|m| m.identities_hold());
    let report = json!({ "fts": fts, "metric": metric });
    Ok(Outcome {
        passed,
        report,
        text: out,
    })
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct MonodromyFile {
    n: QMatrix,
}

pub fn monodromy_cmd(text: &str) -> Result<Outcome, CliError> {
    let file: MonodromyFile = parse_json(text)?;
    let filtration = monodromy_filtration(&file.n).map_err(|e| CliError::input("n", e))?;
    let graded = filtration.graded_dims();
    let mut out = format!("N = {}\n", file.n);
    for (k, m) in &filtration.levels {
        out.push_str(&format!("dim M_{k} = {}\n", m.dim()));
    }
    let gr: Vec<String> = graded.iter().map(|(k, d)| format!("gr_{k}: {d}")).collect();
    out.push_str(&gr.join(", "));
    let report = json!({
        "levels": filtration.levels.iter().map(|(k, m)| (k.to_string(), m)).collect::<std::collections::BTreeMap<_, _>>(),
        "graded_dims": graded.iter().map(|(k, d)| (k.to_string(), d.to_string())).collect::<std::collections::BTreeMap<_, _>>(),
    });
    Ok(Outcome {
        passed: true,
        report,
        text: out,
    })
}
