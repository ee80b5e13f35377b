use std::time::{Instant, SystemTime, UNIX_EPOCH};

use bochner_core::bernstein::{validate_bernstein, BernsteinFunction, DividedDifference, DEFAULT_W_ORDER};
use bochner_core::bounds::{run_suite, theorem1_check, theorem2_check, BoundReport};
use bochner_core::calculus::{
    divided_difference_identity_check, frechet_remainder_study, psi_of, psi_of_spectral, subordinate,
    SubordinationMethod,
};
use bochner_core::linalg::{self, c, CMatrix};
use bochner_core::perturbation::{
    determinant_identity_checks, krein_integral_check, resolvent_trace_check, spectral_shift,
    stieltjes_inversion, subordinated_shift_check, trace_formula_check, trace_semigroup_diff,
    DeterminantHandle, InversionMethod,
};
use bochner_core::semigroups::{GeneratorTuple, PairSpec};
use bochner_core::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use crate::report::{digest, CheckRecord, Metadata, Report, Table};
use crate::scenario::{resolve_scenario, CheckSpec, DirectionSpec, Operation, Resolved, Scenario};
use crate::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads for independent checks; 1 runs them in sequence.
    pub jobs: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { jobs: 1 }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: Report,
    pub metadata: Metadata,
}

/// What an operation produced before it is turned into a record.
struct Outcome {
    pass: bool,
    residual: Option<f64>,
    budget: Option<f64>,
    tolerance: Option<f64>,
    values: serde_json::Value,
    tables: Vec<Table>,
}

impl Outcome {
    fn within(residual: f64, budget: f64, tolerance: f64, values: serde_json::Value) -> Self {
        Self {
            pass: residual <= tolerance,
            residual: Some(residual),
            budget: Some(budget),
            tolerance: Some(tolerance),
            values,
            tables: Vec::new(),
        }
    }

    fn with_table(mut self, t: Table) -> Self {
        self.tables.push(t);
        self
    }
}

fn f(x: f64) -> String {
    x.to_string()
}

fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, f64::max)
}

pub fn run_scenario(scenario: &Scenario, opts: RunOptions) -> std::result::Result<RunOutput, ConfigError> {
    let resolved = resolve_scenario(scenario)?;
    let started = Instant::now();
    let started_unix_seconds = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let jobs = opts.jobs.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| ConfigError::Invalid(format!("cannot start {jobs} workers: {e}")))?;
    let checks: Vec<CheckRecord> = pool.install(|| {
        let run = |(k, check): (usize, &CheckSpec)| run_check(&resolved, k, check);
        if jobs == 1 {
            scenario.checks.iter().enumerate().map(run).collect()
        } else {
            scenario.checks.par_iter().enumerate().map(run).collect()
        }
    });
    let report = Report {
        scenario: scenario.name.clone(),
        pass: checks.iter().all(|c| c.pass),
        checks,
    };
    let metadata = Metadata {
        tool_version: env!("CARGO_PKG_VERSION"),
        os: std::env::consts::OS,
        arch: std::env::consts::ARCH,
        jobs,
        started_unix_seconds,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    };
    Ok(RunOutput { report, metadata })
}

fn inputs_digest(resolved: &Resolved, check: &CheckSpec) -> String {
    let (ps, ts) = check.op.references();
    let functions = resolved.psi_closure(&ps);
    let mut tuple_ids: Vec<&str> = ts.clone();
    tuple_ids.sort_unstable();
    tuple_ids.dedup();
    let tuples: Vec<_> = tuple_ids
        .iter()
        .map(|id| (id.to_string(), resolved.tuple_spec(id).cloned()))
        .collect();
    let payload = json!({ "check": check, "functions": functions, "tuples": tuples });
    digest(payload.to_string().as_bytes())
}

fn run_check(resolved: &Resolved, index: usize, check: &CheckSpec) -> CheckRecord {
    let outcome = execute(resolved, check);
    let mut record = CheckRecord {
        index,
        op: check.op.name(),
        label: check.label.clone(),
        inputs_digest: inputs_digest(resolved, check),
        pass: false,
        residual: None,
        budget: None,
        tolerance: None,
        error: None,
        values: serde_json::Value::Null,
        tables: Vec::new(),
    };
    match (outcome, &check.expect_error) {
        (Ok(o), None) => {
            record.pass = o.pass;
            record.residual = o.residual;
            record.budget = o.budget;
            record.tolerance = o.tolerance;
            record.values = o.values;
            record.tables = o.tables;
        }
        (Ok(_), Some(kind)) => {
            record.error = Some(format!("expected a {kind} error, but the check succeeded"));
        }
        (Err(e), None) => {
            record.error = Some(format!("{}: {e}", e.kind()));
        }
        (Err(e), Some(kind)) => {
            record.pass = e.kind() == kind;
            record.error = Some(format!("{}: {e}", e.kind()));
        }
    }
    record
}

fn psi<'a>(r: &'a Resolved, id: &str) -> &'a BernsteinFunction {
    &r.functions[id]
}

fn tuple<'a>(r: &'a Resolved, id: &str) -> &'a GeneratorTuple {
    &r.tuples[id]
}

fn directions(a: &GeneratorTuple, spec: &DirectionSpec) -> Result<Vec<CMatrix>> {
    let n = a.arity();
    let check_len = |len: usize| {
        if len == n {
            Ok(())
        } else {
            Err(Error::ArityMismatch {
                expected: n,
                got: len,
            })
        }
    };
    match spec {
        DirectionSpec::ScaledIdentity { factors } => {
            check_len(factors.len())?;
            Ok(factors
                .iter()
                .map(|x| linalg::identity(a.dim()) * c(*x))
                .collect())
        }
        DirectionSpec::Generators { factors } => {
            check_len(factors.len())?;
            Ok(factors
                .iter()
                .zip(a.matrices())
                .map(|(x, m)| m * c(*x))
                .collect())
        }
        DirectionSpec::BasisDiagonal { diagonals } => {
            check_len(diagonals.len())?;
            let basis = match a.planted_spectrum() {
                Some(s) => s.basis.clone(),
                None => a.joint_spectrum()?.basis,
            };
            let inv = linalg::inverse(&basis)?;
            diagonals
                .iter()
                .map(|d| {
                    if d.len() != a.dim() {
                        return Err(Error::DimensionMismatch(format!(
                            "direction diagonal has {} entries, expected {}",
                            d.len(),
                            a.dim()
                        )));
                    }
                    Ok(&basis * linalg::diag_real(d) * &inv)
                })
                .collect()
        }
    }
}

fn bound_outcome(r: BoundReport) -> Outcome {
    Outcome {
        pass: r.pass,
        residual: Some((-r.margin).max(0.0)),
        budget: Some(r.budget),
        tolerance: None,
        values: json!(r),
        tables: Vec::new(),
    }
}

fn execute(r: &Resolved, check: &CheckSpec) -> Result<Outcome> {
    let density = check.density.unwrap_or_default();
    match &check.op {
        Operation::ValidatePsi { psi: p, grid } => {
            let rep = validate_bernstein(psi(r, p), *grid)?;
            Ok(Outcome {
                pass: rep.pass(),
                residual: None,
                budget: None,
                tolerance: None,
                values: json!({
                    "function": rep.function,
                    "samples": rep.samples,
                    "max_order": rep.max_order,
                    "violations": rep.violations.len(),
                    "first_violations": rep.violations.iter().take(5).collect::<Vec<_>>(),
                }),
                tables: Vec::new(),
            })
        }
        Operation::ValidateTuple {
            tuple: t,
            expect_valid,
        } => {
            let rep = tuple(r, t).validate()?;
            Ok(Outcome {
                pass: rep.pass() == *expect_valid,
                residual: None,
                budget: None,
                tolerance: None,
                values: json!(rep),
                tables: Vec::new(),
            })
        }
        Operation::ClosedForm {
            psi: p,
            points,
            tolerance,
        } => {
            let g = psi(r, p);
            let tag = g.tag().ok_or_else(|| Error::Unsupported {
                operation: "closed_form".into(),
                entry: g.label(),
            })?;
            let mut table = Table::new("points", vec!["point", "value", "closed_form", "abs_error"]);
            let mut residual = 0.0f64;
            let mut budget = 0.0f64;
            for s in points {
                let v = g.eval(s)?;
                let exact = tag.closed_form(s);
                residual = residual.max((v - exact).abs());
                budget = budget.max(g.eval_budget(s));
                table.push(vec![format!("{s:?}"), f(v), f(exact), f((v - exact).abs())]);
            }
            Ok(Outcome::within(residual, budget, *tolerance, json!({ "points": points.len() }))
                .with_table(table))
        }
        Operation::PsiOf {
            psi: p,
            tuple: t,
            tolerance,
        } => {
            let (g, a) = (psi(r, p), tuple(r, t));
            let levy = psi_of(g, a)?;
            let spectral = psi_of_spectral(g, a)?;
            let residual = linalg::op_norm(&(&levy.value - &spectral.value));
            let budget = levy.budget + spectral.budget;
            Ok(Outcome::within(
                residual,
                budget,
                *tolerance,
                json!({
                    "levy_budget": levy.budget,
                    "spectral_budget": spectral.budget,
                    "trace_re": linalg::trace(&levy.value).re,
                    "bound": a.bound(),
                }),
            ))
        }
        Operation::Subordinate {
            psi: p,
            tuple: t,
            t: times,
            tolerance,
        } => {
            let (g, a) = (psi(r, p), tuple(r, t));
            let mut table = Table::new("subordination", vec!["t", "difference", "budget"]);
            let mut residual = 0.0f64;
            let mut budget = 0.0f64;
            let mut tails = Vec::new();
            for &s in times {
                let w = subordinate(g, a, s, SubordinationMethod::Widder, &density)?;
                let e = subordinate(g, a, s, SubordinationMethod::ExpOfPsi, &density)?;
                let diff = linalg::op_norm(&(&w.value - &e.value));
                let nu = bochner_core::bernstein::widder_measure(g, s, &density)?;
                tails.push(nu.truncated_mass);
                residual = residual.max(diff);
                budget = budget.max(w.budget + e.budget);
                table.push(vec![f(s), f(diff), f(w.budget + e.budget)]);
            }
            Ok(Outcome::within(
                residual,
                budget,
                *tolerance,
                json!({ "truncated_mass": tails }),
            )
            .with_table(table))
        }
        Operation::FrechetRemainder {
            psi: p,
            tuple: t,
            direction,
            h,
            norm,
            min_slope,
            min_ratio_drop,
        } => {
            let (g, a) = (psi(r, p), tuple(r, t));
            let dirs = directions(a, direction)?;
            let study = frechet_remainder_study(g, a, &dirs, h, *norm)?;
            let pass = study.slope.is_some_and(|s| s >= *min_slope)
                && study.ratio_drop.is_some_and(|d| d >= *min_ratio_drop);
            let mut table = Table::new("remainder", vec!["h", "remainder"]);
            for (x, y) in study.h.iter().zip(&study.remainder) {
                table.push(vec![f(*x), f(*y)]);
            }
            Ok(Outcome {
                pass,
                residual: None,
                budget: None,
                tolerance: None,
                values: json!(study),
                tables: vec![table],
            })
        }
        Operation::DividedDifference {
            psi: p,
            tuple: t,
            index,
            extra,
            extra_index,
            tolerance,
        } => {
            let (g, a) = (psi(r, p), tuple(r, t));
            let source = tuple(r, extra);
            if *extra_index >= source.arity() || source.dim() != a.dim() {
                return Err(Error::InvalidParameter(format!(
                    "extra generator {extra_index} of '{extra}' does not fit the tuple"
                )));
            }
            let m = source.matrix(*extra_index).clone();
            let rep = divided_difference_identity_check(g, *index, a, &m)?;
            // scalar pushforward against the difference quotient on the joint spectrum
            let dd = DividedDifference::new(g, *index, DEFAULT_W_ORDER)?;
            let ext = a.extended(m)?;
            let spectrum = match (a.planted_spectrum(), source.planted_spectrum()) {
                (Some(sa), Some(sb)) if sa.basis == sb.basis => sa
                    .real_tuples(1e-10)?
                    .into_iter()
                    .zip(sb.real_tuples(1e-10)?)
                    .map(|(mut x, y)| {
                        x.push(y[*extra_index]);
                        x
                    })
                    .collect(),
                _ => ext.joint_spectrum()?.real_tuples(1e-10)?,
            };
            let mut scalar = 0.0f64;
            for s in &spectrum {
                let s: Vec<f64> = s.iter().map(|x| x.min(0.0)).collect();
                scalar = scalar.max((dd.eval(&s)? - dd.direct(&s)?).abs());
            }
            let residual = scalar
                .max(rep.residual_difference)
                .max(rep.residual_diagonal);
            Ok(Outcome::within(
                residual,
                rep.budget,
                *tolerance,
                json!({
                    "scalar_residual": scalar,
                    "residual_difference": rep.residual_difference,
                    "residual_diagonal": rep.residual_diagonal,
                    "omega": dd.omega(),
                }),
            ))
        }
        Operation::SpectralShift {
            a,
            b,
            v,
            tolerance,
        } => {
            let (ta, tb) = (tuple(r, a), tuple(r, b));
            let eta = spectral_shift(ta, tb)?;
            let mut residual = 0.0f64;
            let mut rows = Table::new("laplace", vec!["v", "trace", "shift_laplace", "abs_error"]);
            for u in v {
                let tr = trace_semigroup_diff(ta, tb, u)?;
                let lap = eta.laplace(u)?;
                let err = (tr.re - lap).abs().max(tr.im.abs());
                residual = residual.max(err);
                rows.push(vec![format!("{u:?}"), f(tr.re), f(lap), f(err)]);
            }
            let mut atoms = Table::new("shift_atoms", vec!["point", "weight"]);
            for at in eta.atoms() {
                atoms.push(vec![format!("{:?}", at.point), at.weight.to_string()]);
            }
            Ok(Outcome::within(
                residual,
                0.0,
                *tolerance,
                json!({
                    "atoms": eta.atoms().len(),
                    "total_weight": eta.total_weight(),
                }),
            )
            .with_table(rows)
            .with_table(atoms))
        }
        Operation::SemigroupTrace {
            a,
            b,
            v,
            tolerance,
        } => {
            let (ta, tb) = (tuple(r, a), tuple(r, b));
            let mut excess = 0.0f64;
            let mut table = Table::new("trace", vec!["v", "trace_re", "trace_im", "bound"]);
            for u in v {
                let tr = trace_semigroup_diff(ta, tb, u)?;
                excess = excess.max(Complex64::new(tr.re, tr.im).norm() - tr.bound);
                table.push(vec![format!("{u:?}"), f(tr.re), f(tr.im), f(tr.bound)]);
            }
            let residual = excess.max(0.0);
            Ok(Outcome::within(residual, 0.0, *tolerance, json!({ "points": v.len() }))
                .with_table(table))
        }
        Operation::TraceFormula {
            psi: p,
            a,
            b,
            tolerance,
        } => {
            let rep = trace_formula_check(psi(r, p), tuple(r, a), tuple(r, b))?;
            Ok(Outcome::within(rep.residual, rep.budget, *tolerance, json!(rep)))
        }
        Operation::ResolventTrace {
            a,
            b,
            lambdas,
            tolerance,
        } => {
            let (ta, tb) = (tuple(r, a), tuple(r, b));
            let mut table = Table::new("resolvent", vec!["lambda", "lhs", "rhs", "residual"]);
            let mut residual = 0.0f64;
            let mut commute = true;
            for l in lambdas {
                let lz: Vec<Complex64> = l.iter().map(|x| c(*x)).collect();
                let rep = resolvent_trace_check(ta, tb, &lz)?;
                residual = residual.max(rep.residual);
                commute &= rep.pair_commutes;
                table.push(vec![format!("{l:?}"), f(rep.lhs), f(rep.rhs), f(rep.residual)]);
            }
            Ok(Outcome::within(
                residual,
                0.0,
                *tolerance,
                json!({ "points": lambdas.len(), "pair_commutes": commute }),
            )
            .with_table(table))
        }
        Operation::SubordinatedShift {
            psi: p,
            a,
            b,
            s,
            tolerance,
        } => {
            let rep = subordinated_shift_check(psi(r, p), tuple(r, a), tuple(r, b), s, &density)?;
            let mut table = Table::new("subordinated_shift", vec!["s", "lhs", "rhs", "residual", "budget"]);
            for row in &rep.rows {
                table.push(vec![f(row.s), f(row.lhs), f(row.rhs), f(row.residual), f(row.budget)]);
            }
            Ok(Outcome::within(rep.max_residual, rep.max_budget, *tolerance, json!(rep))
                .with_table(table))
        }
        Operation::Determinant {
            a,
            b,
            c: cc,
            z,
            tolerance,
            derivative_tolerance,
            lambdas,
            limit_tolerance,
        } => determinant(
            r,
            [a, b, cc],
            z,
            *tolerance,
            *derivative_tolerance,
            lambdas,
            *limit_tolerance,
        ),
        Operation::ComplexInversion {
            a,
            b,
            y,
            t,
            min_jump_distance,
            tolerance,
        } => {
            let h = DeterminantHandle::new(tuple(r, a), tuple(r, b))?;
            let samples = stieltjes_inversion(&h, InversionMethod::Complex { y: *y }, t)?;
            let mut table = Table::new("inversion", vec!["t", "xi", "xi_recovered", "abs_error"]);
            let mut residual = 0.0f64;
            let mut used = 0usize;
            for s in &samples {
                table.push(vec![
                    f(s.t),
                    f(s.xi),
                    s.xi_recovered.map(f).unwrap_or_default(),
                    s.abs_error.map(f).unwrap_or_default(),
                ]);
                if h.shift().distance_to_jump(s.t) >= *min_jump_distance {
                    if let Some(e) = s.abs_error {
                        residual = residual.max(e);
                        used += 1;
                    }
                }
            }
            let envelope = max_of(samples.iter().filter_map(|s| s.envelope));
            Ok(Outcome::within(
                residual,
                envelope,
                *tolerance,
                json!({ "points_checked": used, "points": samples.len() }),
            )
            .with_table(table))
        }
        Operation::RealInversion { a, b, orders, t } => {
            let h = DeterminantHandle::new(tuple(r, a), tuple(r, b))?;
            if orders.len() < 2 || orders.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidParameter(
                    "orders must be at least two increasing values".into(),
                ));
            }
            let mut table = Table::new(
                "inversion",
                vec!["order", "t", "xi", "xi_recovered", "abs_error"],
            );
            let mut errors: Vec<Vec<Option<f64>>> = Vec::new();
            for &k in orders {
                let samples = stieltjes_inversion(&h, InversionMethod::Real { order: k }, t)?;
                for s in &samples {
                    table.push(vec![
                        k.to_string(),
                        f(s.t),
                        f(s.xi),
                        s.xi_recovered.map(f).unwrap_or_default(),
                        s.abs_error.map(f).unwrap_or_default(),
                    ]);
                }
                errors.push(samples.iter().map(|s| s.abs_error).collect());
            }
            let mut decreasing = true;
            for (j, _) in t.iter().enumerate() {
                for w in errors.windows(2) {
                    if let (Some(x), Some(y)) = (w[0][j], w[1][j]) {
                        decreasing &= y < x;
                    }
                }
            }
            let last = errors.last().map(|e| max_of(e.iter().flatten().copied()));
            Ok(Outcome {
                pass: decreasing,
                residual: last,
                budget: None,
                tolerance: None,
                values: json!({ "orders": orders, "abs_error": errors, "strictly_decreasing": decreasing }),
                tables: vec![table],
            })
        }
        Operation::KreinIntegral {
            psi: p,
            a,
            b,
            tolerance,
        } => {
            let rep = krein_integral_check(psi(r, p), tuple(r, a), tuple(r, b))?;
            Ok(Outcome::within(rep.residual, rep.budget, *tolerance, json!(rep)))
        }
        Operation::Theorem1 { psi: p, a, b } => Ok(bound_outcome(theorem1_check(
            psi(r, p),
            tuple(r, a),
            tuple(r, b),
            format!("{a}/{b}"),
        )?)),
        Operation::Theorem2 { psi: p, a, b, norm } => Ok(bound_outcome(theorem2_check(
            psi(r, p),
            tuple(r, a),
            tuple(r, b),
            *norm,
            format!("{a}/{b}"),
        )?)),
        Operation::BoundSuite {
            psi: p,
            theorem,
            norm,
            pair,
            first_seed,
            count,
        } => {
            let template = PairSpec {
                seed: *first_seed,
                arity: pair.arity,
                dim: pair.dim,
                basis: pair.basis,
            };
            let rep = run_suite(psi(r, p), *theorem, *norm, template, *first_seed, *count)?;
            let mut table = Table::new("suite", vec!["seed", "lhs", "rhs", "margin", "pass"]);
            for row in &rep.rows {
                table.push(vec![
                    row.seed.to_string(),
                    f(row.lhs),
                    f(row.rhs),
                    f(row.margin),
                    row.pass.to_string(),
                ]);
            }
            let worst = rep
                .rows
                .iter()
                .map(|row| row.margin)
                .fold(f64::INFINITY, f64::min);
            Ok(Outcome {
                pass: rep.violations == 0,
                residual: Some((-worst).max(0.0)),
                budget: None,
                tolerance: None,
                values: json!({
                    "theorem": rep.theorem,
                    "norm": rep.norm,
                    "function": rep.function,
                    "pairs": rep.rows.len(),
                    "violations": rep.violations,
                    "min_margin": worst,
                }),
                tables: vec![table],
            })
        }
    }
}

fn determinant(
    r: &Resolved,
    [a, b, cc]: [&String; 3],
    z: &[[f64; 2]],
    tolerance: f64,
    derivative_tolerance: f64,
    lambdas: &[f64],
    limit_tolerance: Option<f64>,
) -> Result<Outcome> {
    let (ta, tb, tc) = (tuple(r, a), tuple(r, b), tuple(r, cc));
    let points: Vec<Complex64> = z.iter().map(|p| Complex64::new(p[0], p[1])).collect();
    let rep = determinant_identity_checks(ta, tb, tc, &points)?;
    let mut table = Table::new(
        "determinant",
        vec![
            "z_re",
            "z_im",
            "delta_re",
            "delta_im",
            "formula_error",
            "cocycle_error",
            "trace_error",
            "central_error",
        ],
    );
    for row in &rep.rows {
        table.push(vec![
            f(row.z_re),
            f(row.z_im),
            f(row.delta_re),
            f(row.delta_im),
            f(row.formula_error),
            f(row.cocycle_error),
            f(row.trace_error),
            f(row.central_error),
        ]);
    }
    let h = DeterminantHandle::new(ta, tb)?;
    let mut path = Table::new(
        "quadrature_path",
        vec!["lambda", "delta", "delta_stieltjes", "relative_error", "budget"],
    );
    let mut primary_error = 0.0f64;
    let mut primary_budget = 0.0f64;
    let mut gaps = Vec::with_capacity(lambdas.len());
    for &l in lambdas {
        let p = h.value_primary(l)?;
        let reference = h.value(c(l))?.re;
        let rel = (p.value - reference).abs() / reference.abs();
        primary_error = primary_error.max(rel);
        primary_budget = primary_budget.max(p.budget);
        gaps.push((p.value - 1.0).abs());
        path.push(vec![f(l), f(p.value), f(reference), f(rel), f(p.budget)]);
    }
    let monotone = gaps.windows(2).all(|w| w[1] <= w[0]);
    let limit_ok = match (limit_tolerance, gaps.last()) {
        (Some(tol), Some(g)) => *g <= tol,
        (Some(_), None) => false,
        (None, _) => true,
    };
    let identity = rep.max_formula_error.max(rep.max_cocycle_error).max(primary_error);
    let derivative = rep.max_trace_error.max(rep.max_central_error);
    Ok(Outcome {
        pass: identity <= tolerance && derivative <= derivative_tolerance && monotone && limit_ok,
        residual: Some(identity),
        budget: Some(primary_budget),
        tolerance: Some(tolerance),
        values: json!({
            "max_formula_error": rep.max_formula_error,
            "max_cocycle_error": rep.max_cocycle_error,
            "max_trace_error": rep.max_trace_error,
            "max_central_error": rep.max_central_error,
            "quadrature_path_error": primary_error,
            "derivative_tolerance": derivative_tolerance,
            "distance_to_one": gaps,
            "monotone_toward_one": monotone,
            "limit_tolerance": limit_tolerance,
        }),
        tables: vec![table, path],
    })
}
