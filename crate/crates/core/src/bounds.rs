//! The Lipschitz bound ‖ψ(A) − ψ(B)‖ ≤ −(2e/(e−1))·n·Mⁿ·ψ(−(M/2n)‖A − B‖)
//! and the ideal-norm bound ‖ψ(A) − ψ(B)‖_J ≤ M^{n+1} Σ ωᵢ‖Aᵢ − Bᵢ‖_J,
//! checked on single pairs and on seeded suites.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bernstein::BernsteinFunction;
use crate::calculus::{psi_of, SAFETY_FACTOR};
use crate::error::{Error, Result};
use crate::linalg::{self, NormKind};
use crate::perturbation::pair_bound;
use crate::semigroups::{random_pair, GeneratorTuple, PairSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub pair_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub norm: NormKind,
    pub budget: f64,
    pub pass: bool,
}

impl BoundReport {
    fn new(pair_id: String, lhs: f64, rhs: f64, norm: NormKind, budget: f64) -> Self {
        let margin = rhs - lhs;
        Self {
            pair_id,
            lhs,
            rhs,
            margin,
            norm,
            budget,
            pass: margin >= -budget,
        }
    }
}

fn check_pair(psi: &BernsteinFunction, a: &GeneratorTuple, b: &GeneratorTuple) -> Result<()> {
    if a.arity() != b.arity() || psi.arity() != a.arity() {
        return Err(Error::ArityMismatch {
            expected: psi.arity(),
            got: if a.arity() != psi.arity() { a.arity() } else { b.arity() },
        });
    }
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "dimensions {} and {} differ",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

/// 2e/(e − 1).
pub fn lipschitz_constant() -> f64 {
    let e = std::f64::consts::E;
    2.0 * e / (e - 1.0)
}

pub fn theorem1_check(
    psi: &BernsteinFunction,
    a: &GeneratorTuple,
    b: &GeneratorTuple,
    pair_id: impl Into<String>,
) -> Result<BoundReport> {
    check_pair(psi, a, b)?;
    let n = a.arity();
    let m = pair_bound(a, b);
    let pa = psi_of(psi, a)?;
    let pb = psi_of(psi, b)?;
    let lhs = linalg::op_norm(&(&pa.value - &pb.value));
    let scale = m / (2.0 * n as f64);
    let arg: Vec<f64> = a
        .matrices()
        .iter()
        .zip(b.matrices())
        .map(|(x, y)| -scale * linalg::op_norm(&(x - y)))
        .collect();
    let factor = lipschitz_constant() * n as f64 * m.powi(n as i32);
    let rhs = -factor * psi.eval(&arg)?;
    let budget =
        SAFETY_FACTOR * (pa.budget + pb.budget + factor * psi.eval_budget(&arg)) + 1e-13 * (1.0 + rhs);
    Ok(BoundReport::new(pair_id.into(), lhs, rhs, NormKind::Operator, budget))
}

pub fn theorem2_check(
    psi: &BernsteinFunction,
    a: &GeneratorTuple,
    b: &GeneratorTuple,
    norm: NormKind,
    pair_id: impl Into<String>,
) -> Result<BoundReport> {
    check_pair(psi, a, b)?;
    let n = a.arity();
    let m = pair_bound(a, b);
    let mut weighted = 0.0;
    let mut moment_error = 0.0;
    for (i, (x, y)) in a.matrices().iter().zip(b.matrices()).enumerate() {
        let gap = linalg::norm(&(x - y), norm);
        weighted += psi.omega(i)? * gap;
        moment_error += psi.moment_budget(i)? * gap;
    }
    let pa = psi_of(psi, a)?;
    let pb = psi_of(psi, b)?;
    let lhs = linalg::norm(&(&pa.value - &pb.value), norm);
    let factor = m.powi(n as i32 + 1);
    let rhs = factor * weighted;
    let norm_factor = match norm {
        NormKind::Operator => 1.0,
        NormKind::Trace => a.dim() as f64,
    };
    let budget = SAFETY_FACTOR * (norm_factor * (pa.budget + pb.budget) + factor * moment_error)
        + 1e-13 * (1.0 + rhs);
    Ok(BoundReport::new(pair_id.into(), lhs, rhs, norm, budget))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    Lipschitz,
    IdealNorm,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteRow {
    pub seed: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub theorem: Theorem,
    pub norm: NormKind,
    pub function: String,
    pub rows: Vec<SuiteRow>,
    pub violations: usize,
}

/// Runs one theorem over pairs generated from `template` with seeds
/// `first_seed..first_seed + count`. Rows keep seed order.
pub fn run_suite(
    psi: &BernsteinFunction,
    theorem: Theorem,
    norm: NormKind,
    template: PairSpec,
    first_seed: u64,
    count: usize,
) -> Result<SuiteReport> {
    if theorem == Theorem::Lipschitz && norm != NormKind::Operator {
        return Err(Error::InvalidParameter(
            "the Lipschitz bound is stated in the operator norm".into(),
        ));
    }
    let rows = (0..count as u64)
        .into_par_iter()
        .map(|k| {
            let seed = first_seed + k;
            let (a, b) = random_pair(PairSpec { seed, ..template })?;
            let id = format!("seed-{seed}");
            let r = match theorem {
                Theorem::Lipschitz => theorem1_check(psi, &a, &b, id)?,
                Theorem::IdealNorm => theorem2_check(psi, &a, &b, norm, id)?,
            };
            Ok(SuiteRow {
                seed,
                lhs: r.lhs,
                rhs: r.rhs,
                margin: r.margin,
                pass: r.pass,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let violations = rows.iter().filter(|r| !r.pass).count();
    Ok(SuiteReport {
        theorem,
        norm,
        function: psi.label(),
        rows,
        violations,
    })
}
