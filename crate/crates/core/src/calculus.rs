//! The functional calculus ψ ↦ ψ(A) for generator tuples: ψ(A), the
//! subordinated semigroups e^{tψ}(A), operator partial derivatives, the
//! Fréchet derivative and the divided-difference identities.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bernstein::{widder_measure, BernsteinFunction, DensityOptions, DividedDifference};
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, NormKind};
use crate::semigroups::GeneratorTuple;

/// Identities are compared against combined budgets times this factor.
pub const SAFETY_FACTOR: f64 = 10.0;

/// A matrix-valued result with its quadrature error accounting.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorResult {
    pub value: CMatrix,
    /// Bound on the operator-norm error due to truncated or discretized
    /// measures; 0 for exact finite sums.
    pub budget: f64,
    pub method: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubordinationMethod {
    ExpOfPsi,
    Widder,
}

fn check_arity(psi: &BernsteinFunction, a: &GeneratorTuple) -> Result<()> {
    if psi.arity() != a.arity() {
        return Err(Error::ArityMismatch {
            expected: psi.arity(),
            got: a.arity(),
        });
    }
    Ok(())
}

/// Spectral scale used to evaluate scalar budgets: max ‖Aᵢ‖.
fn spectral_scale(a: &GeneratorTuple) -> f64 {
    a.matrices().iter().map(linalg::op_norm).fold(0.0, f64::max)
}

/// Σ over the nodes of f(node), evaluated in parallel and reduced in node
/// order so results are bit-reproducible.
fn node_sum<'a, I, F>(d: usize, nodes: I, f: F) -> Result<CMatrix>
where
    I: Iterator<Item = &'a crate::bernstein::WeightedPoint>,
    F: Fn(&crate::bernstein::WeightedPoint) -> Result<CMatrix> + Sync,
{
    let nodes: Vec<_> = nodes.collect();
    let terms = nodes
        .par_iter()
        .map(|n| f(n))
        .collect::<Result<Vec<_>>>()?;
    Ok(terms
        .into_iter()
        .fold(CMatrix::zeros(d, d), |acc, t| acc + t))
}

/// ψ(A) = c₀I + Σⱼ c₁ʲAⱼ + ∫ (T_A(v) − I) dμ(v).
pub fn psi_of(psi: &BernsteinFunction, a: &GeneratorTuple) -> Result<OperatorResult> {
    check_arity(psi, a)?;
    let d = a.dim();
    let mut value = linalg::identity(d) * c(psi.c0());
    for (cj, aj) in psi.c1().iter().zip(a.matrices()) {
        if *cj != 0.0 {
            value += aj * c(*cj);
        }
    }
    value += node_sum(d, psi.measure().nodes(), |n| {
        Ok(a.semigroup_minus_identity(&n.point)? * c(n.mass))
    })?;
    let mn = a.bound().powi(a.arity() as i32);
    let budget = (1.0 + mn) * psi.measure().eval_budget(spectral_scale(a));
    Ok(OperatorResult {
        value,
        budget,
        method: "levy_sum",
    })
}

/// P·diag(ψ(λ⁽ᵏ⁾))·P⁻¹ from the joint spectrum (planted when available);
/// requires real nonpositive joint eigenvalues.
pub fn psi_of_spectral(psi: &BernsteinFunction, a: &GeneratorTuple) -> Result<OperatorResult> {
    check_arity(psi, a)?;
    let spec = match a.planted_spectrum() {
        Some(s) => s.clone(),
        None => a.joint_spectrum()?,
    };
    let real = spec.real_tuples(1e-10)?;
    let mut values = Vec::with_capacity(real.len());
    let mut budget = 0.0f64;
    for t in &real {
        let clipped: Vec<f64> = t.iter().map(|x| x.min(0.0)).collect();
        values.push(c(psi.eval(&clipped)?));
        budget = budget.max(psi.eval_budget(&clipped));
    }
    let p = &spec.basis;
    let value = p * linalg::diag(&values) * linalg::inverse(p)?;
    Ok(OperatorResult {
        value,
        budget: budget * linalg::condition_number(p),
        method: "spectral",
    })
}

/// g_t(A) for g_t = e^{tψ}.
pub fn subordinate(
    psi: &BernsteinFunction,
    a: &GeneratorTuple,
    t: f64,
    method: SubordinationMethod,
    opts: &DensityOptions,
) -> Result<OperatorResult> {
    check_arity(psi, a)?;
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!("subordination time {t} must be ≥ 0")));
    }
    let mn = a.bound().powi(a.arity() as i32);
    match method {
        SubordinationMethod::ExpOfPsi => {
            let p = psi_of(psi, a)?;
            Ok(OperatorResult {
                value: linalg::expm(&(&p.value * c(t))),
                budget: t * p.budget * mn * mn,
                method: "exp_of_psi",
            })
        }
        SubordinationMethod::Widder => {
            let nu = widder_measure(psi, t, opts)?;
            let d = a.dim();
            let value = node_sum(d, nu.nodes(), |n| Ok(a.semigroup_at(&n.point)? * c(n.mass)))?;
            Ok(OperatorResult {
                value,
                budget: nu.budget * mn,
                method: "widder",
            })
        }
    }
}

/// ∂ψ(A)/∂sᵢ = c₁ⁱI + ∫ vᵢ T_A(v) dμ(v).
pub fn partial_operator_deriv(
    psi: &BernsteinFunction,
    a: &GeneratorTuple,
    i: usize,
) -> Result<OperatorResult> {
    check_arity(psi, a)?;
    let moment_budget = psi.moment_budget(i)?;
    psi.omega(i)?;
    let d = a.dim();
    let mut value = linalg::identity(d) * c(psi.c1()[i]);
    value += node_sum(d, psi.measure().nodes(), |n| {
        let vi = n.point[i];
        if vi == 0.0 {
            return Ok(CMatrix::zeros(d, d));
        }
        Ok(a.semigroup_at(&n.point)? * c(n.mass * vi))
    })?;
    Ok(OperatorResult {
        value,
        budget: a.bound().powi(a.arity() as i32) * moment_budget,
        method: "moment_sum",
    })
}

fn check_directions(a: &GeneratorTuple, dirs: &[CMatrix]) -> Result<()> {
    if dirs.len() != a.arity() {
        return Err(Error::ArityMismatch {
            expected: a.arity(),
            got: dirs.len(),
        });
    }
    if dirs.iter().any(|m| m.shape() != (a.dim(), a.dim())) {
        return Err(Error::DimensionMismatch(format!(
            "directions must be {0}x{0}",
            a.dim()
        )));
    }
    Ok(())
}

/// ψ_A^∇(C) = Σᵢ ∂ψ(A)/∂sᵢ · Cᵢ.
pub fn frechet_derivative(
    psi: &BernsteinFunction,
    a: &GeneratorTuple,
    dirs: &[CMatrix],
) -> Result<OperatorResult> {
    check_arity(psi, a)?;
    check_directions(a, dirs)?;
    let d = a.dim();
    let mut value = CMatrix::zeros(d, d);
    let mut budget = 0.0;
    for (i, ci) in dirs.iter().enumerate() {
        let p = partial_operator_deriv(psi, a, i)?;
        value += &p.value * ci;
        budget += p.budget * linalg::op_norm(ci);
    }
    Ok(OperatorResult {
        value,
        budget,
        method: "frechet",
    })
}

/// Remainders ‖ψ(A + hC) − ψ(A) − h ψ_A^∇(C)‖ along an h-grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RemainderStudy {
    pub norm: NormKind,
    pub h: Vec<f64>,
    pub remainder: Vec<f64>,
    /// Least-squares slope of log remainder against log h, when every
    /// remainder is positive.
    pub slope: Option<f64>,
    /// [r(h_max)/h_max] / [r(h_min)/h_min].
    pub ratio_drop: Option<f64>,
}

/// Slope of the least-squares line through (x, y).
pub fn fit_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn frechet_remainder_study(
    psi: &BernsteinFunction,
    a: &GeneratorTuple,
    dirs: &[CMatrix],
    h_grid: &[f64],
    norm: NormKind,
) -> Result<RemainderStudy> {
    check_arity(psi, a)?;
    check_directions(a, dirs)?;
    if h_grid.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
        return Err(Error::InvalidParameter("step sizes must be positive".into()));
    }
    let base = psi_of(psi, a)?.value;
    let linear = frechet_derivative(psi, a, dirs)?.value;
    let mut remainder = Vec::with_capacity(h_grid.len());
    for &h in h_grid {
        let moved = a.perturbed(h, dirs)?;
        if !moved.commutes() {
            return Err(Error::Commutation(format!(
                "the direction breaks commutativity at h = {h}"
            )));
        }
        let r = psi_of(psi, &moved)?.value - &base - &linear * c(h);
        remainder.push(linalg::norm(&r, norm));
    }
    let positive = remainder.iter().all(|r| *r > 0.0);
    let (slope, ratio_drop) = if positive {
        let lx: Vec<f64> = h_grid.iter().map(|h| h.ln()).collect();
        let ly: Vec<f64> = remainder.iter().map(|r| r.ln()).collect();
        let (imax, imin) = extremes(h_grid);
        let drop = (remainder[imax] / h_grid[imax]) / (remainder[imin] / h_grid[imin]);
        (fit_slope(&lx, &ly), Some(drop))
    } else {
        (None, None)
    };
    Ok(RemainderStudy {
        norm,
        h: h_grid.to_vec(),
        remainder,
        slope,
        ratio_drop,
    })
}

fn extremes(x: &[f64]) -> (usize, usize) {
    let mut imax = 0;
    let mut imin = 0;
    for (k, v) in x.iter().enumerate() {
        if *v > x[imax] {
            imax = k;
        }
        if *v < x[imin] {
            imin = k;
        }
    }
    (imax, imin)
}

/// Residuals of the operator divided-difference identities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DividedIdentityReport {
    pub index: usize,
    /// ‖φᵢ(A, A')(Aᵢ − A') − [ψ(A) − ψ(A|Aᵢ→A')] + ωᵢ(Aᵢ − A')‖.
    pub residual_difference: f64,
    /// ‖φᵢ(A, Aᵢ) − (∂ψ(A)/∂sᵢ − ωᵢI)‖.
    pub residual_diagonal: f64,
    pub budget: f64,
}

pub fn divided_difference_identity_check(
    psi: &BernsteinFunction,
    i: usize,
    a: &GeneratorTuple,
    extra: &CMatrix,
) -> Result<DividedIdentityReport> {
    check_arity(psi, a)?;
    if i >= a.arity() {
        return Err(Error::InvalidParameter(format!("index {i} out of range")));
    }
    let dd = DividedDifference::new(psi, i, crate::bernstein::DEFAULT_W_ORDER)?;
    let phi = dd.as_function()?;
    let omega = dd.omega();
    let extended = a.extended(extra.clone())?;
    if !extended.commutes() {
        return Err(Error::Commutation(
            "the extra generator does not commute with the tuple".into(),
        ));
    }
    let diff = a.matrix(i) - extra;
    let phi_ext = psi_of(&phi, &extended)?;
    let psi_a = psi_of(psi, a)?;
    let psi_swap = psi_of(psi, &a.with_replaced(i, extra.clone())?)?;
    let lhs = &phi_ext.value * &diff;
    let rhs = &psi_a.value - &psi_swap.value - &diff * c(omega);
    let residual_difference = linalg::op_norm(&(lhs - rhs));

    let diagonal = a.extended(a.matrix(i).clone())?;
    let phi_diag = psi_of(&phi, &diagonal)?;
    let partial = partial_operator_deriv(psi, a, i)?;
    let expected = &partial.value - linalg::identity(a.dim()) * c(omega);
    let residual_diagonal = linalg::op_norm(&(&phi_diag.value - expected));

    let mn1 = extended.bound().powi(extended.arity() as i32);
    let moment = psi.moment_budget(i)?;
    let diff_norm = linalg::op_norm(&diff);
    let budget = psi_a.budget
        + psi_swap.budget
        + partial.budget
        + (1.0 + mn1) * moment * (1.0 + diff_norm);
    Ok(DividedIdentityReport {
        index: i,
        residual_difference,
        residual_diagonal,
        budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernstein::{dirac, frac_power};
    use crate::linalg::diag_real;

    fn diag_tuple(d: &[f64]) -> GeneratorTuple {
        GeneratorTuple::new(vec![diag_real(d)]).unwrap()
    }

    #[test]
    fn dirac_gives_semigroup_minus_identity() {
        let a = diag_tuple(&[-1.0, -2.0]);
        let psi = dirac(vec![1.5], 1.0).unwrap();
        let r = psi_of(&psi, &a).unwrap();
        let expected = a.semigroup_at(&[1.5]).unwrap() - linalg::identity(2);
        assert!(linalg::frobenius(&(r.value - expected)) < 1e-15);
        assert_eq!(r.budget, 0.0);
    }

    #[test]
    fn frac_power_scalar() {
        let a = diag_tuple(&[-2.0]);
        let psi = frac_power(0.5, 1, 0, &DensityOptions::default()).unwrap();
        let r = psi_of(&psi, &a).unwrap();
        assert!((r.value[(0, 0)].re + 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn moment_infinite_partial() {
        let a = diag_tuple(&[-2.0]);
        let psi = frac_power(0.5, 1, 0, &DensityOptions::default()).unwrap();
        assert!(matches!(
            partial_operator_deriv(&psi, &a, 0),
            Err(Error::MomentInfinite { .. })
        ));
    }

    #[test]
    fn zero_direction_gives_zero_remainders() {
        let a = diag_tuple(&[-1.0, -2.0]);
        let psi = dirac(vec![1.0], 1.0).unwrap();
        let s = frechet_remainder_study(
            &psi,
            &a,
            &[CMatrix::zeros(2, 2)],
            &[1e-1, 1e-2],
            NormKind::Operator,
        )
        .unwrap();
        assert!(s.remainder.iter().all(|r| *r == 0.0));
        assert_eq!(s.slope, None);
    }

    #[test]
    fn slope_of_exact_line() {
        let x = [0.0, 1.0, 2.0];
        let y = [1.0, 3.0, 5.0];
        assert!((fit_slope(&x, &y).unwrap() - 2.0).abs() < 1e-15);
    }
}
