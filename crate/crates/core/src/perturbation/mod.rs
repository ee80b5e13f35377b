//! Trace formulas for pairs of tuples: semigroup-difference traces, the
//! atomic spectral shift, resolvent traces, perturbation determinants and
//! the inversion of their Stieltjes transforms.

mod determinant;
mod inversion;
mod shift;

pub use determinant::{
    determinant_identity_checks, perturbation_determinant, DeterminantHandle, DeterminantReport,
    DeterminantRow, PrimaryValue, PRIMARY_BUDGET,
};
pub use inversion::{
    log_power_derivative, real_inversion, stieltjes_inversion, InversionMethod, InversionSample,
};
pub use shift::{
    real_spectrum, spectral_shift, ShiftAtom, ShiftFunction, SpectralShift, MERGE_TOLERANCE,
};

use num_complex::Complex64;
use serde::Serialize;

use crate::bernstein::{widder_measure, BernsteinFunction, DensityOptions};
use crate::calculus::{psi_of, SAFETY_FACTOR};
use crate::error::{Error, Result};
use crate::linalg::{self, NormKind};
use crate::quadrature::GaussRule;
use crate::semigroups::GeneratorTuple;

/// A scalar identity lhs = rhs with its residual and error budget.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub budget: f64,
    /// Whether every Aᵢ commutes with every Bⱼ; the formulas do not assume it.
    pub pair_commutes: bool,
}

impl IdentityCheck {
    fn new(lhs: f64, rhs: f64, budget: f64, pair_commutes: bool) -> Self {
        Self {
            lhs,
            rhs,
            residual: (lhs - rhs).abs(),
            budget,
            pair_commutes,
        }
    }
}

fn check_pair(a: &GeneratorTuple, b: &GeneratorTuple) -> Result<()> {
    if a.arity() != b.arity() {
        return Err(Error::ArityMismatch {
            expected: a.arity(),
            got: b.arity(),
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

/// Whether the two tuples commute with each other, at the tuples' own
/// commutator tolerance.
pub fn pair_commutes(a: &GeneratorTuple, b: &GeneratorTuple) -> bool {
    a.matrices().iter().all(|x| {
        b.matrices().iter().all(|y| {
            let comm = linalg::frobenius(&(x * y - y * x));
            comm <= a.commute_tolerance() * (1.0 + linalg::frobenius(x) * linalg::frobenius(y))
        })
    })
}

/// M for a pair: the larger of the two tuple bounds.
pub fn pair_bound(a: &GeneratorTuple, b: &GeneratorTuple) -> f64 {
    a.bound().max(b.bound())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceDifference {
    pub re: f64,
    pub im: f64,
    /// M^{n+1} Σ vᵢ ‖Aᵢ − Bᵢ‖_tr.
    pub bound: f64,
    pub within_bound: bool,
}

/// tr(T_A(v) − T_B(v)).
pub fn trace_semigroup_diff(
    a: &GeneratorTuple,
    b: &GeneratorTuple,
    v: &[f64],
) -> Result<TraceDifference> {
    check_pair(a, b)?;
    let value = linalg::trace(&(a.semigroup_at(v)? - b.semigroup_at(v)?));
    let m = pair_bound(a, b);
    let bound = m.powi(a.arity() as i32 + 1)
        * v.iter()
            .zip(a.matrices().iter().zip(b.matrices()))
            .map(|(vi, (x, y))| vi * linalg::norm(&(x - y), NormKind::Trace))
            .sum::<f64>();
    Ok(TraceDifference {
        re: value.re,
        im: value.im,
        bound,
        within_bound: value.norm() <= bound * (1.0 + 1e-12) + 1e-14,
    })
}

fn moment_precondition(psi: &BernsteinFunction, a: &GeneratorTuple, b: &GeneratorTuple) -> Result<()> {
    if a.growth_exponents().iter().chain(b.growth_exponents()).any(|m| *m > 0) {
        return Err(Error::Unsupported {
            operation: "trace formula with positive growth exponents".into(),
            entry: psi.label(),
        });
    }
    for i in 0..psi.arity() {
        if !psi.measure().first_moment_finite(i) {
            return Err(Error::MomentInfinite { coordinate: i });
        }
    }
    Ok(())
}

/// tr(ψ(A) − ψ(B)) against ∫⟨η_{A,B}, e^{−v·t}⟩ dμ(v) + c₁·⟨η, −t⟩.
pub fn trace_formula_check(
    psi: &BernsteinFunction,
    a: &GeneratorTuple,
    b: &GeneratorTuple,
) -> Result<IdentityCheck> {
    check_pair(a, b)?;
    moment_precondition(psi, a, b)?;
    let eta = spectral_shift(a, b)?;
    let pa = psi_of(psi, a)?;
    let pb = psi_of(psi, b)?;
    let lhs = linalg::trace(&(&pa.value - &pb.value)).re;
    let mut rhs = 0.0;
    for node in psi.measure().nodes() {
        rhs += node.mass * eta.laplace(&node.point)?;
    }
    let linear: f64 = eta
        .atoms()
        .iter()
        .map(|at| {
            -(at.weight as f64)
                * at.point.iter().zip(psi.c1()).map(|(t, c1)| t * c1).sum::<f64>()
        })
        .sum();
    rhs += linear;
    let t_max = eta
        .atoms()
        .iter()
        .flat_map(|at| at.point.iter().copied())
        .fold(0.0, f64::max);
    let abs_w: f64 = eta.atoms().iter().map(|at| at.weight.abs() as f64).sum();
    let d = a.dim() as f64;
    let budget = SAFETY_FACTOR
        * (d * (pa.budget + pb.budget) + abs_w * psi.measure().eval_budget(t_max) + 1e-14);
    Ok(IdentityCheck::new(lhs, rhs, budget, pair_commutes(a, b)))
}

/// tr(∏R(λᵢ, Aᵢ) − ∏R(λᵢ, Bᵢ)) against Σ wₖ ∏ᵢ 1/(λᵢ + t_{k,i}).
pub fn resolvent_trace_check(
    a: &GeneratorTuple,
    b: &GeneratorTuple,
    lambda: &[Complex64],
) -> Result<IdentityCheck> {
    check_pair(a, b)?;
    if lambda.iter().any(|l| !(l.re > 0.0)) {
        return Err(Error::Domain("resolvent points need Re λᵢ > 0".into()));
    }
    let eta = spectral_shift(a, b)?;
    let lhs = linalg::trace(&(a.resolvent_product(lambda)? - b.resolvent_product(lambda)?));
    let rhs = eta.resolvent_pairing(lambda);
    let mut check = IdentityCheck::new(lhs.re, rhs.re, 0.0, pair_commutes(a, b));
    check.residual = (lhs - rhs).norm();
    Ok(check)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubordinatedShiftRow {
    pub s: f64,
    /// ⟨η_{ψ(A),ψ(B)}, e^{−sτ}⟩ from the spectra of ψ(A), ψ(B).
    pub lhs: f64,
    /// Σ ν_s-mass · ⟨η_{A,B}, e^{−u·t}⟩.
    pub rhs: f64,
    pub residual: f64,
    pub budget: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubordinatedShiftReport {
    pub rows: Vec<SubordinatedShiftRow>,
    pub max_residual: f64,
    pub max_budget: f64,
    pub pair_commutes: bool,
}

fn operator_spectrum(m: &linalg::CMatrix) -> Result<Vec<f64>> {
    let (values, _) = linalg::eig(m)?;
    let scale = values.iter().fold(1.0f64, |s, z| s.max(z.norm()));
    values
        .iter()
        .map(|z| {
            if z.im.abs() > 1e-8 * scale || z.re > 1e-10 * scale {
                Err(Error::Spectrum(format!("ψ(A) has eigenvalue {z} outside (−∞, 0]")))
            } else {
                Ok(z.re.min(0.0))
            }
        })
        .collect()
}

/// The shift of the pair (ψ(A), ψ(B)) read from their spectra, against
/// the subordination formula on a grid of s > 0.
pub fn subordinated_shift_check(
    psi: &BernsteinFunction,
    a: &GeneratorTuple,
    b: &GeneratorTuple,
    s_grid: &[f64],
    opts: &DensityOptions,
) -> Result<SubordinatedShiftReport> {
    check_pair(a, b)?;
    let eta = spectral_shift(a, b)?;
    let pa = psi_of(psi, a)?;
    let pb = psi_of(psi, b)?;
    let sub_eta = SpectralShift::from_spectra(
        &operator_spectrum(&pa.value)?
            .into_iter()
            .map(|x| vec![x])
            .collect::<Vec<_>>(),
        &operator_spectrum(&pb.value)?
            .into_iter()
            .map(|x| vec![x])
            .collect::<Vec<_>>(),
    )?;
    let d = a.dim() as f64;
    let kappa = a.bound().max(b.bound());
    let mut rows = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::Domain(format!("s = {s} must be positive")));
        }
        let lhs = sub_eta.laplace(&[s])?;
        let nu = widder_measure(psi, s, opts)?;
        let mut rhs = 0.0;
        for node in nu.nodes() {
            rhs += node.mass * eta.laplace(&node.point)?;
        }
        // eigenvalue perturbation of ψ(A), ψ(B) and the ν_s transform error
        let budget = SAFETY_FACTOR
            * (2.0 * d * nu.budget + 2.0 * d * s * kappa * (pa.budget + pb.budget) + 1e-14);
        rows.push(SubordinatedShiftRow {
            s,
            lhs,
            rhs,
            residual: (lhs - rhs).abs(),
            budget,
        });
    }
    Ok(SubordinatedShiftReport {
        max_residual: rows.iter().map(|r| r.residual).fold(0.0, f64::max),
        max_budget: rows.iter().map(|r| r.budget).fold(0.0, f64::max),
        rows,
        pair_commutes: pair_commutes(a, b),
    })
}

/// The one-variable integral forms of the trace formula.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KreinReport {
    /// tr(ψ(A) − ψ(B)).
    pub trace: f64,
    /// Σ wₖ [ψ(−tₖ) − ψ(−T)].
    pub step_sum: f64,
    /// ∫ ψ'(−t) ξ(t) dt by Gauss–Legendre on each constancy interval of ξ,
    /// when ψ' is available.
    pub step_integral: Option<f64>,
    /// Σ_nodes mass·u·⟨ξ, e^{−ut}⟩ + c₁ ∫ ξ.
    pub laplace_form: f64,
    pub residual: f64,
    pub budget: f64,
    pub pair_commutes: bool,
}

pub fn krein_integral_check(
    psi: &BernsteinFunction,
    a: &GeneratorTuple,
    b: &GeneratorTuple,
) -> Result<KreinReport> {
    check_pair(a, b)?;
    if a.arity() != 1 {
        return Err(Error::InvalidParameter(
            "the Kreĭn integral form is one-dimensional".into(),
        ));
    }
    let xi = spectral_shift(a, b)?.shift_function()?;
    if xi.total_weight() != 0 {
        return Err(Error::DimensionMismatch("shift weights do not cancel".into()));
    }
    let pa = psi_of(psi, a)?;
    let pb = psi_of(psi, b)?;
    let trace = linalg::trace(&(&pa.value - &pb.value)).re;

    let t_max = xi.jumps.iter().copied().fold(0.0, f64::max);
    let window = 2.0 * t_max + 1.0;
    let psi_t = |t: f64| psi.eval(&[-t]);
    let tail = psi_t(window)?;
    let mut step_sum = 0.0;
    for (t, w) in xi.jumps.iter().zip(&xi.weights) {
        step_sum += *w as f64 * (psi_t(*t)? - tail);
    }

    let step_integral = if psi.measure().first_moment_finite(0) {
        let rule = GaussRule::new(16)?;
        let mut total = 0.0;
        for k in 0..xi.jumps.len().saturating_sub(1) {
            let (lo, hi) = (xi.jumps[k], xi.jumps[k + 1]);
            let level = xi.eval(lo);
            if level == 0.0 || hi <= lo {
                continue;
            }
            let mut piece = 0.0;
            for (t, w) in rule.on_interval(lo, hi) {
                piece += w * psi.partial_deriv(0, &[-t])?;
            }
            total += level * piece;
        }
        Some(total)
    } else {
        None
    };

    let mut laplace_form = psi.c1()[0] * xi.integral()?;
    for node in psi.measure().nodes() {
        let u = node.point[0];
        // u·⟨ξ, e^{−ut}⟩ = Σ wₖ e^{−u tₖ}, taken as Σ wₖ (e^{−u tₖ} − 1)
        let paired: f64 = xi
            .jumps
            .iter()
            .zip(&xi.weights)
            .map(|(t, w)| *w as f64 * (-u * t).exp_m1())
            .sum();
        laplace_form += node.mass * paired;
    }

    let mut residual = (trace - step_sum).abs().max((trace - laplace_form).abs());
    if let Some(v) = step_integral {
        residual = residual.max((trace - v).abs());
    }
    let d = a.dim() as f64;
    let abs_w = xi.abs_weight();
    let budget = SAFETY_FACTOR
        * (d * (pa.budget + pb.budget) + abs_w * psi.measure().eval_budget(window) + 1e-14);
    Ok(KreinReport {
        trace,
        step_sum,
        step_integral,
        laplace_form,
        residual,
        budget,
        pair_commutes: pair_commutes(a, b),
    })
}

/// ‖T_A(u) − T_B(u)‖ paired with the tuple bound, used by reports.
pub fn semigroup_gap(a: &GeneratorTuple, b: &GeneratorTuple, u: &[f64], norm: NormKind) -> Result<f64> {
    check_pair(a, b)?;
    Ok(linalg::norm(&(a.semigroup_at(u)? - b.semigroup_at(u)?), norm))
}
