use num_complex::Complex64;
use serde::Serialize;

use super::shift::{spectral_shift, ShiftFunction};
use crate::bernstein::{log_resolvent, DensityOptions};
use crate::calculus::psi_of;
use crate::error::{Error, Result};
use crate::linalg::{self, c};
use crate::semigroups::GeneratorTuple;

/// Node-set budget of ψ_λ on the quadrature path.
pub const PRIMARY_BUDGET: f64 = 1e-13;

/// Δ_{B/A} for a pair of single generators with real nonpositive spectra.
#[derive(Debug, Clone)]
pub struct DeterminantHandle {
    a: GeneratorTuple,
    b: GeneratorTuple,
    shift: ShiftFunction,
}

/// Δ on the quadrature path with its budget on log Δ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrimaryValue {
    pub value: f64,
    pub log_value: f64,
    pub budget: f64,
}

impl DeterminantHandle {
    pub fn new(a: &GeneratorTuple, b: &GeneratorTuple) -> Result<Self> {
        if a.arity() != 1 || b.arity() != 1 {
            return Err(Error::InvalidParameter(
                "perturbation determinants are defined for single generators".into(),
            ));
        }
        let shift = spectral_shift(a, b)?.shift_function()?;
        Ok(Self {
            a: a.clone(),
            b: b.clone(),
            shift,
        })
    }

    pub fn shift(&self) -> &ShiftFunction {
        &self.shift
    }

    pub fn a(&self) -> &GeneratorTuple {
        &self.a
    }

    pub fn b(&self) -> &GeneratorTuple {
        &self.b
    }

    /// z must avoid the cut (−∞, 0] and both spectra.
    pub fn check_z(&self, z: Complex64) -> Result<()> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Inadmissible(format!("z = {z} is not finite")));
        }
        if z.im == 0.0 && z.re <= 0.0 {
            return Err(Error::Inadmissible(format!("z = {z} lies on the cut (−∞, 0]")));
        }
        Ok(())
    }

    /// log Δ(z) = ⟨ξ, 1/(t + z)⟩.
    pub fn log_value(&self, z: Complex64) -> Result<Complex64> {
        self.check_z(z)?;
        self.shift.stieltjes_log(z)
    }

    pub fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.log_value(z)?.exp())
    }

    /// det(I + (A − B)R(z, A)), valid without commutation.
    pub fn det_formula(&self, z: Complex64) -> Result<Complex64> {
        self.check_z(z)?;
        let r = self.a.resolvent(0, z)?;
        self.b.resolvent(0, z)?;
        let d = self.a.dim();
        let m = linalg::identity(d) + (self.a.matrix(0) - self.b.matrix(0)) * r;
        Ok(linalg::determinant(&m))
    }

    /// Δ(λ) = exp tr(ψ_λ(A) − ψ_λ(B)) with ψ_λ(s) = log λ − log(λ − s)
    /// evaluated through its Lévy measure u⁻¹e^{−λu}du.
    pub fn value_primary(&self, lambda: f64) -> Result<PrimaryValue> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::Inadmissible(format!(
                "the quadrature path needs real λ > 0, got {lambda}"
            )));
        }
        let scale = [&self.a, &self.b]
            .iter()
            .map(|t| linalg::op_norm(t.matrix(0)))
            .fold(1.0f64, f64::max);
        let opts = DensityOptions {
            budget: PRIMARY_BUDGET,
            s_max: scale,
            ..DensityOptions::default()
        };
        let psi = log_resolvent(lambda, 1, 0, &opts)?;
        let pa = psi_of(&psi, &self.a)?;
        let pb = psi_of(&psi, &self.b)?;
        let log_value = linalg::trace(&(&pa.value - &pb.value)).re;
        let budget = self.a.dim() as f64 * (pa.budget + pb.budget);
        Ok(PrimaryValue {
            value: log_value.exp(),
            log_value,
            budget,
        })
    }

    /// Δ'/Δ(z) from the Stieltjes representation.
    pub fn log_derivative(&self, z: Complex64) -> Result<Complex64> {
        self.check_z(z)?;
        self.shift.stieltjes_log(z)?;
        Ok(self.shift.stieltjes_log_derivative(z))
    }

    /// tr(R(z, B) − R(z, A)).
    pub fn resolvent_trace(&self, z: Complex64) -> Result<Complex64> {
        self.check_z(z)?;
        let rb = self.b.resolvent(0, z)?;
        let ra = self.a.resolvent(0, z)?;
        Ok(linalg::trace(&(rb - ra)))
    }

    /// Central difference of log Δ with step 1e−5·|z|, taken as the log of
    /// the ratio Δ(z + h)/Δ(z − h) of determinant values.
    pub fn log_derivative_central(&self, z: Complex64) -> Result<Complex64> {
        let h = 1e-5 * z.norm();
        let hz = c(h);
        let up = self.det_formula(z + hz)?;
        let down = self.det_formula(z - hz)?;
        Ok((up / down).ln() / (2.0 * h))
    }
}

/// Δ_{B/A}(z) from the Stieltjes representation.
pub fn perturbation_determinant(
    a: &GeneratorTuple,
    b: &GeneratorTuple,
    z: Complex64,
) -> Result<Complex64> {
    DeterminantHandle::new(a, b)?.value(z)
}

/// Residuals of the determinant identities at one z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeterminantRow {
    pub z_re: f64,
    pub z_im: f64,
    pub delta_re: f64,
    pub delta_im: f64,
    /// |Δ_{B/A} − det(I + (A − B)R(z, A))| / |Δ_{B/A}|.
    pub formula_error: f64,
    /// |Δ_{B/A}Δ_{C/B} − Δ_{C/A}| / |Δ_{C/A}|.
    pub cocycle_error: f64,
    /// |Δ'/Δ − tr(R(z,B) − R(z,A))|.
    pub trace_error: f64,
    /// |Δ'/Δ − central difference|.
    pub central_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeterminantReport {
    pub rows: Vec<DeterminantRow>,
    pub max_formula_error: f64,
    pub max_cocycle_error: f64,
    pub max_trace_error: f64,
    pub max_central_error: f64,
}

fn det_cocycle(
    ab: &DeterminantHandle,
    bc: &DeterminantHandle,
    ac: &DeterminantHandle,
    z: Complex64,
) -> Result<f64> {
    let lhs = ab.det_formula(z)? * bc.det_formula(z)?;
    let rhs = ac.det_formula(z)?;
    Ok((lhs - rhs).norm() / rhs.norm())
}

pub fn determinant_identity_checks(
    a: &GeneratorTuple,
    b: &GeneratorTuple,
    c_tuple: &GeneratorTuple,
    z_grid: &[Complex64],
) -> Result<DeterminantReport> {
    let ab = DeterminantHandle::new(a, b)?;
    let bc = DeterminantHandle::new(b, c_tuple)?;
    let ac = DeterminantHandle::new(a, c_tuple)?;
    let mut rows = Vec::with_capacity(z_grid.len());
    for &z in z_grid {
        let delta = ab.value(z)?;
        let formula = ab.det_formula(z)?;
        let d_log = ab.log_derivative(z)?;
        rows.push(DeterminantRow {
            z_re: z.re,
            z_im: z.im,
            delta_re: delta.re,
            delta_im: delta.im,
            formula_error: (delta - formula).norm() / delta.norm(),
            cocycle_error: det_cocycle(&ab, &bc, &ac, z)?,
            trace_error: (d_log - ab.resolvent_trace(z)?).norm(),
            central_error: (d_log - ab.log_derivative_central(z)?).norm(),
        });
    }
    let max = |f: fn(&DeterminantRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    Ok(DeterminantReport {
        max_formula_error: max(|r| r.formula_error),
        max_cocycle_error: max(|r| r.cocycle_error),
        max_trace_error: max(|r| r.trace_error),
        max_central_error: max(|r| r.central_error),
        rows,
    })
}
