use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::determinant::DeterminantHandle;
use super::shift::ShiftFunction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum InversionMethod {
    /// (1/π) Im log Δ(−t − iy).
    Complex { y: f64 },
    /// The order-k real inversion of the Stieltjes transform.
    Real { order: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InversionSample {
    pub t: f64,
    pub xi: f64,
    /// `None` when t sits on a jump.
    pub xi_recovered: Option<f64>,
    pub abs_error: Option<f64>,
    /// Bound (1/π)·Σ|wₖ|·y/dist(t, jumps) for the complex method.
    pub envelope: Option<f64>,
    pub on_jump: bool,
}

/// dᵐ/dtᵐ [tᵖ log(t + a)] for m > p and a ≥ 0, from the recurrence
/// D(p, m) = p·D(p−1, m−1) + (−a)ᵖ(−1)^{m−1}(m−1)!/(t + a)ᵐ unrolled to
/// D(p, m) = Σ_q [p!/q!]·(−a)^q(−1)^{k−1}(k−1)!/(t + a)^k, k = m − p + q.
/// All terms share the sign (−1)^{m−p−1}, so the sum does not cancel.
pub fn log_power_derivative(p: usize, m: usize, t: f64, a: f64) -> f64 {
    assert!(m > p, "closed form needs m > p");
    let ln_x = (t + a).ln();
    let total: f64 = (0..=p)
        .filter(|&q| q == 0 || a > 0.0)
        .map(|q| {
            let k = m - p + q;
            let ln_a = if q == 0 { 0.0 } else { q as f64 * a.ln() };
            (ln_factorial(p) - ln_factorial(q) + ln_a + ln_factorial(k - 1) - k as f64 * ln_x)
                .exp()
        })
        .sum();
    if (m - p - 1).is_multiple_of(2) {
        total
    } else {
        -total
    }
}

fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|j| (j as f64).ln()).sum()
}

/// The order-k real inversion of log Δ(t) = −Σ wⱼ log(t + tⱼ):
/// ((−t)^{k−1}/(k!(k−2)!))·d^{2k−1}/dt^{2k−1}(tᵏ log Δ(t)).
pub fn real_inversion(shift: &ShiftFunction, k: usize, t: f64) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("inversion order {k} must be ≥ 2")));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::Domain(format!("real inversion needs t > 0, got {t}")));
    }
    let m = 2 * k - 1;
    let derivative: f64 = shift
        .jumps
        .iter()
        .zip(&shift.weights)
        .map(|(tj, w)| -(*w as f64) * log_power_derivative(k, m, t, *tj))
        .sum();
    let sign = if (k - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    let log_pref = (k - 1) as f64 * t.ln() - ln_factorial(k) - ln_factorial(k - 2);
    Ok(sign * log_pref.exp() * derivative)
}

/// Recovers ξ on a grid of t > 0 from log Δ.
pub fn stieltjes_inversion(
    handle: &DeterminantHandle,
    method: InversionMethod,
    t_grid: &[f64],
) -> Result<Vec<InversionSample>> {
    let shift = handle.shift();
    if let InversionMethod::Complex { y } = method {
        if !(y.is_finite() && y > 0.0) {
            return Err(Error::InvalidParameter(format!("y = {y} must be positive")));
        }
    }
    t_grid
        .iter()
        .map(|&t| {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::Domain(format!("inversion needs t > 0, got {t}")));
            }
            let xi = shift.eval(t);
            let dist = shift.distance_to_jump(t);
            if dist <= 1e-12 * (1.0 + t) {
                return Ok(InversionSample {
                    t,
                    xi,
                    xi_recovered: None,
                    abs_error: None,
                    envelope: None,
                    on_jump: true,
                });
            }
            let (rec, envelope) = match method {
                InversionMethod::Complex { y } => {
                    let z = Complex64::new(-t, -y);
                    let v = handle.log_value(z)?.im / std::f64::consts::PI;
                    (v, Some(shift.abs_weight() * y / (std::f64::consts::PI * dist)))
                }
                InversionMethod::Real { order } => (real_inversion(shift, order, t)?, None),
            };
            Ok(InversionSample {
                t,
                xi,
                xi_recovered: Some(rec),
                abs_error: Some((rec - xi).abs()),
                envelope,
                on_jump: false,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_log_matches_hand_values() {
        // d/dt log(t + 2) = 1/(t + 2); d²/dt² [t log(t + 2)] = (t + 4)/(t + 2)²
        let t: f64 = 0.7;
        assert!((log_power_derivative(0, 1, t, 2.0) - 1.0 / (t + 2.0)).abs() < 1e-15);
        let expected = (t + 4.0) / (t + 2.0).powi(2);
        assert!((log_power_derivative(1, 2, t, 2.0) - expected).abs() < 1e-14);
    }

    #[test]
    fn zero_shift_inverts_to_zero() {
        let xi = ShiftFunction {
            jumps: vec![],
            weights: vec![],
        };
        assert_eq!(real_inversion(&xi, 4, 1.0).unwrap(), 0.0);
    }
}
