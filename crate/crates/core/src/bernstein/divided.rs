use serde::Serialize;

use super::function::BernsteinFunction;
use super::measure::{LevyMeasure, WeightedPoint};
use crate::error::{Error, Result};
use crate::quadrature::GaussRule;

/// Default order of the rule for the w-integral of the pushforward.
pub const DEFAULT_W_ORDER: usize = 32;

/// The first-order divided difference of ψ in coordinate i, an (n+1)-ary
/// Bernstein function
///
/// φᵢ(s, s_{n+1}) = [ψ(s) − ψ(s with sᵢ → s_{n+1})]/(sᵢ − s_{n+1}) − ωᵢ,
///
/// represented by the pushforward of ½ μ(dv) dw, w ∈ [−vᵢ, vᵢ], under
/// uᵢ = (vᵢ + w)/2, u_{n+1} = (vᵢ − w)/2.
#[derive(Debug, Clone, Serialize)]
pub struct DividedDifference {
    source: BernsteinFunction,
    index: usize,
    omega: f64,
    measure: LevyMeasure,
    w_order: usize,
}

impl DividedDifference {
    pub fn new(source: &BernsteinFunction, index: usize, w_order: usize) -> Result<Self> {
        let n = source.arity();
        let omega = source.omega(index)?;
        if !omega.is_finite() {
            return Err(Error::MomentInfinite { coordinate: index });
        }
        let rule = GaussRule::new(w_order)?;
        let mut measure = LevyMeasure::zero(n + 1)?;
        for node in source.measure().nodes() {
            let vi = node.point[index];
            // nodes off the i-th axis span a degenerate w-interval
            if vi <= 0.0 {
                continue;
            }
            for (w, weight) in rule.on_interval(-vi, vi) {
                let mut u = node.point.clone();
                u[index] = 0.5 * (vi + w);
                u.push(0.5 * (vi - w));
                measure.push_atom(WeightedPoint::new(u, 0.5 * node.mass * weight))?;
            }
        }
        Ok(Self {
            source: source.clone(),
            index,
            omega,
            measure,
            w_order,
        })
    }

    pub fn source(&self) -> &BernsteinFunction {
        &self.source
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn measure(&self) -> &LevyMeasure {
        &self.measure
    }

    pub fn w_order(&self) -> usize {
        self.w_order
    }

    /// Evaluation through the pushforward measure at the (n+1)-vector s.
    pub fn eval(&self, s: &[f64]) -> Result<f64> {
        let n = self.source.arity();
        if s.len() != n + 1 {
            return Err(Error::ArityMismatch {
                expected: n + 1,
                got: s.len(),
            });
        }
        if s.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite(format!("argument {s:?}")));
        }
        if s.iter().any(|x| *x > 0.0) {
            return Err(Error::Domain(format!("argument {s:?} has a positive component")));
        }
        Ok(self
            .measure
            .nodes()
            .map(|node| node.mass * node.dot(s).exp_m1())
            .sum())
    }

    /// The defining difference quotient evaluated through ψ itself, with
    /// the diagonal sᵢ = s_{n+1} handled by the partial derivative.
    pub fn direct(&self, s: &[f64]) -> Result<f64> {
        let n = self.source.arity();
        if s.len() != n + 1 {
            return Err(Error::ArityMismatch {
                expected: n + 1,
                got: s.len(),
            });
        }
        let base = &s[..n];
        let extra = s[n];
        let i = self.index;
        if base[i] == extra {
            return Ok(self.source.partial_deriv(i, base)? - self.omega);
        }
        let mut swapped = base.to_vec();
        swapped[i] = extra;
        let quotient =
            (self.source.eval(base)? - self.source.eval(&swapped)?) / (base[i] - extra);
        Ok(quotient - self.omega)
    }

    pub fn as_function(&self) -> Result<BernsteinFunction> {
        BernsteinFunction::new(0.0, vec![0.0; self.source.arity() + 1], self.measure.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bernstein::catalog::{dirac, frac_power, DensityOptions};

    #[test]
    fn vanishes_at_origin() {
        let psi = dirac(vec![1.0, 0.5], 2.0).unwrap();
        let dd = DividedDifference::new(&psi, 0, DEFAULT_W_ORDER).unwrap();
        assert!(dd.eval(&[0.0, 0.0, 0.0]).unwrap().abs() < 1e-15);
    }

    #[test]
    fn rejects_infinite_moment() {
        let psi = frac_power(0.5, 1, 0, &DensityOptions::default()).unwrap();
        assert!(matches!(
            DividedDifference::new(&psi, 0, DEFAULT_W_ORDER),
            Err(Error::MomentInfinite { coordinate: 0 })
        ));
    }

    #[test]
    fn matches_quotient_for_dirac() {
        let psi = dirac(vec![1.0], 1.0).unwrap();
        let dd = DividedDifference::new(&psi, 0, DEFAULT_W_ORDER).unwrap();
        // (ψ(−1) − ψ(−2))/1 − 1 computed by hand
        let expected = ((-1.0f64).exp() - (-2.0f64).exp()) - 1.0;
        assert!((dd.eval(&[-1.0, -2.0]).unwrap() - expected).abs() < 1e-12);
        assert!((dd.direct(&[-1.0, -2.0]).unwrap() - expected).abs() < 1e-15);
    }
}
