//! Gauss–Legendre rules: fixed-order rules on an interval and composite
//! rules on a logarithmic grid, which is how every Lévy and subordination
//! density in this crate is turned into a finite node set.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

use crate::error::{Error, Result};

/// A Gauss–Legendre rule on the reference interval [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussRule {
    pairs: Vec<(f64, f64)>,
}

impl GaussRule {
    pub fn new(order: usize) -> Result<Self> {
        let order = NonZeroUsize::new(order)
            .filter(|o| o.get() >= 2)
            .ok_or_else(|| Error::InvalidParameter("quadrature order must be at least 2".into()))?;
        let rule = GaussLegendre::new(order);
        let mut pairs = rule.as_node_weight_pairs().to_vec();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self { pairs })
    }

    pub fn order(&self) -> usize {
        self.pairs.len()
    }

    /// Nodes and weights mapped onto [a, b].
    pub fn on_interval(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.pairs.iter().map(move |&(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.on_interval(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// Composite rule in the variable x = ln u over [ln lo, ln hi].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogGrid {
    pub lo: f64,
    pub hi: f64,
    pub panel_width: f64,
    pub order: usize,
}

impl LogGrid {
    pub fn panels(&self) -> usize {
        (((self.hi.ln() - self.lo.ln()) / self.panel_width).ceil() as usize).max(1)
    }

    pub fn refined(&self) -> Self {
        Self {
            panel_width: 0.5 * self.panel_width,
            ..*self
        }
    }

    /// Points u with weights for ∫ f(u) ρ(u) du, where `u_density(u)` must
    /// return u·ρ(u) (the Jacobian of the log substitution is folded in).
    pub fn nodes(&self, u_density: impl Fn(f64) -> f64) -> Result<Vec<(f64, f64)>> {
        if !(self.lo > 0.0 && self.hi > self.lo && self.panel_width > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "log grid needs 0 < lo < hi, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        let rule = GaussRule::new(self.order)?;
        let (a, b) = (self.lo.ln(), self.hi.ln());
        let panels = self.panels();
        let h = (b - a) / panels as f64;
        let mut out = Vec::with_capacity(panels * rule.order());
        for p in 0..panels {
            let left = a + h * p as f64;
            for (x, w) in rule.on_interval(left, left + h) {
                let u = x.exp();
                let weight = w * u_density(u);
                if weight > 0.0 && weight.is_finite() {
                    out.push((u, weight));
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = GaussRule::new(8).unwrap();
        // degree 15 is exact for 8 points
        let v = rule.integrate(-1.0, 2.0, |x| x.powi(15));
        let exact = (2f64.powi(16) - 1.0) / 16.0;
        assert!((v - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn rule_rejects_tiny_order() {
        assert!(GaussRule::new(1).is_err());
        assert!(GaussRule::new(0).is_err());
    }

    #[test]
    fn log_grid_integrates_exponential_density() {
        // ∫_0^∞ e^{-u} du = 1, truncated to [1e-12, 60]
        let grid = LogGrid {
            lo: 1e-12,
            hi: 60.0,
            panel_width: 1.0,
            order: 16,
        };
        let nodes = grid.nodes(|u| u * (-u).exp()).unwrap();
        let total: f64 = nodes.iter().map(|(_, w)| w).sum();
        assert!((total - 1.0).abs() < 1e-11);
    }
}
