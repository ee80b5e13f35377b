use serde::{Deserialize, Serialize};

use super::function::BernsteinFunction;
use crate::error::{Error, Result};

/// A tensor grid on [lower, upper]ⁿ with `points` samples per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub lower: f64,
    pub upper: f64,
    pub points: usize,
}

impl GridSpec {
    fn axis(&self) -> Result<Vec<f64>> {
        if !(self.lower < self.upper && self.upper <= 0.0 && self.points >= 3) {
            return Err(Error::InvalidParameter(format!(
                "grid must satisfy lower < upper ≤ 0 with at least 3 points, got {self:?}"
            )));
        }
        let h = (self.upper - self.lower) / (self.points - 1) as f64;
        Ok((0..self.points).map(|k| self.lower + h * k as f64).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub check: String,
    pub point: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BernsteinReport {
    pub function: String,
    pub grid: GridSpec,
    pub max_order: usize,
    pub samples: usize,
    pub violations: Vec<Violation>,
}

impl BernsteinReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

fn grid_points(axis: &[f64], n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..axis.len()).map(move |k| {
                    let mut p = prefix.clone();
                    p.push(k);
                    p
                })
            })
            .collect();
    }
    out
}

/// Samples ψ on the grid and checks ψ ≤ 0 together with nonnegativity of
/// forward differences of order one and two in every direction (a
/// finite-difference proxy for absolute monotonicity of the partials).
pub fn validate_bernstein(psi: &BernsteinFunction, grid: GridSpec) -> Result<BernsteinReport> {
    let axis = grid.axis()?;
    let n = psi.arity();
    let m = axis.len();
    let index = grid_points(&axis, n);
    let at = |idx: &[usize]| -> Vec<f64> { idx.iter().map(|&k| axis[k]).collect() };
    let mut values = std::collections::HashMap::new();
    for idx in &index {
        values.insert(idx.clone(), psi.eval(&at(idx))?);
    }
    let mut violations = Vec::new();
    let scale = values.values().fold(1.0f64, |a, v| a.max(v.abs()));
    let tol = 1e-12 * scale;
    let step = |idx: &[usize], dir: usize| -> Option<Vec<usize>> {
        (idx[dir] + 1 < m).then(|| {
            let mut j = idx.to_vec();
            j[dir] += 1;
            j
        })
    };
    for idx in &index {
        let v = values[idx];
        if v > tol {
            violations.push(Violation {
                check: "nonpositive".into(),
                point: at(idx),
                value: v,
            });
        }
        for i in 0..n {
            let Some(ji) = step(idx, i) else { continue };
            let d1 = values[&ji] - v;
            if d1 < -tol {
                violations.push(Violation {
                    check: format!("first difference in s{}", i + 1),
                    point: at(idx),
                    value: d1,
                });
            }
            for j in i..n {
                let Some(jj) = step(idx, j) else { continue };
                let Some(jij) = step(&ji, j) else { continue };
                let d2 = values[&jij] - values[&ji] - values[&jj] + v;
                if d2 < -tol {
                    violations.push(Violation {
                        check: format!("second difference in s{} s{}", i + 1, j + 1),
                        point: at(idx),
                        value: d2,
                    });
                }
            }
        }
    }
    Ok(BernsteinReport {
        function: psi.label(),
        grid,
        max_order: 2,
        samples: index.len(),
        violations,
    })
}
