use serde::{Deserialize, Serialize};

use super::measure::LevyMeasure;
use crate::error::{Error, Result};

/// Identifies a built-in Bernstein function so that closed forms are
/// available as oracles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CatalogTag {
    /// ψ(s) = mass·(e^{s·v₀} − 1).
    Dirac { point: Vec<f64>, mass: f64 },
    /// ψ(s) = −(−s_j)^α.
    FracPower {
        alpha: f64,
        arity: usize,
        coordinate: usize,
    },
    /// ψ(s) = log λ − log(λ − s_j).
    LogResolvent {
        lambda: f64,
        arity: usize,
        coordinate: usize,
    },
    /// ψ(s) = λ^α − (λ − s_j)^α.
    TemperedStable {
        alpha: f64,
        lambda: f64,
        arity: usize,
        coordinate: usize,
    },
    Sum { terms: Vec<CatalogTag> },
    Scale { factor: f64, inner: Box<CatalogTag> },
}

impl CatalogTag {
    pub fn label(&self) -> String {
        match self {
            CatalogTag::Dirac { point, mass } => format!("dirac(v0={point:?}, mass={mass})"),
            CatalogTag::FracPower {
                alpha, coordinate, ..
            } => format!("frac_power(alpha={alpha}, coordinate={coordinate})"),
            CatalogTag::LogResolvent {
                lambda, coordinate, ..
            } => format!("log_resolvent(lambda={lambda}, coordinate={coordinate})"),
            CatalogTag::TemperedStable {
                alpha,
                lambda,
                coordinate,
                ..
            } => format!("tempered_stable(alpha={alpha}, lambda={lambda}, coordinate={coordinate})"),
            CatalogTag::Sum { terms } => {
                let inner: Vec<String> = terms.iter().map(|t| t.label()).collect();
                format!("sum({})", inner.join(", "))
            }
            CatalogTag::Scale { factor, inner } => format!("{factor}*{}", inner.label()),
        }
    }

    /// Closed-form value at s (components ≤ 0).
    pub fn closed_form(&self, s: &[f64]) -> f64 {
        match self {
            CatalogTag::Dirac { point, mass } => {
                let dot: f64 = point.iter().zip(s).map(|(v, s)| v * s).sum();
                mass * dot.exp_m1()
            }
            CatalogTag::FracPower {
                alpha, coordinate, ..
            } => -(-s[*coordinate]).powf(*alpha),
            CatalogTag::LogResolvent {
                lambda, coordinate, ..
            } => -(-s[*coordinate] / lambda).ln_1p(),
            CatalogTag::TemperedStable {
                alpha,
                lambda,
                coordinate,
                ..
            } => lambda.powf(*alpha) - (lambda - s[*coordinate]).powf(*alpha),
            CatalogTag::Sum { terms } => terms.iter().map(|t| t.closed_form(s)).sum(),
            CatalogTag::Scale { factor, inner } => factor * inner.closed_form(s),
        }
    }

    /// Closed-form ∂ψ/∂s_i; `+∞` where the derivative blows up.
    pub fn closed_partial(&self, i: usize, s: &[f64]) -> f64 {
        match self {
            CatalogTag::Dirac { point, mass } => {
                let dot: f64 = point.iter().zip(s).map(|(v, s)| v * s).sum();
                mass * point[i] * dot.exp()
            }
            CatalogTag::FracPower {
                alpha, coordinate, ..
            } => {
                if i != *coordinate {
                    0.0
                } else if s[i] == 0.0 {
                    f64::INFINITY
                } else {
                    alpha * (-s[i]).powf(alpha - 1.0)
                }
            }
            CatalogTag::LogResolvent {
                lambda, coordinate, ..
            } => {
                if i != *coordinate {
                    0.0
                } else {
                    1.0 / (lambda - s[i])
                }
            }
            CatalogTag::TemperedStable {
                alpha,
                lambda,
                coordinate,
                ..
            } => {
                if i != *coordinate {
                    0.0
                } else {
                    alpha * (lambda - s[i]).powf(alpha - 1.0)
                }
            }
            CatalogTag::Sum { terms } => terms.iter().map(|t| t.closed_partial(i, s)).sum(),
            CatalogTag::Scale { factor, inner } => factor * inner.closed_partial(i, s),
        }
    }

    /// Closed-form ∂²ψ/∂s_i².
    pub fn closed_second_partial(&self, i: usize, s: &[f64]) -> f64 {
        match self {
            CatalogTag::Dirac { point, mass } => {
                let dot: f64 = point.iter().zip(s).map(|(v, s)| v * s).sum();
                mass * point[i] * point[i] * dot.exp()
            }
            CatalogTag::FracPower {
                alpha, coordinate, ..
            } => {
                if i != *coordinate {
                    0.0
                } else if s[i] == 0.0 {
                    f64::INFINITY
                } else {
                    alpha * (1.0 - alpha) * (-s[i]).powf(alpha - 2.0)
                }
            }
            CatalogTag::LogResolvent {
                lambda, coordinate, ..
            } => {
                if i != *coordinate {
                    0.0
                } else {
                    (lambda - s[i]).powi(-2)
                }
            }
            CatalogTag::TemperedStable {
                alpha,
                lambda,
                coordinate,
                ..
            } => {
                if i != *coordinate {
                    0.0
                } else {
                    alpha * (1.0 - alpha) * (lambda - s[i]).powf(alpha - 2.0)
                }
            }
            CatalogTag::Sum { terms } => terms
                .iter()
                .map(|t| t.closed_second_partial(i, s))
                .sum(),
            CatalogTag::Scale { factor, inner } => factor * inner.closed_second_partial(i, s),
        }
    }
}

/// A nonpositive Bernstein function of n variables given by its Lévy
/// triplet (c₀, c₁, μ):
///
/// ψ(s) = c₀ + c₁·s + ∫ (e^{s·v} − 1) dμ(v),   s ∈ (−∞, 0]ⁿ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BernsteinFunction {
    c0: f64,
    c1: Vec<f64>,
    measure: LevyMeasure,
    tag: Option<CatalogTag>,
}

impl BernsteinFunction {
    pub fn new(c0: f64, c1: Vec<f64>, measure: LevyMeasure) -> Result<Self> {
        if !(c0.is_finite() && c0 <= 0.0) {
            return Err(Error::InvalidTriplet(format!("c0 = {c0} must be finite and ≤ 0")));
        }
        if c1.len() != measure.arity() {
            return Err(Error::ArityMismatch {
                expected: measure.arity(),
                got: c1.len(),
            });
        }
        if c1.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::InvalidTriplet(format!("c1 = {c1:?} must be ≥ 0")));
        }
        Ok(Self {
            c0,
            c1,
            measure,
            tag: None,
        })
    }

    pub(crate) fn with_tag(mut self, tag: CatalogTag) -> Self {
        self.tag = Some(tag);
        self
    }

    pub fn arity(&self) -> usize {
        self.measure.arity()
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn c1(&self) -> &[f64] {
        &self.c1
    }

    pub fn measure(&self) -> &LevyMeasure {
        &self.measure
    }

    pub fn tag(&self) -> Option<&CatalogTag> {
        self.tag.as_ref()
    }

    pub fn label(&self) -> String {
        self.tag
            .as_ref()
            .map(CatalogTag::label)
            .unwrap_or_else(|| format!("triplet(n={}, nodes={})", self.arity(), self.measure.node_count()))
    }

    pub fn is_atomic(&self) -> bool {
        self.measure.is_atomic()
    }

    fn check_arg(&self, s: &[f64]) -> Result<()> {
        if s.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                got: s.len(),
            });
        }
        if s.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite(format!("argument {s:?}")));
        }
        if s.iter().any(|x| *x > 0.0) {
            return Err(Error::Domain(format!("argument {s:?} has a positive component")));
        }
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.arity() {
            return Err(Error::InvalidParameter(format!(
                "index {i} out of range for arity {}",
                self.arity()
            )));
        }
        Ok(())
    }

    /// c₀ + c₁·s + Σ_k m_k (e^{s·v_k} − 1). The origin (s = −0) is an
    /// ordinary argument.
    pub fn eval(&self, s: &[f64]) -> Result<f64> {
        self.check_arg(s)?;
        let linear: f64 = self.c1.iter().zip(s).map(|(c, s)| c * s).sum();
        let integral: f64 = self
            .measure
            .nodes()
            .map(|n| n.mass * n.dot(s).exp_m1())
            .sum();
        Ok(self.c0 + linear + integral)
    }

    /// Error bound of [`eval`](Self::eval) at s against the exact function.
    pub fn eval_budget(&self, s: &[f64]) -> f64 {
        let s_abs = s.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        self.measure.eval_budget(s_abs)
    }

    /// ∂ψ/∂s_i = c₁ⁱ + Σ_k m_k v_{k,i} e^{s·v_k}; at s = 0 this is ωᵢ.
    pub fn partial_deriv(&self, i: usize, s: &[f64]) -> Result<f64> {
        self.check_index(i)?;
        self.check_arg(s)?;
        if !self.measure.first_moment_finite(i) {
            return Err(Error::MomentInfinite { coordinate: i });
        }
        let sum: f64 = self
            .measure
            .nodes()
            .map(|n| n.mass * n.point[i] * n.dot(s).exp())
            .sum();
        Ok(self.c1[i] + sum)
    }

    /// ωᵢ = ∂ψ/∂s_i at the origin.
    pub fn omega(&self, i: usize) -> Result<f64> {
        self.partial_deriv(i, &vec![0.0; self.arity()])
    }

    pub fn moment_budget(&self, i: usize) -> Result<f64> {
        self.check_index(i)?;
        self.measure
            .moment_budget(i)
            .ok_or(Error::MomentInfinite { coordinate: i })
    }

    pub fn second_partial(&self, i: usize, s: &[f64]) -> Result<f64> {
        self.check_index(i)?;
        self.check_arg(s)?;
        if !self.measure.second_moment_finite(i) {
            return Err(Error::SecondMomentInfinite { coordinate: i });
        }
        Ok(self
            .measure
            .nodes()
            .map(|n| n.mass * n.point[i] * n.point[i] * n.dot(s).exp())
            .sum())
    }

    pub fn first_moments_finite(&self) -> bool {
        (0..self.arity()).all(|i| self.measure.first_moment_finite(i))
    }

    pub fn second_moments_finite(&self) -> bool {
        (0..self.arity()).all(|i| self.measure.second_moment_finite(i))
    }

    /// The sum of two functions of the same arity.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        let measure = self.measure.merged(&other.measure)?;
        let c1 = self.c1.iter().zip(&other.c1).map(|(a, b)| a + b).collect();
        let mut out = Self::new(self.c0 + other.c0, c1, measure)?;
        if let (Some(a), Some(b)) = (&self.tag, &other.tag) {
            out.tag = Some(CatalogTag::Sum {
                terms: vec![a.clone(), b.clone()],
            });
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let measure = self.measure.scaled(factor)?;
        let mut out = Self::new(
            self.c0 * factor,
            self.c1.iter().map(|c| c * factor).collect(),
            measure,
        )?;
        out.tag = self.tag.as_ref().map(|t| CatalogTag::Scale {
            factor,
            inner: Box::new(t.clone()),
        });
        Ok(out)
    }
}
