use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::semigroups::GeneratorTuple;

/// Atoms closer than this (relative to 1 + |t|) are merged.
pub const MERGE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftAtom {
    pub point: Vec<f64>,
    pub weight: i64,
}

/// The atomic spectral shift η_{A,B} = Σ δ_{−λ⁽ᵏ⁾} − Σ δ_{−μ⁽ᵏ⁾} on ℝ₊ⁿ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralShift {
    arity: usize,
    atoms: Vec<ShiftAtom>,
    spectrum_a: Vec<Vec<f64>>,
    spectrum_b: Vec<Vec<f64>>,
}

fn close(p: &[f64], q: &[f64]) -> bool {
    p.iter()
        .zip(q)
        .all(|(a, b)| (a - b).abs() <= MERGE_TOLERANCE * (1.0 + a.abs().max(b.abs())))
}

fn lex(p: &[f64], q: &[f64]) -> std::cmp::Ordering {
    p.iter()
        .zip(q)
        .map(|(a, b)| a.total_cmp(b))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

fn merge(raw: Vec<ShiftAtom>) -> Vec<ShiftAtom> {
    let mut out: Vec<ShiftAtom> = Vec::new();
    for atom in raw {
        match out.iter_mut().find(|a| close(&a.point, &atom.point)) {
            Some(a) => a.weight += atom.weight,
            None => out.push(atom),
        }
    }
    out.retain(|a| a.weight != 0);
    out.sort_by(|a, b| lex(&a.point, &b.point));
    out
}

/// Joint eigenvalues of a tuple as real nonpositive tuples.
pub fn real_spectrum(t: &GeneratorTuple) -> Result<Vec<Vec<f64>>> {
    let spec = match t.planted_spectrum() {
        Some(s) => s.clone(),
        None => t.joint_spectrum()?,
    };
    let tuples = spec.real_tuples(1e-10)?;
    let scale = tuples.iter().flatten().fold(1.0f64, |m, x| m.max(x.abs()));
    for tup in &tuples {
        if tup.iter().any(|x| *x > 1e-12 * scale) {
            return Err(Error::Spectrum(format!(
                "joint eigenvalue {tup:?} leaves (−∞, 0]ⁿ"
            )));
        }
    }
    Ok(tuples
        .into_iter()
        .map(|t| t.into_iter().map(|x| x.min(0.0)).collect())
        .collect())
}

impl SpectralShift {
    pub fn from_spectra(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch(format!(
                "dimensions {} and {} differ",
                a.len(),
                b.len()
            )));
        }
        let arity = a.first().or(b.first()).map(Vec::len).unwrap_or(0);
        if a.iter().chain(b).any(|t| t.len() != arity) {
            return Err(Error::ArityMismatch {
                expected: arity,
                got: a.iter().chain(b).map(Vec::len).find(|l| *l != arity).unwrap_or(0),
            });
        }
        if a.iter().chain(b).flatten().any(|x| !(x.is_finite() && *x <= 0.0)) {
            return Err(Error::Spectrum("eigenvalues must be real and ≤ 0".into()));
        }
        let neg = |t: &Vec<f64>| t.iter().map(|x| -x + 0.0).collect::<Vec<_>>();
        let raw = a
            .iter()
            .map(|t| ShiftAtom { point: neg(t), weight: 1 })
            .chain(b.iter().map(|t| ShiftAtom { point: neg(t), weight: -1 }))
            .collect();
        Ok(Self {
            arity,
            atoms: merge(raw),
            spectrum_a: a.to_vec(),
            spectrum_b: b.to_vec(),
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn atoms(&self) -> &[ShiftAtom] {
        &self.atoms
    }

    pub fn spectrum_a(&self) -> &[Vec<f64>] {
        &self.spectrum_a
    }

    pub fn spectrum_b(&self) -> &[Vec<f64>] {
        &self.spectrum_b
    }

    pub fn total_weight(&self) -> i64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// ⟨η, e^{−v·t}⟩ = Σ wₖ e^{−v·tₖ}, summed as Σ wₖ (e^{−v·tₖ} − 1) when
    /// the weights cancel.
    pub fn laplace(&self, v: &[f64]) -> Result<f64> {
        if v.len() != self.arity && !self.atoms.is_empty() {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: v.len(),
            });
        }
        let balanced = self.total_weight() == 0;
        Ok(self
            .atoms
            .iter()
            .map(|a| {
                let x: f64 = -a.point.iter().zip(v).map(|(t, v)| t * v).sum::<f64>();
                a.weight as f64 * if balanced { x.exp_m1() } else { x.exp() }
            })
            .sum())
    }

    /// Σ wₖ ∏ᵢ 1/(λᵢ + t_{k,i}).
    pub fn resolvent_pairing(&self, lambda: &[Complex64]) -> Complex64 {
        self.atoms
            .iter()
            .map(|a| {
                a.point
                    .iter()
                    .zip(lambda)
                    .map(|(t, l)| 1.0 / (l + t))
                    .product::<Complex64>()
                    * a.weight as f64
            })
            .sum()
    }

    /// η_{B,A}.
    pub fn negated(&self) -> Self {
        Self {
            arity: self.arity,
            atoms: self
                .atoms
                .iter()
                .map(|a| ShiftAtom {
                    point: a.point.clone(),
                    weight: -a.weight,
                })
                .collect(),
            spectrum_a: self.spectrum_b.clone(),
            spectrum_b: self.spectrum_a.clone(),
        }
    }

    /// η_{A,B} + η_{B,C} = η_{A,C}.
    pub fn chained(&self, next: &Self) -> Result<Self> {
        if next.arity != self.arity && !(self.is_empty() || next.is_empty()) {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: next.arity,
            });
        }
        let raw = self.atoms.iter().chain(&next.atoms).cloned().collect();
        Ok(Self {
            arity: self.arity,
            atoms: merge(raw),
            spectrum_a: self.spectrum_a.clone(),
            spectrum_b: next.spectrum_b.clone(),
        })
    }

    pub fn shift_function(&self) -> Result<ShiftFunction> {
        if self.arity != 1 && !self.atoms.is_empty() {
            return Err(Error::InvalidParameter(
                "the shift function exists for single generators only".into(),
            ));
        }
        Ok(ShiftFunction {
            jumps: self.atoms.iter().map(|a| a.point[0]).collect(),
            weights: self.atoms.iter().map(|a| a.weight).collect(),
        })
    }
}

/// η_{A,B} from the joint spectra of two tuples.
pub fn spectral_shift(a: &GeneratorTuple, b: &GeneratorTuple) -> Result<SpectralShift> {
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
    SpectralShift::from_spectra(&real_spectrum(a)?, &real_spectrum(b)?)
}

/// ξ(t) = Σ_{tₖ ≤ t} wₖ, the right-continuous antiderivative of η for
/// n = 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftFunction {
    pub jumps: Vec<f64>,
    pub weights: Vec<i64>,
}

impl ShiftFunction {
    pub fn eval(&self, t: f64) -> f64 {
        self.jumps
            .iter()
            .zip(&self.weights)
            .filter(|(j, _)| **j <= t)
            .map(|(_, w)| *w as f64)
            .sum()
    }

    pub fn total_weight(&self) -> i64 {
        self.weights.iter().sum()
    }

    pub fn abs_weight(&self) -> f64 {
        self.weights.iter().map(|w| w.abs() as f64).sum()
    }

    pub fn distance_to_jump(&self, t: f64) -> f64 {
        self.jumps
            .iter()
            .map(|j| (j - t).abs())
            .fold(f64::INFINITY, f64::min)
    }

    fn require_balanced(&self) -> Result<()> {
        if self.total_weight() != 0 {
            return Err(Error::DimensionMismatch(format!(
                "shift weights sum to {}",
                self.total_weight()
            )));
        }
        Ok(())
    }

    /// ∫ ξ(t) e^{−ut} dt = Σ wₖ e^{−u tₖ}/u for u > 0.
    pub fn pairing_exp(&self, u: f64) -> f64 {
        self.jumps
            .iter()
            .zip(&self.weights)
            .map(|(t, w)| *w as f64 * (-u * t).exp())
            .sum::<f64>()
            / u
    }

    /// ∫ ξ(t) dt = −Σ wₖ tₖ.
    pub fn integral(&self) -> Result<f64> {
        self.require_balanced()?;
        Ok(-self
            .jumps
            .iter()
            .zip(&self.weights)
            .map(|(t, w)| *w as f64 * t)
            .sum::<f64>())
    }

    /// ⟨ξ, 1/(t + z)⟩ = −Σ wₖ log(z + tₖ) with principal logarithms.
    pub fn stieltjes_log(&self, z: Complex64) -> Result<Complex64> {
        self.require_balanced()?;
        Ok(-self
            .jumps
            .iter()
            .zip(&self.weights)
            .map(|(t, w)| (z + t).ln() * *w as f64)
            .sum::<Complex64>())
    }

    /// d/dz of [`stieltjes_log`](Self::stieltjes_log): −Σ wₖ/(z + tₖ).
    pub fn stieltjes_log_derivative(&self, z: Complex64) -> Complex64 {
        -self
            .jumps
            .iter()
            .zip(&self.weights)
            .map(|(t, w)| *w as f64 / (z + t))
            .sum::<Complex64>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_spectra_cancel() {
        let s = vec![vec![-1.0], vec![-2.0]];
        let eta = SpectralShift::from_spectra(&s, &s).unwrap();
        assert!(eta.is_empty());
    }

    #[test]
    fn diagonal_pair_atoms() {
        let a = vec![vec![-1.0], vec![-2.0]];
        let b = vec![vec![-1.5], vec![-2.5]];
        let eta = SpectralShift::from_spectra(&a, &b).unwrap();
        let pts: Vec<(f64, i64)> = eta.atoms().iter().map(|x| (x.point[0], x.weight)).collect();
        assert_eq!(pts, vec![(1.0, 1), (1.5, -1), (2.0, 1), (2.5, -1)]);
        let xi = eta.shift_function().unwrap();
        assert_eq!(xi.eval(0.5), 0.0);
        assert_eq!(xi.eval(1.2), 1.0);
        assert_eq!(xi.eval(1.5), 0.0);
        assert_eq!(xi.eval(10.0), 0.0);
        assert!((xi.integral().unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn positive_eigenvalue_rejected() {
        let r = SpectralShift::from_spectra(&[vec![0.5]], &[vec![-1.0]]);
        assert!(matches!(r, Err(Error::Spectrum(_))));
    }
}
