//! Tuples of commuting matrix generators and the n-parameter semigroups
//! they generate.

mod planted;

pub use planted::{
    random_basis, random_pair, BasisKind, BasisSpec, PairSpec, TupleSpec,
};

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};

/// Default relative tolerance for ‖AᵢAⱼ − AⱼAᵢ‖_F.
pub const COMMUTE_TOLERANCE: f64 = 1e-10;
/// Grid exponents k for t = 2^k in the bound estimate.
pub const BOUND_GRID: std::ops::RangeInclusive<i32> = -10..=10;
/// An estimate above this is treated as an unbounded semigroup.
pub const MAX_BOUND: f64 = 1e6;
/// Off-diagonal leakage threshold of the joint diagonalization.
pub const LEAKAGE_TOLERANCE: f64 = 1e-8;
const JOINT_ATTEMPTS: u64 = 3;
const MAX_BASIS_CONDITION: f64 = 1e8;

/// Joint eigenvalues: `tuples[k][j]` is the eigenvalue of Aⱼ on column k
/// of `basis`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSpectrum {
    pub basis: CMatrix,
    pub tuples: Vec<Vec<Complex64>>,
}

impl JointSpectrum {
    pub fn arity(&self) -> usize {
        self.tuples.first().map(Vec::len).unwrap_or(0)
    }

    /// P·diag(λⱼ)·P⁻¹.
    pub fn reconstruct(&self, j: usize) -> Result<CMatrix> {
        let values: Vec<Complex64> = self.tuples.iter().map(|t| t[j]).collect();
        Ok(&self.basis * linalg::diag(&values) * linalg::inverse(&self.basis)?)
    }

    /// P·diag(f(λ⁽ᵏ⁾))·P⁻¹ for a scalar function of the joint eigenvalue.
    pub fn apply(&self, f: impl Fn(&[Complex64]) -> Complex64) -> Result<CMatrix> {
        let values: Vec<Complex64> = self.tuples.iter().map(|t| f(t)).collect();
        Ok(&self.basis * linalg::diag(&values) * linalg::inverse(&self.basis)?)
    }

    /// Real parts of the tuples, failing when an imaginary part exceeds
    /// `tol` relative to the spectral scale.
    pub fn real_tuples(&self, tol: f64) -> Result<Vec<Vec<f64>>> {
        let scale = self
            .tuples
            .iter()
            .flatten()
            .fold(1.0f64, |m, z| m.max(z.norm()));
        self.tuples
            .iter()
            .map(|t| {
                t.iter()
                    .map(|z| {
                        if z.im.abs() > tol * scale {
                            Err(Error::Spectrum(format!("eigenvalue {z} is not real")))
                        } else {
                            Ok(z.re)
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

/// n commuting d×d generators of uniformly bounded semigroups.
#[derive(Debug, Clone)]
pub struct GeneratorTuple {
    matrices: Vec<CMatrix>,
    bound_estimate: f64,
    bound_certificate: Option<f64>,
    growth_exponents: Vec<u32>,
    commute_tolerance: f64,
    planted: Option<JointSpectrum>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckLine {
    fn at_most(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            pass: value <= threshold,
        }
    }
}

/// Outcome of [`GeneratorTuple::validate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TupleReport {
    pub arity: usize,
    pub dimension: usize,
    pub bound_estimate: f64,
    pub bound_certificate: Option<f64>,
    pub spectral_abscissas: Vec<f64>,
    pub checks: Vec<CheckLine>,
}

impl TupleReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn semigroup_norms(a: &CMatrix) -> Vec<f64> {
    BOUND_GRID
        .map(|k| linalg::op_norm(&linalg::expm(&(a * c(2f64.powi(k))))))
        .collect()
}

impl GeneratorTuple {
    pub fn new(matrices: Vec<CMatrix>) -> Result<Self> {
        let Some(first) = matrices.first() else {
            return Err(Error::InvalidParameter("a tuple needs at least one generator".into()));
        };
        let d = first.nrows();
        for (j, m) in matrices.iter().enumerate() {
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "generator {j} is {}x{}, expected {d}x{d}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            if !linalg::is_finite(m) {
                return Err(Error::NonFinite(format!("generator {j}")));
            }
        }
        let bound_estimate = matrices
            .iter()
            .flat_map(semigroup_norms)
            .fold(1.0f64, f64::max);
        let n = matrices.len();
        Ok(Self {
            matrices,
            bound_estimate,
            bound_certificate: None,
            growth_exponents: vec![0; n],
            commute_tolerance: COMMUTE_TOLERANCE,
            planted: None,
        })
    }

    /// Aⱼ = P·diag(λⱼ)·P⁻¹ from a basis and d eigenvalue tuples. The bound
    /// κ(P) is recorded as a certificate when every eigenvalue lies in the
    /// closed left half-plane.
    pub fn planted(basis: CMatrix, tuples: Vec<Vec<Complex64>>) -> Result<Self> {
        let d = basis.nrows();
        if basis.ncols() != d || tuples.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "basis is {}x{} with {} eigenvalue tuples",
                basis.nrows(),
                basis.ncols(),
                tuples.len()
            )));
        }
        let n = tuples.first().map(Vec::len).unwrap_or(0);
        if n == 0 || tuples.iter().any(|t| t.len() != n) {
            return Err(Error::ArityMismatch {
                expected: n.max(1),
                got: tuples.iter().map(Vec::len).min().unwrap_or(0),
            });
        }
        let spectrum = JointSpectrum { basis, tuples };
        let matrices = (0..n)
            .map(|j| spectrum.reconstruct(j))
            .collect::<Result<Vec<_>>>()?;
        let mut tuple = Self::new(matrices)?;
        if spectrum.tuples.iter().flatten().all(|z| z.re <= 0.0) {
            tuple.bound_certificate = Some(linalg::condition_number(&spectrum.basis).max(1.0));
        }
        tuple.planted = Some(spectrum);
        Ok(tuple)
    }

    pub fn with_commute_tolerance(mut self, tol: f64) -> Self {
        self.commute_tolerance = tol;
        self
    }

    pub fn with_growth_exponents(mut self, m: Vec<u32>) -> Result<Self> {
        if m.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                got: m.len(),
            });
        }
        self.growth_exponents = m;
        Ok(self)
    }

    pub fn arity(&self) -> usize {
        self.matrices.len()
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].nrows()
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    pub fn matrix(&self, j: usize) -> &CMatrix {
        &self.matrices[j]
    }

    pub fn bound_estimate(&self) -> f64 {
        self.bound_estimate
    }

    pub fn bound_certificate(&self) -> Option<f64> {
        self.bound_certificate
    }

    /// M_A used by the bound theorems: the certificate when known, else the
    /// grid estimate.
    pub fn bound(&self) -> f64 {
        self.bound_certificate.unwrap_or(self.bound_estimate)
    }

    pub fn growth_exponents(&self) -> &[u32] {
        &self.growth_exponents
    }

    pub fn commute_tolerance(&self) -> f64 {
        self.commute_tolerance
    }

    pub fn planted_spectrum(&self) -> Option<&JointSpectrum> {
        self.planted.as_ref()
    }

    fn commutator_checks(&self) -> Vec<CheckLine> {
        let mut out = Vec::new();
        for i in 0..self.arity() {
            for j in i + 1..self.arity() {
                let (a, b) = (&self.matrices[i], &self.matrices[j]);
                let comm = linalg::frobenius(&(a * b - b * a));
                let threshold = self.commute_tolerance
                    * (1.0 + linalg::frobenius(a) * linalg::frobenius(b));
                out.push(CheckLine::at_most(
                    format!("commutator A{} A{}", i + 1, j + 1),
                    comm,
                    threshold,
                ));
            }
        }
        out
    }

    /// ‖[Aᵢ, Aⱼ]‖ within tolerance for every pair.
    pub fn commutes(&self) -> bool {
        self.commutator_checks().iter().all(|c| c.pass)
    }

    pub fn validate(&self) -> Result<TupleReport> {
        let mut checks = self.commutator_checks();
        let mut abscissas = Vec::new();
        for (j, a) in self.matrices.iter().enumerate() {
            let (values, _) = linalg::eig(a)?;
            let abscissa = values.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
            abscissas.push(abscissa);
            let scale = 1.0 + linalg::op_norm(a);
            checks.push(CheckLine::at_most(
                format!("spectral abscissa A{}", j + 1),
                abscissa,
                1e-10 * scale,
            ));
            let norms = semigroup_norms(a);
            let last = *norms.last().unwrap();
            let earlier = norms[..norms.len() - 1]
                .iter()
                .copied()
                .fold(1.0f64, f64::max);
            // a bounded semigroup cannot still be growing at the end of the grid
            checks.push(CheckLine::at_most(
                format!("growth at t = 2^10 for A{}", j + 1),
                last / earlier,
                1.01,
            ));
        }
        checks.push(CheckLine::at_most("bound estimate", self.bound_estimate, MAX_BOUND));
        if let Some(spec) = &self.planted {
            let mut worst = 0.0f64;
            for j in 0..self.arity() {
                let r = spec.reconstruct(j)?;
                let rel = linalg::frobenius(&(&r - &self.matrices[j]))
                    / linalg::frobenius(&self.matrices[j]).max(1e-300);
                worst = worst.max(rel);
            }
            checks.push(CheckLine::at_most("joint spectrum reconstruction", worst, 1e-10));
        }
        Ok(TupleReport {
            arity: self.arity(),
            dimension: self.dim(),
            bound_estimate: self.bound_estimate,
            bound_certificate: self.bound_certificate,
            spectral_abscissas: abscissas,
            checks,
        })
    }

    fn check_time(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                got: u.len(),
            });
        }
        if u.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::Domain(format!("semigroup parameter {u:?} must be ≥ 0")));
        }
        Ok(())
    }

    /// T_A(u) = exp(u₁A₁)⋯exp(uₙAₙ).
    pub fn semigroup_at(&self, u: &[f64]) -> Result<CMatrix> {
        self.check_time(u)?;
        let mut out = linalg::identity(self.dim());
        for (a, &t) in self.matrices.iter().zip(u) {
            if t != 0.0 {
                out *= linalg::expm(&(a * c(t)));
            }
        }
        Ok(out)
    }

    /// T_A(u) − I, accumulated as D ← D + (I + D)(exp(uⱼAⱼ) − I) so that
    /// small u loses no digits.
    pub fn semigroup_minus_identity(&self, u: &[f64]) -> Result<CMatrix> {
        self.check_time(u)?;
        let d = self.dim();
        let mut acc = CMatrix::zeros(d, d);
        for (a, &t) in self.matrices.iter().zip(u) {
            if t != 0.0 {
                let y = linalg::expm1(&(a * c(t)));
                acc = &acc + (linalg::identity(d) + &acc) * y;
            }
        }
        Ok(acc)
    }

    /// T_A(u) through the planted eigendecomposition, for cross-checks.
    pub fn semigroup_at_spectral(&self, u: &[f64]) -> Option<Result<CMatrix>> {
        let spec = self.planted.as_ref()?;
        Some(spec.apply(|lam| {
            lam.iter()
                .zip(u)
                .map(|(l, t)| l * t)
                .sum::<Complex64>()
                .exp()
        }))
    }

    /// R(λ, Aᵢ) = (λI − Aᵢ)⁻¹.
    pub fn resolvent(&self, i: usize, lambda: Complex64) -> Result<CMatrix> {
        if i >= self.arity() {
            return Err(Error::InvalidParameter(format!("index {i} out of range")));
        }
        let shifted = linalg::identity(self.dim()) * lambda - &self.matrices[i];
        linalg::inverse(&shifted)
            .map_err(|_| Error::Singular(format!("λ = {lambda} is in the spectrum of A{}", i + 1)))
    }

    /// ∏ᵢ R(λᵢ, Aᵢ).
    pub fn resolvent_product(&self, lambda: &[Complex64]) -> Result<CMatrix> {
        if lambda.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                got: lambda.len(),
            });
        }
        let mut out = linalg::identity(self.dim());
        for (i, l) in lambda.iter().enumerate() {
            out *= self.resolvent(i, *l)?;
        }
        Ok(out)
    }

    /// Simultaneous diagonalization through a random real combination
    /// Σ cⱼAⱼ, verified by the off-diagonal leakage of P⁻¹AⱼP. Tuples are
    /// sorted lexicographically.
    pub fn joint_spectrum(&self) -> Result<JointSpectrum> {
        let mut last_err = Error::NotDiagonalizable("no attempt made".into());
        for attempt in 0..JOINT_ATTEMPTS {
            let mut rng = ChaCha8Rng::seed_from_u64(0x6a01_7e5c + attempt);
            let mut combo = CMatrix::zeros(self.dim(), self.dim());
            for a in &self.matrices {
                combo += a * c(rng.random_range(0.5..1.5));
            }
            match self.try_diagonalize(&combo) {
                Ok(js) => return Ok(js),
                Err(e) => last_err = e,
            }
        }
        Err(last_err)
    }

    fn try_diagonalize(&self, combo: &CMatrix) -> Result<JointSpectrum> {
        let (_, basis) = linalg::eig(combo)?;
        let cond = linalg::condition_number(&basis);
        if !(cond <= MAX_BASIS_CONDITION) {
            return Err(Error::NotDiagonalizable(format!(
                "eigenvector basis has condition number {cond:e}"
            )));
        }
        let inv = linalg::inverse(&basis)
            .map_err(|e| Error::NotDiagonalizable(format!("eigenvector basis: {e}")))?;
        let d = self.dim();
        let mut tuples = vec![Vec::with_capacity(self.arity()); d];
        for (j, a) in self.matrices.iter().enumerate() {
            let m = &inv * a * &basis;
            let scale = linalg::op_norm(a);
            let mut leak = 0.0f64;
            for r in 0..d {
                for col in 0..d {
                    if r != col {
                        leak = leak.max(m[(r, col)].norm());
                    }
                }
            }
            if leak > LEAKAGE_TOLERANCE * scale {
                return Err(Error::NotDiagonalizable(format!(
                    "off-diagonal leakage {leak:e} for A{} (norm {scale:e})",
                    j + 1
                )));
            }
            for (k, t) in tuples.iter_mut().enumerate() {
                t.push(m[(k, k)]);
            }
        }
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&x, &y| {
            tuples[x]
                .iter()
                .zip(&tuples[y])
                .map(|(a, b)| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let sorted_basis = CMatrix::from_fn(d, d, |r, col| basis[(r, order[col])]);
        let sorted = order.iter().map(|&k| tuples[k].clone()).collect();
        Ok(JointSpectrum {
            basis: sorted_basis,
            tuples: sorted,
        })
    }

    fn rebuilt(&self, matrices: Vec<CMatrix>) -> Result<Self> {
        let mut out = Self::new(matrices)?;
        out.commute_tolerance = self.commute_tolerance;
        Ok(out)
    }

    /// The tuple with Aᵢ replaced by `m`.
    pub fn with_replaced(&self, i: usize, m: CMatrix) -> Result<Self> {
        let mut matrices = self.matrices.clone();
        if i >= matrices.len() {
            return Err(Error::InvalidParameter(format!("index {i} out of range")));
        }
        matrices[i] = m;
        self.rebuilt(matrices)
    }

    /// (A₁, …, Aₙ, m).
    pub fn extended(&self, m: CMatrix) -> Result<Self> {
        let mut matrices = self.matrices.clone();
        matrices.push(m);
        self.rebuilt(matrices)
    }

    /// A + h·C.
    pub fn perturbed(&self, h: f64, directions: &[CMatrix]) -> Result<Self> {
        if directions.len() != self.arity() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                got: directions.len(),
            });
        }
        let matrices = self
            .matrices
            .iter()
            .zip(directions)
            .map(|(a, d)| {
                if d.shape() != a.shape() {
                    Err(Error::DimensionMismatch("direction shape".into()))
                } else {
                    Ok(a + d * c(h))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        self.rebuilt(matrices)
    }
}
