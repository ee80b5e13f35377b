//! Seeded constructions of simultaneously diagonalizable tuples.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::GeneratorTuple;
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};

/// Random bases accept at most this condition number.
pub const GENERAL_BASIS_CONDITION: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    Identity,
    /// Q from the QR factorization of a random matrix; M_A = 1.
    Orthogonal,
    /// I + R with random R, redrawn until κ ≤ 50.
    General,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BasisSpec {
    Identity,
    Orthogonal { seed: u64 },
    General { seed: u64 },
    Explicit { rows: Vec<Vec<f64>> },
}

impl BasisSpec {
    pub fn build(&self, d: usize) -> Result<CMatrix> {
        match self {
            BasisSpec::Identity => random_basis(BasisKind::Identity, d, 0),
            BasisSpec::Orthogonal { seed } => random_basis(BasisKind::Orthogonal, d, *seed),
            BasisSpec::General { seed } => random_basis(BasisKind::General, d, *seed),
            BasisSpec::Explicit { rows } => {
                let p = linalg::from_rows(rows)?;
                if p.nrows() != d {
                    return Err(Error::DimensionMismatch(format!(
                        "basis is {0}x{0}, expected {d}x{d}",
                        p.nrows()
                    )));
                }
                Ok(p)
            }
        }
    }
}

fn uniform_matrix(rng: &mut ChaCha8Rng, d: usize) -> DMatrix<f64> {
    DMatrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0))
}

pub fn random_basis(kind: BasisKind, d: usize, seed: u64) -> Result<CMatrix> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let real = match kind {
        BasisKind::Identity => DMatrix::identity(d, d),
        BasisKind::Orthogonal => uniform_matrix(&mut rng, d).qr().q(),
        BasisKind::General => {
            let scale = 0.5 / (d as f64).sqrt();
            let mut found = None;
            for _ in 0..100 {
                let p = DMatrix::identity(d, d) + uniform_matrix(&mut rng, d) * scale;
                let cp = p.map(c);
                if linalg::condition_number(&cp) <= GENERAL_BASIS_CONDITION {
                    found = Some(p);
                    break;
                }
            }
            found.ok_or_else(|| {
                Error::InvalidParameter(format!("no basis with κ ≤ {GENERAL_BASIS_CONDITION}"))
            })?
        }
    };
    Ok(real.map(c))
}

/// Parameters of a seeded pair (A, B) sharing one eigenvector basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairSpec {
    pub seed: u64,
    pub arity: usize,
    pub dim: usize,
    pub basis: BasisKind,
}

impl Default for PairSpec {
    fn default() -> Self {
        Self {
            seed: 0,
            arity: 1,
            dim: 4,
            basis: BasisKind::Orthogonal,
        }
    }
}

/// Eigenvalues of A uniform in [−5, −0.1]; B has μ = λ + δ·r with a pair
/// magnitude δ ∈ [1e−3, 1], r ∈ [−1, 1], clamped to μ ≤ −0.01.
pub fn random_pair(spec: PairSpec) -> Result<(GeneratorTuple, GeneratorTuple)> {
    let PairSpec {
        seed,
        arity,
        dim,
        basis,
    } = spec;
    if arity == 0 {
        return Err(Error::InvalidParameter("arity must be positive".into()));
    }
    let p = random_basis(basis, dim, seed ^ 0x9e37_79b9_7f4a_7c15)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let delta = 10f64.powf(rng.random_range(-3.0..0.0));
    let mut a = Vec::with_capacity(dim);
    let mut b = Vec::with_capacity(dim);
    for _ in 0..dim {
        let la: Vec<f64> = (0..arity).map(|_| rng.random_range(-5.0..-0.1)).collect();
        let lb: Vec<f64> = la
            .iter()
            .map(|l| (l + delta * rng.random_range(-1.0..1.0)).min(-0.01))
            .collect();
        a.push(la.into_iter().map(c).collect());
        b.push(lb.into_iter().map(c).collect());
    }
    Ok((
        GeneratorTuple::planted(p.clone(), a)?,
        GeneratorTuple::planted(p, b)?,
    ))
}

fn complex_rows(re: &[Vec<f64>], im: Option<&Vec<Vec<f64>>>) -> Result<CMatrix> {
    let d = re.len();
    if re.iter().any(|r| r.len() != d) {
        return Err(Error::DimensionMismatch(format!("expected a square {d}x{d} matrix")));
    }
    if let Some(im) = im {
        if im.len() != d || im.iter().any(|r| r.len() != d) {
            return Err(Error::DimensionMismatch("imaginary part shape".into()));
        }
    }
    Ok(CMatrix::from_fn(d, d, |i, j| {
        Complex64::new(re[i][j], im.map(|m| m[i][j]).unwrap_or(0.0))
    }))
}

/// Declarative tuple descriptions, as read from scenario files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TupleSpec {
    /// Row-major real parts, with optional imaginary parts.
    Explicit {
        matrices: Vec<Vec<Vec<f64>>>,
        #[serde(default)]
        imag: Option<Vec<Vec<Vec<f64>>>>,
    },
    /// `eigenvalues[k]` is the joint eigenvalue on basis column k.
    Planted {
        basis: BasisSpec,
        eigenvalues: Vec<Vec<f64>>,
    },
    /// One diagonal per generator.
    Diagonal { diagonals: Vec<Vec<f64>> },
    /// One member of a [`random_pair`].
    RandomPair {
        #[serde(flatten)]
        pair: PairSpec,
        #[serde(default)]
        perturbed: bool,
    },
}

impl TupleSpec {
    pub fn build(&self) -> Result<GeneratorTuple> {
        match self {
            TupleSpec::Explicit { matrices, imag } => {
                if let Some(im) = imag {
                    if im.len() != matrices.len() {
                        return Err(Error::DimensionMismatch(
                            "imaginary parts for a different number of generators".into(),
                        ));
                    }
                }
                let ms = matrices
                    .iter()
                    .enumerate()
                    .map(|(j, m)| complex_rows(m, imag.as_ref().map(|im| &im[j])))
                    .collect::<Result<Vec<_>>>()?;
                GeneratorTuple::new(ms)
            }
            TupleSpec::Planted { basis, eigenvalues } => {
                let p = basis.build(eigenvalues.len())?;
                GeneratorTuple::planted(
                    p,
                    eigenvalues
                        .iter()
                        .map(|t| t.iter().copied().map(c).collect())
                        .collect(),
                )
            }
            TupleSpec::Diagonal { diagonals } => {
                let d = diagonals.first().map(Vec::len).unwrap_or(0);
                if diagonals.iter().any(|v| v.len() != d) {
                    return Err(Error::DimensionMismatch("diagonals differ in length".into()));
                }
                let tuples = (0..d)
                    .map(|k| diagonals.iter().map(|v| c(v[k])).collect())
                    .collect();
                GeneratorTuple::planted(linalg::identity(d), tuples)
            }
            TupleSpec::RandomPair { pair, perturbed } => {
                let (a, b) = random_pair(*pair)?;
                Ok(if *perturbed { b } else { a })
            }
        }
    }
}
