//! Dense complex linear algebra used throughout the crate: the matrix
//! exponential, norms, resolvent solves and eigendecompositions.
//!
//! Matrices are small (d ≤ 64), so everything works on `DMatrix<Complex64>`.

use nalgebra::{DMatrix, Schur, SymmetricEigen, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// Lifts a real matrix given as rows into a complex matrix.
pub fn from_rows(rows: &[Vec<f64>]) -> Result<CMatrix> {
    let d = rows.len();
    if rows.iter().any(|r| r.len() != d) {
        return Err(Error::DimensionMismatch(format!(
            "expected a square {d}x{d} matrix"
        )));
    }
    Ok(CMatrix::from_fn(d, d, |i, j| c(rows[i][j])))
}

pub fn diag_real(values: &[f64]) -> CMatrix {
    let d = values.len();
    CMatrix::from_fn(d, d, |i, j| if i == j { c(values[i]) } else { c(0.0) })
}

pub fn diag(values: &[Complex64]) -> CMatrix {
    let d = values.len();
    CMatrix::from_fn(d, d, |i, j| if i == j { values[i] } else { c(0.0) })
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn one_norm(m: &CMatrix) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    if !is_finite(m) {
        return vec![f64::INFINITY; m.nrows().min(m.ncols())];
    }
    SVD::new(m.clone(), false, false)
        .singular_values
        .iter()
        .copied()
        .collect()
}

/// Which norm to measure an operator difference in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    /// Spectral norm, the largest singular value.
    Operator,
    /// Sum of singular values; the finite-dimensional nuclear norm.
    Trace,
}

impl NormKind {
    pub fn name(self) -> &'static str {
        match self {
            NormKind::Operator => "operator",
            NormKind::Trace => "trace",
        }
    }
}

pub fn norm(m: &CMatrix, kind: NormKind) -> f64 {
    let sv = singular_values(m);
    match kind {
        NormKind::Operator => sv.iter().copied().fold(0.0, f64::max),
        NormKind::Trace => sv.iter().sum(),
    }
}

pub fn op_norm(m: &CMatrix) -> f64 {
    norm(m, NormKind::Operator)
}

/// ‖P‖·‖P⁻¹‖ in the spectral norm.
pub fn condition_number(m: &CMatrix) -> f64 {
    let sv = singular_values(m);
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Inverse through a singular-value guard: a relative smallest singular
/// value below `1e-13` is reported as singular.
pub fn inverse(m: &CMatrix) -> Result<CMatrix> {
    let sv = singular_values(m);
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min > 1e-13 * max.max(1e-300)) {
        return Err(Error::Singular(format!(
            "smallest singular value {min:e} against largest {max:e}"
        )));
    }
    m.clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::Singular("LU factorization failed".into()))
}

pub fn determinant(m: &CMatrix) -> Complex64 {
    m.clone().lu().determinant()
}

const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const THETA3: f64 = 1.495585217958292e-2;
const THETA5: f64 = 2.539_398_330_063_23e-1;
const THETA7: f64 = 9.504178996162932e-1;
const THETA9: f64 = 2.097847961257068e0;
const THETA13: f64 = 5.371920351148152e0;

fn pade_low(a: &CMatrix, b: &[f64]) -> (CMatrix, CMatrix) {
    let d = a.nrows();
    let a2 = a * a;
    let mut power = identity(d);
    let mut u = CMatrix::zeros(d, d);
    let mut v = CMatrix::zeros(d, d);
    for k in (0..b.len()).step_by(2) {
        v += &power * c(b[k]);
        if k + 1 < b.len() {
            u += &power * c(b[k + 1]);
        }
        power = &power * &a2;
    }
    (a * u, v)
}

fn pade13(a: &CMatrix) -> (CMatrix, CMatrix) {
    let b = PADE13;
    let d = a.nrows();
    let id = identity(d);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &a6 * (&a6 * c(b[13]) + &a4 * c(b[11]) + &a2 * c(b[9]));
    let u = a * (inner_u + &a6 * c(b[7]) + &a4 * c(b[5]) + &a2 * c(b[3]) + &id * c(b[1]));
    let inner_v = &a6 * (&a6 * c(b[12]) + &a4 * c(b[10]) + &a2 * c(b[8]));
    let v = inner_v + &a6 * c(b[6]) + &a4 * c(b[4]) + &a2 * c(b[2]) + &id * c(b[0]);
    (u, v)
}

/// Matrix exponential by scaling and squaring with a diagonal Padé
/// approximant of degree 3, 5, 7, 9 or 13, selected from the 1-norm.
pub fn expm(a: &CMatrix) -> CMatrix {
    let d = a.nrows();
    if d == 0 {
        return a.clone();
    }
    let norm1 = one_norm(a);
    if norm1 == 0.0 {
        return identity(d);
    }
    let (u, v, squarings) = if norm1 <= THETA3 {
        let (u, v) = pade_low(a, &PADE3);
        (u, v, 0)
    } else if norm1 <= THETA5 {
        let (u, v) = pade_low(a, &PADE5);
        (u, v, 0)
    } else if norm1 <= THETA7 {
        let (u, v) = pade_low(a, &PADE7);
        (u, v, 0)
    } else if norm1 <= THETA9 {
        let (u, v) = pade_low(a, &PADE9);
        (u, v, 0)
    } else {
        let s = (norm1 / THETA13).log2().ceil().max(0.0) as i32;
        let scaled = a * c(0.5f64.powi(s));
        let (u, v) = pade13(&scaled);
        (u, v, s)
    };
    let p = &v + &u;
    let q = &v - &u;
    let mut r = q.lu().solve(&p).expect("Padé denominator is nonsingular");
    for _ in 0..squarings {
        r = &r * &r;
    }
    r
}

/// exp(A) − I without the cancellation of forming exp(A) first when A is
/// small.
pub fn expm1(a: &CMatrix) -> CMatrix {
    let d = a.nrows();
    let norm1 = one_norm(a);
    if norm1 > 0.5 {
        return expm(a) - identity(d);
    }
    let mut term = a.clone();
    let mut sum = a.clone();
    for k in 2..40 {
        term = &term * a * c(1.0 / k as f64);
        sum += &term;
        if one_norm(&term) <= 1e-18 * one_norm(&sum) {
            break;
        }
    }
    sum
}

/// Eigenvalues and unit-norm eigenvectors (as columns) of a complex matrix,
/// computed from the complex Schur form by back substitution.
///
/// Defective matrices yield an ill-conditioned or singular eigenvector
/// matrix; callers verify the decomposition a posteriori.
pub fn eig(m: &CMatrix) -> Result<(Vec<Complex64>, CMatrix)> {
    let d = m.nrows();
    if d != m.ncols() {
        return Err(Error::DimensionMismatch("eig of a non-square matrix".into()));
    }
    if !is_finite(m) {
        return Err(Error::NonFinite("matrix entries".into()));
    }
    if d == 0 {
        return Ok((Vec::new(), m.clone()));
    }
    let schur = Schur::try_new(m.clone(), 1e-15, 10_000)
        .ok_or_else(|| Error::Singular("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    let scale = frobenius(&t).max(1e-300);
    let values: Vec<Complex64> = (0..d).map(|k| t[(k, k)]).collect();

    let mut x = CMatrix::zeros(d, d);
    for k in 0..d {
        let lambda = t[(k, k)];
        x[(k, k)] = c(1.0);
        for i in (0..k).rev() {
            let mut num = c(0.0);
            for j in i + 1..=k {
                num += t[(i, j)] * x[(j, k)];
            }
            let den = t[(i, i)] - lambda;
            if den.norm() <= 1e-10 * scale {
                // repeated eigenvalue: the component is free when the
                // Schur block is diagonal, otherwise the matrix is defective
                if num.norm() <= 1e-8 * scale {
                    x[(i, k)] = c(0.0);
                } else {
                    x[(i, k)] = -num / c(1e-10 * scale);
                }
            } else {
                x[(i, k)] = -num / den;
            }
        }
    }
    let mut vectors = q * x;
    for k in 0..d {
        let n = vectors.column(k).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 0.0 {
            vectors.column_mut(k).scale_mut(1.0 / n);
        }
    }
    Ok((values, vectors))
}
