use serde::Serialize;

use super::catalog::DensityOptions;
use super::function::{BernsteinFunction, CatalogTag};
use super::measure::WeightedPoint;
use crate::error::{Error, Result};
use crate::quadrature::LogGrid;

/// Poisson series are cut once the remaining tail mass drops below this.
pub const POISSON_TAIL: f64 = 1e-12;

/// The bounded measure ν_t on ℝ₊ⁿ with ∫ e^{z·u} dν_t(u) = e^{tψ(z)}.
#[derive(Debug, Clone, Serialize)]
pub struct SubordinationMeasure {
    pub t: f64,
    pub base: CatalogTag,
    pub atoms: Vec<WeightedPoint>,
    pub density_nodes: Vec<WeightedPoint>,
    pub total_mass: f64,
    /// Mass dropped by truncation (series tail or density window).
    pub truncated_mass: f64,
    /// Bound on |transform(z) − e^{tψ(z)}| for z ≤ 0.
    pub budget: f64,
}

impl SubordinationMeasure {
    pub fn nodes(&self) -> impl Iterator<Item = &WeightedPoint> {
        self.atoms.iter().chain(self.density_nodes.iter())
    }

    pub fn arity(&self) -> usize {
        self.nodes().next().map(|n| n.point.len()).unwrap_or(0)
    }

    /// ∫ e^{z·u} dν_t(u).
    pub fn transform(&self, z: &[f64]) -> Result<f64> {
        if z.iter().any(|x| !x.is_finite() || *x > 0.0) {
            return Err(Error::Domain(format!("transform argument {z:?} must lie in (−∞, 0]ⁿ")));
        }
        if let Some(n) = self.nodes().next() {
            if n.point.len() != z.len() {
                return Err(Error::ArityMismatch {
                    expected: n.point.len(),
                    got: z.len(),
                });
            }
        }
        Ok(self.nodes().map(|n| n.mass * n.dot(z).exp()).sum())
    }
}

fn arity_of(tag: &CatalogTag) -> usize {
    match tag {
        CatalogTag::Dirac { point, .. } => point.len(),
        CatalogTag::FracPower { arity, .. }
        | CatalogTag::LogResolvent { arity, .. }
        | CatalogTag::TemperedStable { arity, .. } => *arity,
        CatalogTag::Sum { terms } => terms.first().map(arity_of).unwrap_or(0),
        CatalogTag::Scale { inner, .. } => arity_of(inner),
    }
}

fn poisson(t: f64, base: &CatalogTag, point: &[f64], rate: f64) -> Result<SubordinationMeasure> {
    let lambda = rate * t;
    if lambda > 700.0 {
        return Err(Error::InvalidParameter(format!(
            "Poisson intensity {lambda} too large for the series"
        )));
    }
    let mut atoms = Vec::new();
    let mut p = (-lambda).exp();
    let mut k = 0usize;
    loop {
        atoms.push(WeightedPoint::new(
            point.iter().map(|v| v * k as f64).collect(),
            p,
        ));
        let next = p * lambda / (k + 1) as f64;
        // Σ_{j>k} p_j ≤ p_{k+1}/(1 − λ/(k+2)) once k+2 > λ
        let ratio = lambda / (k + 2) as f64;
        if ratio < 1.0 && next / (1.0 - ratio) < POISSON_TAIL {
            let tail = next / (1.0 - ratio);
            let total_mass = atoms.iter().map(|a| a.mass).sum();
            return Ok(SubordinationMeasure {
                t,
                base: base.clone(),
                atoms,
                density_nodes: Vec::new(),
                total_mass,
                truncated_mass: tail,
                budget: tail,
            });
        }
        p = next;
        k += 1;
    }
}

fn stable_half(
    t: f64,
    base: &CatalogTag,
    arity: usize,
    coordinate: usize,
    opts: &DensityOptions,
) -> Result<SubordinationMeasure> {
    let c = t / (2.0 * std::f64::consts::PI.sqrt());
    let q = 0.25 * opts.budget;
    // mass below t²/160 is at most erfc(√40) < 1e-18
    let lo = t * t / 160.0;
    let hi = t * t / (std::f64::consts::PI * q * q);
    let u_density = move |u: f64| c * u.powf(-0.5) * (-t * t / (4.0 * u)).exp();
    let mut grid = LogGrid {
        lo,
        hi,
        panel_width: opts.panel_width,
        order: opts.order,
    };
    let probes = [0.0, -0.1, -1.0, -opts.s_max];
    let mut attempts = 0;
    let (nodes, quad) = loop {
        let coarse = grid.nodes(u_density)?;
        let fine = grid.refined().nodes(u_density)?;
        let quad = probes
            .iter()
            .map(|z| {
                let a: f64 = coarse.iter().map(|(u, w)| w * (z * u).exp()).sum();
                let b: f64 = fine.iter().map(|(u, w)| w * (z * u).exp()).sum();
                (a - b).abs()
            })
            .fold(0.0, f64::max);
        attempts += 1;
        if quad <= 0.25 * opts.budget || attempts >= 5 {
            break (coarse, quad);
        }
        grid = grid.refined();
    };
    let tail = c * 2.0 / hi.sqrt();
    let density_nodes: Vec<WeightedPoint> = nodes
        .into_iter()
        .map(|(u, w)| {
            let mut p = vec![0.0; arity];
            p[coordinate] = u;
            WeightedPoint::new(p, w)
        })
        .collect();
    let total_mass = density_nodes.iter().map(|n| n.mass).sum();
    Ok(SubordinationMeasure {
        t,
        base: base.clone(),
        atoms: Vec::new(),
        density_nodes,
        total_mass,
        truncated_mass: tail,
        budget: tail + 1e-18 + quad,
    })
}

fn widder_for_tag(
    tag: &CatalogTag,
    base: &CatalogTag,
    t: f64,
    opts: &DensityOptions,
) -> Result<SubordinationMeasure> {
    if t == 0.0 {
        return Ok(SubordinationMeasure {
            t,
            base: base.clone(),
            atoms: vec![WeightedPoint::new(vec![0.0; arity_of(tag)], 1.0)],
            density_nodes: Vec::new(),
            total_mass: 1.0,
            truncated_mass: 0.0,
            budget: 0.0,
        });
    }
    match tag {
        CatalogTag::Dirac { point, mass } => poisson(t, base, point, *mass),
        CatalogTag::FracPower {
            alpha,
            arity,
            coordinate,
        } if *alpha == 0.5 => stable_half(t, base, *arity, *coordinate, opts),
        CatalogTag::Scale { factor, inner } => widder_for_tag(inner, base, factor * t, opts),
        other => Err(Error::Unsupported {
            operation: "widder_measure".into(),
            entry: other.label(),
        }),
    }
}

/// The Bernstein–Widder measure of e^{tψ} for Poisson (dirac) and
/// one-sided stable-½ (frac_power with α = ½) catalog entries, possibly
/// scaled.
pub fn widder_measure(
    psi: &BernsteinFunction,
    t: f64,
    opts: &DensityOptions,
) -> Result<SubordinationMeasure> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::Domain(format!("subordination time {t} must be ≥ 0")));
    }
    let tag = psi.tag().ok_or_else(|| Error::Unsupported {
        operation: "widder_measure".into(),
        entry: psi.label(),
    })?;
    widder_for_tag(tag, tag, t, opts)
}
