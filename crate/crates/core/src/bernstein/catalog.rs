//! Built-in Bernstein functions. Densities are discretized on a truncation
//! window [ε, R] chosen so that the analytic truncation error plus the
//! estimated quadrature error stays within the requested budget.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use super::function::{BernsteinFunction, CatalogTag};
use super::measure::{DensityBlock, LevyMeasure, NodeBudget, WeightedPoint};
use crate::error::{Error, Result};
use crate::quadrature::LogGrid;

/// Discretization controls for density-backed functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DensityOptions {
    /// Target bound on |eval − ψ| over [−s_max, 0]ⁿ.
    pub budget: f64,
    pub s_max: f64,
    /// Width of the composite panels in ln u.
    pub panel_width: f64,
    pub order: usize,
}

impl Default for DensityOptions {
    fn default() -> Self {
        Self {
            budget: 1e-7,
            s_max: 20.0,
            panel_width: 1.0,
            order: 16,
        }
    }
}

impl DensityOptions {
    fn validate(&self) -> Result<()> {
        if !(self.budget > 0.0 && self.s_max > 0.0 && self.panel_width > 0.0 && self.order >= 2) {
            return Err(Error::InvalidParameter(format!("bad density options {self:?}")));
        }
        Ok(())
    }
}

/// Finds x ≥ start with f(x) ≤ target for a decreasing f.
fn solve_decreasing(f: impl Fn(f64) -> f64, target: f64, start: f64) -> f64 {
    let mut hi = start.max(1e-300);
    while f(hi) > target {
        hi *= 2.0;
    }
    let mut lo = hi * 0.5;
    if f(lo) <= target {
        return lo;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

struct Density1d<'a> {
    name: String,
    /// u·ρ(u)
    u_density: &'a dyn Fn(f64) -> f64,
    near_zero_moment: f64,
    tail_mass: f64,
    tail_moment: Option<f64>,
    first_moment_finite: bool,
    second_moment_finite: bool,
}

fn sums(nodes: &[(f64, f64)], s: f64) -> (f64, f64) {
    let eval = nodes.iter().map(|(u, w)| w * (s * u).exp_m1()).sum();
    let moment = nodes.iter().map(|(u, w)| w * u * (s * u).exp()).sum();
    (eval, moment)
}

fn discretize(
    density: Density1d<'_>,
    window: (f64, f64),
    arity: usize,
    coordinate: usize,
    opts: &DensityOptions,
) -> Result<DensityBlock> {
    let mut grid = LogGrid {
        lo: window.0,
        hi: window.1,
        panel_width: opts.panel_width,
        order: opts.order,
    };
    let probes: Vec<f64> = [1.0, 0.25, 1.0 / 16.0]
        .iter()
        .map(|f| -f * opts.s_max)
        .chain([-1.0, -0.25, 0.0])
        .filter(|s| -*s <= opts.s_max)
        .collect();
    let mut attempts = 0;
    let (nodes, quad, moment_quad) = loop {
        let coarse = grid.nodes(density.u_density)?;
        let fine = grid.refined().nodes(density.u_density)?;
        let mut quad = 0.0f64;
        let mut moment_quad = 0.0f64;
        for &s in &probes {
            let (e0, m0) = sums(&coarse, s);
            let (e1, m1) = sums(&fine, s);
            quad = quad.max((e0 - e1).abs());
            if s >= -1.0 {
                moment_quad = moment_quad.max((m0 - m1).abs());
            }
        }
        attempts += 1;
        if quad <= 0.5 * opts.budget || attempts >= 5 {
            break (coarse, quad, moment_quad);
        }
        grid = grid.refined();
    };
    let mut point = vec![0.0; arity];
    let nodes = nodes
        .into_iter()
        .map(|(u, w)| {
            point[coordinate] = u;
            WeightedPoint::new(point.clone(), w)
        })
        .collect();
    Ok(DensityBlock {
        name: density.name,
        coordinate,
        window,
        nodes,
        budget: NodeBudget {
            near_zero_moment: density.near_zero_moment,
            tail_mass: density.tail_mass,
            tail_moment: density.tail_moment,
            quadrature: quad,
            moment_quadrature: moment_quad,
            s_max: opts.s_max,
        },
        first_moment_finite: density.first_moment_finite,
        second_moment_finite: density.second_moment_finite,
    })
}

fn check_embedding(arity: usize, coordinate: usize) -> Result<()> {
    if arity == 0 || coordinate >= arity {
        return Err(Error::InvalidParameter(format!(
            "coordinate {coordinate} out of range for arity {arity}"
        )));
    }
    Ok(())
}

fn from_block(arity: usize, block: DensityBlock, tag: CatalogTag) -> Result<BernsteinFunction> {
    let mut measure = LevyMeasure::zero(arity)?;
    measure.push_block(block)?;
    Ok(BernsteinFunction::new(0.0, vec![0.0; arity], measure)?.with_tag(tag))
}

/// ψ(s) = mass·(e^{s·v₀} − 1): a single atom of the Lévy measure.
pub fn dirac(point: Vec<f64>, mass: f64) -> Result<BernsteinFunction> {
    let arity = point.len();
    let tag = CatalogTag::Dirac {
        point: point.clone(),
        mass,
    };
    let measure = LevyMeasure::from_atoms(arity, vec![WeightedPoint::new(point, mass)])?;
    Ok(BernsteinFunction::new(0.0, vec![0.0; arity], measure)?.with_tag(tag))
}

/// ψ(s) = −(−s_j)^α for α ∈ (0, 1), Lévy density α/Γ(1−α)·u^{−1−α}.
pub fn frac_power(
    alpha: f64,
    arity: usize,
    coordinate: usize,
    opts: &DensityOptions,
) -> Result<BernsteinFunction> {
    opts.validate()?;
    check_embedding(arity, coordinate)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "frac_power exponent {alpha} must lie in (0, 1)"
        )));
    }
    let c = alpha / gamma(1.0 - alpha);
    let q = 0.25 * opts.budget;
    let eps = (q * (1.0 - alpha) / (c * opts.s_max)).powf(1.0 / (1.0 - alpha));
    let r = (c / (alpha * q)).powf(1.0 / alpha);
    let u_density = move |u: f64| c * u.powf(-alpha);
    let density = Density1d {
        name: format!("frac_power(alpha={alpha})"),
        u_density: &u_density,
        near_zero_moment: c * eps.powf(1.0 - alpha) / (1.0 - alpha),
        tail_mass: c * r.powf(-alpha) / alpha,
        tail_moment: None,
        first_moment_finite: false,
        second_moment_finite: false,
    };
    let block = discretize(density, (eps, r), arity, coordinate, opts)?;
    from_block(
        arity,
        block,
        CatalogTag::FracPower {
            alpha,
            arity,
            coordinate,
        },
    )
}

/// ψ(s) = log λ − log(λ − s_j), Lévy density u⁻¹e^{−λu}.
pub fn log_resolvent(
    lambda: f64,
    arity: usize,
    coordinate: usize,
    opts: &DensityOptions,
) -> Result<BernsteinFunction> {
    opts.validate()?;
    check_embedding(arity, coordinate)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("log_resolvent needs λ > 0, got {lambda}")));
    }
    let q = 0.25 * opts.budget;
    let eps = q / opts.s_max;
    // tail mass E₁(x) ≤ e^{-x}/x and tail moment e^{-x}/λ at x = λR
    let x = solve_decreasing(
        |x| ((-x).exp() / x).max((-x).exp() / lambda),
        q,
        1.0,
    );
    let r = x / lambda;
    let u_density = move |u: f64| (-lambda * u).exp();
    let density = Density1d {
        name: format!("log_resolvent(lambda={lambda})"),
        u_density: &u_density,
        near_zero_moment: -(-lambda * eps).exp_m1() / lambda,
        tail_mass: (-x).exp() / x,
        tail_moment: Some((-x).exp() / lambda),
        first_moment_finite: true,
        second_moment_finite: true,
    };
    let block = discretize(density, (eps, r), arity, coordinate, opts)?;
    from_block(
        arity,
        block,
        CatalogTag::LogResolvent {
            lambda,
            arity,
            coordinate,
        },
    )
}

/// ψ(s) = λ^α − (λ − s_j)^α, Lévy density α/Γ(1−α)·u^{−1−α}e^{−λu}.
pub fn tempered_stable(
    alpha: f64,
    lambda: f64,
    arity: usize,
    coordinate: usize,
    opts: &DensityOptions,
) -> Result<BernsteinFunction> {
    opts.validate()?;
    check_embedding(arity, coordinate)?;
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "tempered_stable exponent {alpha} must lie in (0, 1)"
        )));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("tempered_stable needs λ > 0, got {lambda}")));
    }
    let c = alpha / gamma(1.0 - alpha);
    let q = 0.25 * opts.budget;
    let eps = (q * (1.0 - alpha) / (c * opts.s_max)).powf(1.0 / (1.0 - alpha));
    let tail_mass = move |r: f64| c * r.powf(-1.0 - alpha) * (-lambda * r).exp() / lambda;
    let tail_moment = move |r: f64| c * r.powf(-alpha) * (-lambda * r).exp() / lambda;
    let r = solve_decreasing(|r| tail_mass(r).max(tail_moment(r)), q, 1.0 / lambda);
    let u_density = move |u: f64| c * u.powf(-alpha) * (-lambda * u).exp();
    let density = Density1d {
        name: format!("tempered_stable(alpha={alpha}, lambda={lambda})"),
        u_density: &u_density,
        near_zero_moment: c * eps.powf(1.0 - alpha) / (1.0 - alpha),
        tail_mass: tail_mass(r),
        tail_moment: Some(tail_moment(r)),
        first_moment_finite: true,
        second_moment_finite: true,
    };
    let block = discretize(density, (eps, r), arity, coordinate, opts)?;
    from_block(
        arity,
        block,
        CatalogTag::TemperedStable {
            alpha,
            lambda,
            arity,
            coordinate,
        },
    )
}

/// One line of the catalog listing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub parameters: &'static str,
    pub formula: &'static str,
    pub first_moment: &'static str,
    pub widder: bool,
}

pub fn catalog_entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "dirac",
            parameters: "point (n-vector, nonnegative, nonzero), mass > 0",
            formula: "mass*(exp(s.v0) - 1)",
            first_moment: "finite",
            widder: true,
        },
        CatalogEntry {
            name: "frac_power",
            parameters: "alpha in (0,1), arity, coordinate, density options",
            formula: "-(-s_j)^alpha",
            first_moment: "infinite",
            widder: true,
        },
        CatalogEntry {
            name: "log_resolvent",
            parameters: "lambda > 0, arity, coordinate, density options",
            formula: "log(lambda) - log(lambda - s_j)",
            first_moment: "finite",
            widder: false,
        },
        CatalogEntry {
            name: "tempered_stable",
            parameters: "alpha in (0,1), lambda > 0, arity, coordinate, density options",
            formula: "lambda^alpha - (lambda - s_j)^alpha",
            first_moment: "finite",
            widder: false,
        },
        CatalogEntry {
            name: "sum",
            parameters: "terms (ids of functions with equal arity)",
            formula: "psi_1 + ... + psi_k",
            first_moment: "finite iff finite for every term",
            widder: false,
        },
        CatalogEntry {
            name: "scale",
            parameters: "factor > 0, of (id)",
            formula: "factor*psi",
            first_moment: "as for psi",
            widder: true,
        },
    ]
}
