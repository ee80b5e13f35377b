use serde::Serialize;

use crate::error::{Error, Result};

/// A point of ℝ₊ⁿ carrying positive mass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedPoint {
    pub point: Vec<f64>,
    pub mass: f64,
}

impl WeightedPoint {
    pub fn new(point: Vec<f64>, mass: f64) -> Self {
        Self { point, mass }
    }

    pub fn dot(&self, s: &[f64]) -> f64 {
        self.point.iter().zip(s).map(|(v, s)| v * s).sum()
    }

    pub fn l1(&self) -> f64 {
        self.point.iter().map(|v| v.abs()).sum()
    }
}

/// Error accounting for one discretized density.
///
/// The truncation pieces are analytic bounds for the window [ε, R]; the
/// quadrature piece is estimated by comparing the rule with the same rule
/// on panels of half the width.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeBudget {
    /// ∫_{(0,ε)} v dμ: multiplies |s| in the evaluation error.
    pub near_zero_moment: f64,
    /// μ((R, ∞)).
    pub tail_mass: f64,
    /// ∫_{(R,∞)} v dμ when the first moment is finite.
    pub tail_moment: Option<f64>,
    /// Estimated discretization error of the evaluation sums on [-s_max, 0].
    pub quadrature: f64,
    /// Estimated discretization error of the first-moment sums.
    pub moment_quadrature: f64,
    /// Largest |s| the window was designed for.
    pub s_max: f64,
}

impl NodeBudget {
    pub fn exact() -> Self {
        Self {
            near_zero_moment: 0.0,
            tail_mass: 0.0,
            tail_moment: Some(0.0),
            quadrature: 0.0,
            moment_quadrature: 0.0,
            s_max: f64::INFINITY,
        }
    }

    pub fn eval(&self, s_abs: f64) -> f64 {
        self.near_zero_moment * s_abs + self.tail_mass + self.quadrature
    }

    pub fn moment(&self) -> Option<f64> {
        self.tail_moment
            .map(|t| self.near_zero_moment + t + self.moment_quadrature)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            near_zero_moment: self.near_zero_moment * factor,
            tail_mass: self.tail_mass * factor,
            tail_moment: self.tail_moment.map(|t| t * factor),
            quadrature: self.quadrature * factor,
            moment_quadrature: self.moment_quadrature * factor,
            s_max: self.s_max,
        }
    }
}

/// A named one-dimensional density discretized on [ε, R] and embedded on
/// the axis of `coordinate`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityBlock {
    pub name: String,
    pub coordinate: usize,
    pub window: (f64, f64),
    pub nodes: Vec<WeightedPoint>,
    pub budget: NodeBudget,
    pub first_moment_finite: bool,
    pub second_moment_finite: bool,
}

/// A Lévy measure on ℝ₊ⁿ \ {0} stored as a finite node set: exact atoms
/// plus discretized densities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevyMeasure {
    arity: usize,
    atoms: Vec<WeightedPoint>,
    blocks: Vec<DensityBlock>,
}

pub(crate) fn check_point(point: &[f64], arity: usize, allow_origin: bool) -> Result<()> {
    if point.len() != arity {
        return Err(Error::ArityMismatch {
            expected: arity,
            got: point.len(),
        });
    }
    if point.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidMeasure(format!(
            "point {point:?} is not in the closed positive orthant"
        )));
    }
    if !allow_origin && point.iter().all(|v| *v == 0.0) {
        return Err(Error::InvalidMeasure("a Lévy measure cannot charge the origin".into()));
    }
    Ok(())
}

fn check_mass(mass: f64) -> Result<()> {
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::InvalidMeasure(format!("mass {mass} is not strictly positive")));
    }
    Ok(())
}

impl LevyMeasure {
    pub fn zero(arity: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidParameter("arity must be positive".into()));
        }
        Ok(Self {
            arity,
            atoms: Vec::new(),
            blocks: Vec::new(),
        })
    }

    pub fn from_atoms(arity: usize, atoms: Vec<WeightedPoint>) -> Result<Self> {
        let mut m = Self::zero(arity)?;
        for a in atoms {
            m.push_atom(a)?;
        }
        Ok(m)
    }

    pub fn push_atom(&mut self, atom: WeightedPoint) -> Result<()> {
        check_point(&atom.point, self.arity, false)?;
        check_mass(atom.mass)?;
        self.atoms.push(atom);
        Ok(())
    }

    pub fn push_block(&mut self, block: DensityBlock) -> Result<()> {
        if block.coordinate >= self.arity {
            return Err(Error::InvalidParameter(format!(
                "coordinate {} out of range for arity {}",
                block.coordinate, self.arity
            )));
        }
        for node in &block.nodes {
            check_point(&node.point, self.arity, false)?;
            check_mass(node.mass)?;
        }
        self.blocks.push(block);
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn atoms(&self) -> &[WeightedPoint] {
        &self.atoms
    }

    pub fn blocks(&self) -> &[DensityBlock] {
        &self.blocks
    }

    /// All nodes in a fixed order: atoms first, then each block.
    pub fn nodes(&self) -> impl Iterator<Item = &WeightedPoint> {
        self.atoms
            .iter()
            .chain(self.blocks.iter().flat_map(|b| b.nodes.iter()))
    }

    pub fn node_count(&self) -> usize {
        self.atoms.len() + self.blocks.iter().map(|b| b.nodes.len()).sum::<usize>()
    }

    pub fn is_atomic(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Σ mass·min(1, |v|₁), finite for every finite node set.
    pub fn levy_integral(&self) -> f64 {
        self.nodes().map(|n| n.mass * n.l1().min(1.0)).sum()
    }

    pub fn first_moment_finite(&self, coordinate: usize) -> bool {
        self.blocks
            .iter()
            .all(|b| b.coordinate != coordinate || b.first_moment_finite)
    }

    pub fn second_moment_finite(&self, coordinate: usize) -> bool {
        self.blocks
            .iter()
            .all(|b| b.coordinate != coordinate || b.second_moment_finite)
    }

    /// Bound on the evaluation error at a point with sup-norm `s_abs`.
    pub fn eval_budget(&self, s_abs: f64) -> f64 {
        self.blocks.iter().map(|b| b.budget.eval(s_abs)).sum()
    }

    /// Bound on the error of first-moment sums in `coordinate`.
    pub fn moment_budget(&self, coordinate: usize) -> Option<f64> {
        self.blocks
            .iter()
            .filter(|b| b.coordinate == coordinate)
            .map(|b| b.budget.moment())
            .sum()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        check_mass(factor)?;
        let scale_nodes = |nodes: &[WeightedPoint]| {
            nodes
                .iter()
                .map(|n| WeightedPoint::new(n.point.clone(), n.mass * factor))
                .collect::<Vec<_>>()
        };
        Ok(Self {
            arity: self.arity,
            atoms: scale_nodes(&self.atoms),
            blocks: self
                .blocks
                .iter()
                .map(|b| DensityBlock {
                    nodes: scale_nodes(&b.nodes),
                    budget: b.budget.scaled(factor),
                    ..b.clone()
                })
                .collect(),
        })
    }

    pub fn merged(&self, other: &Self) -> Result<Self> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: other.arity,
            });
        }
        let mut out = self.clone();
        out.atoms.extend(other.atoms.iter().cloned());
        out.blocks.extend(other.blocks.iter().cloned());
        Ok(out)
    }
}
