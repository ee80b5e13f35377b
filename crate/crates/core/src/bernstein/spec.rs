//! Declarative descriptions of Bernstein functions, as read from scenario
//! files.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::catalog::{self, DensityOptions};
use super::function::BernsteinFunction;
use super::measure::{LevyMeasure, WeightedPoint};
use crate::error::{Error, Result};

fn one() -> f64 {
    1.0
}

fn one_usize() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomSpec {
    pub point: Vec<f64>,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PsiSpec {
    Dirac {
        point: Vec<f64>,
        #[serde(default = "one")]
        mass: f64,
    },
    FracPower {
        alpha: f64,
        #[serde(default = "one_usize")]
        arity: usize,
        #[serde(default)]
        coordinate: usize,
        #[serde(default)]
        density: DensityOptions,
    },
    LogResolvent {
        lambda: f64,
        #[serde(default = "one_usize")]
        arity: usize,
        #[serde(default)]
        coordinate: usize,
        #[serde(default)]
        density: DensityOptions,
    },
    TemperedStable {
        alpha: f64,
        lambda: f64,
        #[serde(default = "one_usize")]
        arity: usize,
        #[serde(default)]
        coordinate: usize,
        #[serde(default)]
        density: DensityOptions,
    },
    /// A raw Lévy triplet with an atomic measure.
    Triplet {
        #[serde(default)]
        c0: f64,
        c1: Vec<f64>,
        #[serde(default)]
        atoms: Vec<AtomSpec>,
    },
    Sum {
        terms: Vec<String>,
    },
    Scale {
        factor: f64,
        of: String,
    },
}

impl PsiSpec {
    /// Ids of other entries this spec refers to.
    pub fn references(&self) -> Vec<&str> {
        match self {
            PsiSpec::Sum { terms } => terms.iter().map(String::as_str).collect(),
            PsiSpec::Scale { of, .. } => vec![of.as_str()],
            _ => Vec::new(),
        }
    }

    /// Builds a function that references no other entry.
    pub fn build_leaf(&self) -> Result<BernsteinFunction> {
        match self {
            PsiSpec::Dirac { point, mass } => catalog::dirac(point.clone(), *mass),
            PsiSpec::FracPower {
                alpha,
                arity,
                coordinate,
                density,
            } => catalog::frac_power(*alpha, *arity, *coordinate, density),
            PsiSpec::LogResolvent {
                lambda,
                arity,
                coordinate,
                density,
            } => catalog::log_resolvent(*lambda, *arity, *coordinate, density),
            PsiSpec::TemperedStable {
                alpha,
                lambda,
                arity,
                coordinate,
                density,
            } => catalog::tempered_stable(*alpha, *lambda, *arity, *coordinate, density),
            PsiSpec::Triplet { c0, c1, atoms } => {
                let measure = LevyMeasure::from_atoms(
                    c1.len(),
                    atoms
                        .iter()
                        .map(|a| WeightedPoint::new(a.point.clone(), a.mass))
                        .collect(),
                )?;
                BernsteinFunction::new(*c0, c1.clone(), measure)
            }
            PsiSpec::Sum { .. } | PsiSpec::Scale { .. } => Err(Error::InvalidParameter(
                "combinators must be resolved against a registry".into(),
            )),
        }
    }
}

/// Why a registry failed to resolve.
#[derive(Debug, Clone, PartialEq)]
pub enum ResolveError {
    Unknown { id: String, referenced_by: String },
    Cycle(String),
    Duplicate(String),
    Build { id: String, error: Error },
}

impl std::fmt::Display for ResolveError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ResolveError::Unknown { id, referenced_by } => {
                write!(f, "function '{referenced_by}' references undefined id '{id}'")
            }
            ResolveError::Cycle(id) => write!(f, "reference cycle through '{id}'"),
            ResolveError::Duplicate(id) => write!(f, "duplicate function id '{id}'"),
            ResolveError::Build { id, error } => write!(f, "function '{id}': {error}"),
        }
    }
}

impl std::error::Error for ResolveError {}

/// Resolves a list of named specs, including sum/scale combinators, into
/// functions keyed by id.
pub fn resolve(
    specs: &[(String, PsiSpec)],
) -> std::result::Result<BTreeMap<String, BernsteinFunction>, ResolveError> {
    let mut table: BTreeMap<&str, &PsiSpec> = BTreeMap::new();
    for (id, spec) in specs {
        if table.insert(id.as_str(), spec).is_some() {
            return Err(ResolveError::Duplicate(id.clone()));
        }
    }
    for (id, spec) in specs {
        for r in spec.references() {
            if !table.contains_key(r) {
                return Err(ResolveError::Unknown {
                    id: r.to_string(),
                    referenced_by: id.clone(),
                });
            }
        }
    }
    let mut done: BTreeMap<String, BernsteinFunction> = BTreeMap::new();
    fn visit(
        id: &str,
        table: &BTreeMap<&str, &PsiSpec>,
        done: &mut BTreeMap<String, BernsteinFunction>,
        stack: &mut Vec<String>,
    ) -> std::result::Result<(), ResolveError> {
        if done.contains_key(id) {
            return Ok(());
        }
        if stack.iter().any(|s| s == id) {
            return Err(ResolveError::Cycle(id.to_string()));
        }
        stack.push(id.to_string());
        let spec = table[id];
        for r in spec.references() {
            visit(r, table, done, stack)?;
        }
        let build = |e: Error| ResolveError::Build {
            id: id.to_string(),
            error: e,
        };
        let f = match spec {
            PsiSpec::Sum { terms } => {
                let mut iter = terms.iter();
                let first = iter.next().ok_or_else(|| {
                    build(Error::InvalidParameter("sum needs at least one term".into()))
                })?;
                let mut acc = done[first.as_str()].clone();
                for t in iter {
                    acc = acc.sum(&done[t.as_str()]).map_err(build)?;
                }
                acc
            }
            PsiSpec::Scale { factor, of } => done[of.as_str()].scaled(*factor).map_err(build)?,
            leaf => leaf.build_leaf().map_err(build)?,
        };
        stack.pop();
        done.insert(id.to_string(), f);
        Ok(())
    }
    for (id, _) in specs {
        visit(id, &table, &mut done, &mut Vec::new())?;
    }
    Ok(done)
}
