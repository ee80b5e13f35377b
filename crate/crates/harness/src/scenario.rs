//! Scenario files: named Bernstein functions, named tuples and an ordered
//! list of checks.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use bochner_core::bernstein::{resolve, BernsteinFunction, DensityOptions, GridSpec, PsiSpec};
use bochner_core::bounds::Theorem;
use bochner_core::linalg::NormKind;
use bochner_core::semigroups::{BasisKind, GeneratorTuple, TupleSpec};
use serde::{Deserialize, Serialize};

use crate::ConfigError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default, rename = "psi")]
    pub functions: Vec<NamedPsi>,
    #[serde(default, rename = "tuple")]
    pub tuples: Vec<NamedTuple>,
    #[serde(default, rename = "check")]
    pub checks: Vec<CheckSpec>,
    #[serde(default)]
    pub output: Option<OutputSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub dir: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedPsi {
    pub id: String,
    #[serde(flatten)]
    pub spec: PsiSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedTuple {
    pub id: String,
    #[serde(flatten)]
    pub spec: TupleSpec,
}

/// Commuting-preserving perturbation directions C = (C₁, …, Cₙ).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DirectionSpec {
    /// Cᵢ = fᵢ·I.
    ScaledIdentity { factors: Vec<f64> },
    /// Cᵢ = fᵢ·Aᵢ.
    Generators { factors: Vec<f64> },
    /// Cᵢ = P·diag(dᵢ)·P⁻¹ in the tuple's common eigenbasis.
    BasisDiagonal { diagonals: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuitePair {
    pub arity: usize,
    pub dim: usize,
    pub basis: BasisKind,
}

fn default_true() -> bool {
    true
}

fn default_zero() -> usize {
    0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Operation {
    /// Finite-difference Bernstein proxy on a grid.
    ValidatePsi { psi: String, grid: GridSpec },
    ValidateTuple {
        tuple: String,
        #[serde(default = "default_true")]
        expect_valid: bool,
    },
    /// eval against the catalog closed form at the given points.
    ClosedForm {
        psi: String,
        points: Vec<Vec<f64>>,
        tolerance: f64,
    },
    /// ψ(A) by the Lévy sum against the joint-spectrum evaluation.
    PsiOf {
        psi: String,
        tuple: String,
        tolerance: f64,
    },
    /// Widder measure path against exp(tψ(A)).
    Subordinate {
        psi: String,
        tuple: String,
        t: Vec<f64>,
        tolerance: f64,
    },
    FrechetRemainder {
        psi: String,
        tuple: String,
        direction: DirectionSpec,
        h: Vec<f64>,
        norm: NormKind,
        min_slope: f64,
        min_ratio_drop: f64,
    },
    DividedDifference {
        psi: String,
        tuple: String,
        index: usize,
        /// Tuple supplying the extra generator.
        extra: String,
        #[serde(default = "default_zero")]
        extra_index: usize,
        tolerance: f64,
    },
    SpectralShift {
        a: String,
        b: String,
        v: Vec<Vec<f64>>,
        tolerance: f64,
    },
    SemigroupTrace {
        a: String,
        b: String,
        v: Vec<Vec<f64>>,
        tolerance: f64,
    },
    TraceFormula {
        psi: String,
        a: String,
        b: String,
        tolerance: f64,
    },
    ResolventTrace {
        a: String,
        b: String,
        lambdas: Vec<Vec<f64>>,
        tolerance: f64,
    },
    SubordinatedShift {
        psi: String,
        a: String,
        b: String,
        s: Vec<f64>,
        tolerance: f64,
    },
    Determinant {
        a: String,
        b: String,
        c: String,
        /// Points (re, im) off the cut.
        z: Vec<[f64; 2]>,
        /// Relative tolerance for the determinant formula and the cocycle.
        tolerance: f64,
        /// Absolute tolerance for the logarithmic-derivative identities.
        derivative_tolerance: f64,
        /// Real λ > 0 for the quadrature path, ascending.
        #[serde(default)]
        lambdas: Vec<f64>,
        /// Bound on |Δ(λ_max) − 1|.
        #[serde(default)]
        limit_tolerance: Option<f64>,
    },
    ComplexInversion {
        a: String,
        b: String,
        y: f64,
        t: Vec<f64>,
        min_jump_distance: f64,
        tolerance: f64,
    },
    RealInversion {
        a: String,
        b: String,
        orders: Vec<usize>,
        t: Vec<f64>,
    },
    KreinIntegral {
        psi: String,
        a: String,
        b: String,
        tolerance: f64,
    },
    Theorem1 { psi: String, a: String, b: String },
    Theorem2 {
        psi: String,
        a: String,
        b: String,
        norm: NormKind,
    },
    BoundSuite {
        psi: String,
        theorem: Theorem,
        norm: NormKind,
        pair: SuitePair,
        first_seed: u64,
        count: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSpec {
    #[serde(default)]
    pub label: Option<String>,
    /// When set, the check passes only if it fails with this error kind.
    #[serde(default)]
    pub expect_error: Option<String>,
    #[serde(default)]
    pub density: Option<DensityOptions>,
    #[serde(flatten)]
    pub op: Operation,
}

impl Operation {
    pub fn name(&self) -> &'static str {
        match self {
            Operation::ValidatePsi { .. } => "validate_psi",
            Operation::ValidateTuple { .. } => "validate_tuple",
            Operation::ClosedForm { .. } => "closed_form",
            Operation::PsiOf { .. } => "psi_of",
            Operation::Subordinate { .. } => "subordinate",
            Operation::FrechetRemainder { .. } => "frechet_remainder",
            Operation::DividedDifference { .. } => "divided_difference",
            Operation::SpectralShift { .. } => "spectral_shift",
            Operation::SemigroupTrace { .. } => "semigroup_trace",
            Operation::TraceFormula { .. } => "trace_formula",
            Operation::ResolventTrace { .. } => "resolvent_trace",
            Operation::SubordinatedShift { .. } => "subordinated_shift",
            Operation::Determinant { .. } => "determinant",
            Operation::ComplexInversion { .. } => "complex_inversion",
            Operation::RealInversion { .. } => "real_inversion",
            Operation::KreinIntegral { .. } => "krein_integral",
            Operation::Theorem1 { .. } => "theorem1",
            Operation::Theorem2 { .. } => "theorem2",
            Operation::BoundSuite { .. } => "bound_suite",
        }
    }

    /// (function ids, tuple ids) referenced by the check.
    pub fn references(&self) -> (Vec<&str>, Vec<&str>) {
        use Operation::*;
        match self {
            ValidatePsi { psi, .. } | ClosedForm { psi, .. } | BoundSuite { psi, .. } => {
                (vec![psi], vec![])
            }
            ValidateTuple { tuple, .. } => (vec![], vec![tuple]),
            PsiOf { psi, tuple, .. }
            | Subordinate { psi, tuple, .. }
            | FrechetRemainder { psi, tuple, .. } => (vec![psi], vec![tuple]),
            DividedDifference {
                psi, tuple, extra, ..
            } => (vec![psi], vec![tuple, extra]),
            SpectralShift { a, b, .. }
            | SemigroupTrace { a, b, .. }
            | ResolventTrace { a, b, .. }
            | ComplexInversion { a, b, .. }
            | RealInversion { a, b, .. } => (vec![], vec![a, b]),
            Determinant { a, b, c, .. } => (vec![], vec![a, b, c]),
            TraceFormula { psi, a, b, .. }
            | SubordinatedShift { psi, a, b, .. }
            | KreinIntegral { psi, a, b, .. }
            | Theorem1 { psi, a, b }
            | Theorem2 { psi, a, b, .. } => (vec![psi], vec![a, b]),
        }
    }

    /// Every tolerance-like number, which must be positive.
    fn tolerances(&self) -> Vec<f64> {
        use Operation::*;
        match self {
            ClosedForm { tolerance, .. }
            | PsiOf { tolerance, .. }
            | Subordinate { tolerance, .. }
            | DividedDifference { tolerance, .. }
            | SpectralShift { tolerance, .. }
            | SemigroupTrace { tolerance, .. }
            | TraceFormula { tolerance, .. }
            | ResolventTrace { tolerance, .. }
            | SubordinatedShift { tolerance, .. }
            | KreinIntegral { tolerance, .. } => vec![*tolerance],
            ComplexInversion {
                tolerance,
                y,
                min_jump_distance,
                ..
            } => vec![*tolerance, *y, *min_jump_distance],
            Determinant {
                tolerance,
                derivative_tolerance,
                limit_tolerance,
                ..
            } => {
                let mut v = vec![*tolerance, *derivative_tolerance];
                v.extend(limit_tolerance);
                v
            }
            FrechetRemainder {
                min_slope,
                min_ratio_drop,
                ..
            } => vec![*min_slope, *min_ratio_drop],
            ValidatePsi { .. }
            | ValidateTuple { .. }
            | RealInversion { .. }
            | Theorem1 { .. }
            | Theorem2 { .. }
            | BoundSuite { .. } => vec![],
        }
    }
}

/// A scenario with every reference resolved.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub scenario: Scenario,
    pub functions: BTreeMap<String, BernsteinFunction>,
    pub tuples: BTreeMap<String, GeneratorTuple>,
}

impl Resolved {
    pub fn psi_spec(&self, id: &str) -> Option<&PsiSpec> {
        self.scenario
            .functions
            .iter()
            .find(|f| f.id == id)
            .map(|f| &f.spec)
    }

    pub fn tuple_spec(&self, id: &str) -> Option<&TupleSpec> {
        self.scenario
            .tuples
            .iter()
            .find(|t| t.id == id)
            .map(|t| &t.spec)
    }

    /// The named function specs reachable from `ids`, in id order.
    pub fn psi_closure(&self, ids: &[&str]) -> Vec<(String, PsiSpec)> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<String> = ids.iter().map(|s| s.to_string()).collect();
        while let Some(id) = stack.pop() {
            if seen.insert(id.clone()) {
                if let Some(spec) = self.psi_spec(&id) {
                    stack.extend(spec.references().into_iter().map(String::from));
                }
            }
        }
        seen.into_iter()
            .filter_map(|id| self.psi_spec(&id).map(|s| (id, s.clone())))
            .collect()
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, ConfigError> {
    toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
}

pub fn load_scenario(path: &Path) -> Result<Scenario, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
    parse_scenario(&text)
}

/// Resolves functions and tuples and checks every reference and tolerance.
pub fn resolve_scenario(scenario: &Scenario) -> Result<Resolved, ConfigError> {
    let named: Vec<(String, PsiSpec)> = scenario
        .functions
        .iter()
        .map(|f| (f.id.clone(), f.spec.clone()))
        .collect();
    let functions = resolve(&named).map_err(|e| ConfigError::Resolve(e.to_string()))?;
    let mut tuples = BTreeMap::new();
    for t in &scenario.tuples {
        let built = t
            .spec
            .build()
            .map_err(|e| ConfigError::Resolve(format!("tuple '{}': {e}", t.id)))?;
        if tuples.insert(t.id.clone(), built).is_some() {
            return Err(ConfigError::Resolve(format!("duplicate tuple id '{}'", t.id)));
        }
    }
    for (k, check) in scenario.checks.iter().enumerate() {
        let (ps, ts) = check.op.references();
        for p in ps {
            if !functions.contains_key(p) {
                return Err(ConfigError::Resolve(format!(
                    "check {k} ({}) references undefined function '{p}'",
                    check.op.name()
                )));
            }
        }
        for t in ts {
            if !tuples.contains_key(t) {
                return Err(ConfigError::Resolve(format!(
                    "check {k} ({}) references undefined tuple '{t}'",
                    check.op.name()
                )));
            }
        }
        for tol in check.op.tolerances() {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(ConfigError::Invalid(format!(
                    "check {k} ({}) has a non-positive tolerance {tol}",
                    check.op.name()
                )));
            }
        }
    }
    Ok(Resolved {
        scenario: scenario.clone(),
        functions,
        tuples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_scenario() {
        let s = parse_scenario(
            r#"
name = "tiny"

[[psi]]
id = "d"
kind = "dirac"
point = [1]

[[tuple]]
id = "A"
kind = "diagonal"
diagonals = [[-1, -2]]

[[check]]
op = "psi_of"
psi = "d"
tuple = "A"
tolerance = 1e-12
"#,
        )
        .unwrap();
        let r = resolve_scenario(&s).unwrap();
        assert_eq!(r.functions.len(), 1);
        assert_eq!(r.tuples["A"].dim(), 2);
    }

    #[test]
    fn unknown_reference_is_a_resolve_error() {
        let s = parse_scenario(
            r#"
name = "bad"
[[check]]
op = "theorem1"
psi = "nope"
a = "A"
b = "B"
"#,
        )
        .unwrap();
        assert!(matches!(resolve_scenario(&s), Err(ConfigError::Resolve(_))));
    }

    #[test]
    fn negative_tolerance_rejected() {
        let s = parse_scenario(
            r#"
name = "bad"
[[psi]]
id = "d"
kind = "dirac"
point = [1]
[[tuple]]
id = "A"
kind = "diagonal"
diagonals = [[-1]]
[[check]]
op = "psi_of"
psi = "d"
tuple = "A"
tolerance = -1.0
"#,
        )
        .unwrap();
        assert!(matches!(resolve_scenario(&s), Err(ConfigError::Invalid(_))));
    }
}
