//! Nonpositive Bernstein functions of n variables given by Lévy triplets,
//! their divided differences and their subordination measures.

pub mod catalog;
pub mod divided;
pub mod function;
pub mod measure;
pub mod spec;
pub mod validate;
pub mod widder;

pub use catalog::{catalog_entries, dirac, frac_power, log_resolvent, tempered_stable, CatalogEntry, DensityOptions};
pub use divided::{DividedDifference, DEFAULT_W_ORDER};
pub use function::{BernsteinFunction, CatalogTag};
pub use measure::{DensityBlock, LevyMeasure, NodeBudget, WeightedPoint};
pub use spec::{resolve, PsiSpec, ResolveError};
pub use validate::{validate_bernstein, BernsteinReport, GridSpec, Violation};
pub use widder::{widder_measure, SubordinationMeasure, POISSON_TAIL};
