//! Multidimensional Bochner–Phillips calculus on tuples of commuting matrix
//! semigroup generators.
//!
//! A nonpositive Bernstein function ψ of n variables, given by its Lévy
//! triplet, is applied to an n-tuple of commuting generators A through
//! ψ(A) = c₀I + Σ c₁ʲAⱼ + ∫ (T_A(v) − I) dμ(v). On top of that the crate
//! provides Fréchet derivatives, divided-difference identities, spectral
//! shift distributions with the trace formula, perturbation determinants
//! with Stieltjes inversion, and checks of the Lipschitz and ideal-norm
//! bounds.

pub mod bernstein;
pub mod bounds;
pub mod calculus;
pub mod error;
pub mod linalg;
pub mod perturbation;
pub mod quadrature;
pub mod semigroups;

pub use error::{Error, Result};
