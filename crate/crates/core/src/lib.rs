//! Exact decision procedures for the geometry of Lipschitz-free spaces over
//! finite pointed metric spaces.
//!
//! Everything is computed over exact rationals: free-space norms with
//! primal/dual transport certificates, norm attainment of weighted molecule
//! families, norming functions and their extremal 1-Lipschitz extensions,
//! and Gâteaux/Fréchet differentiability of the norm at finitely supported
//! elements of the unit sphere.

// Dense matrix code reads best with index loops.
#![allow(clippy::needless_range_loop)]

pub mod differentiability;
pub mod error;
pub mod generators;
pub mod json;
pub mod metric;
pub mod molecule;
pub mod norming;
pub mod oracles;
pub mod potential;
pub mod rational;
pub mod transport;

pub use error::{Error, Result};
pub use metric::{FiniteMetricSpace, RawSpace, ValidationReport};
pub use molecule::{BetaMatrix, MoleculeSystem, PointMassElement};
pub use potential::{Closure, NegativeCycleWitness, PotentialTable};
pub use rational::Rational;
