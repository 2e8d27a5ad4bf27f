//! Finite-truncation numerics for the number and canonical phase observables
//! of a single mode: phase effects and moment operators, finite-section
//! ground states, Lenard bounds, complementarity witnesses and Wasserstein-2
//! measurement errors.

pub mod angle;
pub mod christoffel;
pub mod error;
pub mod linalg;
pub mod mu_region;
pub mod observables;
pub mod quadrature;
pub mod spectral_bounds;
pub mod transport;

pub use error::{Error, Result};
