//! fracflow: fractional directional calculus on periodic grids.
//!
//! The library provides, over an arbitrary orthonormal frame of R^d:
//!
//! * fractional directional derivatives, gradients and divergences as
//!   spectral multipliers, with Grunwald-Letnikov and Marchaud quadrature
//!   realizations used as independent oracles;
//! * exact-in-time spectral solvers for the fractional advection,
//!   advection-dispersion, directional heat and Poisson-transport
//!   equations;
//! * a one-sided stable subordinator engine (density, exact sampling,
//!   Laplace self-checks) and Monte Carlo constructions of the processes
//!   solving each equation;
//! * an empirical-characteristic-function validation harness that
//!   cross-checks every solver against its process.
//!
//! The `fracflow` binary exposes solving, sampling, operator application
//! and the validation suite; see the repository README.

pub mod config;
pub mod error;
pub mod fft;
pub mod frame;
pub mod grid;
pub mod io;
pub mod ops;
pub mod process;
pub mod quad;
pub mod rng;
pub mod solver;
pub mod stable;
pub mod validate;

pub use error::{Error, Result};
pub use frame::{Direction, Frame};
pub use grid::{Grid, ScalarField, SpectralField, VectorField};

/// Library version recorded in output sidecars.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
