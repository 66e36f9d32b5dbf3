//! Finite-volume simulation of the Gray-Scott reaction-diffusion system.
//!
//! The discretization uses square control volumes with two-point fluxes and
//! homogeneous Neumann boundaries. Each time step treats the reaction terms
//! explicitly and the diffusion implicitly, so every step costs two
//! symmetric positive definite solves (one per species), done matrix-free by
//! conjugate gradients.
//!
//! Module map:
//!
//! - [`mesh`]: uniform Cartesian grid and face transmissibilities
//! - [`field`]: piecewise-constant cell fields, projection, discrete forms and norms
//! - [`diffusion`]: the implicit mass + diffusion operator and its CG solve
//! - [`imex`]: kinetics, the time step, the time loop and runtime monitors
//! - [`mms`]: manufactured solutions and the convergence/stability/interface studies
//! - [`patterns`]: pattern presets and the boxed initial condition
//! - [`output`]: PGM and CSV snapshots, error tables, run manifests
//! - [`cli`]: command-line front end

// `!(x > 0.0)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod diffusion;
pub mod error;
pub mod field;
pub mod imex;
pub mod mesh;
pub mod mms;
pub mod output;
pub mod patterns;

pub use diffusion::{ImplicitDiffusionOperator, SolveStats};
pub use error::{Error, Result};
pub use field::{CellField, Quadrature};
pub use imex::{GrayScottParams, MonitorReport, RunConfig, SimState};
pub use mesh::{Face, UniformMesh};
pub use mms::{ErrorRow, ErrorTable, ManufacturedCase};
pub use patterns::PatternPreset;
