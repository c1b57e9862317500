//! Meshless method-of-lines solver for the coupled Drinfeld-Sokolov-Wilson
//! system.
//!
//! Space is discretized by global radial-basis-function collocation
//! (multiquadric, inverse multiquadric or Gaussian kernels) on a 1D node
//! set: nodal values are interpolated in the RBF basis and the first/third
//! derivative operators become dense matrices acting on nodal values. The
//! resulting coupled ODE system is advanced by classical fourth-order
//! Runge-Kutta with Dirichlet boundary values enforced at every stage.
//!
//! Crate layout:
//!
//! - [`kernel`]: the RBF families and their closed-form derivatives
//! - [`operator`]: node sets, interpolation/differentiation matrices, dense
//!   LU, SVD condition numbers
//! - [`dsw`]: the PDE system, its traveling-wave reference solution and
//!   residual diagnostics
//! - [`integrate`]: RK4 stepping and snapshot collection
//! - [`experiment`]: error metrics, pointwise tables, shape sweeps,
//!   refinement studies
//! - [`cli`]: configuration, orchestration and CSV output
//! - [`numdiff`]: extrapolated finite differences (test oracles and
//!   residual diagnostics)

pub mod cli;
pub mod dsw;
pub mod error;
pub mod experiment;
pub mod integrate;
pub mod kernel;
pub mod numdiff;
pub mod operator;

pub use error::{Error, Result};
