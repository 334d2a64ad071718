//! Numerical laboratory for curvature flows of graph hypersurfaces in
//! warped-product ambient spaces.
//!
//! A closed hypersurface written as a radial graph over a round base is
//! driven by the speed law du/dt = (F(kappa) - f(u)) v, where F is a
//! symmetric curvature function from a small catalog, f is a prescribed
//! target curvature, and v is the graph gradient factor. Stationary points
//! are hypersurfaces of prescribed Weingarten curvature F(kappa) = f.
//!
//! The crate provides:
//!
//! * [`symfunc`]: the catalog of curvature functions with first and second
//!   derivatives in the eigenframe, their admissible cones, a sampling
//!   certification suite for the structural hypotheses, and the off-diagonal
//!   pinching bound used by curvature estimates.
//! * [`ambient`]: warped-product ambient geometry (euclidean, sphere,
//!   hyperbolic, or a user-supplied warp table) with the convex potential
//!   used by the monitors.
//! * [`hypersurface`]: discretized graph hypersurfaces in rotationally
//!   symmetric classes, with metric, shape tensor, principal curvatures, and
//!   support quantities at every node.
//! * [`flow`]: the time integrator with step-size control, convergence and
//!   failure detection, and the one-dimensional stationary-radius solver.
//! * [`monitors`]: pointwise test quantities and the a-priori bounds report
//!   checked along recorded flows.
//! * [`scenario`] and [`output`]: run configuration and deterministic CSV /
//!   summary writers behind the command line interface.

pub mod ambient;
pub mod error;
pub mod flow;
pub mod hypersurface;
pub mod monitors;
pub mod output;
pub mod scenario;
pub mod symfunc;

pub use error::{Error, Result};
