//! H2-optimal model order reduction for continuous-time LTI descriptor systems.
//!
//! The crate provides the classical iterative rational Krylov algorithm ([`irka::irka`])
//! and a Riemannian gradient descent variant with backtracking line search
//! ([`rgd::irka2`]) that keeps every iterate stable, decreases the H2 error
//! monotonically and, for SISO systems, stays on a single connected component
//! of the manifold of stable systems (labelled by the Cauchy index).
//!
//! Module map:
//!
//! - [`linalg`]: dense kernels (linear solves, generalized eigenproblems,
//!   generalized Sylvester/Lyapunov equations).
//! - [`lti`]: the descriptor state-space model, transfer-function evaluation,
//!   pole-residue form, stability and Cauchy index.
//! - [`hardy`]: H2 norms and inner products, the tangent space at a reduced
//!   model, gradient pairings and interpolatory optimality residuals.
//! - [`interp`]: bitangential Hermite interpolation by Petrov-Galerkin projection.
//! - [`irka`]: the classical fixed-point iteration.
//! - [`rgd`]: the line-search variant.
//! - [`models`]: built-in test models.

pub mod error;
pub mod hardy;
pub mod interp;
pub mod irka;
pub mod linalg;
pub mod lti;
pub mod models;
pub mod rgd;

#[cfg(any(test, feature = "oracles"))]
#[doc(hidden)]
pub mod oracles;

pub use error::{Error, Result};
pub use hardy::{H2Cache, OptimalityResidual, TangentBasis, TangentElement};
pub use interp::{InterpolationData, ProjectionPair};
pub use irka::{IterationRecord, RunConfig, RunResult, Termination};
pub use linalg::{CMat, GeneralizedEig, Mat};
pub use lti::{CauchyIndex, PoleResidue, StateSpace};
pub use num_complex::Complex64;
pub use rgd::{GramianSet, LineSearchOutcome, Rejection, RejectionReason};
