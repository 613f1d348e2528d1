//! Arbitrary-precision laboratory for planar fast-slow systems discretized
//! near transcritical, pitchfork and fold singularities.
//!
//! The crate iterates the one-step maps of forward Euler, explicit
//! Runge-Kutta tableaux, the Kahan method and an implicit pitchfork family
//! along their canards, and measures how the discretization changes the
//! delayed loss of stability:
//!
//! - [`linearization`] gives the transversal multipliers `J(s)` on the canard.
//! - [`analysis`] turns them into delay bounds `K*`, way-out indices and
//!   critical step sizes, and classifies jumps of the nonlinear orbits.
//! - [`verify`] bundles the structural properties as runnable suites.
//!
//! All arithmetic goes through [`Scalar`], an MPFR float whose precision
//! comes from a [`PrecisionContext`]. Orbits near canards get exponentially
//! close to invariant sets, so double precision glues them to the canard.
//!
//! ```
//! use canardlab::analysis::wayout;
//! use canardlab::schemes::Scheme;
//! use canardlab::systems::{SingularityKind, SystemParams};
//! use canardlab::PrecisionContext;
//!
//! let ctx = PrecisionContext::new(50)?;
//! let params = SystemParams::new(ctx.parse("0.01")?, ctx.parse("0.1")?)?;
//! let rho = ctx.parse("0.0105")?;
//! let exit = wayout(SingularityKind::Transcritical, &Scheme::Kahan, &params, &rho, 1000)?;
//! assert_eq!((exit.n_in, exit.psi), (10, 10));
//! # Ok::<(), canardlab::Error>(())
//! ```

pub mod analysis;
pub mod cli;
pub mod error;
pub mod linearization;
pub mod precision;
pub mod schemes;
pub mod systems;
pub mod verify;

pub use error::{Error, Result};
pub use precision::{approx_eq, PrecisionContext, Scalar};
