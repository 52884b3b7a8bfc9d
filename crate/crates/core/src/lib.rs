//! Feasible-interior-point methods for dense linear and semidefinite programs.
//!
//! Iterates stay strictly feasible throughout: after an initial feasibility
//! phase every step moves inside the null space of the constraints, and the
//! steplength is a fixed fraction of the distance to the boundary of the cone.
//! Degrees of freedom that leave the objective unchanged are used to center
//! the iterate between steps.
//!
//! ```
//! use fipm::io::fixtures;
//! use fipm::sdp::{sdp_solve, SdpConfig, SdpStatus, Search};
//!
//! let problem = fixtures::sos_example();
//! let start = fixtures::sos_start(0.75, 2.0);
//! let result = sdp_solve(&problem, &SdpConfig::for_search(Search::Gce), Some(&start)).unwrap();
//! assert_eq!(result.status, SdpStatus::Optimal);
//! assert!((result.objective - 1.0).abs() < 1e-8);
//! ```

// `!(v > 0.0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod centering;
pub mod cli;
pub mod decomp;
pub mod error;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod sdp;

pub use decomp::{decompose, Decomposition};
pub use error::{Error, Result};
pub use linalg::{DenseMatrix, Steplength, SymMatrix};
pub use lp::{LpConfig, LpProblem, LpResult, LpStatus};
pub use sdp::{SdpConfig, SdpProblem, SdpResult, SdpStatus, Search};
