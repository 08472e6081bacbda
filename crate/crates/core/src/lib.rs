//! Exact mixed volumes, higher-order difference bodies and anti-blocking
//! decompositions of polytopes.
//!
//! Everything is computed in rational arithmetic. Polytopes are kept as
//! vertex sets ([`VPolytope`]); volumes come from a triangulation of the
//! exact hull; mixed volumes from polarization over Minkowski sums.
//!
//! ```
//! use polydiff::constructions::{axis_simplex, higher_difference_body};
//! use polydiff::rational::{int, ratio};
//!
//! let triangle = axis_simplex(&[int(1), int(1)])?;
//! let d2 = higher_difference_body(&triangle, 2)?;
//! assert_eq!(d2.dim(), 4);
//! assert_eq!(d2.volume(), ratio(15, 4));
//! # Ok::<(), polydiff::Error>(())
//! ```

pub mod constructions;
pub mod covers;
pub mod error;
mod hull;
pub mod linalg;
pub mod lp;
pub mod mixed;
pub mod polytope;
pub mod rational;
pub mod report;
pub mod sample;
pub mod search;
pub mod selftest;
pub mod verify;

pub use error::{Error, Result};
pub use mixed::{mixed_volume, MixedVolumeQuery};
pub use polytope::VPolytope;
pub use rational::{Point, Rational};
pub use report::VerificationReport;
pub use verify::Verifier;
