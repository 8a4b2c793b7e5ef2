//! Interlacing families of polynomials applied to Weaver's KS_r problem.
//!
//! The crate computes expected and mixed characteristic polynomials, walks
//! the interlacing-family tree to partition isotropic vector systems within
//! the `(1/√r + √δ)²` bound, and replays the multivariate barrier argument
//! that bounds the largest root of a mixed characteristic polynomial.
//!
//! It is `no_std` (with `alloc`). The `parallel` feature evaluates subset
//! expansions, tree children and Monte-Carlo trials on rayon; every
//! reduction runs in index order so results do not depend on the thread
//! count. The `serde` feature derives serialisation for reports.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

mod error;
mod math;
mod par;
mod policy;
#[cfg(test)]
mod testutil;

pub mod barrier;
pub mod interlace;
pub mod linalg;
pub mod mixedchar;
pub mod realpoly;
pub mod weaver;

pub use error::{Error, Result};
pub use policy::NumericPolicy;

pub use num_complex::Complex64;
