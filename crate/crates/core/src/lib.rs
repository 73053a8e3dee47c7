//! Exact arithmetic in finite Dickson nearfields and the near-vector spaces
//! `R^m` over them.
//!
//! * [`nearfield`]: construction of DN(q,n) and its operations
//! * [`nvspace`]: vectors and matrices with the right scalar action
//! * [`ege`]: Expanded Gaussian Elimination with replayable traces
//! * [`closure`]: brute-force `gen`, `LC_p` strata and linearity index
//! * [`linmaps`]: linear and normal maps `R^n → R^n`
//! * [`subgroups`]: counting R-subgroups by dimension
//! * [`seed`]: seed numbers and seed-set construction
//! * [`format`]: the matrix file format

mod arith;
pub mod closure;
pub mod ege;
pub mod error;
pub mod format;
pub mod linmaps;
pub mod nearfield;
pub mod nvspace;
pub mod seed;
pub mod subgroups;

pub use error::{Error, Result};
pub use nearfield::{DicksonPair, Elem, Nearfield, PairViolation, Style, Witness};
pub use nvspace::{NfMatrix, NfVector};

/// Default bound on the number of module elements an exhaustive routine may
/// touch.
pub const DEFAULT_BUDGET: u64 = 1_000_000;
