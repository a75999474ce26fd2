//! Finite-difference laboratory for the two-media reduced wave operator
//! `−Δ/μ(x) − z` on bounded boxes, with diagnostics for the radiation
//! condition and the resolvent.

pub mod diagnostics;
pub mod error;
pub mod field;
pub mod geometry;
pub mod lab;
pub mod operator_solver;
pub mod oracles;
pub mod spectral;

pub use error::{Error, Result};
