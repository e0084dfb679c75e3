//! Exact checks of KKM-style fixed-point hypotheses for piecewise-affine
//! self-maps of real intervals.

#![allow(clippy::result_large_err, clippy::large_enum_variant)]

pub mod cli;
pub mod conditions;
pub mod error;
pub mod exactnum;
pub mod kkm;
pub mod mapdef;
pub mod mapping;
pub mod plot;
pub mod verdict;

pub use error::{Error, Result};
