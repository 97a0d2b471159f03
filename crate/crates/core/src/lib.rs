#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod error;
pub mod format;
pub mod functionals;
pub mod geometry;
pub mod sampling;
pub mod surface;
pub mod systole;
pub mod unfold;

pub use error::{Error, Result};
