#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod collocate;
pub mod error;
pub mod exprlang;
pub mod fracbasis;
pub mod linalg;
pub mod problem;
pub mod specfun;

pub use error::{Error, Result};
