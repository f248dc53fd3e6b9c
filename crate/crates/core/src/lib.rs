#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod domains;
pub mod error;
pub mod harness;
pub mod learners;
pub mod streams;
pub mod vector;

pub use domains::{AffineHull, Domain, ProjectionResult};
pub use error::{Error, Result};
