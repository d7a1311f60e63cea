//! Positivity deciders for operator-system tensor cones over concrete matrix
//! systems, with LMI/LP feasibility at the core: minimal and maximal tensor
//! positivity against coordinate quotients, quotient-cone membership, and
//! relative tight Riesz interpolation, each returning a witness or a Farkas
//! certificate.

pub mod cli;
pub mod error;
pub mod feasibility;
pub mod instances;
pub mod linalg;
pub mod opsys;
pub mod riesz;
pub mod tensor;

pub use error::{Error, Result};
