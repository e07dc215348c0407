pub mod cli;
pub mod error;
pub mod frht;
pub mod model;
pub mod operators;
pub mod quadrature;
pub mod specialfn;
pub mod spline;
pub mod translation;
pub mod type_s;
pub mod verify;
pub mod wavelet;

pub use error::{Error, Result};
