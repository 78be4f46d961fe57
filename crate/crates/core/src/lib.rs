//! Potential theory for the bi-axially symmetric equation
//! `u_xx + u_yy + (2α/x) u_x + (2β/y) u_y = 0` on the quarter plane.

// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod bie;
pub mod geometry;
pub mod kernels;
pub mod potentials;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
