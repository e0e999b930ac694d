//! Generalized Marcum and Nuttall Q-functions.
//!
//! Three independent routes are provided: adaptive quadrature of the
//! defining integrals ([`oracle`]), finite closed forms for half-odd orders
//! ([`closed_form`]), and log-concavity bounds for arbitrary real orders
//! ([`bounds`]). [`harness`] checks the monotonicity and log-concavity
//! properties those bounds rest on.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod scalar;
pub mod bessel;
pub mod quad;
pub mod oracle;
pub mod closed_form;
pub mod bounds;
pub mod asymptotics;
pub mod moment;
pub mod harness;

pub use error::{Error, Result};
pub use oracle::{Eval, MarcumArgs, Method, NuttallArgs, Oracle};
