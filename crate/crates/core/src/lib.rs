//! Two-qubit entanglement in a stochastic two-atom cavity model.
//!
//! * [`concurrence`]: pure, product-form, Wootters and ensemble-averaged
//!   concurrence.
//! * [`model`]: the `|s₁ s₂ n⟩` basis, the interaction-picture potential and
//!   its selection rules, initial product states and the field partial trace.
//! * [`dynamics`]: Gaussian random trajectories x(t), per-trajectory
//!   Schrödinger integration and the seeded parallel ensemble average.
//! * [`closed_form`]: analytic averaged populations W_ij(n̄) and the
//!   averaged concurrence as a function of n̄.
//! * [`special`] and [`tensor`]: numerical support.
//! * [`config`] and [`cli`]: run configuration and the `cqed` command.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod closed_form;
pub mod concurrence;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod special;
pub mod tensor;

pub use error::{Error, Result};
