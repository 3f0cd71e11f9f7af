//! Exact calculus of generalized differential forms `α + α′m` on ℝⁿ, where
//! `m` is an odd form of degree -1 with `m² = 0` and `dm = ε`.
//!
//! All coefficients are polynomials over the rationals, so every identity is
//! checked by exact equality.
//!
//! | module | contents |
//! |---|---|
//! | [`ring`] | rationals, sparse polynomials, `e^{poly}` sums, polynomial matrices |
//! | [`exterior`] | ordinary forms, vector fields, Cartan calculus |
//! | [`gform`] | generalized forms and their exterior derivative |
//! | [`superspace`] | forms as functions of `x`, odd `ζ` and odd `μ` |
//! | [`gvector`] | form-valued vector fields, brackets, the quaternionic so(3) |
//! | [`hamiltonian`] | generalized symplectic forms, Hamiltonian fields, RK4 oscillator |
//! | [`connection`] | connections, curvature, metrics, metric-compatible constructions |
//! | [`cover`] | `dm = ϑ - φm` on chart covers and canonical rescaling |
//! | [`suites`], [`fixtures`] | randomized identity suites and fixture runners used by the CLI |
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! ```text
//! cargo run --example generalized_forms
//! cargo run --example cartan_calculus
//! cargo run --example superspace_dictionary
//! cargo run --example quaternion_so3
//! cargo run --example hamiltonian_field
//! cargo run --example damped_oscillator
//! cargo run --example metric_connection
//! cargo run --example canonical_cover
//! cargo run --example identity_suites -- 3
//! ```

// Tensor code indexes several arrays with the same loop variables.
#![allow(clippy::needless_range_loop)]

pub mod connection;
pub mod cover;
pub mod error;
pub mod exterior;
pub mod fixtures;
pub mod gform;
pub mod gvector;
pub mod hamiltonian;
pub mod json;
pub mod random;
pub mod ring;
pub mod suites;
pub mod superspace;

pub use error::{Error, Result};
