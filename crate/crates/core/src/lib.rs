//! Explicit GRH-conditional bounds for the norms of prime ideals generating
//! the ideal class group of a number field `K = Q[x]/(P)`.
//!
//! The crate provides the field arithmetic needed by the Weil explicit
//! formula (signature, discriminant, splitting of small primes), the closed
//! form bounds, the one-step check of Belabas, Diaz y Diaz and Friedman, and
//! the multistep search which looks for a negative direction of the quadratic
//! form `q_K` on spaces of even step functions.
//!
//! ```
//! use genbound::{algorithms::Field, numberfield::Polynomial};
//!
//! let p: Polynomial = "x^2 + 1".parse().unwrap();
//! let mut field = Field::new(p, None, None).unwrap();
//! assert_eq!(field.bdydf().unwrap().t, 5);
//! ```

pub mod algorithms;
pub mod closed_form_bounds;
pub mod error;
pub mod explicit_formula;
pub mod negative_eigenvalue;
pub mod numberfield;
pub mod special_functions;

pub use error::{Error, Result};

/// Margin applied to every success test: a check value counts as negative
/// only when it is below `-SUCCESS_EPS`.
pub const SUCCESS_EPS: f64 = 1e-9;
