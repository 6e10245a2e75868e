//! Harmonic cubic forms on Euclidean space whose Hessian has squared norm
//! proportional to the squared length, `|Hess P|^2 = kappa |x|^2`.
//!
//! The crate is split into:
//!
//! * [`tensor_core`]: the [`CubicForm`] type, evaluation, the Hessian-Gram
//!   matrix and Einstein verification, JSON I/O.
//! * [`constructors`]: simplicial forms, the dimension-raising recursion,
//!   tensor products, Cartan's isoparametric cubics, Pfaffian forms and a
//!   catalog of named examples.
//! * [`combinatorics`]: triple systems and tight frames, with their
//!   associated cubic forms.
//! * [`analysis`]: nonassociativity tensors, critical lines, extreme sets,
//!   mkc, decomposability witnesses, fingerprints and the low-dimensional
//!   classifier.
//! * [`cli`]: the `cubic` command line frontend.

pub mod analysis;
pub mod cli;
pub mod combinatorics;
pub mod constructors;
mod error;
pub mod linalg;
pub mod tensor_core;

pub use error::{Error, Result};
pub use tensor_core::{CubicForm, VerificationReport};
