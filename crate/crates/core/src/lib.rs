//! Higher reduced enveloping algebras of `SL_2` over small finite fields.
//!
//! The crate builds the finite-dimensional algebras `Di(G_r)`, `U^[r]_χ(G)`
//! and `U_χ(sl_2)` as structure-constant algebras, constructs their simple,
//! baby Verma and teenage Verma modules, and checks the Steinberg-type
//! decomposition of simples mechanically.

pub mod dist;
pub mod error;
pub mod gf;
pub mod hyper;
pub mod linalg;
pub mod repthy;
pub mod serial;
pub mod verify;

pub use error::{Error, Result};
pub use gf::{Fe, Field, FieldParams};
