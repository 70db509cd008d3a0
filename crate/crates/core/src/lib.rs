//! Exact computations with Hermitian lattices over the Eisenstein integers.
//!
//! The library re-derives, in exact arithmetic, the finite facts behind the
//! lattice-side classification of cubic surfaces whose automorphism group
//! contains the order-54 complex reflection group G(3,3,3): Weyl and
//! automorphism group orders, discriminant-group structure, the unimodular
//! glue of D3 with the hyperbolic plane H, the stabilizer trichotomy on the
//! upper half-plane, and the matching Hesse-pencil classification through the
//! modular j-invariant. A registry of named checks (C1..C15) packages the
//! whole suite for the `eislat` CLI.
//!
//! ```
//! use eislat::constructions::d3;
//! use eislat::groups::{full_aut_definite, weyl_group};
//!
//! let d3 = d3();
//! assert_eq!(d3.short_vectors(2).unwrap().len(), 54);
//! assert_eq!(weyl_group(&d3, None).unwrap().order(), 54);
//! assert_eq!(full_aut_definite(&d3).unwrap().order(), 1296);
//! ```

pub mod checks;
pub mod constructions;
pub mod eisenstein;
pub mod error;
pub mod finite;
pub mod groups;
pub mod lattice;
pub mod linalg;
pub mod modular;

pub use eisenstein::{EisensteinInt, EisensteinScalar, F3};
pub use error::{Error, Result};
pub use linalg::{EMatrix, EVector, KMatrix, KVector, SnfResult};
pub use num_complex::Complex64;
