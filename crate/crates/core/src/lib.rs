//! Exact arithmetic for integral quadratic lattices: K3 and torus lattices,
//! the twisted lattices T(k,m,n) = U(k) ⊕ U(m) ⊕ ⟨−2n⟩, their embeddings,
//! rational equivalence, discriminant forms, correspondence certificates
//! and elliptic-fibration divisor arithmetic.

pub mod correspondence;
pub mod discriminant;
pub mod embeddings;
pub mod fibration;
pub mod arith;
pub mod error;
pub mod json;
pub mod lattice;
pub mod matrix;
pub mod names;
pub mod normal_form;
pub mod rational_forms;
pub mod reproduction;

pub use error::{Error, Result};
pub use lattice::{Lattice, Signature};
pub use matrix::{IntMatrix, Matrix, RatMatrix};
