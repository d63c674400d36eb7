//! Thomas- and Weyl-type invariants of mappings between non-symmetric affine
//! connection spaces, evaluated on first-order jets.
//!
//! Every field is stored as its value and first partial derivatives at one
//! point. That is enough data to evaluate each invariant exactly, so a mapping
//! can be certified by computing an invariant in the source space and in the
//! image space and comparing the two tensors. With [`Rational`] scalars the
//! comparison is exact.

pub mod connection;
pub mod error;
pub mod exact;
pub mod index_expr;
pub mod invariants;
pub mod io;
pub mod jet;
pub mod linalg;
pub mod mappings;
pub mod report;
pub mod residual;
pub mod scalar;
pub mod suite;
pub mod tensor;

pub use connection::ConnectionSpace;
pub use error::{Error, Result};
pub use jet::Jet;
pub use scalar::{Mode, Scalar};
pub use tensor::{Slot, Symmetrization, Tensor, Valence};

/// Exact scalar type used in rational mode.
pub use exact::Rational;
