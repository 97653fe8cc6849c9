//! Exact rational computations for free-fermionic six-vertex models with a
//! reflecting boundary: local vertex weights, row-transfer wavefunctions,
//! the symmetric functions they equal, and a seeded verifier for the
//! identities relating them.

pub mod error;
pub mod identities;
pub mod lattice;
pub mod matrix;
pub mod scalar;
pub mod symfunc;
pub mod vertex;

pub use error::{Error, Result};
pub use identities::{Budget, VerificationReport, Verifier};
pub use lattice::{FockState, StateVector};
pub use scalar::{Kind, ParamPoint, Scalar};
pub use symfunc::{Partition, Sign, SymParams};
pub use vertex::{Mat2, Mat4, Mutation};
