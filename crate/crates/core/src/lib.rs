//! Exact invariant Hodge theory on nilmanifolds and solvmanifolds.

pub mod error;
pub mod bigraded;
pub mod corpus;
pub mod exterior;
pub mod hodge;
pub mod invariants;
pub mod lie;
pub mod linalg;
pub mod manifold;
pub mod report;
pub mod scalar;
pub mod subspace;
pub mod symbolic;

pub use error::{Error, ErrorClass, Result};
pub use exterior::{Form, MultiIndex};
pub use lie::LiePresentation;
pub use linalg::Matrix;
pub use scalar::Scalar;
pub use subspace::Subspace;
