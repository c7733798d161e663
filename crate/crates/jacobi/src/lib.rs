//! Beaded Jacobi diagrams over free groups and the linear functors they define.
//!
//! Scalars are exact; the numerical core is generic over [`linalg::Field`] and the
//! aliases below fix the default choice.

pub mod bridge;
pub mod catlie;
pub mod diagram;
pub mod error;
pub mod freegroup;
pub mod fuzz;
pub mod handlebody;
pub mod linalg;
pub mod perm;
pub mod reference;
pub mod relations;
pub mod report;

pub use error::{Error, Result};
pub use handlebody::ArcVector;

/// Default exact scalar.
pub type Rational = num_rational::BigRational;

/// Library version, part of every cache key.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Combination of canonical open diagrams.
pub type DiagramVector<F = Rational> = linalg::SparseVector<diagram::CanonicalDiagram, F>;
