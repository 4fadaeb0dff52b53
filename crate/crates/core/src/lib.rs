//! Exact computer algebra for n-Lie superalgebras.

pub mod catalog;
pub mod charp;
pub mod derivations;
pub mod error;
pub mod field;
pub mod liegen;
pub mod linalg;
pub mod multilinear;
pub mod nlie;
pub mod poly;
pub mod report;
pub mod superalgebras;
pub mod superspace;
pub mod universal_w;

pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use linalg::{SparseMatrix, SparseVec, Span};
pub use multilinear::{AntiMultiMap, SuperMultiMap};
pub use superspace::{Parity, SuperSpace, SuperVector, VectorParity};
pub use universal_w::{box_product, w_bracket, GradedSubalgebra};
