//! Finite-dimensional quantum graphs, quantum isomorphisms and their splitting
//! theory, computed with dense complex tensor contractions.

pub mod dsl;
pub mod error;
pub mod frobenius;
pub mod galois;
pub mod hilb;
pub mod io;
pub mod linalg;
pub mod morita;
pub mod par;
pub mod qgraph;
pub mod qiso;
pub mod random;
pub mod report;
pub mod split;

pub use error::{Error, Result};
pub use hilb::{Morphism, Shape, C64, DEFAULT_TOL};
pub use io::Json;
pub use par::Execution;
pub use report::{Check, Report};
