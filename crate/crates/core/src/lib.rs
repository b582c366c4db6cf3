pub mod algebra;
pub mod complexes;
pub mod error;
pub mod fixtures;
pub mod kahler;
pub mod linalg;
pub mod morita;
pub mod parallel;
pub mod report;
pub mod scalar;
pub mod sequence;

pub use error::{Error, Result};
pub use report::{Check, Report};
pub use scalar::{Field, Scalar};
