pub mod combinatorics;
pub mod complexes;
pub mod error;
pub mod field;
pub mod koszul;
pub mod linalg;
pub mod matrix;
pub mod spectral;
pub mod herr;
pub mod random;
pub mod cup;
pub mod dolbeault;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use matrix::Mat;
