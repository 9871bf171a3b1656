//! Birational desingularization trees for hypersurfaces over ℚ and prime
//! fields, built from monomial charts, weight sequences and explicit
//! reductions.

pub mod charts;
pub mod cli;
pub mod constraints;
pub mod emit;
pub mod error;
pub mod localize;
pub mod map;
pub mod parse;
pub mod poly;
pub mod reduce;
pub mod resolved;
pub mod scalar;
pub mod tree;
pub mod weights;

pub use error::{Error, Result};
pub use poly::{Frac, Monomial, Poly, Ring};
pub use scalar::{FieldSpec, Scalar};
