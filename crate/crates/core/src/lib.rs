pub mod catalog;
pub mod error;
pub mod extended;
pub mod frames;
pub mod liealg;
pub mod numint;
pub mod linalg;
pub mod random;
pub mod scalars;
pub mod symplectic;

pub use error::{Error, Result};
pub use linalg::{Mat, Subspace};
pub use scalars::{Field, GaussianRational, ParamPoly, Poly, RatFunc, Ring, TimeDerivative};
