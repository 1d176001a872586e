//! Exact computations in the affine Temperley-Lieb diagram algebra D_n, its
//! finite-dimensional cellular quotients, their standard modules, Gram forms
//! and first extension groups.

pub mod error;
pub mod scalars;
pub mod linalg;
pub mod involutions;
pub mod diagrams;
pub mod algebra;
pub mod cellular;
pub mod repmod;
pub mod homext;
pub mod claims;

pub use error::{Error, Result};
