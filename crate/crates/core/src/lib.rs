//! Dispersion relations and explicit spectral solutions of linear
//! bond-based peridynamic wave propagation in one, two and three
//! dimensions.

pub mod diagnostics;
pub mod dispersion;
pub mod error;
pub mod export;
pub mod initial;
pub mod oracle;
pub mod quadrature;
pub mod solver;
pub mod special;

pub use dispersion::{Dimension, MaterialParams};
pub use error::{Error, Result};
