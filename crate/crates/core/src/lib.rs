mod error;
pub mod convolution;
pub mod jacobi_core;
pub mod multiplier;
pub mod params;
pub mod quadrature;
pub mod specfun;
pub mod transform;

pub use error::{Error, Result};
pub use params::{JacobiParameters, Preset, StripPoint};
