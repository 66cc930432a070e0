//! Numerical building blocks shared by the engines.

pub mod grid;
pub mod hermite;
pub mod interp;
pub mod normal;
pub mod quad;
pub mod stats;
pub mod tridiag;

pub use hermite::GaussHermite;
pub use interp::MonotoneCubic;
pub use normal::{inverse_normal_cdf, normal_cdf, normal_pdf};
pub use stats::Moments;
