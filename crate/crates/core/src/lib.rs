//! Pricing engines and regularity diagnostics for the one-dimensional
//! degenerate PDE that prices discretely sampled arithmetic Asian options:
//!
//! ```text
//! u_t + ½ σ² (x − b(t))² u_xx = 0,   u(T, x) = (x − K)₊
//! ```
//!
//! where `b` is a nonincreasing step function built from the sampling
//! dates. Three engines evaluate the same probabilistic solution
//! `u(t, x) = E (X_T − K)₊` with `dX = σ (X − b) dW`:
//!
//! * [`analytic`]: closed forms for constant drift and a tabulated
//!   Gauss–Hermite cascade across sampling intervals,
//! * [`mc`]: exact piecewise-lognormal path simulation,
//! * [`pde`]: a θ-scheme on grids aligned with strike, drift levels and
//!   sampling dates.
//!
//! [`regularity`] checks the decay and boundedness properties of the
//! solution near the degeneracy line.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analytic;
pub mod error;
pub mod market;
pub mod math;
pub mod mc;
pub mod pde;
pub mod regularity;
pub mod rng;

pub use error::{Error, Result};
pub use market::{DividendMeasure, MarketParams, Measure, StepDrift, WeightingMeasure};
