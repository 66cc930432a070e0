use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },

    #[error("time {t} outside [0, {horizon}]")]
    TimeOutOfRange { t: f64, horizon: f64 },

    #[error("continuous sampling unsupported in step form: weighting measure has a density component")]
    ContinuousSampling,

    #[error("weighting measure has no atoms")]
    EmptyMeasure,

    #[error("strike K = 0 is excluded for the reduced problem")]
    ZeroStrike,

    #[error("point x = {x} outside the tabulated range [{lo}, {hi}]")]
    Extrapolation { x: f64, lo: f64, hi: f64 },

    #[error("point ({t}, {x}) outside the solved domain")]
    OutOfDomain { t: f64, x: f64 },

    #[error("derivative query at ({t}, {x}) not admissible: {reason}")]
    DerivativeQuery { t: f64, x: f64, reason: &'static str },

    #[error("point ({t}, {x}) outside the admissible region: {reason}")]
    OutsideRegion { t: f64, x: f64, reason: &'static str },

    #[error("tridiagonal solve broke down at row {row}")]
    SingularSystem { row: usize },

    #[error("grid construction failed: {0}")]
    Grid(&'static str),
}

pub(crate) fn ensure(cond: bool, name: &'static str, reason: &'static str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason })
    }
}
