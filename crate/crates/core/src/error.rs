use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    /// The physical configuration does not map onto a trapped harmonic model.
    #[error("invalid physical regime: {0}")]
    InvalidRegime(String),

    #[error("moment system is not asymptotically stable (max Re λ = {max_re:e})")]
    UnstableSystem { max_re: f64 },

    #[error("steady-state formula has a vanishing denominator ({0})")]
    DegenerateDenominator(&'static str),

    #[error("steady-state linear system is singular and inconsistent (residual {residual:e})")]
    SingularSystem { residual: f64 },

    #[error("eigenvector basis is ill-conditioned (cond = {cond:e})")]
    DefectiveMatrix { cond: f64 },

    #[error("integrator step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },
}
