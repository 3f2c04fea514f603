use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    /// LU pivot fell below the relative floor.
    #[error("singular matrix: pivot {pivot:e} below floor {floor:e}")]
    Singular { pivot: f64, floor: f64 },

    /// A recursion stage hit a vanishing or singular error power.
    #[error("singular error power at stage {stage}")]
    SingularStage { stage: usize },

    #[error("stage {stage}: reflection magnitude {magnitude} exceeds one, correlation is not positive definite")]
    NotPositiveDefinite { stage: usize, magnitude: f64 },

    #[error("order {order} out of range (must be between {min} and {max})")]
    OrderOutOfRange { order: usize, min: usize, max: usize },

    #[error("signal has zero energy")]
    ZeroEnergy,

    #[error("zero-lag correlation must be real and positive")]
    DegenerateAutocorrelation,

    #[error("signal is empty")]
    EmptySignal,

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

impl Error {
    /// True for failures caused by the numbers (singular or degenerate input)
    /// rather than by how the call was shaped.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular { .. }
                | Error::SingularStage { .. }
                | Error::NotPositiveDefinite { .. }
                | Error::ZeroEnergy
                | Error::DegenerateAutocorrelation
        )
    }
}
