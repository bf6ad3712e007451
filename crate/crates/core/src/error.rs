use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{field} must be finite, got {value}")]
    NonFinite { field: &'static str, value: f64 },

    #[error("theta = {0} lies outside [0, pi]")]
    ThetaOutOfRange(f64),

    #[error("gamma = {0} lies outside [0, pi/2]")]
    GammaOutOfRange(f64),

    #[error("probability {name} = {value} lies outside [0, 1]")]
    ProbabilityOutOfRange { name: &'static str, value: f64 },

    #[error("cannot build a strategy from the zero vector")]
    ZeroVector,

    #[error("invalid mixed strategy: {0}")]
    InvalidMixedStrategy(String),

    #[error("the payoff-difference closed form only applies to the bundled Chicken matrix")]
    NotChicken,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
