use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("edge {edge} = {value} violates the triangle inequality")]
    TriangleInequality { edge: char, value: f64 },

    #[error("edge {edge} = {value} is not a positive finite length")]
    NonPositiveEdge { edge: char, value: f64 },

    #[error("angle {slot} = {value} is not a positive finite angle")]
    NonPositiveAngle { slot: char, value: f64 },

    #[error("not hyperbolic: angle sum {sum} is not below pi")]
    NotHyperbolic { sum: f64 },

    #[error("angle sum {sum} exceeds pi")]
    AngleSumExceedsPi { sum: f64 },

    #[error("inconsistent input to {formula}: value {value} outside its domain")]
    Inconsistent { formula: &'static str, value: f64 },

    #[error("point is not on the hyperboloid (Minkowski product {product})")]
    InvalidPoint { product: f64 },

    #[error("coincident points")]
    CoincidentPoints,

    #[error("limit did not converge within {iterations} iterations")]
    ConvergenceFailure { iterations: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("subdivision depth {depth} exceeds the limit of {max}")]
    DepthLimit { depth: usize, max: usize },
}
