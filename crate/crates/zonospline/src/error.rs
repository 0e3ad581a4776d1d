use thiserror::Error;

/// Error cases named by the library contracts. Domain preconditions that the
/// underlying theorems require (regularity, cone membership, zonotope
/// membership) are hard errors rather than best-effort answers.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("direction list is empty")]
    EmptyList,
    #[error("direction vectors have inconsistent lengths (expected {expected}, got {got})")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("direction list does not span the ambient space")]
    NotSpanning,
    #[error("point lies on an affine wall; piecewise values are undefined there")]
    NotRegular,
    #[error("translated point lies on a shifted affine wall")]
    NotRegularShifted,
    #[error("direction lies on a wall; it is not generic")]
    NotGeneric,
    #[error("point is outside the zonotope Z(Phi)")]
    PointOutsideZonotope,
    #[error("direction leaves the tangent cone of the zonotope at r")]
    DirectionOutsideCone,
    #[error("sublist Phi(s) does not span")]
    NotSpanningSub,
    #[error("directions do not generate a salient cone; enumeration would not terminate")]
    NotSalient,
    #[error("point lies on the boundary of a cone generated by a sublist")]
    OnConeBoundary,
    #[error("lattice point is not covered by the enlarged region (alcove - Z(Phi))")]
    LatticePointNotCovered,
    #[error("lattice point is not covered by the enlarged chamber (tau - Z(Phi))")]
    NuNotCovered,
    #[error("parameter u is within {0} of the pole at u = 1")]
    ResonantParameter(f64),
    #[error("parameter list exceeds the configured bound |y_k| <= {0}")]
    ParameterTooLarge(f64),
    #[error("operator truncation did not converge below tolerance by order {0}")]
    TruncationNotConverged(usize),
    #[error("numeric differentiation error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    NumericDivergence { estimate: f64, tolerance: f64 },
    #[error("evaluation point is outside the alcove of the local piece")]
    PointOutsideAlcove,
    #[error("no generic direction found within the search budget of {0} candidates")]
    SearchExhausted(usize),
    #[error("operation requires a one-dimensional direction list")]
    Not1D,
    #[error("invalid input: {0}")]
    Parse(String),
}
