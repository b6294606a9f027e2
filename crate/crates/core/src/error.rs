use thiserror::Error;

/// Failures of the geometric and numerical constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("angle of the origin is undefined")]
    AngleAtOrigin,
    #[error("circles of radius sqrt({m}) and sqrt({n}) at distance {beta} do not intersect")]
    NoIntersection { m: u32, n: u32, beta: f64 },
    #[error("no overlap between photon-number circle m={m} and the squeezed ellipse")]
    NoEllipseIntersection { m: u32 },
    #[error("WKB arcsin argument {argument} outside [-1, 1] (m={m}, n={n})")]
    WkbDomain { m: u32, n: u32, argument: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("sequence lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("quadrature window too small for m={m}: boundary/max integrand ratio {ratio:e}")]
    WindowTooSmall { m: u32, ratio: f64 },
}
