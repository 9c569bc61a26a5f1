use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("evaluation at a pole of the Moebius map (|cz + d| = {denominator:e})")]
    Pole { denominator: f64 },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("orbit truncation failed after {elements} elements: achieved tail bound {achieved:e}, requested {requested:e}")]
    TruncationFailure {
        elements: usize,
        achieved: f64,
        requested: f64,
    },

    #[error("function is not automorphic: generator {generator} ratios disagree by {spread:e}")]
    NotAutomorphic { generator: usize, spread: f64 },

    #[error("measured character is not unimodular: generator {generator} has modulus {modulus}")]
    NotUnimodular { generator: usize, modulus: f64 },

    #[error("anchor {anchor} lies within {distance:e} of a fixed point")]
    DegenerateAnchor { anchor: Complex64, distance: f64 },

    #[error("circle point {point} lies within {distance:e} of a fixed point of the group")]
    KernelSingularity { point: Complex64, distance: f64 },

    #[error("non-finite sample at index {index}")]
    Integration { index: usize },

    #[error("evaluation point {point} too close to the unit circle")]
    BoundaryProximity { point: Complex64 },

    #[error("log-modulus sample {value} at index {index} underflows")]
    DegenerateModulus { index: usize, value: f64 },

    #[error("function vanishes at the base point {base}")]
    BasePoint { base: Complex64 },

    #[error("residue quadrature did not converge at radius {radius:e} (last change {change:e})")]
    RadiusTooLarge { radius: f64, change: f64 },

    #[error("residue radius {radius:e} below the admissible minimum")]
    RadiusTooSmall { radius: f64 },

    #[error("point {point} lies within {distance:e} of the annulus boundary")]
    IllConditionedContour { point: Complex64, distance: f64 },

    #[error("evaluation point {point} within {distance:e} of a removable singularity")]
    SingularityProximity { point: Complex64, distance: f64 },

    #[error("uniformizer singular at {point}")]
    SingularPoint { point: Complex64 },
}

pub type Result<T> = std::result::Result<T, Error>;
