//! Error type shared by every module in the crate.
//!
//! Segment indices in messages are 1-based, matching the row numbering of
//! the medium CSV format.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ray direction has norm {norm}, expected unit length")]
    NonUnitDirection { norm: f64 },

    #[error("invalid ray bounds: t_near = {t_near}, t_far = {t_far}")]
    InvalidRayBounds { t_near: f64, t_far: f64 },

    #[error("non-finite ray component")]
    NonFiniteRay,

    #[error("t = {t} outside ray bounds [{t_near}, {t_far}]")]
    OutOfRayBounds { t: f64, t_near: f64, t_far: f64 },

    #[error("medium needs at least one segment ({boundaries} boundaries given)")]
    NoSegments { boundaries: usize },

    #[error(
        "length mismatch: {boundaries} boundaries require {} densities and colors, got {sigmas} and {colors}",
        boundaries - 1
    )]
    LengthMismatch {
        boundaries: usize,
        sigmas: usize,
        colors: usize,
    },

    #[error("non-finite boundary at n={n}")]
    NonFiniteBoundary { n: usize },

    #[error("zero-length segment at n={n}")]
    ZeroLengthSegment { n: usize },

    #[error("boundaries not increasing at n={n}")]
    UnsortedBoundaries { n: usize },

    #[error("negative density at n={n}")]
    NegativeDensity { n: usize },

    #[error("non-finite density at n={n}")]
    NonFiniteDensity { n: usize },

    #[error("color component outside [0,1] at n={n}")]
    ColorOutOfRange { n: usize },

    #[error("medium csv row {row}: {message}")]
    MediumCsv { row: usize, message: String },

    #[error("interval [{a}, {b}] invalid within domain [{lo}, {hi}]")]
    InvalidInterval { a: f64, b: f64, lo: f64, hi: f64 },

    #[error("t = {t} outside medium domain [{lo}, {hi}]")]
    OutOfDomain { t: f64, lo: f64, hi: f64 },

    #[error("boundary index {index} out of range for {segments} segments")]
    IndexOutOfRange { index: usize, segments: usize },

    #[error("optical depth {value} must be finite and non-negative")]
    InvalidOpticalDepth { value: f64 },

    #[error("alpha {value} outside [0,1]")]
    AlphaOutOfRange { value: f64 },

    #[error("alpha/color length mismatch: {alphas} alphas, {colors} colors")]
    AlphaLengthMismatch { alphas: usize, colors: usize },

    #[error("unit variate {u} outside [0,1)")]
    InvalidUnitVariate { u: f64 },

    #[error("field returned invalid density {sigma} at t = {t}")]
    InvalidFieldDensity { sigma: f64, t: f64 },

    #[error("field returned color outside [0,1] at t = {t}")]
    InvalidFieldColor { t: f64 },

    #[error("segment count must be at least 1")]
    InvalidSegmentCount,

    #[error("step count must be at least 1")]
    InvalidStepCount,

    #[error("homogeneous interval requires a < b, got a = {a}, b = {b}")]
    InvalidHomogeneousInterval { a: f64, b: f64 },

    #[error("invalid density {sigma}: must be finite and non-negative")]
    InvalidDensity { sigma: f64 },

    #[error("segment count list must be non-empty and strictly increasing")]
    InvalidCountList,

    #[error("sample count {n} too small, need at least 2")]
    TooFewSamples { n: u64 },

    #[error("grid must be sorted and inside the medium domain")]
    InvalidGrid,

    #[error("unknown scene '{name}' (known: constant, step, blob, blobs)")]
    UnknownScene { name: String },

    #[error("unknown parameter '{key}' for scene '{scene}'")]
    UnknownSceneParam { scene: String, key: String },

    #[error("invalid value {value} for scene parameter '{key}'")]
    InvalidSceneParam { key: String, value: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
