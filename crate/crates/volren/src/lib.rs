//! Emission-absorption volume rendering numerics.
//!
//! The crate models a ray crossing a cloud of light-emitting, light-
//! absorbing particles: density gives the differential hit probability per
//! unit length, transmittance the probability of crossing an interval
//! untouched, and the expected color is the termination-distance average
//! of the local emission, composited over an optional background.
//!
//! Modules:
//! - [`medium`]: rays, continuous fields, and the piecewise-constant
//!   medium every discrete routine operates on (plus its CSV format).
//! - [`transmittance`](mod@transmittance): optical depth, exact and
//!   prefix transmittance, opacity, the termination PDF, and inverse-CDF
//!   termination sampling.
//! - [`render`]: the homogeneous closed form, the discrete renderer in
//!   density and alpha forms, a telescoping cross-check, compositing
//!   weights, and analytic gradients.
//! - [`quadrature`]: the piecewise-constant estimator for continuous
//!   fields, a brute-force Riemann reference, and convergence tables.
//! - [`stochastic`]: Monte Carlo estimation of the expected color with
//!   reproducible counter-based sampling.
//! - [`scene`]: named procedural scenes shared by the CLI and bindings.
//!
//! Everything is pure and immutable after construction; any value may be
//! shared across threads freely.

pub mod error;
pub mod field;
pub mod math;
pub mod medium;
pub mod quadrature;
pub mod render;
pub mod rng;
pub mod scene;
pub mod stochastic;
pub mod transmittance;

pub use error::{Error, Result};
pub use field::{
    discretize, sample_field, BlobField, ConstantField, Field, FieldSample, GaussianBlob,
    Placement, StepField,
};
pub use math::{Rgb, Vec3};
pub use medium::{PiecewiseMedium, Ray};
pub use quadrature::{
    convergence_table, integrate_ray, riemann_reference, write_convergence_csv, ConvergenceRow,
    REFERENCE_STEPS,
};
pub use render::{
    grad_render, render_alpha, render_homogeneous, render_piecewise, render_telescoping, weights,
    Alpha, RenderGradients, RenderOutput,
};
pub use rng::Philox4x32;
pub use scene::{build_scene, Scene};
pub use stochastic::{empirical_opacity, mc_estimate, EstimateStats};
pub use transmittance::{
    hit_pdf, opacity, optical_depth, prefix_optical_depths, prefix_transmittance,
    sample_termination, transmittance, OpticalDepth, Termination, MAX_OPTICAL_DEPTH,
};
