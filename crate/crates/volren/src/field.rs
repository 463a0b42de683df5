//! Continuous density/emission fields and their discretization into
//! piecewise-constant media.

use crate::error::{Error, Result};
use crate::math::{Rgb, Vec3};
use crate::medium::{PiecewiseMedium, Ray};
use crate::rng::Philox4x32;

/// Density and emission color at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldSample {
    pub sigma: f64,
    pub color: Rgb,
}

/// A continuous field mapping position to density (per unit length, >= 0)
/// and emission color (RGB in the unit cube).
///
/// Implementations are expected to be pure; [`sample_field`] and
/// [`discretize`] validate the returned values.
pub trait Field {
    fn eval(&self, position: Vec3) -> FieldSample;
}

impl<F: Field + ?Sized> Field for &F {
    fn eval(&self, position: Vec3) -> FieldSample {
        (**self).eval(position)
    }
}

/// Evaluates `field` at the ray point for parameter `t`, rejecting
/// out-of-bounds `t` and invalid field output.
pub fn sample_field<F: Field + ?Sized>(field: &F, ray: &Ray, t: f64) -> Result<FieldSample> {
    let position = ray.point_at(t)?;
    let sample = field.eval(position);
    if !sample.sigma.is_finite() || sample.sigma < 0.0 {
        return Err(Error::InvalidFieldDensity { sigma: sample.sigma, t });
    }
    if !sample.color.in_unit_range() {
        return Err(Error::InvalidFieldColor { t });
    }
    Ok(sample)
}

/// Where inside each segment the field is probed during discretization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    /// Probe at the segment midpoint.
    Uniform,
    /// Probe at a uniformly drawn point inside each segment. Segment `n`
    /// uses variate `n` of the `(seed, stream)` generator, so results are
    /// reproducible and independent of evaluation order.
    Stratified { seed: u64, stream: u64 },
}

/// Partitions `[t_near, t_far]` into `n_segments` equal segments and probes
/// the field once per segment to build a [`PiecewiseMedium`].
///
/// The first boundary equals `t_near` and the last equals `t_far` exactly.
pub fn discretize<F: Field + ?Sized>(
    field: &F,
    ray: &Ray,
    n_segments: usize,
    placement: Placement,
) -> Result<PiecewiseMedium> {
    if n_segments == 0 {
        return Err(Error::InvalidSegmentCount);
    }
    let (a, b) = (ray.t_near(), ray.t_far());
    let span = b - a;
    let mut boundaries = Vec::with_capacity(n_segments + 1);
    for i in 0..=n_segments {
        boundaries.push(a + span * (i as f64 / n_segments as f64));
    }
    boundaries[0] = a;
    boundaries[n_segments] = b;

    let rng = match placement {
        Placement::Uniform => None,
        Placement::Stratified { seed, stream } => Some(Philox4x32::new(seed, stream)),
    };

    let mut sigmas = Vec::with_capacity(n_segments);
    let mut colors = Vec::with_capacity(n_segments);
    for n in 0..n_segments {
        let (lo, hi) = (boundaries[n], boundaries[n + 1]);
        let t = match rng {
            None => 0.5 * (lo + hi),
            Some(rng) => lo + rng.uniform(n as u64) * (hi - lo),
        };
        let sample = sample_field(field, ray, t)?;
        sigmas.push(sample.sigma);
        colors.push(sample.color);
    }
    PiecewiseMedium::new(boundaries, sigmas, colors)
}

/// Uniform density and color everywhere.
#[derive(Clone, Copy, Debug)]
pub struct ConstantField {
    pub sigma: f64,
    pub color: Rgb,
}

impl Field for ConstantField {
    fn eval(&self, _position: Vec3) -> FieldSample {
        FieldSample { sigma: self.sigma, color: self.color }
    }
}

/// Vacuum on one side of an axis-aligned plane, constant density on the
/// other (`coordinate >= threshold`).
#[derive(Clone, Copy, Debug)]
pub struct StepField {
    pub axis: usize,
    pub threshold: f64,
    pub sigma: f64,
    pub color: Rgb,
}

impl Field for StepField {
    fn eval(&self, position: Vec3) -> FieldSample {
        let sigma = if position.axis(self.axis) >= self.threshold { self.sigma } else { 0.0 };
        FieldSample { sigma, color: self.color }
    }
}

/// Isotropic Gaussian density bump:
/// `sigma(x) = peak_sigma * exp(-|x - center|^2 / (2 radius^2))`.
#[derive(Clone, Copy, Debug)]
pub struct GaussianBlob {
    pub center: Vec3,
    pub peak_sigma: f64,
    pub radius: f64,
    pub color: Rgb,
}

impl GaussianBlob {
    pub fn density(&self, position: Vec3) -> f64 {
        let d = position - self.center;
        self.peak_sigma * (-d.dot(d) / (2.0 * self.radius * self.radius)).exp()
    }
}

impl Field for GaussianBlob {
    fn eval(&self, position: Vec3) -> FieldSample {
        FieldSample { sigma: self.density(position), color: self.color }
    }
}

/// Sum of Gaussian blobs. Densities add; the emission color is the
/// density-weighted mix of the blob colors, which keeps the emitted power
/// `sigma * color` equal to the sum of the per-blob contributions.
#[derive(Clone, Debug)]
pub struct BlobField {
    pub blobs: Vec<GaussianBlob>,
}

impl Field for BlobField {
    fn eval(&self, position: Vec3) -> FieldSample {
        let mut total = 0.0;
        let mut emission = Rgb::BLACK;
        for blob in &self.blobs {
            let sigma = blob.density(position);
            total += sigma;
            emission += blob.color * sigma;
        }
        let color = if total > 0.0 { emission * (1.0 / total) } else { Rgb::BLACK };
        FieldSample { sigma: total, color }
    }
}
