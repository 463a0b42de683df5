//! Transmittance, optical depth, opacity, the termination-distance
//! distribution, and inverse-CDF sampling of it.
//!
//! All quantities are exact for piecewise-constant media: optical depth is
//! a finite sum of `sigma * length` terms, and transmittance is a single
//! exponential of that sum. Accumulating depth and exponentiating once
//! keeps long or dense media out of the repeated-product underflow regime.

use crate::error::{Error, Result};
use crate::medium::PiecewiseMedium;

/// Optical depths above this saturate transmittance to exactly 0 instead of
/// relying on `exp` underflow (`exp(-700)` is already ~1e-304).
pub const MAX_OPTICAL_DEPTH: f64 = 700.0;

/// Dimensionless line integral of density over an interval.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct OpticalDepth(f64);

impl OpticalDepth {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidOpticalDepth { value });
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `exp(-depth)`, saturating to 0 above [`MAX_OPTICAL_DEPTH`].
    pub fn transmittance(self) -> f64 {
        transmittance_of_depth(self.0)
    }
}

fn transmittance_of_depth(depth: f64) -> f64 {
    if depth > MAX_OPTICAL_DEPTH {
        0.0
    } else {
        (-depth).exp()
    }
}

fn check_interval(medium: &PiecewiseMedium, a: f64, b: f64) -> Result<()> {
    let (lo, hi) = (medium.t_start(), medium.t_end());
    if !(a.is_finite() && b.is_finite()) || a > b || a < lo || b > hi {
        return Err(Error::InvalidInterval { a, b, lo, hi });
    }
    Ok(())
}

/// Integral of density over `[a, b]`, exact for piecewise-constant media:
/// each overlapped segment contributes `sigma * overlap_length`.
pub fn optical_depth(medium: &PiecewiseMedium, a: f64, b: f64) -> Result<OpticalDepth> {
    check_interval(medium, a, b)?;
    let boundaries = medium.boundaries();
    let mut sum = 0.0;
    for (n, &sigma) in medium.sigmas().iter().enumerate() {
        let lo = boundaries[n];
        if lo >= b {
            break;
        }
        let hi = boundaries[n + 1];
        let overlap = hi.min(b) - lo.max(a);
        if overlap > 0.0 {
            sum += sigma * overlap;
        }
    }
    OpticalDepth::new(sum)
}

/// Probability that a ray crosses `[a, b]` without hitting a particle.
pub fn transmittance(medium: &PiecewiseMedium, a: f64, b: f64) -> Result<f64> {
    Ok(optical_depth(medium, a, b)?.transmittance())
}

/// Cumulative optical depth at every boundary: entry `i` is the depth from
/// the medium start to boundary `i` (entry 0 is 0, entry N the total).
pub fn prefix_optical_depths(medium: &PiecewiseMedium) -> Vec<f64> {
    let mut depths = Vec::with_capacity(medium.segments() + 1);
    let mut sum = 0.0;
    depths.push(0.0);
    for (sigma, delta) in medium.sigmas().iter().zip(medium.deltas()) {
        sum += sigma * delta;
        depths.push(sum);
    }
    depths
}

/// Transmittance from the medium start to boundary `index` (the number of
/// segments crossed). `index = 0` gives 1; `index = N` gives the residual
/// transmittance of the whole medium.
pub fn prefix_transmittance(medium: &PiecewiseMedium, index: usize) -> Result<f64> {
    let segments = medium.segments();
    if index > segments {
        return Err(Error::IndexOutOfRange { index, segments });
    }
    let mut sum = 0.0;
    for n in 0..index {
        sum += medium.sigmas()[n] * medium.deltas()[n];
    }
    Ok(transmittance_of_depth(sum))
}

/// `1 - transmittance(start, t)`: the CDF of the termination distance,
/// evaluated with `expm1` so small depths keep full precision.
pub fn opacity(medium: &PiecewiseMedium, t: f64) -> Result<f64> {
    let depth = optical_depth(medium, medium.t_start(), t)?.value();
    if depth > MAX_OPTICAL_DEPTH {
        return Ok(1.0);
    }
    Ok(-(-depth).exp_m1())
}

/// Density of the termination distance at `t`: transmittance up to `t`
/// times the local density. Interior boundaries resolve to the right-hand
/// segment (matching the CDF's right continuity); the final boundary uses
/// the last segment.
pub fn hit_pdf(medium: &PiecewiseMedium, t: f64) -> Result<f64> {
    let segment = medium.segment_containing(t)?;
    let trans = transmittance(medium, medium.t_start(), t)?;
    Ok(trans * medium.sigmas()[segment])
}

/// Outcome of one termination sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Termination {
    /// The ray stopped at distance `t` inside segment `segment` (0-based).
    Hit { t: f64, segment: usize },
    /// The ray crossed the whole medium.
    Escaped,
}

/// Inverse-CDF sample of the termination distance from a uniform variate
/// `u` in [0, 1).
///
/// If `u >= 1 - T(end)` the ray escapes; otherwise the containing segment
/// is located on the opacity CDF and the within-segment exponential is
/// inverted analytically. Zero-density segments carry no CDF mass and are
/// never selected.
pub fn sample_termination(medium: &PiecewiseMedium, u: f64) -> Result<Termination> {
    if !(0.0..1.0).contains(&u) {
        return Err(Error::InvalidUnitVariate { u });
    }
    let depths = prefix_optical_depths(medium);
    // CDF value at each boundary, via expm1 for precision near 0.
    let cdf: Vec<f64> = depths
        .iter()
        .map(|&d| if d > MAX_OPTICAL_DEPTH { 1.0 } else { -(-d).exp_m1() })
        .collect();
    let total_hit_mass = *cdf.last().unwrap();
    if u >= total_hit_mass {
        return Ok(Termination::Escaped);
    }
    // First boundary whose CDF exceeds u; the segment before it contains
    // the sample. Zero-mass segments collapse (cdf equal at both ends) and
    // are skipped by the `<= u` predicate.
    let segment = cdf.partition_point(|&c| c <= u) - 1;
    let sigma = medium.sigmas()[segment];
    // t = t_n + (-ln((1-u)/T_n)) / sigma_n, written in log space:
    // -ln(1-u) - depth_n, clamped into the segment against rounding.
    let offset = ((-(-u).ln_1p()) - depths[segment]) / sigma;
    let t = (medium.boundaries()[segment] + offset)
        .clamp(medium.boundaries()[segment], medium.boundaries()[segment + 1]);
    Ok(Termination::Hit { t, segment })
}
