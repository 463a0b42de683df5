//! Expected-color computation for emission-absorption media.
//!
//! Three algebraically equivalent routes are implemented on purpose:
//! the density form (accumulated optical depth, one exponential per
//! segment boundary), the alpha-compositing form (running product over
//! `1 - alpha`), and a telescoping form built from interval transmittances.
//! Agreement between them is part of the test contract.

use crate::error::{Error, Result};
use crate::math::Rgb;
use crate::medium::PiecewiseMedium;
use crate::transmittance::{transmittance, MAX_OPTICAL_DEPTH};

/// Per-segment hit probability, `1 - exp(-sigma * delta)`, in [0, 1].
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::AlphaOutOfRange { value });
        }
        Ok(Self(value))
    }

    /// Stable `1 - exp(-sigma * delta)` via `expm1`; exact to double
    /// precision for products below 1e-12 where the naive form cancels.
    pub fn from_sigma_delta(sigma: f64, delta: f64) -> Self {
        debug_assert!(sigma >= 0.0 && delta >= 0.0);
        Self(-(-sigma * delta).exp_m1())
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Result of compositing a medium front to back.
#[derive(Clone, Debug, PartialEq)]
pub struct RenderOutput {
    /// Expected color, including the background term when one was given.
    pub color: Rgb,
    /// Per-segment termination probabilities `T_n * alpha_n`.
    pub weights: Vec<f64>,
    /// Per-segment alphas used to form the weights.
    pub alphas: Vec<f64>,
    /// Probability of crossing the whole medium.
    pub residual_transmittance: f64,
}

/// Closed-form expected color of a homogeneous interval:
/// `color * (1 - exp(-sigma * (b - a)))`.
pub fn render_homogeneous(sigma: f64, color: Rgb, a: f64, b: f64) -> Result<Rgb> {
    if !sigma.is_finite() || sigma < 0.0 {
        return Err(Error::InvalidDensity { sigma });
    }
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::InvalidHomogeneousInterval { a, b });
    }
    Ok(color * Alpha::from_sigma_delta(sigma, b - a).value())
}

/// Density-form quadrature: weights from accumulated optical depth, color
/// as the weighted sum of segment colors plus the background scaled by the
/// residual transmittance (omitted when `background` is `None`).
pub fn render_piecewise(medium: &PiecewiseMedium, background: Option<Rgb>) -> RenderOutput {
    let segments = medium.segments();
    let mut weights = Vec::with_capacity(segments);
    let mut alphas = Vec::with_capacity(segments);
    let mut color = Rgb::BLACK;
    let mut depth = 0.0;
    for n in 0..segments {
        let prefix = trans_of_depth(depth);
        let alpha = Alpha::from_sigma_delta(medium.sigmas()[n], medium.deltas()[n]).value();
        let weight = prefix * alpha;
        color += medium.colors()[n] * weight;
        weights.push(weight);
        alphas.push(alpha);
        depth += medium.sigmas()[n] * medium.deltas()[n];
    }
    let residual_transmittance = trans_of_depth(depth);
    if let Some(bg) = background {
        color += bg * residual_transmittance;
    }
    RenderOutput { color, weights, alphas, residual_transmittance }
}

fn trans_of_depth(depth: f64) -> f64 {
    if depth > MAX_OPTICAL_DEPTH {
        0.0
    } else {
        (-depth).exp()
    }
}

/// Alpha-compositing form: prefix transmittance as the running product of
/// `1 - alpha_k`. Accepts `alpha = 1` (an opaque surface).
pub fn render_alpha(
    alphas: &[Alpha],
    colors: &[Rgb],
    background: Option<Rgb>,
) -> Result<RenderOutput> {
    if alphas.len() != colors.len() {
        return Err(Error::AlphaLengthMismatch { alphas: alphas.len(), colors: colors.len() });
    }
    let mut weights = Vec::with_capacity(alphas.len());
    let mut color = Rgb::BLACK;
    let mut prefix = 1.0;
    for (alpha, &segment_color) in alphas.iter().zip(colors) {
        let weight = prefix * alpha.value();
        color += segment_color * weight;
        weights.push(weight);
        prefix *= 1.0 - alpha.value();
    }
    if let Some(bg) = background {
        color += bg * prefix;
    }
    Ok(RenderOutput {
        color,
        weights,
        alphas: alphas.iter().map(|a| a.value()).collect(),
        residual_transmittance: prefix,
    })
}

/// Telescoping form: each segment contributes
/// `color_n * (T(t_n) - T(t_{n+1}))`. Coded independently of
/// [`render_piecewise`] (interval transmittances instead of a running
/// accumulator) so the two can cross-check each other.
pub fn render_telescoping(medium: &PiecewiseMedium, background: Option<Rgb>) -> Rgb {
    let start = medium.t_start();
    let mut color = Rgb::BLACK;
    for n in 0..medium.segments() {
        let trans_in = transmittance(medium, start, medium.boundaries()[n])
            .expect("boundary inside domain");
        let trans_out = transmittance(medium, start, medium.boundaries()[n + 1])
            .expect("boundary inside domain");
        color += medium.colors()[n] * (trans_in - trans_out);
    }
    if let Some(bg) = background {
        let residual =
            transmittance(medium, start, medium.t_end()).expect("boundary inside domain");
        color += bg * residual;
    }
    color
}

/// Compositing weights and residual transmittance, the quantities
/// downstream consumers typically want without the color.
pub fn weights(medium: &PiecewiseMedium) -> (Vec<f64>, f64) {
    let out = render_piecewise(medium, None);
    (out.weights, out.residual_transmittance)
}

/// Analytic partial derivatives of the rendered color.
#[derive(Clone, Debug, PartialEq)]
pub struct RenderGradients {
    /// `dC/dsigma_n`, one RGB triple per segment.
    pub d_sigma: Vec<Rgb>,
    /// `dC/dcolor_n`: the color enters each channel linearly with
    /// coefficient `w_n`, so this is one scalar per segment.
    pub d_color: Vec<f64>,
}

/// Closed-form gradients of [`render_piecewise`]'s color with respect to
/// every segment density and color. Segment geometry (`delta_n`) is treated
/// as fixed.
///
/// `dC/dsigma_n = delta_n * (T_{n+1} * c_n - sum_{m>n} w_m c_m - T(D) * bg)`
/// where `T_{n+1} = T_n (1 - alpha_n)` is the transmittance just past
/// segment `n`.
pub fn grad_render(medium: &PiecewiseMedium, background: Option<Rgb>) -> RenderGradients {
    let segments = medium.segments();
    let mut prefix = Vec::with_capacity(segments + 1);
    let mut depth = 0.0;
    prefix.push(1.0);
    for n in 0..segments {
        depth += medium.sigmas()[n] * medium.deltas()[n];
        prefix.push(trans_of_depth(depth));
    }
    let weights: Vec<f64> = (0..segments)
        .map(|n| {
            prefix[n] * Alpha::from_sigma_delta(medium.sigmas()[n], medium.deltas()[n]).value()
        })
        .collect();

    // suffix[n] = sum_{m >= n} w_m c_m + T(D) * bg
    let mut suffix = vec![Rgb::BLACK; segments + 1];
    suffix[segments] = match background {
        Some(bg) => bg * prefix[segments],
        None => Rgb::BLACK,
    };
    for n in (0..segments).rev() {
        suffix[n] = suffix[n + 1] + medium.colors()[n] * weights[n];
    }

    let d_sigma = (0..segments)
        .map(|n| {
            (medium.colors()[n] * prefix[n + 1] - suffix[n + 1]) * medium.deltas()[n]
        })
        .collect();
    RenderGradients { d_sigma, d_color: weights }
}
