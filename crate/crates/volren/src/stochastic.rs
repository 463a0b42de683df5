//! Monte Carlo validation of the probabilistic reading of the renderer:
//! simulate ray termination events and check that their average color
//! reproduces the deterministic expectation.

use crate::error::{Error, Result};
use crate::math::Rgb;
use crate::medium::PiecewiseMedium;
use crate::rng::Philox4x32;
use crate::transmittance::{sample_termination, Termination};

/// Stream index used for termination sampling. Sample `i` of a run is
/// addressed by counter `i` on this stream, so results are independent of
/// batching and evaluation order.
pub const TERMINATION_STREAM: u64 = 0;

/// Empirical estimate of the expected color.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateStats {
    pub mean: Rgb,
    /// Per-channel standard error of the mean (unbiased variance / n).
    pub standard_error: Rgb,
    pub n_samples: u64,
    /// Fraction of samples that crossed the whole medium.
    pub escape_fraction: f64,
}

/// Simulates `n_samples` termination events with the counter-based RNG.
/// Each hit contributes its segment color, each escape the background
/// color (black when absent). Identical `(medium, background, n_samples,
/// seed)` inputs give bit-identical results.
pub fn mc_estimate(
    medium: &PiecewiseMedium,
    background: Option<Rgb>,
    n_samples: u64,
    seed: u64,
) -> Result<EstimateStats> {
    if n_samples < 2 {
        return Err(Error::TooFewSamples { n: n_samples });
    }
    let rng = Philox4x32::new(seed, TERMINATION_STREAM);
    let bg = background.unwrap_or(Rgb::BLACK);
    let mut sum = [0.0f64; 3];
    let mut sum_sq = [0.0f64; 3];
    let mut escapes = 0u64;
    for i in 0..n_samples {
        let u = rng.uniform(i);
        let contribution = match sample_termination(medium, u)? {
            Termination::Hit { segment, .. } => medium.colors()[segment],
            Termination::Escaped => {
                escapes += 1;
                bg
            }
        };
        for (ch, v) in contribution.channels().into_iter().enumerate() {
            sum[ch] += v;
            sum_sq[ch] += v * v;
        }
    }
    let n = n_samples as f64;
    let mut mean = [0.0f64; 3];
    let mut stderr = [0.0f64; 3];
    for ch in 0..3 {
        mean[ch] = sum[ch] / n;
        // Unbiased sample variance; clamp the tiny negatives produced by
        // cancellation when all samples are identical.
        let variance = ((sum_sq[ch] - n * mean[ch] * mean[ch]) / (n - 1.0)).max(0.0);
        stderr[ch] = (variance / n).sqrt();
    }
    Ok(EstimateStats {
        mean: Rgb::new(mean[0], mean[1], mean[2]),
        standard_error: Rgb::new(stderr[0], stderr[1], stderr[2]),
        n_samples,
        escape_fraction: escapes as f64 / n,
    })
}

/// Empirical CDF of the termination distance on a sorted grid: for each
/// grid point, the fraction of all samples that hit at or before it.
/// Escaped samples never count, so the curve tops out at
/// `1 - escape_fraction`.
pub fn empirical_opacity(
    medium: &PiecewiseMedium,
    n_samples: u64,
    seed: u64,
    t_grid: &[f64],
) -> Result<Vec<f64>> {
    if n_samples < 2 {
        return Err(Error::TooFewSamples { n: n_samples });
    }
    if t_grid.is_empty()
        || t_grid.windows(2).any(|w| w[0] > w[1])
        || t_grid.iter().any(|&t| !medium.contains(t))
    {
        return Err(Error::InvalidGrid);
    }
    let rng = Philox4x32::new(seed, TERMINATION_STREAM);
    let mut hits = Vec::new();
    for i in 0..n_samples {
        if let Termination::Hit { t, .. } = sample_termination(medium, rng.uniform(i))? {
            hits.push(t);
        }
    }
    hits.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = n_samples as f64;
    Ok(t_grid
        .iter()
        .map(|&t| hits.partition_point(|&h| h <= t) as f64 / n)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::render::render_piecewise;
    use crate::transmittance::opacity;
    use std::f64::consts::LN_2;

    fn medium(boundaries: &[f64], sigmas: &[f64], colors: &[Rgb]) -> PiecewiseMedium {
        PiecewiseMedium::new(boundaries.to_vec(), sigmas.to_vec(), colors.to_vec()).unwrap()
    }

    #[test]
    fn vacuum_medium_reports_background_exactly() {
        let m = medium(&[0.0, 1.0, 2.0], &[0.0, 0.0], &[Rgb::WHITE, Rgb::WHITE]);
        let stats = mc_estimate(&m, Some(Rgb::new(0.0, 0.0, 1.0)), 10_000, 3).unwrap();
        assert_eq!(stats.mean, Rgb::new(0.0, 0.0, 1.0));
        assert_eq!(stats.standard_error, Rgb::BLACK);
        assert_eq!(stats.escape_fraction, 1.0);
    }

    #[test]
    fn homogeneous_mean_is_within_four_standard_errors() {
        let m = medium(&[0.0, 1.0], &[LN_2], &[Rgb::WHITE]);
        let stats = mc_estimate(&m, None, 100_000, 11).unwrap();
        for (mean, se) in stats.mean.channels().into_iter().zip(stats.standard_error.channels())
        {
            assert!((mean - 0.5).abs() <= 4.0 * se, "mean {mean}, se {se}");
        }
    }

    #[test]
    fn two_segment_mean_matches_deterministic_renderer() {
        let m = medium(
            &[0.0, 1.0, 2.0],
            &[LN_2, LN_2],
            &[Rgb::new(1.0, 0.0, 0.0), Rgb::new(0.0, 1.0, 0.0)],
        );
        let expected = render_piecewise(&m, None).color;
        let stats = mc_estimate(&m, None, 100_000, 17).unwrap();
        for ch in 0..3 {
            let diff = (stats.mean.channels()[ch] - expected.channels()[ch]).abs();
            let se = stats.standard_error.channels()[ch];
            assert!(diff <= 4.0 * se.max(1e-12), "channel {ch}: diff {diff}, se {se}");
        }
    }

    #[test]
    fn identical_inputs_give_bit_identical_results() {
        let m = medium(
            &[0.0, 0.7, 1.5],
            &[0.9, 2.1],
            &[Rgb::new(0.4, 0.2, 0.8), Rgb::new(0.9, 0.9, 0.1)],
        );
        let a = mc_estimate(&m, Some(Rgb::WHITE), 50_000, 123).unwrap();
        let b = mc_estimate(&m, Some(Rgb::WHITE), 50_000, 123).unwrap();
        assert_eq!(a, b);
        let c = mc_estimate(&m, Some(Rgb::WHITE), 50_000, 124).unwrap();
        assert_ne!(a.mean, c.mean);
    }

    #[test]
    fn escape_fraction_tracks_residual_transmittance() {
        let m = medium(&[0.0, 1.0, 2.5], &[0.8, 0.3], &[Rgb::WHITE, Rgb::WHITE]);
        let residual = render_piecewise(&m, None).residual_transmittance;
        let n = 100_000u64;
        let stats = mc_estimate(&m, None, n, 29).unwrap();
        let band = 4.0 * (residual * (1.0 - residual) / n as f64).sqrt();
        assert!(
            (stats.escape_fraction - residual).abs() <= band,
            "escape {} vs residual {residual} (band {band})",
            stats.escape_fraction
        );
    }

    #[test]
    fn rejects_degenerate_sample_counts() {
        let m = medium(&[0.0, 1.0], &[1.0], &[Rgb::WHITE]);
        assert!(matches!(mc_estimate(&m, None, 1, 0), Err(Error::TooFewSamples { .. })));
        assert!(matches!(
            empirical_opacity(&m, 0, 0, &[0.5]),
            Err(Error::TooFewSamples { .. })
        ));
    }

    #[test]
    fn empirical_opacity_edges() {
        let m = medium(&[0.0, 0.8, 2.0], &[1.4, 0.5], &[Rgb::WHITE, Rgb::WHITE]);
        let n = 100_000u64;
        let grid = [0.0, 2.0];
        let values = empirical_opacity(&m, n, 41, &grid).unwrap();
        assert_eq!(values[0], 0.0);
        let stats = mc_estimate(&m, None, n, 41).unwrap();
        assert!((values[1] - (1.0 - stats.escape_fraction)).abs() < 1e-15);
    }

    #[test]
    fn empirical_opacity_tracks_exact_opacity() {
        let m = medium(
            &[0.0, 0.4, 1.1, 1.9, 2.5],
            &[0.8, 2.6, 0.0, 1.4],
            &[Rgb::WHITE; 4],
        );
        let n = 100_000u64;
        let grid: Vec<f64> = (0..=50).map(|k| 2.5 * k as f64 / 50.0).collect();
        let values = empirical_opacity(&m, n, 57, &grid).unwrap();
        let mut sup = 0.0f64;
        for (&t, &v) in grid.iter().zip(&values) {
            sup = sup.max((v - opacity(&m, t).unwrap()).abs());
        }
        assert!(sup < 0.01, "sup distance {sup}");
    }

    #[test]
    fn empirical_opacity_rejects_bad_grids() {
        let m = medium(&[0.0, 1.0], &[1.0], &[Rgb::WHITE]);
        assert!(matches!(empirical_opacity(&m, 100, 0, &[]), Err(Error::InvalidGrid)));
        assert!(matches!(
            empirical_opacity(&m, 100, 0, &[0.8, 0.2]),
            Err(Error::InvalidGrid)
        ));
        assert!(matches!(
            empirical_opacity(&m, 100, 0, &[0.5, 1.5]),
            Err(Error::InvalidGrid)
        ));
    }
}
