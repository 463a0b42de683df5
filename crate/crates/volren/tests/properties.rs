//! Property tests for the algebraic identities the renderer is built on.

use proptest::prelude::*;

use volren::render::Alpha;
use volren::{
    discretize, optical_depth, prefix_transmittance, render_alpha, render_homogeneous,
    render_piecewise, render_telescoping, sample_termination, transmittance, ConstantField,
    Placement, PiecewiseMedium, Ray, Rgb, Termination, Vec3,
};

fn rgb_strategy() -> impl Strategy<Value = Rgb> {
    (0.0..=1.0f64, 0.0..=1.0f64, 0.0..=1.0f64).prop_map(|(r, g, b)| Rgb::new(r, g, b))
}

fn medium_strategy(max_segments: usize) -> impl Strategy<Value = PiecewiseMedium> {
    (1..=max_segments).prop_flat_map(|n| {
        (
            0.0..2.0f64,
            prop::collection::vec(0.05..1.5f64, n),
            prop::collection::vec(0.0..4.0f64, n),
            prop::collection::vec(rgb_strategy(), n),
        )
            .prop_map(|(start, deltas, sigmas, colors)| {
                let mut boundaries = Vec::with_capacity(deltas.len() + 1);
                boundaries.push(start);
                for d in &deltas {
                    boundaries.push(boundaries.last().unwrap() + d);
                }
                PiecewiseMedium::new(boundaries, sigmas, colors).unwrap()
            })
    })
}

fn alphas_of(medium: &PiecewiseMedium) -> Vec<Alpha> {
    medium
        .sigmas()
        .iter()
        .zip(medium.deltas())
        .map(|(&s, &d)| Alpha::from_sigma_delta(s, d))
        .collect()
}

proptest! {
    #[test]
    fn transmittance_factorizes(
        m in medium_strategy(12),
        f1 in 0.0..=1.0f64,
        f2 in 0.0..=1.0f64,
        f3 in 0.0..=1.0f64,
    ) {
        let span = m.t_end() - m.t_start();
        let mut cuts = [f1 * span, f2 * span, f3 * span];
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let (a, b, c) = (
            m.t_start() + cuts[0],
            m.t_start() + cuts[1],
            m.t_start() + cuts[2],
        );
        let whole = transmittance(&m, a, c).unwrap();
        let split = transmittance(&m, a, b).unwrap() * transmittance(&m, b, c).unwrap();
        prop_assert!((whole - split).abs() <= 1e-12, "{whole} vs {split}");
    }

    #[test]
    fn optical_depth_is_additive(
        m in medium_strategy(12),
        f1 in 0.0..=1.0f64,
        f2 in 0.0..=1.0f64,
        f3 in 0.0..=1.0f64,
    ) {
        let span = m.t_end() - m.t_start();
        let mut cuts = [f1 * span, f2 * span, f3 * span];
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let (a, b, c) = (
            m.t_start() + cuts[0],
            m.t_start() + cuts[1],
            m.t_start() + cuts[2],
        );
        let whole = optical_depth(&m, a, c).unwrap().value();
        let parts = optical_depth(&m, a, b).unwrap().value()
            + optical_depth(&m, b, c).unwrap().value();
        prop_assert!((whole - parts).abs() <= 1e-12);
    }

    #[test]
    fn transmittance_in_unit_interval(m in medium_strategy(12), f in 0.0..=1.0f64) {
        let b = m.t_start() + f * (m.t_end() - m.t_start());
        let depth = optical_depth(&m, m.t_start(), b).unwrap().value();
        let trans = transmittance(&m, m.t_start(), b).unwrap();
        prop_assert!(trans > 0.0 && trans <= 1.0);
        prop_assert_eq!(trans == 1.0, depth == 0.0);
    }

    #[test]
    fn render_forms_agree(m in medium_strategy(16), bg in prop::option::of(rgb_strategy())) {
        let density = render_piecewise(&m, bg);
        let alpha = render_alpha(&alphas_of(&m), m.colors(), bg).unwrap();
        let telescoping = render_telescoping(&m, bg);
        prop_assert!(density.color.max_abs_diff(alpha.color) <= 1e-12);
        prop_assert!(density.color.max_abs_diff(telescoping) <= 1e-12);
        prop_assert!(
            (density.residual_transmittance - alpha.residual_transmittance).abs() <= 1e-12
        );
    }

    #[test]
    fn weights_partition_unity(m in medium_strategy(16)) {
        let out = render_piecewise(&m, None);
        let total: f64 = out.weights.iter().sum::<f64>() + out.residual_transmittance;
        prop_assert!((total - 1.0).abs() <= 1e-12);
        for (&w, &a) in out.weights.iter().zip(&out.alphas) {
            prop_assert!((0.0..=1.0).contains(&w));
            prop_assert!((0.0..=1.0).contains(&a));
        }
        prop_assert!((0.0..=1.0).contains(&out.residual_transmittance));
    }

    #[test]
    fn output_alphas_match_segment_depths(m in medium_strategy(16)) {
        let out = render_piecewise(&m, None);
        for n in 0..m.segments() {
            let expected = -(-m.sigmas()[n] * m.deltas()[n]).exp_m1();
            prop_assert!((out.alphas[n] - expected).abs() <= 1e-12);
        }
    }

    #[test]
    fn subdividing_segments_changes_nothing(m in medium_strategy(8), k in 2usize..=8) {
        let mut boundaries = vec![m.t_start()];
        let mut sigmas = Vec::new();
        let mut colors = Vec::new();
        for n in 0..m.segments() {
            let (lo, hi) = (m.boundaries()[n], m.boundaries()[n + 1]);
            for j in 1..=k {
                let t = if j == k { hi } else { lo + (hi - lo) * j as f64 / k as f64 };
                boundaries.push(t);
                sigmas.push(m.sigmas()[n]);
                colors.push(m.colors()[n]);
            }
        }
        let fine = PiecewiseMedium::new(boundaries, sigmas, colors).unwrap();
        let coarse_out = render_piecewise(&m, Some(Rgb::WHITE));
        let fine_out = render_piecewise(&fine, Some(Rgb::WHITE));
        prop_assert!(coarse_out.color.max_abs_diff(fine_out.color) <= 1e-12);
        prop_assert!(
            (coarse_out.residual_transmittance - fine_out.residual_transmittance).abs() <= 1e-12
        );
    }

    #[test]
    fn densifying_a_segment_reduces_residual(
        m in medium_strategy(8),
        pick in 0.0..1.0f64,
        bump in 0.1..3.0f64,
    ) {
        let n = ((pick * m.segments() as f64) as usize).min(m.segments() - 1);
        let mut sigmas = m.sigmas().to_vec();
        sigmas[n] += bump;
        let denser = PiecewiseMedium::new(
            m.boundaries().to_vec(),
            sigmas,
            m.colors().to_vec(),
        ).unwrap();
        let before = render_piecewise(&m, None).residual_transmittance;
        let after = render_piecewise(&denser, None).residual_transmittance;
        prop_assert!(after < before);
    }

    #[test]
    fn rendered_color_stays_in_input_hull(m in medium_strategy(12), bg in rgb_strategy()) {
        let out = render_piecewise(&m, Some(bg));
        for ch in 0..3 {
            let mut lo = bg.channels()[ch];
            let mut hi = lo;
            for c in m.colors() {
                lo = lo.min(c.channels()[ch]);
                hi = hi.max(c.channels()[ch]);
            }
            let v = out.color.channels()[ch];
            prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
        }
    }

    #[test]
    fn csv_round_trip_is_exact(m in medium_strategy(12)) {
        let mut buf = Vec::new();
        m.to_csv(&mut buf).unwrap();
        let parsed = PiecewiseMedium::from_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(parsed, m);
    }

    #[test]
    fn termination_samples_are_valid(m in medium_strategy(12), u in 0.0..1.0f64) {
        match sample_termination(&m, u).unwrap() {
            Termination::Hit { t, segment } => {
                prop_assert!(segment < m.segments());
                prop_assert!(m.boundaries()[segment] <= t);
                prop_assert!(t <= m.boundaries()[segment + 1]);
                prop_assert!(m.sigmas()[segment] > 0.0);
            }
            Termination::Escaped => {
                let residual = prefix_transmittance(&m, m.segments()).unwrap();
                prop_assert!(u >= 1.0 - residual - 1e-12);
            }
        }
    }

    #[test]
    fn constant_field_discretization_matches_closed_form(
        sigma in 0.0..4.0f64,
        color in rgb_strategy(),
        length in 0.1..4.0f64,
        n in 1usize..64,
    ) {
        let ray = Ray::new(Vec3::ZERO, Vec3::new(0.0, 0.0, 1.0), 0.0, length).unwrap();
        let field = ConstantField { sigma, color };
        let m = discretize(&field, &ray, n, Placement::Uniform).unwrap();
        let discrete = render_piecewise(&m, None).color;
        if sigma == 0.0 {
            prop_assert_eq!(discrete, Rgb::BLACK);
        } else {
            let closed = render_homogeneous(sigma, color, 0.0, length).unwrap();
            prop_assert!(discrete.max_abs_diff(closed) <= 1e-12);
        }
    }
}
