//! Orthographic camera over a fixed axis-aligned view box.
//!
//! Pixels map onto x in [-1, 1] (left to right) and y in [-1, 1] (top row
//! at y = +1). Every ray starts on the z = -1 face, travels along +z, and
//! integrates over t in [0, 2]. Scenes are authored inside this box.

use std::thread;

use volren::{integrate_ray, Placement, Ray, Result, Rgb, Scene, Vec3};

pub const VIEW_MIN: f64 = -1.0;
pub const VIEW_MAX: f64 = 1.0;
pub const RAY_SPAN: f64 = 2.0;

/// Ray through the center of pixel (row, col) of a width x height grid.
pub fn pixel_ray(width: usize, height: usize, row: usize, col: usize) -> Ray {
    let span = VIEW_MAX - VIEW_MIN;
    let x = VIEW_MIN + (col as f64 + 0.5) / width as f64 * span;
    let y = VIEW_MAX - (row as f64 + 0.5) / height as f64 * span;
    Ray::new(Vec3::new(x, y, -1.0), Vec3::new(0.0, 0.0, 1.0), 0.0, RAY_SPAN)
        .expect("pixel rays are valid by construction")
}

/// The axis ray through the view box center, used by convergence sweeps.
pub fn center_ray() -> Ray {
    Ray::new(Vec3::new(0.0, 0.0, -1.0), Vec3::new(0.0, 0.0, 1.0), 0.0, RAY_SPAN)
        .expect("center ray is valid")
}

fn pixel_placement(stratified: Option<u64>, row: usize, col: usize, width: usize) -> Placement {
    match stratified {
        None => Placement::Uniform,
        // Per-pixel RNG streams keep jitter independent across pixels and
        // the image bytes independent of row scheduling.
        Some(seed) => Placement::Stratified { seed, stream: (row * width + col) as u64 },
    }
}

/// Renders the scene to a row-major pixel buffer. Rows are distributed
/// over threads in contiguous bands; each pixel depends only on its own
/// coordinates, so the result is identical for any thread count.
pub fn render_image(
    scene: &Scene,
    width: usize,
    height: usize,
    n_segments: usize,
    stratified: Option<u64>,
) -> Result<Vec<Rgb>> {
    let mut pixels = vec![Rgb::BLACK; width * height];
    let threads = thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let rows_per_band = height.div_ceil(threads).max(1);
    let mut failure = None;
    thread::scope(|scope| {
        let mut handles = Vec::new();
        for (band_index, band) in pixels.chunks_mut(rows_per_band * width).enumerate() {
            let first_row = band_index * rows_per_band;
            handles.push(scope.spawn(move || -> Result<()> {
                for (offset, pixel) in band.iter_mut().enumerate() {
                    let row = first_row + offset / width;
                    let col = offset % width;
                    let ray = pixel_ray(width, height, row, col);
                    let placement = pixel_placement(stratified, row, col, width);
                    *pixel = integrate_ray(scene, &ray, n_segments, placement)?.color;
                }
                Ok(())
            }));
        }
        for handle in handles {
            if let Err(e) = handle.join().expect("render thread panicked") {
                failure.get_or_insert(e);
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(pixels),
    }
}
