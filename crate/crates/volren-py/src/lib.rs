//! Python bindings for the volren toolkit.
//!
//! Exposes the core types (`Ray`, `PiecewiseMedium`, `Scene`, outputs) and
//! the rendering, transmittance, quadrature and Monte Carlo operations.
//! Colors are plain `(r, g, b)` tuples; library errors surface as
//! `ValueError`.

use std::collections::BTreeMap;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use volren as vr;
use volren::Field;

fn err(e: vr::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rgb(t: (f64, f64, f64)) -> vr::Rgb {
    vr::Rgb::new(t.0, t.1, t.2)
}

fn tup(c: vr::Rgb) -> (f64, f64, f64) {
    (c.r, c.g, c.b)
}

fn placement(seed: Option<u64>, stream: u64) -> vr::Placement {
    match seed {
        None => vr::Placement::Uniform,
        Some(seed) => vr::Placement::Stratified { seed, stream },
    }
}

/// A ray with its integration interval.
#[pyclass(frozen)]
struct Ray {
    inner: vr::Ray,
}

#[pymethods]
impl Ray {
    #[new]
    fn new(
        origin: (f64, f64, f64),
        direction: (f64, f64, f64),
        t_near: f64,
        t_far: f64,
    ) -> PyResult<Self> {
        let inner = vr::Ray::new(
            vr::Vec3::new(origin.0, origin.1, origin.2),
            vr::Vec3::new(direction.0, direction.1, direction.2),
            t_near,
            t_far,
        )
        .map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn origin(&self) -> (f64, f64, f64) {
        let o = self.inner.origin();
        (o.x, o.y, o.z)
    }

    #[getter]
    fn direction(&self) -> (f64, f64, f64) {
        let d = self.inner.direction();
        (d.x, d.y, d.z)
    }

    #[getter]
    fn t_near(&self) -> f64 {
        self.inner.t_near()
    }

    #[getter]
    fn t_far(&self) -> f64 {
        self.inner.t_far()
    }

    fn point_at(&self, t: f64) -> PyResult<(f64, f64, f64)> {
        let p = self.inner.point_at(t).map_err(err)?;
        Ok((p.x, p.y, p.z))
    }

    fn __repr__(&self) -> String {
        format!(
            "Ray(origin={:?}, direction={:?}, t_near={}, t_far={})",
            self.origin(),
            self.direction(),
            self.inner.t_near(),
            self.inner.t_far()
        )
    }
}

/// Ordered segments with constant density and color.
#[pyclass(frozen)]
struct PiecewiseMedium {
    inner: vr::PiecewiseMedium,
}

#[pymethods]
impl PiecewiseMedium {
    #[new]
    fn new(
        boundaries: Vec<f64>,
        sigmas: Vec<f64>,
        colors: Vec<(f64, f64, f64)>,
    ) -> PyResult<Self> {
        let colors = colors.into_iter().map(rgb).collect();
        let inner = vr::PiecewiseMedium::new(boundaries, sigmas, colors).map_err(err)?;
        Ok(Self { inner })
    }

    /// Parses the CSV medium format (header `t0,t1,sigma,r,g,b`).
    #[staticmethod]
    fn read_csv(path: &str) -> PyResult<Self> {
        Ok(Self { inner: vr::PiecewiseMedium::read_csv_file(path).map_err(err)? })
    }

    fn write_csv(&self, path: &str) -> PyResult<()> {
        self.inner.write_csv_file(path).map_err(err)
    }

    #[getter]
    fn boundaries(&self) -> Vec<f64> {
        self.inner.boundaries().to_vec()
    }

    #[getter]
    fn sigmas(&self) -> Vec<f64> {
        self.inner.sigmas().to_vec()
    }

    #[getter]
    fn colors(&self) -> Vec<(f64, f64, f64)> {
        self.inner.colors().iter().map(|&c| tup(c)).collect()
    }

    #[getter]
    fn deltas(&self) -> Vec<f64> {
        self.inner.deltas().to_vec()
    }

    #[getter]
    fn segments(&self) -> usize {
        self.inner.segments()
    }

    #[getter]
    fn t_start(&self) -> f64 {
        self.inner.t_start()
    }

    #[getter]
    fn t_end(&self) -> f64 {
        self.inner.t_end()
    }

    fn __repr__(&self) -> String {
        format!(
            "PiecewiseMedium(segments={}, t=[{}, {}])",
            self.inner.segments(),
            self.inner.t_start(),
            self.inner.t_end()
        )
    }
}

/// Composited color, per-segment weights and alphas, and the residual
/// transmittance.
#[pyclass(frozen)]
struct RenderOutput {
    #[pyo3(get)]
    color: (f64, f64, f64),
    #[pyo3(get)]
    weights: Vec<f64>,
    #[pyo3(get)]
    alphas: Vec<f64>,
    #[pyo3(get)]
    residual_transmittance: f64,
}

impl RenderOutput {
    fn wrap(out: vr::RenderOutput) -> Self {
        Self {
            color: tup(out.color),
            weights: out.weights,
            alphas: out.alphas,
            residual_transmittance: out.residual_transmittance,
        }
    }
}

#[pymethods]
impl RenderOutput {
    fn __repr__(&self) -> String {
        format!(
            "RenderOutput(color={:?}, residual_transmittance={})",
            self.color, self.residual_transmittance
        )
    }
}

/// Monte Carlo estimate: per-channel mean and standard error, sample
/// count, and the fraction of escaped rays.
#[pyclass(frozen)]
struct EstimateStats {
    #[pyo3(get)]
    mean: (f64, f64, f64),
    #[pyo3(get)]
    standard_error: (f64, f64, f64),
    #[pyo3(get)]
    n_samples: u64,
    #[pyo3(get)]
    escape_fraction: f64,
}

#[pymethods]
impl EstimateStats {
    fn __repr__(&self) -> String {
        format!(
            "EstimateStats(mean={:?}, n_samples={}, escape_fraction={})",
            self.mean, self.n_samples, self.escape_fraction
        )
    }
}

/// A named procedural scene (constant | step | blob | blobs).
#[pyclass(frozen)]
struct Scene {
    inner: vr::Scene,
}

#[pymethods]
impl Scene {
    #[new]
    #[pyo3(signature = (name, params=None))]
    fn new(name: &str, params: Option<BTreeMap<String, f64>>) -> PyResult<Self> {
        let params = params.unwrap_or_default();
        Ok(Self { inner: vr::build_scene(name, &params).map_err(err)? })
    }

    /// Density and color at a point in space.
    fn eval(&self, position: (f64, f64, f64)) -> (f64, (f64, f64, f64)) {
        let s = self.inner.eval(vr::Vec3::new(position.0, position.1, position.2));
        (s.sigma, tup(s.color))
    }
}

#[pyfunction]
fn render_homogeneous(
    sigma: f64,
    color: (f64, f64, f64),
    a: f64,
    b: f64,
) -> PyResult<(f64, f64, f64)> {
    Ok(tup(vr::render_homogeneous(sigma, rgb(color), a, b).map_err(err)?))
}

#[pyfunction]
#[pyo3(signature = (medium, background=None))]
fn render_piecewise(
    medium: &PiecewiseMedium,
    background: Option<(f64, f64, f64)>,
) -> RenderOutput {
    RenderOutput::wrap(vr::render_piecewise(&medium.inner, background.map(rgb)))
}

#[pyfunction]
#[pyo3(signature = (alphas, colors, background=None))]
fn render_alpha(
    alphas: Vec<f64>,
    colors: Vec<(f64, f64, f64)>,
    background: Option<(f64, f64, f64)>,
) -> PyResult<RenderOutput> {
    let alphas = alphas
        .into_iter()
        .map(vr::Alpha::new)
        .collect::<vr::Result<Vec<_>>>()
        .map_err(err)?;
    let colors: Vec<vr::Rgb> = colors.into_iter().map(rgb).collect();
    Ok(RenderOutput::wrap(
        vr::render_alpha(&alphas, &colors, background.map(rgb)).map_err(err)?,
    ))
}

#[pyfunction]
#[pyo3(signature = (medium, background=None))]
fn render_telescoping(
    medium: &PiecewiseMedium,
    background: Option<(f64, f64, f64)>,
) -> (f64, f64, f64) {
    tup(vr::render_telescoping(&medium.inner, background.map(rgb)))
}

#[pyfunction]
fn weights(medium: &PiecewiseMedium) -> (Vec<f64>, f64) {
    vr::weights(&medium.inner)
}

/// Returns `(d_sigma, d_color)`: per-segment RGB gradients with respect to
/// density, and per-segment scalar gradients with respect to color.
#[pyfunction]
#[pyo3(signature = (medium, background=None))]
fn grad_render(
    medium: &PiecewiseMedium,
    background: Option<(f64, f64, f64)>,
) -> (Vec<(f64, f64, f64)>, Vec<f64>) {
    let grads = vr::grad_render(&medium.inner, background.map(rgb));
    (grads.d_sigma.into_iter().map(tup).collect(), grads.d_color)
}

#[pyfunction]
fn optical_depth(medium: &PiecewiseMedium, a: f64, b: f64) -> PyResult<f64> {
    Ok(vr::optical_depth(&medium.inner, a, b).map_err(err)?.value())
}

#[pyfunction]
fn transmittance(medium: &PiecewiseMedium, a: f64, b: f64) -> PyResult<f64> {
    vr::transmittance(&medium.inner, a, b).map_err(err)
}

#[pyfunction]
fn prefix_transmittance(medium: &PiecewiseMedium, index: usize) -> PyResult<f64> {
    vr::prefix_transmittance(&medium.inner, index).map_err(err)
}

#[pyfunction]
fn opacity(medium: &PiecewiseMedium, t: f64) -> PyResult<f64> {
    vr::opacity(&medium.inner, t).map_err(err)
}

#[pyfunction]
fn hit_pdf(medium: &PiecewiseMedium, t: f64) -> PyResult<f64> {
    vr::hit_pdf(&medium.inner, t).map_err(err)
}

/// Inverse-CDF termination sample: `(t, segment)` for a hit, `None` for an
/// escape.
#[pyfunction]
fn sample_termination(medium: &PiecewiseMedium, u: f64) -> PyResult<Option<(f64, usize)>> {
    match vr::sample_termination(&medium.inner, u).map_err(err)? {
        vr::Termination::Hit { t, segment } => Ok(Some((t, segment))),
        vr::Termination::Escaped => Ok(None),
    }
}

#[pyfunction]
#[pyo3(signature = (medium, n_samples, seed, background=None))]
fn mc_estimate(
    medium: &PiecewiseMedium,
    n_samples: u64,
    seed: u64,
    background: Option<(f64, f64, f64)>,
) -> PyResult<EstimateStats> {
    let stats =
        vr::mc_estimate(&medium.inner, background.map(rgb), n_samples, seed).map_err(err)?;
    Ok(EstimateStats {
        mean: tup(stats.mean),
        standard_error: tup(stats.standard_error),
        n_samples: stats.n_samples,
        escape_fraction: stats.escape_fraction,
    })
}

#[pyfunction]
fn empirical_opacity(
    medium: &PiecewiseMedium,
    n_samples: u64,
    seed: u64,
    t_grid: Vec<f64>,
) -> PyResult<Vec<f64>> {
    vr::empirical_opacity(&medium.inner, n_samples, seed, &t_grid).map_err(err)
}

#[pyfunction]
fn sample_field(scene: &Scene, ray: &Ray, t: f64) -> PyResult<(f64, (f64, f64, f64))> {
    let s = vr::sample_field(&scene.inner, &ray.inner, t).map_err(err)?;
    Ok((s.sigma, tup(s.color)))
}

/// Discretizes a scene along a ray. `seed=None` probes segment midpoints;
/// with a seed, each segment is probed at a jittered point on RNG stream
/// `stream`.
#[pyfunction]
#[pyo3(signature = (scene, ray, n_segments, seed=None, stream=0))]
fn discretize(
    scene: &Scene,
    ray: &Ray,
    n_segments: usize,
    seed: Option<u64>,
    stream: u64,
) -> PyResult<PiecewiseMedium> {
    let inner = vr::discretize(&scene.inner, &ray.inner, n_segments, placement(seed, stream))
        .map_err(err)?;
    Ok(PiecewiseMedium { inner })
}

#[pyfunction]
#[pyo3(signature = (scene, ray, n_segments, seed=None, stream=0))]
fn integrate_ray(
    scene: &Scene,
    ray: &Ray,
    n_segments: usize,
    seed: Option<u64>,
    stream: u64,
) -> PyResult<RenderOutput> {
    let out = vr::integrate_ray(&scene.inner, &ray.inner, n_segments, placement(seed, stream))
        .map_err(err)?;
    Ok(RenderOutput::wrap(out))
}

#[pyfunction]
fn riemann_reference(scene: &Scene, ray: &Ray, n_steps: usize) -> PyResult<(f64, f64, f64)> {
    Ok(tup(vr::riemann_reference(&scene.inner, &ray.inner, n_steps).map_err(err)?))
}

/// `(n, err_r, err_g, err_b, err_max, seconds)`
type ConvergenceRow = (usize, f64, f64, f64, f64, f64);

/// Rows of `(n, err_r, err_g, err_b, err_max, seconds)` against the
/// 1e6-step reference.
#[pyfunction]
fn convergence_table(
    scene: &Scene,
    ray: &Ray,
    n_list: Vec<usize>,
) -> PyResult<Vec<ConvergenceRow>> {
    let rows = vr::convergence_table(&scene.inner, &ray.inner, &n_list).map_err(err)?;
    Ok(rows
        .into_iter()
        .map(|r| (r.n_segments, r.err[0], r.err[1], r.err[2], r.err_max, r.seconds))
        .collect())
}

#[pymodule]
fn volren_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Ray>()?;
    m.add_class::<PiecewiseMedium>()?;
    m.add_class::<RenderOutput>()?;
    m.add_class::<EstimateStats>()?;
    m.add_class::<Scene>()?;
    m.add_function(wrap_pyfunction!(render_homogeneous, m)?)?;
    m.add_function(wrap_pyfunction!(render_piecewise, m)?)?;
    m.add_function(wrap_pyfunction!(render_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(render_telescoping, m)?)?;
    m.add_function(wrap_pyfunction!(weights, m)?)?;
    m.add_function(wrap_pyfunction!(grad_render, m)?)?;
    m.add_function(wrap_pyfunction!(optical_depth, m)?)?;
    m.add_function(wrap_pyfunction!(transmittance, m)?)?;
    m.add_function(wrap_pyfunction!(prefix_transmittance, m)?)?;
    m.add_function(wrap_pyfunction!(opacity, m)?)?;
    m.add_function(wrap_pyfunction!(hit_pdf, m)?)?;
    m.add_function(wrap_pyfunction!(sample_termination, m)?)?;
    m.add_function(wrap_pyfunction!(mc_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_opacity, m)?)?;
    m.add_function(wrap_pyfunction!(sample_field, m)?)?;
    m.add_function(wrap_pyfunction!(discretize, m)?)?;
    m.add_function(wrap_pyfunction!(integrate_ray, m)?)?;
    m.add_function(wrap_pyfunction!(riemann_reference, m)?)?;
    m.add_function(wrap_pyfunction!(convergence_table, m)?)?;
    Ok(())
}
