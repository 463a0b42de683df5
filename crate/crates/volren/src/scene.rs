//! Named built-in scenes with numeric parameters, shared by the CLI and
//! the Python bindings.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{BlobField, ConstantField, Field, FieldSample, GaussianBlob, StepField};
use crate::math::{Rgb, Vec3};

/// Palette cycled through by the `blobs` scene.
const BLOB_PALETTE: [Rgb; 5] = [
    Rgb { r: 0.9, g: 0.2, b: 0.15 },
    Rgb { r: 0.2, g: 0.75, b: 0.3 },
    Rgb { r: 0.2, g: 0.35, b: 0.9 },
    Rgb { r: 0.95, g: 0.8, b: 0.2 },
    Rgb { r: 0.7, g: 0.3, b: 0.8 },
];

/// A built-in procedural scene.
#[derive(Clone, Debug)]
pub enum Scene {
    Constant(ConstantField),
    Step(StepField),
    Blob(GaussianBlob),
    Blobs(BlobField),
}

impl Field for Scene {
    fn eval(&self, position: Vec3) -> FieldSample {
        match self {
            Scene::Constant(f) => f.eval(position),
            Scene::Step(f) => f.eval(position),
            Scene::Blob(f) => f.eval(position),
            Scene::Blobs(f) => f.eval(position),
        }
    }
}

struct Params<'a> {
    scene: &'a str,
    map: &'a BTreeMap<String, f64>,
    known: Vec<&'static str>,
}

impl<'a> Params<'a> {
    fn new(scene: &'a str, map: &'a BTreeMap<String, f64>) -> Self {
        Self { scene, map, known: Vec::new() }
    }

    fn get(&mut self, key: &'static str, default: f64) -> f64 {
        self.known.push(key);
        self.map.get(key).copied().unwrap_or(default)
    }

    fn finish(self) -> Result<()> {
        for key in self.map.keys() {
            if !self.known.contains(&key.as_str()) {
                return Err(Error::UnknownSceneParam {
                    scene: self.scene.to_string(),
                    key: key.clone(),
                });
            }
        }
        Ok(())
    }
}

fn positive(key: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() || value <= 0.0 {
        return Err(Error::InvalidSceneParam { key: key.into(), value });
    }
    Ok(value)
}

fn non_negative(key: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::InvalidSceneParam { key: key.into(), value });
    }
    Ok(value)
}

fn unit_color(r: f64, g: f64, b: f64) -> Result<Rgb> {
    let color = Rgb::new(r, g, b);
    if !color.in_unit_range() {
        return Err(Error::InvalidSceneParam { key: "r/g/b".into(), value: r.min(g).min(b) });
    }
    Ok(color)
}

/// Builds a scene from its name and a numeric parameter map. Unknown names
/// and unknown or invalid parameters are rejected.
///
/// Scenes and their parameters (defaults in parentheses):
/// - `constant`: `sigma` (1), `r,g,b` (1,1,1)
/// - `step`: `axis` (2), `threshold` (0), `sigma` (2), `r,g,b` (1,1,1)
/// - `blob`: `cx,cy,cz` (0,0,0), `sigma0` (4), `radius` (0.25), `r,g,b` (1,1,1)
/// - `blobs`: `count` (3) blobs on a ring of radius `ring` (0.55) in the
///   z = `cz` (0) plane, each with `sigma0` (4) and `radius` (0.22),
///   colored from a fixed palette
pub fn build_scene(name: &str, params: &BTreeMap<String, f64>) -> Result<Scene> {
    match name {
        "constant" => {
            let mut p = Params::new(name, params);
            let sigma = non_negative("sigma", p.get("sigma", 1.0))?;
            let color = unit_color(p.get("r", 1.0), p.get("g", 1.0), p.get("b", 1.0))?;
            p.finish()?;
            Ok(Scene::Constant(ConstantField { sigma, color }))
        }
        "step" => {
            let mut p = Params::new(name, params);
            let axis = p.get("axis", 2.0);
            if axis != 0.0 && axis != 1.0 && axis != 2.0 {
                return Err(Error::InvalidSceneParam { key: "axis".into(), value: axis });
            }
            let threshold = p.get("threshold", 0.0);
            let sigma = non_negative("sigma", p.get("sigma", 2.0))?;
            let color = unit_color(p.get("r", 1.0), p.get("g", 1.0), p.get("b", 1.0))?;
            p.finish()?;
            Ok(Scene::Step(StepField { axis: axis as usize, threshold, sigma, color }))
        }
        "blob" => {
            let mut p = Params::new(name, params);
            let center = Vec3::new(p.get("cx", 0.0), p.get("cy", 0.0), p.get("cz", 0.0));
            let peak_sigma = non_negative("sigma0", p.get("sigma0", 4.0))?;
            let radius = positive("radius", p.get("radius", 0.25))?;
            let color = unit_color(p.get("r", 1.0), p.get("g", 1.0), p.get("b", 1.0))?;
            p.finish()?;
            Ok(Scene::Blob(GaussianBlob { center, peak_sigma, radius, color }))
        }
        "blobs" => {
            let mut p = Params::new(name, params);
            let count = p.get("count", 3.0);
            if count < 1.0 || count.fract() != 0.0 || count > 64.0 {
                return Err(Error::InvalidSceneParam { key: "count".into(), value: count });
            }
            let ring = non_negative("ring", p.get("ring", 0.55))?;
            let cz = p.get("cz", 0.0);
            let peak_sigma = non_negative("sigma0", p.get("sigma0", 4.0))?;
            let radius = positive("radius", p.get("radius", 0.22))?;
            p.finish()?;
            let count = count as usize;
            let blobs = (0..count)
                .map(|k| {
                    let angle = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
                    GaussianBlob {
                        center: Vec3::new(ring * angle.cos(), ring * angle.sin(), cz),
                        peak_sigma,
                        radius,
                        color: BLOB_PALETTE[k % BLOB_PALETTE.len()],
                    }
                })
                .collect();
            Ok(Scene::Blobs(BlobField { blobs }))
        }
        other => Err(Error::UnknownScene { name: other.to_string() }),
    }
}
