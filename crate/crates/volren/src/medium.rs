//! Rays and the piecewise-constant medium representation.
//!
//! A [`PiecewiseMedium`] is an ordered partition of a parameter interval
//! into segments, each carrying a constant density (per unit length) and a
//! constant emission color. It is the discrete structure every
//! transmittance and rendering routine in this crate operates on.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::math::{Rgb, Vec3};

/// Tolerance on `|direction| - 1` accepted by [`Ray::new`].
pub const DIRECTION_NORM_TOLERANCE: f64 = 1e-9;

/// A ray with its integration interval `[t_near, t_far]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ray {
    origin: Vec3,
    direction: Vec3,
    t_near: f64,
    t_far: f64,
}

impl Ray {
    /// Validates that `direction` is unit length (within 1e-9), that
    /// `t_near >= 0` and `t_near < t_far`, and that all components are
    /// finite.
    pub fn new(origin: Vec3, direction: Vec3, t_near: f64, t_far: f64) -> Result<Self> {
        if !origin.is_finite() || !direction.is_finite() || !t_near.is_finite() || !t_far.is_finite()
        {
            return Err(Error::NonFiniteRay);
        }
        let norm = direction.norm();
        if (norm - 1.0).abs() > DIRECTION_NORM_TOLERANCE {
            return Err(Error::NonUnitDirection { norm });
        }
        if t_near < 0.0 || t_near >= t_far {
            return Err(Error::InvalidRayBounds { t_near, t_far });
        }
        Ok(Self { origin, direction, t_near, t_far })
    }

    pub fn origin(&self) -> Vec3 {
        self.origin
    }

    pub fn direction(&self) -> Vec3 {
        self.direction
    }

    pub fn t_near(&self) -> f64 {
        self.t_near
    }

    pub fn t_far(&self) -> f64 {
        self.t_far
    }

    /// Point at parameter `t`, which must lie inside `[t_near, t_far]`.
    pub fn point_at(&self, t: f64) -> Result<Vec3> {
        if !(self.t_near..=self.t_far).contains(&t) {
            return Err(Error::OutOfRayBounds { t, t_near: self.t_near, t_far: self.t_far });
        }
        Ok(self.origin + self.direction * t)
    }
}

/// Ordered segments with constant density and color.
///
/// Invariants established at construction and preserved thereafter:
/// boundaries strictly increasing, densities finite and non-negative,
/// colors inside the unit range per channel, and one density/color pair
/// per segment.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseMedium {
    boundaries: Vec<f64>,
    sigmas: Vec<f64>,
    colors: Vec<Rgb>,
    deltas: Vec<f64>,
}

impl PiecewiseMedium {
    /// Builds a validated medium. Errors name the first offending segment
    /// with a 1-based index.
    pub fn new(boundaries: Vec<f64>, sigmas: Vec<f64>, colors: Vec<Rgb>) -> Result<Self> {
        if boundaries.len() < 2 {
            return Err(Error::NoSegments { boundaries: boundaries.len() });
        }
        let segments = boundaries.len() - 1;
        if sigmas.len() != segments || colors.len() != segments {
            return Err(Error::LengthMismatch {
                boundaries: boundaries.len(),
                sigmas: sigmas.len(),
                colors: colors.len(),
            });
        }
        if !boundaries[0].is_finite() {
            return Err(Error::NonFiniteBoundary { n: 1 });
        }
        let mut deltas = Vec::with_capacity(segments);
        for n in 1..=segments {
            if !boundaries[n].is_finite() {
                return Err(Error::NonFiniteBoundary { n: n + 1 });
            }
            let delta = boundaries[n] - boundaries[n - 1];
            if delta == 0.0 {
                return Err(Error::ZeroLengthSegment { n });
            }
            if delta < 0.0 {
                return Err(Error::UnsortedBoundaries { n });
            }
            deltas.push(delta);
        }
        for n in 1..=segments {
            let sigma = sigmas[n - 1];
            if sigma.is_nan() || sigma.is_infinite() {
                return Err(Error::NonFiniteDensity { n });
            }
            if sigma < 0.0 {
                return Err(Error::NegativeDensity { n });
            }
            if !colors[n - 1].in_unit_range() {
                return Err(Error::ColorOutOfRange { n });
            }
        }
        Ok(Self { boundaries, sigmas, colors, deltas })
    }

    pub fn segments(&self) -> usize {
        self.sigmas.len()
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn sigmas(&self) -> &[f64] {
        &self.sigmas
    }

    pub fn colors(&self) -> &[Rgb] {
        &self.colors
    }

    /// Cached segment lengths `boundaries[n+1] - boundaries[n]`.
    pub fn deltas(&self) -> &[f64] {
        &self.deltas
    }

    pub fn t_start(&self) -> f64 {
        self.boundaries[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.boundaries.last().unwrap()
    }

    pub fn contains(&self, t: f64) -> bool {
        (self.t_start()..=self.t_end()).contains(&t)
    }

    /// Index of the segment containing `t`, resolving interior boundaries
    /// to the right-hand segment. The final boundary maps to the last
    /// segment.
    pub fn segment_containing(&self, t: f64) -> Result<usize> {
        if !self.contains(t) {
            return Err(Error::OutOfDomain { t, lo: self.t_start(), hi: self.t_end() });
        }
        let index = self.boundaries.partition_point(|&b| b <= t);
        // index is in 1..=N+1; map the right edge onto the last segment.
        Ok((index - 1).min(self.segments() - 1))
    }

    /// Reads the CSV medium format: header `t0,t1,sigma,r,g,b`, one row per
    /// segment, rows contiguous (`t1` of each row equals `t0` of the next).
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut lines = BufReader::new(reader).lines();
        let header = match lines.next() {
            Some(line) => line?,
            None => {
                return Err(Error::MediumCsv { row: 0, message: "empty file".into() });
            }
        };
        if header.trim_end_matches('\r') != "t0,t1,sigma,r,g,b" {
            return Err(Error::MediumCsv {
                row: 1,
                message: format!("bad header '{header}', expected 't0,t1,sigma,r,g,b'"),
            });
        }

        let mut boundaries = Vec::new();
        let mut sigmas = Vec::new();
        let mut colors = Vec::new();
        let mut row = 1usize;
        for line in lines {
            let line = line?;
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            row += 1;
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(Error::MediumCsv {
                    row,
                    message: format!("expected 6 fields, got {}", fields.len()),
                });
            }
            let mut values = [0.0f64; 6];
            for (i, field) in fields.iter().enumerate() {
                values[i] = field.trim().parse().map_err(|_| Error::MediumCsv {
                    row,
                    message: format!("cannot parse '{field}' as a number"),
                })?;
            }
            let [t0, t1, sigma, r, g, b] = values;
            if let Some(&prev_t1) = boundaries.last() {
                if t0 != prev_t1 {
                    let kind = if t0 > prev_t1 { "gap" } else { "overlap" };
                    return Err(Error::MediumCsv {
                        row,
                        message: format!(
                            "{kind} between rows {} and {}: previous t1 = {prev_t1}, t0 = {t0}",
                            row - 1,
                            row
                        ),
                    });
                }
            } else {
                boundaries.push(t0);
            }
            boundaries.push(t1);
            sigmas.push(sigma);
            colors.push(Rgb::new(r, g, b));
        }
        if sigmas.is_empty() {
            return Err(Error::MediumCsv { row: 1, message: "no segment rows".into() });
        }
        Self::new(boundaries, sigmas, colors)
    }

    pub fn read_csv_file<P: AsRef<Path>>(path: P) -> Result<Self> {
        Self::from_csv(std::fs::File::open(path)?)
    }

    /// Writes the CSV medium format. Floats use the shortest decimal form
    /// that round-trips, so `from_csv(to_csv(m)) == m` exactly.
    pub fn to_csv<W: Write>(&self, mut writer: W) -> std::io::Result<()> {
        writeln!(writer, "t0,t1,sigma,r,g,b")?;
        for n in 0..self.segments() {
            let c = self.colors[n];
            writeln!(
                writer,
                "{},{},{},{},{},{}",
                self.boundaries[n],
                self.boundaries[n + 1],
                self.sigmas[n],
                c.r,
                c.g,
                c.b
            )?;
        }
        Ok(())
    }

    pub fn write_csv_file<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut file = std::fs::File::create(path)?;
        self.to_csv(&mut file)?;
        Ok(())
    }
}
