//! Small parsing and printing helpers for the CLI surface.

use std::collections::BTreeMap;

use volren::Rgb;

/// Formats a float rounded to 12 significant digits, printed as the
/// shortest decimal that round-trips the rounded value. This keeps stdout
/// stable across platforms whose libm differs in the last ulp while still
/// showing values like `0.5` exactly.
pub fn fmt_sig(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 || x.abs() < 1e-100 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(11 - magnitude);
    let rounded = (x * scale).round() / scale;
    format!("{rounded}")
}

pub fn parse_rgb(text: &str) -> Result<Rgb, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected R,G,B, got '{text}'"));
    }
    let mut values = [0.0f64; 3];
    for (i, part) in parts.iter().enumerate() {
        values[i] = part
            .trim()
            .parse()
            .map_err(|_| format!("cannot parse '{part}' as a number"))?;
    }
    Ok(Rgb::new(values[0], values[1], values[2]))
}

pub fn parse_unit_rgb(text: &str) -> Result<Rgb, String> {
    let color = parse_rgb(text)?;
    if !color.in_unit_range() {
        return Err(format!("color '{text}' has components outside [0,1]"));
    }
    Ok(color)
}

/// Parses `k=v,k=v` scene parameters into a map.
pub fn parse_params(text: Option<&str>) -> Result<BTreeMap<String, f64>, String> {
    let mut map = BTreeMap::new();
    let Some(text) = text else { return Ok(map) };
    for pair in text.split(',').filter(|p| !p.trim().is_empty()) {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got '{pair}'"))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| format!("cannot parse '{value}' as a number in '{pair}'"))?;
        if map.insert(key.trim().to_string(), value).is_some() {
            return Err(format!("duplicate parameter '{}'", key.trim()));
        }
    }
    Ok(map)
}

/// Parses `WxH` into a positive resolution.
pub fn parse_resolution(text: &str) -> Result<(usize, usize), String> {
    let (w, h) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, got '{text}'"))?;
    let width: usize = w.trim().parse().map_err(|_| format!("bad width '{w}'"))?;
    let height: usize = h.trim().parse().map_err(|_| format!("bad height '{h}'"))?;
    if width == 0 || height == 0 {
        return Err("resolution must be positive".into());
    }
    Ok((width, height))
}

/// Parses a comma-separated list of segment counts.
pub fn parse_counts(text: &str) -> Result<Vec<usize>, String> {
    let mut counts = Vec::new();
    for part in text.split(',') {
        let n: usize = part
            .trim()
            .parse()
            .map_err(|_| format!("cannot parse '{part}' as a segment count"))?;
        counts.push(n);
    }
    if counts.is_empty() {
        return Err("empty segment count list".into());
    }
    Ok(counts)
}
