//! Binary PPM (P6) encoding.

use volren::Rgb;

/// Channel quantization: `floor(clamp(c, 0, 1) * 255 + 0.5)`.
pub fn channel_byte(c: f64) -> u8 {
    (c.clamp(0.0, 1.0) * 255.0 + 0.5).floor() as u8
}

/// Encodes pixels (row-major, top row first) as a P6 PPM with maxval 255
/// and no comments. The byte stream is fully determined by the inputs.
pub fn encode(width: usize, height: usize, pixels: &[Rgb]) -> Vec<u8> {
    assert_eq!(pixels.len(), width * height);
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.reserve(pixels.len() * 3);
    for p in pixels {
        out.push(channel_byte(p.r));
        out.push(channel_byte(p.g));
        out.push(channel_byte(p.b));
    }
    out
}
