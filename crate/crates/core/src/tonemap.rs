//! Global exposure/gamma tone-mapping operator.
//!
//! The forward operator produces the 8-bit base-layer image; the inverse
//! lifts a decoded base layer back into the integer HDR domain so the
//! residual subtraction is well-typed. Both directions are pure integer
//! lookups once the per-parameter tables are built, and rounding is
//! round-half-up throughout so outputs are reproducible.

use crate::error::Error;
use crate::pixels::{FloatMapping, HdrImage, LdrImage};
use crate::Result;

/// Parameters of the global tone-mapping operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TmoParams {
    /// Linear-domain scale applied before the gamma curve.
    pub exposure: f32,
    /// Exponent of the transfer curve.
    pub gamma: f32,
    /// HDR-domain sample value that maps to LDR 255 at exposure 1.
    pub white_point: u16,
}

impl TmoParams {
    pub fn validate(&self, depth: u8) -> Result<()> {
        if !(self.exposure.is_finite() && self.exposure > 0.0) {
            return Err(Error::param("exposure must be positive"));
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::param("gamma must be positive"));
        }
        if self.white_point == 0 || (self.white_point as u32) >= (1u32 << depth) {
            return Err(Error::param(format!(
                "white_point must be in 1..2^{}",
                depth
            )));
        }
        Ok(())
    }

    /// Neutral display-ish defaults for an image: white point at the
    /// largest occupied sample, 1/2.2 gamma, unit exposure.
    pub fn defaults_for(img: &HdrImage) -> TmoParams {
        TmoParams {
            exposure: 1.0,
            gamma: 1.0 / 2.2,
            white_point: img.max_sample().max(1),
        }
    }
}

fn round_half_up(v: f64) -> f64 {
    (v + 0.5).floor()
}

/// LDR value for one HDR sample.
fn forward_sample(x: u16, params: &TmoParams, mapping: FloatMapping, wp_linear: f64) -> u8 {
    let lin = mapping.tmo_linear(x);
    let t = params.exposure as f64 * lin / wp_linear;
    if t <= 0.0 {
        return 0;
    }
    let y = 255.0 * t.powf(params.gamma as f64);
    round_half_up(y).clamp(0.0, 255.0) as u8
}

/// Full forward table over the integer HDR domain.
fn forward_table(params: &TmoParams, mapping: FloatMapping, depth: u8) -> Vec<u8> {
    let wp_linear = mapping.tmo_linear(params.white_point);
    (0..1u32 << depth)
        .map(|x| forward_sample(x as u16, params, mapping, wp_linear))
        .collect()
}

/// Tone-maps an HDR image to the 8-bit base layer.
pub fn forward_tmo(img: &HdrImage, params: &TmoParams) -> Result<LdrImage> {
    params.validate(img.depth)?;
    let table = forward_table(params, img.mapping, img.depth);
    let planes = [0, 1, 2].map(|p: usize| {
        img.planes[p]
            .iter()
            .map(|&x| table[x as usize])
            .collect::<Vec<u8>>()
    });
    LdrImage::new(img.width, img.height, planes)
}

/// Per-level inverse table for the forward operator.
///
/// Each LDR level maps to the formula inverse, clamped into that level's
/// preimage bucket whenever the bucket is non-empty. The clamp makes
/// `forward(inverse(forward(x))) == forward(x)` hold exactly.
fn inverse_table(params: &TmoParams, mapping: FloatMapping, depth: u8) -> Vec<u16> {
    let forward = forward_table(params, mapping, depth);
    let max_sample = (1u32 << depth) - 1;
    let wp_linear = mapping.tmo_linear(params.white_point);

    // Preimage buckets: forward is monotone, so each level's preimage is
    // a contiguous run (possibly empty).
    let mut lo = [u32::MAX; 256];
    let mut hi = [0u32; 256];
    for (x, &l) in forward.iter().enumerate() {
        let l = l as usize;
        if lo[l] == u32::MAX {
            lo[l] = x as u32;
        }
        hi[l] = x as u32;
    }

    (0..256usize)
        .map(|l| {
            let frac = l as f64 / 255.0;
            let lin = wp_linear * frac.powf(1.0 / params.gamma as f64) / params.exposure as f64;
            let candidate = match mapping {
                FloatMapping::HalfBits => crate::pixels::f32_to_half_bits(lin as f32) as u32,
                FloatMapping::Linear { .. } => {
                    round_half_up(lin).clamp(0.0, max_sample as f64) as u32
                }
            };
            let x = if lo[l] != u32::MAX {
                candidate.clamp(lo[l], hi[l])
            } else {
                candidate.min(max_sample)
            };
            x as u16
        })
        .collect()
}

/// Lifts a decoded base layer back into the integer HDR domain.
pub fn inverse_tmo(
    ldr: &LdrImage,
    params: &TmoParams,
    depth: u8,
    mapping: FloatMapping,
) -> Result<HdrImage> {
    params.validate(depth)?;
    let table = inverse_table(params, mapping, depth);
    let planes = [0, 1, 2].map(|p: usize| {
        ldr.planes[p]
            .iter()
            .map(|&l| table[l as usize])
            .collect::<Vec<u16>>()
    });
    HdrImage::new(ldr.width, ldr.height, depth, mapping, planes)
}
