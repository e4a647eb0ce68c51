//! Image model, HDR file ingestion, and the float-to-integer sample
//! mapping the rest of the codec operates on.
//!
//! HDR samples are handled throughout as non-negative integers below
//! `2^depth`. Float inputs (PFM, Radiance RGBE) are mapped into that
//! domain by a [`FloatMapping`]; 16-bit PNM inputs are already integral.

pub mod half;
mod pfm;
mod pnm;
mod rgbe;

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::Error;
use crate::Result;

pub use half::{f32_to_half_bits, half_bits_to_f32};

/// How floating-point radiance values become integer samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FloatMapping {
    /// Reinterpret the value as its IEEE binary16 bit pattern (negatives
    /// clamp to zero). Monotone and injective on the finite half range,
    /// and it preserves the histogram sparseness of float data.
    HalfBits,
    /// Fixed-point: `sample = round(value * scale)`, clamped to 16 bits.
    Linear { scale: f32 },
}

impl Default for FloatMapping {
    fn default() -> Self {
        FloatMapping::HalfBits
    }
}

impl FloatMapping {
    /// Integer sample for a float radiance value.
    pub fn to_sample(self, v: f32) -> Result<u16> {
        if !v.is_finite() {
            return Err(Error::format("non-finite float sample"));
        }
        Ok(match self {
            FloatMapping::HalfBits => f32_to_half_bits(v),
            FloatMapping::Linear { scale } => {
                let scaled = (v as f64 * scale as f64 + 0.5).floor();
                scaled.clamp(0.0, 65535.0) as u16
            }
        })
    }

    /// Float radiance value for an integer sample.
    pub fn to_float(self, sample: u16) -> f32 {
        match self {
            FloatMapping::HalfBits => half_bits_to_f32(sample),
            FloatMapping::Linear { scale } => sample as f32 / scale,
        }
    }

    /// Linear-domain value used by the tone-mapping operator. For the
    /// fixed-point mapping this is the sample itself; the scale cancels
    /// out of the tone-map ratio.
    pub fn tmo_linear(self, sample: u16) -> f64 {
        match self {
            FloatMapping::HalfBits => half_bits_to_f32(sample) as f64,
            FloatMapping::Linear { .. } => sample as f64,
        }
    }
}

/// Integer-domain multi-plane HDR raster (R, G, B order).
#[derive(Debug, Clone, PartialEq)]
pub struct HdrImage {
    pub width: u32,
    pub height: u32,
    /// Bits per sample, 9..=16.
    pub depth: u8,
    /// Mapping that produced the integer samples; recorded in the
    /// container so decoding can restore float output.
    pub mapping: FloatMapping,
    pub planes: [Vec<u16>; 3],
}

impl HdrImage {
    pub fn new(
        width: u32,
        height: u32,
        depth: u8,
        mapping: FloatMapping,
        planes: [Vec<u16>; 3],
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::format("zero image dimension"));
        }
        if !(9..=16).contains(&depth) {
            return Err(Error::format(format!(
                "sample depth {} outside 9..=16 (8-bit inputs are LDR)",
                depth
            )));
        }
        let n = width as usize * height as usize;
        let limit = 1u32 << depth;
        for plane in &planes {
            if plane.len() != n {
                return Err(Error::format("plane dimension mismatch"));
            }
            if depth < 16 && plane.iter().any(|&s| (s as u32) >= limit) {
                return Err(Error::format(format!("sample exceeds 2^{}", depth)));
            }
        }
        Ok(HdrImage {
            width,
            height,
            depth,
            mapping,
            planes,
        })
    }

    pub fn pixel_count(&self) -> usize {
        self.width as usize * self.height as usize
    }

    /// Largest sample value over all planes.
    pub fn max_sample(&self) -> u16 {
        self.planes
            .iter()
            .flat_map(|p| p.iter().copied())
            .max()
            .unwrap_or(0)
    }
}

/// 8-bit three-plane raster (R, G, B order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LdrImage {
    pub width: u32,
    pub height: u32,
    pub planes: [Vec<u8>; 3],
}

impl LdrImage {
    pub fn new(width: u32, height: u32, planes: [Vec<u8>; 3]) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::format("zero image dimension"));
        }
        let n = width as usize * height as usize;
        if planes.iter().any(|p| p.len() != n) {
            return Err(Error::format("plane dimension mismatch"));
        }
        Ok(LdrImage {
            width,
            height,
            planes,
        })
    }

    pub fn pixel_count(&self) -> usize {
        self.width as usize * self.height as usize
    }
}

/// On-disk HDR formats this module understands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HdrFormat {
    Pfm,
    Rgbe,
    Pnm,
}

impl HdrFormat {
    /// Format implied by a file extension, for writing.
    pub fn from_extension(path: &Path) -> Result<Self> {
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .unwrap_or_default();
        match ext.as_str() {
            "pfm" => Ok(HdrFormat::Pfm),
            "hdr" | "rgbe" => Ok(HdrFormat::Rgbe),
            "pnm" | "ppm" | "pgm" => Ok(HdrFormat::Pnm),
            other => Err(Error::format(format!(
                "unsupported output extension '{}'",
                other
            ))),
        }
    }

    /// Format sniffed from leading magic bytes, for reading.
    fn from_magic(magic: &[u8]) -> Result<Self> {
        match magic {
            [b'P', b'F', ..] | [b'P', b'f', ..] => Ok(HdrFormat::Pfm),
            [b'#', b'?', ..] => Ok(HdrFormat::Rgbe),
            [b'P', b'5', ..] | [b'P', b'6', ..] => Ok(HdrFormat::Pnm),
            _ => Err(Error::format("unsupported image format")),
        }
    }
}

/// Loads an HDR image, converting float samples via `mapping`.
pub fn load_hdr(path: impl AsRef<Path>, mapping: FloatMapping) -> Result<HdrImage> {
    let mut reader = BufReader::new(File::open(path.as_ref())?);
    let mut data = Vec::new();
    reader.read_to_end(&mut data)?;
    load_hdr_bytes(&data, mapping)
}

/// [`load_hdr`] over an in-memory buffer.
pub fn load_hdr_bytes(data: &[u8], mapping: FloatMapping) -> Result<HdrImage> {
    if data.len() < 2 {
        return Err(Error::format("file too short"));
    }
    match HdrFormat::from_magic(&data[..2])? {
        HdrFormat::Pfm => pfm::decode(data, mapping),
        HdrFormat::Rgbe => rgbe::decode(data, mapping),
        HdrFormat::Pnm => pnm::decode(data, mapping),
    }
}

/// Stores an HDR image; the format comes from the file extension.
///
/// Integer formats round-trip bit-exactly; float formats go through the
/// image's mapping.
pub fn store_hdr(img: &HdrImage, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let format = HdrFormat::from_extension(path)?;
    let bytes = store_hdr_bytes(img, format)?;
    let mut writer = BufWriter::new(File::create(path)?);
    writer.write_all(&bytes)?;
    writer.flush()?;
    Ok(())
}

/// [`store_hdr`] into an in-memory buffer.
pub fn store_hdr_bytes(img: &HdrImage, format: HdrFormat) -> Result<Vec<u8>> {
    match format {
        HdrFormat::Pfm => pfm::encode(img),
        HdrFormat::Rgbe => rgbe::encode(img),
        HdrFormat::Pnm => Ok(pnm::encode(img)),
    }
}
