//! Radiance RGBE (.hdr) reader/writer.
//!
//! Shared-exponent pixels decode as `m * 2^(e - 136)`. Both flat and
//! adaptive-RLE scanlines are read; flat scanlines are written.

use crate::error::Error;
use crate::pixels::{FloatMapping, HdrImage};
use crate::Result;

pub fn decode(data: &[u8], mapping: FloatMapping) -> Result<HdrImage> {
    let mut pos = 0usize;

    let mut line = |pos: &mut usize| -> Result<String> {
        let start = *pos;
        while *pos < data.len() && data[*pos] != b'\n' {
            *pos += 1;
        }
        if *pos >= data.len() {
            return Err(Error::format("truncated RGBE header"));
        }
        let s = String::from_utf8_lossy(&data[start..*pos]).into_owned();
        *pos += 1;
        Ok(s)
    };

    let magic = line(&mut pos)?;
    if !magic.starts_with("#?") {
        return Err(Error::format("not a Radiance RGBE file"));
    }
    // Header lines until the blank separator; only FORMAT is meaningful.
    loop {
        let l = line(&mut pos)?;
        if l.is_empty() {
            break;
        }
        if let Some(fmt) = l.strip_prefix("FORMAT=") {
            if fmt.trim() != "32-bit_rle_rgbe" {
                return Err(Error::format(format!("unsupported RGBE format '{}'", fmt)));
            }
        }
    }
    let res = line(&mut pos)?;
    let parts: Vec<&str> = res.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != "-Y" || parts[2] != "+X" {
        return Err(Error::format(format!(
            "unsupported RGBE resolution line '{}'",
            res
        )));
    }
    let height: u32 = parts[1]
        .parse()
        .map_err(|_| Error::format("bad RGBE height"))?;
    let width: u32 = parts[3]
        .parse()
        .map_err(|_| Error::format("bad RGBE width"))?;
    if width == 0 || height == 0 {
        return Err(Error::format("zero RGBE dimension"));
    }

    let n = width as usize * height as usize;
    let mut planes = [vec![0u16; n], vec![0u16; n], vec![0u16; n]];
    let mut scanline = vec![0u8; width as usize * 4]; // interleaved r,g,b,e

    for row in 0..height as usize {
        read_scanline(data, &mut pos, width as usize, &mut scanline)?;
        for col in 0..width as usize {
            let e = scanline[col * 4 + 3];
            for c in 0..3 {
                let v = decode_value(scanline[col * 4 + c], e);
                planes[c][row * width as usize + col] = mapping.to_sample(v)?;
            }
        }
    }
    HdrImage::new(width, height, 16, mapping, planes)
}

fn decode_value(m: u8, e: u8) -> f32 {
    if e == 0 {
        0.0
    } else {
        m as f32 * ((e as i32 - 136) as f32).exp2()
    }
}

fn read_scanline(data: &[u8], pos: &mut usize, width: usize, out: &mut [u8]) -> Result<()> {
    if *pos + 4 > data.len() {
        return Err(Error::format("truncated RGBE scanline"));
    }
    let head = &data[*pos..*pos + 4];
    let rle_len = ((head[2] as usize) << 8) | head[3] as usize;
    if head[0] == 2 && head[1] == 2 && rle_len == width && width >= 8 {
        // Adaptive RLE: four separated component streams.
        *pos += 4;
        for c in 0..4 {
            let mut filled = 0usize;
            while filled < width {
                if *pos >= data.len() {
                    return Err(Error::format("truncated RGBE RLE stream"));
                }
                let count = data[*pos] as usize;
                *pos += 1;
                if count > 128 {
                    // Run of a repeated byte.
                    let run = count - 128;
                    if *pos >= data.len() || filled + run > width {
                        return Err(Error::format("bad RGBE RLE run"));
                    }
                    let v = data[*pos];
                    *pos += 1;
                    for i in 0..run {
                        out[(filled + i) * 4 + c] = v;
                    }
                    filled += run;
                } else {
                    if count == 0 || *pos + count > data.len() || filled + count > width {
                        return Err(Error::format("bad RGBE RLE literals"));
                    }
                    for i in 0..count {
                        out[(filled + i) * 4 + c] = data[*pos + i];
                    }
                    *pos += count;
                    filled += count;
                }
            }
        }
    } else {
        // Flat scanline of 4-byte pixels. Old-style run markers
        // (1,1,1,count) are not supported.
        if *pos + width * 4 > data.len() {
            return Err(Error::format("truncated RGBE scanline"));
        }
        out.copy_from_slice(&data[*pos..*pos + width * 4]);
        *pos += width * 4;
        if width >= 1 && out[0] == 1 && out[1] == 1 && out[2] == 1 {
            return Err(Error::format("old-style RGBE run encoding unsupported"));
        }
    }
    Ok(())
}

pub fn encode(img: &HdrImage) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(img.pixel_count() * 4 + 64);
    out.extend_from_slice(b"#?RADIANCE\nFORMAT=32-bit_rle_rgbe\n\n");
    out.extend_from_slice(format!("-Y {} +X {}\n", img.height, img.width).as_bytes());
    for i in 0..img.pixel_count() {
        let r = img.mapping.to_float(img.planes[0][i]);
        let g = img.mapping.to_float(img.planes[1][i]);
        let b = img.mapping.to_float(img.planes[2][i]);
        out.extend_from_slice(&encode_pixel(r, g, b));
    }
    Ok(out)
}

fn encode_pixel(r: f32, g: f32, b: f32) -> [u8; 4] {
    let max = r.max(g).max(b);
    if max < 1e-32 {
        return [0, 0, 0, 0];
    }
    // Exponent such that max ends up in [128, 256).
    let mut e = (max.log2().floor() as i32) + 1;
    let mut scale = ((8 - e) as f32).exp2();
    if (max * scale) >= 256.0 {
        e += 1;
        scale = ((8 - e) as f32).exp2();
    }
    let quant = |v: f32| -> u8 { ((v * scale).min(255.0)) as u8 };
    [quant(r), quant(g), quant(b), (e + 128) as u8]
}
