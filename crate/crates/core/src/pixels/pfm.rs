//! Portable FloatMap reader/writer.
//!
//! Header: `PF` (color) or `Pf` (gray), dimensions, then a scale factor
//! whose sign selects endianness. Scanlines run bottom-to-top.

use crate::error::Error;
use crate::pixels::{FloatMapping, HdrImage};
use crate::Result;

struct HeaderCursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> HeaderCursor<'a> {
    // PFM header tokens are separated by single whitespace characters
    // (commonly newlines).
    fn token(&mut self) -> Result<&'a str> {
        while self.pos < self.data.len() && self.data[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        while self.pos < self.data.len() && !self.data[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::format("truncated PFM header"));
        }
        let tok = std::str::from_utf8(&self.data[start..self.pos])
            .map_err(|_| Error::format("non-ASCII PFM header"))?;
        // Consume the single whitespace byte terminating the token.
        if self.pos < self.data.len() {
            self.pos += 1;
        }
        Ok(tok)
    }
}

pub fn decode(data: &[u8], mapping: FloatMapping) -> Result<HdrImage> {
    let mut cur = HeaderCursor { data, pos: 0 };
    let magic = cur.token()?;
    let channels = match magic {
        "PF" => 3,
        "Pf" => 1,
        _ => return Err(Error::format("not a PFM file")),
    };
    let width: u32 = cur
        .token()?
        .parse()
        .map_err(|_| Error::format("bad PFM width"))?;
    let height: u32 = cur
        .token()?
        .parse()
        .map_err(|_| Error::format("bad PFM height"))?;
    let scale: f32 = cur
        .token()?
        .parse()
        .map_err(|_| Error::format("bad PFM scale"))?;
    if width == 0 || height == 0 {
        return Err(Error::format("zero PFM dimension"));
    }
    let little_endian = scale < 0.0;

    let n = width as usize * height as usize;
    let payload = &data[cur.pos..];
    if payload.len() < n * channels * 4 {
        return Err(Error::format("truncated PFM payload"));
    }

    let mut planes = [
        vec![0u16; n],
        vec![0u16; n],
        vec![0u16; n],
    ];
    for row in 0..height as usize {
        // Bottom-to-top storage order.
        let src_row = height as usize - 1 - row;
        for col in 0..width as usize {
            let base = (src_row * width as usize + col) * channels * 4;
            let dst = row * width as usize + col;
            for c in 0..3 {
                let off = base + (c % channels) * 4;
                let raw: [u8; 4] = payload[off..off + 4].try_into().unwrap();
                let v = if little_endian {
                    f32::from_le_bytes(raw)
                } else {
                    f32::from_be_bytes(raw)
                };
                planes[c][dst] = mapping.to_sample(v)?;
            }
        }
    }
    HdrImage::new(width, height, 16, mapping, planes)
}

pub fn encode(img: &HdrImage) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(img.pixel_count() * 12 + 32);
    out.extend_from_slice(format!("PF\n{} {}\n-1.0\n", img.width, img.height).as_bytes());
    for row in (0..img.height as usize).rev() {
        for col in 0..img.width as usize {
            let i = row * img.width as usize + col;
            for plane in &img.planes {
                let v = img.mapping.to_float(plane[i]);
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
    }
    Ok(out)
}
