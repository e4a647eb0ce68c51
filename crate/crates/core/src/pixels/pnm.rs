//! Binary PGM/PPM with 16-bit samples.
//!
//! Only maxval 256..=65535 is accepted: 8-bit files are LDR by
//! definition and out of the HDR domain. The stored maxval is always
//! `2^depth - 1`, which makes the store/load round trip the identity on
//! depth as well as samples.

use crate::error::Error;
use crate::pixels::{FloatMapping, HdrImage};
use crate::Result;

fn next_token(data: &[u8], pos: &mut usize) -> Result<u32> {
    loop {
        while *pos < data.len() && data[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < data.len() && data[*pos] == b'#' {
            while *pos < data.len() && data[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < data.len() && data[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::format("truncated PNM header"));
    }
    let tok = std::str::from_utf8(&data[start..*pos]).unwrap();
    tok.parse().map_err(|_| Error::format("bad PNM number"))
}

pub fn decode(data: &[u8], mapping: FloatMapping) -> Result<HdrImage> {
    let channels = match &data[..2] {
        b"P5" => 1usize,
        b"P6" => 3,
        _ => return Err(Error::format("not a binary PNM file")),
    };
    let mut pos = 2;
    let width = next_token(data, &mut pos)?;
    let height = next_token(data, &mut pos)?;
    let maxval = next_token(data, &mut pos)?;
    if maxval <= 255 {
        return Err(Error::format(
            "8-bit PNM input is LDR; HDR inputs need maxval > 255",
        ));
    }
    if maxval > 65535 {
        return Err(Error::format("PNM maxval exceeds 65535"));
    }
    // Exactly one whitespace byte separates the header from the payload.
    if pos >= data.len() || !data[pos].is_ascii_whitespace() {
        return Err(Error::format("bad PNM header terminator"));
    }
    pos += 1;

    let depth = (32 - maxval.leading_zeros()) as u8; // smallest d with maxval < 2^d
    let n = width as usize * height as usize;
    if data.len() < pos + n * channels * 2 {
        return Err(Error::format("truncated PNM payload"));
    }

    let mut planes = [vec![0u16; n], vec![0u16; n], vec![0u16; n]];
    for i in 0..n {
        for c in 0..3 {
            let off = pos + (i * channels + (c % channels)) * 2;
            let v = u16::from_be_bytes([data[off], data[off + 1]]);
            if v as u32 > maxval {
                return Err(Error::format("PNM sample exceeds maxval"));
            }
            planes[c][i] = v;
        }
    }
    HdrImage::new(width, height, depth, mapping, planes)
}

pub fn encode(img: &HdrImage) -> Vec<u8> {
    let maxval = (1u32 << img.depth) - 1;
    let mut out = Vec::with_capacity(img.pixel_count() * 6 + 32);
    out.extend_from_slice(format!("P6\n{} {}\n{}\n", img.width, img.height, maxval).as_bytes());
    for i in 0..img.pixel_count() {
        for plane in &img.planes {
            out.extend_from_slice(&plane[i].to_be_bytes());
        }
    }
    out
}
