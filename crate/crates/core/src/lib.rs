//! Two-layer near-lossless HDR image codec.
//!
//! The encoder tone-maps an HDR image to an 8-bit base layer, compresses it
//! as an ordinary baseline JPEG, and carries the HDR residual in APP11
//! extension segments. Any standard JPEG decoder sees a plain LDR image;
//! the full decoder reconstructs every HDR sample within a user-chosen
//! error bound.
//!
//! Modules follow the codec stages:
//!
//! * [`pixels`] — HDR raster model and file I/O (PFM, Radiance RGBE, PNM).
//! * [`tonemap`] — global exposure/gamma operator and its integer inverse.
//! * [`jpeg`] — baseline JPEG encoder and decoder for the base layer.
//! * [`zsq`] — zero-skip quantization of sparse sample histograms.
//! * [`residual`] — residual computation, reversible color transform, and
//!   the lossless index-plane codec.
//! * [`container`] — APP11 multiplexing of base stream, tables, payloads.
//! * [`codec`] — end-to-end encode/decode pipeline, metrics, and sweeps.

pub mod codec;
pub mod container;
pub mod error;
pub mod jpeg;
pub mod pixels;
pub mod residual;
pub mod tonemap;
pub mod zsq;

pub use codec::{decode_file, encode_file, sweep, EncodeOptions, RdPoint};
pub use error::Error;
pub use pixels::{FloatMapping, HdrImage, LdrImage};
pub use tonemap::TmoParams;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
