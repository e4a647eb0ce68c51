//! IEEE 754 binary16 conversions used by the half-bits sample mapping.
//!
//! The mapping treats the 16-bit pattern of a non-negative half as the
//! integer sample value. Bit patterns are monotone in the represented
//! value over the finite non-negative range, which is what makes the
//! mapping usable as an integer HDR domain.

/// Largest finite half value.
pub const MAX_HALF: f32 = 65504.0;
/// Bit pattern of [`MAX_HALF`].
pub const MAX_HALF_BITS: u16 = 0x7BFF;

/// Converts a finite `f32` to half bits, round-to-nearest-even.
///
/// Negative inputs clamp to 0 and values above the finite half range
/// clamp to [`MAX_HALF_BITS`]. The caller screens out NaN/inf.
pub fn f32_to_half_bits(v: f32) -> u16 {
    debug_assert!(v.is_finite());
    if v <= 0.0 {
        return 0;
    }
    if v >= MAX_HALF {
        return MAX_HALF_BITS;
    }
    let bits = v.to_bits();
    let exp = ((bits >> 23) & 0xFF) as i32 - 127;
    let mantissa = bits & 0x7F_FFFF;

    if exp < -24 {
        // Below half of the smallest subnormal: rounds to zero unless the
        // value is exactly half of it, which ties to even (zero).
        if exp == -25 && mantissa != 0 {
            return 1;
        }
        return 0;
    }
    if exp < -14 {
        // Subnormal half: significand gets shifted right, then rounded.
        let shift = (-14 - exp) as u32; // 1..=10 extra shift
        let significand = 0x80_0000 | mantissa; // implicit leading 1
        let total_shift = 13 + shift;
        let kept = significand >> total_shift;
        let rem = significand & ((1 << total_shift) - 1);
        let halfway = 1 << (total_shift - 1);
        let round_up = rem > halfway || (rem == halfway && (kept & 1) == 1);
        return (kept + round_up as u32) as u16;
    }
    // Normal range: exp in [-14, 15].
    let half_exp = (exp + 15) as u32;
    let kept = mantissa >> 13;
    let rem = mantissa & 0x1FFF;
    let round_up = rem > 0x1000 || (rem == 0x1000 && (kept & 1) == 1);
    let mut out = (half_exp << 10) | kept;
    if round_up {
        out += 1; // may carry into the exponent, which is still correct
    }
    out.min(MAX_HALF_BITS as u32) as u16
}

/// Converts half bits to `f32`.
///
/// Patterns at or above the inf/NaN boundary (`>= 0x7C00`) and negative
/// patterns are treated as the nearest finite non-negative value so the
/// mapping stays total and monotone on `u16`.
pub fn half_bits_to_f32(bits: u16) -> f32 {
    if bits >= 0x8000 {
        return 0.0;
    }
    if bits >= 0x7C00 {
        return MAX_HALF;
    }
    let exp = (bits >> 10) & 0x1F;
    let mantissa = (bits & 0x3FF) as u32;
    if exp == 0 {
        // Subnormal: mantissa * 2^-24
        return mantissa as f32 * f32::from_bits(0x3380_0000); // 2^-24
    }
    let f32_exp = exp as u32 - 15 + 127;
    f32::from_bits((f32_exp << 23) | (mantissa << 13))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent reference path: build the value from its definition
    // (sign * 2^e * 1.m) in f64 and compare.
    fn reference_half_value(bits: u16) -> f64 {
        let exp = (bits >> 10) & 0x1F;
        let mantissa = (bits & 0x3FF) as f64;
        if exp == 0 {
            mantissa * (-24f64).exp2()
        } else {
            (1.0 + mantissa / 1024.0) * ((exp as f64) - 15.0).exp2()
        }
    }

    #[test]
    fn one_maps_to_0x3c00() {
        assert_eq!(f32_to_half_bits(1.0), 0x3C00);
        assert_eq!(0x3C00, 15360);
        assert_eq!(half_bits_to_f32(0x3C00), 1.0);
    }

    #[test]
    fn decode_matches_reference_for_all_finite_patterns() {
        for bits in 0..0x7C00u16 {
            let got = half_bits_to_f32(bits) as f64;
            let want = reference_half_value(bits);
            assert_eq!(got, want, "bits {:#06x}", bits);
        }
    }

    #[test]
    fn roundtrip_is_identity_on_finite_patterns() {
        for bits in 0..=MAX_HALF_BITS {
            let v = half_bits_to_f32(bits);
            assert_eq!(f32_to_half_bits(v), bits, "bits {:#06x}", bits);
        }
    }

    #[test]
    fn rounds_to_nearest_even() {
        // 1.0 + 2^-11 sits exactly between 0x3C00 and 0x3C01: ties to even.
        let v = 1.0f32 + (-11f32).exp2();
        assert_eq!(f32_to_half_bits(v), 0x3C00);
        // Just above the midpoint rounds up.
        let v = 1.0f32 + (-11f32).exp2() + (-20f32).exp2();
        assert_eq!(f32_to_half_bits(v), 0x3C01);
    }

    #[test]
    fn clamps() {
        assert_eq!(f32_to_half_bits(-3.5), 0);
        assert_eq!(f32_to_half_bits(1e9), MAX_HALF_BITS);
        assert_eq!(half_bits_to_f32(0x7C00), MAX_HALF);
        assert_eq!(half_bits_to_f32(0xFFFF), 0.0);
    }

    #[test]
    fn monotone_on_finite_range() {
        let mut prev = half_bits_to_f32(0);
        for bits in 1..=MAX_HALF_BITS {
            let v = half_bits_to_f32(bits);
            assert!(v > prev, "bits {:#06x}", bits);
            prev = v;
        }
    }
}
