use num_traits::ToPrimitive;

use super::{FormatSpec, PositBits};
use crate::exact::{Dyadic, ExactValue};

/// Field breakdown of a finite nonzero posit, read straight from the pattern
/// (negative posits are not negated first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositFields {
    pub sign: bool,
    /// Length `k` of the run of identical regime bits.
    pub run_length: u32,
    /// Regime bits actually present, including the terminator when there is one.
    pub regime_len: u32,
    /// `-k` for a run of zeros, `k - 1` for a run of ones.
    pub regime: i32,
    /// Exponent value; bits cut off past the end of the posit read as zero.
    pub exponent: u32,
    pub exponent_len: u32,
    /// Fraction field `F`; the fraction is `F / 2^fraction_len`.
    pub fraction: u32,
    pub fraction_len: u32,
    pub value: ExactValue,
}

impl PositFields {
    /// Significand width including the hidden bit.
    pub fn precision_bits(&self) -> u32 {
        self.fraction_len + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodedPosit {
    Zero,
    NaR,
    Finite(PositFields),
}

impl DecodedPosit {
    pub fn value(&self) -> ExactValue {
        match self {
            DecodedPosit::Zero => ExactValue::Zero,
            DecodedPosit::NaR => ExactValue::NaR,
            DecodedPosit::Finite(f) => f.value.clone(),
        }
    }
}

/// Decodes a pattern with the sign-aware closed form
/// `((1 - 3s) + f) * 2^((1 - 2s) * (2^es * r + e + s))`.
pub fn decode(p: PositBits) -> DecodedPosit {
    let spec = p.spec();
    let (n, es) = (spec.n(), spec.es());
    let bits = p.bits();
    if bits == 0 {
        return DecodedPosit::Zero;
    }
    if bits == spec.nar_pattern() {
        return DecodedPosit::NaR;
    }

    let sign = bits >> (n - 1) != 0;
    let body_len = n - 1;
    let body = bits & (spec.mask() >> 1);
    let lead = (body >> (body_len - 1)) & 1;

    // Left-justify the body so the run can be counted with leading_zeros.
    let justified = body << (32 - body_len);
    let run = if lead == 1 {
        justified.leading_ones()
    } else {
        justified.leading_zeros()
    };
    let run_length = run.min(body_len);
    let regime_len = (run_length + 1).min(body_len);
    let regime = if lead == 1 {
        run_length as i32 - 1
    } else {
        -(run_length as i32)
    };

    let remaining = body_len - regime_len;
    let exponent_len = es.min(remaining);
    let fraction_len = remaining - exponent_len;
    let exp_field = (body >> fraction_len) & low_mask(exponent_len);
    let exponent = exp_field << (es - exponent_len);
    let fraction = body & low_mask(fraction_len);

    let scale = ((regime as i64) << es) + exponent as i64;
    let value = if sign {
        // (-2 + f) * 2^-(scale + 1)
        let sig = (2u64 << fraction_len) - fraction as u64;
        ExactValue::from_u64_parts(true, sig, -(scale + 1) - fraction_len as i64)
    } else {
        let sig = (1u64 << fraction_len) + fraction as u64;
        ExactValue::from_u64_parts(false, sig, scale - fraction_len as i64)
    };

    DecodedPosit::Finite(PositFields {
        sign,
        run_length,
        regime_len,
        regime,
        exponent,
        exponent_len,
        fraction,
        fraction_len,
        value,
    })
}

fn low_mask(len: u32) -> u32 {
    if len >= 32 {
        u32::MAX
    } else {
        (1u32 << len) - 1
    }
}

/// Rounds an exact value to the nearest posit: ties to the even pattern,
/// saturating at ±maxpos and ±minpos (a nonzero value never becomes zero).
pub fn encode(x: &ExactValue, spec: FormatSpec) -> PositBits {
    match x {
        ExactValue::Zero => spec.zero(),
        ExactValue::NaR => spec.nar(),
        ExactValue::Finite(d) => {
            let magnitude = encode_magnitude(d, spec);
            let pattern = if d.is_negative() {
                magnitude.wrapping_neg() & spec.mask()
            } else {
                magnitude
            };
            PositBits::from_bits_truncate(pattern as u64, spec)
        }
    }
}

/// Positive pattern for `|d|`.
fn encode_magnitude(d: &Dyadic, spec: FormatSpec) -> u32 {
    let (n, es) = (spec.n(), spec.es());
    let max_scale = spec.max_scale();
    let scale = d.scale();
    if scale >= max_scale {
        return spec.maxpos().bits();
    }
    if scale < -max_scale {
        return spec.minpos().bits();
    }

    let regime = scale.div_euclid(1 << es);
    let exponent = scale.rem_euclid(1 << es) as u128;
    let (regime_bits, regime_len): (u128, u32) = if regime >= 0 {
        (((1u128 << (regime + 1) as u32) - 1) << 1, regime as u32 + 2)
    } else {
        (1, (-regime) as u32 + 1)
    };

    // Fraction bits below the leading one; n + 1 of them always cover the
    // guard position. The significand is odd, so anything dropped is sticky.
    let frac_len = d.precision() - 1;
    let take = frac_len.min(n as u64 + 1);
    let mut sticky = frac_len > take;
    let frac_top = (d.significand() >> (frac_len - take) as usize)
        .to_u128()
        .expect("at most n + 2 bits")
        & ((1u128 << take) - 1);

    let mut string = (regime_bits << es) | exponent;
    string = (string << take) | frac_top;
    let len = regime_len + es + take as u32;

    // Keep n bits: the n - 1 body bits plus one guard bit.
    let kept = if len > n {
        let drop = len - n;
        sticky |= string & ((1u128 << drop) - 1) != 0;
        string >> drop
    } else {
        string << (n - len)
    };
    let body = (kept >> 1) as u32;
    let guard = kept & 1 == 1;
    if guard && (sticky || body & 1 == 1) {
        body + 1
    } else {
        body
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p16(bits: u64) -> PositBits {
        PositBits::new(bits, FormatSpec::P16E2).unwrap()
    }

    fn fields(p: PositBits) -> PositFields {
        match decode(p) {
            DecodedPosit::Finite(f) => f,
            other => panic!("expected finite, got {other:?}"),
        }
    }

    #[test]
    fn special_patterns() {
        assert_eq!(decode(p16(0x0000)), DecodedPosit::Zero);
        assert_eq!(decode(p16(0x8000)), DecodedPosit::NaR);
    }

    #[test]
    fn plus_and_minus_one() {
        let f = fields(p16(0x4000));
        assert_eq!((f.sign, f.regime, f.exponent, f.fraction), (false, 0, 0, 0));
        assert_eq!(f.value, ExactValue::one());

        let f = fields(p16(0xC000));
        assert_eq!((f.sign, f.regime, f.exponent, f.fraction), (true, 0, 0, 0));
        assert_eq!(f.value, ExactValue::one().neg());
    }

    #[test]
    fn maxpos_is_two_to_56() {
        let f = fields(p16(0x7FFF));
        assert_eq!(f.value, ExactValue::pow2(56));
        assert_eq!(f.regime, 14);
        assert_eq!(f.exponent_len, 0);
        assert_eq!(fields(p16(0x0001)).value, ExactValue::pow2(-56));
        assert_eq!(fields(p16(0x8001)).value, ExactValue::pow2(56).neg());
        assert_eq!(fields(p16(0xFFFF)).value, ExactValue::pow2(-56).neg());
    }

    #[test]
    fn truncated_exponent_reads_zero() {
        // 0x0002: thirteen zeros, terminator, one exponent bit (0) -> 2^-52.
        let f = fields(p16(0x0002));
        assert_eq!(f.exponent_len, 1);
        assert_eq!(f.value, ExactValue::pow2(-52));
        // 0x0003: exponent MSB set -> e = 2 -> 2^-50.
        assert_eq!(fields(p16(0x0003)).value, ExactValue::pow2(-50));
    }

    #[test]
    fn es3_scale() {
        let spec = FormatSpec::P16E3;
        assert_eq!(spec.maxpos().value(), ExactValue::pow2(112));
        // 0x5000: regime "10" (r=0), exponent "100" (e=4) -> 16.
        assert_eq!(
            PositBits::new(0x5000, spec).unwrap().value(),
            ExactValue::pow2(4)
        );
    }

    #[test]
    fn encode_examples() {
        let s = FormatSpec::P16E2;
        assert_eq!(encode(&ExactValue::one(), s).bits(), 0x4000);
        assert_eq!(encode(&ExactValue::pow2(60), s).bits(), 0x7FFF);
        assert_eq!(encode(&ExactValue::pow2(-100), s).bits(), 0x0001);
        assert_eq!(encode(&ExactValue::pow2(-100).neg(), s).bits(), 0xFFFF);
        assert_eq!(encode(&ExactValue::NaR, s).bits(), 0x8000);
        assert_eq!(encode(&ExactValue::Zero, s).bits(), 0x0000);
    }

    #[test]
    fn encode_ties_in_exponent_region() {
        let s = FormatSpec::P16E2;
        // 2^-54 sits exactly between 0x0001 (2^-56) and 0x0002 (2^-52) on the
        // bit string; the tie goes to the even pattern.
        assert_eq!(encode(&ExactValue::pow2(-54), s).bits(), 0x0002);
        // Just below the tie rounds down.
        let below = ExactValue::pow2(-55).add(&ExactValue::pow2(-56));
        assert_eq!(encode(&below, s).bits(), 0x0001);
    }

    #[test]
    fn round_trip_exhaustive_small_formats() {
        for n in 3..=12 {
            for es in 0..=4 {
                let spec = FormatSpec::new(n, es).unwrap();
                for p in spec.patterns() {
                    assert_eq!(encode(&p.value(), spec), p, "{spec} {}", p.to_hex());
                }
            }
        }
    }

    #[test]
    fn fraction_width_profile() {
        let max_prec = |spec: FormatSpec| {
            spec.patterns()
                .filter_map(|p| match decode(p) {
                    DecodedPosit::Finite(f) => Some(f.precision_bits()),
                    _ => None,
                })
                .max()
                .unwrap()
        };
        assert_eq!(max_prec(FormatSpec::P16E2), 12);
        assert_eq!(max_prec(FormatSpec::P8E2), 4);
        assert_eq!(FormatSpec::P16E2.max_fraction_bits(), 11);
    }
}
