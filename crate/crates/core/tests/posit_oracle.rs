mod common;

use std::cmp::Ordering;

use common::{posit_apply, posit_oracle, posit_value, Op, BINARY_OPS, Q};
use num_traits::{Signed, Zero};
use positlab::posit::{decode, DecodedPosit};
use positlab::{ExactValue, FormatSpec, PositBits};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn exact_to_q(x: &ExactValue) -> Option<Q> {
    match x {
        ExactValue::NaR => None,
        ExactValue::Zero => Some(Q::zero()),
        ExactValue::Finite(d) => {
            let sig = num_bigint::BigInt::from(d.significand().clone());
            let v = Q::from_integer(sig) * common::pow2(d.exp2());
            Some(if d.is_negative() { -v } else { v })
        }
    }
}

#[test]
fn decode_matches_classical_decoder() {
    for spec in [
        FormatSpec::P8E2,
        FormatSpec::P16E2,
        FormatSpec::P16E3,
        FormatSpec::new(7, 0).unwrap(),
    ] {
        for p in spec.patterns() {
            let want = posit_value(p.bits() as u64, spec.n(), spec.es());
            assert_eq!(exact_to_q(&p.value()), want, "{spec} {}", p.to_hex());
        }
    }
}

#[test]
fn round_trip_all_p8_and_p16() {
    for spec in [FormatSpec::P8E2, FormatSpec::P16E2, FormatSpec::P16E3] {
        for p in spec.patterns() {
            assert_eq!(PositBits::from_exact(&p.value(), spec), p);
        }
    }
}

#[test]
fn signed_pattern_order_is_value_order() {
    for spec in [FormatSpec::P8E2, FormatSpec::P12E2, FormatSpec::P16E2] {
        let mut by_signed: Vec<PositBits> = spec.patterns().filter(|p| !p.is_nar()).collect();
        by_signed.sort_by_key(|p| p.signed());
        for w in by_signed.windows(2) {
            let (a, b) = (w[0].value(), w[1].value());
            assert_eq!(
                a.partial_cmp_value(&b),
                Some(Ordering::Less),
                "{spec} {} {}",
                w[0],
                w[1]
            );
        }
    }
}

#[test]
fn exhaustive_p8e2_matches_oracle() {
    let spec = FormatSpec::P8E2;
    for op in BINARY_OPS {
        let mismatches: usize = (0..256u64)
            .into_par_iter()
            .map(|a| {
                let a = PositBits::new(a, spec).unwrap();
                spec.patterns()
                    .filter(|&b| posit_apply(op, a, b).bits() as u64 != posit_oracle(op, a, b))
                    .count()
            })
            .sum();
        assert_eq!(mismatches, 0, "{op:?}");
    }
    for a in spec.patterns() {
        assert_eq!(
            a.sqrt().bits() as u64,
            posit_oracle(Op::Sqrt, a, a),
            "sqrt {}",
            a
        );
    }
}

#[test]
fn exhaustive_tiny_formats_match_oracle() {
    for n in 3..=6 {
        for es in 0..=4 {
            let spec = FormatSpec::new(n, es).unwrap();
            for a in spec.patterns() {
                for b in spec.patterns() {
                    for op in BINARY_OPS {
                        assert_eq!(
                            posit_apply(op, a, b).bits() as u64,
                            posit_oracle(op, a, b),
                            "{spec} {op:?} {a} {b}"
                        );
                    }
                }
                assert_eq!(
                    a.sqrt().bits() as u64,
                    posit_oracle(Op::Sqrt, a, a),
                    "{spec} sqrt {a}"
                );
            }
        }
    }
}

fn sampled_against_table(spec: FormatSpec, samples: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(u64, u64)> = (0..samples)
        .map(|_| {
            (
                rng.gen_range(0..=spec.mask() as u64),
                rng.gen_range(0..=spec.mask() as u64),
            )
        })
        .collect();
    for op in [Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Sqrt] {
        let bad: Vec<_> = pairs
            .par_iter()
            .filter_map(|&(a, b)| {
                let (a, b) = (
                    PositBits::new(a, spec).unwrap(),
                    PositBits::new(b, spec).unwrap(),
                );
                let got = posit_apply(op, a, b).bits() as u64;
                let want = posit_oracle(op, a, b);
                (got != want).then_some((a.to_hex(), b.to_hex(), got, want))
            })
            .collect();
        assert!(
            bad.is_empty(),
            "{spec} {op:?}: {:?}",
            &bad[..bad.len().min(5)]
        );
    }
}

#[test]
fn sampled_p16e2_matches_oracle() {
    sampled_against_table(FormatSpec::P16E2, 20_000, 7);
}

#[test]
fn sampled_p16e3_and_p10e2_match_oracle() {
    sampled_against_table(FormatSpec::P16E3, 10_000, 8);
    sampled_against_table(FormatSpec::P10E2, 10_000, 9);
    sampled_against_table(FormatSpec::new(12, 1).unwrap(), 10_000, 10);
}

/// Checks that `result` is the correct rounding of `x` by bracketing `|x|`
/// between the `(n+1)`-bit midpoints on either side of `result`.
fn is_correct_rounding(x: &Q, result: PositBits) -> bool {
    let spec = result.spec();
    let (n, es) = (spec.n(), spec.es());
    if x.is_zero() {
        return result.is_zero();
    }
    if result.is_zero() || result.is_nar() || result.is_negative() != x.is_negative() {
        return false;
    }
    let p = result.absval().bits() as u64;
    let mag = x.abs();
    let ext = n + 1;
    let lower = posit_value(2 * p - 1, ext, es).unwrap();
    let lower_ok = p == 1
        || match mag.cmp(&lower) {
            Ordering::Greater => true,
            Ordering::Equal => p % 2 == 0,
            Ordering::Less => false,
        };
    let upper_ok = p == spec.maxpos().bits() as u64 || {
        let upper = posit_value(2 * p + 1, ext, es).unwrap();
        match mag.cmp(&upper) {
            Ordering::Less => true,
            Ordering::Equal => p % 2 == 0,
            Ordering::Greater => false,
        }
    };
    lower_ok && upper_ok
}

#[test]
fn wide_formats_bracket_oracle() {
    for spec in [
        FormatSpec::P24E2,
        FormatSpec::P32E2,
        FormatSpec::new(32, 4).unwrap(),
    ] {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.n() as u64 * 31 + spec.es() as u64);
        let (n, es) = (spec.n(), spec.es());
        for _ in 0..4_000 {
            let a = PositBits::new(rng.gen_range(0..=spec.mask() as u64), spec).unwrap();
            let b = PositBits::new(rng.gen_range(0..=spec.mask() as u64), spec).unwrap();
            let (Some(x), Some(y)) = (
                posit_value(a.bits() as u64, n, es),
                posit_value(b.bits() as u64, n, es),
            ) else {
                continue;
            };
            assert!(is_correct_rounding(&(&x + &y), a + b), "{spec} add {a} {b}");
            assert!(is_correct_rounding(&(&x - &y), a - b), "{spec} sub {a} {b}");
            assert!(is_correct_rounding(&(&x * &y), a * b), "{spec} mul {a} {b}");
            if !y.is_zero() {
                assert!(is_correct_rounding(&(&x / &y), a / b), "{spec} div {a} {b}");
            }
            if x.is_positive() {
                // sqrt: bracket the square of the result's midpoints instead.
                let r = a.sqrt();
                let p = r.bits() as u64;
                let ext = n + 1;
                let lo = posit_value(2 * p - 1, ext, es).unwrap();
                assert!(p == 1 || x >= &lo * &lo, "{spec} sqrt {a}");
                if p != spec.maxpos().bits() as u64 {
                    let hi = posit_value(2 * p + 1, ext, es).unwrap();
                    assert!(x <= &hi * &hi, "{spec} sqrt {a}");
                }
            }
        }
    }
}

#[test]
fn encode_is_monotone() {
    let spec = FormatSpec::P16E2;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut xs: Vec<f64> = (0..20_000)
        .map(|_| {
            let m: f64 = rng.gen_range(-1.0..1.0);
            m * 2f64.powi(rng.gen_range(-70..70))
        })
        .collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let encoded: Vec<i32> = xs
        .iter()
        .map(|&x| PositBits::from_f64(x, spec).signed())
        .collect();
    assert!(encoded.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn fields_follow_regime_rule() {
    // Spot-check the field breakdown against the regime definition.
    let spec = FormatSpec::P16E2;
    let cases = [
        (0x4000u64, 1u32, 0i32),
        (0x6000, 2, 1),
        (0x7000, 3, 2),
        (0x2000, 1, -1),
        (0x1000, 2, -2),
        (0x7FFF, 15, 14),
        (0x0001, 14, -14),
    ];
    for (bits, k, r) in cases {
        let DecodedPosit::Finite(f) = decode(PositBits::new(bits, spec).unwrap()) else {
            panic!()
        };
        assert_eq!((f.run_length, f.regime), (k, r), "{bits:#x}");
    }
}
