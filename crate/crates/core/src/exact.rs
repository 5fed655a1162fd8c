//! Arbitrary-precision signed dyadic rationals.
//!
//! [`ExactValue`] is the rounding-free intermediate shared by the posit and
//! minifloat modules: every arithmetic result is formed exactly here (or, for
//! division and square root, to a guarded precision with a sticky bit) and
//! then rounded exactly once by the target format's encoder.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

/// A nonzero finite value `(-1)^negative * significand * 2^exp2`.
///
/// The significand is always odd, so two equal values have identical fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    negative: bool,
    significand: BigUint,
    exp2: i64,
}

impl Dyadic {
    pub fn is_negative(&self) -> bool {
        self.negative
    }

    /// The odd integer significand.
    pub fn significand(&self) -> &BigUint {
        &self.significand
    }

    pub fn exp2(&self) -> i64 {
        self.exp2
    }

    /// Number of significant bits (bit length of the odd significand).
    pub fn precision(&self) -> u64 {
        self.significand.bits()
    }

    /// `floor(log2 |x|)`.
    pub fn scale(&self) -> i64 {
        self.exp2 + self.significand.bits() as i64 - 1
    }

    fn cmp_magnitude(&self, other: &Self) -> Ordering {
        self.scale().cmp(&other.scale()).then_with(|| {
            // Same scale: align to the smaller exponent and compare integers.
            let lo = self.exp2.min(other.exp2);
            let a = &self.significand << (self.exp2 - lo) as usize;
            let b = &other.significand << (other.exp2 - lo) as usize;
            a.cmp(&b)
        })
    }

    /// Rounds `|x| / 2^quantum` to an integer, ties to even.
    pub fn quantize(&self, quantum: i64) -> BigUint {
        let shift = quantum - self.exp2;
        if shift <= 0 {
            return &self.significand << (-shift) as usize;
        }
        let shift = shift as u64;
        if shift > self.significand.bits() {
            // Strictly below half a quantum.
            return BigUint::zero();
        }
        let kept = &self.significand >> shift as usize;
        // The significand is odd, so any dropped bits are nonzero.
        let half_bit = self.significand.bit(shift - 1);
        let below_half_nonzero =
            shift >= 2 && self.significand.trailing_zeros().unwrap_or(0) < shift - 1;
        if half_bit && (below_half_nonzero || kept.bit(0)) {
            kept + 1u32
        } else {
            kept
        }
    }
}

/// A signed binary real with exact arithmetic, plus posit's NaR.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExactValue {
    Zero,
    NaR,
    Finite(Dyadic),
}

impl ExactValue {
    /// Builds `(-1)^negative * significand * 2^exp2`, normalizing the significand.
    pub fn from_parts(negative: bool, significand: BigUint, exp2: i64) -> Self {
        if significand.is_zero() {
            return ExactValue::Zero;
        }
        let tz = significand.trailing_zeros().unwrap_or(0);
        ExactValue::Finite(Dyadic {
            negative,
            significand: significand >> tz as usize,
            exp2: exp2 + tz as i64,
        })
    }

    pub fn from_u64_parts(negative: bool, significand: u64, exp2: i64) -> Self {
        Self::from_parts(negative, BigUint::from(significand), exp2)
    }

    /// `2^exp2`.
    pub fn pow2(exp2: i64) -> Self {
        Self::from_parts(false, BigUint::one(), exp2)
    }

    pub fn one() -> Self {
        Self::pow2(0)
    }

    pub fn from_i128(v: i128) -> Self {
        Self::from_parts(v < 0, BigUint::from(v.unsigned_abs()), 0)
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        Self::from_parts(v.sign() == Sign::Minus, v.magnitude().clone(), 0)
    }

    /// Exact value of a binary64. NaN and infinities map to NaR; both zeros to Zero.
    pub fn from_f64(x: f64) -> Self {
        if !x.is_finite() {
            return ExactValue::NaR;
        }
        if x == 0.0 {
            return ExactValue::Zero;
        }
        let bits = x.to_bits();
        let negative = bits >> 63 != 0;
        let biased = ((bits >> 52) & 0x7FF) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (sig, exp) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), biased - 1075)
        };
        Self::from_u64_parts(negative, sig, exp)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExactValue::Zero)
    }

    pub fn is_nar(&self) -> bool {
        matches!(self, ExactValue::NaR)
    }

    pub fn as_dyadic(&self) -> Option<&Dyadic> {
        match self {
            ExactValue::Finite(d) => Some(d),
            _ => None,
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, ExactValue::Finite(d) if d.negative)
    }

    pub fn neg(&self) -> Self {
        match self {
            ExactValue::Finite(d) => ExactValue::Finite(Dyadic {
                negative: !d.negative,
                ..d.clone()
            }),
            other => other.clone(),
        }
    }

    pub fn abs(&self) -> Self {
        match self {
            ExactValue::Finite(d) => ExactValue::Finite(Dyadic {
                negative: false,
                ..d.clone()
            }),
            other => other.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (ExactValue::NaR, _) | (_, ExactValue::NaR) => ExactValue::NaR,
            (ExactValue::Zero, x) | (x, ExactValue::Zero) => x.clone(),
            (ExactValue::Finite(a), ExactValue::Finite(b)) => {
                let lo = a.exp2.min(b.exp2);
                let ma = &a.significand << (a.exp2 - lo) as usize;
                let mb = &b.significand << (b.exp2 - lo) as usize;
                if a.negative == b.negative {
                    Self::from_parts(a.negative, ma + mb, lo)
                } else {
                    match ma.cmp(&mb) {
                        Ordering::Equal => ExactValue::Zero,
                        Ordering::Greater => Self::from_parts(a.negative, ma - mb, lo),
                        Ordering::Less => Self::from_parts(b.negative, mb - ma, lo),
                    }
                }
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (ExactValue::NaR, _) | (_, ExactValue::NaR) => ExactValue::NaR,
            (ExactValue::Zero, _) | (_, ExactValue::Zero) => ExactValue::Zero,
            (ExactValue::Finite(a), ExactValue::Finite(b)) => ExactValue::Finite(Dyadic {
                negative: a.negative != b.negative,
                significand: &a.significand * &b.significand,
                exp2: a.exp2 + b.exp2,
            }),
        }
    }

    /// Multiplies by `2^k` exactly.
    pub fn mul_pow2(&self, k: i64) -> Self {
        match self {
            ExactValue::Finite(d) => ExactValue::Finite(Dyadic {
                exp2: d.exp2 + k,
                ..d.clone()
            }),
            other => other.clone(),
        }
    }

    /// Quotient carrying at least `min_bits` significant bits followed by a
    /// sticky bit. Rounding the result to fewer than `min_bits - 1` bits gives
    /// the same answer as rounding the true quotient. Division by zero is NaR.
    pub fn div_sticky(&self, other: &Self, min_bits: u64) -> Self {
        match (self, other) {
            (ExactValue::NaR, _) | (_, ExactValue::NaR) | (_, ExactValue::Zero) => ExactValue::NaR,
            (ExactValue::Zero, _) => ExactValue::Zero,
            (ExactValue::Finite(a), ExactValue::Finite(b)) => {
                let la = a.significand.bits() as i64;
                let lb = b.significand.bits() as i64;
                let k = (min_bits as i64 + lb - la + 1).max(0);
                let num = &a.significand << k as usize;
                let q = &num / &b.significand;
                let exact = (&q * &b.significand) == num;
                let sig = (q << 1usize) + if exact { 0u32 } else { 1u32 };
                Self::from_parts(a.negative != b.negative, sig, a.exp2 - b.exp2 - k - 1)
            }
        }
    }

    /// Square root with the same guard and sticky contract as [`Self::div_sticky`].
    /// Negative inputs give NaR.
    pub fn sqrt_sticky(&self, min_bits: u64) -> Self {
        match self {
            ExactValue::NaR => ExactValue::NaR,
            ExactValue::Zero => ExactValue::Zero,
            ExactValue::Finite(d) if d.negative => ExactValue::NaR,
            ExactValue::Finite(d) => {
                let (mut sig, mut exp) = (d.significand.clone(), d.exp2);
                if exp.rem_euclid(2) != 0 {
                    sig <<= 1usize;
                    exp -= 1;
                }
                let half_len = (sig.bits() / 2) as i64;
                let k = (min_bits as i64 - half_len + 1).max(0);
                let radicand = sig << (2 * k) as usize;
                let root = radicand.sqrt();
                let exact = (&root * &root) == radicand;
                let out = (root << 1usize) + if exact { 0u32 } else { 1u32 };
                Self::from_parts(false, out, (exp - 2 * k) / 2 - 1)
            }
        }
    }

    /// Total order on real values; `None` if either side is NaR.
    pub fn partial_cmp_value(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExactValue::NaR, _) | (_, ExactValue::NaR) => None,
            (ExactValue::Zero, ExactValue::Zero) => Some(Ordering::Equal),
            (ExactValue::Zero, ExactValue::Finite(b)) => Some(if b.negative {
                Ordering::Greater
            } else {
                Ordering::Less
            }),
            (ExactValue::Finite(a), ExactValue::Zero) => Some(if a.negative {
                Ordering::Less
            } else {
                Ordering::Greater
            }),
            (ExactValue::Finite(a), ExactValue::Finite(b)) => {
                Some(match (a.negative, b.negative) {
                    (false, true) => Ordering::Greater,
                    (true, false) => Ordering::Less,
                    (false, false) => a.cmp_magnitude(b),
                    (true, true) => b.cmp_magnitude(a),
                })
            }
        }
    }

    /// Nearest integer, ties to even. `None` for NaR.
    pub fn round_to_integer(&self) -> Option<BigInt> {
        match self {
            ExactValue::NaR => None,
            ExactValue::Zero => Some(BigInt::zero()),
            ExactValue::Finite(d) => {
                let mag = d.quantize(0);
                let sign = if d.negative { Sign::Minus } else { Sign::Plus };
                Some(BigInt::from_biguint(sign, mag))
            }
        }
    }

    /// Nearest binary64, ties to even. NaR becomes NaN; overflow becomes infinity.
    pub fn to_f64(&self) -> f64 {
        let d = match self {
            ExactValue::Zero => return 0.0,
            ExactValue::NaR => return f64::NAN,
            ExactValue::Finite(d) => d,
        };
        let sign = if d.negative { -1.0 } else { 1.0 };
        let scale = d.scale();
        if scale > 1023 {
            return sign * f64::INFINITY;
        }
        let quantum = if scale >= -1022 { scale - 52 } else { -1074 };
        let mut n = d.quantize(quantum).to_u64().expect("at most 54 bits");
        let mut quantum = quantum;
        if n >= 1u64 << 53 {
            n >>= 1;
            quantum += 1;
        }
        let bits = if n < 1u64 << 52 {
            n
        } else {
            let biased = quantum + 52 + 1023;
            if biased >= 0x7FF {
                return sign * f64::INFINITY;
            }
            ((biased as u64) << 52) | (n - (1u64 << 52))
        };
        sign * f64::from_bits(bits)
    }

    /// Exact decimal expansion (every dyadic rational has a finite one).
    pub fn to_decimal_string(&self) -> String {
        let d = match self {
            ExactValue::Zero => return "0".to_string(),
            ExactValue::NaR => return "NaR".to_string(),
            ExactValue::Finite(d) => d,
        };
        let sign = if d.negative { "-" } else { "" };
        if d.exp2 >= 0 {
            return format!("{sign}{}", &d.significand << d.exp2 as usize);
        }
        let k = (-d.exp2) as usize;
        let digits = (&d.significand * BigUint::from(5u32).pow(k as u32)).to_string();
        let (int_part, frac_part) = if digits.len() > k {
            let (i, f) = digits.split_at(digits.len() - k);
            (i.to_string(), f.to_string())
        } else {
            (
                "0".to_string(),
                format!("{}{}", "0".repeat(k - digits.len()), digits),
            )
        };
        let frac_part = frac_part.trim_end_matches('0');
        if frac_part.is_empty() {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }
}

impl From<i64> for ExactValue {
    fn from(v: i64) -> Self {
        Self::from_i128(v as i128)
    }
}

impl From<u64> for ExactValue {
    fn from(v: u64) -> Self {
        Self::from_i128(v as i128)
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}
