//! Bit-exact emulation of narrow IEEE-like binary formats: FP16, bfloat16,
//! FP8E4M3 (finite-only), FP8E5M2 and generic exponent/mantissa splits.
//!
//! All arithmetic forms the exact result as an [`ExactValue`] and rounds it
//! once (nearest, ties to even). Subnormals are always enabled.

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;

use crate::error::Error;
use crate::exact::{Dyadic, ExactValue};

/// How the all-ones exponent field is interpreted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InfMode {
    /// IEEE 754: all-ones exponent encodes infinities (zero mantissa) and NaNs.
    Ieee,
    /// No infinities; only the all-ones exponent with all-ones mantissa is NaN.
    /// Overflow produces NaN.
    FiniteOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MiniFloatSpec {
    exp_bits: u32,
    man_bits: u32,
    bias: i32,
    inf_mode: InfMode,
}

impl MiniFloatSpec {
    pub const FP16: MiniFloatSpec = MiniFloatSpec::preset(5, 10, InfMode::Ieee);
    pub const BF16: MiniFloatSpec = MiniFloatSpec::preset(8, 7, InfMode::Ieee);
    pub const FP8E5M2: MiniFloatSpec = MiniFloatSpec::preset(5, 2, InfMode::Ieee);
    pub const FP8E4M3: MiniFloatSpec = MiniFloatSpec::preset(4, 3, InfMode::FiniteOnly);

    const fn preset(exp_bits: u32, man_bits: u32, inf_mode: InfMode) -> Self {
        MiniFloatSpec {
            exp_bits,
            man_bits,
            bias: (1 << (exp_bits - 1)) - 1,
            inf_mode,
        }
    }

    /// IEEE-style format with the default bias `2^(exp_bits-1) - 1`.
    pub fn new(exp_bits: u32, man_bits: u32) -> Result<Self, Error> {
        Self::with_options(exp_bits, man_bits, None, InfMode::Ieee)
    }

    pub fn with_options(
        exp_bits: u32,
        man_bits: u32,
        bias: Option<i32>,
        inf_mode: InfMode,
    ) -> Result<Self, Error> {
        if exp_bits < 2 || man_bits < 1 || 1 + exp_bits + man_bits > 32 {
            return Err(Error::InvalidMiniFloatFormat { exp_bits, man_bits });
        }
        let bias = bias.unwrap_or(((1i64 << (exp_bits - 1)) - 1) as i32);
        Ok(MiniFloatSpec {
            exp_bits,
            man_bits,
            bias,
            inf_mode,
        })
    }

    pub fn exp_bits(self) -> u32 {
        self.exp_bits
    }

    pub fn man_bits(self) -> u32 {
        self.man_bits
    }

    pub fn bias(self) -> i32 {
        self.bias
    }

    pub fn inf_mode(self) -> InfMode {
        self.inf_mode
    }

    pub fn width(self) -> u32 {
        1 + self.exp_bits + self.man_bits
    }

    pub fn mask(self) -> u32 {
        if self.width() == 32 {
            u32::MAX
        } else {
            (1u32 << self.width()) - 1
        }
    }

    pub fn hex_digits(self) -> usize {
        self.width().div_ceil(4) as usize
    }

    fn exp_all_ones(self) -> u32 {
        (1u32 << self.exp_bits) - 1
    }

    fn man_mask(self) -> u32 {
        (1u32 << self.man_bits) - 1
    }

    fn sign_mask(self) -> u32 {
        1u32 << (self.exp_bits + self.man_bits)
    }

    /// Smallest normal exponent `1 - bias`.
    pub fn min_exponent(self) -> i64 {
        1 - self.bias as i64
    }

    pub fn nan(self) -> MiniFloatBits {
        let pattern = match self.inf_mode {
            InfMode::Ieee => (self.exp_all_ones() << self.man_bits) | (1 << (self.man_bits - 1)),
            InfMode::FiniteOnly => self.mask() >> 1,
        };
        MiniFloatBits {
            pattern,
            spec: self,
        }
    }

    /// Positive infinity, when the format has one.
    pub fn infinity(self) -> Option<MiniFloatBits> {
        (self.inf_mode == InfMode::Ieee).then(|| MiniFloatBits {
            pattern: self.exp_all_ones() << self.man_bits,
            spec: self,
        })
    }

    pub fn zero(self) -> MiniFloatBits {
        MiniFloatBits {
            pattern: 0,
            spec: self,
        }
    }

    pub fn max_finite_bits(self) -> MiniFloatBits {
        let pattern = match self.inf_mode {
            InfMode::Ieee => ((self.exp_all_ones() - 1) << self.man_bits) | self.man_mask(),
            InfMode::FiniteOnly => (self.mask() >> 1) - 1,
        };
        MiniFloatBits {
            pattern,
            spec: self,
        }
    }

    /// Largest finite value.
    pub fn max_finite(self) -> ExactValue {
        self.max_finite_bits().to_exact()
    }

    /// Smallest positive (subnormal) value.
    pub fn min_positive(self) -> ExactValue {
        ExactValue::pow2(self.min_exponent() - self.man_bits as i64)
    }

    pub fn patterns(self) -> impl Iterator<Item = MiniFloatBits> {
        (0..=self.mask() as u64).map(move |p| MiniFloatBits {
            pattern: p as u32,
            spec: self,
        })
    }

    /// Decimal digits of accuracy at a positive finite value `x` of the format:
    /// `-log10((next_up(x) - x) / x)`. At the largest finite value the gap to
    /// the value below is used.
    pub fn accuracy_at(self, x: MiniFloatBits) -> Option<f64> {
        let v = x.to_exact();
        if !matches!(x.classify(), MfValue::Finite(_)) || v.is_negative() {
            return None;
        }
        let neighbour = if x == self.max_finite_bits() {
            MiniFloatBits {
                pattern: x.pattern - 1,
                spec: self,
            }
        } else {
            MiniFloatBits {
                pattern: x.pattern + 1,
                spec: self,
            }
        };
        let gap = neighbour.to_exact().sub(&v).abs();
        Some(relative_digits(&gap, &v))
    }
}

/// `-log10(gap / value)` computed from the exact operands.
pub(crate) fn relative_digits(gap: &ExactValue, value: &ExactValue) -> f64 {
    let (g, v) = (
        gap.as_dyadic().expect("nonzero gap"),
        value.as_dyadic().expect("nonzero value"),
    );
    // gap/value = (sg/sv) * 2^(eg - ev); the significands are small here.
    let ratio = g.significand().to_f64().unwrap() / v.significand().to_f64().unwrap();
    -(libm::log10(ratio) + (g.exp2() - v.exp2()) as f64 * std::f64::consts::LOG10_2)
}

impl fmt::Display for MiniFloatSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MiniFloatSpec::FP16 => f.write_str("fp16"),
            MiniFloatSpec::BF16 => f.write_str("bf16"),
            MiniFloatSpec::FP8E4M3 => f.write_str("fp8e4m3"),
            MiniFloatSpec::FP8E5M2 => f.write_str("fp8e5m2"),
            s => write!(f, "f{}e{}m", s.exp_bits, s.man_bits),
        }
    }
}

impl FromStr for MiniFloatSpec {
    type Err = Error;

    /// Accepts `fp16`, `bf16`, `fp8e4m3`, `fp8e5m2` and `f<E>e<M>m`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fp16" => return Ok(Self::FP16),
            "bf16" => return Ok(Self::BF16),
            "fp8e4m3" => return Ok(Self::FP8E4M3),
            "fp8e5m2" => return Ok(Self::FP8E5M2),
            _ => {}
        }
        let unknown = || Error::UnknownFormat(s.to_string());
        let body = s
            .strip_prefix('f')
            .and_then(|t| t.strip_suffix('m'))
            .ok_or_else(unknown)?;
        let (e, m) = body.split_once('e').ok_or_else(unknown)?;
        let all_digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if !all_digits(e) || !all_digits(m) {
            return Err(unknown());
        }
        MiniFloatSpec::new(
            e.parse().map_err(|_| unknown())?,
            m.parse().map_err(|_| unknown())?,
        )
    }
}

/// A decoded minifloat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MfValue {
    Zero {
        negative: bool,
    },
    /// Nonzero finite value.
    Finite(ExactValue),
    Infinite {
        negative: bool,
    },
    NaN,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MiniFloatBits {
    pattern: u32,
    spec: MiniFloatSpec,
}

#[allow(clippy::should_implement_trait)]
impl MiniFloatBits {
    pub fn new(pattern: u64, spec: MiniFloatSpec) -> Result<Self, Error> {
        if pattern > spec.mask() as u64 {
            return Err(Error::PatternTooWide {
                pattern,
                width: spec.width(),
            });
        }
        Ok(MiniFloatBits {
            pattern: pattern as u32,
            spec,
        })
    }

    pub fn from_bits_truncate(pattern: u64, spec: MiniFloatSpec) -> Self {
        MiniFloatBits {
            pattern: pattern as u32 & spec.mask(),
            spec,
        }
    }

    pub fn parse(text: &str, spec: MiniFloatSpec) -> Result<Self, Error> {
        MiniFloatBits::new(crate::posit::parse_pattern(text)?, spec)
    }

    pub fn bits(self) -> u32 {
        self.pattern
    }

    pub fn spec(self) -> MiniFloatSpec {
        self.spec
    }

    pub fn to_hex(self) -> String {
        format!(
            "0x{:0width$X}",
            self.pattern,
            width = self.spec.hex_digits()
        )
    }

    pub fn sign_bit(self) -> bool {
        self.pattern & self.spec.sign_mask() != 0
    }

    fn exp_field(self) -> u32 {
        (self.pattern >> self.spec.man_bits) & self.spec.exp_all_ones()
    }

    fn man_field(self) -> u32 {
        self.pattern & self.spec.man_mask()
    }

    pub fn is_nan(self) -> bool {
        matches!(self.classify(), MfValue::NaN)
    }

    pub fn classify(self) -> MfValue {
        let spec = self.spec;
        let negative = self.sign_bit();
        let (e, m) = (self.exp_field(), self.man_field());
        if e == spec.exp_all_ones() {
            match spec.inf_mode {
                InfMode::Ieee if m == 0 => return MfValue::Infinite { negative },
                InfMode::Ieee => return MfValue::NaN,
                InfMode::FiniteOnly if m == spec.man_mask() => return MfValue::NaN,
                InfMode::FiniteOnly => {}
            }
        }
        if e == 0 && m == 0 {
            return MfValue::Zero { negative };
        }
        let (sig, exp) = if e == 0 {
            (m as u64, spec.min_exponent() - spec.man_bits as i64)
        } else {
            (
                (1u64 << spec.man_bits) | m as u64,
                e as i64 - spec.bias as i64 - spec.man_bits as i64,
            )
        };
        MfValue::Finite(ExactValue::from_u64_parts(negative, sig, exp))
    }

    /// Exact value of a finite pattern (zeros give Zero); NaR for NaN and infinities.
    pub fn to_exact(self) -> ExactValue {
        match self.classify() {
            MfValue::Zero { .. } => ExactValue::Zero,
            MfValue::Finite(v) => v,
            MfValue::Infinite { .. } | MfValue::NaN => ExactValue::NaR,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self.classify() {
            MfValue::Zero { negative } => {
                if negative {
                    -0.0
                } else {
                    0.0
                }
            }
            MfValue::Finite(v) => v.to_f64(),
            MfValue::Infinite { negative } => {
                if negative {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            }
            MfValue::NaN => f64::NAN,
        }
    }

    pub fn from_f64(x: f64, spec: MiniFloatSpec) -> Self {
        if x.is_nan() {
            return spec.nan();
        }
        if x.is_infinite() {
            return spec.signed_overflow(x < 0.0);
        }
        if x == 0.0 {
            return spec.signed_zero(x.is_sign_negative());
        }
        encode(&ExactValue::from_f64(x), spec)
    }

    pub fn neg(self) -> Self {
        MiniFloatBits {
            pattern: self.pattern ^ self.spec.sign_mask(),
            spec: self.spec,
        }
    }

    pub fn abs(self) -> Self {
        MiniFloatBits {
            pattern: self.pattern & !self.spec.sign_mask(),
            spec: self.spec,
        }
    }

    fn same_format(self, other: Self) -> MiniFloatSpec {
        assert_eq!(
            self.spec, other.spec,
            "float operands must share one format"
        );
        self.spec
    }

    pub fn add(self, other: Self) -> Self {
        let spec = self.same_format(other);
        match (self.classify(), other.classify()) {
            (MfValue::NaN, _) | (_, MfValue::NaN) => spec.nan(),
            (MfValue::Infinite { negative: a }, MfValue::Infinite { negative: b }) => {
                if a == b {
                    spec.signed_overflow(a)
                } else {
                    spec.nan()
                }
            }
            (MfValue::Infinite { negative }, _) | (_, MfValue::Infinite { negative }) => {
                spec.signed_overflow(negative)
            }
            (MfValue::Zero { negative: a }, MfValue::Zero { negative: b }) => {
                spec.signed_zero(a && b)
            }
            (MfValue::Zero { .. }, _) => other,
            (_, MfValue::Zero { .. }) => self,
            (MfValue::Finite(a), MfValue::Finite(b)) => {
                let sum = a.add(&b);
                // Exact cancellation gives +0 under round-to-nearest.
                encode(&sum, spec)
            }
        }
    }

    pub fn sub(self, other: Self) -> Self {
        if self.is_nan() || other.is_nan() {
            return self.same_format(other).nan();
        }
        self.add(other.neg())
    }

    pub fn mul(self, other: Self) -> Self {
        let spec = self.same_format(other);
        let negative = self.sign_bit() ^ other.sign_bit();
        match (self.classify(), other.classify()) {
            (MfValue::NaN, _) | (_, MfValue::NaN) => spec.nan(),
            (MfValue::Infinite { .. }, MfValue::Zero { .. })
            | (MfValue::Zero { .. }, MfValue::Infinite { .. }) => spec.nan(),
            (MfValue::Infinite { .. }, _) | (_, MfValue::Infinite { .. }) => {
                spec.signed_overflow(negative)
            }
            (MfValue::Zero { .. }, _) | (_, MfValue::Zero { .. }) => spec.signed_zero(negative),
            (MfValue::Finite(a), MfValue::Finite(b)) => encode(&a.mul(&b), spec),
        }
    }

    pub fn div(self, other: Self) -> Self {
        let spec = self.same_format(other);
        let negative = self.sign_bit() ^ other.sign_bit();
        match (self.classify(), other.classify()) {
            (MfValue::NaN, _) | (_, MfValue::NaN) => spec.nan(),
            (MfValue::Infinite { .. }, MfValue::Infinite { .. }) => spec.nan(),
            (MfValue::Zero { .. }, MfValue::Zero { .. }) => spec.nan(),
            (MfValue::Infinite { .. }, _) => spec.signed_overflow(negative),
            (_, MfValue::Infinite { .. }) => spec.signed_zero(negative),
            (_, MfValue::Zero { .. }) => spec.signed_overflow(negative),
            (MfValue::Zero { .. }, _) => spec.signed_zero(negative),
            (MfValue::Finite(a), MfValue::Finite(b)) => {
                encode(&a.div_sticky(&b, spec.guarded_bits()), spec)
            }
        }
    }

    pub fn sqrt(self) -> Self {
        let spec = self.spec;
        match self.classify() {
            MfValue::NaN => spec.nan(),
            MfValue::Zero { .. } => self,
            MfValue::Infinite { negative: false } => self,
            MfValue::Infinite { negative: true } => spec.nan(),
            MfValue::Finite(a) if a.is_negative() => spec.nan(),
            MfValue::Finite(a) => encode(&a.sqrt_sticky(spec.guarded_bits()), spec),
        }
    }
}

impl MiniFloatSpec {
    fn guarded_bits(self) -> u64 {
        2 * self.man_bits as u64 + 8
    }

    fn signed_zero(self, negative: bool) -> MiniFloatBits {
        MiniFloatBits {
            pattern: if negative { self.sign_mask() } else { 0 },
            spec: self,
        }
    }

    /// ±infinity, or NaN for finite-only formats.
    fn signed_overflow(self, negative: bool) -> MiniFloatBits {
        match self.infinity() {
            Some(inf) if negative => inf.neg(),
            Some(inf) => inf,
            None => self.nan(),
        }
    }
}

/// Rounds an exact value to nearest, ties to even. Overflow gives ±infinity
/// (IEEE mode) or NaN (finite-only mode); NaR gives NaN; Zero gives +0.
/// A nonzero value that underflows keeps its sign.
pub fn encode(x: &ExactValue, spec: MiniFloatSpec) -> MiniFloatBits {
    match x {
        ExactValue::Zero => spec.zero(),
        ExactValue::NaR => spec.nan(),
        ExactValue::Finite(d) => encode_finite(d, spec),
    }
}

fn encode_finite(d: &Dyadic, spec: MiniFloatSpec) -> MiniFloatBits {
    let negative = d.is_negative();
    let m = spec.man_bits;
    let emin = spec.min_exponent();
    let scale = d.scale();
    // Well past the largest exponent field there is nothing to round.
    if scale > spec.exp_all_ones() as i64 - spec.bias as i64 + 1 {
        return spec.signed_overflow(negative);
    }
    let mut quantum = scale.max(emin) - m as i64;
    let mut n = d
        .quantize(quantum)
        .to_u64()
        .expect("at most man_bits + 2 bits");
    if n >= 1u64 << (m + 1) {
        n >>= 1;
        quantum += 1;
    }
    if n == 0 {
        return spec.signed_zero(negative);
    }
    let (e_field, m_field) = if n < 1u64 << m {
        (0u64, n)
    } else {
        (
            (quantum + m as i64 + spec.bias as i64) as u64,
            n - (1u64 << m),
        )
    };
    let all_ones = spec.exp_all_ones() as u64;
    let overflow = match spec.inf_mode {
        InfMode::Ieee => e_field >= all_ones,
        InfMode::FiniteOnly => {
            e_field > all_ones || (e_field == all_ones && m_field == spec.man_mask() as u64)
        }
    };
    if overflow {
        return spec.signed_overflow(negative);
    }
    let pattern = (e_field << m) | m_field | if negative { spec.sign_mask() as u64 } else { 0 };
    MiniFloatBits {
        pattern: pattern as u32,
        spec,
    }
}
