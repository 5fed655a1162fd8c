//! Format-generic kernels (FFT, dot product) and accuracy measurement.

mod dot;
mod fft;
mod metrics;
mod profile;
mod signal;

use std::fmt;
use std::str::FromStr;

use crate::minifloat::{self, MiniFloatBits, MiniFloatSpec};
use crate::posit::{FormatSpec, PositBits};
use crate::quire::Quire;
use crate::{Error, ExactValue};

pub use dot::{dot, DotOutcome};
pub use fft::{fft, fft_reference};
pub use metrics::{error_metrics, ErrorReport, Metrics};
pub use profile::{accuracy_profile, ProfilePoint};
pub use signal::{generate, uniform_vector, Signal};

/// A number format the kernels can compute in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NumberFormat {
    Posit(FormatSpec),
    MiniFloat(MiniFloatSpec),
    /// Native `f64`, used as the reference.
    Binary64,
}

/// A raw pattern tagged with its format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    format: NumberFormat,
    bits: u64,
}

/// A complex value whose parts share one format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComplexSample {
    pub re: Scalar,
    pub im: Scalar,
}

/// A binary64 complex number.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Complex64 {
    pub re: f64,
    pub im: f64,
}

impl Complex64 {
    pub fn new(re: f64, im: f64) -> Self {
        Complex64 { re, im }
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

impl NumberFormat {
    pub fn name(self) -> String {
        self.to_string()
    }

    pub fn width(self) -> u32 {
        match self {
            NumberFormat::Posit(s) => s.n(),
            NumberFormat::MiniFloat(s) => s.width(),
            NumberFormat::Binary64 => 64,
        }
    }

    fn scalar(self, bits: u64) -> Scalar {
        Scalar { format: self, bits }
    }

    /// Wraps a raw pattern, rejecting patterns wider than the format.
    pub fn from_bits(self, bits: u64) -> Result<Scalar, Error> {
        if self.width() < 64 && bits >> self.width() != 0 {
            return Err(Error::PatternTooWide {
                pattern: bits,
                width: self.width(),
            });
        }
        Ok(self.scalar(bits))
    }

    /// Rounds an exact value into the format.
    pub fn encode(self, x: &ExactValue) -> Scalar {
        let bits = match self {
            NumberFormat::Posit(s) => PositBits::from_exact(x, s).bits() as u64,
            NumberFormat::MiniFloat(s) => minifloat::encode(x, s).bits() as u64,
            NumberFormat::Binary64 => x.to_f64().to_bits(),
        };
        self.scalar(bits)
    }

    pub fn from_f64(self, x: f64) -> Scalar {
        let bits = match self {
            NumberFormat::Posit(s) => PositBits::from_f64(x, s).bits() as u64,
            NumberFormat::MiniFloat(s) => MiniFloatBits::from_f64(x, s).bits() as u64,
            NumberFormat::Binary64 => x.to_bits(),
        };
        self.scalar(bits)
    }

    pub fn zero(self) -> Scalar {
        self.scalar(0)
    }

    /// Largest finite value.
    pub fn max_value(self) -> Scalar {
        match self {
            NumberFormat::Posit(s) => self.scalar(s.maxpos().bits() as u64),
            NumberFormat::MiniFloat(s) => self.scalar(s.max_finite_bits().bits() as u64),
            NumberFormat::Binary64 => self.scalar(f64::MAX.to_bits()),
        }
    }

    /// Smallest positive value.
    pub fn min_value(self) -> Scalar {
        match self {
            NumberFormat::Posit(s) => self.scalar(s.minpos().bits() as u64),
            NumberFormat::MiniFloat(_) | NumberFormat::Binary64 => self.scalar(1),
        }
    }

    /// Decimal digits of accuracy `-log10(gap / x)` at a positive finite
    /// value, where the gap is to the next value up (to the next value down
    /// at the top of the range).
    pub fn accuracy_at(self, x: Scalar) -> Option<f64> {
        let v = x.decode();
        if v.is_nar() || v.is_zero() || v.is_negative() {
            return None;
        }
        let neighbour = if x == self.max_value() {
            x.bits - 1
        } else {
            x.bits + 1
        };
        let gap = self.scalar(neighbour).decode().sub(&v).abs();
        Some(minifloat::relative_digits(&gap, &v))
    }

    /// Fused dot product through the quire, rounded once.
    pub fn quire_dot(self, a: &[Scalar], b: &[Scalar]) -> Result<Scalar, Error> {
        let NumberFormat::Posit(spec) = self else {
            return Err(Error::QuireUnsupported(self.name()));
        };
        if a.len() != b.len() {
            return Err(Error::LengthMismatch(a.len(), b.len()));
        }
        let mut q = Quire::new(spec)?;
        for (x, y) in a.iter().zip(b) {
            q.mac(x.as_posit(), y.as_posit());
        }
        Ok(self.scalar(q.round().bits() as u64))
    }

    pub fn complex(self, z: Complex64) -> ComplexSample {
        ComplexSample {
            re: self.from_f64(z.re),
            im: self.from_f64(z.im),
        }
    }
}

impl fmt::Display for NumberFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumberFormat::Posit(s) => s.fmt(f),
            NumberFormat::MiniFloat(s) => s.fmt(f),
            NumberFormat::Binary64 => f.write_str("binary64"),
        }
    }
}

impl FromStr for NumberFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "binary64" || s == "f64" {
            return Ok(NumberFormat::Binary64);
        }
        if s.starts_with('p') {
            return s.parse().map(NumberFormat::Posit);
        }
        s.parse().map(NumberFormat::MiniFloat)
    }
}

impl From<FormatSpec> for NumberFormat {
    fn from(s: FormatSpec) -> Self {
        NumberFormat::Posit(s)
    }
}

impl From<MiniFloatSpec> for NumberFormat {
    fn from(s: MiniFloatSpec) -> Self {
        NumberFormat::MiniFloat(s)
    }
}

#[allow(clippy::should_implement_trait)]
impl Scalar {
    pub fn format(self) -> NumberFormat {
        self.format
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    fn as_posit(self) -> PositBits {
        match self.format {
            NumberFormat::Posit(s) => PositBits::from_bits_truncate(self.bits, s),
            _ => panic!("{} is not a posit format", self.format),
        }
    }

    fn as_minifloat(self, spec: MiniFloatSpec) -> MiniFloatBits {
        MiniFloatBits::from_bits_truncate(self.bits, spec)
    }

    fn as_f64(self) -> f64 {
        f64::from_bits(self.bits)
    }

    /// Exact value; NaR, NaN and infinities map to NaR.
    pub fn decode(self) -> ExactValue {
        match self.format {
            NumberFormat::Posit(s) => PositBits::from_bits_truncate(self.bits, s).value(),
            NumberFormat::MiniFloat(s) => self.as_minifloat(s).to_exact(),
            NumberFormat::Binary64 => ExactValue::from_f64(self.as_f64()),
        }
    }

    pub fn to_f64(self) -> f64 {
        match self.format {
            NumberFormat::Posit(s) => PositBits::from_bits_truncate(self.bits, s).to_f64(),
            NumberFormat::MiniFloat(s) => self.as_minifloat(s).to_f64(),
            NumberFormat::Binary64 => self.as_f64(),
        }
    }

    /// True for NaR or NaN.
    pub fn is_exceptional(self) -> bool {
        match self.format {
            NumberFormat::Posit(s) => self.bits == s.nar_pattern() as u64,
            NumberFormat::MiniFloat(s) => self.as_minifloat(s).is_nan(),
            NumberFormat::Binary64 => self.as_f64().is_nan(),
        }
    }

    pub fn to_hex(self) -> String {
        let digits = (self.format.width() as usize).div_ceil(4);
        format!("0x{:0digits$X}", self.bits)
    }

    fn binary(self, other: Scalar, op: Op) -> Scalar {
        assert_eq!(
            self.format, other.format,
            "scalar operands must share one format"
        );
        let bits = match self.format {
            NumberFormat::Posit(_) => {
                let (a, b) = (self.as_posit(), other.as_posit());
                match op {
                    Op::Add => a + b,
                    Op::Sub => a - b,
                    Op::Mul => a * b,
                    Op::Div => a / b,
                }
                .bits() as u64
            }
            NumberFormat::MiniFloat(s) => {
                let (a, b) = (self.as_minifloat(s), other.as_minifloat(s));
                match op {
                    Op::Add => a.add(b),
                    Op::Sub => a.sub(b),
                    Op::Mul => a.mul(b),
                    Op::Div => a.div(b),
                }
                .bits() as u64
            }
            NumberFormat::Binary64 => {
                let (a, b) = (self.as_f64(), other.as_f64());
                match op {
                    Op::Add => a + b,
                    Op::Sub => a - b,
                    Op::Mul => a * b,
                    Op::Div => a / b,
                }
                .to_bits()
            }
        };
        self.format.scalar(bits)
    }

    pub fn add(self, other: Scalar) -> Scalar {
        self.binary(other, Op::Add)
    }

    pub fn sub(self, other: Scalar) -> Scalar {
        self.binary(other, Op::Sub)
    }

    pub fn mul(self, other: Scalar) -> Scalar {
        self.binary(other, Op::Mul)
    }

    pub fn div(self, other: Scalar) -> Scalar {
        self.binary(other, Op::Div)
    }

    pub fn sqrt(self) -> Scalar {
        let bits = match self.format {
            NumberFormat::Posit(_) => self.as_posit().sqrt().bits() as u64,
            NumberFormat::MiniFloat(s) => self.as_minifloat(s).sqrt().bits() as u64,
            NumberFormat::Binary64 => self.as_f64().sqrt().to_bits(),
        };
        self.format.scalar(bits)
    }

    pub fn neg(self) -> Scalar {
        let bits = match self.format {
            NumberFormat::Posit(_) => self.as_posit().negate().bits() as u64,
            NumberFormat::MiniFloat(s) => self.as_minifloat(s).neg().bits() as u64,
            NumberFormat::Binary64 => (-self.as_f64()).to_bits(),
        };
        self.format.scalar(bits)
    }
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

#[allow(clippy::should_implement_trait)]
impl ComplexSample {
    pub fn add(self, o: Self) -> Self {
        ComplexSample {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }

    pub fn sub(self, o: Self) -> Self {
        ComplexSample {
            re: self.re.sub(o.re),
            im: self.im.sub(o.im),
        }
    }

    /// Four products and two sums, each rounded.
    pub fn mul(self, o: Self) -> Self {
        ComplexSample {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub fn to_complex64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}
