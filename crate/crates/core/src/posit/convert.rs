use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{encode, FormatSpec, PositBits};
use crate::exact::ExactValue;

/// Integer target of a posit-to-integer conversion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IntKind {
    I32,
    U32,
    I64,
    U64,
}

impl IntKind {
    pub fn new(signed: bool, width: u32) -> Option<Self> {
        match (signed, width) {
            (true, 32) => Some(IntKind::I32),
            (false, 32) => Some(IntKind::U32),
            (true, 64) => Some(IntKind::I64),
            (false, 64) => Some(IntKind::U64),
            _ => None,
        }
    }

    pub fn range(self) -> (i128, i128) {
        match self {
            IntKind::I32 => (i32::MIN as i128, i32::MAX as i128),
            IntKind::U32 => (0, u32::MAX as i128),
            IntKind::I64 => (i64::MIN as i128, i64::MAX as i128),
            IntKind::U64 => (0, u64::MAX as i128),
        }
    }

    /// Result for NaR: the pattern `10…0` of the target width, i.e. the most
    /// negative signed integer, or `2^(w-1)` when unsigned.
    pub fn nar_value(self) -> i128 {
        match self {
            IntKind::I32 => i32::MIN as i128,
            IntKind::U32 => 1 << 31,
            IntKind::I64 => i64::MIN as i128,
            IntKind::U64 => 1 << 63,
        }
    }
}

impl PositBits {
    /// Rounds to the nearest integer (ties to even) and clamps to the target range.
    pub fn to_int(self, kind: IntKind) -> i128 {
        let Some(rounded) = self.value().round_to_integer() else {
            return kind.nar_value();
        };
        let (lo, hi) = kind.range();
        if rounded < BigInt::from(lo) {
            lo
        } else if rounded > BigInt::from(hi) {
            hi
        } else {
            rounded.to_i128().expect("within clamp range")
        }
    }

    pub fn to_i32(self) -> i32 {
        self.to_int(IntKind::I32) as i32
    }

    pub fn to_i64(self) -> i64 {
        self.to_int(IntKind::I64) as i64
    }

    pub fn from_int(value: i128, spec: FormatSpec) -> PositBits {
        encode(&ExactValue::from_i128(value), spec)
    }

    /// Exact for every supported format.
    pub fn to_f64(self) -> f64 {
        self.value().to_f64()
    }

    /// NaN and infinities map to NaR, both zeros to zero.
    pub fn from_f64(x: f64, spec: FormatSpec) -> PositBits {
        encode(&ExactValue::from_f64(x), spec)
    }

    /// Re-rounds into another posit format; exact when widening with the same `es`.
    pub fn convert(self, to: FormatSpec) -> PositBits {
        encode(&self.value(), to)
    }
}
