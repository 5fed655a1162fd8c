use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{encode, FormatSpec, PositBits};
use crate::exact::ExactValue;

/// Where `sign_inject` takes the result's sign from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignInjection {
    /// Sign of the second operand.
    Copy,
    /// Opposite of the second operand's sign.
    Negate,
    /// XOR of both signs.
    Xor,
}

impl FormatSpec {
    /// Significant bits carried by the guarded quotient and root before rounding.
    pub(crate) fn guarded_bits(self) -> u64 {
        2 * self.n() as u64 + 8
    }
}

#[allow(clippy::should_implement_trait)]
impl PositBits {
    fn same_format(self, other: PositBits) -> FormatSpec {
        assert_eq!(
            self.spec(),
            other.spec(),
            "posit operands must share one format"
        );
        self.spec()
    }

    fn round(x: &ExactValue, spec: FormatSpec) -> PositBits {
        encode(x, spec)
    }

    pub fn add(self, other: PositBits) -> PositBits {
        let spec = self.same_format(other);
        if self.is_nar() || other.is_nar() {
            return spec.nar();
        }
        Self::round(&self.value().add(&other.value()), spec)
    }

    pub fn sub(self, other: PositBits) -> PositBits {
        let spec = self.same_format(other);
        if self.is_nar() || other.is_nar() {
            return spec.nar();
        }
        Self::round(&self.value().sub(&other.value()), spec)
    }

    pub fn mul(self, other: PositBits) -> PositBits {
        let spec = self.same_format(other);
        if self.is_nar() || other.is_nar() {
            return spec.nar();
        }
        Self::round(&self.value().mul(&other.value()), spec)
    }

    /// Correctly rounded quotient; division by zero is NaR.
    pub fn div(self, other: PositBits) -> PositBits {
        let spec = self.same_format(other);
        if self.is_nar() || other.is_nar() || other.is_zero() {
            return spec.nar();
        }
        let q = self.value().div_sticky(&other.value(), spec.guarded_bits());
        Self::round(&q, spec)
    }

    /// Correctly rounded square root; negative inputs are NaR.
    pub fn sqrt(self) -> PositBits {
        let spec = self.spec();
        if self.is_nar() || self.is_negative() {
            return spec.nar();
        }
        let r = self.value().sqrt_sticky(spec.guarded_bits());
        Self::round(&r, spec)
    }

    /// Strictly negative real value (NaR excluded).
    pub fn is_negative(self) -> bool {
        self.sign_bit() && !self.is_nar()
    }

    /// Two's complement of the pattern. Fixes zero and NaR.
    pub fn negate(self) -> PositBits {
        PositBits::from_bits_truncate(self.bits().wrapping_neg() as u64, self.spec())
    }

    pub fn absval(self) -> PositBits {
        if self.sign_bit() {
            self.negate()
        } else {
            self
        }
    }

    /// Magnitude of `self` with a sign chosen by `mode` from `other`.
    /// Setting a sign is a conditional pattern negation.
    pub fn sign_inject(self, other: PositBits, mode: SignInjection) -> PositBits {
        self.same_format(other);
        let want_negative = match mode {
            SignInjection::Copy => other.sign_bit(),
            SignInjection::Negate => !other.sign_bit(),
            SignInjection::Xor => self.sign_bit() ^ other.sign_bit(),
        };
        if self.sign_bit() == want_negative {
            self
        } else {
            self.negate()
        }
    }

    /// Signed-integer comparison of the patterns. NaR is below every other
    /// posit and equal to itself.
    pub fn compare(self, other: PositBits) -> Ordering {
        self.same_format(other);
        self.signed().cmp(&other.signed())
    }

    /// The next pattern up in signed order (maxpos maps to NaR).
    pub fn next_up(self) -> PositBits {
        PositBits::from_bits_truncate(self.bits().wrapping_add(1) as u64, self.spec())
    }

    pub fn next_down(self) -> PositBits {
        PositBits::from_bits_truncate(self.bits().wrapping_sub(1) as u64, self.spec())
    }
}

impl PartialOrd for PositBits {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (self.spec() == other.spec()).then(|| self.signed().cmp(&other.signed()))
    }
}

impl Add for PositBits {
    type Output = PositBits;
    fn add(self, rhs: PositBits) -> PositBits {
        PositBits::add(self, rhs)
    }
}

impl Sub for PositBits {
    type Output = PositBits;
    fn sub(self, rhs: PositBits) -> PositBits {
        PositBits::sub(self, rhs)
    }
}

impl Mul for PositBits {
    type Output = PositBits;
    fn mul(self, rhs: PositBits) -> PositBits {
        PositBits::mul(self, rhs)
    }
}

impl Div for PositBits {
    type Output = PositBits;
    fn div(self, rhs: PositBits) -> PositBits {
        PositBits::div(self, rhs)
    }
}

impl Neg for PositBits {
    type Output = PositBits;
    fn neg(self) -> PositBits {
        self.negate()
    }
}
