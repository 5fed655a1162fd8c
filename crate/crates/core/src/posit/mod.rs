//! Parametric posit formats (`n` total bits, `es` exponent bits).

mod codec;
mod convert;
mod ops;

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::exact::ExactValue;

pub use codec::{decode, encode, DecodedPosit, PositFields};
pub use convert::IntKind;
pub use ops::SignInjection;

/// A posit format descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormatSpec {
    n: u32,
    es: u32,
}

impl FormatSpec {
    pub const P8E2: FormatSpec = FormatSpec { n: 8, es: 2 };
    pub const P10E2: FormatSpec = FormatSpec { n: 10, es: 2 };
    pub const P12E2: FormatSpec = FormatSpec { n: 12, es: 2 };
    pub const P16E2: FormatSpec = FormatSpec { n: 16, es: 2 };
    pub const P16E3: FormatSpec = FormatSpec { n: 16, es: 3 };
    pub const P24E2: FormatSpec = FormatSpec { n: 24, es: 2 };
    pub const P32E2: FormatSpec = FormatSpec { n: 32, es: 2 };

    pub const MIN_BITS: u32 = 3;
    pub const MAX_BITS: u32 = 32;
    pub const MAX_ES: u32 = 4;

    pub fn new(n: u32, es: u32) -> Result<Self, Error> {
        if !(Self::MIN_BITS..=Self::MAX_BITS).contains(&n) || es > Self::MAX_ES {
            return Err(Error::InvalidPositFormat { n, es });
        }
        Ok(FormatSpec { n, es })
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn es(self) -> u32 {
        self.es
    }

    /// Mask of the `n` valid pattern bits.
    pub fn mask(self) -> u32 {
        if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        }
    }

    pub fn nar_pattern(self) -> u32 {
        1u32 << (self.n - 1)
    }

    /// Scale of maxpos: `2^es * (n - 2)`. minpos is `2^-max_scale`.
    pub fn max_scale(self) -> i64 {
        ((self.n - 2) as i64) << self.es
    }

    /// Largest fraction field width (regime of two bits, all exponent bits present).
    pub fn max_fraction_bits(self) -> u32 {
        self.n.saturating_sub(3 + self.es)
    }

    /// Hex digits used when printing a pattern.
    pub fn hex_digits(self) -> usize {
        self.n.div_ceil(4) as usize
    }

    pub fn zero(self) -> PositBits {
        PositBits {
            pattern: 0,
            spec: self,
        }
    }

    pub fn nar(self) -> PositBits {
        PositBits {
            pattern: self.nar_pattern(),
            spec: self,
        }
    }

    pub fn one(self) -> PositBits {
        PositBits {
            pattern: 1u32 << (self.n - 2),
            spec: self,
        }
    }

    pub fn maxpos(self) -> PositBits {
        PositBits {
            pattern: self.nar_pattern() - 1,
            spec: self,
        }
    }

    pub fn minpos(self) -> PositBits {
        PositBits {
            pattern: 1,
            spec: self,
        }
    }

    /// Every pattern of the format in unsigned pattern order.
    pub fn patterns(self) -> impl Iterator<Item = PositBits> {
        (0..=self.mask() as u64).map(move |p| PositBits {
            pattern: p as u32,
            spec: self,
        })
    }

    pub fn is_standard(self) -> bool {
        self.es == 2
    }
}

impl fmt::Display for FormatSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}e{}", self.n, self.es)
    }
}

impl FromStr for FormatSpec {
    type Err = Error;

    /// Parses `p<N>e<ES>`, e.g. `p16e2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || Error::UnknownFormat(s.to_string());
        let rest = s.strip_prefix('p').ok_or_else(unknown)?;
        let (n, es) = rest.split_once('e').ok_or_else(unknown)?;
        let all_digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if !all_digits(n) || !all_digits(es) {
            return Err(unknown());
        }
        let n = n.parse().map_err(|_| unknown())?;
        let es = es.parse().map_err(|_| unknown())?;
        FormatSpec::new(n, es)
    }
}

/// A raw posit pattern tagged with its format.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PositBits {
    pattern: u32,
    spec: FormatSpec,
}

impl PositBits {
    pub fn new(pattern: u64, spec: FormatSpec) -> Result<Self, Error> {
        if pattern > spec.mask() as u64 {
            return Err(Error::PatternTooWide {
                pattern,
                width: spec.n,
            });
        }
        Ok(PositBits {
            pattern: pattern as u32,
            spec,
        })
    }

    /// Keeps the low `n` bits of `pattern`.
    pub fn from_bits_truncate(pattern: u64, spec: FormatSpec) -> Self {
        PositBits {
            pattern: pattern as u32 & spec.mask(),
            spec,
        }
    }

    pub fn bits(self) -> u32 {
        self.pattern
    }

    pub fn spec(self) -> FormatSpec {
        self.spec
    }

    pub fn is_zero(self) -> bool {
        self.pattern == 0
    }

    pub fn is_nar(self) -> bool {
        self.pattern == self.spec.nar_pattern()
    }

    /// Sign bit of the pattern (set for negative values and for NaR).
    pub fn sign_bit(self) -> bool {
        self.pattern >> (self.spec.n - 1) != 0
    }

    /// The pattern read as an `n`-bit two's-complement integer.
    pub fn signed(self) -> i32 {
        let shift = 32 - self.spec.n;
        ((self.pattern << shift) as i32) >> shift
    }

    /// Exact real value (NaR for the NaR pattern).
    pub fn value(self) -> ExactValue {
        decode(self).value()
    }

    pub fn from_exact(x: &ExactValue, spec: FormatSpec) -> Self {
        encode(x, spec)
    }

    /// `0x`-prefixed uppercase hex of `ceil(n/4)` digits.
    pub fn to_hex(self) -> String {
        format!(
            "0x{:0width$X}",
            self.pattern,
            width = self.spec.hex_digits()
        )
    }

    /// Parses `0x…` hex (or plain decimal) and checks it fits the format width.
    pub fn parse(text: &str, spec: FormatSpec) -> Result<Self, Error> {
        let pattern = parse_pattern(text)?;
        PositBits::new(pattern, spec)
    }
}

impl fmt::Display for PositBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Parses an unsigned pattern written as `0x…` hex or decimal.
pub fn parse_pattern(text: &str) -> Result<u64, Error> {
    let t = text.trim();
    let parsed = if let Some(hex) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        u64::from_str_radix(&hex.replace('_', ""), 16)
    } else {
        t.parse::<u64>()
    };
    parsed.map_err(|_| Error::BadPattern(text.to_string()))
}
