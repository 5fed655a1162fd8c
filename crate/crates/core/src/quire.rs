//! The quire: a `16n`-bit two's-complement fixed-point accumulator with
//! `8(n-2)` fraction bits, enough to hold every product of two posits exactly
//! and leave 30 carry-guard bits above the integer part.

use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::error::Error;
use crate::exact::ExactValue;
use crate::posit::{encode, FormatSpec, PositBits};

// 576 bits: covers the widest quire (512 bits for n = 32) with headroom, so
// one accumulation step can never wrap the backing store.
const LIMBS: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quire {
    spec: FormatSpec,
    acc: [u64; LIMBS],
    nar: bool,
}

impl Quire {
    /// A cleared quire. Only `es = 2` formats have a quire.
    pub fn new(spec: FormatSpec) -> Result<Self, Error> {
        if spec.es() != 2 {
            return Err(Error::QuireUnsupported(spec.to_string()));
        }
        Ok(Quire {
            spec,
            acc: [0; LIMBS],
            nar: false,
        })
    }

    pub fn spec(&self) -> FormatSpec {
        self.spec
    }

    /// Register width in bits (`16n`).
    pub fn width(&self) -> u32 {
        16 * self.spec.n()
    }

    pub fn fraction_bits(&self) -> u32 {
        8 * (self.spec.n() - 2)
    }

    pub fn is_nar(&self) -> bool {
        self.nar
    }

    pub fn clear(&mut self) {
        self.acc = [0; LIMBS];
        self.nar = false;
    }

    /// `acc = -acc`. Negating the most negative value overflows into NaR.
    pub fn negate(&mut self) {
        if self.nar {
            return;
        }
        let mut carry = 1u64;
        for limb in self.acc.iter_mut() {
            let (v, c) = (!*limb).overflowing_add(carry);
            *limb = v;
            carry = c as u64;
        }
        self.check_range();
    }

    /// `acc += a * b` exactly. A NaR operand, or a sum leaving the `16n`-bit
    /// range, turns the quire into NaR until the next clear.
    pub fn mac(&mut self, a: PositBits, b: PositBits) {
        assert!(
            a.spec() == self.spec && b.spec() == self.spec,
            "quire and operands must share one format"
        );
        if self.nar {
            return;
        }
        if a.is_nar() || b.is_nar() {
            self.nar = true;
            return;
        }
        let product = a.value().mul(&b.value());
        let Some(d) = product.as_dyadic() else {
            return;
        };
        let sig = d.significand().iter_u64_digits().next().unwrap_or(0);
        debug_assert!(d.significand().bits() <= 64);
        let shift = d.exp2() + self.fraction_bits() as i64;
        debug_assert!(
            shift >= 0,
            "posit products are multiples of 2^-fraction_bits"
        );
        self.add_shifted(sig, shift as u32, d.is_negative());
        self.check_range();
    }

    fn add_shifted(&mut self, sig: u64, shift: u32, negative: bool) {
        let idx = (shift / 64) as usize;
        let wide = (sig as u128) << (shift % 64);
        let mut addend = [0u64; LIMBS];
        addend[idx] = wide as u64;
        addend[idx + 1] = (wide >> 64) as u64;
        if negative {
            let mut borrow = false;
            for (limb, sub) in self.acc.iter_mut().zip(addend) {
                let (v1, b1) = limb.overflowing_sub(sub);
                let (v2, b2) = v1.overflowing_sub(borrow as u64);
                *limb = v2;
                borrow = b1 || b2;
            }
        } else {
            let mut carry = false;
            for (limb, add) in self.acc.iter_mut().zip(addend) {
                let (v1, c1) = limb.overflowing_add(add);
                let (v2, c2) = v1.overflowing_add(carry as u64);
                *limb = v2;
                carry = c1 || c2;
            }
        }
    }

    fn is_negative_acc(&self) -> bool {
        self.acc[LIMBS - 1] >> 63 != 0
    }

    /// Sets NaR unless every backing bit from `width - 1` up equals the sign.
    fn check_range(&mut self) {
        let fill = if self.is_negative_acc() { u64::MAX } else { 0 };
        let top = self.width() - 1;
        let in_range = (0..LIMBS).all(|i| {
            let lo_bit = 64 * i as u32;
            if lo_bit + 63 < top {
                return true;
            }
            let mask = if top <= lo_bit {
                u64::MAX
            } else {
                u64::MAX << (top - lo_bit)
            };
            self.acc[i] & mask == fill & mask
        });
        if !in_range {
            self.nar = true;
        }
    }

    /// Exact accumulated value.
    pub fn to_exact(&self) -> ExactValue {
        if self.nar {
            return ExactValue::NaR;
        }
        let negative = self.is_negative_acc();
        let mut mag = self.acc;
        if negative {
            let mut carry = 1u64;
            for limb in mag.iter_mut() {
                let (v, c) = (!*limb).overflowing_add(carry);
                *limb = v;
                carry = c as u64;
            }
        }
        let digits: Vec<u32> = mag
            .iter()
            .flat_map(|&l| [l as u32, (l >> 32) as u32])
            .collect();
        ExactValue::from_parts(
            negative,
            BigUint::new(digits),
            -(self.fraction_bits() as i64),
        )
    }

    /// The accumulated value rounded once to a posit.
    pub fn round(&self) -> PositBits {
        encode(&self.to_exact(), self.spec)
    }

    /// The low `16n` bits of the register as `0x`-prefixed hex.
    pub fn to_hex(&self) -> String {
        let mut all = String::with_capacity(LIMBS * 16);
        for limb in self.acc.iter().rev() {
            write!(all, "{limb:016X}").unwrap();
        }
        let digits = (self.width() / 4) as usize;
        format!("0x{}", &all[all.len() - digits..])
    }

    /// Hex dump plus exact decimal value, for debugging and golden files.
    pub fn dump(&self) -> String {
        let value = if self.nar {
            "NaR".to_string()
        } else {
            self.to_exact().to_decimal_string()
        };
        format!("quire[{}] {} = {}", self.spec, self.to_hex(), value)
    }
}
