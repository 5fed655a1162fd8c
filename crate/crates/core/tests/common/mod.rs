//! Reference oracles shared by the integration and acceptance suites.
//!
//! These are written independently of the library's codecs: posits are decoded
//! the classical way (negate, then read the fields off a bit string) and
//! rounding is done by bracketing the exact result in a sorted table of
//! representable values and midpoints, using exact rationals throughout.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use positlab::minifloat::InfMode;
use positlab::{MiniFloatBits, MiniFloatSpec, PositBits};

pub type Q = BigRational;

pub fn pow2(k: i64) -> Q {
    let one = BigInt::one();
    if k >= 0 {
        Q::from_integer(one << k as usize)
    } else {
        Q::new(one.clone(), one << (-k) as usize)
    }
}

pub fn q_from_f64(x: f64) -> Q {
    Q::from_float(x).expect("finite")
}

/// Classical posit decode: two's-complement negatives, then read
/// sign / regime / exponent / fraction from the bit string.
pub fn posit_value(pattern: u64, n: u32, es: u32) -> Option<Q> {
    let nar = 1u64 << (n - 1);
    if pattern == 0 {
        return Some(Q::zero());
    }
    if pattern == nar {
        return None;
    }
    let negative = pattern & nar != 0;
    let modulus = 1u64 << n;
    let mag = if negative { modulus - pattern } else { pattern };
    let bits: Vec<u8> = (0..n - 1).rev().map(|i| ((mag >> i) & 1) as u8).collect();
    let first = bits[0];
    let k = bits.iter().take_while(|&&b| b == first).count();
    let r: i64 = if first == 1 {
        k as i64 - 1
    } else {
        -(k as i64)
    };
    let mut rest = bits.iter().skip(k + 1);
    let mut e: i64 = 0;
    for _ in 0..es {
        e = 2 * e + rest.next().map_or(0, |&b| b as i64);
    }
    let frac_bits: Vec<u8> = rest.copied().collect();
    let mut f = Q::zero();
    for (i, &b) in frac_bits.iter().enumerate() {
        if b == 1 {
            f += pow2(-(i as i64) - 1);
        }
    }
    let v = (Q::one() + f) * pow2(r * (1i64 << es) + e);
    Some(if negative { -v } else { v })
}

/// Values of the positive `(n+1)`-bit posits of the same `es`, indexed by
/// pattern. Even indices are the `n`-bit posits, odd indices the rounding
/// midpoints between them. Every value is stored as an integer multiple of
/// `2^-k`, so rounding needs only integer comparisons.
pub struct PositTable {
    n: u32,
    k: usize,
    values: Vec<BigInt>,
    /// `values << k`, for comparing products.
    shifted: Vec<BigInt>,
}

static POSIT_TABLES: OnceLock<Mutex<HashMap<(u32, u32), &'static PositTable>>> = OnceLock::new();

pub fn posit_table(n: u32, es: u32) -> &'static PositTable {
    let map = POSIT_TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = map.lock().unwrap();
    guard.entry((n, es)).or_insert_with(|| {
        let ext = n + 1;
        let top = 1u64 << n; // patterns 0 .. 2^n - 1 are the non-negative ones
        let exact: Vec<Q> = (0..top).map(|p| posit_value(p, ext, es).unwrap()).collect();
        assert!(
            exact.windows(2).all(|w| w[0] < w[1]),
            "extended table must be sorted"
        );
        // minpos of the extended format has the largest denominator.
        let k = exact[1].denom().bits() as usize - 1;
        let values: Vec<BigInt> = exact
            .iter()
            .map(|v| {
                let scaled = v * Q::from_integer(BigInt::one() << k);
                assert!(scaled.is_integer());
                scaled.to_integer()
            })
            .collect();
        let shifted = values.iter().map(|v| v << k).collect();
        Box::leak(Box::new(PositTable {
            n,
            k,
            values,
            shifted,
        }))
    })
}

impl PositTable {
    /// Scaled magnitude of the `n`-bit posit `pattern` (`pattern` must not be NaR).
    fn operand(&self, pattern: u64) -> (bool, BigInt) {
        let sign_bit = 1u64 << (self.n - 1);
        let negative = pattern & sign_bit != 0;
        let mag = if negative {
            (1u64 << self.n) - pattern
        } else {
            pattern
        };
        (negative, self.values[2 * mag as usize].clone())
    }

    /// Rounds a positive target described by `cmp(j) = target.cmp(values[j])`.
    /// Returns the positive pattern.
    fn round_magnitude(&self, cmp: &dyn Fn(usize) -> Ordering) -> u64 {
        let maxpos_idx = self.values.len() - 2; // 2 * maxpos pattern
        if cmp(maxpos_idx) != Ordering::Less {
            return (maxpos_idx / 2) as u64;
        }
        // Largest j with values[j] <= target.
        let (mut lo, mut hi) = (0usize, maxpos_idx);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if cmp(mid) != Ordering::Less {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let j = lo;
        let exact = cmp(j) == Ordering::Equal;
        let result = if j % 2 == 0 {
            j / 2
        } else if exact {
            let (down, up) = ((j - 1) / 2, j.div_ceil(2));
            if down % 2 == 0 {
                down
            } else {
                up
            }
        } else {
            j.div_ceil(2)
        };
        result.max(1) as u64
    }

    fn apply_sign(&self, p: u64, negative: bool) -> u64 {
        let mask = (1u64 << self.n) - 1;
        if negative {
            p.wrapping_neg() & mask
        } else {
            p
        }
    }

    /// Correctly rounded pattern for an exact rational.
    pub fn round(&self, x: &Q) -> u64 {
        if x.is_zero() {
            return 0;
        }
        let mag = x.abs();
        let (num, den) = (mag.numer().clone(), mag.denom().clone());
        // mag vs v/2^k  <=>  num * 2^k vs v * den
        let lhs = num << self.k;
        let p = self.round_magnitude(&|j| lhs.cmp(&(&self.values[j] * &den)));
        self.apply_sign(p, x.is_negative())
    }

    /// Correctly rounded square root of a nonnegative rational.
    pub fn round_sqrt(&self, x: &Q) -> u64 {
        if x.is_zero() {
            return 0;
        }
        assert!(x.is_positive());
        let (num, den) = (x.numer().clone(), x.denom().clone());
        // x vs (v/2^k)^2  <=>  num * 2^2k vs v^2 * den
        let lhs = num << (2 * self.k);
        self.round_magnitude(&|j| lhs.cmp(&(&self.values[j] * &self.values[j] * &den)))
    }

    /// Oracle result of `a op b` on raw `n`-bit patterns, neither NaR, using
    /// only scaled-integer arithmetic.
    fn apply(&self, op: Op, a: u64, b: u64) -> Option<u64> {
        let (sa, x) = self.operand(a);
        let (sb, y) = self.operand(b);
        let signed = |neg: bool, v: BigInt| if neg { -v } else { v };
        let k = self.k;
        Some(match op {
            Op::Add | Op::Sub => {
                let yb = if op == Op::Sub { !sb } else { sb };
                let t = signed(sa, x) + signed(yb, y);
                if t.is_zero() {
                    return Some(0);
                }
                let mag = t.abs();
                let p = self.round_magnitude(&|j| mag.cmp(&self.values[j]));
                self.apply_sign(p, t.is_negative())
            }
            Op::Mul => {
                if x.is_zero() || y.is_zero() {
                    return Some(0);
                }
                let prod = &x * &y; // scaled by 2^2k
                let p = self.round_magnitude(&|j| prod.cmp(&self.shifted[j]));
                self.apply_sign(p, sa != sb)
            }
            Op::Div => {
                if y.is_zero() {
                    return None;
                }
                if x.is_zero() {
                    return Some(0);
                }
                // x/y vs v/2^k  <=>  x * 2^k vs v * y
                let lhs = &x << k;
                let p = self.round_magnitude(&|j| lhs.cmp(&(&self.values[j] * &y)));
                self.apply_sign(p, sa != sb)
            }
            Op::Sqrt => {
                if sa && !x.is_zero() {
                    return None;
                }
                if x.is_zero() {
                    return Some(0);
                }
                // x/2^k vs v^2/2^2k  <=>  x * 2^k vs v^2
                let lhs = &x << k;
                self.round_magnitude(&|j| lhs.cmp(&(&self.values[j] * &self.values[j])))
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    Sqrt,
}

pub const BINARY_OPS: [Op; 4] = [Op::Add, Op::Sub, Op::Mul, Op::Div];

/// Oracle posit result for `a op b` (`b` ignored for sqrt).
pub fn posit_oracle(op: Op, a: PositBits, b: PositBits) -> u64 {
    let spec = a.spec();
    let (n, es) = (spec.n(), spec.es());
    let nar = 1u64 << (n - 1);
    let (a, b) = (
        a.bits() as u64,
        if op == Op::Sqrt { 0 } else { b.bits() as u64 },
    );
    if a == nar || b == nar {
        return nar;
    }
    posit_table(n, es).apply(op, a, b).unwrap_or(nar)
}

pub fn posit_apply(op: Op, a: PositBits, b: PositBits) -> PositBits {
    match op {
        Op::Add => a.add(b),
        Op::Sub => a.sub(b),
        Op::Mul => a.mul(b),
        Op::Div => a.div(b),
        Op::Sqrt => a.sqrt(),
    }
}

// ---------------------------------------------------------------- minifloats

pub struct FloatTable {
    spec: MiniFloatSpec,
    /// Values of positive patterns 0 ..= max_finite + 1, where the last entry
    /// is the pattern after max finite read as if it were a normal number.
    values: Vec<Q>,
}

static FLOAT_TABLES: OnceLock<Mutex<HashMap<MiniFloatSpec, &'static FloatTable>>> = OnceLock::new();

/// Independent decode of a finite minifloat pattern (no sign handling needed
/// for the table: callers pass positive patterns).
fn float_field_value(pattern: u64, spec: MiniFloatSpec) -> Q {
    let m = spec.man_bits();
    let e = (pattern >> m) & ((1 << spec.exp_bits()) - 1);
    let man = pattern & ((1 << m) - 1);
    let frac = Q::new(BigInt::from(man), BigInt::one() << m as usize);
    if e == 0 {
        frac * pow2(1 - spec.bias() as i64)
    } else {
        (Q::one() + frac) * pow2(e as i64 - spec.bias() as i64)
    }
}

pub fn float_table(spec: MiniFloatSpec) -> &'static FloatTable {
    let map = FLOAT_TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = map.lock().unwrap();
    guard.entry(spec).or_insert_with(|| {
        let max = spec.max_finite_bits().bits() as u64;
        let values: Vec<Q> = (0..=max + 1).map(|p| float_field_value(p, spec)).collect();
        assert!(values.windows(2).all(|w| w[0] < w[1]));
        Box::leak(Box::new(FloatTable { spec, values }))
    })
}

impl FloatTable {
    /// Positive pattern for `|x|`, or `None` on overflow.
    fn round_magnitude(&self, cmp: &dyn Fn(&Q) -> Ordering) -> Option<u64> {
        let last = self.values.len() - 1;
        if cmp(&self.values[last]) != Ordering::Less {
            return None;
        }
        let (mut lo, mut hi) = (0usize, last - 1);
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if cmp(&self.values[mid]) != Ordering::Less {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
        let j = lo;
        if cmp(&self.values[j]) == Ordering::Equal {
            return Some(j as u64);
        }
        let midpoint = (&self.values[j] + &self.values[j + 1]) / Q::from_integer(2.into());
        let pick = match cmp(&midpoint) {
            Ordering::Less => j,
            Ordering::Greater => j + 1,
            Ordering::Equal => {
                if j % 2 == 0 {
                    j
                } else {
                    j + 1
                }
            }
        };
        (pick < last).then_some(pick as u64)
    }

    fn finish(&self, mag: Option<u64>, negative: bool) -> u64 {
        let sign = 1u64 << (self.spec.width() - 1);
        match mag {
            None => overflow_pattern(self.spec, negative),
            Some(p) => p | if negative { sign } else { 0 },
        }
    }
}

fn nan_pattern(spec: MiniFloatSpec) -> u64 {
    spec.nan().bits() as u64
}

fn overflow_pattern(spec: MiniFloatSpec, negative: bool) -> u64 {
    match spec.inf_mode() {
        InfMode::FiniteOnly => nan_pattern(spec),
        InfMode::Ieee => {
            let inf = ((1u64 << spec.exp_bits()) - 1) << spec.man_bits();
            inf | if negative {
                1u64 << (spec.width() - 1)
            } else {
                0
            }
        }
    }
}

/// Oracle minifloat result. Special values follow binary64 semantics on the
/// decoded operands (every preset decodes exactly into binary64, and no
/// operation on them overflows or underflows binary64); finite results are
/// rounded from exact rationals.
pub fn float_oracle(op: Op, a: MiniFloatBits, b: MiniFloatBits) -> u64 {
    let spec = a.spec();
    let (fa, fb) = (a.to_f64(), b.to_f64());
    let native = match op {
        Op::Add => fa + fb,
        Op::Sub => fa - fb,
        Op::Mul => fa * fb,
        Op::Div => fa / fb,
        Op::Sqrt => fa.sqrt(),
    };
    if native.is_nan() {
        return nan_pattern(spec);
    }
    if native.is_infinite() {
        return overflow_pattern(spec, native < 0.0);
    }
    let sign = 1u64 << (spec.width() - 1);
    if native == 0.0 {
        return if native.is_sign_negative() { sign } else { 0 };
    }
    let table = float_table(spec);
    let x = q_from_f64(fa);
    match op {
        Op::Sqrt => table.finish(table.round_magnitude(&|v| x.cmp(&(v * v))), false),
        _ => {
            let y = q_from_f64(fb);
            let exact = match op {
                Op::Add => x + y,
                Op::Sub => x - y,
                Op::Mul => x * y,
                Op::Div => x / y,
                Op::Sqrt => unreachable!(),
            };
            let negative = exact.is_negative();
            let mag = exact.abs();
            table.finish(table.round_magnitude(&|v| mag.cmp(v)), negative)
        }
    }
}

pub fn float_apply(op: Op, a: MiniFloatBits, b: MiniFloatBits) -> MiniFloatBits {
    match op {
        Op::Add => a.add(b),
        Op::Sub => a.sub(b),
        Op::Mul => a.mul(b),
        Op::Div => a.div(b),
        Op::Sqrt => a.sqrt(),
    }
}

// ------------------------------------------------------------ PRAU programs

pub mod programs {
    use positlab::posit::SignInjection;
    use positlab::prau::{ArithOp, CmpOp, Instruction};
    use positlab::{FormatSpec, PositBits, Quire};
    use rand::Rng;

    /// A random straight-line program over a few registers so results feed
    /// into later instructions.
    pub fn random_program(
        rng: &mut impl Rng,
        spec: FormatSpec,
        max_len: usize,
    ) -> Vec<Instruction> {
        let len = rng.gen_range(1..=max_len);
        let r = |rng: &mut dyn rand::RngCore| rng.gen_range(0..8u8);
        (0..len)
            .map(|_| match rng.gen_range(0..20) {
                0..=3 => Instruction::LoadPattern {
                    rd: r(rng),
                    pattern: rng.gen_range(0..=spec.mask()),
                },
                4 => Instruction::Arith {
                    op: ArithOp::Add,
                    rd: r(rng),
                    rs1: r(rng),
                    rs2: r(rng),
                },
                5 => Instruction::Arith {
                    op: ArithOp::Sub,
                    rd: r(rng),
                    rs1: r(rng),
                    rs2: r(rng),
                },
                6 => Instruction::Arith {
                    op: ArithOp::Mul,
                    rd: r(rng),
                    rs1: r(rng),
                    rs2: r(rng),
                },
                7 => Instruction::Arith {
                    op: ArithOp::Div,
                    rd: r(rng),
                    rs1: r(rng),
                    rs2: r(rng),
                },
                8 => Instruction::Sqrt {
                    rd: r(rng),
                    rs1: r(rng),
                },
                9 => Instruction::ToInt {
                    xd: r(rng),
                    rs1: r(rng),
                },
                10 => Instruction::FromInt {
                    rd: r(rng),
                    xs1: r(rng),
                },
                11 => Instruction::QClear,
                12 => Instruction::QNeg,
                13 => Instruction::QMadd {
                    rs1: r(rng),
                    rs2: r(rng),
                },
                14 => Instruction::QRound { rd: r(rng) },
                15 => Instruction::Move {
                    rd: r(rng),
                    rs1: r(rng),
                },
                16 => {
                    let mode = [
                        SignInjection::Copy,
                        SignInjection::Negate,
                        SignInjection::Xor,
                    ][rng.gen_range(0..3)];
                    Instruction::SignInject {
                        mode,
                        rd: r(rng),
                        rs1: r(rng),
                        rs2: r(rng),
                    }
                }
                17 => {
                    let op = [CmpOp::Eq, CmpOp::Lt, CmpOp::Le][rng.gen_range(0..3)];
                    Instruction::Compare {
                        op,
                        xd: r(rng),
                        rs1: r(rng),
                        rs2: r(rng),
                    }
                }
                18 => Instruction::LoadInt {
                    xd: r(rng),
                    imm: rng.gen_range(-100_000..100_000),
                },
                _ => Instruction::Halt,
            })
            .collect()
    }

    /// Final registers computed by calling the posit and quire operations
    /// directly, without the machine.
    pub struct Direct {
        pub p: Vec<PositBits>,
        pub x: Vec<i64>,
        pub q: Quire,
        pub executed: usize,
    }

    pub fn direct_eval(prog: &[Instruction], spec: FormatSpec) -> Direct {
        let mut d = Direct {
            p: vec![spec.zero(); 32],
            x: vec![0; 32],
            q: Quire::new(spec).unwrap(),
            executed: 0,
        };
        for ins in prog {
            d.executed += 1;
            match *ins {
                Instruction::LoadPattern { rd, pattern } => {
                    d.p[rd as usize] = PositBits::new(pattern as u64, spec).unwrap()
                }
                Instruction::Arith { op, rd, rs1, rs2 } => {
                    let (a, b) = (d.p[rs1 as usize], d.p[rs2 as usize]);
                    d.p[rd as usize] = match op {
                        ArithOp::Add => a.add(b),
                        ArithOp::Sub => a.sub(b),
                        ArithOp::Mul => a.mul(b),
                        ArithOp::Div => a.div(b),
                    }
                }
                Instruction::Sqrt { rd, rs1 } => d.p[rd as usize] = d.p[rs1 as usize].sqrt(),
                Instruction::ToInt { xd, rs1 } => {
                    d.x[xd as usize] = d.p[rs1 as usize].to_i32() as i64
                }
                Instruction::FromInt { rd, xs1 } => {
                    d.p[rd as usize] = PositBits::from_int(d.x[xs1 as usize] as i32 as i128, spec)
                }
                Instruction::QClear => d.q.clear(),
                Instruction::QNeg => d.q.negate(),
                Instruction::QMadd { rs1, rs2 } => d.q.mac(d.p[rs1 as usize], d.p[rs2 as usize]),
                Instruction::QRound { rd } => d.p[rd as usize] = d.q.round(),
                Instruction::Move { rd, rs1 } => d.p[rd as usize] = d.p[rs1 as usize],
                Instruction::SignInject { mode, rd, rs1, rs2 } => {
                    d.p[rd as usize] = d.p[rs1 as usize].sign_inject(d.p[rs2 as usize], mode)
                }
                Instruction::Compare { op, xd, rs1, rs2 } => {
                    let (a, b) = (d.p[rs1 as usize].signed(), d.p[rs2 as usize].signed());
                    d.x[xd as usize] = match op {
                        CmpOp::Eq => a == b,
                        CmpOp::Lt => a < b,
                        CmpOp::Le => a <= b,
                    } as i64
                }
                Instruction::LoadInt { xd, imm } => d.x[xd as usize] = imm,
                Instruction::Halt => break,
                Instruction::Bnez { .. } => unimplemented!("straight-line programs only"),
            }
        }
        d
    }
}
