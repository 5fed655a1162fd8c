use std::fmt::Write as _;

use crate::kernels::NumberFormat;
use crate::minifloat::{MfValue, MiniFloatBits, MiniFloatSpec};
use crate::posit::{decode, parse_pattern, DecodedPosit, FormatSpec, PositBits};
use crate::{Error, ExactValue};

fn binary(bits: u64, width: u32) -> String {
    format!("{bits:0w$b}", w = width as usize)
}

/// `[hi:lo]` bit span, or `[i]` for one bit, or `[]` when empty.
fn span(hi_exclusive: u32, len: u32) -> String {
    match len {
        0 => "[]".to_string(),
        1 => format!("[{}]", hi_exclusive - 1),
        _ => format!("[{}:{}]", hi_exclusive - 1, hi_exclusive - len),
    }
}

fn field(bits: u64, lo: u32, len: u32) -> String {
    if len == 0 {
        return String::new();
    }
    binary((bits >> lo) & ((1u64 << len) - 1), len)
}

fn exact_form(v: &ExactValue) -> String {
    match v {
        ExactValue::Zero => "0".into(),
        ExactValue::NaR => "NaR".into(),
        ExactValue::Finite(d) => {
            let sign = if d.is_negative() { "-" } else { "" };
            format!("{sign}{} * 2^{}", d.significand(), d.exp2())
        }
    }
}

fn value_lines(out: &mut String, v: &ExactValue) {
    writeln!(out, "exact {}", exact_form(v)).unwrap();
    writeln!(out, "decimal {}", v.to_decimal_string()).unwrap();
}

pub fn inspect(format: NumberFormat, bits_text: &str) -> Result<String, Error> {
    let bits = parse_pattern(bits_text)?;
    match format {
        NumberFormat::Posit(spec) => inspect_posit(PositBits::new(bits, spec)?),
        NumberFormat::MiniFloat(spec) => inspect_minifloat(MiniFloatBits::new(bits, spec)?),
        NumberFormat::Binary64 => Err(Error::UnknownFormat("binary64 cannot be inspected".into())),
    }
}

fn inspect_posit(p: PositBits) -> Result<String, Error> {
    let spec: FormatSpec = p.spec();
    let n = spec.n();
    let bits = p.bits() as u64;
    let mut out = String::new();
    writeln!(out, "format {spec} (n={n}, es={})", spec.es()).unwrap();
    writeln!(out, "bits {} = {}", p.to_hex(), binary(bits, n)).unwrap();
    match decode(p) {
        DecodedPosit::Zero => writeln!(out, "class zero").unwrap(),
        DecodedPosit::NaR => writeln!(out, "class NaR (not a real)").unwrap(),
        DecodedPosit::Finite(f) => {
            let r_lo = n - 1 - f.regime_len;
            let e_lo = r_lo - f.exponent_len;
            let regime = field(bits, r_lo, f.regime_len);
            let exponent = field(bits, e_lo, f.exponent_len);
            let fraction = field(bits, 0, f.fraction_len);
            writeln!(
                out,
                "class {}",
                if f.sign { "negative" } else { "positive" }
            )
            .unwrap();
            writeln!(
                out,
                "fields S|R|E|F = {}|{regime}|{exponent}|{fraction}",
                f.sign as u8
            )
            .unwrap();
            writeln!(out, "sign {} bits{}", f.sign as u8, span(n, 1)).unwrap();
            writeln!(
                out,
                "regime {regime} bits{} k={} r={}",
                span(n - 1, f.regime_len),
                f.run_length,
                f.regime
            )
            .unwrap();
            let truncated = if f.exponent_len < spec.es() {
                " (missing bits read as 0)"
            } else {
                ""
            };
            writeln!(
                out,
                "exponent {exponent} bits{} e={}{truncated}",
                span(r_lo, f.exponent_len),
                f.exponent
            )
            .unwrap();
            writeln!(
                out,
                "fraction {fraction} bits{} f={}/{}",
                span(e_lo, f.fraction_len),
                f.fraction,
                1u64 << f.fraction_len
            )
            .unwrap();
        }
    }
    value_lines(&mut out, &p.value());
    Ok(out)
}

fn inspect_minifloat(x: MiniFloatBits) -> Result<String, Error> {
    let spec: MiniFloatSpec = x.spec();
    let (w, e, m) = (spec.width(), spec.exp_bits(), spec.man_bits());
    let bits = x.bits() as u64;
    let mut out = String::new();
    writeln!(
        out,
        "format {spec} (exp_bits={e}, man_bits={m}, bias={})",
        spec.bias()
    )
    .unwrap();
    writeln!(out, "bits {} = {}", x.to_hex(), binary(bits, w)).unwrap();
    let (exponent, mantissa) = (field(bits, m, e), field(bits, 0, m));
    writeln!(
        out,
        "fields S|E|M = {}|{exponent}|{mantissa}",
        x.sign_bit() as u8
    )
    .unwrap();
    let class = match x.classify() {
        MfValue::Zero { negative } => if negative { "negative zero" } else { "zero" }.to_string(),
        MfValue::Infinite { negative } => if negative {
            "negative infinity"
        } else {
            "infinity"
        }
        .to_string(),
        MfValue::NaN => "NaN".to_string(),
        MfValue::Finite(_) if (bits >> m) & ((1 << e) - 1) == 0 => "subnormal".to_string(),
        MfValue::Finite(_) => "normal".to_string(),
    };
    writeln!(out, "class {class}").unwrap();
    writeln!(out, "sign {} bits{}", x.sign_bit() as u8, span(w, 1)).unwrap();
    writeln!(out, "exponent {exponent} bits{}", span(w - 1, e)).unwrap();
    writeln!(out, "mantissa {mantissa} bits{}", span(m, m)).unwrap();
    match x.classify() {
        MfValue::Finite(_) | MfValue::Zero { .. } => value_lines(&mut out, &x.to_exact()),
        MfValue::Infinite { negative } => {
            writeln!(out, "decimal {}inf", if negative { "-" } else { "" }).unwrap()
        }
        MfValue::NaN => writeln!(out, "decimal NaN").unwrap(),
    }
    Ok(out)
}
