use std::collections::HashMap;

use super::{ArithOp, CmpOp, Instruction, Program, REGISTERS};
use crate::posit::SignInjection;
use crate::Error;

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    P,
    X,
    Pattern,
    Int,
    Target,
}

fn signature(mnemonic: &str) -> Option<&'static [Kind]> {
    use Kind::*;
    Some(match mnemonic {
        "padd" | "psub" | "pmul" | "pdiv" | "psgnj" | "psgnjn" | "psgnjx" => &[P, P, P],
        "psqrt" | "pmv" | "qmadd" => &[P, P],
        "pcvt.w.p" => &[X, P],
        "pcvt.p.w" => &[P, X],
        "qclr" | "qneg" | "halt" => &[],
        "qround" => &[P],
        "peq" | "plt" | "ple" => &[X, P, P],
        "pli" => &[P, Pattern],
        "xli" => &[X, Int],
        "bnez" => &[X, Target],
        _ => return None,
    })
}

#[derive(Clone, Copy)]
enum Value {
    Reg(u8),
    Pattern(u32),
    Int(i64),
    Target(usize),
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Assembly {
        line,
        column,
        message: message.into(),
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

/// Byte offset to 1-based character column.
fn column_of(line: &str, offset: usize) -> usize {
    line[..offset].chars().count() + 1
}

fn trimmed_token<'a>(line: &'a str, start: usize, end: usize) -> Token<'a> {
    let raw = &line[start..end];
    let lead = raw.len() - raw.trim_start().len();
    Token {
        text: raw.trim(),
        column: column_of(line, start + lead),
    }
}

fn parse_register(tok: &Token, prefix: char, line: usize) -> Result<u8, Error> {
    let other = if prefix == 'p' { 'x' } else { 'p' };
    let kind = if prefix == 'p' { "posit" } else { "integer" };
    let digits = match tok.text.strip_prefix(prefix) {
        Some(d) => d,
        None if tok.text.starts_with(other) => {
            return Err(err(
                line,
                tok.column,
                format!("expected {kind} register, found `{}`", tok.text),
            ))
        }
        None => {
            return Err(err(
                line,
                tok.column,
                format!("expected {kind} register, found `{}`", tok.text),
            ))
        }
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(err(
            line,
            tok.column,
            format!("malformed register `{}`", tok.text),
        ));
    }
    match digits.parse::<usize>() {
        Ok(i) if i < REGISTERS => Ok(i as u8),
        _ => Err(err(
            line,
            tok.column,
            format!(
                "register `{}` out of range ({prefix}0-{prefix}{})",
                tok.text,
                REGISTERS - 1
            ),
        )),
    }
}

fn parse_unsigned(text: &str) -> Option<u64> {
    match text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
        Some(hex) if !hex.is_empty() && hex.bytes().all(|b| b.is_ascii_hexdigit()) => {
            u64::from_str_radix(hex, 16).ok()
        }
        Some(_) => None,
        None if !text.is_empty() && text.bytes().all(|b| b.is_ascii_digit()) => text.parse().ok(),
        None => None,
    }
}

fn parse_int(text: &str) -> Option<i64> {
    let (negative, body) = match text.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let mag = parse_unsigned(body)? as i128;
    let v = if negative { -mag } else { mag };
    i64::try_from(v).ok()
}

struct PendingLabel {
    index: usize,
    slot: usize,
    name: String,
    line: usize,
    column: usize,
}

/// Parses assembly text. One instruction per line; `#` starts a comment;
/// `name:` defines a label that `bnez` may target.
pub fn assemble(text: &str) -> Result<Program, Error> {
    let mut program = Program::default();
    let mut raw: Vec<[Value; 3]> = Vec::new();
    let mut mnemonics: Vec<&'static [Kind]> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut labels: HashMap<String, usize> = HashMap::new();
    let mut pending: Vec<PendingLabel> = Vec::new();

    for (idx, full) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = full.split('#').next().unwrap_or("");
        let mut start = 0;
        // Labels.
        loop {
            let rest = &line[start..];
            let Some(colon) = rest.find(':') else { break };
            let tok = trimmed_token(line, start, start + colon);
            if !is_ident(tok.text) {
                return Err(err(
                    line_no,
                    tok.column,
                    format!("malformed label `{}`", tok.text),
                ));
            }
            if labels.insert(tok.text.to_string(), raw.len()).is_some() {
                return Err(err(
                    line_no,
                    tok.column,
                    format!("duplicate label `{}`", tok.text),
                ));
            }
            start += colon + 1;
        }
        let body = &line[start..];
        if body.trim().is_empty() {
            continue;
        }
        let lead = body.len() - body.trim_start().len();
        let m_start = start + lead;
        let m_end = line[m_start..]
            .find(char::is_whitespace)
            .map_or(line.len(), |i| m_start + i);
        let mnemonic = &line[m_start..m_end];
        let m_col = column_of(line, m_start);
        let sig = signature(mnemonic)
            .ok_or_else(|| err(line_no, m_col, format!("unknown mnemonic `{mnemonic}`")))?;

        let mut operands: Vec<Token> = Vec::new();
        if !line[m_end..].trim().is_empty() {
            let mut s = m_end;
            for piece in line[m_end..].split(',') {
                operands.push(trimmed_token(line, s, s + piece.len()));
                s += piece.len() + 1;
            }
        }
        if operands.len() != sig.len() {
            return Err(err(
                line_no,
                m_col,
                format!(
                    "`{mnemonic}` takes {} operand(s), found {}",
                    sig.len(),
                    operands.len()
                ),
            ));
        }
        let mut values = [Value::Int(0); 3];
        for (slot, (tok, kind)) in operands.iter().zip(sig).enumerate() {
            if tok.text.is_empty() {
                return Err(err(line_no, tok.column, "missing operand"));
            }
            values[slot] = match kind {
                Kind::P => Value::Reg(parse_register(tok, 'p', line_no)?),
                Kind::X => Value::Reg(parse_register(tok, 'x', line_no)?),
                Kind::Pattern => match parse_unsigned(tok.text).and_then(|v| u32::try_from(v).ok())
                {
                    Some(v) => Value::Pattern(v),
                    None => {
                        return Err(err(
                            line_no,
                            tok.column,
                            format!("malformed immediate `{}`", tok.text),
                        ))
                    }
                },
                Kind::Int => match parse_int(tok.text) {
                    Some(v) => Value::Int(v),
                    None => {
                        return Err(err(
                            line_no,
                            tok.column,
                            format!("malformed immediate `{}`", tok.text),
                        ))
                    }
                },
                Kind::Target => {
                    if let Some(v) = parse_unsigned(tok.text) {
                        Value::Target(v as usize)
                    } else if is_ident(tok.text) {
                        pending.push(PendingLabel {
                            index: raw.len(),
                            slot,
                            name: tok.text.to_string(),
                            line: line_no,
                            column: tok.column,
                        });
                        Value::Target(0)
                    } else {
                        return Err(err(
                            line_no,
                            tok.column,
                            format!("malformed branch target `{}`", tok.text),
                        ));
                    }
                }
            };
        }
        raw.push(values);
        mnemonics.push(sig);
        names.push(mnemonic.to_string());
        program.lines.push(line_no);
    }

    for p in pending {
        let target = *labels
            .get(&p.name)
            .ok_or_else(|| err(p.line, p.column, format!("undefined label `{}`", p.name)))?;
        raw[p.index][p.slot] = Value::Target(target);
    }
    let len = raw.len();
    for (i, values) in raw.iter().enumerate() {
        if let Value::Target(t) = values[1] {
            if names[i] == "bnez" && t > len {
                return Err(err(
                    program.lines[i],
                    1,
                    format!("branch target {t} beyond program end {len}"),
                ));
            }
        }
        program.instructions.push(build(&names[i], values));
    }
    Ok(program)
}

fn build(mnemonic: &str, v: &[Value; 3]) -> Instruction {
    let reg = |i: usize| match v[i] {
        Value::Reg(r) => r,
        _ => unreachable!(),
    };
    let arith = |op| Instruction::Arith {
        op,
        rd: reg(0),
        rs1: reg(1),
        rs2: reg(2),
    };
    let sgn = |mode| Instruction::SignInject {
        mode,
        rd: reg(0),
        rs1: reg(1),
        rs2: reg(2),
    };
    let cmp = |op| Instruction::Compare {
        op,
        xd: reg(0),
        rs1: reg(1),
        rs2: reg(2),
    };
    match mnemonic {
        "padd" => arith(ArithOp::Add),
        "psub" => arith(ArithOp::Sub),
        "pmul" => arith(ArithOp::Mul),
        "pdiv" => arith(ArithOp::Div),
        "psqrt" => Instruction::Sqrt {
            rd: reg(0),
            rs1: reg(1),
        },
        "pcvt.w.p" => Instruction::ToInt {
            xd: reg(0),
            rs1: reg(1),
        },
        "pcvt.p.w" => Instruction::FromInt {
            rd: reg(0),
            xs1: reg(1),
        },
        "qclr" => Instruction::QClear,
        "qneg" => Instruction::QNeg,
        "qmadd" => Instruction::QMadd {
            rs1: reg(0),
            rs2: reg(1),
        },
        "qround" => Instruction::QRound { rd: reg(0) },
        "pmv" => Instruction::Move {
            rd: reg(0),
            rs1: reg(1),
        },
        "psgnj" => sgn(SignInjection::Copy),
        "psgnjn" => sgn(SignInjection::Negate),
        "psgnjx" => sgn(SignInjection::Xor),
        "peq" => cmp(CmpOp::Eq),
        "plt" => cmp(CmpOp::Lt),
        "ple" => cmp(CmpOp::Le),
        "pli" => match v[1] {
            Value::Pattern(pattern) => Instruction::LoadPattern {
                rd: reg(0),
                pattern,
            },
            _ => unreachable!(),
        },
        "xli" => match v[1] {
            Value::Int(imm) => Instruction::LoadInt { xd: reg(0), imm },
            _ => unreachable!(),
        },
        "halt" => Instruction::Halt,
        "bnez" => match v[1] {
            Value::Target(target) => Instruction::Bnez { xs: reg(0), target },
            _ => unreachable!(),
        },
        _ => unreachable!("signature table and builder disagree"),
    }
}
