//! Functional model of a posit coprocessor: a 32-entry posit register file,
//! a quire, a comparison unit, and a small assembly language to drive them.

mod asm;
mod machine;

use std::fmt;

use crate::posit::SignInjection;

pub use asm::assemble;
pub use machine::{run, MachineState, RunOutcome, RunStatus, TraceEntry};

pub const REGISTERS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Eq,
    Lt,
    Le,
}

/// One instruction. `p` registers hold posits, `x` registers hold `i64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Instruction {
    /// `padd`/`psub`/`pmul`/`pdiv rd, rs1, rs2`
    Arith {
        op: ArithOp,
        rd: u8,
        rs1: u8,
        rs2: u8,
    },
    /// `psqrt rd, rs1`
    Sqrt {
        rd: u8,
        rs1: u8,
    },
    /// `pcvt.w.p xd, rs1`: round to a signed 32-bit integer.
    ToInt {
        xd: u8,
        rs1: u8,
    },
    /// `pcvt.p.w rd, xs1`: convert the low 32 bits of `xs1` as a signed word.
    FromInt {
        rd: u8,
        xs1: u8,
    },
    QClear,
    QNeg,
    /// `qmadd rs1, rs2`: `q += rs1 * rs2`.
    QMadd {
        rs1: u8,
        rs2: u8,
    },
    /// `qround rd`
    QRound {
        rd: u8,
    },
    /// `pmv rd, rs1`
    Move {
        rd: u8,
        rs1: u8,
    },
    /// `psgnj`/`psgnjn`/`psgnjx rd, rs1, rs2`
    SignInject {
        mode: SignInjection,
        rd: u8,
        rs1: u8,
        rs2: u8,
    },
    /// `peq`/`plt`/`ple xd, rs1, rs2`: 1 if the relation holds, else 0.
    Compare {
        op: CmpOp,
        xd: u8,
        rs1: u8,
        rs2: u8,
    },
    /// `pli rd, pattern`: load a raw posit pattern.
    LoadPattern {
        rd: u8,
        pattern: u32,
    },
    /// `xli xd, imm`
    LoadInt {
        xd: u8,
        imm: i64,
    },
    Halt,
    /// `bnez xs, target`: decrement `xs`, then branch if it is nonzero.
    Bnez {
        xs: u8,
        target: usize,
    },
}

impl Instruction {
    pub fn mnemonic(&self) -> &'static str {
        use Instruction::*;
        match self {
            Arith {
                op: ArithOp::Add, ..
            } => "padd",
            Arith {
                op: ArithOp::Sub, ..
            } => "psub",
            Arith {
                op: ArithOp::Mul, ..
            } => "pmul",
            Arith {
                op: ArithOp::Div, ..
            } => "pdiv",
            Sqrt { .. } => "psqrt",
            ToInt { .. } => "pcvt.w.p",
            FromInt { .. } => "pcvt.p.w",
            QClear => "qclr",
            QNeg => "qneg",
            QMadd { .. } => "qmadd",
            QRound { .. } => "qround",
            Move { .. } => "pmv",
            SignInject {
                mode: SignInjection::Copy,
                ..
            } => "psgnj",
            SignInject {
                mode: SignInjection::Negate,
                ..
            } => "psgnjn",
            SignInject {
                mode: SignInjection::Xor,
                ..
            } => "psgnjx",
            Compare { op: CmpOp::Eq, .. } => "peq",
            Compare { op: CmpOp::Lt, .. } => "plt",
            Compare { op: CmpOp::Le, .. } => "ple",
            LoadPattern { .. } => "pli",
            LoadInt { .. } => "xli",
            Halt => "halt",
            Bnez { .. } => "bnez",
        }
    }

    pub fn uses_quire(&self) -> bool {
        matches!(
            self,
            Instruction::QClear
                | Instruction::QNeg
                | Instruction::QMadd { .. }
                | Instruction::QRound { .. }
        )
    }
}

/// Canonical assembly text.
impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Instruction::*;
        let m = self.mnemonic();
        match *self {
            Arith { rd, rs1, rs2, .. } | SignInject { rd, rs1, rs2, .. } => {
                write!(f, "{m} p{rd}, p{rs1}, p{rs2}")
            }
            Sqrt { rd, rs1 } | Move { rd, rs1 } => write!(f, "{m} p{rd}, p{rs1}"),
            ToInt { xd, rs1 } => write!(f, "{m} x{xd}, p{rs1}"),
            FromInt { rd, xs1 } => write!(f, "{m} p{rd}, x{xs1}"),
            QClear | QNeg | Halt => f.write_str(m),
            QMadd { rs1, rs2 } => write!(f, "{m} p{rs1}, p{rs2}"),
            QRound { rd } => write!(f, "{m} p{rd}"),
            Compare { xd, rs1, rs2, .. } => write!(f, "{m} x{xd}, p{rs1}, p{rs2}"),
            LoadPattern { rd, pattern } => write!(f, "{m} p{rd}, 0x{pattern:X}"),
            LoadInt { xd, imm } => write!(f, "{m} x{xd}, {imm}"),
            Bnez { xs, target } => write!(f, "{m} x{xs}, {target}"),
        }
    }
}

/// An assembled program.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub instructions: Vec<Instruction>,
    /// 1-based source line of each instruction.
    pub lines: Vec<usize>,
}

impl Program {
    pub fn from_instructions(instructions: Vec<Instruction>) -> Self {
        let lines = (1..=instructions.len()).collect();
        Program {
            instructions,
            lines,
        }
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }
}

/// One instruction per line, branch targets as instruction indices.
impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ins in &self.instructions {
            writeln!(f, "{ins}")?;
        }
        Ok(())
    }
}
