use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{ArithOp, CmpOp, Instruction, Program, REGISTERS};
use crate::posit::{FormatSpec, PositBits};
use crate::quire::Quire;
use crate::Error;

/// Architectural state plus execution counters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MachineState {
    pub spec: FormatSpec,
    pub pregs: [PositBits; REGISTERS],
    pub xregs: [i64; REGISTERS],
    /// Absent for formats without a quire (`es != 2`).
    pub quire: Option<Quire>,
    pub pc: usize,
    pub retired: u64,
    pub halted: bool,
    /// Retired instructions per mnemonic. Each costs one unit.
    pub counts: BTreeMap<&'static str, u64>,
}

/// One retired instruction and the register it wrote.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub step: u64,
    pub pc: usize,
    pub mnemonic: &'static str,
    /// `p3`, `x1`, `q`, or empty for `halt`.
    pub dest: String,
    pub value_hex: String,
}

impl TraceEntry {
    pub const CSV_HEADER: &'static str = "step,pc,mnemonic,dest,value_hex";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.step, self.pc, self.mnemonic, self.dest, self.value_hex
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    /// Reached `halt` or ran off the end of the program.
    Halted,
    /// Stopped after `limit` instructions; the state is partial.
    LimitExceeded { limit: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub state: MachineState,
    pub trace: Vec<TraceEntry>,
    pub status: RunStatus,
}

fn xhex(v: i64) -> String {
    format!("0x{:016X}", v as u64)
}

impl MachineState {
    pub fn new(spec: FormatSpec) -> Self {
        MachineState {
            spec,
            pregs: [spec.zero(); REGISTERS],
            xregs: [0; REGISTERS],
            quire: Quire::new(spec).ok(),
            pc: 0,
            retired: 0,
            halted: false,
            counts: BTreeMap::new(),
        }
    }

    /// Total cost under the one-unit-per-instruction model.
    pub fn cost(&self) -> u64 {
        self.retired
    }

    fn p(&self, r: u8) -> PositBits {
        self.pregs[r as usize]
    }

    fn set_p(&mut self, r: u8, v: PositBits) -> (String, String) {
        self.pregs[r as usize] = v;
        (format!("p{r}"), v.to_hex())
    }

    fn set_x(&mut self, r: u8, v: i64) -> (String, String) {
        self.xregs[r as usize] = v;
        (format!("x{r}"), xhex(v))
    }

    fn quire_write(&mut self, f: impl FnOnce(&mut Quire)) -> (String, String) {
        match self.quire.as_mut() {
            Some(q) => {
                f(q);
                ("q".into(), q.to_hex())
            }
            None => ("q".into(), String::new()),
        }
    }

    /// Executes one instruction and returns the trace record for it.
    pub fn step(&mut self, ins: &Instruction) -> TraceEntry {
        use Instruction::*;
        let pc = self.pc;
        let mut next = pc + 1;
        let (dest, value_hex) = match *ins {
            Arith { op, rd, rs1, rs2 } => {
                let (a, b) = (self.p(rs1), self.p(rs2));
                let v = match op {
                    ArithOp::Add => a + b,
                    ArithOp::Sub => a - b,
                    ArithOp::Mul => a * b,
                    ArithOp::Div => a / b,
                };
                self.set_p(rd, v)
            }
            Sqrt { rd, rs1 } => {
                let v = self.p(rs1).sqrt();
                self.set_p(rd, v)
            }
            ToInt { xd, rs1 } => {
                let v = self.p(rs1).to_i32() as i64;
                self.set_x(xd, v)
            }
            FromInt { rd, xs1 } => {
                let v = PositBits::from_int(self.xregs[xs1 as usize] as i32 as i128, self.spec);
                self.set_p(rd, v)
            }
            QClear => self.quire_write(Quire::clear),
            QNeg => self.quire_write(Quire::negate),
            QMadd { rs1, rs2 } => {
                let (a, b) = (self.p(rs1), self.p(rs2));
                self.quire_write(|q| q.mac(a, b))
            }
            QRound { rd } => {
                let v = self.quire.as_ref().map_or(self.spec.nar(), Quire::round);
                self.set_p(rd, v)
            }
            Move { rd, rs1 } => {
                let v = self.p(rs1);
                self.set_p(rd, v)
            }
            SignInject { mode, rd, rs1, rs2 } => {
                let v = self.p(rs1).sign_inject(self.p(rs2), mode);
                self.set_p(rd, v)
            }
            Compare { op, xd, rs1, rs2 } => {
                let ord = self.p(rs1).compare(self.p(rs2));
                let holds = match op {
                    CmpOp::Eq => ord == Ordering::Equal,
                    CmpOp::Lt => ord == Ordering::Less,
                    CmpOp::Le => ord != Ordering::Greater,
                };
                self.set_x(xd, holds as i64)
            }
            LoadPattern { rd, pattern } => {
                let v = PositBits::from_bits_truncate(pattern as u64, self.spec);
                self.set_p(rd, v)
            }
            LoadInt { xd, imm } => self.set_x(xd, imm),
            Halt => {
                self.halted = true;
                next = pc;
                (String::new(), String::new())
            }
            Bnez { xs, target } => {
                let v = self.xregs[xs as usize].wrapping_sub(1);
                if v != 0 {
                    next = target;
                }
                self.set_x(xs, v)
            }
        };
        let entry = TraceEntry {
            step: self.retired,
            pc,
            mnemonic: ins.mnemonic(),
            dest,
            value_hex,
        };
        self.pc = next;
        self.retired += 1;
        *self.counts.entry(ins.mnemonic()).or_default() += 1;
        entry
    }

    /// Registers as hex plus exact decimal, then the quire and counters.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        writeln!(out, "format {}", self.spec).unwrap();
        writeln!(
            out,
            "pc {} retired {} halted {}",
            self.pc, self.retired, self.halted
        )
        .unwrap();
        for (i, p) in self.pregs.iter().enumerate() {
            writeln!(
                out,
                "p{i:<2} {} {}",
                p.to_hex(),
                p.value().to_decimal_string()
            )
            .unwrap();
        }
        for (i, x) in self.xregs.iter().enumerate() {
            writeln!(out, "x{i:<2} {} {x}", xhex(*x)).unwrap();
        }
        match &self.quire {
            Some(q) => writeln!(out, "{}", q.dump()).unwrap(),
            None => writeln!(out, "quire unavailable").unwrap(),
        }
        let counts: Vec<String> = self
            .counts
            .iter()
            .map(|(m, c)| format!("{m}={c}"))
            .collect();
        writeln!(out, "counts {}", counts.join(" ")).unwrap();
        out
    }
}

/// Runs `program` from a cleared state until `halt`, the end of the program,
/// or `limit` retired instructions.
///
/// Rejects, before executing anything, `pli` patterns wider than the format
/// and quire instructions in formats without a quire.
pub fn run(program: &Program, spec: FormatSpec, limit: u64) -> Result<RunOutcome, Error> {
    assert!(limit >= 1, "run limit must be at least 1");
    for ins in &program.instructions {
        match *ins {
            Instruction::LoadPattern { pattern, .. } => {
                PositBits::new(pattern as u64, spec)?;
            }
            _ if ins.uses_quire() && spec.es() != 2 => {
                return Err(Error::QuireUnsupported(spec.to_string()))
            }
            _ => {}
        }
    }
    let mut state = MachineState::new(spec);
    let mut trace = Vec::new();
    let status = loop {
        if state.halted || state.pc >= program.len() {
            break RunStatus::Halted;
        }
        if state.retired >= limit {
            break RunStatus::LimitExceeded { limit };
        }
        let ins = program.instructions[state.pc];
        trace.push(state.step(&ins));
    };
    Ok(RunOutcome {
        state,
        trace,
        status,
    })
}
