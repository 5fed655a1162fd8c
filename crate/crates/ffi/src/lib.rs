//! C ABI for positlab.
//!
//! Every fallible function returns a [`PlStatus`]. On failure a message is
//! stored per thread and can be copied out with [`pl_last_error`]. Objects
//! with state (quires, programs, run results) are opaque handles that must be
//! released with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use positlab::minifloat::InfMode;
use positlab::prau::{self, RunOutcome, RunStatus, REGISTERS};
use positlab::{Error, FormatSpec, MiniFloatBits, MiniFloatSpec, PositBits, Quire};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidFormat = 2,
    PatternTooWide = 3,
    QuireUnsupported = 4,
    InvalidUtf8 = 5,
    Assembly = 6,
    OutOfRange = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlOp {
    Add = 0,
    Sub = 1,
    Mul = 2,
    Div = 3,
}

/// Posit format: `n` bits, `es` exponent bits.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct PlPositFormat {
    pub n: u32,
    pub es: u32,
}

/// Narrow float format. `finite_only` selects the FP8E4M3 style encoding
/// without infinities.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct PlFloatFormat {
    pub exp_bits: u32,
    pub man_bits: u32,
    pub finite_only: bool,
}

pub struct PlQuire(Quire);

pub struct PlProgram(prau::Program);

pub struct PlRun(RunOutcome);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(message: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = message);
}

fn fail(status: PlStatus, message: impl Into<String>) -> PlStatus {
    set_error(message.into());
    status
}

fn from_error(e: Error) -> PlStatus {
    let status = match e {
        Error::InvalidPositFormat { .. }
        | Error::InvalidMiniFloatFormat { .. }
        | Error::UnknownFormat(_) => PlStatus::InvalidFormat,
        Error::PatternTooWide { .. } | Error::BadPattern(_) => PlStatus::PatternTooWide,
        Error::QuireUnsupported(_) => PlStatus::QuireUnsupported,
        Error::Assembly { .. } => PlStatus::Assembly,
        _ => PlStatus::OutOfRange,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), PlStatus>) -> PlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PlStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(PlStatus::Panic, "internal panic"),
    }
}

fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, PlStatus> {
    // SAFETY: callers pass either null or a valid, writable pointer.
    unsafe { p.as_mut() }.ok_or_else(|| fail(PlStatus::NullPointer, "null pointer argument"))
}

fn in_ref<'a, T>(p: *const T) -> Result<&'a T, PlStatus> {
    // SAFETY: callers pass either null or a pointer from this library.
    unsafe { p.as_ref() }.ok_or_else(|| fail(PlStatus::NullPointer, "null pointer argument"))
}

fn posit_spec(f: PlPositFormat) -> Result<FormatSpec, PlStatus> {
    FormatSpec::new(f.n, f.es).map_err(from_error)
}

fn posit(bits: u32, spec: FormatSpec) -> Result<PositBits, PlStatus> {
    PositBits::new(bits as u64, spec).map_err(from_error)
}

fn float_spec(f: PlFloatFormat) -> Result<MiniFloatSpec, PlStatus> {
    let mode = if f.finite_only {
        InfMode::FiniteOnly
    } else {
        InfMode::Ieee
    };
    MiniFloatSpec::with_options(f.exp_bits, f.man_bits, None, mode).map_err(from_error)
}

fn float(bits: u32, spec: MiniFloatSpec) -> Result<MiniFloatBits, PlStatus> {
    MiniFloatBits::new(bits as u64, spec).map_err(from_error)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length excluding the NUL.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn pl_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_posit_binary(
    fmt: PlPositFormat,
    op: PlOp,
    a: u32,
    b: u32,
    out: *mut u32,
) -> PlStatus {
    guard(|| {
        let out = out_ref(out)?;
        let spec = posit_spec(fmt)?;
        let (a, b) = (posit(a, spec)?, posit(b, spec)?);
        *out = match op {
            PlOp::Add => a + b,
            PlOp::Sub => a - b,
            PlOp::Mul => a * b,
            PlOp::Div => a / b,
        }
        .bits();
        Ok(())
    })
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_posit_sqrt(fmt: PlPositFormat, a: u32, out: *mut u32) -> PlStatus {
    guard(|| {
        let out = out_ref(out)?;
        let spec = posit_spec(fmt)?;
        *out = posit(a, spec)?.sqrt().bits();
        Ok(())
    })
}

/// Writes -1, 0 or 1. NaR orders below every other value.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_posit_compare(
    fmt: PlPositFormat,
    a: u32,
    b: u32,
    out: *mut i32,
) -> PlStatus {
    guard(|| {
        let out = out_ref(out)?;
        let spec = posit_spec(fmt)?;
        *out = posit(a, spec)?.compare(posit(b, spec)?) as i32;
        Ok(())
    })
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_posit_from_f64(fmt: PlPositFormat, x: f64, out: *mut u32) -> PlStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = PositBits::from_f64(x, posit_spec(fmt)?).bits();
        Ok(())
    })
}

/// NaR converts to NaN.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_posit_to_f64(fmt: PlPositFormat, a: u32, out: *mut f64) -> PlStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = posit(a, posit_spec(fmt)?)?.to_f64();
        Ok(())
    })
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_float_binary(
    fmt: PlFloatFormat,
    op: PlOp,
    a: u32,
    b: u32,
    out: *mut u32,
) -> PlStatus {
    guard(|| {
        let out = out_ref(out)?;
        let spec = float_spec(fmt)?;
        let (a, b) = (float(a, spec)?, float(b, spec)?);
        *out = match op {
            PlOp::Add => a.add(b),
            PlOp::Sub => a.sub(b),
            PlOp::Mul => a.mul(b),
            PlOp::Div => a.div(b),
        }
        .bits();
        Ok(())
    })
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_float_sqrt(fmt: PlFloatFormat, a: u32, out: *mut u32) -> PlStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = float(a, float_spec(fmt)?)?.sqrt().bits();
        Ok(())
    })
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_float_from_f64(fmt: PlFloatFormat, x: f64, out: *mut u32) -> PlStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = MiniFloatBits::from_f64(x, float_spec(fmt)?).bits();
        Ok(())
    })
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_float_to_f64(fmt: PlFloatFormat, a: u32, out: *mut f64) -> PlStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = float(a, float_spec(fmt)?)?.to_f64();
        Ok(())
    })
}

/// Creates a cleared quire. Only `es = 2` formats have one.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_quire_new(fmt: PlPositFormat, out: *mut *mut PlQuire) -> PlStatus {
    guard(|| {
        let out = out_ref(out)?;
        let q = Quire::new(posit_spec(fmt)?).map_err(from_error)?;
        *out = Box::into_raw(Box::new(PlQuire(q)));
        Ok(())
    })
}

/// # Safety
/// `q` must be null or a handle from [`pl_quire_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pl_quire_free(q: *mut PlQuire) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

/// # Safety
/// `q` must be null or a live quire handle.
#[no_mangle]
pub unsafe extern "C" fn pl_quire_clear(q: *mut PlQuire) -> PlStatus {
    guard(|| {
        out_ref(q)?.0.clear();
        Ok(())
    })
}

/// # Safety
/// `q` must be null or a live quire handle.
#[no_mangle]
pub unsafe extern "C" fn pl_quire_negate(q: *mut PlQuire) -> PlStatus {
    guard(|| {
        out_ref(q)?.0.negate();
        Ok(())
    })
}

/// Adds the exact product `a * b`.
///
/// # Safety
/// `q` must be null or a live quire handle.
#[no_mangle]
pub unsafe extern "C" fn pl_quire_mac(q: *mut PlQuire, a: u32, b: u32) -> PlStatus {
    guard(|| {
        let q = out_ref(q)?;
        let spec = q.0.spec();
        let (a, b) = (posit(a, spec)?, posit(b, spec)?);
        q.0.mac(a, b);
        Ok(())
    })
}

/// Rounds the quire once to the nearest posit.
///
/// # Safety
/// `q` must be null or a live quire handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_quire_round(q: *const PlQuire, out: *mut u32) -> PlStatus {
    guard(|| {
        let q = in_ref(q)?;
        *out_ref(out)? = q.0.round().bits();
        Ok(())
    })
}

/// Assembles NUL-terminated program text.
///
/// # Safety
/// `text` must be null or a NUL-terminated string; `out` null or valid.
#[no_mangle]
pub unsafe extern "C" fn pl_program_assemble(
    text: *const c_char,
    out: *mut *mut PlProgram,
) -> PlStatus {
    guard(|| {
        let out = out_ref(out)?;
        if text.is_null() {
            return Err(fail(PlStatus::NullPointer, "null pointer argument"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| fail(PlStatus::InvalidUtf8, e.to_string()))?;
        let program = prau::assemble(text).map_err(from_error)?;
        *out = Box::into_raw(Box::new(PlProgram(program)));
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a handle from [`pl_program_assemble`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pl_program_free(p: *mut PlProgram) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Runs a program from a fresh machine until `halt`, the end of the program,
/// or `limit` retired instructions.
///
/// # Safety
/// `program` must be null or a live program handle; `out` null or valid.
#[no_mangle]
pub unsafe extern "C" fn pl_run(
    program: *const PlProgram,
    fmt: PlPositFormat,
    limit: u64,
    out: *mut *mut PlRun,
) -> PlStatus {
    guard(|| {
        let program = in_ref(program)?;
        let out = out_ref(out)?;
        let outcome = prau::run(&program.0, posit_spec(fmt)?, limit).map_err(from_error)?;
        *out = Box::into_raw(Box::new(PlRun(outcome)));
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a handle from [`pl_run`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pl_run_free(r: *mut PlRun) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Writes 1 if the run stopped normally, 0 if it hit the instruction limit.
///
/// # Safety
/// `r` must be null or a live run handle; `out` null or valid.
#[no_mangle]
pub unsafe extern "C" fn pl_run_halted(r: *const PlRun, out: *mut bool) -> PlStatus {
    guard(|| {
        let r = in_ref(r)?;
        *out_ref(out)? = matches!(r.0.status, RunStatus::Halted);
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a live run handle; `out` null or valid.
#[no_mangle]
pub unsafe extern "C" fn pl_run_retired(r: *const PlRun, out: *mut u64) -> PlStatus {
    guard(|| {
        let r = in_ref(r)?;
        *out_ref(out)? = r.0.state.retired;
        Ok(())
    })
}

fn register(index: u32) -> Result<usize, PlStatus> {
    let i = index as usize;
    if i < REGISTERS {
        Ok(i)
    } else {
        Err(fail(
            PlStatus::OutOfRange,
            format!("register index {index} out of range 0..{REGISTERS}"),
        ))
    }
}

/// # Safety
/// `r` must be null or a live run handle; `out` null or valid.
#[no_mangle]
pub unsafe extern "C" fn pl_run_preg(r: *const PlRun, index: u32, out: *mut u32) -> PlStatus {
    guard(|| {
        let r = in_ref(r)?;
        *out_ref(out)? = r.0.state.pregs[register(index)?].bits();
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a live run handle; `out` null or valid.
#[no_mangle]
pub unsafe extern "C" fn pl_run_xreg(r: *const PlRun, index: u32, out: *mut i64) -> PlStatus {
    guard(|| {
        let r = in_ref(r)?;
        *out_ref(out)? = r.0.state.xregs[register(index)?];
        Ok(())
    })
}

/// Copies the final machine state dump into `buf` like [`pl_last_error`] and
/// stores the full length in `needed`.
///
/// # Safety
/// `r` must be null or a live run handle; `buf` null or `len` writable bytes;
/// `needed` null or valid.
#[no_mangle]
pub unsafe extern "C" fn pl_run_dump(
    r: *const PlRun,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> PlStatus {
    guard(|| {
        let r = in_ref(r)?;
        let needed = out_ref(needed)?;
        let dump = r.0.state.dump();
        if !buf.is_null() && len > 0 {
            let n = dump.len().min(len - 1);
            ptr::copy_nonoverlapping(dump.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        *needed = dump.len();
        Ok(())
    })
}
