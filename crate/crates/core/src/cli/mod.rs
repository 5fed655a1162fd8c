//! Command-line front end. Every subcommand writes CSV or plain text and is
//! deterministic given its flags.
//!
//! Exit status: 0 on success, 1 for usage errors, 2 when a computation guard
//! (run limit, table width, pattern width) stops the command.

mod inspect;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::kernels::{
    accuracy_profile, dot, error_metrics, fft, fft_reference, generate, uniform_vector, Complex64,
    DotOutcome, ErrorReport, NumberFormat, ProfilePoint, Scalar, Signal,
};
use crate::prau::{assemble, run as run_program, RunStatus, TraceEntry};
use crate::{Error, FormatSpec};

pub use inspect::inspect;

/// Largest format width `table` will enumerate exhaustively.
pub const TABLE_MAX_BITS: u32 = 10;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Parser, Debug)]
#[command(
    name = "positlab",
    version,
    about = "Posit and narrow-float arithmetic lab"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Break a bit pattern into its fields and print its value.
    Inspect {
        #[arg(long)]
        format: NumberFormat,
        /// Pattern in hex (0x...) or decimal.
        #[arg(long)]
        bits: String,
    },
    /// Accuracy (decimal digits) across each format's dynamic range.
    Profile {
        #[arg(long, value_delimiter = ',', required = true)]
        formats: Vec<NumberFormat>,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
        points_per_decade: u32,
        #[command(flatten)]
        out: OutArg,
    },
    /// FFT error of each format against a binary64 reference.
    Fft {
        #[arg(long, default_value_t = 4096)]
        size: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        formats: Vec<NumberFormat>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value = "uniform")]
        signal: Signal,
        #[command(flatten)]
        out: OutArg,
    },
    /// Dot product error against the exact result.
    Dot {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        formats: Vec<NumberFormat>,
        /// Accumulate in the quire and round once.
        #[arg(long, overrides_with = "no_quire")]
        quire: bool,
        /// Round every product and partial sum (default).
        #[arg(long)]
        no_quire: bool,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Operation table: every operand pair, or a seeded sample with --sample.
    Table {
        #[arg(long)]
        format: NumberFormat,
        #[arg(long)]
        op: TableOp,
        /// Emit N seeded random pairs instead of the full input space.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run a coprocessor assembly program and dump the final state.
    Run {
        program: PathBuf,
        #[arg(long, default_value = "p16e2")]
        format: FormatSpec,
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        limit: u64,
        /// Write the execution trace as CSV to this path.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct OutArg {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableOp {
    Add,
    Sub,
    Mul,
    Div,
    Sqrt,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn guard(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PatternTooWide { .. } => Failure::guard(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                1
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    if let Err(f) = configure_threads() {
        let _ = writeln!(stderr, "error: {}", f.message);
        return f.code;
    }
    match execute(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("POSITLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v.parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
        Failure::usage(format!(
            "POSITLAB_THREADS must be a positive integer, got `{v}`"
        ))
    })?;
    // Already configured when called more than once in one process.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn emit(out: &OutArg, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match &out.out {
        Some(path) => write_file(path, text),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Failure::usage(format!("cannot write output: {e}"))),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn csv(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for r in rows {
        s.push_str(&r);
        s.push('\n');
    }
    s
}

fn execute(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Inspect { format, bits } => {
            let text = inspect(format, &bits)?;
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::usage(e.to_string()))
        }
        Command::Profile {
            formats,
            points_per_decade,
            out,
        } => {
            let per_format: Vec<Vec<ProfilePoint>> = formats
                .par_iter()
                .map(|&f| accuracy_profile(f, points_per_decade))
                .collect();
            let rows = per_format.iter().flatten().map(ProfilePoint::csv_row);
            emit(&out, &csv(ProfilePoint::CSV_HEADER, rows), stdout)
        }
        Command::Fft {
            size,
            formats,
            seed,
            signal,
            out,
        } => {
            let reports = fft_reports(size, &formats, seed, signal)?;
            emit(
                &out,
                &csv(
                    ErrorReport::CSV_HEADER,
                    reports.iter().map(ErrorReport::csv_row),
                ),
                stdout,
            )
        }
        Command::Dot {
            n,
            formats,
            quire,
            no_quire,
            seed,
            out,
        } => {
            let use_quire = quire && !no_quire;
            let rows = dot_rows(n, &formats, use_quire, seed)?;
            emit(&out, &csv(DotOutcome::CSV_HEADER, rows), stdout)
        }
        Command::Table {
            format,
            op,
            sample,
            seed,
            out,
        } => {
            let text = table(format, op, sample, seed)?;
            if let Some(k) = sample {
                // The CSV has no seed column, so report it alongside.
                let _ = writeln!(stderr, "sampled {k} inputs of {format} with seed {seed}");
            }
            emit(&out, &text, stdout)
        }
        Command::Run {
            program,
            format,
            limit,
            trace,
        } => {
            let text = std::fs::read_to_string(&program)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", program.display())))?;
            let prog = assemble(&text)
                .map_err(|e| Failure::usage(format!("{}: {e}", program.display())))?;
            let outcome = run_program(&prog, format, limit)?;
            if let Some(path) = trace {
                write_file(
                    &path,
                    &csv(
                        TraceEntry::CSV_HEADER,
                        outcome.trace.iter().map(TraceEntry::csv_row),
                    ),
                )?;
            }
            stdout
                .write_all(outcome.state.dump().as_bytes())
                .map_err(|e| Failure::usage(e.to_string()))?;
            match outcome.status {
                RunStatus::Halted => Ok(()),
                RunStatus::LimitExceeded { limit } => Err(Failure::guard(format!(
                    "instruction limit {limit} reached; state above is partial"
                ))),
            }
        }
    }
}

/// One FFT report per format, in the order given.
pub fn fft_reports(
    size: usize,
    formats: &[NumberFormat],
    seed: u64,
    signal: Signal,
) -> Result<Vec<ErrorReport>, Error> {
    let input = generate(signal, size, seed);
    let reference = fft_reference(&input)?;
    formats
        .par_iter()
        .map(|&f| {
            let quantized: Vec<_> = input.iter().map(|&z| f.complex(z)).collect();
            let out: Vec<Complex64> = fft(&quantized, f)?
                .into_iter()
                .map(|z| z.to_complex64())
                .collect();
            let m = error_metrics(&out, &reference)?;
            Ok(ErrorReport::new("fft", &f.name(), size, seed, m))
        })
        .collect()
}

/// The seeded operand vectors used by `dot`, as binary64.
pub fn dot_inputs(n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = uniform_vector(n, &mut rng);
    let b = uniform_vector(n, &mut rng);
    (a, b)
}

fn dot_rows(
    n: usize,
    formats: &[NumberFormat],
    use_quire: bool,
    seed: u64,
) -> Result<Vec<String>, Error> {
    if use_quire {
        if let Some(f) = formats
            .iter()
            .find(|f| !matches!(f, NumberFormat::Posit(s) if s.es() == 2))
        {
            return Err(Error::QuireUnsupported(f.name()));
        }
    }
    let (a, b) = dot_inputs(n, seed);
    let kernel = if use_quire { "dot-quire" } else { "dot" };
    formats
        .par_iter()
        .map(|&f| {
            let qa: Vec<Scalar> = a.iter().map(|&x| f.from_f64(x)).collect();
            let qb: Vec<Scalar> = b.iter().map(|&x| f.from_f64(x)).collect();
            Ok(dot(&qa, &qb, f, use_quire)?.csv_row(kernel, n, seed))
        })
        .collect()
}

fn table(
    format: NumberFormat,
    op: TableOp,
    sample: Option<usize>,
    seed: u64,
) -> Result<String, Failure> {
    let width = format.width();
    if sample.is_none() && width > TABLE_MAX_BITS {
        return Err(Failure::guard(format!(
            "refusing to enumerate all inputs of the {width}-bit format {format} (limit {TABLE_MAX_BITS} bits); \
             use --sample N for a seeded random sample"
        )));
    }
    if format == NumberFormat::Binary64 {
        return Err(Failure::usage(
            "tables are available for posit and minifloat formats only",
        ));
    }
    let count = 1u64 << width;
    let unary = op == TableOp::Sqrt;
    let pairs: Vec<(u64, u64)> = match sample {
        Some(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..k)
                .map(|_| {
                    (
                        rng.gen_range(0..count),
                        if unary { 0 } else { rng.gen_range(0..count) },
                    )
                })
                .collect()
        }
        None if unary => (0..count).map(|a| (a, 0)).collect(),
        None => (0..count)
            .flat_map(|a| (0..count).map(move |b| (a, b)))
            .collect(),
    };
    let rows: Vec<String> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let (x, y) = (
                format.from_bits(a).expect("in range"),
                format.from_bits(b).expect("in range"),
            );
            let r = match op {
                TableOp::Add => x.add(y),
                TableOp::Sub => x.sub(y),
                TableOp::Mul => x.mul(y),
                TableOp::Div => x.div(y),
                TableOp::Sqrt => x.sqrt(),
            };
            let b_hex = if unary { String::new() } else { y.to_hex() };
            format!("{},{b_hex},{}", x.to_hex(), r.to_hex())
        })
        .collect();
    Ok(csv("a_hex,b_hex,result_hex", rows))
}
