use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid posit format p{n}e{es}: need 3 <= n <= 32 and 0 <= es <= 4")]
    InvalidPositFormat { n: u32, es: u32 },
    #[error("invalid float format (exp_bits={exp_bits}, man_bits={man_bits}): need exp_bits >= 2, man_bits >= 1, total <= 32 bits")]
    InvalidMiniFloatFormat { exp_bits: u32, man_bits: u32 },
    #[error("unknown format `{0}`")]
    UnknownFormat(String),
    #[error("pattern {pattern:#x} is wider than {width} bits")]
    PatternTooWide { pattern: u64, width: u32 },
    #[error("malformed pattern `{0}`")]
    BadPattern(String),
    #[error("quire unsupported for {0}: the quire requires es = 2")]
    QuireUnsupported(String),
    #[error("FFT length {0} must be a power of two between 8 and 65536")]
    BadFftLength(usize),
    #[error("unknown signal `{0}` (expected uniform, ecg-synth, impulse or dc)")]
    UnknownSignal(String),
    #[error("line {line}, column {column}: {message}")]
    Assembly {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("vector lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
}
