//! Posit arithmetic with quire, narrow IEEE-like float emulation, a functional
//! model of a posit coprocessor, and kernels for comparing number formats.

pub mod cli;
pub mod error;
pub mod exact;
pub mod kernels;
pub mod minifloat;
pub mod posit;
pub mod prau;
pub mod quire;

pub use error::Error;
pub use exact::{Dyadic, ExactValue};
pub use minifloat::{MiniFloatBits, MiniFloatSpec};
pub use posit::{FormatSpec, PositBits};
pub use quire::Quire;
