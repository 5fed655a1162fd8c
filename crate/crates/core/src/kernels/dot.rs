use super::{ErrorReport, Metrics, NumberFormat, Scalar};
use crate::{Error, ExactValue};

/// Result of a dot product together with its exact reference.
#[derive(Clone, Debug, PartialEq)]
pub struct DotOutcome {
    pub value: Scalar,
    /// The exact dot product rounded once into the format.
    pub oracle: Scalar,
    pub exact: ExactValue,
    /// `|value - exact|`.
    pub abs_err: f64,
}

impl DotOutcome {
    pub const CSV_HEADER: &'static str =
        "kernel,format,size,seed,rmse,max_abs_err,result_hex,oracle_hex";

    pub fn report(&self, kernel: &str, size: usize, seed: u64) -> ErrorReport {
        let m = Metrics {
            rmse: self.abs_err,
            max_abs_err: self.abs_err,
        };
        ErrorReport::new(kernel, &self.value.format().name(), size, seed, m)
    }

    pub fn csv_row(&self, kernel: &str, size: usize, seed: u64) -> String {
        format!(
            "{},{},{}",
            self.report(kernel, size, seed).csv_row(),
            self.value.to_hex(),
            self.oracle.to_hex()
        )
    }
}

/// Dot product of two vectors already in `format`. Without the quire every
/// product and every partial sum is rounded; with it, products accumulate
/// exactly and the sum is rounded once.
pub fn dot(
    a: &[Scalar],
    b: &[Scalar],
    format: NumberFormat,
    use_quire: bool,
) -> Result<DotOutcome, Error> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    assert!(
        a.iter().chain(b).all(|x| x.format() == format),
        "vectors must already be in {format}"
    );
    let value = if use_quire {
        format.quire_dot(a, b)?
    } else {
        a.iter()
            .zip(b)
            .fold(format.zero(), |acc, (x, y)| acc.add(x.mul(*y)))
    };
    let exact = a.iter().zip(b).fold(ExactValue::Zero, |acc, (x, y)| {
        acc.add(&x.decode().mul(&y.decode()))
    });
    let abs_err = value.decode().sub(&exact).abs().to_f64();
    Ok(DotOutcome {
        value,
        oracle: format.encode(&exact),
        exact,
        abs_err,
    })
}
