use super::Complex64;
use crate::Error;

/// Error of a result vector against a reference, measured in binary64.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metrics {
    pub rmse: f64,
    pub max_abs_err: f64,
}

/// One row of benchmark output.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorReport {
    pub kernel: String,
    pub format: String,
    pub size: usize,
    pub seed: u64,
    pub rmse: f64,
    pub max_abs_err: f64,
}

impl ErrorReport {
    pub const CSV_HEADER: &'static str = "kernel,format,size,seed,rmse,max_abs_err";

    pub fn new(kernel: &str, format: &str, size: usize, seed: u64, m: Metrics) -> Self {
        ErrorReport {
            kernel: kernel.to_string(),
            format: format.to_string(),
            size,
            seed,
            rmse: m.rmse,
            max_abs_err: m.max_abs_err,
        }
    }

    /// Floats use Rust's shortest round-trip scientific notation.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:e},{:e}",
            self.kernel, self.format, self.size, self.seed, self.rmse, self.max_abs_err
        )
    }
}

/// `rmse = sqrt(mean |d|^2)` and `max_abs_err = max |d|` over element-wise
/// complex differences. A NaN element makes both NaN.
pub fn error_metrics(result: &[Complex64], reference: &[Complex64]) -> Result<Metrics, Error> {
    if result.len() != reference.len() {
        return Err(Error::LengthMismatch(result.len(), reference.len()));
    }
    if result.is_empty() {
        return Ok(Metrics {
            rmse: 0.0,
            max_abs_err: 0.0,
        });
    }
    let mut sum_sq = 0.0;
    let mut max = 0.0f64;
    for (r, e) in result.iter().zip(reference) {
        let d = Complex64::new(r.re - e.re, r.im - e.im);
        let sq = d.norm_sqr();
        sum_sq += sq;
        let abs = sq.sqrt();
        max = if abs.is_nan() || max.is_nan() {
            f64::NAN
        } else {
            max.max(abs)
        };
    }
    Ok(Metrics {
        rmse: (sum_sq / result.len() as f64).sqrt(),
        max_abs_err: max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(xs: &[f64]) -> Vec<Complex64> {
        xs.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    #[test]
    fn identical_vectors() {
        let v = real(&[1.0, -2.0, 3.5]);
        assert_eq!(
            error_metrics(&v, &v).unwrap(),
            Metrics {
                rmse: 0.0,
                max_abs_err: 0.0
            }
        );
    }

    #[test]
    fn one_element_off_by_one() {
        let m = error_metrics(&real(&[1.0, 2.0, 4.0, 4.0]), &real(&[1.0, 2.0, 3.0, 4.0])).unwrap();
        assert_eq!(
            m,
            Metrics {
                rmse: 0.5,
                max_abs_err: 1.0
            }
        );
    }

    #[test]
    fn complex_modulus() {
        let m = error_metrics(&[Complex64::new(3.0, 4.0)], &[Complex64::default()]).unwrap();
        assert_eq!(m.max_abs_err, 5.0);
    }

    #[test]
    fn nan_propagates() {
        let m = error_metrics(&real(&[f64::NAN, 0.0]), &real(&[0.0, 1.0])).unwrap();
        assert!(m.rmse.is_nan() && m.max_abs_err.is_nan());
    }

    #[test]
    fn length_mismatch() {
        assert_eq!(
            error_metrics(&real(&[1.0]), &[]),
            Err(Error::LengthMismatch(1, 0))
        );
    }

    #[test]
    fn csv_row_format() {
        let r = ErrorReport::new(
            "fft",
            "p16e2",
            4096,
            42,
            Metrics {
                rmse: 0.00125,
                max_abs_err: 0.5,
            },
        );
        assert_eq!(r.csv_row(), "fft,p16e2,4096,42,1.25e-3,5e-1");
    }
}
