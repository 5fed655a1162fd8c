use super::{Complex64, ComplexSample, NumberFormat};
use crate::Error;

const MIN_LEN: usize = 8;
const MAX_LEN: usize = 1 << 16;

fn check_len(n: usize) -> Result<(), Error> {
    if n.is_power_of_two() && (MIN_LEN..=MAX_LEN).contains(&n) {
        Ok(())
    } else {
        Err(Error::BadFftLength(n))
    }
}

/// Forward twiddles `exp(-2 pi i k / n)` for `k < n/2`, computed in binary64
/// and rounded once into the target format.
fn twiddles(n: usize, format: NumberFormat) -> Vec<ComplexSample> {
    (0..n / 2)
        .map(|k| {
            let theta = -2.0 * std::f64::consts::PI * k as f64 / n as f64;
            format.complex(Complex64::new(libm::cos(theta), libm::sin(theta)))
        })
        .collect()
}

fn bit_reverse<T>(data: &mut [T]) {
    let n = data.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            data.swap(i, j);
        }
    }
}

/// Iterative radix-2 decimation-in-time FFT with every butterfly operation
/// rounded in `format`.
pub fn fft(signal: &[ComplexSample], format: NumberFormat) -> Result<Vec<ComplexSample>, Error> {
    let n = signal.len();
    check_len(n)?;
    assert!(
        signal
            .iter()
            .all(|z| z.re.format() == format && z.im.format() == format),
        "signal must already be in {format}"
    );
    let w = twiddles(n, format);
    let mut data = signal.to_vec();
    bit_reverse(&mut data);
    let mut half = 1;
    while half < n {
        let stride = n / (2 * half);
        for start in (0..n).step_by(2 * half) {
            for k in 0..half {
                let t = w[k * stride].mul(data[start + k + half]);
                let u = data[start + k];
                data[start + k] = u.add(t);
                data[start + k + half] = u.sub(t);
            }
        }
        half *= 2;
    }
    Ok(data)
}

/// The same transform in binary64 on an unquantized signal.
pub fn fft_reference(signal: &[Complex64]) -> Result<Vec<Complex64>, Error> {
    let f = NumberFormat::Binary64;
    let input: Vec<ComplexSample> = signal.iter().map(|&z| f.complex(z)).collect();
    Ok(fft(&input, f)?
        .into_iter()
        .map(ComplexSample::to_complex64)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{generate, Signal};
    use crate::{FormatSpec, MiniFloatSpec};

    const P16: NumberFormat = NumberFormat::Posit(FormatSpec::P16E2);

    fn quantize(signal: &[Complex64], f: NumberFormat) -> Vec<ComplexSample> {
        signal.iter().map(|&z| f.complex(z)).collect()
    }

    #[test]
    fn rejects_bad_lengths() {
        for n in [0, 4, 12, 1 << 17] {
            let s = vec![P16.complex(Complex64::default()); n];
            assert_eq!(fft(&s, P16), Err(Error::BadFftLength(n)));
        }
    }

    #[test]
    fn dc_goes_to_bin_zero() {
        for f in [
            P16,
            NumberFormat::MiniFloat(MiniFloatSpec::FP16),
            NumberFormat::Binary64,
        ] {
            let n = 64;
            let out = fft(&quantize(&vec![Complex64::new(0.75, 0.0); n], f), f).unwrap();
            assert_eq!(out[0].to_complex64(), Complex64::new(48.0, 0.0));
            assert!(out[1..].iter().all(|z| z.to_complex64().norm_sqr() == 0.0));
        }
    }

    #[test]
    fn impulse_is_flat() {
        let mut s = vec![Complex64::default(); 128];
        s[0].re = 1.0;
        let out = fft(&quantize(&s, P16), P16).unwrap();
        assert!(out
            .iter()
            .all(|z| z.to_complex64() == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn single_tone_lands_in_its_bin() {
        let n = 32;
        let s: Vec<Complex64> = (0..n)
            .map(|j| {
                let t = 2.0 * std::f64::consts::PI * 3.0 * j as f64 / n as f64;
                Complex64::new(t.cos(), t.sin())
            })
            .collect();
        let out = fft_reference(&s).unwrap();
        for (k, z) in out.iter().enumerate() {
            let want = if k == 3 { n as f64 } else { 0.0 };
            assert!(
                (z.re - want).abs() < 1e-12 && z.im.abs() < 1e-12,
                "bin {k}: {z:?}"
            );
        }
    }

    #[test]
    fn parseval_in_reference_format() {
        let s = generate(Signal::Uniform, 4096, 42);
        let out = fft_reference(&s).unwrap();
        let time: f64 = s.iter().map(|z| z.norm_sqr()).sum();
        let freq: f64 = out.iter().map(|z| z.norm_sqr()).sum::<f64>() / 4096.0;
        assert!(((time - freq) / time).abs() < 1e-9);
    }

    #[test]
    fn reference_equals_binary64_pipeline() {
        let s = generate(Signal::EcgSynth, 256, 5);
        let via_format = fft(
            &quantize(&s, NumberFormat::Binary64),
            NumberFormat::Binary64,
        )
        .unwrap();
        let reference = fft_reference(&s).unwrap();
        for (a, b) in via_format.iter().zip(&reference) {
            assert_eq!(a.to_complex64(), *b);
        }
    }

    #[test]
    fn deterministic() {
        let s = quantize(&generate(Signal::Uniform, 256, 9), P16);
        assert_eq!(fft(&s, P16).unwrap(), fft(&s, P16).unwrap());
    }
}
