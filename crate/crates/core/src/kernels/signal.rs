use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Complex64;
use crate::Error;

/// Real-valued test signals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Signal {
    /// Seeded uniform samples in `[-1, 1]`.
    Uniform,
    /// Heartbeat-like sum of Gaussian bumps with seeded jitter and noise.
    EcgSynth,
    /// 1 at index 0.
    Impulse,
    /// Constant 1.
    Dc,
}

// (relative position within a beat, amplitude, width as a fraction of the beat)
const ECG_WAVES: [(f64, f64, f64); 5] = [
    (0.20, 0.15, 0.025),  // P
    (0.37, -0.12, 0.008), // Q
    (0.40, 1.00, 0.010),  // R
    (0.43, -0.25, 0.010), // S
    (0.68, 0.35, 0.040),  // T
];

pub fn generate(kind: Signal, n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let real: Vec<f64> = match kind {
        Signal::Uniform => (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect(),
        Signal::Impulse => (0..n).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect(),
        Signal::Dc => vec![1.0; n],
        Signal::EcgSynth => {
            let beat = 200.0 * rng.gen_range(0.9..1.1);
            let mut out = vec![0.0; n];
            let mut onset = -beat * rng.gen_range(0.0..1.0);
            while onset < n as f64 {
                let len = beat * rng.gen_range(0.95..1.05);
                for &(pos, amp, width) in &ECG_WAVES {
                    let (centre, sigma) = (onset + pos * len, width * len);
                    let lo = (centre - 5.0 * sigma).floor().max(0.0) as usize;
                    let hi = ((centre + 5.0 * sigma).ceil().max(0.0) as usize).min(n);
                    for (i, v) in out.iter_mut().enumerate().take(hi).skip(lo) {
                        let z = (i as f64 - centre) / sigma;
                        *v += amp * libm::exp(-0.5 * z * z);
                    }
                }
                onset += len;
            }
            for v in &mut out {
                *v += 0.01 * rng.gen_range(-1.0..=1.0);
            }
            out
        }
    };
    real.into_iter().map(|x| Complex64::new(x, 0.0)).collect()
}

/// Seeded uniform `[-1, 1]` vector, as used for dot products.
pub fn uniform_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

impl fmt::Display for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Signal::Uniform => "uniform",
            Signal::EcgSynth => "ecg-synth",
            Signal::Impulse => "impulse",
            Signal::Dc => "dc",
        })
    }
}

impl FromStr for Signal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "uniform" => Ok(Signal::Uniform),
            "ecg-synth" => Ok(Signal::EcgSynth),
            "impulse" => Ok(Signal::Impulse),
            "dc" => Ok(Signal::Dc),
            _ => Err(Error::UnknownSignal(s.to_string())),
        }
    }
}
