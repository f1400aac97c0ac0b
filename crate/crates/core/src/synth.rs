//! Seeded white and 1/f noise.
//!
//! Random source: ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `SeedableRng::seed_from_u64(seed)`. Each uniform is built from one 64-bit
//! output `w` as `(w >> 11) * 2^-53`.
//!
//! Gaussian transform: Box-Muller on consecutive uniform pairs `(u1, u2)`, with
//! `u1` shifted to `(0, 1]` by adding `2^-53`; the pair yields
//! `sqrt(-2 ln u1) * cos(2 pi u2)` then `sqrt(-2 ln u1) * sin(2 pi u2)`.
//!
//! 1/f noise is shaped in the frequency domain: white Gaussian noise of length
//! `2^ceil(log2 n)` is transformed, every non-DC bin `k` is scaled by
//! `min(k, L-k)^(-1/2)`, DC is zeroed, the inverse transform is truncated to
//! `n` samples. Every series is finally standardized to sample mean 0 and
//! sample variance 1 (n-1 denominator).

use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::complexity::{mean, sample_sd};
use crate::error::{Error, Result};
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NoiseKind {
    White,
    OneOverF,
}

impl NoiseKind {
    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::White => "white",
            NoiseKind::OneOverF => "pink",
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "white" => Ok(NoiseKind::White),
            "pink" | "1/f" | "one-over-f" | "oneoverf" => Ok(NoiseKind::OneOverF),
            other => Err(Error::InvalidParameter(format!(
                "unknown noise kind `{other}` (expected white, pink or 1/f)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub n: usize,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, n: usize, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "noise length must be >= 2, got {n}"
            )));
        }
        Ok(NoiseSpec { kind, n, seed })
    }

    /// Series id used for generated files, e.g. `white-0007`.
    pub fn id(&self) -> String {
        format!("{}-{:04}", self.kind.name(), self.seed)
    }
}

const TWO_POW_M53: f64 = 1.0 / (1u64 << 53) as f64;

struct GaussianSource {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianSource {
    fn new(seed: u64) -> Self {
        GaussianSource {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * TWO_POW_M53
    }

    fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform() + TWO_POW_M53;
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        self.spare = Some(radius * theta.sin());
        radius * theta.cos()
    }
}

/// Raw i.i.d. standard normal draws, before standardization.
pub fn gaussian_draws(seed: u64, n: usize) -> Vec<f64> {
    let mut src = GaussianSource::new(seed);
    (0..n).map(|_| src.next()).collect()
}

fn standardize(mut x: Vec<f64>) -> Vec<f64> {
    let m = mean(&x);
    x.iter_mut().for_each(|v| *v -= m);
    let sd = sample_sd(&x);
    if sd > 0.0 {
        x.iter_mut().for_each(|v| *v /= sd);
    }
    let m = mean(&x);
    x.iter_mut().for_each(|v| *v -= m);
    x
}

fn one_over_f(seed: u64, n: usize) -> Vec<f64> {
    let len = n.next_power_of_two();
    let mut buf: Vec<Complex<f64>> = gaussian_draws(seed, len)
        .into_iter()
        .map(|re| Complex::new(re, 0.0))
        .collect();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(len).process(&mut buf);
    buf[0] = Complex::new(0.0, 0.0);
    for (k, c) in buf.iter_mut().enumerate().skip(1) {
        let f = k.min(len - k) as f64;
        *c *= f.powf(-0.5);
    }
    planner.plan_fft_inverse(len).process(&mut buf);
    buf.truncate(n);
    buf.into_iter().map(|c| c.re).collect()
}

/// Generates a standardized noise series; identical specs give identical bits.
pub fn gen_noise(spec: &NoiseSpec) -> Result<TimeSeries> {
    if spec.n < 2 {
        return Err(Error::InvalidParameter(format!(
            "noise length must be >= 2, got {}",
            spec.n
        )));
    }
    let raw = match spec.kind {
        NoiseKind::White => gaussian_draws(spec.seed, spec.n),
        NoiseKind::OneOverF => one_over_f(spec.seed, spec.n),
    };
    TimeSeries::new(spec.id(), standardize(raw))
}

/// Least-squares slope of log power against log frequency of the periodogram.
///
/// Uses positive frequencies `k = 1..=N/2`, dropping the two lowest bins and the
/// top 10% of bins. Only meaningful for broadband signals.
pub fn psd_slope(x: &[f64]) -> Result<f64> {
    let n = x.len();
    if n < 64 {
        return Err(Error::TooShort { needed: 64, got: n });
    }
    let m = mean(x);
    let mut buf: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v - m, 0.0)).collect();
    FftPlanner::<f64>::new()
        .plan_fft_forward(n)
        .process(&mut buf);
    let half = n / 2;
    let hi = half - half / 10;
    let (lx, ly): (Vec<f64>, Vec<f64>) = (3..=hi)
        .filter_map(|k| {
            let p = buf[k].norm_sqr();
            (p > 0.0).then(|| ((k as f64 / n as f64).ln(), p.ln()))
        })
        .unzip();
    if lx.len() < 2 {
        return Err(Error::TooShort { needed: 64, got: n });
    }
    let mx = mean(&lx);
    let my = mean(&ly);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    Ok(sxy / sxx)
}
