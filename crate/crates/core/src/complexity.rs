//! Entropy estimators used to quantify the complexity of a series.
//!
//! All entropies are in nats. Shannon, Rényi and Tsallis entropies work on a
//! histogram of the values; permutation, sample and approximate entropy work on
//! the raw sequence.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Distinct-value count at or below which `Auto` binning counts exact values.
pub const AUTO_DISCRETE_LIMIT: usize = 100;

/// Default tolerance factor for sample/approximate entropy, `r = 0.15 * sd`.
pub const DEFAULT_TOLERANCE_FACTOR: f64 = 0.15;

/// Discretization used by the distribution-based estimators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BinningScheme {
    /// `Discrete` for series with at most 100 distinct values, otherwise
    /// `EqualWidth(ceil(sqrt(N)))`.
    #[default]
    Auto,
    /// One bin per distinct value.
    Discrete,
    /// `k` equal-width bins over `[min, max]`; the last bin is closed on the right.
    EqualWidth(usize),
}

impl BinningScheme {
    /// Resolves `Auto` against the series it will be applied to.
    pub fn resolve(self, x: &[f64]) -> BinningScheme {
        match self {
            BinningScheme::Auto => {
                if distinct_count(x) <= AUTO_DISCRETE_LIMIT {
                    BinningScheme::Discrete
                } else {
                    BinningScheme::EqualWidth((x.len() as f64).sqrt().ceil() as usize)
                }
            }
            other => other,
        }
    }
}

impl FromStr for BinningScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "auto" => Ok(BinningScheme::Auto),
            "discrete" => Ok(BinningScheme::Discrete),
            _ => {
                let k = s
                    .strip_prefix("width:")
                    .or_else(|| s.strip_prefix("equal-width:"))
                    .and_then(|k| k.parse::<usize>().ok())
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| {
                        Error::InvalidParameter(format!(
                            "binning `{s}` (expected auto, discrete or width:<k>)"
                        ))
                    })?;
                Ok(BinningScheme::EqualWidth(k))
            }
        }
    }
}

/// Matching tolerance for template-based estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    Absolute(f64),
    /// Multiple of the sample standard deviation of the analysed series.
    Relative(f64),
}

impl Tolerance {
    fn validate(self) -> Result<()> {
        let v = match self {
            Tolerance::Absolute(v) | Tolerance::Relative(v) => v,
        };
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "tolerance must be > 0, got {v}"
            )))
        }
    }

    /// Absolute radius for series `x`.
    pub fn radius(self, x: &[f64]) -> f64 {
        match self {
            Tolerance::Absolute(r) => r,
            Tolerance::Relative(f) => f * sample_sd(x),
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::Relative(DEFAULT_TOLERANCE_FACTOR)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Estimator {
    Shannon,
    Renyi { alpha: f64 },
    Tsallis { q: f64 },
    Permutation { order: usize, delay: usize },
    Sample { m: usize, r: Tolerance },
    Approximate { m: usize, r: Tolerance },
}

impl Estimator {
    pub fn validate(self) -> Result<()> {
        match self {
            Estimator::Shannon => Ok(()),
            Estimator::Renyi { alpha } => {
                if alpha > 0.0 && alpha != 1.0 && alpha.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!(
                        "renyi alpha must be > 0 and != 1, got {alpha}"
                    )))
                }
            }
            Estimator::Tsallis { q } => {
                if q != 1.0 && q.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!(
                        "tsallis q must be != 1, got {q}"
                    )))
                }
            }
            Estimator::Permutation { order, delay } => {
                if order >= 2 && delay >= 1 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!(
                        "permutation entropy needs order >= 2 and delay >= 1, got m={order} d={delay}"
                    )))
                }
            }
            Estimator::Sample { m, r } | Estimator::Approximate { m, r } => {
                if m == 0 {
                    return Err(Error::InvalidParameter(
                        "embedding dimension must be >= 1".into(),
                    ));
                }
                r.validate()
            }
        }
    }

    fn uses_histogram(self) -> bool {
        matches!(
            self,
            Estimator::Shannon | Estimator::Renyi { .. } | Estimator::Tsallis { .. }
        )
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Estimator::Shannon => write!(f, "shannon"),
            Estimator::Renyi { alpha } => write!(f, "renyi:{alpha}"),
            Estimator::Tsallis { q } => write!(f, "tsallis:{q}"),
            Estimator::Permutation { order, delay } => write!(f, "permutation:{order}:{delay}"),
            Estimator::Sample { m, r } => write!(f, "sample:{m}:{}", fmt_tol(r)),
            Estimator::Approximate { m, r } => write!(f, "approximate:{m}:{}", fmt_tol(r)),
        }
    }
}

fn fmt_tol(r: Tolerance) -> String {
    match r {
        Tolerance::Absolute(v) => format!("{v}"),
        Tolerance::Relative(v) => format!("{v}sd"),
    }
}

/// Parses `shannon`, `renyi:<alpha>`, `tsallis:<q>`, `permutation[:m[:d]]`,
/// `sample[:m[:r]]` and `approximate[:m[:r]]`. A tolerance ending in `sd`
/// is relative to the series standard deviation.
impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let mut parts = lower.split(':');
        let name = parts.next().unwrap_or_default();
        let args: Vec<&str> = parts.collect();
        let bad = || Error::InvalidParameter(format!("cannot parse entropy `{s}`"));
        let num = |i: usize, default: Option<f64>| -> Result<f64> {
            match args.get(i) {
                Some(a) => a.parse::<f64>().map_err(|_| bad()),
                None => default.ok_or_else(bad),
            }
        };
        let int = |i: usize, default: usize| -> Result<usize> {
            match args.get(i) {
                Some(a) => a.parse::<usize>().map_err(|_| bad()),
                None => Ok(default),
            }
        };
        let tol = |i: usize| -> Result<Tolerance> {
            match args.get(i) {
                None => Ok(Tolerance::default()),
                Some(a) => match a.strip_suffix("sd") {
                    Some(f) => f.parse().map(Tolerance::Relative).map_err(|_| bad()),
                    None => a.parse().map(Tolerance::Absolute).map_err(|_| bad()),
                },
            }
        };
        let est = match name {
            "shannon" => Estimator::Shannon,
            "renyi" => Estimator::Renyi {
                alpha: num(0, Some(2.0))?,
            },
            "tsallis" => Estimator::Tsallis {
                q: num(0, Some(2.0))?,
            },
            "permutation" | "perm" => Estimator::Permutation {
                order: int(0, 3)?,
                delay: int(1, 1)?,
            },
            "sample" | "sampen" => Estimator::Sample {
                m: int(0, 2)?,
                r: tol(1)?,
            },
            "approximate" | "apen" => Estimator::Approximate {
                m: int(0, 2)?,
                r: tol(1)?,
            },
            _ => return Err(bad()),
        };
        est.validate()?;
        Ok(est)
    }
}

/// Estimator plus the binning used by distribution-based estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropySpec {
    pub estimator: Estimator,
    pub binning: BinningScheme,
    /// Bin the coarse-grained series on the original's `[min, max]` edges when
    /// computing complexity-loss, instead of on its own range.
    pub shared_edges: bool,
}

impl Default for EntropySpec {
    fn default() -> Self {
        EntropySpec {
            estimator: Estimator::Shannon,
            binning: BinningScheme::Auto,
            shared_edges: false,
        }
    }
}

impl EntropySpec {
    pub fn new(estimator: Estimator) -> Self {
        EntropySpec {
            estimator,
            ..Default::default()
        }
    }

    pub fn with_binning(mut self, binning: BinningScheme) -> Self {
        self.binning = binning;
        self
    }

    /// Entropy of `x`, binned over its own range.
    pub fn entropy(&self, x: &[f64]) -> Result<f64> {
        self.entropy_in(x, self.binning.resolve(x), None)
    }

    /// Entropy of `x` with a resolved scheme and optional fixed histogram range.
    pub(crate) fn entropy_in(
        &self,
        x: &[f64],
        binning: BinningScheme,
        range: Option<(f64, f64)>,
    ) -> Result<f64> {
        if x.is_empty() {
            return Err(Error::EmptySeries);
        }
        self.estimator.validate()?;
        if self.estimator.uses_histogram() {
            let p = histogram_in_range(x, binning, range)?;
            return Ok(match self.estimator {
                Estimator::Shannon => shannon_of(&p),
                Estimator::Renyi { alpha } => renyi_of(&p, alpha),
                Estimator::Tsallis { q } => tsallis_of(&p, q),
                _ => unreachable!(),
            });
        }
        match self.estimator {
            Estimator::Permutation { order, delay } => permutation_entropy(x, order, delay),
            Estimator::Sample { m, r } => sample_entropy(x, m, r),
            Estimator::Approximate { m, r } => approximate_entropy(x, m, r),
            _ => unreachable!(),
        }
    }
}

fn distinct_count(x: &[f64]) -> usize {
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| a == b);
    v.len()
}

pub(crate) fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Sample standard deviation (n-1 denominator); zero for a single value.
pub(crate) fn sample_sd(x: &[f64]) -> f64 {
    if x.len() < 2 {
        return 0.0;
    }
    let m = mean(x);
    let ss: f64 = x.iter().map(|v| (v - m) * (v - m)).sum();
    (ss / (x.len() - 1) as f64).sqrt()
}

/// Probability of each bin. Discrete bins are ordered by value; empty
/// equal-width bins are kept as zeros.
pub fn histogram(x: &[f64], binning: BinningScheme) -> Result<Vec<f64>> {
    histogram_in_range(x, binning.resolve(x), None)
}

pub(crate) fn histogram_in_range(
    x: &[f64],
    binning: BinningScheme,
    range: Option<(f64, f64)>,
) -> Result<Vec<f64>> {
    if x.is_empty() {
        return Err(Error::EmptySeries);
    }
    let n = x.len() as f64;
    let counts: Vec<usize> = match binning.resolve(x) {
        BinningScheme::Discrete => {
            let mut v = x.to_vec();
            v.sort_by(f64::total_cmp);
            let mut counts: Vec<usize> = Vec::new();
            let mut prev: Option<f64> = None;
            for value in v {
                if prev == Some(value) {
                    *counts.last_mut().expect("non-empty") += 1;
                } else {
                    counts.push(1);
                    prev = Some(value);
                }
            }
            counts
        }
        BinningScheme::EqualWidth(k) => {
            if k == 0 {
                return Err(Error::InvalidParameter("bin count must be >= 1".into()));
            }
            let (lo, hi) = range.unwrap_or_else(|| {
                x.iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                        (lo.min(v), hi.max(v))
                    })
            });
            if hi <= lo {
                vec![x.len()]
            } else {
                let width = (hi - lo) / k as f64;
                let mut counts = vec![0usize; k];
                for &v in x {
                    let b = ((v - lo) / width).floor();
                    let b = if b < 0.0 { 0 } else { (b as usize).min(k - 1) };
                    counts[b] += 1;
                }
                counts
            }
        }
        BinningScheme::Auto => unreachable!("resolved above"),
    };
    Ok(counts.into_iter().map(|c| c as f64 / n).collect())
}

fn shannon_of(p: &[f64]) -> f64 {
    let h: f64 = p
        .iter()
        .filter(|&&pi| pi > 0.0)
        .map(|&pi| -pi * pi.ln())
        .sum();
    h.max(0.0)
}

fn renyi_of(p: &[f64], alpha: f64) -> f64 {
    let s: f64 = p
        .iter()
        .filter(|&&pi| pi > 0.0)
        .map(|&pi| pi.powf(alpha))
        .sum();
    (s.ln() / (1.0 - alpha)).max(0.0)
}

fn tsallis_of(p: &[f64], q: f64) -> f64 {
    let s: f64 = p.iter().filter(|&&pi| pi > 0.0).map(|&pi| pi.powf(q)).sum();
    ((1.0 - s) / (q - 1.0)).max(0.0)
}

pub fn shannon_entropy(x: &[f64], binning: BinningScheme) -> Result<f64> {
    Ok(shannon_of(&histogram(x, binning)?))
}

pub fn renyi_entropy(x: &[f64], alpha: f64, binning: BinningScheme) -> Result<f64> {
    Estimator::Renyi { alpha }.validate()?;
    Ok(renyi_of(&histogram(x, binning)?, alpha))
}

pub fn tsallis_entropy(x: &[f64], q: f64, binning: BinningScheme) -> Result<f64> {
    Estimator::Tsallis { q }.validate()?;
    Ok(tsallis_of(&histogram(x, binning)?, q))
}

/// Shannon entropy of the ordinal patterns of order `m` and delay `d`.
/// Equal values inside a window rank by position.
pub fn permutation_entropy(x: &[f64], m: usize, d: usize) -> Result<f64> {
    Estimator::Permutation { order: m, delay: d }.validate()?;
    let span = (m - 1) * d + 1;
    if x.len() < span {
        return Err(Error::TooShort {
            needed: span,
            got: x.len(),
        });
    }
    let windows = x.len() - span + 1;
    let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut pattern: Vec<usize> = Vec::with_capacity(m);
    for start in 0..windows {
        pattern.clear();
        pattern.extend(0..m);
        // stable sort keeps the earlier index lower on ties
        pattern.sort_by(|&a, &b| x[start + a * d].total_cmp(&x[start + b * d]));
        *counts.entry(pattern.clone()).or_insert(0) += 1;
    }
    let total = windows as f64;
    let p: Vec<f64> = counts.values().map(|&c| c as f64 / total).collect();
    Ok(shannon_of(&p))
}

fn chebyshev_within(x: &[f64], i: usize, j: usize, len: usize, r: f64) -> bool {
    (0..len).all(|k| (x[i + k] - x[j + k]).abs() <= r)
}

/// Sample entropy `-ln(A/B)` over the first `N - m` templates, self-matches
/// excluded. Zero matches at either length yields `Error::UndefinedEntropy`.
pub fn sample_entropy(x: &[f64], m: usize, r: Tolerance) -> Result<f64> {
    Estimator::Sample { m, r }.validate()?;
    let n = x.len();
    if n < m + 2 {
        return Err(Error::TooShort {
            needed: m + 2,
            got: n,
        });
    }
    let radius = r.radius(x);
    let templates = n - m;
    let mut b = 0u64;
    let mut a = 0u64;
    for i in 0..templates {
        for j in i + 1..templates {
            if chebyshev_within(x, i, j, m, radius) {
                b += 1;
                if (x[i + m] - x[j + m]).abs() <= radius {
                    a += 1;
                }
            }
        }
    }
    if a == 0 || b == 0 {
        return Err(Error::UndefinedEntropy {
            matches_m: 2 * b,
            matches_m1: 2 * a,
        });
    }
    Ok((b as f64 / a as f64).ln())
}

fn apen_phi(x: &[f64], m: usize, radius: f64) -> f64 {
    let count = x.len() - m + 1;
    let mut total = 0.0;
    for i in 0..count {
        let c = (0..count)
            .filter(|&j| chebyshev_within(x, i, j, m, radius))
            .count();
        total += (c as f64 / count as f64).ln();
    }
    total / count as f64
}

/// Approximate entropy `Phi^m(r) - Phi^{m+1}(r)`, self-matches included.
pub fn approximate_entropy(x: &[f64], m: usize, r: Tolerance) -> Result<f64> {
    Estimator::Approximate { m, r }.validate()?;
    if x.len() < m + 1 {
        return Err(Error::TooShort {
            needed: m + 1,
            got: x.len(),
        });
    }
    let radius = r.radius(x);
    Ok(apen_phi(x, m, radius) - apen_phi(x, m + 1, radius))
}
