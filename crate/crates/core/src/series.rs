//! Time series, attention-observation selection and the coarse-graining operators.
//!
//! Multiscale (MS) coarse-graining averages consecutive non-overlapping blocks of
//! `tau` observations. Attention-scale generalises it: a selector marks a subset of
//! positions as attention observations, every `tau`-th of those closes a segment,
//! and each segment is replaced by its mean. Selecting every position reproduces MS.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest accepted quantization precision, in decimal places.
pub const MAX_PRECISION: u8 = 12;

/// An identified sequence of finite observations, `N >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    id: String,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(id: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(TimeSeries {
            id: id.into(),
            values,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

impl AsRef<[f64]> for TimeSeries {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

/// Integer scale factor `tau >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ScaleFactor(usize);

impl ScaleFactor {
    pub const ONE: ScaleFactor = ScaleFactor(1);

    pub fn new(tau: usize) -> Result<Self> {
        if tau == 0 {
            return Err(Error::InvalidParameter("scale factor must be >= 1".into()));
        }
        Ok(ScaleFactor(tau))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl TryFrom<usize> for ScaleFactor {
    type Error = Error;

    fn try_from(tau: usize) -> Result<Self> {
        ScaleFactor::new(tau)
    }
}

impl fmt::Display for ScaleFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Attention-observation selector.
///
/// `Occurrence` and `Median` compare values for equality; `precision` rounds
/// values to that many decimal places first (`None` compares exactly).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttentionKind {
    /// Every observation (MS).
    All,
    /// Strict local extrema (PAS).
    Peak,
    /// Positions holding the most frequent value (OAS, also called FAS).
    Occurrence { precision: Option<u8> },
    /// Positions holding the median of the distinct values (MAS).
    Median { precision: Option<u8> },
}

impl AttentionKind {
    pub const OCCURRENCE: AttentionKind = AttentionKind::Occurrence { precision: None };
    pub const MEDIAN: AttentionKind = AttentionKind::Median { precision: None };

    /// The four selectors in figure-column order, with the given precision
    /// applied to the value-equality selectors.
    pub fn all_methods(precision: Option<u8>) -> [AttentionKind; 4] {
        [
            AttentionKind::All,
            AttentionKind::Peak,
            AttentionKind::Occurrence { precision },
            AttentionKind::Median { precision },
        ]
    }

    /// Short method name: `ms`, `pas`, `oas` or `mas`.
    pub fn name(self) -> &'static str {
        match self {
            AttentionKind::All => "ms",
            AttentionKind::Peak => "pas",
            AttentionKind::Occurrence { .. } => "oas",
            AttentionKind::Median { .. } => "mas",
        }
    }

    /// Returns the same selector with `precision` set, where it applies.
    pub fn with_precision(self, precision: Option<u8>) -> Result<Self> {
        if let Some(p) = precision {
            if p > MAX_PRECISION {
                return Err(Error::InvalidParameter(format!(
                    "precision {p} exceeds {MAX_PRECISION} decimal places"
                )));
            }
        }
        Ok(match self {
            AttentionKind::Occurrence { .. } => AttentionKind::Occurrence { precision },
            AttentionKind::Median { .. } => AttentionKind::Median { precision },
            other => other,
        })
    }
}

impl fmt::Display for AttentionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AttentionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ms" | "all" => Ok(AttentionKind::All),
            "pas" | "peak" => Ok(AttentionKind::Peak),
            "oas" | "fas" | "occurrence" => Ok(AttentionKind::OCCURRENCE),
            "mas" | "median" => Ok(AttentionKind::MEDIAN),
            other => Err(Error::InvalidParameter(format!(
                "unknown method `{other}` (expected ms, pas, oas, fas or mas)"
            ))),
        }
    }
}

/// Strictly increasing 1-based positions of attention observations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttentionIndexSet {
    indices: Vec<usize>,
}

impl AttentionIndexSet {
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Output of a coarse-graining operator.
#[derive(Debug, Clone, PartialEq)]
pub struct CoarseSeries {
    pub values: Vec<f64>,
    pub source_len: usize,
    pub tau: ScaleFactor,
    pub kind: AttentionKind,
    /// Length `t_i` of the segment averaged into each output value.
    pub block_sizes: Vec<usize>,
}

impl CoarseSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl AsRef<[f64]> for CoarseSeries {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

/// Rounds `v` to `precision` decimal places; exact comparison keeps `v` as is.
/// Negative zero is folded into zero so that equality is by value.
fn quantize(v: f64, precision: Option<u8>) -> f64 {
    let q = match precision {
        None => v,
        Some(p) => {
            let scale = 10f64.powi(i32::from(p));
            (v * scale).round() / scale
        }
    };
    if q == 0.0 {
        0.0
    } else {
        q
    }
}

fn positions_equal_to(values: &[f64], precision: Option<u8>, target: f64) -> Vec<usize> {
    values
        .iter()
        .enumerate()
        .filter(|(_, &v)| quantize(v, precision).total_cmp(&target) == Ordering::Equal)
        .map(|(i, _)| i + 1)
        .collect()
}

/// Sorted quantized values with their multiplicities.
fn distinct_counts(values: &[f64], precision: Option<u8>) -> Vec<(f64, usize)> {
    let mut q: Vec<f64> = values.iter().map(|&v| quantize(v, precision)).collect();
    q.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, usize)> = Vec::new();
    for v in q {
        match out.last_mut() {
            Some((last, n)) if last.total_cmp(&v) == Ordering::Equal => *n += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

/// Selects the attention observations of `x` under `kind`.
pub fn select_attention(x: &TimeSeries, kind: AttentionKind) -> Result<AttentionIndexSet> {
    let v = x.values();
    let n = v.len();
    let indices: Vec<usize> = match kind {
        AttentionKind::All => (1..=n).collect(),
        AttentionKind::Peak => {
            if n < 3 {
                return Err(Error::TooShort { needed: 3, got: n });
            }
            // (x_k - x_{k-1})(x_k - x_{k+1}) > 0 holds at strict maxima and minima.
            (1..n - 1)
                .filter(|&k| (v[k] - v[k - 1]) * (v[k] - v[k + 1]) > 0.0)
                .map(|k| k + 1)
                .collect()
        }
        AttentionKind::Occurrence { precision } => {
            let counts = distinct_counts(v, precision);
            // Ascending order plus strict `>` keeps the smallest value on ties.
            let mut mode = counts[0];
            for &(value, count) in &counts[1..] {
                if count > mode.1 {
                    mode = (value, count);
                }
            }
            positions_equal_to(v, precision, mode.0)
        }
        AttentionKind::Median { precision } => {
            let counts = distinct_counts(v, precision);
            let median = counts[(counts.len() - 1) / 2].0;
            positions_equal_to(v, precision, median)
        }
    };
    if indices.is_empty() {
        return Err(Error::EmptySelection { kind: kind.name() });
    }
    Ok(AttentionIndexSet { indices })
}

/// Mean of a non-empty block, clamped to the block's own range so rounding in
/// the sum cannot push it outside `[min, max]`.
fn block_mean(block: &[f64]) -> f64 {
    let sum: f64 = block.iter().sum();
    let mean = sum / block.len() as f64;
    let (lo, hi) = block
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &b| {
            (lo.min(b), hi.max(b))
        });
    mean.clamp(lo, hi)
}

/// Multiscale coarse-graining: means of consecutive blocks of length `tau`,
/// trailing `N mod tau` observations discarded.
pub fn coarse_grain_ms(x: &TimeSeries, tau: ScaleFactor) -> Result<CoarseSeries> {
    let t = tau.get();
    let n = x.len();
    if t > n {
        return Err(Error::EmptyOutput { tau: t, len: n });
    }
    let values: Vec<f64> = x.values().chunks_exact(t).map(block_mean).collect();
    let block_sizes = vec![t; values.len()];
    Ok(CoarseSeries {
        values,
        source_len: n,
        tau,
        kind: AttentionKind::All,
        block_sizes,
    })
}

/// Attention-scale coarse-graining.
///
/// With `I_0 = 0` and `I_k` the position of the k-th attention observation,
/// output value `i` is the mean of `x[I_{(i-1)tau}+1 ..= I_{i tau}]` for
/// `1 <= i <= floor(M / tau)`. Observations past the last boundary are dropped.
pub fn coarse_grain_attention(
    x: &TimeSeries,
    kind: AttentionKind,
    tau: ScaleFactor,
) -> Result<CoarseSeries> {
    let selected = select_attention(x, kind)?;
    coarse_grain_with_indices(x, &selected, kind, tau)
}

/// Coarse-grains `x` using an already computed attention set.
pub fn coarse_grain_with_indices(
    x: &TimeSeries,
    selected: &AttentionIndexSet,
    kind: AttentionKind,
    tau: ScaleFactor,
) -> Result<CoarseSeries> {
    let t = tau.get();
    let m = selected.len();
    if m < t {
        return Err(Error::InsufficientAttention { found: m, tau: t });
    }
    let v = x.values();
    let segments = m / t;
    let mut values = Vec::with_capacity(segments);
    let mut block_sizes = Vec::with_capacity(segments);
    let mut start = 0usize;
    for i in 1..=segments {
        let end = selected.indices[i * t - 1];
        values.push(block_mean(&v[start..end]));
        block_sizes.push(end - start);
        start = end;
    }
    Ok(CoarseSeries {
        values,
        source_len: v.len(),
        tau,
        kind,
        block_sizes,
    })
}

/// Coarse-grains with the operator matching `kind`: `coarse_grain_ms` for
/// `All`, attention-scale otherwise.
pub fn coarse_grain(x: &TimeSeries, kind: AttentionKind, tau: ScaleFactor) -> Result<CoarseSeries> {
    match kind {
        AttentionKind::All => coarse_grain_ms(x, tau),
        _ => coarse_grain_attention(x, kind, tau),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(v: &[f64]) -> TimeSeries {
        TimeSeries::new("t", v.to_vec()).unwrap()
    }

    fn tau(t: usize) -> ScaleFactor {
        ScaleFactor::new(t).unwrap()
    }

    #[test]
    fn rejects_invalid_series() {
        assert!(matches!(
            TimeSeries::new("e", vec![]),
            Err(Error::EmptySeries)
        ));
        assert!(matches!(
            TimeSeries::new("n", vec![1.0, f64::NAN]),
            Err(Error::NonFinite { index: 1 })
        ));
        assert!(TimeSeries::new("i", vec![f64::INFINITY]).is_err());
        assert!(ScaleFactor::new(0).is_err());
    }

    #[test]
    fn select_all() {
        let s = select_attention(&ts(&[5.0, 5.0, 5.0]), AttentionKind::All).unwrap();
        assert_eq!(s.indices(), &[1, 2, 3]);
    }

    #[test]
    fn select_peaks_takes_maxima_and_minima() {
        let s =
            select_attention(&ts(&[1.0, 3.0, 2.0, 4.0, 3.0, 5.0]), AttentionKind::Peak).unwrap();
        assert_eq!(s.indices(), &[2, 3, 4, 5]);
    }

    #[test]
    fn select_peaks_errors() {
        assert!(matches!(
            select_attention(&ts(&[1.0, 2.0]), AttentionKind::Peak),
            Err(Error::TooShort { needed: 3, got: 2 })
        ));
        assert!(matches!(
            select_attention(&ts(&[1.0, 2.0, 3.0, 4.0]), AttentionKind::Peak),
            Err(Error::EmptySelection { kind: "pas" })
        ));
        // plateaus are not extrema
        assert!(select_attention(&ts(&[1.0, 2.0, 2.0, 1.0]), AttentionKind::Peak).is_err());
    }

    #[test]
    fn select_occurrence_and_median() {
        let x = ts(&[1.0, 2.0, 2.0, 3.0, 2.0, 1.0]);
        let o = select_attention(&x, AttentionKind::OCCURRENCE).unwrap();
        assert_eq!(o.indices(), &[2, 3, 5]);
        let m = select_attention(&x, AttentionKind::MEDIAN).unwrap();
        assert_eq!(m.indices(), &[2, 3, 5]);
    }

    #[test]
    fn occurrence_tie_takes_smallest_value() {
        let x = ts(&[3.0, 1.0, 3.0, 1.0, 2.0]);
        let o = select_attention(&x, AttentionKind::OCCURRENCE).unwrap();
        assert_eq!(o.indices(), &[2, 4]);
    }

    #[test]
    fn median_even_distinct_takes_lower_middle() {
        let x = ts(&[4.0, 1.0, 3.0, 2.0, 3.0]);
        let m = select_attention(&x, AttentionKind::MEDIAN).unwrap();
        assert_eq!(m.indices(), &[4]);
    }

    #[test]
    fn quantized_equality() {
        let x = ts(&[0.101, 0.5, 0.099, 0.7, 0.1]);
        assert_eq!(
            select_attention(&x, AttentionKind::OCCURRENCE)
                .unwrap()
                .indices(),
            &[3]
        );
        let k = AttentionKind::OCCURRENCE.with_precision(Some(2)).unwrap();
        assert_eq!(select_attention(&x, k).unwrap().indices(), &[1, 3, 5]);
        assert!(AttentionKind::MEDIAN.with_precision(Some(13)).is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for k in AttentionKind::all_methods(None) {
            assert_eq!(k.name().parse::<AttentionKind>().unwrap(), k);
        }
        assert_eq!(
            "FAS".parse::<AttentionKind>().unwrap(),
            AttentionKind::OCCURRENCE
        );
        assert!("xyz".parse::<AttentionKind>().is_err());
    }

    #[test]
    fn ms_examples() {
        let z = coarse_grain_ms(&ts(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]), tau(2)).unwrap();
        assert_eq!(z.values, vec![1.5, 3.5, 5.5]);
        assert_eq!(z.block_sizes, vec![2, 2, 2]);
        let z = coarse_grain_ms(&ts(&[7.0, 8.0, 9.0]), tau(1)).unwrap();
        assert_eq!(z.values, vec![7.0, 8.0, 9.0]);
        let z = coarse_grain_ms(&ts(&[1.0, 2.0, 3.0, 4.0, 5.0]), tau(2)).unwrap();
        assert_eq!(z.values, vec![1.5, 3.5]);
        assert!(matches!(
            coarse_grain_ms(&ts(&[1.0, 2.0]), tau(3)),
            Err(Error::EmptyOutput { tau: 3, len: 2 })
        ));
    }

    #[test]
    fn attention_examples() {
        let x = ts(&[1.0, 3.0, 2.0, 4.0, 3.0, 5.0]);
        let z = coarse_grain_attention(&x, AttentionKind::Peak, tau(2)).unwrap();
        assert_eq!(z.values, vec![2.0, 3.5]);
        assert_eq!(z.block_sizes, vec![3, 2]);
        assert_eq!(z.source_len, 6);

        let z = coarse_grain_attention(
            &ts(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]),
            AttentionKind::All,
            tau(2),
        )
        .unwrap();
        assert_eq!(z.values, vec![1.5, 3.5, 5.5]);
        let z = coarse_grain_attention(&ts(&[1.0, 2.0, 3.0]), AttentionKind::All, tau(1)).unwrap();
        assert_eq!(z.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn insufficient_attention_is_an_error() {
        let x = ts(&[1.0, 3.0, 2.0, 4.0, 3.0, 5.0]);
        assert!(matches!(
            coarse_grain_attention(&x, AttentionKind::Peak, tau(5)),
            Err(Error::InsufficientAttention { found: 4, tau: 5 })
        ));
    }

    #[test]
    fn block_mean_stays_in_range() {
        let m = block_mean(&[0.1, 0.1, 0.1]);
        assert!(m <= 0.1);
    }
}
