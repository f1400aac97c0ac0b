//! Complexity-loss and similarity-loss between a series and its coarse-grained
//! version, and the per-series sweep over scale factors.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complexity::EntropySpec;
use crate::error::{Error, Result};
use crate::series::{coarse_grain, AttentionKind, CoarseSeries, ScaleFactor, TimeSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AnalysisKind {
    /// Entropy of the coarse-grained series.
    CoarseComplexity,
    /// Entropy of the original minus entropy of the coarse-grained series.
    ComplexityLoss,
    /// Two-sample KS statistic between original and coarse-grained series.
    SimilarityLoss,
}

impl AnalysisKind {
    pub const ALL: [AnalysisKind; 3] = [
        AnalysisKind::CoarseComplexity,
        AnalysisKind::ComplexityLoss,
        AnalysisKind::SimilarityLoss,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AnalysisKind::CoarseComplexity => "complexity",
            AnalysisKind::ComplexityLoss => "closs",
            AnalysisKind::SimilarityLoss => "sloss",
        }
    }
}

impl fmt::Display for AnalysisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AnalysisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "complexity" | "cc" | "coarse-complexity" => Ok(AnalysisKind::CoarseComplexity),
            "closs" | "complexity-loss" => Ok(AnalysisKind::ComplexityLoss),
            "sloss" | "similarity-loss" | "ks" => Ok(AnalysisKind::SimilarityLoss),
            other => Err(Error::InvalidParameter(format!(
                "unknown analysis `{other}` (expected complexity, closs or sloss)"
            ))),
        }
    }
}

/// One cell of an analysis grid. `value` is `None` when the cell is undefined
/// (coarse-graining failed or the estimator has no value).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    pub subject_id: String,
    pub group: String,
    pub method: String,
    pub analysis: String,
    pub tau: usize,
    pub value: Option<f64>,
}

/// `entropy(x) - entropy(z)`; positive when coarse-graining lost complexity.
pub fn complexity_loss(x: &TimeSeries, z: &CoarseSeries, spec: &EntropySpec) -> Result<f64> {
    if z.is_empty() {
        return Err(Error::EmptySeries);
    }
    let xs = x.values();
    let binning = spec.binning.resolve(xs);
    let h_x = spec.entropy_in(xs, binning, None)?;
    let h_z = if spec.shared_edges {
        let range = xs
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        spec.entropy_in(&z.values, binning, Some(range))?
    } else {
        spec.entropy(&z.values)?
    };
    Ok(h_x - h_z)
}

/// Two-sample Kolmogorov-Smirnov statistic `sup |F_a - F_b|` over the pooled
/// sample points, with right-continuous empirical CDFs.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySeries);
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < a.len() || j < b.len() {
        let v = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) => x.min(y),
            (Some(&x), None) => x,
            (None, Some(&y)) => y,
            (None, None) => unreachable!(),
        };
        // step past every copy of v in both samples before comparing
        while i < a.len() && a[i] <= v {
            i += 1;
        }
        while j < b.len() && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Value of one analysis for a single scale factor.
pub fn analyze_at(
    x: &TimeSeries,
    method: AttentionKind,
    analysis: AnalysisKind,
    tau: ScaleFactor,
    spec: &EntropySpec,
) -> Result<f64> {
    let z = coarse_grain(x, method, tau)?;
    match analysis {
        AnalysisKind::CoarseComplexity => spec.entropy(&z.values),
        AnalysisKind::ComplexityLoss => complexity_loss(x, &z, spec),
        AnalysisKind::SimilarityLoss => ks_statistic(x.values(), &z.values),
    }
}

/// One record per `tau` in `1..=tau_max`, sorted by `tau`. Failures become
/// undefined cells.
pub fn analyze_sweep(
    x: &TimeSeries,
    group: &str,
    method: AttentionKind,
    analysis: AnalysisKind,
    tau_max: usize,
    spec: &EntropySpec,
) -> Vec<AnalysisRecord> {
    (1..=tau_max)
        .into_par_iter()
        .map(|t| {
            let value = ScaleFactor::new(t)
                .and_then(|tau| analyze_at(x, method, analysis, tau, spec))
                .ok();
            AnalysisRecord {
                subject_id: x.id().to_string(),
                group: group.to_string(),
                method: method.name().to_string(),
                analysis: analysis.name().to_string(),
                tau: t,
                value,
            }
        })
        .collect()
}
