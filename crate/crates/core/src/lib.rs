//! Loss-analysis of one-dimensional time series under attention-scale
//! coarse-graining.
//!
//! A series is coarse-grained by multiscale (MS) averaging or by one of the
//! attention-scale variants (PAS, OAS/FAS, MAS). The change caused by scaling is
//! measured two ways: complexity-loss, the entropy of the original minus the
//! entropy of the coarse-grained series, and similarity-loss, the two-sample
//! Kolmogorov-Smirnov statistic between them. Cohort tooling runs these over
//! groups of subjects and compares groups with Welch's t-test and covariates
//! with Pearson correlation.
//!
//! ```
//! use attention_scale::{coarse_grain_attention, AttentionKind, ScaleFactor, TimeSeries};
//!
//! let x = TimeSeries::new("demo", vec![1.0, 3.0, 2.0, 4.0, 3.0, 5.0]).unwrap();
//! let z = coarse_grain_attention(&x, AttentionKind::Peak, ScaleFactor::new(2).unwrap()).unwrap();
//! assert_eq!(z.values, vec![2.0, 3.5]);
//! ```

pub mod cli;
pub mod cohort;
pub mod complexity;
pub mod error;
pub mod loss;
pub mod plot;
pub mod series;
pub mod synth;

pub use complexity::{BinningScheme, EntropySpec, Estimator, Tolerance};
pub use error::{Error, Result};
pub use loss::{analyze_sweep, complexity_loss, ks_statistic, AnalysisKind, AnalysisRecord};
pub use series::{
    coarse_grain, coarse_grain_attention, coarse_grain_ms, select_attention, AttentionIndexSet,
    AttentionKind, CoarseSeries, ScaleFactor, TimeSeries,
};
pub use synth::{gen_noise, psd_slope, NoiseKind, NoiseSpec};
