//! Cohort runs: per-subject analysis grids, group summaries and the
//! Welch/Pearson comparison table.

mod io;
mod stats;

use std::collections::BTreeMap;

use rayon::prelude::*;

pub use io::{
    load_series, parse_series, read_csv, read_records, read_summary, write_csv, write_csv_to,
    write_manifest, write_records, write_series, CohortManifest, ComparisonRow, ManifestEntry,
    SummaryRow, COMPARISON_HEADER, MANIFEST_HEADER, RECORDS_HEADER, SUMMARY_HEADER,
};
pub use stats::{group_summary, pearson, student_t_two_sided, welch_t, GroupSummary, WelchResult};

use crate::complexity::EntropySpec;
use crate::error::{Error, Result};
use crate::loss::{analyze_at, AnalysisKind, AnalysisRecord};
use crate::series::{
    coarse_grain_attention, coarse_grain_ms, AttentionKind, ScaleFactor, TimeSeries,
};

/// Upper end of the scale-factor range searched by the best-over-tau reduction.
pub const BEST_TAU_LIMIT: usize = 15;

fn round_half_up(v: f64) -> f64 {
    (v + 0.5).floor()
}

fn scale_from_height(height: f64, divisor: f64) -> Result<ScaleFactor> {
    if !height.is_finite() || height <= 1.0 {
        return Err(Error::InvalidCovariate(format!(
            "height must be > 1, got {height}"
        )));
    }
    let tau = round_half_up((height - 1.0) / divisor).max(1.0);
    ScaleFactor::new(tau as usize)
}

/// Per-subject scale factor `round((height - 1) / 18)`, at least 1.
pub fn dynamic_scale_factor(height: f64) -> Result<ScaleFactor> {
    scale_from_height(height, 18.0)
}

/// How the MS arm of the combined score is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CombinedMs {
    /// Coarse-grain with `tau2`, then coarse-grain the result with `tau2` again.
    #[default]
    Twice,
    /// A single MS pass with `tau2`.
    Once,
}

/// Entropy of the PAS series at `round((h-1)/18)` plus entropy of the MS
/// series at `round((h-1)/9)`.
pub fn combined_score(
    x: &TimeSeries,
    height: f64,
    spec: &EntropySpec,
    ms_mode: CombinedMs,
) -> Result<f64> {
    let tau_peak = dynamic_scale_factor(height)?;
    let tau_ms = scale_from_height(height, 9.0)?;
    let peak = coarse_grain_attention(x, AttentionKind::Peak, tau_peak)?;
    let mut ms = coarse_grain_ms(x, tau_ms)?;
    if ms_mode == CombinedMs::Twice {
        let once = TimeSeries::new(x.id(), ms.values)?;
        ms = coarse_grain_ms(&once, tau_ms)?;
    }
    Ok(spec.entropy(&peak.values)? + spec.entropy(&ms.values)?)
}

/// Scale factors evaluated per subject.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleMode {
    /// Every `tau` in `1..=tau_max`.
    Sweep { tau_max: usize },
    /// One `tau` per subject from its `height` covariate.
    Dynamic,
}

#[derive(Debug, Clone)]
pub struct GridOptions {
    pub methods: Vec<AttentionKind>,
    pub analyses: Vec<AnalysisKind>,
    pub scale: ScaleMode,
    pub spec: EntropySpec,
    /// Also compute the combined score per subject.
    pub combined: Option<CombinedMs>,
    /// Add best-over-tau Pearson rows (tau searched in `1..=15`).
    pub best_tau: bool,
}

impl GridOptions {
    pub fn sweep(methods: Vec<AttentionKind>, analyses: Vec<AnalysisKind>, tau_max: usize) -> Self {
        GridOptions {
            methods,
            analyses,
            scale: ScaleMode::Sweep { tau_max },
            spec: EntropySpec::default(),
            combined: None,
            best_tau: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Warning {
    pub subject_id: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CombinedRow {
    pub subject_id: String,
    pub group: String,
    pub value: Option<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct GridOutput {
    /// Ordered by subject (manifest order), method, analysis, tau.
    pub records: Vec<AnalysisRecord>,
    pub summaries: Vec<SummaryRow>,
    pub comparisons: Vec<ComparisonRow>,
    pub combined: Vec<CombinedRow>,
    pub warnings: Vec<Warning>,
}

struct SubjectResult {
    records: Vec<AnalysisRecord>,
    combined: Option<CombinedRow>,
    warnings: Vec<Warning>,
}

fn run_subject(entry: &ManifestEntry, opts: &GridOptions) -> SubjectResult {
    let mut warnings = Vec::new();
    let warn = |warnings: &mut Vec<Warning>, message: String| {
        warnings.push(Warning {
            subject_id: entry.subject_id.clone(),
            message,
        })
    };
    let series = match load_series(&entry.path) {
        Ok(x) => Some(x),
        Err(e) => {
            warn(&mut warnings, format!("series not loaded: {e}"));
            None
        }
    };
    let taus: Vec<usize> = match opts.scale {
        ScaleMode::Sweep { tau_max } => (1..=tau_max).collect(),
        ScaleMode::Dynamic => match entry
            .covariate("height")
            .ok_or_else(|| Error::InvalidCovariate("height missing".into()))
            .and_then(dynamic_scale_factor)
        {
            Ok(t) => vec![t.get()],
            Err(e) => {
                warn(&mut warnings, format!("excluded from dynamic scale: {e}"));
                Vec::new()
            }
        },
    };
    let mut records = Vec::with_capacity(opts.methods.len() * opts.analyses.len() * taus.len());
    for &method in &opts.methods {
        for &analysis in &opts.analyses {
            let cells: Vec<AnalysisRecord> = taus
                .par_iter()
                .map(|&t| {
                    let value = series.as_ref().and_then(|x| {
                        ScaleFactor::new(t)
                            .and_then(|tau| analyze_at(x, method, analysis, tau, &opts.spec))
                            .ok()
                    });
                    AnalysisRecord {
                        subject_id: entry.subject_id.clone(),
                        group: entry.group.clone(),
                        method: method.name().to_string(),
                        analysis: analysis.name().to_string(),
                        tau: t,
                        value,
                    }
                })
                .collect();
            let undefined = cells.iter().filter(|c| c.value.is_none()).count();
            if series.is_some() && undefined > 0 {
                warn(
                    &mut warnings,
                    format!("{undefined} undefined cells for {method}/{analysis}"),
                );
            }
            records.extend(cells);
        }
    }
    let combined = opts.combined.map(|mode| {
        let value = series.as_ref().and_then(|x| {
            let r = entry
                .covariate("height")
                .ok_or_else(|| Error::InvalidCovariate("height missing".into()))
                .and_then(|h| combined_score(x, h, &opts.spec, mode));
            match r {
                Ok(v) => Some(v),
                Err(e) => {
                    warn(&mut warnings, format!("combined score undefined: {e}"));
                    None
                }
            }
        });
        CombinedRow {
            subject_id: entry.subject_id.clone(),
            group: entry.group.clone(),
            value,
        }
    });
    SubjectResult {
        records,
        combined,
        warnings,
    }
}

fn measure_name(method: &str, analysis: &str, tau: &str) -> String {
    format!("{method}/{analysis}/tau={tau}")
}

fn comparison(measure: &str, target: &str, statistic: &str, value: Option<f64>) -> ComparisonRow {
    ComparisonRow {
        measure: measure.to_string(),
        covariate_or_pair: target.to_string(),
        statistic: statistic.to_string(),
        value,
    }
}

fn covariate_present(manifest: &CohortManifest, name: &str) -> bool {
    manifest.entries.iter().any(|e| e.covariate(name).is_some())
}

/// Welch rows for every group pair and Pearson rows for every covariate, for
/// one measure given as one optional value per manifest entry.
fn compare_measure(
    measure: &str,
    values: &[Option<f64>],
    manifest: &CohortManifest,
    groups: &[String],
    out: &mut Vec<ComparisonRow>,
) {
    let by_group: Vec<Vec<f64>> = groups
        .iter()
        .map(|g| {
            manifest
                .entries
                .iter()
                .zip(values)
                .filter(|(e, _)| &e.group == g)
                .filter_map(|(_, v)| *v)
                .collect()
        })
        .collect();
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            let pair = format!("{} vs {}", groups[i], groups[j]);
            let res = welch_t(&by_group[i], &by_group[j]).ok();
            out.push(comparison(measure, &pair, "welch_t", res.map(|r| r.t)));
            out.push(comparison(measure, &pair, "welch_p", res.map(|r| r.p)));
        }
    }
    for name in &manifest.covariate_names {
        let (xs, ys): (Vec<f64>, Vec<f64>) = manifest
            .entries
            .iter()
            .zip(values)
            .filter_map(|(e, v)| Some(((*v)?, e.covariate(name)?)))
            .unzip();
        if !covariate_present(manifest, name) {
            continue;
        }
        let excluded = values.len() - xs.len();
        out.push(comparison(
            measure,
            name,
            "pearson_r",
            pearson(&xs, &ys).ok(),
        ));
        out.push(comparison(measure, name, "excluded", Some(excluded as f64)));
    }
}

/// For each covariate, the tau in `1..=15` whose per-subject values correlate
/// most strongly (largest |r|) with it. This selection is data-dependent.
pub fn best_tau_by_correlation(
    records: &[AnalysisRecord],
    manifest: &CohortManifest,
    method: &str,
    analysis: &str,
    covariate: &str,
) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for tau in 1..=BEST_TAU_LIMIT {
        let (xs, ys): (Vec<f64>, Vec<f64>) = manifest
            .entries
            .iter()
            .filter_map(|e| {
                let v = records
                    .iter()
                    .find(|r| {
                        r.subject_id == e.subject_id
                            && r.method == method
                            && r.analysis == analysis
                            && r.tau == tau
                    })?
                    .value?;
                Some((v, e.covariate(covariate)?))
            })
            .unzip();
        if let Ok(r) = pearson(&xs, &ys) {
            if best.is_none_or(|(_, b)| r.abs() > b.abs()) {
                best = Some((tau, r));
            }
        }
    }
    best
}

/// Runs every subject of `manifest` through the analysis grid and derives the
/// group summaries and comparison table. Per-subject failures become undefined
/// cells plus a warning.
pub fn run_grid(manifest: &CohortManifest, opts: &GridOptions) -> Result<GridOutput> {
    if let ScaleMode::Sweep { tau_max } = opts.scale {
        if tau_max == 0 {
            return Err(Error::InvalidParameter("tau_max must be >= 1".into()));
        }
    }
    opts.spec.estimator.validate()?;
    let results: Vec<SubjectResult> = manifest
        .entries
        .par_iter()
        .map(|e| run_subject(e, opts))
        .collect();

    let mut out = GridOutput::default();
    for r in results {
        out.records.extend(r.records);
        out.combined.extend(r.combined);
        out.warnings.extend(r.warnings);
    }

    let groups = manifest.groups();
    let subject_pos: BTreeMap<&str, usize> = manifest
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| (e.subject_id.as_str(), i))
        .collect();
    let tau_label = |t: usize| match opts.scale {
        ScaleMode::Sweep { .. } => t.to_string(),
        ScaleMode::Dynamic => "dynamic".to_string(),
    };
    let method_pos = |m: &str| opts.methods.iter().position(|k| k.name() == m).unwrap_or(0);
    let analysis_pos = |a: &str| {
        opts.analyses
            .iter()
            .position(|k| k.name() == a)
            .unwrap_or(0)
    };
    let tau_sort = |label: &str| label.parse::<usize>().unwrap_or(0);

    // cell -> per-subject values in manifest order
    let mut cells: BTreeMap<(usize, usize, usize, String), Vec<Option<f64>>> = BTreeMap::new();
    for r in &out.records {
        let label = tau_label(r.tau);
        let slot = cells
            .entry((
                method_pos(&r.method),
                analysis_pos(&r.analysis),
                tau_sort(&label),
                label,
            ))
            .or_insert_with(|| vec![None; manifest.entries.len()]);
        slot[subject_pos[r.subject_id.as_str()]] = r.value;
    }

    for ((m, a, _, label), values) in &cells {
        let method = opts.methods[*m].name();
        let analysis = opts.analyses[*a].name();
        for g in &groups {
            let vs: Vec<f64> = manifest
                .entries
                .iter()
                .zip(values)
                .filter(|(e, _)| &e.group == g)
                .filter_map(|(_, v)| *v)
                .collect();
            if let Ok(s) = group_summary(g, &vs) {
                out.summaries.push(SummaryRow {
                    group: s.group,
                    method: method.to_string(),
                    analysis: analysis.to_string(),
                    tau: label.clone(),
                    n: s.n,
                    mean: s.mean,
                    se: s.se,
                });
            }
        }
        let measure = measure_name(method, analysis, label);
        compare_measure(&measure, values, manifest, &groups, &mut out.comparisons);
    }
    // summaries grouped by group first, then cell order
    out.summaries.sort_by_key(|s| {
        (
            groups.iter().position(|g| g == &s.group),
            method_pos(&s.method),
            analysis_pos(&s.analysis),
            tau_sort(&s.tau),
        )
    });

    if opts.best_tau {
        if let ScaleMode::Sweep { .. } = opts.scale {
            for &method in &opts.methods {
                for &analysis in &opts.analyses {
                    let measure = measure_name(method.name(), analysis.name(), "best");
                    for cov in &manifest.covariate_names {
                        if !covariate_present(manifest, cov) {
                            continue;
                        }
                        let best = best_tau_by_correlation(
                            &out.records,
                            manifest,
                            method.name(),
                            analysis.name(),
                            cov,
                        );
                        out.comparisons.push(comparison(
                            &measure,
                            cov,
                            "best_tau",
                            best.map(|b| b.0 as f64),
                        ));
                        out.comparisons.push(comparison(
                            &measure,
                            cov,
                            "pearson_r",
                            best.map(|b| b.1),
                        ));
                    }
                }
            }
        }
    }

    if opts.combined.is_some() {
        let values: Vec<Option<f64>> = out.combined.iter().map(|c| c.value).collect();
        compare_measure("combined", &values, manifest, &groups, &mut out.comparisons);
    }
    Ok(out)
}
