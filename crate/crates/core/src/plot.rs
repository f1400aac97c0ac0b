//! Static SVG figures: one panel per (analysis, method) pair, group means with
//! standard-error bars against the scale factor.

use std::collections::BTreeSet;
use std::fmt::Write;

use crate::cohort::{group_summary, SummaryRow};
use crate::error::{Error, Result};
use crate::loss::{AnalysisKind, AnalysisRecord};
use crate::series::AttentionKind;

const PANEL_W: f64 = 260.0;
const PANEL_H: f64 = 200.0;
const MARGIN_L: f64 = 56.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 28.0;
const MARGIN_B: f64 = 36.0;
const LEGEND_H: f64 = 28.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

/// Panel layout of a figure.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    /// Analysis names, one panel row each.
    pub rows: Vec<String>,
    /// Method names, one panel column each.
    pub columns: Vec<String>,
    pub tau_min: usize,
    pub tau_max: usize,
    pub groups: Vec<String>,
}

fn canonical_rank(name: &str, canon: &[&str]) -> usize {
    canon.iter().position(|c| *c == name).unwrap_or(canon.len())
}

fn ordered(names: BTreeSet<String>, canon: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = names.into_iter().collect();
    v.sort_by_key(|n| (canonical_rank(n, canon), n.clone()));
    v
}

impl PlotSpec {
    /// Derives the layout from summary rows with integer scale factors.
    pub fn from_summaries(rows: &[SummaryRow]) -> Result<Self> {
        let usable: Vec<(&SummaryRow, usize)> = rows
            .iter()
            .filter_map(|r| r.tau.parse::<usize>().ok().map(|t| (r, t)))
            .collect();
        if usable.is_empty() {
            return Err(Error::InvalidParameter(
                "nothing to plot: no summary rows with an integer tau".into(),
            ));
        }
        let analyses: Vec<&str> = AnalysisKind::ALL.iter().map(|a| a.name()).collect();
        let methods: Vec<&str> = AttentionKind::all_methods(None)
            .iter()
            .map(|m| m.name())
            .collect();
        let mut groups: Vec<String> = Vec::new();
        for (r, _) in &usable {
            if !groups.contains(&r.group) {
                groups.push(r.group.clone());
            }
        }
        Ok(PlotSpec {
            rows: ordered(
                usable.iter().map(|(r, _)| r.analysis.clone()).collect(),
                &analyses,
            ),
            columns: ordered(
                usable.iter().map(|(r, _)| r.method.clone()).collect(),
                &methods,
            ),
            tau_min: usable.iter().map(|(_, t)| *t).min().unwrap_or(1),
            tau_max: usable.iter().map(|(_, t)| *t).max().unwrap_or(1),
            groups,
        })
    }
}

/// Group summaries computed from records; undefined cells are skipped.
pub fn summarize_records(records: &[AnalysisRecord]) -> Vec<SummaryRow> {
    let mut keys: Vec<(String, String, String, usize)> = Vec::new();
    for r in records {
        let k = (r.group.clone(), r.method.clone(), r.analysis.clone(), r.tau);
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    keys.into_iter()
        .filter_map(|(g, m, a, t)| {
            let vs: Vec<f64> = records
                .iter()
                .filter(|r| r.group == g && r.method == m && r.analysis == a && r.tau == t)
                .filter_map(|r| r.value)
                .collect();
            let s = group_summary(&g, &vs).ok()?;
            Some(SummaryRow {
                group: g,
                method: m,
                analysis: a,
                tau: t.to_string(),
                n: s.n,
                mean: s.mean,
                se: s.se,
            })
        })
        .collect()
}

fn nice_range(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        let pad = if lo.abs() > 1e-12 {
            lo.abs() * 0.1
        } else {
            0.5
        };
        return (lo - pad, hi + pad);
    }
    let pad = (hi - lo) * 0.08;
    (lo - pad, hi + pad)
}

/// Renders the full panel grid as one SVG document. Output bytes depend only
/// on `rows`.
pub fn render_svg(rows: &[SummaryRow]) -> Result<String> {
    let spec = PlotSpec::from_summaries(rows)?;
    let ncol = spec.columns.len() as f64;
    let nrow = spec.rows.len() as f64;
    let width = ncol * PANEL_W;
    let height = LEGEND_H + nrow * PANEL_H;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{width}" height="{height}" fill="white"/>"#
    );

    for (gi, g) in spec.groups.iter().enumerate() {
        let x = 10.0 + gi as f64 * 120.0;
        let color = PALETTE[gi % PALETTE.len()];
        let _ = writeln!(
            s,
            r#"<g class="legend"><circle cx="{:.1}" cy="14" r="4" fill="{color}"/><text x="{:.1}" y="18">{}</text></g>"#,
            x + 4.0,
            x + 12.0,
            escape(g)
        );
    }

    let span = (spec.tau_max - spec.tau_min).max(1) as f64;
    for (ri, analysis) in spec.rows.iter().enumerate() {
        for (ci, method) in spec.columns.iter().enumerate() {
            let ox = ci as f64 * PANEL_W;
            let oy = LEGEND_H + ri as f64 * PANEL_H;
            let pw = PANEL_W - MARGIN_L - MARGIN_R;
            let ph = PANEL_H - MARGIN_T - MARGIN_B;
            let cells: Vec<(&SummaryRow, usize)> = rows
                .iter()
                .filter(|r| &r.analysis == analysis && &r.method == method)
                .filter_map(|r| r.tau.parse::<usize>().ok().map(|t| (r, t)))
                .filter(|(r, _)| r.mean.is_finite() && r.se.is_finite())
                .collect();
            let lo = cells
                .iter()
                .map(|(r, _)| r.mean - r.se)
                .fold(f64::INFINITY, f64::min);
            let hi = cells
                .iter()
                .map(|(r, _)| r.mean + r.se)
                .fold(f64::NEG_INFINITY, f64::max);
            let (ylo, yhi) = nice_range(lo, hi);
            let px = |t: usize| ox + MARGIN_L + (t - spec.tau_min) as f64 / span * pw;
            let py = |v: f64| oy + MARGIN_T + (1.0 - (v - ylo) / (yhi - ylo)) * ph;

            let _ = writeln!(
                s,
                r#"<g class="panel" data-analysis="{}" data-method="{}">"#,
                escape(analysis),
                escape(method)
            );
            let _ = writeln!(
                s,
                r#"<rect x="{:.1}" y="{:.1}" width="{pw:.1}" height="{ph:.1}" fill="none" stroke="black"/>"#,
                ox + MARGIN_L,
                oy + MARGIN_T
            );
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{} / {}</text>"#,
                ox + MARGIN_L + pw / 2.0,
                oy + MARGIN_T - 8.0,
                escape(&method.to_uppercase()),
                escape(analysis)
            );
            for t in spec.tau_min..=spec.tau_max {
                if span > 10.0 && (t - spec.tau_min) % 5 != 0 && t != spec.tau_max {
                    continue;
                }
                let _ = writeln!(
                    s,
                    r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{t}</text>"#,
                    px(t),
                    oy + MARGIN_T + ph + 14.0
                );
            }
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">scale factor</text>"#,
                ox + MARGIN_L + pw / 2.0,
                oy + PANEL_H - 6.0
            );
            for v in [ylo, (ylo + yhi) / 2.0, yhi] {
                let _ = writeln!(
                    s,
                    r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{v:.3}</text>"#,
                    ox + MARGIN_L - 4.0,
                    py(v) + 4.0
                );
            }
            for (gi, g) in spec.groups.iter().enumerate() {
                let color = PALETTE[gi % PALETTE.len()];
                for (r, t) in cells.iter().filter(|(r, _)| &r.group == g) {
                    let (x, y) = (px(*t), py(r.mean));
                    let _ = writeln!(
                        s,
                        r#"<line class="se" x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="{color}"/>"#,
                        py(r.mean - r.se),
                        py(r.mean + r.se)
                    );
                    let _ = writeln!(
                        s,
                        r#"<circle class="mean" cx="{x:.1}" cy="{y:.1}" r="3" fill="{color}"/>"#
                    );
                }
            }
            let _ = writeln!(s, "</g>");
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}
