//! A two-group cohort run: per-subject grid, group summaries, Welch tests,
//! covariate correlations and the combined score.
use std::fmt::Write as _;

use attention_scale::cohort::{self, CohortManifest, CombinedMs, GridOptions, ScaleMode};
use attention_scale::*;

fn main() -> Result<()> {
    let dir = std::env::temp_dir().join("attention-scale-cohort-example");
    std::fs::create_dir_all(&dir).map_err(|e| Error::Io {
        path: dir.clone(),
        source: e,
    })?;

    let mut manifest = String::from("subject_id,path,group,age,height,weight,leg_length,speed\n");
    for (group, kind) in [("white", NoiseKind::White), ("pink", NoiseKind::OneOverF)] {
        for seed in 0..6u64 {
            let spec = NoiseSpec::new(kind, 2048, seed)?;
            cohort::write_series(dir.join(format!("{}.txt", spec.id())), &gen_noise(&spec)?)?;
            let height = 160.0 + 3.0 * seed as f64;
            let _ = writeln!(
                manifest,
                "{id},{id}.txt,{group},{},{height},,,",
                30 + seed,
                id = spec.id()
            );
        }
    }
    let path = dir.join("manifest.csv");
    std::fs::write(&path, manifest).map_err(|e| Error::Io {
        path: path.clone(),
        source: e,
    })?;
    let manifest = CohortManifest::load(&path)?;

    let opts = GridOptions {
        best_tau: true,
        ..GridOptions::sweep(
            vec![AttentionKind::All, AttentionKind::Peak],
            vec![AnalysisKind::SimilarityLoss],
            8,
        )
    };
    let grid = cohort::run_grid(&manifest, &opts)?;
    println!(
        "{} records, {} summary rows",
        grid.records.len(),
        grid.summaries.len()
    );
    for row in grid.comparisons.iter().filter(|r| r.statistic == "welch_p") {
        println!(
            "{:<22} {:<14} p = {:.2e}",
            row.measure,
            row.covariate_or_pair,
            row.value.unwrap_or(f64::NAN)
        );
    }
    for row in grid
        .comparisons
        .iter()
        .filter(|r| r.measure.ends_with("tau=best"))
    {
        println!(
            "{:<22} {:<14} {} = {:?}",
            row.measure, row.covariate_or_pair, row.statistic, row.value
        );
    }

    let dynamic = GridOptions {
        scale: ScaleMode::Dynamic,
        combined: Some(CombinedMs::Twice),
        ..opts
    };
    let grid = cohort::run_grid(&manifest, &dynamic)?;
    for c in &grid.combined {
        println!("combined {:<10} {:<6} {:?}", c.subject_id, c.group, c.value);
    }
    println!("files in {}", dir.display());
    Ok(())
}
