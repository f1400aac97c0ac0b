//! Command-line front end: `synth`, `analyze`, `cohort` and `plot`.
//!
//! Exit codes: 0 on success (warnings allowed), 1 on usage errors, 2 on data
//! errors. Warnings go to the diagnostic stream as tab-separated
//! `warning<TAB>subject<TAB>message` lines.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::cohort::{
    self, CohortManifest, CombinedMs, GridOptions, ScaleMode, COMPARISON_HEADER, RECORDS_HEADER,
    SUMMARY_HEADER,
};
use crate::complexity::{BinningScheme, EntropySpec, Estimator};
use crate::error::Error;
use crate::loss::{analyze_sweep, AnalysisKind, AnalysisRecord};
use crate::plot::{render_svg, summarize_records};
use crate::series::AttentionKind;
use crate::synth::{gen_noise, NoiseKind, NoiseSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "attnscale",
    version,
    about = "Loss-analysis of time series under attention-scale coarse-graining"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate seeded white or 1/f noise series plus a manifest.
    Synth(SynthArgs),
    /// Sweep one series over scale factors and write the records CSV.
    Analyze(AnalyzeArgs),
    /// Run a manifest through the analysis grid and write records, summary and comparison CSVs.
    Cohort(CohortArgs),
    /// Draw group means with SE bars from records and/or summary CSVs.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// white, pink or 1/f
    #[arg(long)]
    pub kind: String,
    #[arg(long, default_value_t = 8192)]
    pub n: usize,
    /// A count (seeds 0..count) or a comma-separated list of seeds.
    #[arg(long, default_value = "30")]
    pub seeds: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Clone)]
pub struct EntropyArgs {
    /// shannon, renyi:<alpha>, tsallis:<q>, permutation:<m>:<d>, sample:<m>:<r>, approximate:<m>:<r>
    /// (a tolerance ending in `sd` is relative to the series standard deviation)
    #[arg(long, default_value = "shannon")]
    pub entropy: String,
    /// auto, discrete or width:<k>
    #[arg(long, default_value = "auto")]
    pub binning: String,
    /// Bin coarse series on the original series' range for complexity-loss.
    #[arg(long)]
    pub shared_edges: bool,
    /// Decimal places used when comparing values for oas/mas.
    #[arg(long)]
    pub precision: Option<u8>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// ms, pas, oas (alias fas) or mas; comma-separated for several.
    #[arg(long, default_value = "ms")]
    pub method: String,
    /// complexity, closs or sloss; comma-separated for several.
    #[arg(long, default_value = "complexity,closs,sloss")]
    pub analysis: String,
    #[arg(long, default_value_t = 20)]
    pub tau_max: usize,
    /// Group label written to the records.
    #[arg(long, default_value = "default")]
    pub group: String,
    #[command(flatten)]
    pub entropy: EntropyArgs,
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CohortArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long, default_value = "ms,pas,oas,mas")]
    pub methods: String,
    #[arg(long, default_value = "complexity,closs,sloss")]
    pub analyses: String,
    #[arg(long, default_value_t = 20)]
    pub tau_max: usize,
    /// Use round((height-1)/18) per subject instead of a tau sweep.
    #[arg(long)]
    pub dynamic_scale: bool,
    /// Also compute the PAS + MS combined score per subject (needs height).
    #[arg(long)]
    pub combined: bool,
    /// Apply the MS arm of the combined score once instead of twice.
    #[arg(long, requires = "combined")]
    pub combined_once: bool,
    /// Add best-over-tau (1..=15) Pearson rows.
    #[arg(long)]
    pub best_tau: bool,
    #[command(flatten)]
    pub entropy: EntropyArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long)]
    pub records: Option<PathBuf>,
    /// Used for markers when given; otherwise summaries are computed from --records.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(msg) => CliError::Usage(msg),
            other => CliError::Data(other),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn parse_list<T: std::str::FromStr<Err = Error>>(s: &str) -> CliResult<Vec<T>> {
    let items: Vec<T> = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<T>())
        .collect::<Result<_, _>>()?;
    if items.is_empty() {
        return Err(CliError::Usage(format!("empty list `{s}`")));
    }
    Ok(items)
}

fn methods(s: &str, precision: Option<u8>) -> CliResult<Vec<AttentionKind>> {
    parse_list::<AttentionKind>(s)?
        .into_iter()
        .map(|m| m.with_precision(precision).map_err(CliError::from))
        .collect()
}

fn entropy_spec(a: &EntropyArgs) -> CliResult<EntropySpec> {
    let estimator: Estimator = a.entropy.parse()?;
    let binning: BinningScheme = a.binning.parse()?;
    Ok(EntropySpec {
        estimator,
        binning,
        shared_edges: a.shared_edges,
    })
}

fn seeds(s: &str) -> CliResult<Vec<u64>> {
    let bad = || {
        CliError::Usage(format!(
            "--seeds expects a count or a comma-separated list, got `{s}`"
        ))
    };
    if s.contains(',') {
        s.split(',')
            .map(|p| p.trim().parse::<u64>().map_err(|_| bad()))
            .collect()
    } else {
        let n: u64 = s.trim().parse().map_err(|_| bad())?;
        if n == 0 {
            return Err(bad());
        }
        Ok((0..n).collect())
    }
}

fn warn(err: &mut dyn Write, subject: &str, message: &str) {
    let _ = writeln!(err, "warning\t{subject}\t{message}");
}

fn create_dir(path: &Path) -> CliResult<()> {
    fs::create_dir_all(path).map_err(|e| {
        CliError::Data(Error::Io {
            path: path.to_path_buf(),
            source: e,
        })
    })
}

fn cmd_synth(a: &SynthArgs) -> CliResult<()> {
    let kind: NoiseKind = a.kind.parse()?;
    let seeds = seeds(&a.seeds)?;
    let specs: Vec<NoiseSpec> = seeds
        .iter()
        .map(|&s| NoiseSpec::new(kind, a.n, s))
        .collect::<Result<_, _>>()?;
    create_dir(&a.out)?;
    let mut new_rows = Vec::with_capacity(specs.len());
    for spec in &specs {
        let x = gen_noise(spec)?;
        let file = format!("{}.txt", spec.id());
        cohort::write_series(a.out.join(&file), &x)?;
        new_rows.push((spec.id(), file, kind.name().to_string()));
    }
    // merge with an existing manifest so several kinds can share one directory
    let manifest_path = a.out.join("manifest.csv");
    let mut rows: Vec<(String, String, String)> = Vec::new();
    if manifest_path.is_file() {
        let text = fs::read_to_string(&manifest_path).map_err(|e| Error::Io {
            path: manifest_path.clone(),
            source: e,
        })?;
        let old = CohortManifest::parse(&text, Path::new(""))?;
        for e in old.entries {
            if !new_rows.iter().any(|(id, _, _)| id == &e.subject_id) {
                rows.push((e.subject_id, e.path.to_string_lossy().into_owned(), e.group));
            }
        }
    }
    rows.extend(new_rows);
    cohort::write_manifest(&manifest_path, &rows)?;
    Ok(())
}

fn cmd_analyze(a: &AnalyzeArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let spec = entropy_spec(&a.entropy)?;
    let methods = methods(&a.method, a.entropy.precision)?;
    let analyses: Vec<AnalysisKind> = parse_list(&a.analysis)?;
    if a.tau_max == 0 {
        return Err(CliError::Usage("--tau-max must be >= 1".into()));
    }
    let x = cohort::load_series(&a.input)?;
    let mut records: Vec<AnalysisRecord> = Vec::new();
    for &m in &methods {
        for &an in &analyses {
            let recs = analyze_sweep(&x, &a.group, m, an, a.tau_max, &spec);
            let undefined = recs.iter().filter(|r| r.value.is_none()).count();
            if undefined > 0 {
                warn(
                    err,
                    x.id(),
                    &format!("{undefined} undefined cells for {m}/{an}"),
                );
            }
            records.extend(recs);
        }
    }
    match &a.out {
        Some(path) => cohort::write_records(path, &records)?,
        None => cohort::write_csv_to(out, &RECORDS_HEADER, &records)?,
    }
    Ok(())
}

#[derive(serde::Serialize)]
struct CombinedCsvRow<'a> {
    subject_id: &'a str,
    group: &'a str,
    value: Option<f64>,
}

fn cmd_cohort(a: &CohortArgs, err: &mut dyn Write) -> CliResult<()> {
    let spec = entropy_spec(&a.entropy)?;
    let opts = GridOptions {
        methods: methods(&a.methods, a.entropy.precision)?,
        analyses: parse_list(&a.analyses)?,
        scale: if a.dynamic_scale {
            ScaleMode::Dynamic
        } else {
            if a.tau_max == 0 {
                return Err(CliError::Usage("--tau-max must be >= 1".into()));
            }
            ScaleMode::Sweep { tau_max: a.tau_max }
        },
        spec,
        combined: a.combined.then_some(if a.combined_once {
            CombinedMs::Once
        } else {
            CombinedMs::Twice
        }),
        best_tau: a.best_tau,
    };
    let manifest = CohortManifest::load(&a.manifest)?;
    let grid = cohort::run_grid(&manifest, &opts)?;
    for w in &grid.warnings {
        warn(err, &w.subject_id, &w.message);
    }
    create_dir(&a.out)?;
    cohort::write_records(a.out.join("records.csv"), &grid.records)?;
    cohort::write_csv(a.out.join("summary.csv"), &SUMMARY_HEADER, &grid.summaries)?;
    cohort::write_csv(
        a.out.join("comparison.csv"),
        &COMPARISON_HEADER,
        &grid.comparisons,
    )?;
    if a.combined {
        let rows: Vec<CombinedCsvRow> = grid
            .combined
            .iter()
            .map(|c| CombinedCsvRow {
                subject_id: &c.subject_id,
                group: &c.group,
                value: c.value,
            })
            .collect();
        cohort::write_csv(
            a.out.join("combined.csv"),
            &["subject_id", "group", "value"],
            &rows,
        )?;
    }
    Ok(())
}

fn cmd_plot(a: &PlotArgs) -> CliResult<()> {
    let summaries = match (&a.summary, &a.records) {
        (Some(s), _) => cohort::read_summary(s)?,
        (None, Some(r)) => summarize_records(&cohort::read_records(r)?),
        (None, None) => return Err(CliError::Usage("plot needs --records or --summary".into())),
    };
    // a records file given alongside a summary must still conform
    if let (Some(_), Some(r)) = (&a.summary, &a.records) {
        cohort::read_records(r)?;
    }
    let svg = render_svg(&summaries).map_err(CliError::Data)?;
    fs::write(&a.out, svg).map_err(|e| {
        CliError::Data(Error::Io {
            path: a.out.clone(),
            source: e,
        })
    })
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Synth(a) => cmd_synth(a),
        Command::Analyze(a) => cmd_analyze(a, out, err),
        Command::Cohort(a) => cmd_cohort(a, err),
        Command::Plot(a) => cmd_plot(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Data(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DATA
        }
    }
}
