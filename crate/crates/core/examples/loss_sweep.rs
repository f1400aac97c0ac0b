//! Complexity-loss and similarity-loss of one series across scale factors.
//!
//! `cargo run --example loss_sweep -- path/to/series.txt` analyses a file;
//! without an argument a 1/f series is generated.
use attention_scale::cohort::load_series;
use attention_scale::*;

fn main() -> Result<()> {
    let x = match std::env::args().nth(1) {
        Some(path) => load_series(path)?,
        None => gen_noise(&NoiseSpec::new(NoiseKind::OneOverF, 4096, 7)?)?,
    };
    let spec = EntropySpec::default();
    let methods = AttentionKind::all_methods(Some(1));

    for analysis in [AnalysisKind::ComplexityLoss, AnalysisKind::SimilarityLoss] {
        println!("{} of {} (N = {})", analysis.name(), x.id(), x.len());
        print!("{:>4}", "tau");
        for m in methods {
            print!("{:>10}", m.name());
        }
        println!();
        let sweeps: Vec<Vec<AnalysisRecord>> = methods
            .iter()
            .map(|&m| analyze_sweep(&x, "demo", m, analysis, 12, &spec))
            .collect();
        for t in 0..12 {
            print!("{:>4}", t + 1);
            for s in &sweeps {
                match s[t].value {
                    Some(v) => print!("{v:>10.4}"),
                    None => print!("{:>10}", "-"),
                }
            }
            println!();
        }
        println!();
    }
    Ok(())
}
