//! Mean similarity-loss and complexity-loss of white versus 1/f noise,
//! 30 series each, for every coarse-graining method.
use attention_scale::*;

fn group(kind: NoiseKind, n: usize) -> Result<Vec<TimeSeries>> {
    (0..30)
        .map(|s| gen_noise(&NoiseSpec::new(kind, n, s)?))
        .collect()
}

fn mean_at(xs: &[TimeSeries], m: AttentionKind, a: AnalysisKind, tau: usize) -> f64 {
    let spec = EntropySpec::default();
    let vals: Vec<f64> = xs
        .iter()
        .filter_map(|x| analyze_sweep(x, "", m, a, tau, &spec).pop()?.value)
        .collect();
    vals.iter().sum::<f64>() / vals.len() as f64
}

fn main() -> Result<()> {
    let n = 8192;
    let white = group(NoiseKind::White, n)?;
    let pink = group(NoiseKind::OneOverF, n)?;
    let slope = |xs: &[TimeSeries]| {
        xs.iter()
            .map(|x| psd_slope(x.values()).unwrap())
            .sum::<f64>()
            / xs.len() as f64
    };
    println!(
        "PSD slope: white {:.3}, 1/f {:.3}\n",
        slope(&white),
        slope(&pink)
    );

    for analysis in [AnalysisKind::SimilarityLoss, AnalysisKind::ComplexityLoss] {
        println!("{} (white / 1/f)", analysis.name());
        for method in AttentionKind::all_methods(Some(1)) {
            print!("{:>4}", method.name());
            for tau in [2, 5, 10, 20] {
                print!(
                    "   tau={tau:<2} {:.3}/{:.3}",
                    mean_at(&white, method, analysis, tau),
                    mean_at(&pink, method, analysis, tau)
                );
            }
            println!();
        }
        println!();
    }
    Ok(())
}
