//! The entropy estimators on white and 1/f noise.
use attention_scale::complexity::{approximate_entropy, permutation_entropy, sample_entropy};
use attention_scale::*;

fn main() -> Result<()> {
    let white = gen_noise(&NoiseSpec::new(NoiseKind::White, 2000, 1)?)?;
    let pink = gen_noise(&NoiseSpec::new(NoiseKind::OneOverF, 2000, 1)?)?;

    let estimators = [
        "shannon",
        "renyi:2",
        "tsallis:2",
        "permutation:3:1",
        "sample:2:0.15sd",
        "approximate:2:0.2sd",
    ];
    println!("{:<20} {:>9} {:>9}", "estimator", "white", "1/f");
    for name in estimators {
        let spec = EntropySpec::new(name.parse()?);
        println!(
            "{name:<20} {:>9.4} {:>9.4}",
            spec.entropy(white.values())?,
            spec.entropy(pink.values())?
        );
    }

    let spec = EntropySpec::default().with_binning(BinningScheme::EqualWidth(20));
    println!(
        "shannon, 20 bins     {:>9.4}",
        spec.entropy(white.values())?
    );

    let periodic: Vec<f64> = (0..400).map(|i| (i % 4) as f64).collect();
    println!(
        "period-4 signal: PE {:.4}  SampEn {:.4}  ApEn {:.2e}",
        permutation_entropy(&periodic, 3, 1)?,
        sample_entropy(&periodic, 2, Tolerance::Absolute(0.5))?,
        approximate_entropy(&periodic, 2, Tolerance::Absolute(0.5))?
    );
    if let Err(e) = sample_entropy(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0], 2, Tolerance::Absolute(0.1)) {
        println!("ramp SampEn: {e}");
    }
    println!(
        "constant ApEn: {}",
        approximate_entropy(&[1.0; 30], 2, Tolerance::Absolute(0.1))?
    );
    Ok(())
}
