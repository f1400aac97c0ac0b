//! Renders a records table into the SVG panel figure.
use attention_scale::plot::{render_svg, summarize_records};
use attention_scale::*;

fn main() -> Result<()> {
    let spec = EntropySpec::default();
    let mut records = Vec::new();
    for (group, kind) in [("white", NoiseKind::White), ("pink", NoiseKind::OneOverF)] {
        for seed in 0..10 {
            let x = gen_noise(&NoiseSpec::new(kind, 2048, seed)?)?;
            for method in AttentionKind::all_methods(Some(1)) {
                for analysis in AnalysisKind::ALL {
                    records.extend(analyze_sweep(&x, group, method, analysis, 10, &spec));
                }
            }
        }
    }
    let svg = render_svg(&summarize_records(&records))?;
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "figure.svg".into());
    std::fs::write(&out, svg).map_err(|e| Error::Io {
        path: out.clone().into(),
        source: e,
    })?;
    println!("wrote {out}");
    Ok(())
}
