//! Attention selection and coarse-graining on a short hand-made series.
use attention_scale::*;

fn main() -> Result<()> {
    let x = TimeSeries::new(
        "demo",
        vec![1.0, 3.0, 2.0, 2.0, 5.0, 2.0, 4.0, 2.0, 6.0, 1.0, 2.0, 3.0],
    )?;
    let tau = ScaleFactor::new(2)?;

    for kind in AttentionKind::all_methods(None) {
        let selected = select_attention(&x, kind)?;
        let z = coarse_grain(&x, kind, tau)?;
        println!(
            "{kind:>3}  attention {:?}\n     tau=2 -> {:?} (segment lengths {:?})",
            selected.indices(),
            z.values,
            z.block_sizes
        );
    }

    // MS is attention-scale with every point selected
    let ms = coarse_grain_ms(&x, tau)?;
    let all = coarse_grain_attention(&x, AttentionKind::All, tau)?;
    assert_eq!(ms.values, all.values);

    let ramp = TimeSeries::new("ramp", (0..10).map(f64::from).collect())?;
    match coarse_grain(&ramp, AttentionKind::Peak, tau) {
        Err(e) => println!("monotone series under PAS: {e}"),
        Ok(z) => println!("unexpected: {:?}", z.values),
    }
    Ok(())
}
