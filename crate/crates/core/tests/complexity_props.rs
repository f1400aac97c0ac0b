mod oracles;

use attention_scale::complexity::*;
use attention_scale::Error;
use proptest::prelude::*;

fn values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0f64..50.0, 2..400)
}

fn coarse_values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0i32..6).prop_map(f64::from), 4..64)
}

fn binnings() -> impl Strategy<Value = BinningScheme> {
    prop_oneof![
        Just(BinningScheme::Auto),
        Just(BinningScheme::Discrete),
        (1usize..40).prop_map(BinningScheme::EqualWidth),
    ]
}

proptest! {
    #[test]
    fn histogram_entropies_bounded(v in values(), b in binnings()) {
        let bins = histogram(&v, b).unwrap().len() as f64;
        let h = shannon_entropy(&v, b).unwrap();
        prop_assert!(h >= 0.0);
        prop_assert!(h <= bins.ln() + 1e-12);
        for a in [0.5, 2.0] {
            prop_assert!(renyi_entropy(&v, a, b).unwrap() >= 0.0);
            prop_assert!(tsallis_entropy(&v, a, b).unwrap() >= 0.0);
        }
    }

    #[test]
    fn shannon_ignores_order(v in values(), seed in any::<u64>()) {
        let mut w = v.clone();
        let n = w.len();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            w.swap(i, (s >> 33) as usize % (i + 1));
        }
        for b in [BinningScheme::Auto, BinningScheme::Discrete, BinningScheme::EqualWidth(7)] {
            let a = shannon_entropy(&v, b).unwrap();
            let c = shannon_entropy(&w, b).unwrap();
            prop_assert!((a - c).abs() <= 1e-12);
        }
    }

    #[test]
    fn renyi_non_increasing_in_alpha(v in values()) {
        let b = BinningScheme::EqualWidth(12);
        let hs: Vec<f64> = [0.5, 1.5, 2.0, 3.0]
            .iter()
            .map(|&a| renyi_entropy(&v, a, b).unwrap())
            .collect();
        for w in hs.windows(2) {
            prop_assert!(w[0] + 1e-12 >= w[1]);
        }
        let h1 = shannon_entropy(&v, b).unwrap();
        prop_assert!(hs[0] + 1e-12 >= h1 && h1 + 1e-12 >= hs[1]);
    }

    #[test]
    fn sample_entropy_matches_pair_count(v in coarse_values(), m in 1usize..=3, r in 0.5f64..2.5) {
        prop_assume!(v.len() >= m + 2);
        let got = sample_entropy(&v, m, Tolerance::Absolute(r));
        match (got, oracles::sampen(&v, m, r)) {
            (Ok(a), Some(b)) => prop_assert_eq!(a, b),
            (Err(Error::UndefinedEntropy { .. }), None) => {}
            (a, b) => prop_assert!(false, "{a:?} vs {b:?}"),
        }
    }

    #[test]
    fn approximate_entropy_matches_pair_count(v in coarse_values(), m in 1usize..=3, r in 0.5f64..2.5) {
        prop_assume!(v.len() > m + 1);
        let a = approximate_entropy(&v, m, Tolerance::Absolute(r)).unwrap();
        prop_assert_eq!(a, oracles::apen(&v, m, r));
    }

    #[test]
    fn approximate_entropy_non_negative_for_long_series(
        v in prop::collection::vec(-3.0f64..3.0, 64..200),
        m in 1usize..=2,
    ) {
        prop_assert!(approximate_entropy(&v, m, Tolerance::default()).unwrap() >= -1e-12);
    }

    #[test]
    fn permutation_entropy_bounded(v in values(), m in 2usize..=4, d in 1usize..=3) {
        prop_assume!(v.len() > (m - 1) * d);
        let h = permutation_entropy(&v, m, d).unwrap();
        let max = (1..=m).map(|k| k as f64).product::<f64>().ln();
        prop_assert!(h >= 0.0 && h <= max + 1e-12);
    }
}

#[test]
fn uniform_symbols_give_ln_k() {
    for k in 1..=40usize {
        let v: Vec<f64> = (0..k * 7).map(|i| (i % k) as f64).collect();
        let h = shannon_entropy(&v, BinningScheme::Discrete).unwrap();
        assert!((h - (k as f64).ln()).abs() <= 1e-12, "k={k}");
    }
}

#[test]
fn renyi_approaches_shannon() {
    let v: Vec<f64> = (0..500)
        .map(|i| ((i * 37) % 11) as f64 + (i % 3) as f64)
        .collect();
    let h = shannon_entropy(&v, BinningScheme::Discrete).unwrap();
    for a in [1.0 - 1e-6, 1.0 + 1e-6] {
        let r = renyi_entropy(&v, a, BinningScheme::Discrete).unwrap();
        assert!((r - h).abs() < 1e-4);
    }
}

#[test]
fn frozen_template_values() {
    // 1,2,1,2,... of length 20 with x[11] flipped to 1; 98 of 114 m-matches extend
    let mut x: Vec<f64> = (0..20).map(|i| (i % 2 + 1) as f64).collect();
    x[11] = 1.0;
    let want = oracles::sampen(&x, 2, 0.1).unwrap();
    assert!((want - 0.151_230_969_723_923_53).abs() < 1e-15, "{want}");
    assert_eq!(
        sample_entropy(&x, 2, Tolerance::Absolute(0.1)).unwrap(),
        want
    );

    // short alternating series: the m+1 level has one window fewer, so ApEn dips below zero
    let alt: Vec<f64> = (0..10).map(|i| (i % 2 + 1) as f64).collect();
    let want = oracles::apen(&alt, 1, 0.1);
    assert!((want + 0.006_185_603_962_621_911).abs() < 1e-15, "{want}");
    assert_eq!(
        approximate_entropy(&alt, 1, Tolerance::Absolute(0.1)).unwrap(),
        want
    );

    let periodic: Vec<f64> = (0..8).map(|i| (i % 2 + 1) as f64).collect();
    assert_eq!(
        sample_entropy(&periodic, 2, Tolerance::Absolute(0.1)).unwrap(),
        0.0
    );
}

#[test]
fn monotone_permutation_entropy_is_zero() {
    let up: Vec<f64> = (0..100).map(f64::from).collect();
    assert_eq!(permutation_entropy(&up, 3, 1).unwrap(), 0.0);
    let down: Vec<f64> = up.iter().rev().cloned().collect();
    assert_eq!(permutation_entropy(&down, 4, 2).unwrap(), 0.0);
}
