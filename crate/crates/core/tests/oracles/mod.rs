//! Independent reference implementations, written for clarity over speed.
#![allow(dead_code)]

/// Two-sample KS statistic from the pooled empirical CDFs.
pub fn ks_pooled(a: &[f64], b: &[f64]) -> f64 {
    let ecdf = |s: &[f64], v: f64| s.iter().filter(|&&x| x <= v).count() as f64 / s.len() as f64;
    a.iter()
        .chain(b)
        .map(|&v| (ecdf(a, v) - ecdf(b, v)).abs())
        .fold(0.0, f64::max)
}

fn cheb(x: &[f64], i: usize, j: usize, len: usize) -> f64 {
    (0..len)
        .map(|k| (x[i + k] - x[j + k]).abs())
        .fold(0.0, f64::max)
}

/// Sample entropy by counting ordered template pairs; `None` when undefined.
pub fn sampen(x: &[f64], m: usize, r: f64) -> Option<f64> {
    let n = x.len();
    let templates = n - m;
    let (mut a, mut b) = (0u64, 0u64);
    for i in 0..templates {
        for j in 0..templates {
            if i == j {
                continue;
            }
            if cheb(x, i, j, m) <= r {
                b += 1;
            }
            if cheb(x, i, j, m + 1) <= r {
                a += 1;
            }
        }
    }
    (a > 0 && b > 0).then(|| (b as f64 / a as f64).ln())
}

/// Approximate entropy with self-matches.
pub fn apen(x: &[f64], m: usize, r: f64) -> f64 {
    let phi = |len: usize| {
        let count = x.len() - len + 1;
        let mut total = 0.0;
        for i in 0..count {
            let c = (0..count).filter(|&j| cheb(x, i, j, len) <= r).count();
            total += (c as f64 / count as f64).ln();
        }
        total / count as f64
    };
    phi(m) - phi(m + 1)
}

/// Lanczos approximation (g = 7).
pub fn ln_gamma(z: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if z < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * z).sin()).ln() - ln_gamma(1.0 - z);
    }
    let z = z - 1.0;
    let mut a = C[0];
    for (i, c) in C.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
}

/// Two-sided Student-t tail by composite Simpson integration of the density.
pub fn t_two_sided_simpson(t: f64, df: f64) -> f64 {
    let ln_c =
        ln_gamma((df + 1.0) / 2.0) - ln_gamma(df / 2.0) - 0.5 * (df * std::f64::consts::PI).ln();
    let f = |s: f64| (ln_c - (df + 1.0) / 2.0 * (1.0 + s * s / df).ln()).exp();
    let upper = t.abs();
    if upper == 0.0 {
        return 1.0;
    }
    let n = 4000;
    let h = upper / n as f64;
    let mut sum = f(0.0) + f(upper);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(i as f64 * h);
    }
    (1.0 - 2.0 * sum * h / 3.0).max(0.0)
}

/// Entropy of a probability vector in nats.
pub fn entropy_of(p: &[f64]) -> f64 {
    p.iter().filter(|&&q| q > 0.0).map(|&q| -q * q.ln()).sum()
}
