//! Riemann zeta on the critical line via Euler-Maclaurin summation.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest `|t|` the truncation rule is tuned for.
pub const MAX_T: f64 = 1e6;

/// Even Bernoulli numbers `B_2 .. B_30` as exact fractions.
const BERNOULLI_EVEN: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
];

/// `n^{-s}` for `s = 1/2 + i t`.
fn pow_neg_half(n: f64, t: f64) -> Complex64 {
    let ln = n.ln();
    let mag = n.sqrt().recip();
    let phase = -t * ln;
    Complex64::new(mag * phase.cos(), mag * phase.sin())
}

/// `zeta(1/2 + i t)` for `|t| <= 1e6`, absolute error below 1e-8.
pub fn zeta_critical_line(t: f64) -> Result<Complex64> {
    if !t.is_finite() || t.abs() > MAX_T {
        return Err(Error::Domain(format!("zeta argument t = {t} outside |t| <= {MAX_T}")));
    }
    let s = Complex64::new(0.5, t);
    // With N >= |t|/2 successive correction terms shrink by roughly
    // (|s| / (2 pi N))^2 <= 1/10.
    let n_terms = (t.abs() / 2.0).ceil() as usize + 10;
    let big_n = n_terms as f64;

    let mut sum = Complex64::new(0.0, 0.0);
    for n in 1..n_terms {
        sum += pow_neg_half(n as f64, t);
    }
    let n_pow = pow_neg_half(big_n, t);
    sum += n_pow * big_n / (s - 1.0);
    sum += n_pow * 0.5;

    // Tail corrections: B_2k / (2k)! * s (s+1) ... (s+2k-2) * N^{-s-2k+1}.
    let mut rising = s; // s (s+1) ... (s+2k-2)
    let mut n_factor = n_pow / big_n; // N^{-s-2k+1}
    let mut factorial = 2.0; // (2k)!
    for (k, &(num, den)) in BERNOULLI_EVEN.iter().enumerate() {
        let term = rising * n_factor * (num / den / factorial);
        sum += term;
        if term.norm() < 1e-17 * sum.norm().max(1.0) {
            break;
        }
        let kk = (k + 1) as f64;
        rising *= (s + (2.0 * kk - 1.0)) * (s + 2.0 * kk);
        n_factor /= big_n * big_n;
        factorial *= (2.0 * kk + 1.0) * (2.0 * kk + 2.0);
    }
    Ok(sum)
}
