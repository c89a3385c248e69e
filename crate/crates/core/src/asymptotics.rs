//! Floating-point checks of the growth of `b_n / n!` and of the distribution
//! of left-to-right maxima over basis permutations.
//!
//! Everything here works with normalized quantities `q_{n,p} = b_{n,p} / n!`
//! and `r_n = b_n / n!`, which stay in `[0, 1]` where the exact integers would
//! need `O(n log n)` bits.

use std::f64::consts::PI;

use serde::Serialize;
use thiserror::Error;

use crate::triangle::band_start;

/// Largest `n` accepted by [`ltr_distribution`].
pub const MAX_DISTRIBUTION_N: usize = 5000;

/// Tolerated relative gap between the row sum of the normalized triangle and
/// the independently computed `r_n`.
pub const HEALTH_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymptoticsError {
    #[error("gamma is only evaluated for positive arguments, got {0}")]
    NonPositive(f64),
    #[error("exponent {0} is an integer; the coefficient expansion needs a non-integer")]
    IntegerExponent(f64),
    #[error("n={n} is outside {min}..={max}")]
    OutOfRange { n: usize, min: usize, max: usize },
    #[error("row sum {row_sum:e} drifted from r_n = {expected:e} (relative error {rel:e})")]
    NumericalHealth {
        row_sum: f64,
        expected: f64,
        rel: f64,
    },
}

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
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

/// Euler's gamma function for `x > 0`.
pub fn gamma_function(x: f64) -> Result<f64, AsymptoticsError> {
    if x.is_nan() || x <= 0.0 {
        return Err(AsymptoticsError::NonPositive(x));
    }
    Ok(gamma(x))
}

/// Gamma on the whole real line minus the poles, via reflection below 1/2.
fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let series = LANCZOS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS[0], |acc, (i, &c)| acc + c / (x + i as f64 + 1.0));
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * series
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticConstants {
    /// Golden ratio.
    pub phi: f64,
    /// `2 - φ`, the decay exponent of `b_n / n!`.
    pub exponent: f64,
    /// `φ / (√5 Γ(φ - 1))`.
    pub c: f64,
}

pub fn asymptotic_constant() -> AsymptoticConstants {
    let sqrt5 = 5f64.sqrt();
    let phi = (1.0 + sqrt5) / 2.0;
    AsymptoticConstants {
        phi,
        exponent: 2.0 - phi,
        c: phi / (sqrt5 * gamma(phi - 1.0)),
    }
}

/// `r_0, …, r_max` with `r_n = b_n / n!`, from
/// `r_{n+2} = 2n·r_{n+1}/(n+2) + (1+n-n²)·r_n/((n+1)(n+2))`.
pub fn normalized_totals(max: usize) -> Vec<f64> {
    let mut r = vec![0.0, 0.0, 0.5];
    for n in 1..max.saturating_sub(1) {
        let nf = n as f64;
        let next = 2.0 * nf * r[n + 1] / (nf + 2.0)
            + (1.0 + nf - nf * nf) * r[n] / ((nf + 1.0) * (nf + 2.0));
        r.push(next);
    }
    r.truncate(max + 1);
    r
}

/// `r_n · n^{2-φ}`, which tends to the constant `C`.
pub fn ratio_check(n: usize) -> Result<f64, AsymptoticsError> {
    if n < 2 {
        return Err(AsymptoticsError::OutOfRange {
            n,
            min: 2,
            max: usize::MAX,
        });
    }
    let r = normalized_totals(n)[n];
    Ok(r * (n as f64).powf(asymptotic_constant().exponent))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularityCheck {
    /// `[xⁿ](1-x)^a`, from the product formula.
    pub exact: f64,
    /// `n^{-1-a}/Γ(-a) · (1 + a(a+1)/(2n))`.
    pub asymptotic: f64,
}

impl SingularityCheck {
    pub fn relative_error(&self) -> f64 {
        ((self.exact - self.asymptotic) / self.exact).abs()
    }
}

/// Compares the exact coefficient of `xⁿ` in `(1-x)^a` with its two-term
/// singularity expansion.
pub fn singularity_coefficient_check(
    a: f64,
    n: usize,
) -> Result<SingularityCheck, AsymptoticsError> {
    if a.fract() == 0.0 {
        return Err(AsymptoticsError::IntegerExponent(a));
    }
    if n < 1 {
        return Err(AsymptoticsError::OutOfRange {
            n,
            min: 1,
            max: usize::MAX,
        });
    }
    // (-1)^n C(a, n) = Π_{k<n} (k - a)/(k + 1)
    let exact = (0..n).fold(1.0, |acc, k| acc * (k as f64 - a) / (k as f64 + 1.0));
    let nf = n as f64;
    let asymptotic = nf.powf(-1.0 - a) / gamma(-a) * (1.0 + 0.5 * a * (a + 1.0) / nf);
    Ok(SingularityCheck { exact, asymptotic })
}

/// Rows of `q_{n,p} = b_{n,p}/n!`, produced one at a time.
///
/// Each row is indexed by `p` from 0 to `n-2`; entries below the band are
/// exactly zero.
pub struct NormalizedRows {
    prev: Vec<f64>,
    cur: Vec<f64>,
    n: usize,
}

impl NormalizedRows {
    /// Starts at row `n = 2`.
    pub fn new() -> Self {
        NormalizedRows {
            prev: Vec::new(),
            cur: vec![0.5],
            n: 2,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self) -> &[f64] {
        &self.cur
    }

    /// Moves to row `n + 1` using
    /// `q_{m,p} = 2k·q_{m-1,p-1}/m + q_{m-2,p-1}/((m-1)m) - k(k-1)·q_{m-2,p-2}/((m-1)m)`
    /// with `k = m - 2`.
    pub fn advance(&mut self) {
        let m = self.n + 1;
        let k = (m - 2) as f64;
        let mf = m as f64;
        let scale = 1.0 / ((mf - 1.0) * mf);
        let at = |row: &[f64], p: usize| row.get(p).copied().unwrap_or(0.0);
        let mut next = vec![0.0; m - 1];
        for (p, slot) in next.iter_mut().enumerate().skip(band_start(m)) {
            let mut v = 0.0;
            if p >= 1 {
                v += 2.0 * k * at(&self.cur, p - 1) / mf + at(&self.prev, p - 1) * scale;
            }
            if p >= 2 {
                v -= k * (k - 1.0) * at(&self.prev, p - 2) * scale;
            }
            *slot = v;
        }
        self.prev = std::mem::replace(&mut self.cur, next);
        self.n = m;
    }
}

impl Default for NormalizedRows {
    fn default() -> Self {
        Self::new()
    }
}

/// Row `n` of the normalized triangle.
pub fn normalized_row(n: usize) -> Result<Vec<f64>, AsymptoticsError> {
    if !(2..=MAX_DISTRIBUTION_N).contains(&n) {
        return Err(AsymptoticsError::OutOfRange {
            n,
            min: 2,
            max: MAX_DISTRIBUTION_N,
        });
    }
    let mut rows = NormalizedRows::new();
    while rows.n() < n {
        rows.advance();
    }
    Ok(rows.cur)
}

/// Neumaier-compensated sum.
fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Distribution of the number `k` of left-to-right maxima over basis
/// permutations of length `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionStats {
    pub n: usize,
    /// `(k, probability)` for `k = 1 ..= ⌊n/2⌋`, increasing in `k`.
    pub histogram: Vec<(usize, f64)>,
    pub mean: f64,
    pub variance: f64,
    pub total_mass: f64,
}

impl DistributionStats {
    pub fn probability(&self, k: usize) -> f64 {
        self.histogram
            .iter()
            .find(|(kk, _)| *kk == k)
            .map_or(0.0, |&(_, w)| w)
    }

    /// Weights rise (weakly) to a single peak and then fall (weakly).
    pub fn is_unimodal(&self) -> bool {
        let w: Vec<f64> = self.histogram.iter().map(|&(_, w)| w).collect();
        let peak = w
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map_or(0, |(i, _)| i);
        w[..=peak].windows(2).all(|p| p[0] <= p[1]) && w[peak..].windows(2).all(|p| p[0] >= p[1])
    }
}

pub fn ltr_distribution(n: usize) -> Result<DistributionStats, AsymptoticsError> {
    let row = normalized_row(n)?;
    let expected = normalized_totals(n)[n];
    let row_sum = compensated_sum(row.iter().copied());
    let rel = ((row_sum - expected) / expected).abs();
    // NaN fails the gate as well
    if rel.is_nan() || rel > HEALTH_TOLERANCE {
        return Err(AsymptoticsError::NumericalHealth {
            row_sum,
            expected,
            rel,
        });
    }
    // k = n - p - 1, so increasing k walks p downwards through the band.
    let histogram: Vec<(usize, f64)> = (band_start(n)..=n - 2)
        .rev()
        .map(|p| (n - p - 1, row[p] / row_sum))
        .collect();
    let total_mass = compensated_sum(histogram.iter().map(|&(_, w)| w));
    let mean = compensated_sum(histogram.iter().map(|&(k, w)| k as f64 * w));
    let variance = compensated_sum(
        histogram
            .iter()
            .map(|&(k, w)| (k as f64 - mean).powi(2) * w),
    );
    Ok(DistributionStats {
        n,
        histogram,
        mean,
        variance,
        total_mass,
    })
}

/// `mean(n2) - mean(n1)` of the left-to-right-maxima count.
pub fn mean_growth_check(n1: usize, n2: usize) -> Result<f64, AsymptoticsError> {
    if n1 == n2 {
        ltr_distribution(n1)?;
        return Ok(0.0);
    }
    Ok(ltr_distribution(n2)?.mean - ltr_distribution(n1)?.mean)
}
