//! Exact counting: permutations by jump distance, and the triangle `b_{n,p}`
//! of basis permutations by length and `p`.
//!
//! Two independent builders fill the triangle. The convolution builder
//! follows the decomposition `σ = α n β`; the ODE builder extracts
//! coefficients from `1 + y·B - (1 - x·y)²·∂²ₓB = 0`, which gives
//!
//! ```text
//! b_{n+2,p} = 2n·b_{n+1,p-1} + b_{n,p-1} - n(n-1)·b_{n,p-2}   (+1 when n = p = 0)
//! ```
//!
//! in constant work per entry. [`cross_validate`] checks them against each
//! other.

use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TriangleError {
    #[error("need 0 <= p <= n, got n={n}, p={p}")]
    OutOfDomain { n: usize, p: usize },
    #[error("closed-form sum for d({n},{p}) is not an integer: {value}")]
    NonIntegral { n: usize, p: usize, value: String },
    #[error("triangle built to n={max_n} does not cover n={needed}")]
    NotCovered { max_n: usize, needed: usize },
    #[error("max_n must be at least 2, got {0}")]
    TooSmall(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("file is truncated: {0}")]
    Truncated(String),
    #[error("builders disagree at b({n},{p}): convolution={conv}, ode={ode}")]
    Mismatch {
        n: usize,
        p: usize,
        conv: BigUint,
        ode: BigUint,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Which recurrence produced a triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Convolution,
    Ode,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Convolution => "convolution",
            Provenance::Ode => "ode",
        })
    }
}

impl FromStr for Provenance {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "convolution" | "conv" => Ok(Provenance::Convolution),
            "ode" => Ok(Provenance::Ode),
            other => Err(format!("unknown provenance {other:?}")),
        }
    }
}

/// An indexed exact value of one of the counting sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceValue {
    pub index: usize,
    pub value: BigUint,
}

/// Smallest `p` with `b_{n,p}` possibly nonzero: `⌈(n-2)/2⌉`.
pub fn band_start(n: usize) -> usize {
    n.saturating_sub(1) / 2
}

/// `b_{n,p}` for `2 <= n <= max_n`, stored on the band
/// `⌈(n-2)/2⌉ <= p <= n-2` only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangle {
    max_n: usize,
    rows: Vec<Vec<BigUint>>,
    provenance: Provenance,
}

impl Triangle {
    pub fn max_n(&self) -> usize {
        self.max_n
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// The stored entry, `None` outside the band or past `max_n`.
    pub fn entry(&self, n: usize, p: usize) -> Option<&BigUint> {
        if n < 2 || n > self.max_n || p < band_start(n) {
            return None;
        }
        self.rows[n].get(p - band_start(n))
    }

    pub fn get(&self, n: usize, p: usize) -> BigUint {
        self.entry(n, p).cloned().unwrap_or_default()
    }

    /// `(p, b_{n,p})` over the band of row `n`.
    pub fn row(&self, n: usize) -> impl Iterator<Item = (usize, &BigUint)> {
        let start = if n >= 2 { band_start(n) } else { 0 };
        self.rows
            .get(n)
            .into_iter()
            .flatten()
            .enumerate()
            .map(move |(i, v)| (start + i, v))
    }

    /// `b_n = Σ_p b_{n,p}`.
    pub fn row_sum(&self, n: usize) -> Result<BigUint, TriangleError> {
        self.covers(n)?;
        Ok(self.row(n).map(|(_, v)| v).sum())
    }

    /// `β_p = Σ_n b_{n,p}`, a finite sum over `p+2 <= n <= 2p+2`.
    pub fn beta(&self, p: usize) -> Result<SequenceValue, TriangleError> {
        self.covers(2 * p + 2)?;
        let value = (p + 2..=2 * p + 2).map(|n| self.get(n, p)).sum();
        Ok(SequenceValue { index: p, value })
    }

    fn covers(&self, n: usize) -> Result<(), TriangleError> {
        if n > self.max_n {
            return Err(TriangleError::NotCovered {
                max_n: self.max_n,
                needed: n,
            });
        }
        Ok(())
    }

    /// Band, anchor and sign invariants.
    pub fn validate(&self) -> Result<(), TriangleError> {
        if self.rows.len() != self.max_n + 1 || !self.rows[0].is_empty() || !self.rows[1].is_empty()
        {
            return Err(TriangleError::Invariant("row layout".into()));
        }
        let mut fact = BigUint::one();
        for n in 2..=self.max_n {
            fact *= (n - 1) as u64;
            let width = n - 2 - band_start(n) + 1;
            if self.rows[n].len() != width {
                return Err(TriangleError::Invariant(format!(
                    "row {n} has {} entries, expected {width}",
                    self.rows[n].len()
                )));
            }
            if self.get(n, n - 2) != fact {
                return Err(TriangleError::Invariant(format!(
                    "b({n},{}) != ({})!",
                    n - 2,
                    n - 1
                )));
            }
        }
        Ok(())
    }

    /// Writes the line-oriented cache format:
    ///
    /// ```text
    /// # rightjump triangle
    /// max_n 11
    /// provenance ode
    /// 2 0 1
    /// ...
    /// end 35
    /// ```
    pub fn write_to(&self, mut out: impl Write) -> Result<(), TriangleError> {
        writeln!(out, "# rightjump triangle")?;
        writeln!(out, "max_n {}", self.max_n)?;
        writeln!(out, "provenance {}", self.provenance)?;
        let mut count = 0usize;
        for n in 2..=self.max_n {
            for (p, v) in self.row(n) {
                writeln!(out, "{n} {p} {v}")?;
                count += 1;
            }
        }
        writeln!(out, "end {count}")?;
        Ok(())
    }

    pub fn read_from(input: impl BufRead) -> Result<Triangle, TriangleError> {
        let mut max_n = None;
        let mut provenance = None;
        let mut rows: Vec<Vec<BigUint>> = Vec::new();
        let mut count = 0usize;
        let mut finished = false;
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let err = |message: String| TriangleError::Parse {
                line: lineno,
                message,
            };
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if finished {
                return Err(err("content after end marker".into()));
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            match fields.as_slice() {
                ["max_n", v] => {
                    let m: usize = v.parse().map_err(|_| err(format!("bad max_n {v:?}")))?;
                    if m < 2 {
                        return Err(TriangleError::TooSmall(m));
                    }
                    rows = vec![Vec::new(); m + 1];
                    max_n = Some(m);
                }
                ["provenance", v] => provenance = Some(v.parse::<Provenance>().map_err(err)?),
                ["end", v] => {
                    let declared: usize = v
                        .parse()
                        .map_err(|_| err(format!("bad entry count {v:?}")))?;
                    if declared != count {
                        return Err(TriangleError::Truncated(format!(
                            "end marker declares {declared} entries, read {count}"
                        )));
                    }
                    finished = true;
                }
                [n, p, v] => {
                    let max_n = max_n.ok_or_else(|| err("entry before max_n header".into()))?;
                    let n: usize = n.parse().map_err(|_| err(format!("bad n {n:?}")))?;
                    let p: usize = p.parse().map_err(|_| err(format!("bad p {p:?}")))?;
                    let v: BigInt = v.parse().map_err(|_| err(format!("bad value {v:?}")))?;
                    if v.is_negative() {
                        return Err(TriangleError::Invariant(format!(
                            "negative entry b({n},{p}) = {v}"
                        )));
                    }
                    if n < 2 || n > max_n || p < band_start(n) || p > n - 2 {
                        return Err(TriangleError::Invariant(format!(
                            "entry b({n},{p}) outside the band"
                        )));
                    }
                    let row = &mut rows[n];
                    if row.len() != p - band_start(n) {
                        return Err(err(format!("entry b({n},{p}) out of order")));
                    }
                    row.push(v.to_biguint().expect("nonnegative"));
                    count += 1;
                }
                _ => return Err(err(format!("unrecognized line {trimmed:?}"))),
            }
        }
        if !finished {
            return Err(TriangleError::Truncated("missing end marker".into()));
        }
        let max_n = max_n.ok_or_else(|| TriangleError::Truncated("missing max_n header".into()))?;
        let provenance = provenance
            .ok_or_else(|| TriangleError::Truncated("missing provenance header".into()))?;
        let t = Triangle {
            max_n,
            rows,
            provenance,
        };
        t.validate()?;
        Ok(t)
    }
}

pub fn save_triangle(t: &Triangle, path: impl AsRef<Path>) -> Result<(), TriangleError> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    t.write_to(&mut w)?;
    w.flush()?;
    Ok(())
}

pub fn load_triangle(path: impl AsRef<Path>) -> Result<Triangle, TriangleError> {
    let file = std::fs::File::open(path)?;
    Triangle::read_from(std::io::BufReader::new(file))
}

fn factorials(n: usize) -> Vec<BigUint> {
    let mut f = Vec::with_capacity(n + 1);
    f.push(BigUint::one());
    for i in 1..=n {
        let next = &f[i - 1] * i as u64;
        f.push(next);
    }
    f
}

fn pascal_rows(n: usize) -> Vec<Vec<BigUint>> {
    let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = Vec::with_capacity(i + 1);
        row.push(BigUint::one());
        for k in 1..i {
            row.push(&prev[k - 1] + &prev[k]);
        }
        row.push(BigUint::one());
        rows.push(row);
    }
    rows
}

fn empty_rows(max_n: usize) -> Vec<Vec<BigUint>> {
    vec![Vec::new(); max_n + 1]
}

/// `b_{n,p} = Σ_{ℓ=0}^{p-1} (ℓ+1)!·C(n-2,ℓ)·b_{n-ℓ-2,p-ℓ-1}` for `p < n-2`,
/// with `b_{n,n-2} = (n-1)!`.
pub fn build_triangle_convolution(max_n: usize) -> Result<Triangle, TriangleError> {
    if max_n < 2 {
        return Err(TriangleError::TooSmall(max_n));
    }
    let fact = factorials(max_n);
    let binom = pascal_rows(max_n);
    let mut t = Triangle {
        max_n,
        rows: empty_rows(max_n),
        provenance: Provenance::Convolution,
    };
    for n in 2..=max_n {
        let mut row = Vec::with_capacity(n - 1 - band_start(n));
        for p in band_start(n)..n - 2 {
            let mut acc = BigUint::zero();
            for ell in 0..p {
                if let Some(sub) = t.entry(n - ell - 2, p - ell - 1) {
                    acc += &fact[ell + 1] * &binom[n - 2][ell] * sub;
                }
            }
            row.push(acc);
        }
        row.push(fact[n - 1].clone());
        t.rows[n] = row;
    }
    Ok(t)
}

/// Fills the triangle with the second-order recurrence obtained from the
/// differential equation; each entry costs O(1) big-integer operations.
pub fn build_triangle_ode(max_n: usize) -> Result<Triangle, TriangleError> {
    if max_n < 2 {
        return Err(TriangleError::TooSmall(max_n));
    }
    let mut t = Triangle {
        max_n,
        rows: empty_rows(max_n),
        provenance: Provenance::Ode,
    };
    t.rows[2] = vec![BigUint::one()];
    for m in 3..=max_n {
        let k = (m - 2) as u64;
        let mut row = Vec::with_capacity(m - 1 - band_start(m));
        for p in band_start(m)..=m - 2 {
            let mut v = BigInt::zero();
            if p >= 1 {
                v += BigInt::from(t.get(m - 1, p - 1)) * (2 * k);
                v += BigInt::from(t.get(m - 2, p - 1));
            }
            if p >= 2 {
                v -= BigInt::from(t.get(m - 2, p - 2)) * (k * k.saturating_sub(1));
            }
            let v = v.to_biguint().ok_or_else(|| {
                TriangleError::Invariant(format!("negative ode value at b({m},{p})"))
            })?;
            row.push(v);
        }
        t.rows[m] = row;
    }
    Ok(t)
}

/// Rows compared by the gate in [`build_triangle`].
pub const GATE_N: usize = 60;

/// The default triangle: the ODE builder, used only once it has matched the
/// convolution builder on every row up to [`GATE_N`]. The gate runs once per
/// process.
pub fn build_triangle(max_n: usize) -> Result<Triangle, TriangleError> {
    static GATE: OnceLock<Result<(), String>> = OnceLock::new();
    GATE.get_or_init(|| cross_validate(GATE_N).map_err(|e| e.to_string()))
        .clone()
        .map_err(TriangleError::Invariant)?;
    build_triangle_ode(max_n)
}

/// Builds both triangles up to `max_n` and requires them to be identical.
pub fn cross_validate(max_n: usize) -> Result<(), TriangleError> {
    let conv = build_triangle_convolution(max_n)?;
    let ode = build_triangle_ode(max_n)?;
    for n in 2..=max_n {
        for p in band_start(n)..=n - 2 {
            let (a, b) = (conv.get(n, p), ode.get(n, p));
            if a != b {
                return Err(TriangleError::Mismatch {
                    n,
                    p,
                    conv: a,
                    ode: b,
                });
            }
        }
    }
    Ok(())
}

/// `b_0, …, b_max` from `b_{n+2} = 2n·b_{n+1} + (1+n-n²)·b_n`,
/// `b_0 = b_1 = 0`, `b_2 = 1`.
pub fn b_sequence(max: usize) -> Vec<BigUint> {
    let mut b: Vec<BigInt> = vec![BigInt::zero(), BigInt::zero(), BigInt::one()];
    for n in 1..max.saturating_sub(1) {
        let n_big = BigInt::from(n);
        let next = &n_big * 2u32 * &b[n + 1] + (BigInt::one() + &n_big - &n_big * &n_big) * &b[n];
        b.push(next);
    }
    b.truncate(max + 1);
    b.into_iter()
        .map(|v| v.to_biguint().expect("basis counts are nonnegative"))
        .collect()
}

pub fn b_total(n: usize) -> SequenceValue {
    SequenceValue {
        index: n,
        value: b_sequence(n).swap_remove(n),
    }
}

/// `u_n = n! - b_n`, the permutations of length `n` outside every basis.
pub fn u_total(n: usize) -> SequenceValue {
    let fact: BigUint = (1..=n as u64).map(BigUint::from).product();
    SequenceValue {
        index: n,
        value: fact - b_total(n).value,
    }
}

/// `u_{n+3} - [(n+1)(n²-n-1)u_n - (3n²+3n-1)u_{n+1} + 3(n+1)u_{n+2}]`.
pub fn u_recurrence_residual(n: usize) -> BigInt {
    let u: Vec<BigInt> = (n..=n + 3)
        .map(|i| BigInt::from(u_total(i).value))
        .collect();
    let k = BigInt::from(n);
    let c0 = (&k + 1u32) * (&k * &k - &k - 1u32);
    let c1 = BigInt::from(3u32) * &k * &k + 3u32 * &k - 1u32;
    let c2 = BigInt::from(3u32) * (&k + 1u32);
    &u[3] - (c0 * &u[0] - c1 * &u[1] + c2 * &u[2])
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    BigInt::from(num_integer::binomial(BigUint::from(n), BigUint::from(k)))
}

/// `d_{n,p} = s(n, n-p)`: permutations of length `n` with exactly `p`
/// non-left-to-right-maxima, from the closed-form double sum
///
/// ```text
/// Σ_{0≤j≤h≤p} (-1)^j C(h,j) C(n-1+h, p+h) C(n+p, p-h) (j-h)^{p+h} / h!
/// ```
///
/// evaluated in exact rationals.
pub fn stirling_d(n: usize, p: usize) -> Result<SequenceValue, TriangleError> {
    if p > n {
        return Err(TriangleError::OutOfDomain { n, p });
    }
    if n == 0 {
        // s(0,0) = 1; the sum would need C(-1, 0).
        return Ok(SequenceValue {
            index: 0,
            value: BigUint::one(),
        });
    }
    let mut sum = BigRational::zero();
    let mut h_fact = BigInt::one();
    for h in 0..=p {
        if h > 0 {
            h_fact *= h;
        }
        let outer = binomial(n - 1 + h, p + h) * binomial(n + p, p - h);
        if outer.is_zero() {
            continue;
        }
        for j in 0..=h {
            let power = BigInt::from(j as i64 - h as i64).pow((p + h) as u32);
            let term = binomial(h, j) * &outer * power;
            let term = if j % 2 == 1 { -term } else { term };
            sum += BigRational::new(term, h_fact.clone());
        }
    }
    if !sum.is_integer() || sum.is_negative() {
        return Err(TriangleError::NonIntegral {
            n,
            p,
            value: sum.to_string(),
        });
    }
    Ok(SequenceValue {
        index: n,
        value: sum.to_integer().to_biguint().expect("checked nonnegative"),
    })
}

/// `d_{n,0}, …, d_{n,n-1}` (just `[1]` for `n = 0`); sums to `n!`.
pub fn stirling_row(n: usize) -> Result<Vec<BigUint>, TriangleError> {
    if n == 0 {
        return Ok(vec![BigUint::one()]);
    }
    (0..n).map(|p| stirling_d(n, p).map(|v| v.value)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn stirling_values() {
        let row: Vec<BigUint> = stirling_row(7).unwrap();
        assert_eq!(row, [1u64, 21, 175, 735, 1624, 1764, 720].map(big).to_vec());
        assert_eq!(stirling_d(4, 1).unwrap().value, big(6));
        assert_eq!(stirling_d(9, 0).unwrap().value, big(1));
        assert_eq!(stirling_d(4, 4).unwrap().value, big(0));
        assert_eq!(stirling_d(0, 0).unwrap().value, big(1));
        assert!(stirling_d(3, 4).is_err());
    }

    #[test]
    fn stirling_rows_sum_to_factorial() {
        let fact = factorials(30);
        for (n, f) in fact.iter().enumerate() {
            let s: BigUint = stirling_row(n).unwrap().into_iter().sum();
            assert_eq!(&s, f, "n={n}");
        }
    }

    #[test]
    fn convolution_entries() {
        let t = build_triangle_convolution(11).unwrap();
        assert_eq!(t.get(6, 3), big(58));
        assert_eq!(t.get(5, 3), big(24));
        assert_eq!(t.row_sum(10).unwrap(), big(744425));
        assert_eq!(t.row_sum(11).unwrap(), big(7901410));
        assert_eq!(t.get(4, 0), big(0));
        assert_eq!(t.get(4, 3), big(0));
        t.validate().unwrap();
    }

    #[test]
    fn ode_entries() {
        let t = build_triangle_ode(11).unwrap();
        assert_eq!(t.get(2, 0), big(1));
        assert_eq!(t.get(7, 4), big(444));
        t.validate().unwrap();
        cross_validate(40).unwrap();
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn ode_recurrence_vanishes_off_band() {
        // Run the same recurrence over the full square with machine integers.
        let size = 16;
        let mut b = vec![vec![0i128; size + 1]; size + 1];
        b[2][0] = 1;
        for m in 3..=size {
            let k = (m - 2) as i128;
            for p in 0..=size {
                let mut v = 0;
                if p >= 1 {
                    v += 2 * k * b[m - 1][p - 1] + b[m - 2][p - 1];
                }
                if p >= 2 {
                    v -= k * (k - 1) * b[m - 2][p - 2];
                }
                b[m][p] = v;
            }
        }
        let t = build_triangle_ode(size).unwrap();
        for m in 2..=size {
            for p in 0..=size {
                let expected = if p + 2 <= m && p >= band_start(m) {
                    t.get(m, p)
                } else {
                    big(0)
                };
                assert_eq!(BigUint::try_from(b[m][p]).unwrap(), expected, "b({m},{p})");
            }
        }
    }

    #[test]
    fn sequences() {
        let b = b_sequence(11);
        assert_eq!(
            b,
            [0u64, 0, 1, 2, 7, 32, 179, 1182, 8993, 77440, 744425, 7901410]
                .map(big)
                .to_vec()
        );
        assert_eq!(b_sequence(0), vec![big(0)]);
        assert_eq!(b_total(1).value, big(0));
        assert_eq!(u_total(2).value, big(1));
        assert_eq!(u_total(9).value, big(285440));
        for n in 1..=40 {
            assert!(u_recurrence_residual(n).is_zero(), "n={n}");
        }
        // the printed recurrence does not reach back to n = 0
        assert!(!u_recurrence_residual(0).is_zero());
    }

    #[test]
    fn beta_column() {
        let t = build_triangle(14).unwrap();
        let betas: Vec<BigUint> = (0..=6).map(|p| t.beta(p).unwrap().value).collect();
        assert_eq!(
            betas,
            [1u64, 3, 15, 101, 841, 8283, 93815].map(big).to_vec()
        );
        assert!(t.beta(7).is_err());
        // 8232 and 78732 in the published table stop at n = 10
        let partial = |p: usize| (p + 2..=10).map(|n| t.get(n, p)).sum::<BigUint>();
        assert_eq!((partial(5), partial(6)), (big(8232), big(78732)));
    }

    #[test]
    fn cache_round_trip() {
        let t = build_triangle(30).unwrap();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        let back = Triangle::read_from(&buf[..]).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn cache_rejects_bad_files() {
        let t = build_triangle(6).unwrap();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();

        let negative = text.replace("\n6 2 ", "\n6 2 -");
        assert!(matches!(
            Triangle::read_from(negative.as_bytes()),
            Err(TriangleError::Invariant(_))
        ));

        let cut = &text[..text.find("5 3").unwrap()];
        assert!(matches!(
            Triangle::read_from(cut.as_bytes()),
            Err(TriangleError::Truncated(_))
        ));

        let wrong_count = text.replace("end ", "end 1");
        assert!(matches!(
            Triangle::read_from(wrong_count.as_bytes()),
            Err(TriangleError::Truncated(_))
        ));

        let garbage = text.replace("4 1 1", "4 1 x");
        assert!(matches!(
            Triangle::read_from(garbage.as_bytes()),
            Err(TriangleError::Parse { .. })
        ));

        let bad_anchor = text.replace("5 3 24", "5 3 25");
        assert!(matches!(
            Triangle::read_from(bad_anchor.as_bytes()),
            Err(TriangleError::Invariant(_))
        ));
    }
}
