//! Cross-validation suite: every exhaustive oracle, regression table and
//! dual-recurrence gate in one pass, reported as pass/fail lines.

use std::collections::BTreeSet;
use std::fmt;
use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::asymptotics::{
    asymptotic_constant, ltr_distribution, ratio_check, singularity_coefficient_check,
};
use crate::basis::{check_basis, check_basis_oracle, enumerate_basis, enumerate_basis_for_p};
use crate::congruence::{detect_period, detect_period_with, PRecurrence, PeriodOptions};
use crate::perm::{reachable_layers, replay, witness_jumps, Permutation, Permutations};
use crate::triangle::{b_sequence, build_triangle_ode, cross_validate, u_recurrence_residual};

/// Published counts `b_{n,p}` for `2 <= n <= 11`, `0 <= p <= 6`, as
/// `(n, p, value)`.
pub const PUBLISHED_TRIANGLE: &[(usize, usize, u64)] = &[
    (2, 0, 1),
    (3, 1, 2),
    (4, 1, 1),
    (4, 2, 6),
    (5, 2, 8),
    (6, 2, 1),
    (5, 3, 24),
    (6, 3, 58),
    (7, 3, 18),
    (8, 3, 1),
    (6, 4, 120),
    (7, 4, 444),
    (8, 4, 244),
    (9, 4, 32),
    (10, 4, 1),
    (7, 5, 720),
    (8, 5, 3708),
    (9, 5, 3104),
    (10, 5, 700),
    (11, 5, 50),
    (8, 6, 5040),
    (9, 6, 33984),
    (10, 6, 39708),
    (11, 6, 13400),
];

/// `β_0, …, β_6`, full column sums.
pub const BETA: [u64; 7] = [1, 3, 15, 101, 841, 8283, 93815];

/// The `β` column as published. The last two entries only sum `n <= 10`.
pub const PUBLISHED_BETA: [u64; 7] = [1, 3, 15, 101, 841, 8232, 78732];

/// `b_2, …, b_11`.
pub const B_TOTALS: [u64; 10] = [1, 2, 7, 32, 179, 1182, 8993, 77440, 744425, 7901410];

/// `B_0`, `B_1`, `B_2` in the order they are usually listed, which is not shortlex.
pub const BASIS_LISTS: [&[&str]; 3] = [
    &["21"],
    &["312", "321", "2143"],
    &[
        "4123", "4132", "4213", "4231", "4312", "4321", "21534", "21543", "31254", "32154",
        "31524", "31542", "32514", "32541", "214365",
    ],
];

/// Permutations of length 7 at distance `p = 0..=6`.
pub const DISTANCE_LAYERS_7: [usize; 7] = [1, 21, 175, 735, 1624, 1764, 720];

/// `b_n mod 15` for `n >= 9`.
pub const CYCLE_MOD_15: [u64; 12] = [10, 5, 10, 10, 0, 10, 5, 10, 5, 5, 0, 5];

pub const PERIOD_MOD_3617: u64 = 26_158_144;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} ({:.2}s) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.seconds,
            self.detail
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerificationReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

type CheckFn = fn() -> Result<String, String>;

/// Runs the suite. `fast` drops the slow jobs (the `m = 3617` period and the
/// `n = 4000` distribution) and caps the recognizer check at `n = 8`.
pub fn run_verification(fast: bool, progress: &mut dyn FnMut(&str)) -> VerificationReport {
    let mut checks: Vec<(&'static str, CheckFn)> = vec![
        ("basis lists B_0..B_2", check_basis_lists),
        (
            "recognizer equals deletion oracle",
            if fast {
                || recognizers_agree(8)
            } else {
                || recognizers_agree(9)
            },
        ),
        ("distance equals BFS depth (n <= 7)", check_distance_law),
        ("published triangle regression", check_published_triangle),
        (
            "ode triangle equals convolution triangle (n <= 60)",
            check_dual_recurrence,
        ),
        (
            "b_n series, exhaustive counts and u_n recurrence",
            check_sequences,
        ),
        ("b_n mod 15 and mod 1", check_small_congruences),
        (
            "asymptotic constant and singularity expansion",
            check_asymptotics,
        ),
        ("n = 4 maxima distribution", check_small_distribution),
        (
            "reachable sets equal avoiders of B_p",
            check_class_equivalence,
        ),
        ("witness jumps replay (S_6)", check_witnesses),
    ];
    if !fast {
        checks.push(("b_n mod 3617 period", check_large_congruence));
        checks.push(("mean maxima growth 2000 -> 4000", check_limit_law));
    }
    let mut report = VerificationReport::default();
    for (name, f) in checks {
        progress(name);
        let start = Instant::now();
        let result = f();
        let seconds = start.elapsed().as_secs_f64();
        let (passed, detail) = match result {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        report.checks.push(CheckOutcome {
            name,
            passed,
            detail,
            seconds,
        });
    }
    report
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn check_basis_lists() -> Result<String, String> {
    for (p, list) in BASIS_LISTS.iter().enumerate() {
        let got: BTreeSet<Permutation> = enumerate_basis_for_p(p)
            .map_err(|e| e.to_string())?
            .into_iter()
            .collect();
        let want: BTreeSet<Permutation> = list.iter().map(|s| s.parse().unwrap()).collect();
        ensure(got == want, || format!("B_{p} differs"))?;
    }
    Ok("3 sets match".into())
}

fn recognizers_agree(max_n: usize) -> Result<String, String> {
    let mut total = 0usize;
    for n in 2..=max_n {
        let bad = Permutations::new(n)
            .par_bridge()
            .find_any(|s| check_basis(s).ok() != check_basis_oracle(s).ok());
        if let Some(s) = bad {
            return Err(format!("disagreement at {s}"));
        }
        total += (1..=n).product::<usize>();
    }
    Ok(format!("{total} permutations"))
}

fn check_distance_law() -> Result<String, String> {
    let layers = reachable_layers(7, 7, 7).map_err(|e| e.to_string())?;
    let sizes: Vec<usize> = layers.iter().map(Vec::len).collect();
    ensure(sizes == DISTANCE_LAYERS_7, || {
        format!("layer sizes {sizes:?}")
    })?;
    for (depth, layer) in layers.iter().enumerate() {
        for s in layer {
            ensure(s.non_ltr_count() == depth, || {
                format!("{s} at depth {depth}")
            })?;
        }
    }
    Ok(format!("layers {sizes:?}"))
}

fn check_published_triangle() -> Result<String, String> {
    let t = build_triangle_ode(14).map_err(|e| e.to_string())?;
    for &(n, p, v) in PUBLISHED_TRIANGLE {
        ensure(t.get(n, p) == BigUint::from(v), || {
            format!("b({n},{p}) = {}", t.get(n, p))
        })?;
    }
    for (p, &v) in BETA.iter().enumerate() {
        let got = t.beta(p).map_err(|e| e.to_string())?.value;
        ensure(got == BigUint::from(v), || format!("beta_{p} = {got}"))?;
    }
    for (i, &v) in B_TOTALS.iter().enumerate() {
        let got = t.row_sum(i + 2).map_err(|e| e.to_string())?;
        ensure(got == BigUint::from(v), || format!("b_{} = {got}", i + 2))?;
    }
    Ok(format!(
        "{} entries, 7 column sums, 10 row sums",
        PUBLISHED_TRIANGLE.len()
    ))
}

fn check_dual_recurrence() -> Result<String, String> {
    cross_validate(60).map_err(|e| e.to_string())?;
    let t = build_triangle_ode(200).map_err(|e| e.to_string())?;
    let b = b_sequence(200);
    for (n, bn) in b.iter().enumerate().skip(2) {
        ensure(t.row_sum(n).unwrap() == *bn, || format!("row sum {n}"))?;
    }
    Ok("bit-exact to n = 60; row sums to n = 200".into())
}

fn check_sequences() -> Result<String, String> {
    let b = b_sequence(11);
    for (i, &v) in B_TOTALS.iter().enumerate() {
        ensure(b[i + 2] == BigUint::from(v), || format!("b_{}", i + 2))?;
    }
    for (n, bn) in b.iter().enumerate().take(10).skip(2) {
        let count: usize = enumerate_basis(n)
            .map_err(|e| e.to_string())?
            .values()
            .map(Vec::len)
            .sum();
        ensure(BigUint::from(count) == *bn, || {
            format!("exhaustive count at n = {n}: {count}")
        })?;
    }
    for n in 1..=100 {
        ensure(u_recurrence_residual(n) == 0.into(), || {
            format!("u residual at {n}")
        })?;
    }
    Ok("b_2..b_11, exhaustive n <= 9, u residual n = 1..100".into())
}

fn check_small_congruences() -> Result<String, String> {
    let rec = PRecurrence::basis_counts();
    let rep = detect_period(&rec, 15).map_err(|e| e.to_string())?;
    ensure(
        rep.period == 12 && rep.preperiod <= 9 && rep.verified,
        || format!("{rep:?}"),
    )?;
    let seq = crate::congruence::mod_sequence(&rec, 15, 9 + 36).map_err(|e| e.to_string())?;
    for (i, &v) in seq[9..].iter().enumerate() {
        ensure(v == CYCLE_MOD_15[i % 12], || {
            format!("b_{} mod 15 = {v}", i + 9)
        })?;
    }
    let one = detect_period(&rec, 1).map_err(|e| e.to_string())?;
    ensure(one.period == 1, || format!("{one:?}"))?;
    Ok(format!("period 12 from n = {}", rep.preperiod))
}

fn check_large_congruence() -> Result<String, String> {
    let opts = PeriodOptions {
        keep_cycle: false,
        ..PeriodOptions::default()
    };
    let rep = detect_period_with(&PRecurrence::basis_counts(), 3617, &opts, &mut |_, _| {})
        .map_err(|e| e.to_string())?;
    ensure(rep.period == PERIOD_MOD_3617 && rep.verified, || {
        format!("period {}", rep.period)
    })?;
    Ok(format!("period {}", rep.period))
}

fn check_asymptotics() -> Result<String, String> {
    let k = asymptotic_constant();
    ensure((k.c - 0.499).abs() <= 0.002, || format!("C = {}", k.c))?;
    ensure((k.exponent - 0.381).abs() <= 0.001, || {
        format!("exponent = {}", k.exponent)
    })?;
    let ratio = ratio_check(100_000).map_err(|e| e.to_string())?;
    ensure(((ratio - k.c) / k.c).abs() <= 0.02, || {
        format!("ratio {ratio}")
    })?;
    let sqrt5 = 5f64.sqrt();
    for a in [(1.0 + sqrt5) / 2.0, (1.0 - sqrt5) / 2.0] {
        let s = singularity_coefficient_check(a, 1000).map_err(|e| e.to_string())?;
        ensure(s.relative_error() < 1e-3, || format!("a = {a}: {s:?}"))?;
    }
    Ok(format!("C = {:.6}, ratio(1e5) = {ratio:.6}", k.c))
}

fn check_small_distribution() -> Result<String, String> {
    let d = ltr_distribution(4).map_err(|e| e.to_string())?;
    ensure(
        (d.probability(1) - 6.0 / 7.0).abs() < 1e-12
            && (d.probability(2) - 1.0 / 7.0).abs() < 1e-12,
        || format!("{:?}", d.histogram),
    )?;
    Ok("{1: 6/7, 2: 1/7}".into())
}

fn check_limit_law() -> Result<String, String> {
    let d2000 = ltr_distribution(2000).map_err(|e| e.to_string())?;
    let d4000 = ltr_distribution(4000).map_err(|e| e.to_string())?;
    let growth = d4000.mean - d2000.mean;
    let target = 2f64.ln() / 5f64.sqrt();
    ensure((growth - target).abs() <= 0.1, || {
        format!("growth {growth}")
    })?;
    ensure(d4000.is_unimodal(), || {
        "histogram at 4000 is not unimodal".into()
    })?;
    Ok(format!(
        "growth {growth:.4} vs {target:.4}; mean(4000) = {:.4}",
        d4000.mean
    ))
}

fn check_class_equivalence() -> Result<String, String> {
    for p in 0..=2 {
        let basis = enumerate_basis_for_p(p).map_err(|e| e.to_string())?;
        for n in 1..=7 {
            let reach = crate::perm::reachable_set_with_cap(n, p, 7).map_err(|e| e.to_string())?;
            let avoiders: BTreeSet<Permutation> = Permutations::new(n)
                .filter(|s| s.avoids_all(&basis))
                .collect();
            ensure(reach == avoiders, || format!("n = {n}, p = {p}"))?;
        }
    }
    Ok("n <= 7, p <= 2".into())
}

fn check_witnesses() -> Result<String, String> {
    let id = Permutation::identity(6);
    for s in Permutations::new(6) {
        let w = witness_jumps(&s);
        ensure(w.len() == s.non_ltr_count(), || {
            format!("{s}: length {}", w.len())
        })?;
        ensure(replay(&id, &w).ok().as_ref() == Some(&s), || {
            format!("{s}: replay")
        })?;
    }
    Ok("720 permutations".into())
}

/// Exhaustive count of `|{σ ∈ S_n : t_σ = p}|` for `p = 0..n`.
pub fn brute_force_distance_counts(n: usize) -> Vec<usize> {
    let mut counts = vec![0usize; n.max(1)];
    for s in Permutations::new(n) {
        counts[s.non_ltr_count()] += 1;
    }
    counts
}
