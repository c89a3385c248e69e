//! Acceptance gate: one PASS/FAIL line per criterion, each at its stated
//! tolerance and runtime budget.
//!
//! Run with `cargo test -p rightjump --test acceptance -- --nocapture` to
//! see the report.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;
use rightjump::asymptotics::{
    asymptotic_constant, ltr_distribution, normalized_row, normalized_totals, ratio_check,
    singularity_coefficient_check,
};
use rightjump::basis::{check_basis, check_basis_oracle, enumerate_basis_for_p};
use rightjump::congruence::{detect_period, detect_period_with, PRecurrence, PeriodOptions};
use rightjump::perm::{
    jump_distance, reachable_set_with_cap, replay, right_jump_neighbors, witness_jumps,
    Permutation, Permutations,
};
use rightjump::triangle::{
    b_sequence, build_triangle_convolution, build_triangle_ode, cross_validate, load_triangle,
    u_recurrence_residual,
};

/// Criteria that cannot pass as written. Each is still run and must still
/// fail; a pass here means the entry should be removed.
const KNOWN_UNATTAINABLE: &[u32] = &[4];

struct Outcome {
    id: u32,
    title: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
}

fn run(
    id: u32,
    title: &'static str,
    budget: Option<Duration>,
    f: impl FnOnce() -> Result<String, String>,
) -> Outcome {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if let Some(b) = budget {
        if elapsed > b {
            passed = false;
            detail = format!("{detail}; over budget of {b:?}");
        }
    }
    let o = Outcome {
        id,
        title,
        passed,
        detail,
        elapsed,
    };
    println!(
        "criterion {:>2} [{}] {} ({:.2}s): {}",
        o.id,
        if o.passed { "PASS" } else { "FAIL" },
        o.title,
        o.elapsed.as_secs_f64(),
        o.detail
    );
    o
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn perms(list: &[&str]) -> Vec<Permutation> {
    list.iter().map(|s| s.parse().unwrap()).collect()
}

fn c1_basis_sets() -> Result<String, String> {
    let golden = include_str!("data/basis_b0_b2.txt");
    let mut rendered = String::new();
    for p in 0..=2 {
        rendered.push_str(&format!("# B_{p}\n"));
        for s in enumerate_basis_for_p(p).map_err(|e| e.to_string())? {
            rendered.push_str(&format!("{s}\n"));
        }
    }
    check(rendered == golden, || {
        "output differs from golden file".into()
    })?;
    let b2: BTreeSet<Permutation> = enumerate_basis_for_p(2).unwrap().into_iter().collect();
    let listed: BTreeSet<Permutation> = perms(&[
        "4123", "4132", "4213", "4231", "4312", "4321", "21534", "21543", "31254", "32154",
        "31524", "31542", "32514", "32541", "214365",
    ])
    .into_iter()
    .collect();
    check(b2 == listed, || {
        "B_2 differs from the published list".into()
    })?;
    Ok("B_0, B_1, B_2 byte-exact (1 + 3 + 15)".into())
}

fn c2_recognizers() -> Result<String, String> {
    let mut total = 0usize;
    for n in 2..=9 {
        let count = Permutations::new(n)
            .par_bridge()
            .map(|s| {
                let a = check_basis(&s).unwrap();
                let b = check_basis_oracle(&s).unwrap();
                if a != b {
                    Err(format!("{s}: {a:?} vs {b:?}"))
                } else {
                    Ok(1usize)
                }
            })
            .try_reduce(|| 0, |x, y| Ok(x + y))?;
        total += count;
    }
    check(total == 409_112, || format!("visited {total}"))?;
    Ok(format!("{total} permutations agree, failure tags included"))
}

fn c3_distance_law() -> Result<String, String> {
    let id = Permutation::identity(7);
    let mut depth = HashMap::from([(id.clone(), 0usize)]);
    let mut queue = VecDeque::from([id.clone()]);
    while let Some(s) = queue.pop_front() {
        let d = depth[&s];
        for t in right_jump_neighbors(&s) {
            depth.entry(t.clone()).or_insert_with(|| {
                queue.push_back(t);
                d + 1
            });
        }
    }
    check(depth.len() == 5040, || {
        format!("BFS reached {}", depth.len())
    })?;
    let mut layers = vec![0usize; 7];
    for n in 1..=7 {
        for s in Permutations::new(n) {
            let padded: Vec<u32> = s.values().iter().copied().chain(n as u32 + 1..=7).collect();
            let d = depth[&Permutation::new(padded).unwrap()];
            let got = jump_distance(&Permutation::identity(n), &s).unwrap();
            check(got == d, || format!("{s}: formula {got}, BFS {d}"))?;
            if n == 7 {
                layers[d] += 1;
            }
        }
    }
    check(layers == [1, 21, 175, 735, 1624, 1764, 720], || {
        format!("layers {layers:?}")
    })?;
    Ok(format!("all of S_1..S_7 agree with BFS; layers {layers:?}"))
}

const PUBLISHED_TRIANGLE: &[(usize, usize, u64)] = &[
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

fn c4_published_triangle() -> Result<String, String> {
    let golden = load_triangle(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/tests/data/published_triangle.txt"
    ))
    .map_err(|e| e.to_string())?;
    let t = build_triangle_ode(14).map_err(|e| e.to_string())?;
    for &(n, p, v) in PUBLISHED_TRIANGLE {
        check(t.get(n, p) == big(v), || {
            format!("b({n},{p}) = {}", t.get(n, p))
        })?;
        check(golden.get(n, p) == big(v), || format!("golden b({n},{p})"))?;
    }
    let sums = [1u64, 2, 7, 32, 179, 1182, 8993, 77440, 744425, 7901410];
    for (i, &v) in sums.iter().enumerate() {
        let n = i + 2;
        check(t.row_sum(n).unwrap() == big(v), || format!("b_{n}"))?;
    }
    let printed = [1u64, 3, 15, 101, 841, 8232, 78732];
    let computed: Vec<BigUint> = (0..=6).map(|p| t.beta(p).unwrap().value).collect();
    let mismatched: Vec<String> = (0..=6)
        .filter(|&p| computed[p] != big(printed[p]))
        .map(|p| {
            let partial: BigUint = (p + 2..=10).map(|n| t.get(n, p)).sum();
            format!(
                "beta_{p} = {} vs printed {} (sum over n <= 10 is {partial})",
                computed[p], printed[p]
            )
        })
        .collect();
    check(mismatched.is_empty(), || {
        format!(
            "24 entries and 10 row sums exact; {}",
            mismatched.join("; ")
        )
    })?;
    Ok("entries, beta column and row sums exact".into())
}

fn c5_dual_recurrence() -> Result<String, String> {
    cross_validate(60).map_err(|e| e.to_string())?;
    let conv = build_triangle_convolution(60).unwrap();
    let ode = build_triangle_ode(200).unwrap();
    for n in 2..=60 {
        check(conv.row(n).eq(ode.row(n)), || format!("row {n}"))?;
    }
    let b = b_sequence(200);
    for (n, bn) in b.iter().enumerate().skip(2) {
        check(ode.row_sum(n).unwrap() == *bn, || format!("row sum {n}"))?;
    }
    Ok("bit-exact for n <= 60; row sums equal b_n for n <= 200".into())
}

fn c6_sequences() -> Result<String, String> {
    let b = b_sequence(9);
    check(
        b[2..] == [1u64, 2, 7, 32, 179, 1182, 8993, 77440].map(big),
        || format!("{b:?}"),
    )?;
    for (n, bn) in b.iter().enumerate().skip(2) {
        // Minimal permutations outside C_{t-1}, straight from the definition.
        let count = Permutations::new(n)
            .par_bridge()
            .filter(|s| {
                let t = s.non_ltr_count();
                t > 0 && (1..=n).all(|i| s.delete_position(i).non_ltr_count() < t)
            })
            .count();
        check(big(count as u64) == *bn, || {
            format!("n={n}: {count} by enumeration vs {bn}")
        })?;
    }
    let bad: Vec<usize> = (1..=100)
        .filter(|&n| u_recurrence_residual(n) != BigInt::default())
        .collect();
    check(bad.is_empty(), || format!("nonzero residual at {bad:?}"))?;
    Ok("series, exhaustive counts n <= 9 and u_n residuals n = 1..=100 all exact".into())
}

fn c7_fast() -> Result<String, String> {
    let rec = PRecurrence::basis_counts();
    let rep = detect_period(&rec, 15).map_err(|e| e.to_string())?;
    check(rep.period == 12 && rep.verified, || format!("{rep:?}"))?;
    check(rep.preperiod <= 9, || {
        format!("preperiod {}", rep.preperiod)
    })?;
    let cycle = [10u64, 5, 10, 10, 0, 10, 5, 10, 5, 5, 0, 5];
    let from9 = rightjump::congruence::mod_sequence(&rec, 15, 9 + 24).unwrap();
    check(
        from9[9..]
            .iter()
            .enumerate()
            .all(|(i, &r)| r == cycle[i % 12]),
        || "cycle from n = 9".into(),
    )?;
    let one = detect_period(&rec, 1).map_err(|e| e.to_string())?;
    check(one.period == 1, || format!("m=1: {one:?}"))?;
    Ok(format!(
        "m=15 period 12 from n={}, m=1 period 1",
        rep.preperiod
    ))
}

fn c7_slow() -> Result<String, String> {
    let opts = PeriodOptions {
        keep_cycle: false,
        ..PeriodOptions::default()
    };
    let rep = detect_period_with(&PRecurrence::basis_counts(), 3617, &opts, &mut |_, _| {})
        .map_err(|e| e.to_string())?;
    check(rep.period == 26_158_144 && rep.verified, || {
        format!("{rep:?}")
    })?;
    Ok(format!(
        "m=3617 period {} from n={}",
        rep.period, rep.preperiod
    ))
}

fn c8_asymptotics() -> Result<String, String> {
    let k = asymptotic_constant();
    check((k.c - 0.499).abs() <= 0.002, || format!("C = {}", k.c))?;
    check((k.exponent - 0.381).abs() <= 0.001, || {
        format!("exponent {}", k.exponent)
    })?;
    let ratio = ratio_check(100_000).map_err(|e| e.to_string())?;
    let rel = ((ratio - k.c) / k.c).abs();
    check(rel <= 0.02, || format!("ratio {ratio}"))?;
    let sqrt5 = 5f64.sqrt();
    let mut errs = Vec::new();
    for a in [(1.0 + sqrt5) / 2.0, (1.0 - sqrt5) / 2.0] {
        let e = singularity_coefficient_check(a, 1000)
            .map_err(|e| e.to_string())?
            .relative_error();
        check(e < 1e-3, || format!("a={a}: {e}"))?;
        errs.push(format!("{e:.2e}"));
    }
    Ok(format!(
        "C = {:.10}, exponent = {:.10}, ratio(1e5) off by {rel:.2e}, singularity errors {}",
        k.c,
        k.exponent,
        errs.join(", ")
    ))
}

fn c9_limit_law() -> Result<String, String> {
    let d2000 = ltr_distribution(2000).map_err(|e| e.to_string())?;
    let d4000 = ltr_distribution(4000).map_err(|e| e.to_string())?;
    let growth = d4000.mean - d2000.mean;
    let target = 2f64.ln() / 5f64.sqrt();
    check((growth - target).abs() <= 0.1, || {
        format!("growth {growth}")
    })?;
    check(d4000.is_unimodal(), || "not unimodal at 4000".into())?;
    let d4 = ltr_distribution(4).map_err(|e| e.to_string())?;
    check(
        d4.histogram.len() == 2 && d4.probability(1) == 6.0 / 7.0 && d4.probability(2) == 1.0 / 7.0,
        || format!("n=4: {:?}", d4.histogram),
    )?;
    let mut worst = 0f64;
    for n in [4usize, 100, 2000, 4000] {
        let row: f64 = normalized_row(n).unwrap().iter().sum();
        let r = normalized_totals(n)[n];
        worst = worst.max(((row - r) / r).abs());
    }
    check(worst <= 1e-6, || format!("health gate {worst}"))?;
    Ok(format!(
        "growth {growth:.4} vs {target:.4}, unimodal, n=4 exact, gate {worst:.1e}"
    ))
}

fn c10_class_equivalence() -> Result<String, String> {
    for p in 0..=2 {
        let basis = enumerate_basis_for_p(p).map_err(|e| e.to_string())?;
        for n in 1..=7 {
            let reach = reachable_set_with_cap(n, p, 7).map_err(|e| e.to_string())?;
            let avoid: BTreeSet<Permutation> = Permutations::new(n)
                .filter(|s| s.avoids_all(&basis))
                .collect();
            check(reach == avoid, || format!("n={n} p={p}"))?;
        }
    }
    Ok("C_p = Av(B_p) for n <= 7, p <= 2".into())
}

fn c11_witnesses() -> Result<String, String> {
    let id = Permutation::identity(6);
    for s in Permutations::new(6) {
        let w = witness_jumps(&s);
        check(w.len() == s.non_ltr_count(), || {
            format!("{s}: {} jumps", w.len())
        })?;
        check(replay(&id, &w).ok().as_ref() == Some(&s), || {
            format!("{s}: replay")
        })?;
    }
    Ok("720 witnesses replay with length t".into())
}

#[test]
fn acceptance() {
    let outcomes = vec![
        run(1, "basis sets B_0..B_2", secs(1), c1_basis_sets),
        run(
            2,
            "recognizer equivalence, n <= 9",
            secs(60),
            c2_recognizers,
        ),
        run(3, "distance law, n <= 7", secs(30), c3_distance_law),
        run(
            4,
            "published triangle regression",
            None,
            c4_published_triangle,
        ),
        run(5, "dual-recurrence gate", None, c5_dual_recurrence),
        run(6, "sequence regression", None, c6_sequences),
        run(7, "congruence mod 15 and mod 1 (fast)", secs(1), c7_fast),
        run(7, "congruence mod 3617 (slow)", secs(300), c7_slow),
        run(8, "asymptotics", None, c8_asymptotics),
        run(9, "limit law", None, c9_limit_law),
        run(10, "class equivalence", None, c10_class_equivalence),
        run(11, "witness soundness", None, c11_witnesses),
    ];
    let unexpected: Vec<String> = outcomes
        .iter()
        .filter(|o| o.passed == KNOWN_UNATTAINABLE.contains(&o.id))
        .map(|o| format!("criterion {} ({})", o.id, o.title))
        .collect();
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("{passed}/{} acceptance checks passed", outcomes.len());
    assert!(
        unexpected.is_empty(),
        "unexpected outcome for {unexpected:?}"
    );
}
