use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use num_bigint::BigUint;
use serde_json::{json, Value};

use rightjump::asymptotics::{
    asymptotic_constant, ltr_distribution, ratio_check, DistributionStats,
};
use rightjump::basis::{check_basis, check_basis_oracle, enumerate_basis, enumerate_basis_for_p};
use rightjump::congruence::{detect_period_with, PRecurrence, PeriodOptions, RecurrenceSpec};
use rightjump::perm::{
    jump_distance, parse_permutation, sort_distance, witness_jumps, Permutation,
};
use rightjump::triangle::{
    b_total, build_triangle, build_triangle_convolution, build_triangle_ode, load_triangle,
    save_triangle, stirling_d, Triangle,
};
use rightjump::verify::run_verification;

use crate::args::{
    BasisCommand, Cli, Command, CongruenceArgs, CountCommand, DistArgs, Format, Method,
    TriangleCommand,
};
use crate::output::{num, sig12};

/// Everything a command needs besides its own arguments.
pub struct Ctx<'a> {
    pub format: Option<Format>,
    pub cache: Option<&'a Path>,
    pub progress: bool,
}

impl Ctx<'_> {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn note(&self, msg: impl AsRef<str>) {
        if self.progress {
            eprintln!("[rightjump] {}", msg.as_ref());
        }
    }
}

/// Runs one parsed invocation. Returns `Ok(false)` when the command ran but
/// reported a failure (a failing `verify` check).
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<bool> {
    let ctx = Ctx {
        format: cli.format,
        cache: cli.cache.as_deref(),
        progress: cli.progress,
    };
    match &cli.command {
        Command::Distance { from, to } => {
            let d = jump_distance(&perm(from)?, &perm(to)?)?;
            scalar(&ctx, out, "distance", d)?;
        }
        Command::SortDistance { sigma } => {
            let d = sort_distance(&perm(sigma)?);
            scalar(&ctx, out, "sort_distance", d)?;
        }
        Command::Jumps { sigma } => jumps(&ctx, out, &perm(sigma)?)?,
        Command::Basis(cmd) => basis(&ctx, out, cmd)?,
        Command::Count(cmd) => count(&ctx, out, cmd)?,
        Command::Triangle(cmd) => triangle(&ctx, out, cmd)?,
        Command::Congruence(args) => congruence(&ctx, out, args)?,
        Command::Asymptotics { n } => asymptotics(&ctx, out, *n)?,
        Command::Dist(args) => dist(&ctx, out, args)?,
        Command::Verify { fast } => return verify(&ctx, out, *fast),
    }
    Ok(true)
}

fn perm(text: &str) -> Result<Permutation> {
    parse_permutation(text).with_context(|| format!("invalid permutation {text:?}"))
}

fn json_line(out: &mut dyn Write, v: &Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string(v)?)?;
    Ok(())
}

fn scalar(ctx: &Ctx, out: &mut dyn Write, key: &str, value: impl ToString) -> Result<()> {
    let value = value.to_string();
    match ctx.format_or(Format::Text) {
        Format::Text => writeln!(out, "{value}")?,
        Format::Json => json_line(
            out,
            &json!({ key: value.parse::<u64>().map_or(Value::String(value.clone()), Value::from) }),
        )?,
        Format::Csv => writeln!(out, "{key}\n{value}")?,
    }
    Ok(())
}

fn jumps(ctx: &Ctx, out: &mut dyn Write, sigma: &Permutation) -> Result<()> {
    let w = witness_jumps(sigma);
    match ctx.format_or(Format::Text) {
        Format::Text => {
            for j in &w {
                writeln!(out, "{j}")?;
            }
        }
        Format::Json => {
            let list: Vec<Value> = w
                .iter()
                .map(|j| json!([j.from_pos(), j.to_pos()]))
                .collect();
            json_line(
                out,
                &json!({ "permutation": sigma.to_string(), "jumps": list }),
            )?;
        }
        Format::Csv => {
            writeln!(out, "from,to")?;
            for j in &w {
                writeln!(out, "{},{}", j.from_pos(), j.to_pos())?;
            }
        }
    }
    Ok(())
}

fn basis(ctx: &Ctx, out: &mut dyn Write, cmd: &BasisCommand) -> Result<()> {
    match cmd {
        BasisCommand::List { p: Some(p), .. } => {
            ctx.note(format!("enumerating B_{p}"));
            let list = enumerate_basis_for_p(*p)?;
            match ctx.format_or(Format::Text) {
                Format::Text => {
                    for s in &list {
                        writeln!(out, "{s}")?;
                    }
                }
                Format::Json => {
                    let perms: Vec<String> = list.iter().map(ToString::to_string).collect();
                    json_line(
                        out,
                        &json!({ "p": p, "count": perms.len(), "permutations": perms }),
                    )?;
                }
                Format::Csv => {
                    writeln!(out, "p,permutation")?;
                    for s in &list {
                        writeln!(out, "{p},{s}")?;
                    }
                }
            }
        }
        BasisCommand::List { n: Some(n), .. } => {
            ctx.note(format!("enumerating basis permutations of length {n}"));
            let groups = enumerate_basis(*n)?;
            match ctx.format_or(Format::Text) {
                Format::Text => {
                    for list in groups.values() {
                        for s in list {
                            writeln!(out, "{s}")?;
                        }
                    }
                }
                Format::Json => {
                    let g: serde_json::Map<String, Value> = groups
                        .iter()
                        .map(|(p, list)| {
                            (
                                p.to_string(),
                                list.iter().map(ToString::to_string).collect(),
                            )
                        })
                        .collect();
                    json_line(out, &json!({ "n": n, "groups": g }))?;
                }
                Format::Csv => {
                    writeln!(out, "p,permutation")?;
                    for (p, list) in &groups {
                        for s in list {
                            writeln!(out, "{p},{s}")?;
                        }
                    }
                }
            }
        }
        BasisCommand::List { .. } => unreachable!("clap requires --p or --n"),
        BasisCommand::Check { sigma, oracle } => {
            let s = perm(sigma)?;
            let m = if *oracle {
                check_basis_oracle(&s)?
            } else {
                check_basis(&s)?
            };
            match ctx.format_or(Format::Text) {
                Format::Text => match (m.p, m.failed_condition) {
                    (Some(p), _) => writeln!(out, "member of B_{p}")?,
                    (None, Some(c)) => {
                        writeln!(out, "not a basis permutation: condition ({c}) fails")?
                    }
                    (None, None) => writeln!(out, "not a basis permutation")?,
                },
                Format::Json => {
                    let mut v = serde_json::to_value(m)?;
                    v["permutation"] = Value::String(s.to_string());
                    json_line(out, &v)?;
                }
                Format::Csv => {
                    let cond = m
                        .failed_condition
                        .map(|c| c.to_string())
                        .unwrap_or_default();
                    let p = m.p.map(|p| p.to_string()).unwrap_or_default();
                    writeln!(out, "permutation,is_member,p,failed_condition")?;
                    writeln!(out, "{s},{},{p},{cond}", m.is_member)?;
                }
            }
        }
    }
    Ok(())
}

/// A triangle reaching at least row `n`, from the cache when it is large
/// enough. A missing or short cache is rebuilt and rewritten.
fn triangle_covering(ctx: &Ctx, n: usize) -> Result<Triangle> {
    let need = n.max(2);
    let Some(path) = ctx.cache else {
        ctx.note(format!("building triangle to n = {need}"));
        return Ok(build_triangle(need)?);
    };
    if path.exists() {
        let t = load_triangle(path).with_context(|| format!("loading cache {}", path.display()))?;
        if t.max_n() >= need {
            ctx.note(format!(
                "using cache {} (max_n = {})",
                path.display(),
                t.max_n()
            ));
            return Ok(t);
        }
    }
    ctx.note(format!(
        "building triangle to n = {need} into {}",
        path.display()
    ));
    let t = build_triangle(need)?;
    save_triangle(&t, path).with_context(|| format!("writing cache {}", path.display()))?;
    Ok(t)
}

fn big_value(
    ctx: &Ctx,
    out: &mut dyn Write,
    fields: &[(&str, usize)],
    value: &BigUint,
) -> Result<()> {
    match ctx.format_or(Format::Text) {
        Format::Text => writeln!(out, "{value}")?,
        Format::Json => {
            let mut obj = serde_json::Map::new();
            for (k, v) in fields {
                obj.insert((*k).into(), json!(v));
            }
            obj.insert("value".into(), Value::String(value.to_string()));
            json_line(out, &Value::Object(obj))?;
        }
        Format::Csv => {
            let keys: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
            let vals: Vec<String> = fields.iter().map(|(_, v)| v.to_string()).collect();
            writeln!(out, "{},value", keys.join(","))?;
            writeln!(out, "{},{value}", vals.join(","))?;
        }
    }
    Ok(())
}

fn count(ctx: &Ctx, out: &mut dyn Write, cmd: &CountCommand) -> Result<()> {
    match *cmd {
        CountCommand::D { n, p } => {
            let v = stirling_d(n, p)?.value;
            big_value(ctx, out, &[("n", n), ("p", p)], &v)
        }
        CountCommand::B { n, p: None } => {
            let v = b_total(n).value;
            big_value(ctx, out, &[("n", n)], &v)
        }
        CountCommand::B { n, p: Some(p) } => {
            let v = triangle_covering(ctx, n)?.get(n, p);
            big_value(ctx, out, &[("n", n), ("p", p)], &v)
        }
    }
}

fn triangle(ctx: &Ctx, out: &mut dyn Write, cmd: &TriangleCommand) -> Result<()> {
    match cmd {
        TriangleCommand::Build {
            max_n,
            out: path,
            method,
        } => {
            ctx.note(format!("building triangle to n = {max_n} ({method:?})"));
            let t = match method {
                Method::Conv => build_triangle_convolution(*max_n)?,
                Method::Ode => build_triangle_ode(*max_n)?,
            };
            save_triangle(&t, path).with_context(|| format!("writing {}", path.display()))?;
            let entries: usize = (2..=*max_n).map(|n| t.row(n).count()).sum();
            match ctx.format_or(Format::Text) {
                Format::Json => json_line(
                    out,
                    &json!({
                        "path": path.display().to_string(),
                        "max_n": max_n,
                        "provenance": t.provenance().to_string(),
                        "entries": entries,
                    }),
                )?,
                _ => writeln!(
                    out,
                    "wrote {entries} entries (max_n {max_n}, {}) to {}",
                    t.provenance(),
                    path.display()
                )?,
            }
        }
        TriangleCommand::Show { n } => {
            let t = triangle_covering(ctx, *n)?;
            let row: Vec<(usize, &BigUint)> = t.row(*n).collect();
            match ctx.format_or(Format::Text) {
                Format::Text => {
                    for (p, v) in &row {
                        writeln!(out, "{p}\t{v}")?;
                    }
                }
                Format::Json => {
                    let entries: Vec<Value> = row
                        .iter()
                        .map(|(p, v)| json!({ "p": p, "value": v.to_string() }))
                        .collect();
                    let sum: BigUint = row.iter().map(|(_, v)| *v).sum();
                    json_line(
                        out,
                        &json!({ "n": n, "row": entries, "sum": sum.to_string() }),
                    )?;
                }
                Format::Csv => {
                    writeln!(out, "p,value")?;
                    for (p, v) in &row {
                        writeln!(out, "{p},{v}")?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn congruence(ctx: &Ctx, out: &mut dyn Write, args: &CongruenceArgs) -> Result<()> {
    let rec = match &args.recurrence {
        Some(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let spec: RecurrenceSpec = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", path.display()))?;
            PRecurrence::try_from(spec)?
        }
        None => PRecurrence::basis_counts(),
    };
    let opts = PeriodOptions {
        max_steps: args.max_steps,
        keep_cycle: args.emit_cycle,
    };
    let progress = ctx.progress;
    let report = detect_period_with(&rec, args.m, &opts, &mut |phase, steps| {
        if progress {
            eprintln!("[rightjump] {phase:?}: {steps} steps");
        }
    })?;
    match ctx.format_or(Format::Json) {
        Format::Json => json_line(out, &serde_json::to_value(&report)?)?,
        Format::Text => {
            writeln!(out, "m {}", report.m)?;
            writeln!(out, "preperiod {}", report.preperiod)?;
            writeln!(out, "period {}", report.period)?;
            writeln!(out, "verified {}", report.verified)?;
            if let Some(c) = &report.cycle {
                let c: Vec<String> = c.iter().map(ToString::to_string).collect();
                writeln!(out, "cycle {}", c.join(" "))?;
            }
        }
        Format::Csv => {
            writeln!(out, "m,preperiod,period,verified")?;
            writeln!(
                out,
                "{},{},{},{}",
                report.m, report.preperiod, report.period, report.verified
            )?;
        }
    }
    Ok(())
}

fn asymptotics(ctx: &Ctx, out: &mut dyn Write, n: usize) -> Result<()> {
    let k = asymptotic_constant();
    ctx.note(format!("evaluating b_n/n! up to n = {n}"));
    let ratio = ratio_check(n)?;
    let rel_error = ((ratio - k.c) / k.c).abs();
    match ctx.format_or(Format::Json) {
        Format::Json => json_line(
            out,
            &json!({
                "C": num(k.c),
                "exponent": num(k.exponent),
                "ratio": num(ratio),
                "rel_error": num(rel_error),
            }),
        )?,
        Format::Text => {
            writeln!(out, "C {}", sig12(k.c))?;
            writeln!(out, "exponent {}", sig12(k.exponent))?;
            writeln!(out, "ratio {}", sig12(ratio))?;
            writeln!(out, "rel_error {}", sig12(rel_error))?;
        }
        Format::Csv => {
            writeln!(out, "C,exponent,ratio,rel_error")?;
            writeln!(
                out,
                "{},{},{},{}",
                sig12(k.c),
                sig12(k.exponent),
                sig12(ratio),
                sig12(rel_error)
            )?;
        }
    }
    Ok(())
}

fn histogram_csv(d: &DistributionStats) -> String {
    let mut s = String::from("k,probability\n");
    for &(k, w) in &d.histogram {
        s.push_str(&format!("{k},{}\n", sig12(w)));
    }
    s
}

fn dist(ctx: &Ctx, out: &mut dyn Write, args: &DistArgs) -> Result<()> {
    ctx.note(format!("computing the distribution for n = {}", args.n));
    let d = ltr_distribution(args.n)?;
    if let Some(path) = &args.out {
        fs::write(path, histogram_csv(&d))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &args.plot {
        let mut s = format!("# n = {}\n# k probability\n", d.n);
        for &(k, w) in &d.histogram {
            s.push_str(&format!("{k} {}\n", sig12(w)));
        }
        fs::write(path, s).with_context(|| format!("writing {}", path.display()))?;
    }
    match ctx.format_or(Format::Csv) {
        Format::Csv => write!(out, "{}", histogram_csv(&d))?,
        Format::Json => {
            let h: Vec<Value> = d
                .histogram
                .iter()
                .map(|&(k, w)| json!({ "k": k, "probability": num(w) }))
                .collect();
            json_line(
                out,
                &json!({
                    "n": d.n,
                    "mean": num(d.mean),
                    "variance": num(d.variance),
                    "total_mass": num(d.total_mass),
                    "unimodal": d.is_unimodal(),
                    "histogram": h,
                }),
            )?;
        }
        Format::Text => {
            writeln!(out, "n {}", d.n)?;
            writeln!(out, "mean {}", sig12(d.mean))?;
            writeln!(out, "variance {}", sig12(d.variance))?;
            writeln!(out, "unimodal {}", d.is_unimodal())?;
        }
    }
    Ok(())
}

fn verify(ctx: &Ctx, out: &mut dyn Write, fast: bool) -> Result<bool> {
    let progress = ctx.progress;
    let report = run_verification(fast, &mut |name| {
        if progress {
            eprintln!("[rightjump] running: {name}");
        }
    });
    if progress {
        for c in &report.checks {
            eprintln!("[rightjump] {:.2}s {}", c.seconds, c.name);
        }
    }
    match ctx.format_or(Format::Text) {
        Format::Json => {
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
                .collect();
            json_line(
                out,
                &json!({ "passed": report.all_passed(), "checks": checks }),
            )?;
        }
        Format::Csv => {
            writeln!(out, "name,passed")?;
            for c in &report.checks {
                writeln!(out, "\"{}\",{}", c.name, c.passed)?;
            }
        }
        Format::Text => {
            for c in &report.checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                writeln!(out, "[{tag}] {}: {}", c.name, c.detail)?;
            }
            let passed = report.checks.iter().filter(|c| c.passed).count();
            writeln!(out, "{passed}/{} checks passed", report.checks.len())?;
        }
    }
    Ok(report.all_passed())
}
