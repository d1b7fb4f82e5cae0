use std::collections::BTreeMap;
use std::io::{self, Write};
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::Instant;

use paley_core::batch::{self, admissible_orders, CacheAppender, ResultRow};
use paley_core::bounds::{classify_primes, Classification};
use paley_core::primes::odd_prime_power;
use paley_core::suite::{verify_order, SuiteOptions, SuiteReport};
use rayon::prelude::*;
use thiserror::Error;

use crate::{ClassifyArgs, ComputeArgs, PlotArgs, RangeArgs, VerifyArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] paley_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) | CliError::Core(paley_core::Error::EmptyCache) => ExitCode::from(2),
            _ => ExitCode::from(1),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Resolves positional or `--range` bounds; a lone positional value means `[lo, lo]`.
fn bounds(args: &RangeArgs) -> Result<(u64, u64)> {
    let (lo, hi) = match (&args.range, args.lo, args.hi) {
        (Some(r), None, None) => (r[0], r[1]),
        (None, Some(lo), hi) => (lo, hi.unwrap_or(lo)),
        (Some(_), _, _) => return Err(usage("give either positional bounds or --range, not both")),
        (None, None, _) => return Err(usage("missing range")),
    };
    if lo < 5 || lo > hi {
        return Err(usage(format!(
            "invalid range [{lo}, {hi}]: need 5 <= lo <= hi"
        )));
    }
    if hi > args.max_q {
        return Err(usage(format!(
            "upper end {hi} exceeds cap {} (see --max-q)",
            args.max_q
        )));
    }
    if args.jobs == 0 {
        return Err(usage("--jobs must be at least 1"));
    }
    Ok((lo, hi))
}

fn pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool")
}

pub fn compute(args: ComputeArgs) -> Result<ExitCode> {
    let (lo, hi) = bounds(&args.range)?;
    let orders = admissible_orders(lo, hi, args.range.prime_powers, false);
    if orders.is_empty() {
        return Err(usage(format!("no admissible order in [{lo}, {hi}]")));
    }
    let mut cache = batch::load_cache(&args.cache)?;
    let todo: Vec<u64> = orders
        .iter()
        .copied()
        .filter(|q| args.force || !cache.contains_key(q))
        .collect();
    eprintln!(
        "{} orders in range, {} to compute with {} job(s)",
        orders.len(),
        todo.len(),
        args.range.jobs
    );

    // workers send finished rows; this thread is the only cache writer
    let (tx, rx) = mpsc::channel::<paley_core::Result<ResultRow>>();
    let mut fresh = BTreeMap::new();
    let workers = pool(args.range.jobs);
    std::thread::scope(|scope| -> Result<()> {
        scope.spawn(move || {
            workers.install(|| {
                todo.par_iter().for_each_with(tx, |tx, &q| {
                    let start = Instant::now();
                    let row = batch::analyze(q).map(|a| {
                        a.row(start.elapsed().as_millis() as u64)
                            .expect("compute only admits odd extension degrees")
                    });
                    let _ = tx.send(row);
                })
            })
        });
        let mut appender = None;
        for row in rx {
            let row = row?;
            if appender.is_none() {
                appender = Some(CacheAppender::open(&args.cache)?);
            }
            appender.as_mut().unwrap().append(&row)?;
            eprintln!(
                "q = {:>5}  s = {:>3}  {} ms",
                row.q, row.s_exact, row.wall_time_ms
            );
            fresh.insert(row.q, row);
        }
        Ok(())
    })?;

    if !fresh.is_empty() || !args.cache.exists() {
        cache.extend(fresh);
        batch::save_cache(&args.cache, &cache)?;
    }
    let rows: Vec<ResultRow> = orders.iter().map(|q| cache[q].clone()).collect();
    batch::write_rows(io::stdout().lock(), &rows)?;
    Ok(ExitCode::SUCCESS)
}

pub fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let (lo, hi) = bounds(&args.range)?;
    let orders = if lo == hi {
        single_order(lo, args.even_k)?
    } else {
        admissible_orders(lo, hi, args.range.prime_powers, args.even_k)
    };
    if orders.is_empty() {
        return Err(usage(format!("no admissible order in [{lo}, {hi}]")));
    }
    let opts = SuiteOptions {
        oracle_cap: args.oracle_cap,
        inject_fault: args.inject_fault,
    };
    let reports: Vec<SuiteReport> = pool(args.range.jobs).install(|| {
        orders
            .par_iter()
            .map(|&q| verify_order(q, &opts))
            .collect::<paley_core::Result<_>>()
    })?;

    let mut out = io::stdout().lock();
    print_verify_table(&mut out, &reports)?;
    match reports
        .iter()
        .find_map(|r| r.first_failure().map(|c| (r.q, c)))
    {
        Some((q, check)) => {
            writeln!(out, "FAILED at q = {q}: {check}")?;
            Ok(ExitCode::from(1))
        }
        None => {
            writeln!(out, "all checks passed for {} order(s)", reports.len())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn single_order(q: u64, even_k: bool) -> Result<Vec<u64>> {
    let Some((_, k)) = odd_prime_power(q) else {
        return Err(usage(format!("{q} is not an odd prime power")));
    };
    if q % 4 != 1 {
        return Err(usage(format!("{q} is not 1 mod 4")));
    }
    if k % 2 == 0 && !even_k {
        return Err(usage(format!(
            "{q} has even extension degree; pass --even-k"
        )));
    }
    Ok(vec![q])
}

fn print_verify_table<W: Write>(out: &mut W, reports: &[SuiteReport]) -> io::Result<()> {
    writeln!(out, "{:>6} {:>4} {:>8}  status", "q", "s", "checks")?;
    for r in reports {
        let passed = r.checks.iter().filter(|c| c.passed).count();
        let status = if r.passed() { "ok" } else { "FAIL" };
        writeln!(
            out,
            "{:>6} {:>4} {:>4}/{:<3}  {status}",
            r.q,
            r.s,
            passed,
            r.checks.len()
        )?;
        if r.s as u64 * r.s as u64 == r.q && r.passed() {
            writeln!(
                out,
                "       equality case s = {} = sqrt({}) confirmed",
                r.s, r.q
            )?;
        }
        for (name, why) in &r.skipped {
            writeln!(out, "       skipped {name}: {why}")?;
        }
    }

    // per-check totals in first-seen order
    let mut names: Vec<&'static str> = Vec::new();
    let mut tally: BTreeMap<&'static str, (usize, usize, Option<String>)> = BTreeMap::new();
    for r in reports {
        for c in &r.checks {
            let entry = tally.entry(c.name).or_insert_with(|| {
                names.push(c.name);
                (0, 0, None)
            });
            if c.passed {
                entry.0 += 1;
            } else {
                entry.1 += 1;
                entry
                    .2
                    .get_or_insert_with(|| format!("q = {}: {}", r.q, c.detail));
            }
        }
    }
    writeln!(out)?;
    writeln!(
        out,
        "{:<48} {:>6} {:>6}  first counterexample",
        "check", "pass", "fail"
    )?;
    for name in names {
        let (pass, fail, first) = &tally[name];
        writeln!(
            out,
            "{name:<48} {pass:>6} {fail:>6}  {}",
            first.as_deref().unwrap_or("-")
        )?;
    }
    Ok(())
}

pub fn classify(args: ClassifyArgs) -> Result<ExitCode> {
    if args.limit < 13 {
        return Err(usage("limit must be at least 13"));
    }
    let report = classify_primes(args.limit);
    let total = report.total();
    let share = |c: u64| {
        if total == 0 {
            0.0
        } else {
            c as f64 / total as f64
        }
    };
    let mut out = io::stdout().lock();
    if args.csv {
        writeln!(out, "classification,count,fraction")?;
        for c in Classification::ALL {
            writeln!(out, "{c},{},{:.6}", report.count(c), share(report.count(c)))?;
        }
        writeln!(
            out,
            "improved,{},{:.6}",
            report.improved(),
            share(report.improved())
        )?;
        writeln!(out, "total,{total},1.000000")?;
    } else {
        writeln!(out, "primes p = 1 (mod 4), p <= {}: {total}", args.limit)?;
        for c in Classification::ALL {
            writeln!(
                out,
                "  {:<22} {:>8}  {:.6}",
                c.as_str(),
                report.count(c),
                share(report.count(c))
            )?;
        }
        writeln!(
            out,
            "improved fraction: {} / {total} = {:.6}",
            report.improved(),
            share(report.improved())
        )?;
    }
    Ok(ExitCode::SUCCESS)
}

pub fn plotdata(args: PlotArgs) -> Result<ExitCode> {
    let cache = batch::load_cache(&args.cache)?;
    let rows: Vec<&ResultRow> = cache.values().filter(|r| r.k == 1).collect();
    if rows.is_empty() {
        return Err(paley_core::Error::EmptyCache.into());
    }
    // least-squares c in s ~ c * ln(p)^2
    let log2 = |p: u64| (p as f64).ln().powi(2);
    let num: f64 = rows.iter().map(|r| r.s_exact as f64 * log2(r.p)).sum();
    let den: f64 = rows.iter().map(|r| log2(r.p).powi(2)).sum();
    let c = num / den;
    let mut out = io::stdout().lock();
    writeln!(out, "p,s,sqrt_p_floor,theorem_bound,c_log2")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{:.4}",
            r.p,
            r.s_exact,
            r.n,
            r.theorem_bound,
            c * log2(r.p)
        )?;
    }
    Ok(ExitCode::SUCCESS)
}
