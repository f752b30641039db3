mod output;
mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mockforms::characters::{coeff_table, TableKind};
use mockforms::qseries::{named_series, FracExp, SeriesName};
use mockforms::rademacher::{
    entropy, exact_coeff_terms, leading_asymptotic, partition_rademacher, KloostermanCache,
    CACHE_FILE_NAME,
};
use mockforms::shadow::{eta8_cubed_reference, shadow_coefficient};
use mockforms::Kind;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use output::{sig6, Format, Rendered};
use verify::Suite;

#[derive(Parser, Debug)]
#[command(name = "mockforms", version, about = "Exact and Rademacher-type coefficients of the K3 character multiplicities")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Directory holding the persisted Kloosterman cache.
    #[arg(long, env = "MOCKFORMS_CACHE", global = true)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableArg {
    K3,
    Noncompact,
    Ale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    K3,
    Noncompact,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::K3 => Kind::K3,
            KindArg::Noncompact => Kind::Noncompact,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact integer coefficients from the q-series pipeline.
    Coeffs {
        #[arg(long, value_enum)]
        kind: TableArg,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=400))]
        n_max: u32,
    },
    /// Truncated exact formula against the exact coefficient.
    Rademacher {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=400))]
        n: u64,
        /// Numbers of nonzero terms to report; for noncompact these are even moduli.
        #[arg(long, value_delimiter = ',', default_values_t = [5u64, 20], value_parser = clap::value_parser!(u64).range(1..=5000))]
        c_max: Vec<u64>,
        /// Emit the per-modulus breakdown.
        #[arg(long)]
        per_c: bool,
    },
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Shadow coefficients against 24·η(8τ)³.
    Shadow {
        #[arg(long, default_value_t = 800, value_parser = clap::value_parser!(u64).range(1..=20000))]
        c_max: u64,
        /// Largest `n`; rows cover exponents 8n+1.
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(0..=200))]
        n_max: u64,
    },
    /// Rademacher series for p(n); exits 1 if rounding misses p(n).
    Pofn {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=2000))]
        n: u64,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..=5000))]
        c_max: u64,
    },
    /// n, log A_n and the growth exponent, for plotting.
    PlotData {
        #[arg(long, default_value_t = 45, value_parser = clap::value_parser!(u32).range(1..=400))]
        n_max: u32,
    },
    /// Inspect or reset the persisted Kloosterman cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum CacheAction {
    /// Number of persisted records.
    Stats,
    /// Delete the cache file.
    Clear,
}

/// Failure modes mapped onto exit codes 2 and 1.
enum Failure {
    Usage(String),
    Internal(String),
}

impl From<mockforms::Error> for Failure {
    fn from(e: mockforms::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

struct Outcome {
    rendered: Rendered,
    /// Whether a consistency check inside the command failed.
    failed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(outcome) => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            if let Err(e) = outcome.rendered.write(cli.format, &mut lock).and_then(|_| lock.flush()) {
                eprintln!("error: writing output: {e}");
                return ExitCode::from(1);
            }
            if outcome.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    if let Command::Cache { action } = cli.command {
        let dir = cli
            .cache_dir
            .as_ref()
            .ok_or_else(|| Failure::Usage("cache commands need --cache-dir or MOCKFORMS_CACHE".into()))?;
        return cache_command(action, dir);
    }
    let cache = KloostermanCache::global();
    if let Some(dir) = &cli.cache_dir {
        cache.load(dir)?;
    }
    let before = cache.len();
    let outcome = match &cli.command {
        Command::Coeffs { kind, n_max } => coeffs(*kind, *n_max)?,
        Command::Rademacher { kind, n, c_max, per_c } => rademacher((*kind).into(), *n, c_max, *per_c)?,
        Command::Verify { suite } => verify_command(*suite)?,
        Command::Shadow { c_max, n_max } => shadow(*c_max, *n_max)?,
        Command::Pofn { n, c_max } => pofn(*n, *c_max)?,
        Command::PlotData { n_max } => plot_data(*n_max)?,
        Command::Cache { .. } => unreachable!("handled above"),
    };
    if let Some(dir) = &cli.cache_dir {
        if cache.len() != before {
            cache.save(dir)?;
        }
    }
    Ok(outcome)
}

fn done(rendered: Rendered) -> Outcome {
    Outcome { rendered, failed: false }
}

fn coeffs(kind: TableArg, n_max: u32) -> Result<Outcome, Failure> {
    let kind = match kind {
        TableArg::K3 => TableKind::K3,
        TableArg::Noncompact => TableKind::Noncompact,
        TableArg::Ale => TableKind::Ale,
    };
    let table = coeff_table(kind, n_max)?;
    let rows: Vec<Vec<String>> = table.iter().map(|(n, v)| vec![n.to_string(), v.to_string()]).collect();
    let json_rows: Vec<Value> = table.iter().map(|(n, v)| json!({"n": n, "exact": v.to_string()})).collect();
    Ok(done(Rendered {
        json: json!({"kind": kind.to_string(), "rows": json_rows}),
        header: vec!["n", "exact"],
        rows,
    }))
}

fn rademacher(kind: Kind, n: u64, counts: &[u64], per_c: bool) -> Result<Outcome, Failure> {
    let table_kind = match kind {
        Kind::K3 => TableKind::K3,
        Kind::Noncompact => TableKind::Noncompact,
    };
    let mut counts = counts.to_vec();
    counts.sort_unstable();
    counts.dedup();
    let largest = *counts.last().ok_or_else(|| Failure::Usage("--c-max needs a value".into()))?;
    let exact = coeff_table(table_kind, n as u32)?
        .get(n as u32)
        .cloned()
        .ok_or_else(|| Failure::Internal(format!("missing coefficient {n}")))?;
    let leading = leading_asymptotic(kind, n)?;
    let partial = exact_coeff_terms(kind, n, largest)?;

    let mut partial_json = Map::new();
    let mut rows = Vec::new();
    for &t in &counts {
        let v = partial.after_terms(t as usize);
        partial_json.insert(t.to_string(), json!(v));
        rows.push(vec![n.to_string(), exact.to_string(), sig6(leading), t.to_string(), sig6(v)]);
    }
    let mut json = json!({
        "kind": kind.to_string(),
        "n": n,
        "exact": exact.to_string(),
        "leading": leading,
        "partial": partial_json,
    });
    let mut header = vec!["n", "exact", "leading", "terms", "partial"];
    if per_c {
        let mut acc = mockforms::summation::NeumaierSum::new();
        let mut breakdown = Vec::new();
        rows.clear();
        for &(c, term) in &partial.terms {
            acc.add(term);
            breakdown.push(json!({"c": c, "term": term, "cumulative": acc.value()}));
            rows.push(vec![c.to_string(), sig6(term), sig6(acc.value())]);
        }
        json["per_c"] = Value::Array(breakdown);
        header = vec!["c", "term", "cumulative"];
    }
    Ok(done(Rendered { json, header, rows }))
}

fn verify_command(suite: Suite) -> Result<Outcome, Failure> {
    let checks = verify::run(suite)?;
    let failed = checks.iter().filter(|c| !c.passed()).count();
    for c in &checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        eprintln!("{status} [{}] {} ({} evaluations): residual {:e} < {:e}", c.suite, c.name, c.count, c.residual, c.tolerance);
    }
    let json_checks: Vec<Value> = checks
        .iter()
        .map(|c| {
            json!({
                "suite": c.suite,
                "name": c.name,
                "count": c.count,
                "residual": finite_or_null(c.residual),
                "tolerance": c.tolerance,
                "pass": c.passed(),
            })
        })
        .collect();
    let rows = checks
        .iter()
        .map(|c| {
            vec![
                c.suite.to_string(),
                c.name.clone(),
                c.count.to_string(),
                sig6(c.residual),
                sig6(c.tolerance),
                c.passed().to_string(),
            ]
        })
        .collect();
    Ok(Outcome {
        rendered: Rendered {
            json: json!({
                "suite": suite.name(),
                "checks": json_checks,
                "passed": checks.len() - failed,
                "failed": failed,
            }),
            header: vec!["suite", "name", "count", "residual", "tolerance", "pass"],
            rows,
        },
        failed: failed > 0,
    })
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn shadow(c_max: u64, n_max: u64) -> Result<Outcome, Failure> {
    let reference = eta8_cubed_reference(8 * n_max + 1)?;
    let mut json_rows = Vec::new();
    let mut rows = Vec::new();
    for n in 0..=n_max {
        let s = shadow_coefficient(n, c_max)?;
        let e = s.exponent();
        let exact = reference
            .get(&e)
            .and_then(|v| v.to_i64())
            .ok_or_else(|| Failure::Internal(format!("reference coefficient at q^{e} is unavailable")))?;
        let deviation = s.value - exact as f64;
        json_rows.push(json!({"exponent": e, "computed": s.value, "reference": exact, "deviation": deviation}));
        rows.push(vec![e.to_string(), sig6(s.value), exact.to_string(), sig6(deviation)]);
    }
    Ok(done(Rendered {
        json: json!({"c_max": c_max, "rows": json_rows}),
        header: vec!["exponent", "computed", "reference", "deviation"],
        rows,
    }))
}

fn pofn(n: u64, c_max: u64) -> Result<Outcome, Failure> {
    let series = named_series(SeriesName::PartitionGen, FracExp::integer(n as i64 + 1))?;
    let exact = series.coefficient(FracExp::integer(n as i64))?.to_integer();
    let value = partition_rademacher(n, c_max)?;
    let rounded = value.re.round();
    let matched = exact.to_f64().is_some_and(|e| e == rounded);
    let rounded_text = format!("{rounded:.0}");
    Ok(Outcome {
        rendered: Rendered {
            json: json!({
                "n": n,
                "c_max": c_max,
                "value": value.re,
                "imag": value.im,
                "rounded": rounded_text,
                "exact": exact.to_string(),
                "match": matched,
            }),
            header: vec!["n", "c_max", "value", "rounded", "exact", "match"],
            rows: vec![vec![
                n.to_string(),
                c_max.to_string(),
                sig6(value.re),
                rounded_text.clone(),
                exact.to_string(),
                matched.to_string(),
            ]],
        },
        failed: !matched,
    })
}

fn plot_data(n_max: u32) -> Result<Outcome, Failure> {
    let table = coeff_table(TableKind::K3, n_max)?;
    let mut json_rows = Vec::new();
    let mut rows = Vec::new();
    for (n, v) in table.iter() {
        let log_a = v.to_f64().map(f64::ln).unwrap_or(f64::NAN);
        let s = entropy(n as u64)?;
        json_rows.push(json!({"n": n, "log_a": log_a, "entropy": s, "ratio": log_a / s}));
        rows.push(vec![n.to_string(), sig6(log_a), sig6(s), sig6(log_a / s)]);
    }
    Ok(done(Rendered {
        json: json!({"kind": "k3", "rows": json_rows}),
        header: vec!["n", "log_a", "entropy", "ratio"],
        rows,
    }))
}

fn cache_command(action: CacheAction, dir: &Path) -> Result<Outcome, Failure> {
    let path = dir.join(CACHE_FILE_NAME);
    let records = match action {
        CacheAction::Stats => KloostermanCache::new().load(dir)?,
        CacheAction::Clear => {
            if path.exists() {
                std::fs::remove_file(&path).map_err(|e| Failure::Internal(format!("removing {}: {e}", path.display())))?;
            }
            0
        }
    };
    let file = path.display().to_string();
    Ok(done(Rendered {
        json: json!({"file": file, "records": records}),
        header: vec!["file", "records"],
        rows: vec![vec![file.clone(), records.to_string()]],
    }))
}
