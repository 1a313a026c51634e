//! `superbraid`: twist matrices, twisted homology of braid groups, table
//! reproduction, Poincare series and the verification suite.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource
//! limit.

mod suite;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use superbraid::engine::{
    Cache, CacheEntry, Coeff, Engine, EngineError, GroupJson, HomologyTable, VERSION,
};
use superbraid::fixtures::{fixture, Cell};
use superbraid::series::{local_series, stable_series, SeriesError};
use superbraid::surface::{
    betti1, twist_matrix_a, twist_matrix_b, Construction, Order, RepError, TwistJson,
};
use superbraid::{AbelianGroup, SnfConfig};

#[derive(Parser)]
#[command(
    name = "superbraid",
    version,
    about = "Twisted homology of braid groups with superelliptic coefficients"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the action of the k-th standard generator on H_1.
    Twist(TwistArgs),
    /// Compute H_i(Br_n; H_1(Sigma_n^d)) for i = 0..n-1.
    Homology(HomologyArgs),
    /// Reproduce the published table for one d and diff against it.
    Table(TableArgs),
    /// Expand the Poincare series.
    Series(SeriesArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Local,
    Stable,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Paper,
}

#[derive(Args)]
struct CacheArgs {
    /// Directory for cached rows.
    #[arg(long, env = "SUPERBRAID_CACHE")]
    cache_dir: Option<PathBuf>,
}

#[derive(Args)]
struct TwistArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "B")]
    construction: Construction,
    /// Composition order of the transvections (construction B only).
    #[arg(long, default_value = "rtl")]
    order: Order,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct HomologyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    /// `z` for the integers, `f:p` for the field with p elements.
    #[arg(long, default_value = "z")]
    coeff: Coeff,
    /// Trivial integer coefficients instead of H_1(Sigma_n^d).
    #[arg(long, conflicts_with = "bddn")]
    trivial: bool,
    /// Homology of the complex braid group B(d, d, n).
    #[arg(long)]
    bddn: bool,
    #[command(flatten)]
    cache: CacheArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 8)]
    n_max: usize,
    #[command(flatten)]
    cache: CacheArgs,
    #[arg(long, value_enum, default_value_t = TableFormat::Text)]
    format: TableFormat,
}

#[derive(Args)]
struct SeriesArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, value_enum, default_value_t = Mode::Stable)]
    mode: Mode,
    #[arg(long, default_value_t = 12)]
    max_q: usize,
    #[arg(long, default_value_t = 13)]
    max_t: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::Paper)]
    suite: Suite,
    /// Largest n for every degree; 0 verifies nothing. Defaults to
    /// n <= 10 for d = 2, 3, n <= 9 for d = 4, 5 and n <= 8 for d = 6.
    #[arg(long)]
    window: Option<usize>,
    /// Degrees d to include, comma separated.
    #[arg(long, value_delimiter = ',')]
    degrees: Option<Vec<usize>>,
    /// Corrupt one boundary sign to exercise the d^2 = 0 check.
    #[arg(long)]
    inject_fault: bool,
    #[command(flatten)]
    cache: CacheArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

enum Failure {
    Usage(String),
    Verification,
    Resource(String),
    Runtime(anyhow::Error),
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        if e.is_resource_limit() {
            return Failure::Resource(e.to_string());
        }
        match e {
            EngineError::Rep(RepError::IndexOutOfRange { .. } | RepError::Degenerate)
            | EngineError::NotPrime(_)
            | EngineError::BadCoeff(_) => Failure::Usage(e.to_string()),
            e => Failure::Runtime(e.into()),
        }
    }
}

impl From<SeriesError> for Failure {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::NotPrime(_) => Failure::Usage(e.to_string()),
            e => Failure::Runtime(e.into()),
        }
    }
}

impl From<RepError> for Failure {
    fn from(e: RepError) -> Self {
        EngineError::from(e).into()
    }
}

type Outcome = Result<(), Failure>;

fn engine(cache: &CacheArgs) -> Result<Engine, Failure> {
    let engine = Engine::new(SnfConfig::from_env());
    Ok(match &cache.cache_dir {
        Some(dir) => engine.with_cache(Cache::new(dir)?),
        None => engine,
    })
}

fn print_json(value: &impl Serialize) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("output serializes")
    );
}

fn twist(args: &TwistArgs) -> Outcome {
    let (n, d, k) = (args.n, args.d, args.k);
    if n == 0 || d == 0 {
        return Err(RepError::Degenerate.into());
    }
    if k == 0 || k >= n {
        return Err(RepError::IndexOutOfRange { n, d, k }.into());
    }
    let order = (args.construction == Construction::B).then_some(args.order);
    let matrix = match args.construction {
        Construction::A => twist_matrix_a::<i64>(n, d, k)?,
        Construction::B => twist_matrix_b::<i64>(n, d, k, args.order)?,
    };
    match args.format {
        Format::Json => {
            let json = TwistJson::new(n, d, k, args.construction, order, &matrix)
                .map_err(|e| Failure::Runtime(e.into()))?;
            print_json(&json);
        }
        Format::Text if betti1(n, d) == 0 => {
            println!("empty matrix: H_1(Sigma_{n}^{d}) is zero");
        }
        Format::Text => {
            let how = order.map_or(String::new(), |o| format!(", {o}"));
            println!(
                "# T_{k} on H_1(Sigma_{n}^{d}), construction {}{how}",
                args.construction
            );
            print!("{matrix}");
        }
    }
    Ok(())
}

fn homology(args: &HomologyArgs) -> Outcome {
    let engine = engine(&args.cache)?;
    let (n, d) = (args.n, args.d);
    let (groups, fingerprint) = if args.trivial {
        (
            engine.trivial_homology(n, args.coeff)?,
            "trivial".to_string(),
        )
    } else if args.bddn {
        if args.coeff != Coeff::Integers {
            return Err(Failure::Usage(
                "--bddn supports integer coefficients only".into(),
            ));
        }
        (engine.bddn_homology(n, d)?, engine.fingerprint(d)?)
    } else {
        (
            engine.braid_twisted_homology(n, d, args.coeff)?,
            engine.fingerprint(d)?,
        )
    };
    match args.format {
        Format::Json => print_json(&CacheEntry::new(n, d, args.coeff, &fingerprint, &groups)),
        Format::Text => {
            println!(
                "# n = {n}, d = {d}, coefficients {}, convention {fingerprint}",
                args.coeff
            );
            for (i, g) in groups.iter().enumerate() {
                println!("H_{i} = {g}");
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
enum Status {
    Match,
    Mismatch,
    NotInPaper,
    Unknown,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Match => "MATCH",
            Status::Mismatch => "MISMATCH",
            Status::NotInPaper => "NOT-IN-PAPER",
            Status::Unknown => "UNKNOWN",
        }
    }
}

#[derive(Serialize)]
struct CellJson {
    #[serde(flatten)]
    group: GroupJson,
    status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    published: Option<String>,
}

fn status(d: usize, n: usize, i: usize, got: &AbelianGroup) -> (Status, Option<String>) {
    match fixture(d).and_then(|t| t.cell(n, i)) {
        None => (Status::NotInPaper, None),
        Some(Cell::Unknown) => (Status::Unknown, Some("?".into())),
        Some(Cell::Group(want)) if want == got => (Status::Match, Some(want.to_string())),
        Some(Cell::Group(want)) => (Status::Mismatch, Some(want.to_string())),
    }
}

fn table(args: &TableArgs) -> Outcome {
    let engine = engine(&args.cache)?;
    let d = args.d;
    if d == 0 {
        return Err(RepError::Degenerate.into());
    }
    // d = 1 has the zero module, so there is nothing to tabulate
    let ns: Vec<usize> = if d == 1 {
        Vec::new()
    } else {
        (2..=args.n_max).collect()
    };
    let computed = engine.table(d, ns, Coeff::Integers)?;
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut notes = Vec::new();
    let mut rows = Vec::new();
    for (&n, groups) in &computed.rows {
        let cells: Vec<CellJson> = groups
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let (st, published) = status(d, n, i, g);
                *counts.entry(st.label()).or_default() += 1;
                if matches!(st, Status::Mismatch | Status::Unknown) {
                    notes.push(format!(
                        "{} n={n} i={i}: computed {g}, published {}",
                        st.label(),
                        published.as_deref().unwrap_or("?")
                    ));
                }
                CellJson {
                    group: GroupJson {
                        i,
                        rank: g.rank,
                        torsion: g.torsion.clone(),
                    },
                    status: st,
                    published,
                }
            })
            .collect();
        rows.push((n, cells));
    }
    let mismatch = counts.contains_key("MISMATCH");
    match args.format {
        TableFormat::Json => print_json(&json!({
            "d": d,
            "coeff": computed.coeff.to_string(),
            "fingerprint": computed.fingerprint,
            "version": VERSION,
            "provenance": fixture(d).map(|t| t.provenance()),
            "rows": rows.iter().map(|(n, cells)| json!({"n": n, "groups": cells})).collect::<Vec<_>>(),
            "summary": counts,
        })),
        TableFormat::Csv => {
            println!("n,i,rank,torsion");
            for (n, cells) in &rows {
                for c in cells {
                    let torsion: Vec<String> = c.group.torsion.iter().map(u64::to_string).collect();
                    println!("{n},{},{},{}", c.group.i, c.group.rank, torsion.join(";"));
                }
            }
            for note in &notes {
                eprintln!("{note}");
            }
        }
        TableFormat::Text => print_table_text(&computed, &rows, &counts, &notes),
    }
    if mismatch {
        Err(Failure::Verification)
    } else {
        Ok(())
    }
}

fn print_table_text(
    computed: &HomologyTable,
    rows: &[(usize, Vec<CellJson>)],
    counts: &BTreeMap<&str, usize>,
    notes: &[String],
) {
    let d = computed.d;
    let source = fixture(d).map_or("no published table".to_string(), |t| t.provenance());
    println!(
        "# d = {d}, convention {}, compared with {source}",
        computed.fingerprint
    );
    let width = computed
        .rows
        .values()
        .flatten()
        .map(|g| g.to_string().len())
        .max()
        .unwrap_or(1)
        .max(3);
    let columns = rows.iter().map(|(_, c)| c.len()).max().unwrap_or(0);
    let header: Vec<String> = (0..columns)
        .map(|i| format!("{:<width$}", format!("H_{i}")))
        .collect();
    println!("{:>4} | {}", "n", header.join(" | ").trim_end());
    for (n, _) in rows {
        let cells: Vec<String> = computed.rows[n]
            .iter()
            .map(|g| format!("{:<width$}", g.to_string()))
            .collect();
        println!("{n:>4} | {}", cells.join(" | ").trim_end());
    }
    let summary: Vec<String> = counts.iter().map(|(k, v)| format!("{k} {v}")).collect();
    println!("# {}", summary.join(", "));
    for note in notes {
        println!("{note}");
    }
}

fn series(args: &SeriesArgs) -> Outcome {
    let p = args.p;
    match args.mode {
        Mode::Stable => {
            let coeffs = stable_series(p, args.max_q)?.univariate();
            match args.format {
                Format::Json => print_json(
                    &json!({"p": p, "mode": "stable", "max_q": args.max_q, "coeffs": coeffs}),
                ),
                Format::Text => {
                    let terms: Vec<String> = coeffs
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, &c)| match (c, i) {
                            (c, 0) => c.to_string(),
                            (1, 1) => "q".into(),
                            (c, 1) => format!("{c}q"),
                            (1, i) => format!("q^{i}"),
                            (c, i) => format!("{c}q^{i}"),
                        })
                        .collect();
                    println!("P_{p}(q) = {} + O(q^{})", terms.join(" + "), args.max_q + 1);
                }
            }
        }
        Mode::Local => {
            let s = local_series(p, args.max_q, args.max_t)?;
            match args.format {
                Format::Json => print_json(&json!({
                    "p": p,
                    "mode": "local",
                    "max_q": args.max_q,
                    "max_t": args.max_t,
                    "coeffs": s.coeffs,
                })),
                Format::Text => {
                    println!(
                        "# coefficient of q^i t^n, rows n, columns i = 0..{}",
                        args.max_q
                    );
                    for (n, row) in s.coeffs.iter().enumerate() {
                        let cells: Vec<String> = row.iter().map(|c| format!("{c:>3}")).collect();
                        println!("{n:>3} |{}", cells.join(""));
                    }
                }
            }
        }
    }
    Ok(())
}

fn verify(args: &VerifyArgs) -> Outcome {
    let Suite::Paper = args.suite;
    let engine = engine(&args.cache)?;
    let mut options = suite::Options::golden();
    if let Some(degrees) = &args.degrees {
        let default: BTreeMap<usize, usize> = options.window.clone();
        options.window = degrees
            .iter()
            .map(|&d| (d, default.get(&d).copied().unwrap_or(8)))
            .collect();
    }
    if let Some(max_n) = args.window {
        options.window.values_mut().for_each(|v| *v = max_n);
    }
    options.inject_fault = args.inject_fault;
    let report = suite::run(&engine, &options)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    match args.format {
        Format::Json => print_json(&json!({
            "suite": report.suite,
            "version": VERSION,
            "window": report.window,
            "fingerprints": report.fingerprints,
            "pass": report.pass,
            "checks": report.checks,
            "failures": report.failures().collect::<Vec<_>>(),
            "warnings": report.warnings,
        })),
        Format::Text => {
            for (d, fp) in &report.fingerprints {
                println!("# d = {d}: {fp}");
            }
            for c in &report.checks {
                println!(
                    "{} {} ({} checked)",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.checked
                );
                for f in &c.failures {
                    println!("    {f}");
                }
            }
            let failed = report.failures().count();
            println!(
                "{} of {} checks passed",
                report.checks.len() - failed,
                report.checks.len()
            );
        }
    }
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn configure_threads() {
    let Some(threads) = std::env::var("SUPERBRAID_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    else {
        return;
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
    {
        eprintln!("warning: cannot size the thread pool: {e}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let outcome = match &cli.command {
        Command::Twist(a) => twist(a),
        Command::Homology(a) => homology(a),
        Command::Table(a) => table(a),
        Command::Series(a) => series(a),
        Command::Verify(a) => verify(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
