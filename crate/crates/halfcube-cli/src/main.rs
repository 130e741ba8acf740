//! Command-line front end: face tables, Betti tables, homology reports,
//! character decompositions, Littlewood-Richardson queries, and the
//! verification suites.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or budget error.
//! All JSON output is deterministic (sorted keys, no timestamps); elapsed
//! time is reported on stderr only.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use halfcube_core::characters::CharLabel;
use halfcube_core::complex::{
    face_census, DEFAULT_ENUM_MAX_N, DEFAULT_HOMOLOGY_MAX_N,
};
use halfcube_core::homology::{betti, verify_concentration, BettiMethod};
use halfcube_core::partition::{lr_coefficient, pieri_expand, Partition};
use halfcube_core::reps::{branch_chi_d, chi_d, restrict_chi_d_to_sn};
use halfcube_core::signed::{conjugacy_classes, GroupKind, DEFAULT_GROUP_MAX_N};
use halfcube_core::verify::{run_suites, ComplexStore, Suite, SweepLimits};
use halfcube_core::{Error, FORMAT_VERSION};

const EXIT_OK: u8 = 0;
const EXIT_VERIFICATION: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "halfcube",
    version,
    about = "Half-cube complexes, exact homology, and homology characters"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Emit the JSON envelope instead of a table.
    #[arg(long, global = true)]
    json: bool,

    /// Emit CSV (tables only).
    #[arg(long, global = true)]
    csv: bool,

    /// Write output to a file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Worker threads (default: all cores; HALFCUBE_THREADS).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// Directory for the chain-complex cache (HALFCUBE_CACHE_DIR).
    #[arg(long, global = true, value_name = "DIR")]
    cache: Option<PathBuf>,

    /// Budget override for enumeration and homology sizes (HALFCUBE_MAX_N).
    #[arg(long, global = true, value_name = "N")]
    max_n: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Face counts per dimension, measured against the closed formulas.
    Faces(FacesArgs),
    /// Reduced homology of the k-truncated subcomplex, with the
    /// concentration verdict.
    Homology(HomologyArgs),
    /// Betti numbers by recurrence, closed form, and alternating sum.
    Betti(BettiArgs),
    /// Homology character decomposition and related identities.
    Character(CharacterArgs),
    /// Littlewood-Richardson coefficients and Pieri expansions.
    Lr(LrArgs),
    /// Verification suites with machine-readable reports.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct FacesArgs {
    /// Rank of the half cube (n >= 4).
    #[arg(long)]
    n: usize,
    /// Restrict the table to one dimension.
    #[arg(long)]
    dim: Option<i64>,
}

#[derive(Args)]
struct HomologyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
}

#[derive(Args)]
struct BettiArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Full table up to this rank (default 12 when --n is absent).
    #[arg(long, value_name = "N")]
    n_max: Option<usize>,
}

#[derive(Args)]
struct CharacterArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Also decompose the restriction to the symmetric group.
    #[arg(long)]
    restrict_sn: bool,
    /// Also print the class-function table (requires n within the group
    /// enumeration budget).
    #[arg(long)]
    values: bool,
    /// Also check the branching identity against rank n-1.
    #[arg(long)]
    branch: bool,
}

#[derive(Args)]
struct LrArgs {
    #[arg(long)]
    mu: String,
    #[arg(long)]
    nu: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    /// Expand mu times the one-row partition [ROW] (Pieri rule).
    #[arg(long, value_name = "ROW")]
    row: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: faces, chain, homology, theorem44, branching, restriction,
    /// characters, all.
    #[arg(long)]
    suite: String,
    /// Cap on the ranks each suite sweeps.
    #[arg(long, value_name = "N")]
    n_max: Option<usize>,
}

struct Config {
    enum_budget: usize,
    homology_budget: usize,
    group_budget: usize,
    cache_dir: Option<PathBuf>,
    json: bool,
    csv: bool,
    out: Option<PathBuf>,
}

fn env_usize(name: &str) -> Option<usize> {
    std::env::var(name).ok().and_then(|v| v.parse().ok())
}

fn env_path(name: &str) -> Option<PathBuf> {
    std::env::var(name).ok().map(PathBuf::from)
}

/// Envelope around every payload; identical invocations produce identical
/// bytes (timing is reported on stderr, outside the envelope).
fn envelope(command: &str, parameters: Value, payload: Value) -> Value {
    json!({
        "command": command,
        "format_version": FORMAT_VERSION,
        "parameters": parameters,
        "payload": payload,
    })
}

fn emit(cfg: &Config, rendered: String) -> Result<(), Error> {
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, rendered.as_bytes())?;
            Ok(())
        }
        None => {
            println!("{rendered}");
            Ok(())
        }
    }
}

fn usage_error(msg: &str) -> u8 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::BudgetExceeded(_)
        | Error::OutOfRange(_)
        | Error::Invalid(_)
        | Error::SizeMismatch(_)
        | Error::Io(_) => EXIT_USAGE,
        _ => EXIT_VERIFICATION,
    }
}

fn run_faces(cfg: &Config, args: &FacesArgs) -> Result<u8, Error> {
    let census = face_census(args.n, cfg.enum_budget)?;
    let rows: Vec<_> = census
        .rows
        .iter()
        .filter(|r| args.dim.is_none_or(|d| d == r.dim))
        .collect();
    if rows.is_empty() {
        return Err(Error::OutOfRange(format!(
            "dimension {:?} out of range for n={}",
            args.dim, args.n
        )));
    }
    let payload = json!({
        "faces": rows.iter().map(|r| json!({
            "dim": r.dim,
            "simplex": r.simplex as u64,
            "demicube": r.demicube as u64,
            "expected_simplex": r.expected_simplex as u64,
            "expected_demicube": r.expected_demicube as u64,
        })).collect::<Vec<_>>(),
        "matches_formulas": census.matches_formulas(),
        "reduced_euler": census.reduced_euler() as i64,
    });
    let env = envelope(
        "faces",
        json!({"n": args.n, "dim": args.dim}),
        payload,
    );
    let rendered = if cfg.json {
        serde_json::to_string_pretty(&env)?
    } else if cfg.csv {
        let mut s = String::from("dim,simplex,demicube,expected_simplex,expected_demicube\n");
        for r in &rows {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                r.dim, r.simplex, r.demicube, r.expected_simplex, r.expected_demicube
            ));
        }
        s.trim_end().to_string()
    } else {
        let mut s = format!("face census of the rank-{} half cube\n", args.n);
        s.push_str("dim   simplex  demicube  formula(simplex)  formula(demicube)\n");
        for r in &rows {
            s.push_str(&format!(
                "{:<5} {:<8} {:<9} {:<17} {}\n",
                r.dim, r.simplex, r.demicube, r.expected_simplex, r.expected_demicube
            ));
        }
        s.push_str(&format!(
            "matches formulas: {}",
            census.matches_formulas()
        ));
        s
    };
    emit(cfg, rendered)?;
    Ok(EXIT_OK)
}

fn run_homology(cfg: &Config, args: &HomologyArgs) -> Result<u8, Error> {
    if args.n > cfg.homology_budget {
        return Err(Error::BudgetExceeded(format!(
            "homology at n={} exceeds the budget n <= {} (raise with --max-n or HALFCUBE_MAX_N)",
            args.n, cfg.homology_budget
        )));
    }
    let mut store = ComplexStore::new(cfg.homology_budget, cfg.cache_dir.clone());
    let cc = store.get(args.n)?;
    let report = verify_concentration(&cc, args.k)?;
    let env = envelope(
        "homology",
        json!({"n": args.n, "k": args.k}),
        report.to_json(),
    );
    let rendered = if cfg.json {
        serde_json::to_string_pretty(&env)?
    } else {
        let mut s = format!("reduced homology of the k={} truncation at n={}\n", args.k, args.n);
        for (deg, group) in &report.report.groups {
            let torsion = if group.torsion.is_empty() {
                String::new()
            } else {
                format!(" + torsion {:?}", group.torsion)
            };
            s.push_str(&format!("  H_{deg} = Z^{}{}\n", group.rank, torsion));
        }
        s.push_str(&format!(
            "concentrated in degree {} with rank {}: {}",
            args.k as i64 - 1,
            report.expected_rank,
            if report.pass { "pass" } else { "FAIL" }
        ));
        s
    };
    emit(cfg, rendered)?;
    Ok(if report.pass { EXIT_OK } else { EXIT_VERIFICATION })
}

fn run_betti(cfg: &Config, args: &BettiArgs) -> Result<u8, Error> {
    let triple = |n: usize, k: usize| -> Result<(u128, u128, Option<u128>), Error> {
        let a = betti(n, k, BettiMethod::Recurrence)?;
        let b = betti(n, k, BettiMethod::Closed)?;
        let c = if k >= 3 && k <= n {
            Some(betti(n, k, BettiMethod::Alternating)?)
        } else {
            None
        };
        Ok((a, b, c))
    };
    let mut rows = Vec::new();
    match (args.n, args.k) {
        (None, Some(_)) => {
            return Err(Error::Invalid("--k requires --n".into()));
        }
        (Some(n), Some(k)) => rows.push((n, k, triple(n, k)?)),
        (Some(n), None) => {
            for k in 0..=n {
                rows.push((n, k, triple(n, k)?));
            }
        }
        _ => {
            let hi = args.n_max.unwrap_or(12);
            for n in 0..=hi {
                for k in 0..=n {
                    rows.push((n, k, triple(n, k)?));
                }
            }
        }
    }
    let agree = rows
        .iter()
        .all(|&(_, _, (a, b, c))| a == b && c.is_none_or(|c| c == a));
    let payload = json!({
        "rows": rows.iter().map(|&(n, k, (a, b, c))| json!({
            "n": n,
            "k": k,
            "recurrence": a as u64,
            "closed": b as u64,
            "alternating": c.map(|v| v as u64),
        })).collect::<Vec<_>>(),
        "agree": agree,
    });
    let env = envelope(
        "betti",
        json!({"n": args.n, "k": args.k, "n_max": args.n_max}),
        payload,
    );
    let rendered = if cfg.json {
        serde_json::to_string_pretty(&env)?
    } else if cfg.csv {
        let mut s = String::from("n,k,recurrence,closed,alternating\n");
        for &(n, k, (a, b, c)) in &rows {
            s.push_str(&format!(
                "{n},{k},{a},{b},{}\n",
                c.map_or(String::new(), |v| v.to_string())
            ));
        }
        s.trim_end().to_string()
    } else {
        let mut s = String::from("n   k   recurrence   closed   alternating\n");
        for &(n, k, (a, b, c)) in &rows {
            s.push_str(&format!(
                "{:<3} {:<3} {:<12} {:<8} {}\n",
                n,
                k,
                a,
                b,
                c.map_or("-".to_string(), |v| v.to_string())
            ));
        }
        s.push_str(&format!("all methods agree: {agree}"));
        s
    };
    emit(cfg, rendered)?;
    Ok(if agree { EXIT_OK } else { EXIT_VERIFICATION })
}

fn run_character(cfg: &Config, args: &CharacterArgs) -> Result<u8, Error> {
    let character = chi_d(args.n, args.k)?;
    let mut payload = json!({
        "character": character.to_json(),
        "multiplicity_free": character.decomposition.is_multiplicity_free(),
    });
    let mut verdicts = true;
    if args.restrict_sn {
        let r = restrict_chi_d_to_sn(args.n, args.k)?;
        payload["restriction_to_sn"] = r.to_json();
    }
    if args.values {
        if args.n > cfg.group_budget {
            return Err(Error::BudgetExceeded(format!(
                "class values at n={} exceed the group budget n <= {}",
                args.n, cfg.group_budget
            )));
        }
        let table = conjugacy_classes(args.n, GroupKind::D, cfg.group_budget)?;
        let values: Vec<Value> = table
            .classes
            .iter()
            .map(|c| {
                let v = character.value(&c.cycle_type).expect("unsplit labels only");
                json!({
                    "representative": c.representative.to_string(),
                    "cycle_type": c.cycle_type.to_string(),
                    "class_size": c.size,
                    "value": v,
                })
            })
            .collect();
        payload["values"] = Value::Array(values);
    }
    if args.branch {
        let (left, right, equal) = branch_chi_d(args.n, args.k)?;
        verdicts &= equal;
        payload["branching"] = json!({
            "restricted": left.to_json(),
            "recurrence_side": right.to_json(),
            "equal": equal,
        });
    }
    let env = envelope(
        "character",
        json!({
            "n": args.n,
            "k": args.k,
            "restrict_sn": args.restrict_sn,
            "values": args.values,
            "branch": args.branch,
        }),
        payload.clone(),
    );
    let rendered = if cfg.json {
        serde_json::to_string_pretty(&env)?
    } else {
        let mut s = format!(
            "homology character at n={}, k={} (degree {})\n",
            args.n,
            args.k,
            character.degree()
        );
        for (label, mult) in character.decomposition.terms() {
            s.push_str(&format!("  {mult} x {label}  (degree {})\n", label.degree()));
        }
        if args.restrict_sn {
            let r = restrict_chi_d_to_sn(args.n, args.k)?;
            s.push_str(&format!("restriction to the symmetric group: {}\n", r.decomposition));
            let dims: Vec<String> = r
                .term_dims
                .iter()
                .map(|(e, d)| format!("e={e}: {d}"))
                .collect();
            s.push_str(&format!("induced-module dimensions: {}\n", dims.join(", ")));
        }
        if args.values {
            if let Some(values) = payload["values"].as_array() {
                s.push_str("class-function table (representative / size / value):\n");
                for v in values {
                    s.push_str(&format!(
                        "  {}  {}  {}\n",
                        v["representative"].as_str().unwrap(),
                        v["class_size"],
                        v["value"]
                    ));
                }
            }
        }
        if args.branch {
            s.push_str(&format!(
                "branching identity holds: {}\n",
                payload["branching"]["equal"]
            ));
        }
        s.trim_end().to_string()
    };
    emit(cfg, rendered)?;
    Ok(if verdicts { EXIT_OK } else { EXIT_VERIFICATION })
}

fn run_lr(cfg: &Config, args: &LrArgs) -> Result<u8, Error> {
    let mu: Partition = args.mu.parse()?;
    let (payload, human) = if let Some(row) = args.row {
        let expansion = pieri_expand(&mu, row);
        let labels: Vec<String> = expansion.iter().map(Partition::to_string).collect();
        (
            json!({"pieri": labels, "mu": mu.to_string(), "row": row}),
            format!("[{mu}] * [{row}] = {}", labels.join(" + ")),
        )
    } else {
        let nu: Partition = args
            .nu
            .as_deref()
            .ok_or_else(|| Error::Invalid("--nu is required without --row".into()))?
            .parse()?;
        match &args.lambda {
            Some(lam) => {
                let lambda: Partition = lam.parse()?;
                let c = lr_coefficient(&mu, &nu, &lambda);
                (
                    json!({"coefficient": c, "mu": mu.to_string(), "nu": nu.to_string(), "lambda": lambda.to_string()}),
                    format!("c^[{lambda}]_([{mu}],[{nu}]) = {c}"),
                )
            }
            None => {
                let total = mu.size() + nu.size();
                let terms: Vec<Value> = halfcube_core::partition::partitions_of(total)
                    .into_iter()
                    .filter_map(|lam| {
                        let c = lr_coefficient(&mu, &nu, &lam);
                        (c > 0).then(|| json!({"lambda": lam.to_string(), "coefficient": c}))
                    })
                    .collect();
                let human = terms
                    .iter()
                    .map(|t| {
                        format!(
                            "{}*[{}]",
                            t["coefficient"],
                            t["lambda"].as_str().unwrap()
                        )
                    })
                    .collect::<Vec<_>>()
                    .join(" + ");
                (
                    json!({"expansion": terms, "mu": mu.to_string(), "nu": nu.to_string()}),
                    format!("[{mu}] * [{nu}] = {human}"),
                )
            }
        }
    };
    let env = envelope(
        "lr",
        json!({"mu": args.mu, "nu": args.nu, "lambda": args.lambda, "row": args.row}),
        payload,
    );
    let rendered = if cfg.json {
        serde_json::to_string_pretty(&env)?
    } else {
        human
    };
    emit(cfg, rendered)?;
    Ok(EXIT_OK)
}

fn run_verify(cfg: &Config, args: &VerifyArgs) -> Result<u8, Error> {
    let Some(suite) = Suite::parse(&args.suite) else {
        return Err(Error::Invalid(format!(
            "unknown suite {:?}; expected faces|chain|homology|theorem44|branching|restriction|characters|all",
            args.suite
        )));
    };
    // --n-max caps every sweep uniformly; otherwise the documented default
    // sizes apply, with the global budget override honored.
    let limits = match args.n_max {
        Some(m) => SweepLimits::uniform(m),
        None => SweepLimits {
            faces: cfg.enum_budget,
            heavy: cfg.homology_budget,
            wide: cfg.enum_budget,
            ..SweepLimits::default()
        },
    };
    let mut store = ComplexStore::new(
        limits.heavy.max(cfg.homology_budget),
        cfg.cache_dir.clone(),
    );
    let reports = run_suites(suite, limits, &mut store)?;
    let pass = reports.iter().all(|r| r.pass());
    let payload = json!({
        "pass": pass,
        "suites": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
    });
    let env = envelope(
        "verify",
        json!({"suite": args.suite, "n_max": args.n_max}),
        payload,
    );
    emit(cfg, serde_json::to_string_pretty(&env)?)?;
    for r in &reports {
        eprintln!(
            "suite {}: {} ({} checks)",
            r.suite,
            if r.pass() { "pass" } else { "FAIL" },
            r.total_checks()
        );
    }
    Ok(if pass { EXIT_OK } else { EXIT_VERIFICATION })
}

fn run() -> u8 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    if cli.json && cli.csv {
        return usage_error("--json and --csv are mutually exclusive");
    }
    let threads = cli.threads.or_else(|| env_usize("HALFCUBE_THREADS"));
    if let Some(t) = threads {
        if t == 0 {
            return usage_error("--threads must be positive");
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let max_n = cli.max_n.or_else(|| env_usize("HALFCUBE_MAX_N"));
    let cfg = Config {
        enum_budget: max_n.unwrap_or(DEFAULT_ENUM_MAX_N),
        homology_budget: max_n.unwrap_or(DEFAULT_HOMOLOGY_MAX_N),
        group_budget: max_n.unwrap_or(DEFAULT_GROUP_MAX_N),
        cache_dir: cli.cache.clone().or_else(|| env_path("HALFCUBE_CACHE_DIR")),
        json: cli.json,
        csv: cli.csv,
        out: cli.out.clone(),
    };
    let started = Instant::now();
    let result = match &cli.command {
        Command::Faces(args) => run_faces(&cfg, args),
        Command::Homology(args) => run_homology(&cfg, args),
        Command::Betti(args) => run_betti(&cfg, args),
        Command::Character(args) => run_character(&cfg, args),
        Command::Lr(args) => run_lr(&cfg, args),
        Command::Verify(args) => run_verify(&cfg, args),
    };
    eprintln!("elapsed_ms={}", started.elapsed().as_millis());
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run())
}
