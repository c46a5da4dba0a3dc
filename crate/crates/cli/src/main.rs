use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use factorsets::bounds::{self, upper_bound_audit};
use factorsets::counting::{self, check_conjecture_2n, check_theorem1, theorem1_scan};
use factorsets::edge_cover;
use factorsets::enumeration::{self, EnumerateOptions, KNOWN_ROWS};
use factorsets::factor_set::{self, FactorSet, DEFAULT_MAX_SEARCH_STATES};
use factorsets::word::{self, Word};
use factorsets::{Budget, Error, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "factorsets", version, about = "Factor sets of binary words")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Memory budget for exhaustive searches
    #[arg(long, env = "FACTORSET_BUDGET_MB", global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_memory_mb: Option<u64>,
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_seconds: Option<u64>,
    /// Worker threads; 0 uses every core
    #[arg(long, default_value_t = 0, global = true)]
    workers: usize,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Refuse to run unless this matches the output schema version
    #[arg(long, global = true)]
    schema_version: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Md,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Length-n factors of a word
    Factors {
        word: Word,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        circular: bool,
    },
    /// Shortest (circular) witness of a set
    #[command(group(ArgGroup::new("spec").required(true).args(["set", "full"])))]
    Witness {
        /// Comma-separated words, or a hex bitmap with --hex
        set: Option<String>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        circular: bool,
        #[arg(long, requires = "set")]
        hex: bool,
        /// All 2^n words of length n
        #[arg(long)]
        full: bool,
    },
    /// Count representable sets and their longest shortest witnesses
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Use exhaustive enumeration of words instead of the state search
        #[arg(long)]
        oracle: bool,
        /// Longest word the oracle tries
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        sparse: bool,
        #[arg(long)]
        allow_order_five: bool,
        /// Test every edge set of the de Bruijn graph instead (orders up to 5)
        #[arg(long, conflicts_with_all = ["oracle", "checkpoint", "sparse"])]
        edge_cover: bool,
    },
    /// Table of T(t, n)
    Ttable {
        #[arg(long)]
        t_max: usize,
        #[arg(long)]
        n_max: usize,
    },
    /// Lower and upper bounds around the circular count
    Bounds {
        #[arg(long)]
        n: usize,
        /// Include the exact upper-bound audit
        #[arg(long)]
        audit: bool,
    },
    /// Exhaustive and randomized checks
    #[command(group(ArgGroup::new("check").required(true).args(["theorem1", "conjecture2n", "hamiltonian"])))]
    Verify {
        /// Word length and factor order
        #[arg(long, num_args = 2, value_names = ["T", "N"])]
        theorem1: Option<Vec<usize>>,
        /// Also scan outside n >= t - n + 1
        #[arg(long, requires = "theorem1")]
        unrestricted: bool,
        #[arg(long, value_name = "N")]
        conjecture2n: Option<usize>,
        /// Number of random digraphs
        #[arg(long, value_name = "TRIALS")]
        hamiltonian: Option<usize>,
        #[arg(long, default_value_t = 12)]
        max_vertices: usize,
    },
}

enum Failure {
    Usage(String),
    Verification(String),
    Budget(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::BudgetExhausted { .. } => Failure::Budget(e.to_string()),
            Error::Mismatch { .. } => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<bool, Failure>;

fn budget(cli: &Cli) -> Budget {
    let mut b = Budget::default().with_workers(cli.workers);
    if let Some(mb) = cli.max_memory_mb {
        b = b.with_memory_mb(mb);
    }
    if let Some(s) = cli.max_seconds {
        b = b.with_duration(Duration::from_secs(s));
    }
    b
}

fn print_json(value: &impl Serialize) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

fn factors(cli: &Cli, w: &Word, n: usize, circular: bool) -> Outcome {
    let set = if circular {
        word::circular_factors(w, n)?
    } else {
        word::factors(w, n)?
    };
    match cli.format {
        Format::Json => print_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "word": w,
            "n": n,
            "circular": circular,
            "factors": set,
            "hex": set.to_hex(),
        })),
        _ => println!("{set}"),
    }
    Ok(true)
}

fn witness(cli: &Cli, spec: Option<&str>, n: usize, circular: bool, hex: bool) -> Outcome {
    let set = match spec {
        None => FactorSet::full(n)?,
        Some(s) if hex => FactorSet::from_hex(n, s)?,
        Some(s) => FactorSet::parse_list(n, s)?,
    };
    let result = if circular {
        factor_set::shortest_circular_witness(&set)?
    } else {
        factor_set::shortest_witness(&set)?
    };
    match cli.format {
        Format::Json => print_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "n": n,
            "circular": circular,
            "set": set,
            "result": result,
        })),
        _ => match &result.witness {
            Some(w) => println!("{} {w}", result.length),
            None if circular => println!("not circularly representable"),
            None => println!("not representable"),
        },
    }
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    cli: &Cli,
    n: usize,
    oracle: bool,
    max_len: Option<usize>,
    checkpoint: Option<PathBuf>,
    sparse: bool,
    allow_order_five: bool,
    edge_cover: bool,
) -> Outcome {
    let budget = budget(cli);
    let result = if edge_cover {
        if n > edge_cover::MAX_COVER_ENUMERATION_ORDER {
            return Err(Failure::Usage("--edge-cover handles orders 1 to 5".into()));
        }
        edge_cover::enumerate_by_edge_covers(n, &budget, DEFAULT_MAX_SEARCH_STATES)?
    } else if oracle {
        let bound = bounds::witness_length_bound(n);
        let exhaustive = u64::try_from(&bound).unwrap_or(u64::MAX);
        let len = max_len.unwrap_or(if exhaustive <= 24 {
            exhaustive as usize
        } else {
            26
        });
        if (len as u64) < exhaustive {
            eprintln!("note: oracle tries words up to length {len}; complete only if every shortest witness fits");
        }
        enumeration::brute_force_enumerate(n, len, &budget)?
    } else {
        let opts = EnumerateOptions {
            budget,
            allow_order_five,
            sparse,
            checkpoint,
        };
        let (result, stats) = enumeration::enumerate_with_stats(n, &opts)?;
        eprintln!(
            "searched {} shards ({} resumed), {} states, depth {}, {} ms",
            stats.shards_searched,
            stats.shards_resumed,
            stats.states_visited,
            stats.max_depth,
            stats.elapsed_ms
        );
        result
    };
    match cli.format {
        Format::Json => print_json(&result),
        Format::Csv => {
            println!("n,circ_count,rep_count,nu,mu,longest_circ_witness,longest_witness");
            println!(
                "{},{},{},{},{},{},{}",
                result.n,
                result.circ_count,
                result.rep_count,
                result.nu,
                result.mu,
                result.longest_circ_witness,
                result.longest_witness
            );
        }
        Format::Md => {
            println!("| n | circularly representable | representable | nu | mu |");
            println!("|---|---:|---:|---:|---:|");
            println!(
                "| {} | {} | {} | {} | {} |",
                result.n, result.circ_count, result.rep_count, result.nu, result.mu
            );
        }
        Format::Text => {
            println!("n = {}", result.n);
            println!("circularly representable sets: {}", result.circ_count);
            println!("representable sets: {}", result.rep_count);
            println!("nu = {}  {}", result.nu, result.longest_circ_witness);
            println!("mu = {}  {}", result.mu, result.longest_witness);
        }
    }
    Ok(true)
}

fn ttable(cli: &Cli, t_max: usize, n_max: usize) -> Outcome {
    if n_max == 0 || t_max == 0 {
        return Err(Failure::Usage(
            "--t-max and --n-max must be positive".into(),
        ));
    }
    let table = counting::t_table(t_max, n_max, &budget(cli))?;
    match cli.format {
        Format::Json => print_json(&table),
        Format::Csv => print!("{}", table.to_csv()),
        Format::Md => print!("{}", table.to_markdown()),
        Format::Text => {
            for n in 1..=n_max {
                let row: Vec<String> = (n..=t_max)
                    .map(|t| {
                        table
                            .get(t, n)
                            .map(|v| v.to_string())
                            .unwrap_or_else(|| "?".into())
                    })
                    .collect();
                println!("{}", row.join(","));
            }
        }
    }
    Ok(true)
}

fn bounds_cmd(cli: &Cli, n: usize, audit: bool) -> Outcome {
    if n < 2 {
        return Err(Failure::Usage(
            "bounds relate |C_n| to sets of order n - 1, so --n must be at least 2".into(),
        ));
    }
    let (count, source) = if n <= 4 {
        let r = enumeration::enumerate(n, &EnumerateOptions::with_budget(budget(cli)))?;
        (Some(r.circ_count), "enumerated")
    } else if let Some(row) = KNOWN_ROWS.iter().find(|r| r.0 == n) {
        (Some(row.1), "reference")
    } else {
        (None, "unknown")
    };
    let lower = bounds::lower_bound(n - 1);
    let upper = bounds::upper_bound(n - 1);
    let sandwich = count.map(|c| bounds::sandwich(n, c)).transpose()?;
    let holds = sandwich.as_ref().is_none_or(|s| s.holds);
    let audit = audit.then(|| upper_bound_audit(n - 1));
    if let Some(a) = &audit {
        if !(a.telescopes && a.inner_identity_holds) {
            return Err(Failure::Verification(format!(
                "upper-bound audit failed for order {}",
                n - 1
            )));
        }
    }
    match cli.format {
        Format::Json => print_json(&json!({
            "schema_version": SCHEMA_VERSION,
            "n": n,
            "lower": lower.to_string(),
            "count": count,
            "count_source": source,
            "upper": upper.to_string(),
            "holds": holds,
            "growth_rate": sandwich.as_ref().map(|s| s.growth_rate),
            "audit": audit,
        })),
        _ => {
            let half = 1u32 << (n - 2);
            let middle = count.map_or("?".to_string(), |c| c.to_string());
            println!(
                "2^{} = {lower} <= |C_{n}| = {middle} <= 10^{half} = {upper}  ({source})",
                1u32 << (n - 1)
            );
            if let Some(s) = &sandwich {
                println!("growth rate |C_{n}|^(1/2^{n}) = {:.6}", s.growth_rate);
            }
            if let Some(a) = &audit {
                println!("audit: weighted pair sum = {} = 10^{half}", a.weighted_sum);
            }
        }
    }
    Ok(holds)
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn verify(
    cli: &Cli,
    theorem1: Option<&[usize]>,
    unrestricted: bool,
    conjecture2n: Option<usize>,
    hamiltonian: Option<usize>,
    max_vertices: usize,
) -> Outcome {
    let budget = budget(cli);
    if let Some(&[t, n]) = theorem1 {
        let report = if unrestricted {
            theorem1_scan(t, n, &budget)?
        } else {
            check_theorem1(t, n, &budget)?
        };
        match cli.format {
            Format::Json => print_json(&report),
            _ => {
                println!(
                    "{}: t = {t}, n = {n}, {} classes, {} pairs, {} periodic classes{}",
                    verdict(report.passed),
                    report.classes_checked,
                    report.pairs_checked,
                    report.periodic_classes_checked,
                    if report.in_region {
                        ""
                    } else {
                        " (outside n >= k + 1)"
                    }
                );
                for e in &report.examples {
                    println!("  {e}");
                }
            }
        }
        return Ok(report.passed);
    }
    if let Some(n) = conjecture2n {
        let report = check_conjecture_2n(n, &budget)?;
        match cli.format {
            Format::Json => print_json(&report),
            _ => {
                println!(
                    "{}: n = {n}, {} equal-factor pairs, {} with period above n + 1 ({} up to complement)",
                    verdict(report.passed),
                    report.pairs,
                    report.nontrivial.len(),
                    report.nontrivial_up_to_complement
                );
                for p in &report.nontrivial {
                    let shapes: Vec<String> = p
                        .shapes
                        .iter()
                        .map(|s| format!("u={} v={}", s.u, s.v))
                        .collect();
                    println!(
                        "  {} {} period {} [{}] period = n+|u|: {}, period = 2n-|u|: {}",
                        p.x,
                        p.y,
                        p.period,
                        shapes.join("; "),
                        p.period_is_n_plus_u,
                        p.period_is_2n_minus_u
                    );
                }
                for p in &report.period_violations {
                    println!(
                        "  violation: {} (period {}) {} (period {})",
                        p.w, p.period_w, p.w2, p.period_w2
                    );
                }
            }
        }
        return Ok(report.passed);
    }
    if let Some(trials) = hamiltonian {
        if !(1..=bounds::MAX_WALK_VERTICES).contains(&max_vertices) {
            return Err(Failure::Usage("--max-vertices must be in 1..=15".into()));
        }
        let report = bounds::hamiltonian_trials(trials, cli.seed, max_vertices, &budget)?;
        match cli.format {
            Format::Json => print_json(&report),
            _ => {
                let tight = report
                    .trials
                    .iter()
                    .filter(|t| t.optimal_length == t.bound)
                    .count();
                println!(
                    "{}: {} random strongly connected digraphs (seed {}), optimal walk within bound in all, {} at the bound",
                    verdict(report.passed),
                    report.trials.len(),
                    report.seed,
                    tight
                );
            }
        }
        return Ok(report.passed);
    }
    Err(Failure::Usage("nothing to verify".into()))
}

fn run(cli: &Cli) -> Outcome {
    if let Some(v) = cli.schema_version {
        if v != SCHEMA_VERSION {
            return Err(Failure::Usage(format!(
                "schema version {v} requested, this build writes version {SCHEMA_VERSION}"
            )));
        }
    }
    match &cli.command {
        Command::Factors { word, n, circular } => factors(cli, word, *n, *circular),
        Command::Witness {
            set,
            n,
            circular,
            hex,
            full: _,
        } => witness(cli, set.as_deref(), *n, *circular, *hex),
        Command::Enumerate {
            n,
            oracle,
            max_len,
            checkpoint,
            sparse,
            allow_order_five,
            edge_cover,
        } => enumerate(
            cli,
            *n,
            *oracle,
            *max_len,
            checkpoint.clone(),
            *sparse,
            *allow_order_five,
            *edge_cover,
        ),
        Command::Ttable { t_max, n_max } => ttable(cli, *t_max, *n_max),
        Command::Bounds { n, audit } => bounds_cmd(cli, *n, *audit),
        Command::Verify {
            theorem1,
            unrestricted,
            conjecture2n,
            hamiltonian,
            max_vertices,
        } => verify(
            cli,
            theorem1.as_deref(),
            *unrestricted,
            *conjecture2n,
            *hamiltonian,
            *max_vertices,
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Verification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
