//! Command-line front end. Every command prints one JSON document; rationals
//! are strings and `-inf` marks an unbounded mld.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::Error;
use crate::forms::verify_nash;
use crate::mld::{
    beta_coefficients, is_terminal, lc_violation_along, lc_violation_at_rank, mld_along, mld_at_rank,
    semicontinuity_profile,
};
use crate::oracle::{mld_via_oracle, ord_ideal_powerseries, ArcMode, Target};
use crate::orbit::{contact_order_subvariety, nash_contact_order, orbit_codim, orbit_codim_point};
use crate::pairs::{parse_rational, DeterminantalPair, ExtendedPartition, Order, Rational};
use crate::tableaux::{DoubleTableau, Guard, Straightener};

#[derive(Parser, Debug)]
#[command(name = "detmld", version, about = "Minimal log discrepancies of determinantal pairs")]
struct Cli {
    /// Render the result as an aligned key/value table instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Worker threads for parallel checks (results do not depend on it).
    #[arg(long, global = true, env = "DETMLD_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimal log discrepancies.
    Mld {
        #[command(subcommand)]
        target: MldCommand,
    },
    /// Log canonicity test with the failing inequality, if any.
    Lc {
        #[command(subcommand)]
        action: LcCommand,
    },
    /// Orbit data for an extended partition.
    Orbit {
        #[command(subcommand)]
        action: OrbitCommand,
    },
    /// Order of the ideal of s×s minors along diag(t^λ), by power series.
    Ord {
        #[arg(long, value_parser = parse_partition, allow_hyphen_values = true)]
        lambda: ExtendedPartition,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        s: usize,
        #[arg(long = "N")]
        n: usize,
        /// Conjugate the arc by random invertible matrices from this seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Expand a double tableau (JSON file) in standard bideterminants.
    Straighten {
        #[arg(long)]
        file: PathBuf,
        /// Drop standard terms with more than K rows.
        #[arg(long)]
        kbound: Option<usize>,
        /// Matrix size; defaults to the largest entry of the tableau.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Canonical-form and Nash ideal checks.
    Nash {
        #[command(subcommand)]
        action: NashCommand,
    },
    /// mld at every rank together with the difference identities.
    Semicontinuity {
        #[command(flatten)]
        pair: PairArgs,
    },
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    k: usize,
    /// Comma-separated coefficients (p, p/q or decimals); missing ones are 0.
    #[arg(long, value_parser = parse_alphas, allow_hyphen_values = true)]
    alphas: Option<Alphas>,
}

#[derive(Clone, Debug)]
struct Alphas(Vec<Rational>);

impl PairArgs {
    fn pair(&self) -> crate::Result<DeterminantalPair> {
        DeterminantalPair::new(self.m, self.k, self.alphas.clone().map(|a| a.0).unwrap_or_default())
    }
}

#[derive(Subcommand, Debug)]
enum MldCommand {
    /// At a matrix of rank q.
    Point {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        q: usize,
        /// Also run the contact-data oracle with entries up to L.
        #[arg(long, value_name = "L")]
        oracle: Option<u64>,
    },
    /// Along D^(k-j).
    Locus {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        j: usize,
        #[arg(long, value_name = "L")]
        oracle: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum LcCommand {
    Check {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, conflicts_with = "j", required_unless_present = "j")]
        q: Option<usize>,
        #[arg(long)]
        j: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum OrbitCommand {
    Codim {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = parse_partition, allow_hyphen_values = true)]
        lambda: ExtendedPartition,
        #[arg(long)]
        q: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum NashCommand {
    Verify {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        /// Add the elapsed wall time to the report.
        #[arg(long)]
        timing: bool,
    },
}

fn parse_alphas(s: &str) -> Result<Alphas, String> {
    if s.trim().is_empty() {
        return Ok(Alphas(Vec::new()));
    }
    s.split(',').map(|t| parse_rational(t.trim()).map_err(|e| e.to_string())).collect::<Result<_, _>>().map(Alphas)
}

fn parse_partition(s: &str) -> Result<ExtendedPartition, String> {
    s.parse::<ExtendedPartition>().map_err(|e| e.to_string())
}

fn order_json(o: Order) -> Value {
    serde_json::to_value(o).expect("orders serialize")
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn mld_report(pair: &DeterminantalPair, target: Target, oracle: Option<u64>) -> crate::Result<Value> {
    let (mld, violation, betas) = match target {
        Target::Point { q } => {
            let v = lc_violation_at_rank(pair, q)?;
            (mld_at_rank(pair, q)?, v, beta_coefficients(pair, pair.k() - q)?)
        }
        Target::Locus { j } => {
            let v = lc_violation_along(pair, j)?;
            (mld_along(pair, j)?, v, beta_coefficients(pair, pair.k())?)
        }
    };
    let mut out = json!({
        "m": pair.m(),
        "k": pair.k(),
        "alphas": pair.alphas().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "target": to_value(&target),
        "mld": to_value(&mld),
        "lc": violation.is_none(),
        "beta": to_value(&betas),
        "violation": to_value(&violation),
    });
    if let Target::Locus { .. } = target {
        out["terminal"] = json!(is_terminal(pair.m(), pair.k())?);
    }
    if let Some(bound) = oracle {
        let cmp = mld_via_oracle(pair, target, bound)?;
        out["oracle"] = to_value(&cmp.oracle);
        out["agree"] = json!(cmp.agree);
    }
    Ok(out)
}

fn execute(command: Command) -> crate::Result<Value> {
    match command {
        Command::Mld { target: MldCommand::Point { pair, q, oracle } } => {
            mld_report(&pair.pair()?, Target::Point { q }, oracle)
        }
        Command::Mld { target: MldCommand::Locus { pair, j, oracle } } => {
            mld_report(&pair.pair()?, Target::Locus { j }, oracle)
        }
        Command::Lc { action: LcCommand::Check { pair, q, j } } => {
            let pair = pair.pair()?;
            let (target, violation) = match (q, j) {
                (Some(q), _) => (Target::Point { q }, lc_violation_at_rank(&pair, q)?),
                (None, Some(j)) => (Target::Locus { j }, lc_violation_along(&pair, j)?),
                (None, None) => unreachable!("clap requires --q or --j"),
            };
            Ok(json!({"target": to_value(&target), "lc": violation.is_none(), "violation": to_value(&violation)}))
        }
        Command::Orbit { action: OrbitCommand::Codim { m, k, lambda, q } } => {
            let pair = DeterminantalPair::bare(m, k)?;
            let w = (1..=k).map(|i| contact_order_subvariety(&lambda, &pair, i).map(order_json)).collect::<Result<Vec<_>, _>>()?;
            let mut out = json!({
                "lambda": to_value(&lambda),
                "codim": orbit_codim(&lambda, &pair)?,
                "w": w,
                "nash": order_json(nash_contact_order(&lambda, &pair)?),
            });
            if let Some(q) = q {
                out["q"] = json!(q);
                out["codim_point"] = json!(orbit_codim_point(&lambda, &pair, q)?);
            }
            Ok(out)
        }
        Command::Ord { lambda, m, s, n, seed } => {
            if lambda.len() != m {
                return Err(Error::Invalid(format!("λ has {} entries but m = {m}", lambda.len())));
            }
            let mode = seed.map_or(ArcMode::Diagonal, ArcMode::Conjugated);
            let order = ord_ideal_powerseries(&lambda, s, n, mode)?;
            let closed: Order = (m - s + 1..=m).map(|i| lambda.part(i)).sum();
            Ok(json!({
                "lambda": to_value(&lambda),
                "s": s,
                "N": n,
                "seed": seed,
                "order": to_value(&order),
                "closed_form": order_json(closed),
            }))
        }
        Command::Straighten { file, kbound, m } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", file.display())))?;
            let dt: DoubleTableau =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", file.display())))?;
            let m = m.unwrap_or_else(|| dt.left().max_entry().max(dt.right().max_entry()).max(1));
            let expansion = Straightener::new(m, Guard::default()).straighten(&dt, kbound)?;
            Ok(json!({"m": m, "k_bound": kbound, "input": to_value(&dt), "expansion": to_value(&expansion)}))
        }
        Command::Nash { action: NashCommand::Verify { m, k, timing } } => {
            let start = Instant::now();
            let report = verify_nash(m, k)?;
            let mut out = to_value(&report);
            if timing {
                out["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
            }
            Ok(out)
        }
        Command::Semicontinuity { pair } => Ok(to_value(&semicontinuity_profile(&pair.pair()?)?)),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let scalar = |v: &Value| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    match v {
        Value::Object(map) if !map.is_empty() => {
            for (k, child) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, child, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), child, out);
            }
        }
        Value::Array(items) => {
            out.push((prefix.to_string(), format!("[{}]", items.iter().map(scalar).collect::<Vec<_>>().join(", "))))
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn render_pretty(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    rows.iter().map(|(k, val)| format!("{k:<width$}  {val}\n")).collect()
}

/// Runs the CLI with the given arguments (the first is the program name) and
/// returns the exit code: 0 on success, 1 when the library rejects the
/// input, 2 on argument errors.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                2
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    let result = match cli.threads {
        Some(0) => {
            let _ = writeln!(stderr, "error: --threads must be at least 1");
            return 2;
        }
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(cli.command)),
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot start thread pool: {e}");
                return 1;
            }
        },
        None => execute(cli.command),
    };
    match result {
        Ok(value) => {
            let text = if cli.pretty {
                render_pretty(&value)
            } else {
                format!("{}\n", serde_json::to_string(&value).expect("values serialize"))
            };
            let _ = stdout.write_all(text.as_bytes());
            0
        }
        Err(e @ Error::Parse(_)) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}
