//! `cogrowth` command-line front end.
//!
//! Exit status: 0 when every requested check passes, 1 on a verification
//! failure, 2 on a budget or configuration error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cogrowth::asymptotics::{asymptotics_report, SpectralData, Thresholds};
use cogrowth::counting::{
    count_table, count_table_partial, gamma_bruteforce, walk_bruteforce, DEFAULT_BALL_BUDGET, DEFAULT_ENUM_BUDGET,
};
use cogrowth::groups::{preset_names, preset_spec, GroupSpec, PRESETS};
use cogrowth::verify::{verify, Check};
use cogrowth::{CountTable, Error, MarkedGroup};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "cogrowth", version, about = "Cogrowth counts, exact identity checks and asymptotic diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count reduced kernel words γ_n and identity words W_n.
    Count(CountArgs),
    /// Run the exact identity checks on a count table.
    Verify(VerifyArgs),
    /// Ratio and root estimates, amenability verdict and spectral diagnostics.
    Asymptotics(AsymptoticsArgs),
    /// List the built-in groups.
    Presets,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct GroupArgs {
    /// Built-in group name (see `cogrowth presets`).
    #[arg(long, conflicts_with = "group")]
    preset: Option<String>,
    /// Path to a JSON group spec.
    #[arg(long)]
    group: Option<PathBuf>,
}

#[derive(Args)]
struct Common {
    /// Largest word length to count.
    #[arg(long)]
    nmax: Option<usize>,
    /// Maximum number of group elements held by the counting DP.
    #[arg(long, default_value_t = DEFAULT_BALL_BUDGET)]
    ball_budget: usize,
    /// Maximum number of words enumerated by brute force.
    #[arg(long, default_value_t = DEFAULT_ENUM_BUDGET)]
    enum_budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[command(flatten)]
    common: Common,
    /// Cross-check the DP against brute-force enumeration for n ≤ this length.
    #[arg(long)]
    oracle: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[command(flatten)]
    common: Common,
    /// Count table (JSON, as written by `count --format json`) to check instead of counting.
    #[arg(long)]
    counts: Option<PathBuf>,
    /// Series order N; defaults to the table length.
    #[arg(long)]
    order: Option<usize>,
    /// grigorchuk, chebyshev, series, functional, singularities or all.
    #[arg(long, default_value = "all")]
    which: String,
}

#[derive(Args)]
struct AsymptoticsArgs {
    #[command(flatten)]
    group: GroupArgs,
    #[command(flatten)]
    common: Common,
    /// Count table to analyse instead of counting.
    #[arg(long)]
    counts: Option<PathBuf>,
    /// Slack allowed in the L_n ≤ h(ρ₀) probe.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Number of trailing rows summarised in the ratio table.
    #[arg(long, default_value_t = 5)]
    window: usize,
    /// Also write the plot-ready CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
}

enum Failure {
    Verification(String),
    Config(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Config(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Config(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

const DEFAULT_COUNT_NMAX: usize = 10;
const DEFAULT_VERIFY_NMAX: usize = 20;
const DEFAULT_ASYMPTOTICS_NMAX: usize = 20;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Count(a) => cmd_count(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Asymptotics(a) => cmd_asymptotics(a),
        Command::Presets => cmd_presets(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

struct Source {
    label: Value,
    group: Option<MarkedGroup>,
}

fn load_group(args: &GroupArgs) -> Result<Option<Source>, Failure> {
    if let Some(name) = &args.preset {
        let group = preset_spec(name).and_then(|s| s.build()).map_err(|e| Failure::Config(e.to_string()))?;
        return Ok(Some(Source { label: json!({ "preset": name }), group: Some(group) }));
    }
    if let Some(path) = &args.group {
        let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
        let group = GroupSpec::from_json(&text).and_then(|s| s.build()).map_err(|e| Failure::Config(e.to_string()))?;
        return Ok(Some(Source { label: json!({ "group_spec": path.display().to_string() }), group: Some(group) }));
    }
    Ok(None)
}

fn require_group(args: &GroupArgs) -> Result<Source, Failure> {
    load_group(args)?.ok_or_else(|| Failure::Config("one of --preset or --group is required".into()))
}

fn check_common(c: &Common, default_nmax: usize) -> Result<usize, Failure> {
    if c.ball_budget == 0 || c.enum_budget == 0 {
        return Err(Failure::Config("budgets must be positive".into()));
    }
    let n_max = c.nmax.unwrap_or(default_nmax);
    if n_max < 2 {
        return Err(Failure::Config("--nmax must be at least 2".into()));
    }
    Ok(n_max)
}

fn read_counts(path: &Path) -> Result<CountTable, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn provenance(source: &Value, c: &Common, n_max: usize) -> Value {
    json!({
        "tool": "cogrowth",
        "version": VERSION,
        "source": source,
        "n_max": n_max,
        "ball_budget": c.ball_budget,
        "enum_budget": c.enum_budget,
    })
}

fn provenance_comment(p: &Value) -> String {
    format!("# provenance {p}\n")
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Config(format!("{}: {e}", path.display()))),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn render_table(t: &CountTable, prov: &Value, truncation: &Option<Value>, format: Format) -> String {
    match format {
        Format::Json => {
            let mut v = serde_json::to_value(t).expect("count tables serialize");
            v["provenance"] = prov.clone();
            if let Some(tr) = truncation {
                v["truncated"] = tr.clone();
            }
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json values serialize"))
        }
        Format::Text | Format::Csv => {
            let mut s = provenance_comment(prov);
            if let Some(tr) = truncation {
                s.push_str(&format!("# truncated {tr}\n"));
            }
            if format == Format::Csv {
                s.push_str("# cogrowth-count-csv v1\nn,gamma,walk\n");
                for n in 0..=t.n_max() {
                    s.push_str(&format!("{n},{},{}\n", t.gamma[n], t.walk[n]));
                }
            } else {
                s.push_str(&format!("group {} (rank {}, q = {})\n", t.group, t.rank, t.q()));
                s.push_str(&format!("{:>4}  {:>24}  {:>24}\n", "n", "gamma_n", "W_n"));
                for n in 0..=t.n_max() {
                    s.push_str(&format!("{n:>4}  {:>24}  {:>24}\n", t.gamma[n], t.walk[n]));
                }
            }
            s
        }
    }
}

fn cmd_count(a: CountArgs) -> Outcome {
    let n_max = check_common(&a.common, DEFAULT_COUNT_NMAX)?;
    let src = require_group(&a.group)?;
    let g = src.group.as_ref().expect("count needs a group");
    let prov = provenance(&src.label, &a.common, n_max);
    let (table, err) = count_table_partial(g, n_max, a.common.ball_budget);
    if let Some(e) = err {
        let complete = table.gamma.len().checked_sub(1);
        let marker = json!({ "requested_n_max": n_max, "complete_through": complete, "reason": e.to_string() });
        emit(&a.common.out, &render_table(&table, &prov, &Some(marker), a.common.format))?;
        return Err(Failure::Config(format!("{e}; wrote the partial table")));
    }
    if let Some(k) = a.oracle {
        for n in 0..=k.min(n_max) {
            let gamma = gamma_bruteforce(g, n, a.common.enum_budget).map_err(|e| Failure::Config(e.to_string()))?;
            let walk = walk_bruteforce(g, n, a.common.enum_budget).map_err(|e| Failure::Config(e.to_string()))?;
            if gamma != table.gamma[n] || walk != table.walk[n] {
                return Err(Failure::Verification(format!(
                    "brute force disagrees with the DP at n = {n}: γ {} vs {}, W {} vs {}",
                    gamma, table.gamma[n], walk, table.walk[n]
                )));
            }
        }
    }
    emit(&a.common.out, &render_table(&table, &prov, &None, a.common.format))
}

/// The group for a table read from disk: the explicit flag, else a preset of
/// the same name.
fn group_for_table(args: &GroupArgs, t: &CountTable) -> Result<Source, Failure> {
    if let Some(src) = load_group(args)? {
        return Ok(src);
    }
    let group = preset_names().contains(&t.group.as_str()).then(|| preset_spec(&t.group).and_then(|s| s.build()));
    let group = group.transpose().map_err(|e| Failure::Config(e.to_string()))?;
    Ok(Source { label: json!({ "table_group": t.group }), group })
}

fn table_and_group(
    group: &GroupArgs,
    common: &Common,
    counts: &Option<PathBuf>,
    default_nmax: usize,
) -> Result<(CountTable, Source, Value), Failure> {
    let n_max = check_common(common, default_nmax)?;
    if let Some(path) = counts {
        let t = read_counts(path)?;
        let src = group_for_table(group, &t)?;
        let mut prov = provenance(&src.label, common, t.n_max());
        prov["counts"] = json!(path.display().to_string());
        return Ok((t, src, prov));
    }
    let src = require_group(group)?;
    let g = src.group.as_ref().expect("a loaded group");
    let t = count_table(g, n_max, common.ball_budget).map_err(|e| Failure::Config(e.to_string()))?;
    let prov = provenance(&src.label, common, n_max);
    Ok((t, src, prov))
}

fn cmd_verify(a: VerifyArgs) -> Outcome {
    let checks = Check::parse(&a.which).ok_or_else(|| Failure::Config(format!("unknown check {:?}", a.which)))?;
    let (t, src, mut prov) = table_and_group(&a.group, &a.common, &a.counts, DEFAULT_VERIFY_NMAX)?;
    let order = a.order.unwrap_or(t.n_max());
    prov["order"] = json!(order);
    if order > t.n_max() {
        return Err(Failure::Config(format!("--order {order} exceeds the table length {}", t.n_max())));
    }
    let report = verify(&t, src.group.as_ref(), &checks, order, a.common.ball_budget)?;
    let text = match a.common.format {
        Format::Text => format!("{}{report}", provenance_comment(&prov)),
        Format::Json => {
            let v = json!({ "provenance": prov, "passed": report.passed(), "report": report });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json values serialize"))
        }
        Format::Csv => {
            let mut s = provenance_comment(&prov);
            s.push_str("# cogrowth-verify-csv v1\ncheck,status,order,index,detail\n");
            for o in &report.outcomes {
                let cell = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
                let status = serde_json::to_value(o.status).expect("status serializes");
                s.push_str(&format!(
                    "{},{},{},{},\"{}\"\n",
                    o.check,
                    status.as_str().unwrap_or_default(),
                    cell(o.order),
                    cell(o.index),
                    o.detail.replace('"', "\"\"")
                ));
            }
            s
        }
    };
    emit(&a.common.out, &text)?;
    match report.first_failure() {
        None => Ok(()),
        Some(f) => {
            let at = match (f.order, f.index) {
                (Some(o), Some(i)) => format!(" at order {o} (index {i})"),
                (None, Some(i)) => format!(" at index {i}"),
                _ => String::new(),
            };
            Err(Failure::Verification(format!("[{}] {}{at}", f.check, f.label)))
        }
    }
}

fn cmd_asymptotics(a: AsymptoticsArgs) -> Outcome {
    let (t, src, mut prov) = table_and_group(&a.group, &a.common, &a.counts, DEFAULT_ASYMPTOTICS_NMAX)?;
    prov["tolerance"] = json!(a.tolerance);
    prov["window"] = json!(a.window);
    let spectral = match src.group.as_ref().filter(|g| g.is_finite()) {
        Some(g) => Some(SpectralData::finite(g, &t, a.common.ball_budget).map_err(Error::from)?),
        None => None,
    };
    let report = asymptotics_report(&t, spectral.as_ref(), Thresholds::default(), a.window, a.tolerance)?;
    let csv = || -> Result<String, Failure> {
        let mut buf = provenance_comment(&prov).into_bytes();
        report.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    };
    let text = match a.common.format {
        Format::Text => format!("{}{report}", provenance_comment(&prov)),
        Format::Json => {
            let v = json!({ "provenance": prov, "report": report });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json values serialize"))
        }
        Format::Csv => csv()?,
    };
    emit(&a.common.out, &text)?;
    if let Some(path) = &a.csv {
        fs::write(path, csv()?).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn cmd_presets() -> Outcome {
    let mut s = String::new();
    for (name, _) in PRESETS {
        let g = preset_spec(name).and_then(|s| s.build()).map_err(|e| Failure::Config(e.to_string()))?;
        let kind = if g.is_finite() { "finite" } else { "infinite" };
        s.push_str(&format!("{name:<10} rank {} q = {} {kind} ({})\n", g.rank(), g.q(), g.backend().kind()));
    }
    emit(&None, &s)
}
