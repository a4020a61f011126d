use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use forge_core::expr::parse_benchmarks;
use forge_core::pipeline::{run_pipeline, write_outputs, Config, RuleSet};
use forge_core::rules::load_rules;

#[derive(Parser)]
#[command(name = "forge", version, about = "Synthesize range-reduction identities by equality saturation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline over a benchmark file.
    Run(RunArgs),
}

#[derive(Args, Debug, Default)]
struct RunArgs {
    /// TOML config file whose keys mirror these flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Benchmark file, one s-expression in x per line.
    #[arg(long)]
    benchmarks: Option<PathBuf>,
    /// Rule file.
    #[arg(long)]
    rules: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Saturation iterations per phase.
    #[arg(long)]
    iters: Option<usize>,
    /// E-node limit per phase.
    #[arg(long)]
    max_nodes: Option<usize>,
    /// Wall-clock limit per phase, in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// Maximum candidates kept per benchmark.
    #[arg(long)]
    cap: Option<usize>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Write the core-selection integer program per benchmark.
    #[arg(long)]
    emit_lp: bool,
    /// Write DOT dumps of the e-graphs and candidate listings.
    #[arg(long)]
    dump_egraphs: bool,
    /// Filter definitional identities before core selection.
    #[arg(long)]
    defs_before_cover: bool,
}

#[derive(Deserialize, Debug, Default, PartialEq)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    benchmarks: Option<PathBuf>,
    rules: Option<PathBuf>,
    out: Option<PathBuf>,
    iters: Option<usize>,
    max_nodes: Option<usize>,
    timeout: Option<f64>,
    cap: Option<usize>,
    jobs: Option<usize>,
    emit_lp: Option<bool>,
    dump_egraphs: Option<bool>,
    defs_before_cover: Option<bool>,
}

impl FileConfig {
    fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

struct Resolved {
    benchmarks: PathBuf,
    rules: PathBuf,
    out: PathBuf,
    config: Config,
}

/// Command-line values take precedence over the config file.
fn resolve(args: RunArgs, file: FileConfig) -> Result<Resolved> {
    let defaults = Config::default();
    let Some(benchmarks) = args.benchmarks.or(file.benchmarks) else { bail!("no benchmark file given (--benchmarks)") };
    let Some(rules) = args.rules.or(file.rules) else { bail!("no rule file given (--rules)") };
    let timeout = args.timeout.or(file.timeout).map_or(Ok(defaults.timeout), |secs| {
        if secs.is_finite() && secs > 0.0 {
            Ok(Duration::from_secs_f64(secs))
        } else {
            Err(anyhow::anyhow!("timeout must be positive, got {secs}"))
        }
    })?;
    let config = Config {
        iters: args.iters.or(file.iters).unwrap_or(defaults.iters),
        max_nodes: args.max_nodes.or(file.max_nodes).unwrap_or(defaults.max_nodes),
        timeout,
        cap: args.cap.or(file.cap).unwrap_or(defaults.cap),
        jobs: args.jobs.or(file.jobs).unwrap_or(defaults.jobs),
        emit_lp: args.emit_lp || file.emit_lp.unwrap_or(false),
        dump_egraphs: args.dump_egraphs || file.dump_egraphs.unwrap_or(false),
        defs_before_cover: args.defs_before_cover || file.defs_before_cover.unwrap_or(false),
        ..defaults
    };
    if config.iters == 0 || config.max_nodes == 0 || config.cap == 0 {
        bail!("iters, max-nodes and cap must be positive");
    }
    let out = args.out.or(file.out).unwrap_or_else(|| PathBuf::from("forge-out"));
    Ok(Resolved { benchmarks, rules, out, config })
}

fn run(args: RunArgs) -> Result<i32> {
    let file = match &args.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let r = resolve(args, file)?;
    let text = std::fs::read_to_string(&r.benchmarks).with_context(|| format!("reading {}", r.benchmarks.display()))?;
    let benchmarks =
        parse_benchmarks(&text).map_err(|(line, err)| anyhow::anyhow!("{}:{line}: {err}", r.benchmarks.display()))?;
    let rules = load_rules(&r.rules).with_context(|| format!("loading {}", r.rules.display()))?;
    let rules = RuleSet::prepare(rules, r.config.validation_samples);
    for rule in rules.flagged() {
        eprintln!("warning: rule {} rejected as unsound: {:?}", rule.name, rule.status);
    }
    let result = run_pipeline(&benchmarks, &rules, &r.config);
    write_outputs(&r.out, &result).with_context(|| format!("writing to {}", r.out.display()))?;
    let t = &result.report.totals;
    println!(
        "{} benchmarks: {} candidates, {:.1}% removed as duplicates, {} core ({} useful, {} definitional)",
        t.benchmarks,
        t.candidates,
        100.0 * t.dedup_fraction,
        t.after_cover,
        t.useful,
        t.definitional
    );
    if t.sentinel_trips > 0 {
        eprintln!("error: {} benchmark(s) merged distinct constants; the rule set is unsound", t.sentinel_trips);
    }
    if t.verification_failures > 0 {
        eprintln!("error: {} identities failed numeric verification", t.verification_failures);
    }
    println!("reports written to {}", r.out.display());
    Ok(result.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => run(args),
    };
    match outcome {
        Ok(0) => ExitCode::SUCCESS,
        Ok(_) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
