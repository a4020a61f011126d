//! End-to-end pipeline: synthesis, deduplication, core selection,
//! definitional filtering and verification, per benchmark.

mod output;
mod report;

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::cover::{discover_facts, emit_lp, minimize_core, Derivation};
use crate::dedup::dedup;
use crate::definitional::{is_definitional_direct, is_definitional_equation};
use crate::egraph::{EGraphError, Rewrite, RunBudget};
use crate::expr::{Benchmark, Expr};
use crate::identity::{Classification, Identity};
use crate::rules::{rule_closure, validate_rule, DomainTable, Rule, RuleStatus};
use crate::synth::{synthesize, DEFAULT_CAP};

pub use output::{histogram_rows, write_outputs, HistogramRow};
pub use report::{
    BenchmarkReport, BudgetFlags, CompositeEntry, DefinitionalBy, IdentityEntry, Report, RulesInfo, StageCounts,
    Status, Totals, VerificationEntry,
};

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub iters: usize,
    pub max_nodes: usize,
    /// Wall-clock limit per saturation run.
    pub timeout: Duration,
    pub cap: usize,
    /// Worker threads; 0 uses all cores.
    pub jobs: usize,
    pub emit_lp: bool,
    pub dump_egraphs: bool,
    pub defs_before_cover: bool,
    pub verify_points: usize,
    pub tolerance: f64,
    pub validation_samples: usize,
}

impl Default for Config {
    fn default() -> Self {
        let budget = RunBudget::default();
        Config {
            iters: budget.max_iters,
            max_nodes: budget.max_nodes,
            timeout: budget.timeout,
            cap: DEFAULT_CAP,
            jobs: 0,
            emit_lp: false,
            dump_egraphs: false,
            defs_before_cover: false,
            verify_points: 256,
            tolerance: 1e-10,
            validation_samples: 2_000,
        }
    }
}

impl Config {
    pub fn budget(&self) -> RunBudget {
        RunBudget { max_iters: self.iters, max_nodes: self.max_nodes, timeout: self.timeout }
    }
}

/// Rules after validation, compiled for the engine.
#[derive(Clone, Debug)]
pub struct RuleSet {
    pub rules: Vec<Rule>,
    pub rewrites: Vec<Rewrite>,
}

impl RuleSet {
    /// Validates every rule by sampling; flagged rules are kept in `rules`
    /// with their witness but never compiled.
    pub fn prepare(mut rules: Vec<Rule>, samples: usize) -> Self {
        let table = DomainTable::default();
        for rule in rules.iter_mut() {
            if let status @ RuleStatus::FlaggedUnsound(_) = validate_rule(rule, &table, samples) {
                rule.status = status;
            }
        }
        let rewrites = rule_closure(&rules).iter().map(Rewrite::from_directed).collect();
        RuleSet { rules, rewrites }
    }

    pub fn flagged(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter().filter(|r| !r.status.is_usable())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PhaseTimings {
    pub synthesis: Duration,
    pub dedup: Duration,
    pub cover: Duration,
    pub definitional: Duration,
    pub verification: Duration,
}

impl PhaseTimings {
    pub fn total(&self) -> Duration {
        self.synthesis + self.dedup + self.cover + self.definitional + self.verification
    }
}

/// Everything produced for one benchmark.
#[derive(Clone, Debug)]
pub struct BenchmarkOutcome {
    pub report: BenchmarkReport,
    pub timings: PhaseTimings,
    /// Core selection program, when requested.
    pub lp: Option<String>,
    /// (file stem suffix, contents) of requested debug dumps.
    pub dumps: Vec<(String, String)>,
}

#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub report: Report,
    pub outcomes: Vec<BenchmarkOutcome>,
}

impl PipelineResult {
    /// Nonzero when a rule set was caught being unsound or an emitted
    /// identity failed verification.
    pub fn exit_code(&self) -> i32 {
        let t = &self.report.totals;
        i32::from(t.sentinel_trips > 0 || t.verification_failures > 0)
    }
}

pub fn run_pipeline(benchmarks: &[Benchmark], rules: &RuleSet, config: &Config) -> PipelineResult {
    let work = || -> Vec<BenchmarkOutcome> {
        benchmarks.par_iter().enumerate().map(|(i, b)| run_benchmark(i, b, rules, config)).collect()
    };
    let outcomes = if config.jobs == 0 {
        work()
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(config.jobs).build() {
            Ok(pool) => pool.install(work),
            Err(_) => work(),
        }
    };
    let reports: Vec<BenchmarkReport> = outcomes.iter().map(|o| o.report.clone()).collect();
    let report = Report::new(reports, rules);
    PipelineResult { report, outcomes }
}

pub fn run_benchmark(index: usize, bench: &Benchmark, rules: &RuleSet, config: &Config) -> BenchmarkOutcome {
    let mut outcome = BenchmarkOutcome {
        report: BenchmarkReport::empty(index, bench),
        timings: PhaseTimings::default(),
        lp: None,
        dumps: Vec::new(),
    };
    if let Err(err) = stages(&bench.expr, rules, config, &mut outcome) {
        outcome.report.status = Status::from_error(&err);
    }
    outcome
}

fn stages(f: &Expr, rules: &RuleSet, config: &Config, out: &mut BenchmarkOutcome) -> Result<(), EGraphError> {
    let budget = config.budget();
    let rewrites = &rules.rewrites;
    let report = &mut out.report;

    let clock = Instant::now();
    let (synthesis, g) = synthesize(f, rewrites, &budget, config.cap)?;
    out.timings.synthesis = clock.elapsed();
    report.counts.raw_extractions = synthesis.raw_extractions;
    report.counts.thefunc_free_discarded = synthesis.thefunc_free_discarded;
    report.counts.candidates = synthesis.candidates.len();
    report.flags.cap_hit = synthesis.cap_hit;
    report.flags.synthesis = synthesis.run.stop_reason;
    if config.dump_egraphs {
        out.dumps.push(("synth.dot".into(), g.to_dot()));
        let listing: String = synthesis.candidates.iter().map(|c| format!("{}\n", c.rhs)).collect();
        out.dumps.push(("candidates.txt".into(), listing));
    }
    drop(g);

    let clock = Instant::now();
    let (grouping, g) = dedup(&synthesis.candidates, rewrites, &budget)?;
    out.timings.dedup = clock.elapsed();
    report.flags.dedup = grouping.run.stop_reason;
    report.counts.duplicates_removed = grouping.removed(synthesis.candidates.len());
    report.counts.trivial_present = grouping.groups.iter().any(|g| g.trivial);
    if config.dump_egraphs {
        out.dumps.push(("dedup.dot".into(), g.to_dot()));
    }
    drop(g);
    let mut identities: Vec<Identity> =
        grouping.groups.into_iter().filter(|g| !g.trivial).map(|g| g.representative).collect();
    identities.sort_by_cached_key(|i| (i.cost, i.rhs.to_string()));
    report.counts.after_dedup = identities.len();

    let clock = Instant::now();
    let mut definitional = Vec::new();
    if config.defs_before_cover {
        let (kept, removed) = split_definitional(identities, rewrites, &budget, &mut report.flags)?;
        identities = kept;
        definitional = removed;
    }
    out.timings.definitional = clock.elapsed();

    let clock = Instant::now();
    let (facts, g) = discover_facts(&identities, rewrites, &budget)?;
    let solution = minimize_core(identities.len(), &facts.facts);
    out.timings.cover = clock.elapsed();
    report.flags.cover = facts.run.stop_reason;
    report.facts = facts.facts.len();
    report.trivial_collapses = facts.trivial_collapses.len();
    report.counts.after_cover = solution.core.len();
    if config.emit_lp {
        out.lp = Some(emit_lp(identities.len(), &facts.facts));
    }
    if config.dump_egraphs {
        out.dumps.push(("cover.dot".into(), g.to_dot()));
    }
    drop(g);
    for (k, (derivation, age)) in solution.certificate.iter().enumerate() {
        if let Derivation::Composed { i, j } = derivation {
            identities[k].classification = Classification::Composite;
            report.composite.push(CompositeEntry {
                rhs: identities[k].rhs.to_string(),
                outer: identities[*i].rhs.to_string(),
                inner: identities[*j].rhs.to_string(),
                age: *age,
            });
        }
    }
    let mut core: Vec<Identity> = solution.core.iter().map(|k| identities[*k].clone()).collect();

    let clock = Instant::now();
    if !config.defs_before_cover {
        let (kept, removed) = split_definitional(core, rewrites, &budget, &mut report.flags)?;
        core = kept;
        definitional = removed;
    }
    out.timings.definitional += clock.elapsed();

    let clock = Instant::now();
    for identity in core.iter_mut() {
        identity.classification = Classification::Core;
        let entry = IdentityEntry::verified(identity, f, None, config);
        report.verification_failures += usize::from(!entry.verification.passed);
        report.core.push(entry);
    }
    for (identity, by) in &definitional {
        let entry = IdentityEntry::verified(identity, f, Some(*by), config);
        report.verification_failures += usize::from(!entry.verification.passed);
        report.definitional.push(entry);
    }
    out.timings.verification = clock.elapsed();
    report.counts.definitional_removed = definitional.len();
    report.counts.final_core = core.len();
    Ok(())
}

/// Separates identities that restate the definition, trying the direct
/// check first and the equation check second.
/// Identities kept, and those removed with the check that caught them.
type Split = (Vec<Identity>, Vec<(Identity, DefinitionalBy)>);

fn split_definitional(
    identities: Vec<Identity>,
    rules: &[Rewrite],
    budget: &RunBudget,
    flags: &mut BudgetFlags,
) -> Result<Split, EGraphError> {
    let mut kept = Vec::new();
    let mut removed = Vec::new();
    for mut identity in identities {
        let direct = is_definitional_direct(&identity.rhs, rules, budget)?;
        let by = if direct.definitional {
            Some(DefinitionalBy::Direct)
        } else {
            let equation = is_definitional_equation(&identity.rhs, rules, budget)?;
            flags.definitional_budget_hits += usize::from(direct.budget_hit && equation.budget_hit);
            equation.definitional.then_some(DefinitionalBy::Equation)
        };
        match by {
            Some(by) => {
                identity.classification = Classification::Definitional;
                removed.push((identity, by));
            }
            None => kept.push(identity),
        }
    }
    Ok((kept, removed))
}
