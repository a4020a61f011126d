//! Acceptance suite. Each test prints one `PASS` or `FAIL` line; run with
//! `--nocapture` to see them.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use forge_core::cover::{brute_force_core, minimize_core, CoverageFact};
use forge_core::dedup::dedup;
use forge_core::definitional::is_definitional_direct;
use forge_core::egraph::{EGraph, EGraphError, Rewrite, RunBudget};
use forge_core::expr::{parse, parse_benchmarks, Benchmark, Expr};
use forge_core::identity::Identity;
use forge_core::pipeline::{run_benchmark, run_pipeline, write_outputs, Config, PipelineResult, RuleSet, Status};
use forge_core::rules::{default_rules, validate_rule, DomainTable, Rule, RuleStatus};
use forge_core::synth::{synthesize, DEFAULT_CAP};
use forge_core::verify::PRECISION;

const CORPUS: &str = include_str!("../data/corpus.bench");

fn verdict(n: usize, what: &str, ok: bool, detail: String) {
    println!("{} criterion {n}: {what} ({detail})", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {what} ({detail})");
}

fn rule_set() -> &'static RuleSet {
    static RULES: OnceLock<RuleSet> = OnceLock::new();
    RULES.get_or_init(|| RuleSet::prepare(default_rules(), Config::default().validation_samples))
}

fn corpus() -> Vec<Benchmark> {
    parse_benchmarks(CORPUS).expect("corpus parses")
}

fn corpus_run() -> &'static (PipelineResult, Duration) {
    static RUN: OnceLock<(PipelineResult, Duration)> = OnceLock::new();
    RUN.get_or_init(|| {
        let clock = Instant::now();
        let result = run_pipeline(&corpus(), rule_set(), &Config::default());
        (result, clock.elapsed())
    })
}

fn single(body: &str) -> Benchmark {
    Benchmark { line: 1, expr: parse(body).unwrap() }
}

#[test]
fn criterion_01_sin_core_contains_reflections() {
    let clock = Instant::now();
    let outcome = run_benchmark(0, &single("(sin x)"), rule_set(), &Config::default());
    let core: Vec<Identity> = outcome.report.core.iter().map(|e| Identity::new(parse(&e.rhs).unwrap())).collect();
    let targets = ["(- (thefunc (- x)))", "(thefunc (- PI x))"];
    let mut candidates = core.clone();
    candidates.extend(targets.iter().map(|t| Identity::new(parse(t).unwrap())));
    let (grouping, _) = dedup(&candidates, &rule_set().rewrites, &RunBudget::default()).unwrap();
    let found = (0..targets.len())
        .filter(|t| {
            let index = core.len() + t;
            grouping.groups.iter().any(|g| g.members.contains(&index) && g.members.iter().any(|m| *m < core.len()))
        })
        .count();
    let elapsed = clock.elapsed();
    verdict(
        1,
        "sin core contains -T(-x) and T(PI - x) up to dedup equivalence",
        found == targets.len() && elapsed < Duration::from_secs(60),
        format!("{found}/2 found among {} core identities, {elapsed:.1?}", core.len()),
    );
}

#[test]
fn criterion_02_tan_minus_sin_parity() {
    let clock = Instant::now();
    let f = parse("(- (tan x) (sin x))").unwrap();
    let (synthesis, _) = synthesize(&f, &rule_set().rewrites, &RunBudget::default(), DEFAULT_CAP).unwrap();
    let parity = Expr::neg(Expr::thefunc(Expr::neg(Expr::X)));
    let found = synthesis.candidates.iter().any(|c| c.rhs == parity);
    let elapsed = clock.elapsed();
    verdict(
        2,
        "tan - sin candidates include (- (thefunc (- x)))",
        found && elapsed < Duration::from_secs(60),
        format!("{} candidates, {elapsed:.1?}", synthesis.candidates.len()),
    );
}

#[test]
fn criterion_03_composition_elimination() {
    // identities 1 = T(x + 2PI), 2 = T(x + 4PI); fact 1 o 1 = 2
    let solution = minimize_core(2, &[CoverageFact::new(0, 0, 1)]);
    verdict(3, "period instance reduces to {1}", solution.core == vec![0], format!("core {:?}", solution.core));
}

#[test]
fn criterion_04_cycle_resistance() {
    let solution = minimize_core(1, &[CoverageFact::new(0, 0, 0)]);
    verdict(
        4,
        "self-composing identity stays in the core",
        solution.core == vec![0],
        format!("core {:?}", solution.core),
    );
}

#[test]
fn criterion_05_solver_matches_brute_force() {
    let clock = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut mismatches = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=12);
        let count = rng.gen_range(0..=40);
        let facts: Vec<CoverageFact> = (0..count)
            .map(|_| CoverageFact::new(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect();
        if minimize_core(n, &facts).core != brute_force_core(n, &facts) {
            mismatches += 1;
        }
    }
    let elapsed = clock.elapsed();
    verdict(
        5,
        "exact solver agrees with subset enumeration on 200 instances",
        mismatches == 0 && elapsed < Duration::from_secs(120),
        format!("{mismatches} mismatches, {elapsed:.1?}"),
    );
}

#[test]
fn criterion_06_dedup_strength() {
    let (result, _) = corpus_run();
    let t = &result.report.totals;
    verdict(
        6,
        "at least 80% of corpus candidates removed as duplicates",
        t.dedup_fraction >= 0.8,
        format!("{} of {} removed, {:.1}%", t.duplicates_removed, t.candidates, 100.0 * t.dedup_fraction),
    );
}

#[test]
fn criterion_07_soundness_sentinel() {
    let (result, _) = corpus_run();
    let quiet = result.report.totals.sentinel_trips == 0
        && result.report.benchmarks.iter().all(|b| !matches!(b.status, Status::Sentinel { .. }));

    let mut g = EGraph::new();
    g.add(&parse("(* 0 (/ 1 0))").unwrap()).unwrap();
    let unsound = [
        Rewrite::parse("mult-inverse", "(* a (/ 1 a))", "1").unwrap(),
        Rewrite::parse("mul-zero", "(* 0 a)", "0").unwrap(),
    ];
    let tripped = matches!(g.run(&unsound, &RunBudget::default()), Err(EGraphError::Sentinel(_)));
    verdict(
        7,
        "corpus never trips the sentinel and the unsound injection does",
        quiet && tripped,
        format!("corpus trips {}, injection tripped {tripped}", result.report.totals.sentinel_trips),
    );
}

#[test]
fn criterion_08_rule_validator() {
    let table = DomainTable::default();
    let check = |lhs: &str, rhs: &str| {
        let rule = Rule::parse_directed("probe", lhs, rhs).unwrap();
        match validate_rule(&rule, &table, 2_000) {
            RuleStatus::FlaggedUnsound(w) => Some(w.reproduces(&rule, &table)),
            _ => None,
        }
    };
    let inverse = check("(* a (/ 1 a))", "1");
    let flip = check("(/ a b)", "(/ 1 (/ b a))");
    let split = check("(/ a (* b c))", "(/ (/ a b) c)");
    verdict(
        8,
        "validator flags a*(1/a) => 1 and a/b => 1/(b/a), passes a/(b*c) => (a/b)/c",
        inverse == Some(true) && flip == Some(true) && split.is_none(),
        format!("witness reproduces: {inverse:?}, {flip:?}; split flagged: {}", split.is_some()),
    );
}

#[test]
fn criterion_09_end_to_end_verification() {
    let config = Config::default();
    let (result, _) = corpus_run();
    let entries: Vec<_> = result.report.benchmarks.iter().flat_map(|b| &b.core).collect();
    let failed = entries.iter().filter(|e| !e.verification.passed || e.verification.compared == 0).count();
    let settings = config.verify_points == 256 && config.tolerance == 1e-10 && PRECISION >= 128;
    verdict(
        9,
        "every core identity verifies at high precision",
        settings && failed == 0 && result.report.totals.verification_failures == 0,
        format!("{failed} of {} core identities failed, {PRECISION} bits", entries.len()),
    );
}

#[test]
fn criterion_10_definitional_detection() {
    let clock = Instant::now();
    let candidate = parse("(- (- 1 (thefunc x)) (- (- (thefunc x)) (cos x)))").unwrap();
    let check = is_definitional_direct(&candidate, &rule_set().rewrites, &RunBudget::default()).unwrap();
    let elapsed = clock.elapsed();
    verdict(
        10,
        "1 + cos candidate is definitional by direct check",
        check.definitional && elapsed < Duration::from_secs(30),
        format!("{elapsed:.1?}"),
    );
}

#[test]
fn criterion_11_determinism() {
    let (first, _) = corpus_run();
    let second = run_pipeline(&corpus(), rule_set(), &Config::default());
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    write_outputs(a.path(), first).unwrap();
    write_outputs(b.path(), &second).unwrap();
    let left = std::fs::read(a.path().join("report.json")).unwrap();
    let right = std::fs::read(b.path().join("report.json")).unwrap();
    verdict(
        11,
        "two corpus runs give byte-identical report.json",
        left == right,
        format!("{} and {} bytes", left.len(), right.len()),
    );
}
