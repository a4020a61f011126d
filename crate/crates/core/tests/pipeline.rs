use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use forge_core::dedup::dedup;
use forge_core::egraph::RunBudget;
use forge_core::expr::{parse, parse_benchmarks, Expr, Op};
use forge_core::pipeline::{histogram_rows, run_pipeline, write_outputs, Config, RuleSet, Status};
use forge_core::rules::default_rules;
use forge_core::synth::synthesize;

fn small_config() -> Config {
    Config { iters: 6, timeout: Duration::from_secs(60), ..Config::default() }
}

fn rules() -> RuleSet {
    RuleSet::prepare(default_rules(), 500)
}

#[test]
fn empty_benchmark_file_gives_empty_report() {
    let result = run_pipeline(&[], &rules(), &Config::default());
    assert_eq!(result.report.totals.benchmarks, 0);
    assert_eq!(result.report.totals.candidates, 0);
    assert_eq!(result.exit_code(), 0);
    assert!(histogram_rows(&result.report).iter().all(|r| r.useful == 0 && r.definitional == 0));
}

#[test]
fn stage_counts_shrink_and_histogram_cross_foots() {
    let benches = parse_benchmarks("(cos x)\n(+ 1 (cos x))\n(- 1 (sin x))\n").unwrap();
    let result = run_pipeline(&benches, &rules(), &small_config());
    let report = &result.report;
    for b in &report.benchmarks {
        assert_eq!(b.status, Status::Ok, "{}", b.input);
        assert!(b.counts.is_monotone(), "{}: {:?}", b.input, b.counts);
        assert_eq!(b.counts.after_cover, b.counts.final_core + b.counts.definitional_removed);
        assert_eq!(b.core.len(), b.counts.final_core);
        assert_eq!(b.composite.len(), b.counts.after_dedup - b.counts.after_cover);
    }
    let rows = histogram_rows(report);
    assert_eq!(rows.iter().map(|r| r.useful).sum::<usize>(), report.benchmarks.len());
    assert_eq!(rows.iter().map(|r| r.definitional).sum::<usize>(), report.benchmarks.len());
    assert_eq!(rows.iter().map(|r| r.bucket * r.useful).sum::<usize>(), report.totals.useful);
    assert_eq!(rows.iter().map(|r| r.bucket * r.definitional).sum::<usize>(), report.totals.definitional);
}

#[test]
fn outputs_are_written() {
    let benches = parse_benchmarks("(cos x)\n").unwrap();
    let config = Config { emit_lp: true, dump_egraphs: true, ..small_config() };
    let result = run_pipeline(&benches, &rules(), &config);
    let dir = tempfile::tempdir().unwrap();
    write_outputs(dir.path(), &result).unwrap();
    for name in ["report.json", "summary.txt", "histogram.csv", "bench_000.lp", "bench_000_synth.dot"] {
        assert!(dir.path().join(name).is_file(), "missing {name}");
    }
    let csv = std::fs::read_to_string(dir.path().join("histogram.csv")).unwrap();
    assert!(csv.starts_with("bucket,useful,definitional\n"));
}

/// f64 evaluation with `thefunc` bound to an arbitrary function.
fn eval(e: &Expr, x: f64, g: &dyn Fn(f64) -> f64) -> f64 {
    match e {
        Expr::Const(c) => c.to_f64(),
        Expr::X => x,
        Expr::Hole => f64::NAN,
        Expr::App(op, args) => {
            let a = eval(&args[0], x, g);
            let b = args.get(1).map(|b| eval(b, x, g)).unwrap_or(f64::NAN);
            match op {
                Op::Add => a + b,
                Op::Sub => a - b,
                Op::Mul => a * b,
                Op::Div => a / b,
                Op::Neg => -a,
                Op::Fabs => a.abs(),
                Op::Sqrt => a.sqrt(),
                Op::Cbrt => a.cbrt(),
                Op::Pow => a.powf(b),
                Op::Floor => a.floor(),
                Op::Sin => a.sin(),
                Op::Cos => a.cos(),
                Op::Tan => a.tan(),
                Op::Asin => a.asin(),
                Op::Acos => a.acos(),
                Op::Atan => a.atan(),
                Op::Sinh => a.sinh(),
                Op::Cosh => a.cosh(),
                Op::Tanh => a.tanh(),
                Op::Acosh => a.acosh(),
                Op::Exp => a.exp(),
                Op::Log => a.ln(),
                Op::Expm1 => a.exp_m1(),
                Op::Log1p => a.ln_1p(),
                Op::Atan2 => a.atan2(b),
                Op::Thefunc => g(a),
            }
        }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-6 * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn dedup_groups_agree_under_random_interpretations() {
    let rules = rules();
    let f = parse("(sin x)").unwrap();
    let budget = RunBudget { max_iters: 6, ..RunBudget::default() };
    let (synthesis, _) = synthesize(&f, &rules.rewrites, &budget, 200).unwrap();
    let (grouping, _) = dedup(&synthesis.candidates, &rules.rewrites, &budget).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let (a, b, c, d): (f64, f64, f64, f64) = rng.gen();
        let g = move |t: f64| a * (b * t + c).sin() + d * t * t + 0.3 * t;
        let xs: Vec<f64> = (0..8).map(|_| rng.gen_range(-4.0..4.0)).collect();
        for group in &grouping.groups {
            let rep = &group.representative.rhs;
            for m in &group.members {
                let member = &synthesis.candidates[*m].rhs;
                for &x in &xs {
                    let (u, v) = (eval(rep, x, &g), eval(member, x, &g));
                    if u.is_finite() && v.is_finite() {
                        assert!(close(u, v), "{rep} vs {member} at x = {x}: {u} != {v}");
                    }
                }
            }
        }
    }
}
