use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use super::{PipelineResult, Report};

/// One histogram row: how many benchmarks have exactly `bucket` useful,
/// and exactly `bucket` definitional, identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HistogramRow {
    pub bucket: usize,
    pub useful: usize,
    pub definitional: usize,
}

pub fn histogram_rows(report: &Report) -> Vec<HistogramRow> {
    let useful: Vec<usize> = report.benchmarks.iter().map(|b| b.counts.final_core).collect();
    let defs: Vec<usize> = report.benchmarks.iter().map(|b| b.counts.definitional_removed).collect();
    let max = useful.iter().chain(&defs).copied().max().unwrap_or(0);
    (0..=max)
        .map(|bucket| HistogramRow {
            bucket,
            useful: useful.iter().filter(|u| **u == bucket).count(),
            definitional: defs.iter().filter(|d| **d == bucket).count(),
        })
        .collect()
}

fn histogram_csv(report: &Report) -> String {
    let mut out = String::from("bucket,useful,definitional\n");
    for row in histogram_rows(report) {
        let _ = writeln!(out, "{},{},{}", row.bucket, row.useful, row.definitional);
    }
    out
}

fn summary(result: &PipelineResult) -> String {
    let r = &result.report;
    let mut out = String::new();
    let _ = writeln!(out, "rules: {} ({} directed)", r.rules.rules, r.rules.directed);
    if !r.rules.flagged.is_empty() {
        let _ = writeln!(out, "rejected as unsound: {}", r.rules.flagged.join(", "));
    }
    let _ = writeln!(
        out,
        "\n{:<4} {:<44} {:>6} {:>6} {:>6} {:>5} {:>5} {:>4} {:>5}  {:>8}",
        "#", "benchmark", "raw", "cand", "dedup", "cover", "defs", "triv", "core", "time"
    );
    for (b, o) in r.benchmarks.iter().zip(&result.outcomes) {
        let c = &b.counts;
        let mut input = b.input.clone();
        if input.len() > 44 {
            input.truncate(41);
            input.push_str("...");
        }
        let _ = writeln!(
            out,
            "{:<4} {:<44} {:>6} {:>6} {:>6} {:>5} {:>5} {:>4} {:>5}  {:>7.2}s",
            b.index,
            input,
            c.raw_extractions,
            c.candidates,
            c.after_dedup,
            c.after_cover,
            c.definitional_removed,
            if c.trivial_present { "yes" } else { "no" },
            c.final_core,
            o.timings.total().as_secs_f64()
        );
    }
    let t = &r.totals;
    let _ = writeln!(
        out,
        "\ncandidates {}, removed as duplicates {} ({:.1}%), distinct {}, core {}, definitional {}, useful {}",
        t.candidates,
        t.duplicates_removed,
        100.0 * t.dedup_fraction,
        t.after_dedup,
        t.after_cover,
        t.definitional,
        t.useful
    );
    let _ = writeln!(out, "verification failures {}, sentinel trips {}", t.verification_failures, t.sentinel_trips);
    for (b, o) in r.benchmarks.iter().zip(&result.outcomes) {
        let _ = writeln!(out, "\n[{}] f(x) = {}", b.index, b.input);
        if let super::Status::Sentinel { message } | super::Status::NodeBudget { message } = &b.status {
            let _ = writeln!(out, "  aborted: {message}");
        }
        let tm = &o.timings;
        let _ = writeln!(
            out,
            "  time: synthesis {:.2}s, dedup {:.2}s, cover {:.2}s, definitional {:.2}s, verification {:.2}s",
            tm.synthesis.as_secs_f64(),
            tm.dedup.as_secs_f64(),
            tm.cover.as_secs_f64(),
            tm.definitional.as_secs_f64(),
            tm.verification.as_secs_f64()
        );
        for e in &b.core {
            let form = match (&e.s, &e.t) {
                (Some(s), Some(t)) => format!("   s(y) = {s}, t(x) = {t}"),
                _ => String::new(),
            };
            let mark = if e.verification.passed { "" } else { "  VERIFICATION FAILED" };
            let _ = writeln!(out, "  core  f(x) = {}{form}{mark}", e.rhs);
        }
        for e in &b.definitional {
            let _ = writeln!(out, "  def   f(x) = {}", e.rhs);
        }
    }
    out
}

/// Writes `report.json`, `summary.txt`, `histogram.csv` and any requested
/// `.lp` and `.dot` files into `dir`.
pub fn write_outputs(dir: &Path, result: &PipelineResult) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let json = serde_json::to_string_pretty(&result.report).map_err(io::Error::other)?;
    fs::write(dir.join("report.json"), json + "\n")?;
    fs::write(dir.join("summary.txt"), summary(result))?;
    fs::write(dir.join("histogram.csv"), histogram_csv(&result.report))?;
    for o in &result.outcomes {
        let stem = format!("bench_{:03}", o.report.index);
        if let Some(lp) = &o.lp {
            fs::write(dir.join(format!("{stem}.lp")), lp)?;
        }
        for (suffix, contents) in &o.dumps {
            fs::write(dir.join(format!("{stem}_{suffix}")), contents)?;
        }
    }
    Ok(())
}
