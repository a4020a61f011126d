use serde::Serialize;

use super::{Config, RuleSet};
use crate::egraph::{EGraphError, StopReason};
use crate::expr::{Benchmark, Expr};
use crate::identity::Identity;
use crate::verify::verify_identity;

/// Machine-readable pipeline result. Contains no timings, so identical
/// inputs give byte-identical JSON.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub rules: RulesInfo,
    pub totals: Totals,
    pub benchmarks: Vec<BenchmarkReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RulesInfo {
    pub rules: usize,
    pub directed: usize,
    /// Names of rules the validator rejected.
    pub flagged: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Totals {
    pub benchmarks: usize,
    pub candidates: usize,
    pub duplicates_removed: usize,
    /// Fraction of candidates removed as duplicates.
    pub dedup_fraction: f64,
    pub after_dedup: usize,
    pub after_cover: usize,
    pub definitional: usize,
    pub useful: usize,
    pub trivial_present: usize,
    pub verification_failures: usize,
    pub sentinel_trips: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Status {
    Ok,
    Sentinel { message: String },
    NodeBudget { message: String },
}

impl Status {
    pub(super) fn from_error(err: &EGraphError) -> Self {
        match err {
            EGraphError::Sentinel(_) => Status::Sentinel { message: err.to_string() },
            EGraphError::NodeLimit { .. } => Status::NodeBudget { message: err.to_string() },
        }
    }
}

/// Sizes after each stage; non-increasing from `raw_extractions` to
/// `final_core`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StageCounts {
    pub raw_extractions: usize,
    pub thefunc_free_discarded: usize,
    pub candidates: usize,
    pub duplicates_removed: usize,
    /// Distinct non-trivial identities.
    pub after_dedup: usize,
    pub trivial_present: bool,
    pub after_cover: usize,
    pub definitional_removed: usize,
    pub final_core: usize,
}

impl StageCounts {
    pub fn is_monotone(&self) -> bool {
        self.raw_extractions >= self.candidates
            && self.candidates >= self.after_dedup
            && self.after_dedup >= self.after_cover
            && self.after_cover >= self.final_core
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BudgetFlags {
    pub cap_hit: bool,
    pub synthesis: StopReason,
    pub dedup: StopReason,
    pub cover: StopReason,
    /// Identities kept only because the definitional checks ran out of
    /// budget.
    pub definitional_budget_hits: usize,
}

impl Default for BudgetFlags {
    fn default() -> Self {
        BudgetFlags {
            cap_hit: false,
            synthesis: StopReason::Saturated,
            dedup: StopReason::Saturated,
            cover: StopReason::Saturated,
            definitional_budget_hits: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DefinitionalBy {
    Direct,
    Equation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationEntry {
    pub passed: bool,
    pub compared: usize,
    pub witness: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityEntry {
    pub rhs: String,
    /// Reconstruction `s(y)`, when the identity has the form `s(f(t(x)))`.
    pub s: Option<String>,
    /// Reduction `t(x)`.
    pub t: Option<String>,
    pub cost: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub definitional_by: Option<DefinitionalBy>,
    pub verification: VerificationEntry,
}

impl IdentityEntry {
    pub(super) fn verified(identity: &Identity, f: &Expr, by: Option<DefinitionalBy>, config: &Config) -> Self {
        let v = verify_identity(f, &identity.rhs, config.verify_points, config.tolerance);
        IdentityEntry {
            rhs: identity.rhs.to_string(),
            s: identity.decomposition.as_ref().map(|d| d.s.to_string()),
            t: identity.decomposition.as_ref().map(|d| d.t.to_string()),
            cost: identity.cost,
            definitional_by: by,
            verification: VerificationEntry { passed: v.passed, compared: v.compared, witness: v.witness },
        }
    }
}

/// An identity obtained by composing two others.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositeEntry {
    pub rhs: String,
    pub outer: String,
    pub inner: String,
    pub age: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchmarkReport {
    pub index: usize,
    pub line: usize,
    pub input: String,
    pub status: Status,
    pub counts: StageCounts,
    pub core: Vec<IdentityEntry>,
    pub definitional: Vec<IdentityEntry>,
    pub composite: Vec<CompositeEntry>,
    pub facts: usize,
    pub trivial_collapses: usize,
    pub flags: BudgetFlags,
    pub verification_failures: usize,
}

impl BenchmarkReport {
    pub(super) fn empty(index: usize, bench: &Benchmark) -> Self {
        BenchmarkReport {
            index,
            line: bench.line,
            input: bench.expr.to_string(),
            status: Status::Ok,
            counts: StageCounts::default(),
            core: Vec::new(),
            definitional: Vec::new(),
            composite: Vec::new(),
            facts: 0,
            trivial_collapses: 0,
            flags: BudgetFlags::default(),
            verification_failures: 0,
        }
    }
}

impl Report {
    pub(super) fn new(benchmarks: Vec<BenchmarkReport>, rules: &RuleSet) -> Self {
        let mut t = Totals { benchmarks: benchmarks.len(), ..Totals::default() };
        for b in &benchmarks {
            t.candidates += b.counts.candidates;
            t.duplicates_removed += b.counts.duplicates_removed;
            t.after_dedup += b.counts.after_dedup;
            t.after_cover += b.counts.after_cover;
            t.definitional += b.counts.definitional_removed;
            t.useful += b.counts.final_core;
            t.trivial_present += usize::from(b.counts.trivial_present);
            t.verification_failures += b.verification_failures;
            t.sentinel_trips += usize::from(matches!(b.status, Status::Sentinel { .. }));
        }
        if t.candidates > 0 {
            t.dedup_fraction = t.duplicates_removed as f64 / t.candidates as f64;
        }
        let info = RulesInfo {
            rules: rules.rules.len(),
            directed: rules.rewrites.len(),
            flagged: rules.flagged().map(|r| r.name.clone()).collect(),
        };
        Report { rules: info, totals: t, benchmarks }
    }
}
