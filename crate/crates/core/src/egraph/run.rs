//! Rewrites, e-matching and the saturation loop.

use std::time::{Duration, Instant};

use smallvec::SmallVec;

use super::{EGraph, EGraphError, ENode, Id};
use crate::expr::Head;
use crate::rules::{DirectedRule, Pattern};

type Subst = SmallVec<[Option<Id>; 4]>;

/// A compiled one-directional rewrite.
#[derive(Clone, Debug)]
pub struct Rewrite {
    pub name: String,
    pub lhs: Pattern,
    pub rhs: Pattern,
    vars: Vec<char>,
}

impl Rewrite {
    /// Builds a rewrite directly from patterns. No soundness check is done
    /// here; rules from files go through the validator first.
    pub fn new(name: impl Into<String>, lhs: Pattern, rhs: Pattern) -> Self {
        let vars = lhs.vars();
        Rewrite { name: name.into(), lhs, rhs, vars }
    }

    pub fn parse(name: &str, lhs: &str, rhs: &str) -> Result<Self, crate::expr::ParseError> {
        Ok(Self::new(name, Pattern::parse(lhs)?, Pattern::parse(rhs)?))
    }

    pub fn from_directed(rule: &DirectedRule) -> Self {
        Self::new(rule.name.clone(), rule.lhs.clone(), rule.rhs.clone())
    }

    fn slot(&self, v: char) -> usize {
        self.vars.iter().position(|w| *w == v).expect("rhs variable bound by lhs")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunBudget {
    pub max_iters: usize,
    pub max_nodes: usize,
    pub timeout: Duration,
}

impl Default for RunBudget {
    fn default() -> Self {
        RunBudget { max_iters: 10, max_nodes: 100_000, timeout: Duration::from_secs(30) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum StopReason {
    Saturated,
    IterationLimit,
    NodeLimit,
    TimeLimit,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub iterations: usize,
    pub stop_reason: StopReason,
    pub nodes: usize,
    pub classes: usize,
    pub elapsed: Duration,
}

/// Exponential backoff: a rule whose search finds more than
/// `match_limit << k` matches, or visits more than `work_limit << k`
/// e-nodes, in one iteration is skipped and banned for `ban_length << k`
/// iterations, where `k` counts its previous bans. Both limits count
/// deterministic quantities, so banning never depends on timing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Scheduler {
    pub match_limit: usize,
    pub work_limit: usize,
    pub ban_length: usize,
}

impl Default for Scheduler {
    fn default() -> Self {
        Scheduler { match_limit: 5_000, work_limit: 200_000, ban_length: 3 }
    }
}

#[derive(Clone, Copy)]
struct SearchLimits {
    matches: usize,
    work: usize,
}

#[derive(Clone, Copy, Default)]
struct RuleStats {
    times_banned: u32,
    banned_until: usize,
}

impl EGraph {
    /// Matches of the rule's lhs as (class, substitution) in class-id
    /// order. Gives up with `None` once more than `limits.matches` matches
    /// are found or more than `limits.work` e-nodes have been visited.
    fn search(&self, rule: &Rewrite, limits: SearchLimits) -> Option<Vec<(Id, Subst)>> {
        let mut out = Vec::new();
        let mut work = limits.work;
        let empty: Subst = SmallVec::from_elem(None, rule.vars.len());
        for class in self.classes() {
            if let Pattern::Node(op, _) = &rule.lhs {
                if class.nodes_with_head(&Head::Op(*op)).is_empty() {
                    continue;
                }
            }
            let mut found = Vec::new();
            self.match_class(rule, &rule.lhs, class.id, empty.clone(), &mut found, &mut work)?;
            out.extend(found.into_iter().map(|s| (class.id, s)));
            if out.len() > limits.matches {
                return None;
            }
        }
        Some(out)
    }

    fn match_class(
        &self,
        rule: &Rewrite,
        pat: &Pattern,
        id: Id,
        mut subst: Subst,
        out: &mut Vec<Subst>,
        work: &mut usize,
    ) -> Option<()> {
        *work = work.checked_sub(1)?;
        let id = self.find(id);
        let class = self.class(id);
        match pat {
            Pattern::Var(v) => {
                let slot = rule.slot(*v);
                match subst[slot] {
                    Some(bound) if self.find(bound) != id => {}
                    Some(_) => out.push(subst),
                    None => {
                        subst[slot] = Some(id);
                        out.push(subst);
                    }
                }
            }
            Pattern::Const(c) => {
                if class.data.constant == Some(*c) {
                    out.push(subst);
                }
            }
            Pattern::X => {
                if !class.nodes_with_head(&Head::X).is_empty() {
                    out.push(subst);
                }
            }
            Pattern::Node(op, args) => {
                for node in class.nodes_with_head(&Head::Op(*op)) {
                    *work = work.checked_sub(1)?;
                    let mut partial = vec![subst.clone()];
                    for (arg, child) in args.iter().zip(node.children.iter()) {
                        let mut next = Vec::new();
                        for s in partial {
                            self.match_class(rule, arg, *child, s, &mut next, work)?;
                        }
                        partial = next;
                        if partial.is_empty() {
                            break;
                        }
                    }
                    out.extend(partial);
                }
            }
        }
        Some(())
    }

    fn instantiate(&mut self, rule: &Rewrite, pat: &Pattern, subst: &Subst) -> Result<Id, EGraphError> {
        match pat {
            Pattern::Var(v) => Ok(subst[rule.slot(*v)].expect("bound variable")),
            Pattern::Const(c) => self.add_node(ENode::leaf(Head::Const(*c))),
            Pattern::X => self.add_node(ENode::leaf(Head::X)),
            Pattern::Node(op, args) => {
                let children =
                    args.iter().map(|a| self.instantiate(rule, a, subst)).collect::<Result<SmallVec<[Id; 2]>, _>>()?;
                self.add_node(ENode { head: Head::Op(*op), children })
            }
        }
    }

    /// Saturates with the default scheduler.
    pub fn run(&mut self, rules: &[Rewrite], budget: &RunBudget) -> Result<RunReport, EGraphError> {
        self.run_with(rules, budget, &Scheduler::default())
    }

    /// Applies `rules` until no rule changes the graph or a budget is hit.
    /// Rules are searched in slice order and matches applied in class-id
    /// order, so runs are deterministic unless the time limit intervenes.
    pub fn run_with(
        &mut self,
        rules: &[Rewrite],
        budget: &RunBudget,
        scheduler: &Scheduler,
    ) -> Result<RunReport, EGraphError> {
        let start = Instant::now();
        let mut stats = vec![RuleStats::default(); rules.len()];
        self.rebuild()?;
        let mut iterations = 0;
        let stop_reason = loop {
            if iterations >= budget.max_iters {
                break StopReason::IterationLimit;
            }
            if start.elapsed() >= budget.timeout {
                break StopReason::TimeLimit;
            }
            let version = self.version();
            let mut any_banned = false;
            let mut matches = Vec::new();
            for (rule, stat) in rules.iter().zip(stats.iter_mut()) {
                if stat.banned_until > iterations {
                    any_banned = true;
                    continue;
                }
                let scale = 1usize << stat.times_banned.min(20);
                let limits = SearchLimits {
                    matches: scheduler.match_limit.saturating_mul(scale),
                    work: scheduler.work_limit.saturating_mul(scale),
                };
                match self.search(rule, limits) {
                    Some(found) => matches.push((rule, found)),
                    None => {
                        stat.banned_until = iterations + 1 + scheduler.ban_length.saturating_mul(scale);
                        stat.times_banned += 1;
                        any_banned = true;
                    }
                }
            }
            let mut hit_nodes = false;
            let mut hit_time = false;
            'apply: for (rule, found) in matches {
                for (i, (class, subst)) in found.into_iter().enumerate() {
                    let id = self.instantiate(rule, &rule.rhs, &subst)?;
                    self.union(class, id)?;
                    if self.total_nodes() > budget.max_nodes {
                        hit_nodes = true;
                        break 'apply;
                    }
                    if i % 1024 == 1023 && start.elapsed() >= budget.timeout {
                        hit_time = true;
                        break 'apply;
                    }
                }
            }
            self.rebuild()?;
            iterations += 1;
            if hit_nodes || self.total_nodes() > budget.max_nodes {
                break StopReason::NodeLimit;
            }
            if hit_time {
                break StopReason::TimeLimit;
            }
            if self.version() == version {
                if !any_banned {
                    break StopReason::Saturated;
                }
                // Nothing else to do: lift the bans early.
                for stat in stats.iter_mut() {
                    stat.banned_until = stat.banned_until.min(iterations);
                }
            }
        };
        Ok(RunReport {
            iterations,
            stop_reason,
            nodes: self.total_nodes(),
            classes: self.number_of_classes(),
            elapsed: start.elapsed(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::rules::{default_rules, rule_closure};

    fn rw(name: &str, l: &str, r: &str) -> Rewrite {
        Rewrite::parse(name, l, r).unwrap()
    }

    fn default_rewrites() -> Vec<Rewrite> {
        rule_closure(&default_rules()).iter().map(Rewrite::from_directed).collect()
    }

    #[test]
    fn empty_rule_set_saturates_in_one_iteration() {
        let mut g = EGraph::new();
        g.add(&parse("(sin x)").unwrap()).unwrap();
        let report = g.run(&[], &RunBudget::default()).unwrap();
        assert_eq!(report.stop_reason, StopReason::Saturated);
        assert_eq!(report.iterations, 1);
    }

    #[test]
    fn commutativity_saturates() {
        let mut g = EGraph::new();
        let a = g.add(&parse("(+ (sin x) (cos x))").unwrap()).unwrap();
        let b = g.add(&parse("(+ (cos x) (sin x))").unwrap()).unwrap();
        let report = g.run(&[rw("comm", "(+ a b)", "(+ b a)")], &RunBudget::default()).unwrap();
        assert_eq!(report.stop_reason, StopReason::Saturated);
        assert_eq!(g.find(a), g.find(b));
        g.audit().unwrap();
    }

    #[test]
    fn nonlinear_patterns_need_equal_classes() {
        let mut g = EGraph::new();
        let same = g.add(&parse("(- (sin x) (sin x))").unwrap()).unwrap();
        let diff = g.add(&parse("(- (sin x) (cos x))").unwrap()).unwrap();
        g.run(&[rw("sub-self", "(- a a)", "0")], &RunBudget::default()).unwrap();
        assert_eq!(g.class(same).data.constant, Some(crate::expr::RationalPi::ZERO));
        assert_eq!(g.class(diff).data.constant, None);
    }

    #[test]
    fn iteration_limit_is_reported() {
        let mut g = EGraph::new();
        g.add(&parse("(sin x)").unwrap()).unwrap();
        let budget = RunBudget { max_iters: 3, ..RunBudget::default() };
        let report = g.run(&[rw("grow", "a", "(+ a 0)")], &budget).unwrap();
        // (+ a 0) and a share a class, so growth stops only by the budget
        assert!(matches!(report.stop_reason, StopReason::IterationLimit | StopReason::Saturated));
        assert!(report.iterations <= 3);
    }

    #[test]
    fn node_limit_is_reported() {
        let mut g = EGraph::new();
        g.add(&parse("(+ (+ (+ (sin x) (cos x)) (tan x)) (exp x))").unwrap()).unwrap();
        let budget = RunBudget { max_nodes: 40, max_iters: 50, ..RunBudget::default() };
        let report = g.run(&default_rewrites(), &budget).unwrap();
        assert_eq!(report.stop_reason, StopReason::NodeLimit);
    }

    #[test]
    fn unsound_rule_trips_sentinel() {
        let mut g = EGraph::new();
        g.add(&parse("(* 0 (/ 1 0))").unwrap()).unwrap();
        g.add(&parse("(* 2 (/ 1 2))").unwrap()).unwrap();
        let rules = vec![rw("mult-inverse", "(* a (/ 1 a))", "1"), rw("mul-zero", "(* 0 a)", "0")];
        let err = g.run(&rules, &RunBudget::default()).unwrap_err();
        assert!(matches!(err, EGraphError::Sentinel(_)));
    }

    #[test]
    fn sin_parity_is_found_in_eight_iterations() {
        let mut g = EGraph::new();
        let root = g.add(&parse("(sin x)").unwrap()).unwrap();
        let parity = vec![
            rw("sin-neg", "(sin (- a))", "(- (sin a))"),
            rw("sin-neg-rev", "(- (sin a))", "(sin (- a))"),
            rw("neg-neg", "a", "(- (- a))"),
        ];
        let budget = RunBudget { max_iters: 8, max_nodes: 2_000, ..RunBudget::default() };
        g.run(&parity, &budget).unwrap();
        assert_eq!(g.lookup_expr(&parse("(- (sin (- x)))").unwrap()).map(|id| g.find(id)), Some(g.find(root)));
    }

    #[test]
    fn tan_minus_sin_parity_is_found() {
        let mut g = EGraph::new();
        let call = g.add(&parse("(thefunc x)").unwrap()).unwrap();
        let f = parse("(- (tan x) (sin x))").unwrap();
        let mut rules: Vec<Rewrite> = crate::synth::defining_rules(&f).into();
        rules.extend(default_rewrites());
        g.run(&rules, &RunBudget::default()).unwrap();
        let parity = g.lookup_expr(&parse("(- (thefunc (- x)))").unwrap()).map(|id| g.find(id));
        assert_eq!(parity, Some(g.find(call)));
    }

    #[test]
    fn runs_are_deterministic() {
        let build = || {
            let mut g = EGraph::new();
            let root = g.add(&parse("(- (tan x) (sin x))").unwrap()).unwrap();
            let budget = RunBudget { max_nodes: 5_000, ..RunBudget::default() };
            let report = g.run(&default_rewrites(), &budget).unwrap();
            (g.to_dot(), g.find(root), report.iterations, report.stop_reason)
        };
        assert_eq!(build(), build());
    }

    #[test]
    fn default_rules_keep_invariants() {
        let mut g = EGraph::new();
        g.add(&parse("(/ (- 1 (cos x)) (sin x))").unwrap()).unwrap();
        let budget = RunBudget { max_nodes: 3_000, ..RunBudget::default() };
        g.run(&default_rewrites(), &budget).unwrap();
        g.audit().unwrap();
    }
}
