//! Candidate generation: saturate `thefunc(x) = f(x)` and read identities
//! off the root class.

use crate::egraph::{EGraph, EGraphError, Extractor, OpCost, Rewrite, RunBudget, RunReport};
use crate::expr::{Expr, Op};
use crate::identity::Identity;
use crate::rules::Pattern;

pub const DEFAULT_CAP: usize = 512;

#[derive(Clone, Debug)]
pub struct Synthesis {
    /// Lowest cost first; always contains `thefunc(x)` unless capped away.
    pub candidates: Vec<Identity>,
    pub raw_extractions: usize,
    pub thefunc_free_discarded: usize,
    /// Candidates dropped by the cap.
    pub capped_out: usize,
    pub cap_hit: bool,
    pub run: RunReport,
}

/// `f[x := a] <=> thefunc(a)`, as two directed rewrites.
pub fn defining_rules(f: &Expr) -> [Rewrite; 2] {
    let body = Pattern::from_expr_abstracting_x(f, 'a');
    let call = Pattern::Node(Op::Thefunc, vec![Pattern::Var('a')]);
    [Rewrite::new("define", body.clone(), call.clone()), Rewrite::new("define-rev", call, body)]
}

/// Saturates with the defining equation and returns every extraction of
/// the root class that still calls `thefunc`.
pub fn synthesize(
    f: &Expr,
    rules: &[Rewrite],
    budget: &RunBudget,
    cap: usize,
) -> Result<(Synthesis, EGraph), EGraphError> {
    let mut g = EGraph::new();
    let root = g.add(&Expr::thefunc(Expr::X))?;
    let body = g.add(f)?;
    g.union(root, body)?;
    let mut all: Vec<Rewrite> = defining_rules(f).into();
    all.extend_from_slice(rules);
    let run = g.run(&all, budget)?;
    let extracted = Extractor::new(&g, OpCost::SYNTHESIS).extract_all_nodes(root);
    let raw_extractions = extracted.len();
    let mut candidates: Vec<Identity> =
        extracted.into_iter().filter(|(e, _)| e.thefunc_count() > 0).map(|(e, _)| Identity::new(e)).collect();
    let thefunc_free_discarded = raw_extractions - candidates.len();
    candidates.sort_by_cached_key(|c| (c.cost, c.rhs.to_string()));
    let capped_out = candidates.len().saturating_sub(cap);
    candidates.truncate(cap);
    let synthesis =
        Synthesis { candidates, raw_extractions, thefunc_free_discarded, capped_out, cap_hit: capped_out > 0, run };
    Ok((synthesis, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::rules::{default_rules, rule_closure};
    use crate::verify::verify_identity;

    fn run(f: &str) -> Synthesis {
        let rules: Vec<Rewrite> = rule_closure(&default_rules()).iter().map(Rewrite::from_directed).collect();
        synthesize(&parse(f).unwrap(), &rules, &RunBudget::default(), DEFAULT_CAP).unwrap().0
    }

    fn texts(s: &Synthesis) -> Vec<String> {
        s.candidates.iter().map(|c| c.rhs.to_string()).collect()
    }

    #[test]
    fn sin_parity_and_reflection() {
        let s = run("(sin x)");
        let t = texts(&s);
        assert!(t.contains(&"(- (thefunc (- x)))".to_string()), "{t:?}");
        assert!(t.contains(&"(thefunc (- PI x))".to_string()), "{t:?}");
        assert!(t.contains(&"(thefunc x)".to_string()));
    }

    #[test]
    fn tan_minus_sin_parity() {
        let t = texts(&run("(- (tan x) (sin x))"));
        assert!(t.contains(&"(- (thefunc (- x)))".to_string()), "{t:?}");
    }

    #[test]
    fn candidates_are_distinct_and_valid() {
        let f = parse("(+ 1 (cos x))").unwrap();
        let s = run("(+ 1 (cos x))");
        let t = texts(&s);
        let mut dedup = t.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), t.len());
        for c in s.candidates.iter().take(40) {
            assert!(verify_identity(&f, &c.rhs, 64, 1e-10).passed, "{}", c.rhs);
        }
        assert_eq!(s.raw_extractions, s.candidates.len() + s.thefunc_free_discarded + s.capped_out);
    }
}
