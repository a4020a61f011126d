//! Composition facts between identities and minimum core selection.

mod lp;
mod solve;

use serde::Serialize;

use crate::egraph::{EGraph, EGraphError, Id, Rewrite, RunBudget, RunReport};
use crate::expr::Expr;
use crate::identity::{compose, Identity};

pub use lp::emit_lp;
pub use solve::{brute_force_core, closure, minimize_core, CoreSolution, Derivation};

/// `I_i ∘ I_j ≡ I_k` for every interpretation of `thefunc` (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CoverageFact {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl CoverageFact {
    pub fn new(i: usize, j: usize, k: usize) -> Self {
        CoverageFact { i, j, k }
    }
}

#[derive(Clone, Debug)]
pub struct Facts {
    /// Sorted and deduplicated.
    pub facts: Vec<CoverageFact>,
    /// Pairs whose composition is provably `thefunc(x)`.
    pub trivial_collapses: Vec<(usize, usize)>,
    pub run: RunReport,
}

/// Saturates all identities together with their pairwise compositions,
/// `thefunc` uninterpreted, and reads off which compositions coincide with
/// which identities.
pub fn discover_facts(
    identities: &[Identity],
    rules: &[Rewrite],
    budget: &RunBudget,
) -> Result<(Facts, EGraph), EGraphError> {
    let n = identities.len();
    let mut g = EGraph::new();
    let trivial = g.add(&Expr::thefunc(Expr::X))?;
    let ids = identities.iter().map(|i| g.add(&i.rhs)).collect::<Result<Vec<Id>, _>>()?;
    let mut composed = Vec::with_capacity(n * n);
    for outer in identities {
        for inner in identities {
            composed.push(g.add(&compose(&outer.rhs, &inner.rhs))?);
        }
    }
    let run = g.run(rules, budget)?;
    let trivial = g.find(trivial);
    let mut facts = Vec::new();
    let mut trivial_collapses = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let class = g.find(composed[i * n + j]);
            if class == trivial {
                trivial_collapses.push((i, j));
            }
            for (k, id) in ids.iter().enumerate() {
                if g.find(*id) == class {
                    facts.push(CoverageFact::new(i, j, k));
                }
            }
        }
    }
    facts.sort();
    facts.dedup();
    Ok((Facts { facts, trivial_collapses, run }, g))
}
