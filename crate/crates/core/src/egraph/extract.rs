//! Cost-based extraction.

use rustc_hash::FxHashMap;

use super::{EGraph, ENode, Id};
use crate::expr::{Expr, Head, Op};

pub trait CostFunction {
    fn head_cost(&self, head: &Head) -> u64;
}

/// Every operator and leaf costs 1, except `thefunc` which costs
/// `thefunc`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OpCost {
    pub thefunc: u64,
}

impl OpCost {
    /// Used during synthesis: references to `thefunc` are free.
    pub const SYNTHESIS: OpCost = OpCost { thefunc: 0 };
    pub const STANDARD: OpCost = OpCost { thefunc: 1 };
}

impl CostFunction for OpCost {
    fn head_cost(&self, head: &Head) -> u64 {
        match head {
            Head::Op(Op::Thefunc) => self.thefunc,
            _ => 1,
        }
    }
}

/// Best representative per class under a cost function.
///
/// Costs are the least fixpoint of `cost(c) = min over nodes n in c of
/// head_cost(n) + sum of children's costs`. When a `thefunc` node ties the
/// minimum it is preferred, provided its subterm does not lead back to the
/// class.
pub struct Extractor<'a, C> {
    egraph: &'a EGraph,
    cost: C,
    best: FxHashMap<Id, (u64, ENode)>,
}

impl<'a, C: CostFunction> Extractor<'a, C> {
    pub fn new(egraph: &'a EGraph, cost: C) -> Self {
        assert!(egraph.is_clean(), "extraction needs a rebuilt e-graph");
        let mut ex = Extractor { egraph, cost, best: FxHashMap::default() };
        ex.fixpoint();
        ex.prefer_thefunc_on_ties();
        ex
    }

    fn node_cost(&self, node: &ENode) -> Option<u64> {
        let mut total = self.cost.head_cost(&node.head);
        for child in &node.children {
            total = total.saturating_add(self.best.get(&self.egraph.find(*child))?.0);
        }
        Some(total)
    }

    fn fixpoint(&mut self) {
        loop {
            let mut changed = false;
            for class in self.egraph.classes() {
                let current = self.best.get(&class.id).map(|b| b.0);
                let mut candidate: Option<(u64, &ENode)> = None;
                for node in &class.nodes {
                    if let Some(c) = self.node_cost(node) {
                        if candidate.is_none_or(|(best, _)| c < best) {
                            candidate = Some((c, node));
                        }
                    }
                }
                if let Some((c, node)) = candidate {
                    if current.is_none_or(|cur| c < cur) {
                        self.best.insert(class.id, (c, node.clone()));
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    fn prefer_thefunc_on_ties(&mut self) {
        let head = Head::Op(Op::Thefunc);
        for class in self.egraph.classes() {
            let Some((cost, chosen)) = self.best.get(&class.id) else { continue };
            if chosen.head == head {
                continue;
            }
            let cost = *cost;
            let tied = class
                .nodes_with_head(&head)
                .iter()
                .find(|n| self.node_cost(n) == Some(cost) && !self.reaches(n.children[0], class.id))
                .cloned();
            if let Some(node) = tied {
                self.best.insert(class.id, (cost, node));
            }
        }
    }

    /// Whether the current best term of `from` mentions class `target`.
    fn reaches(&self, from: Id, target: Id) -> bool {
        let mut stack = vec![self.egraph.find(from)];
        let mut seen = rustc_hash::FxHashSet::default();
        while let Some(id) = stack.pop() {
            if id == target {
                return true;
            }
            if !seen.insert(id) {
                continue;
            }
            if let Some((_, node)) = self.best.get(&id) {
                stack.extend(node.children.iter().map(|c| self.egraph.find(*c)));
            }
        }
        false
    }

    pub fn best_cost(&self, id: Id) -> Option<u64> {
        self.best.get(&self.egraph.find(id)).map(|b| b.0)
    }

    /// Lowest-cost term of the class, with its cost.
    pub fn extract_best(&self, id: Id) -> Option<(Expr, u64)> {
        let (cost, _) = self.best.get(&self.egraph.find(id))?;
        Some((self.build(id), *cost))
    }

    fn build(&self, id: Id) -> Expr {
        let (_, node) = &self.best[&self.egraph.find(id)];
        Expr::from_head(node.head, node.children.iter().map(|c| self.build(*c)).collect())
    }

    /// One term per e-node of the class: the node's operator applied to the
    /// best terms of its children. Textual duplicates are removed and the
    /// result is sorted by cost, then text.
    pub fn extract_all_nodes(&self, id: Id) -> Vec<(Expr, u64)> {
        let class = self.egraph.class(id);
        let mut out: Vec<(Expr, u64, String)> = Vec::new();
        for node in &class.nodes {
            let Some(cost) = self.node_cost(node) else { continue };
            let expr = Expr::from_head(node.head, node.children.iter().map(|c| self.build(*c)).collect());
            let text = expr.to_string();
            out.push((expr, cost, text));
        }
        out.sort_by(|a, b| (a.1, &a.2).cmp(&(b.1, &b.2)));
        out.dedup_by(|a, b| a.2 == b.2);
        out.into_iter().map(|(e, c, _)| (e, c)).collect()
    }
}
