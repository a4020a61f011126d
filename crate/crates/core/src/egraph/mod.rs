//! Equality-saturation substrate.
//!
//! An [`EGraph`] holds e-classes of e-nodes under a union-find with a
//! hashcons. Every class carries two analyses: the exact constant it is
//! known to equal (folding `+ - * /` and negation) and whether it has a
//! representative free of `thefunc`. Merging two classes with different
//! constants is a soundness violation and is reported as
//! [`EGraphError::Sentinel`].

mod dot;
mod extract;
mod run;

use std::fmt;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;
use thiserror::Error;

use crate::expr::{fold::fold_op, Expr, Head, Op, RationalPi};

pub use extract::{CostFunction, Extractor, OpCost};
pub use run::{Rewrite, RunBudget, RunReport, Scheduler, StopReason};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Id(u32);

impl Id {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for Id {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for Id {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ENode {
    pub head: Head,
    pub children: SmallVec<[Id; 2]>,
}

impl ENode {
    pub fn leaf(head: Head) -> Self {
        ENode { head, children: SmallVec::new() }
    }

    pub fn new(head: Head, children: impl IntoIterator<Item = Id>) -> Self {
        ENode { head, children: children.into_iter().collect() }
    }
}

/// Per-class analysis data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassData {
    pub constant: Option<RationalPi>,
    pub thefunc_free: bool,
}

#[derive(Clone, Debug)]
pub struct EClass {
    pub id: Id,
    pub nodes: Vec<ENode>,
    pub data: ClassData,
    parents: Vec<(ENode, Id)>,
}

impl EClass {
    /// Nodes with the given head. Only valid on a rebuilt graph, where the
    /// node list is sorted.
    pub fn nodes_with_head(&self, head: &Head) -> &[ENode] {
        let start = self.nodes.partition_point(|n| n.head < *head);
        let end = start + self.nodes[start..].partition_point(|n| n.head == *head);
        &self.nodes[start..end]
    }
}

/// Two distinct constants were proven equal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("soundness sentinel: constants {first} and {second} were merged into one e-class")]
pub struct SentinelTrip {
    pub first: RationalPi,
    pub second: RationalPi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum EGraphError {
    #[error(transparent)]
    Sentinel(#[from] SentinelTrip),
    #[error("e-node budget of {limit} exceeded")]
    NodeLimit { limit: usize },
}

#[derive(Clone, Default)]
pub struct EGraph {
    uf: Vec<Id>,
    memo: FxHashMap<ENode, Id>,
    classes: Vec<Option<EClass>>,
    pending: Vec<(ENode, Id)>,
    analysis_pending: Vec<(ENode, Id)>,
    node_limit: Option<usize>,
    sentinel: Option<SentinelTrip>,
    node_count: usize,
    version: u64,
    clean: bool,
}

impl EGraph {
    pub fn new() -> Self {
        EGraph { clean: true, ..Default::default() }
    }

    /// Makes [`EGraph::add`] fail once the graph holds `limit` e-nodes.
    pub fn with_node_limit(limit: usize) -> Self {
        EGraph { node_limit: Some(limit), ..Self::new() }
    }

    pub fn find(&self, mut id: Id) -> Id {
        while self.uf[id.index()] != id {
            id = self.uf[id.index()];
        }
        id
    }

    fn find_mut(&mut self, id: Id) -> Id {
        let root = self.find(id);
        let mut cur = id;
        while self.uf[cur.index()] != root {
            let next = self.uf[cur.index()];
            self.uf[cur.index()] = root;
            cur = next;
        }
        root
    }

    pub fn class(&self, id: Id) -> &EClass {
        let id = self.find(id);
        self.classes[id.index()].as_ref().expect("canonical id has a class")
    }

    fn class_mut(&mut self, id: Id) -> &mut EClass {
        let id = self.find(id);
        self.classes[id.index()].as_mut().expect("canonical id has a class")
    }

    /// Live classes in ascending id order.
    pub fn classes(&self) -> impl Iterator<Item = &EClass> {
        self.classes.iter().flatten()
    }

    pub fn number_of_classes(&self) -> usize {
        self.classes().count()
    }

    /// Number of e-nodes (exact after [`EGraph::rebuild`]).
    pub fn total_nodes(&self) -> usize {
        self.node_count
    }

    /// Changes whenever a node is created or two classes merge.
    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn is_clean(&self) -> bool {
        self.clean
    }

    pub fn canonicalize(&self, node: &ENode) -> ENode {
        ENode { head: node.head, children: node.children.iter().map(|c| self.find(*c)).collect() }
    }

    /// Class containing `node`, if it is represented.
    pub fn lookup(&self, node: &ENode) -> Option<Id> {
        self.memo.get(&self.canonicalize(node)).map(|id| self.find(*id))
    }

    pub fn lookup_expr(&self, e: &Expr) -> Option<Id> {
        let children = e.children().iter().map(|c| self.lookup_expr(c)).collect::<Option<SmallVec<[Id; 2]>>>()?;
        self.lookup(&ENode { head: e.head(), children })
    }

    pub fn add(&mut self, e: &Expr) -> Result<Id, EGraphError> {
        let children = e.children().iter().map(|c| self.add(c)).collect::<Result<SmallVec<[Id; 2]>, _>>()?;
        self.add_node(ENode { head: e.head(), children })
    }

    pub fn add_node(&mut self, node: ENode) -> Result<Id, EGraphError> {
        let node = self.canonicalize(&node);
        if let Some(id) = self.memo.get(&node) {
            return Ok(self.find(*id));
        }
        if let Some(limit) = self.node_limit {
            if self.node_count >= limit {
                return Err(EGraphError::NodeLimit { limit });
            }
        }
        Ok(self.insert_new(node))
    }

    fn insert_new(&mut self, node: ENode) -> Id {
        let id = Id(self.uf.len() as u32);
        let data = self.make(&node);
        for child in node.children.iter() {
            self.class_mut(*child).parents.push((node.clone(), id));
        }
        self.uf.push(id);
        self.memo.insert(node.clone(), id);
        self.classes.push(Some(EClass { id, nodes: vec![node], data, parents: Vec::new() }));
        self.node_count += 1;
        self.version += 1;
        self.clean = false;
        self.modify(id);
        id
    }

    /// Analysis value of a single node from its children's data.
    fn make(&self, node: &ENode) -> ClassData {
        let child = |i: usize| self.class(node.children[i]).data;
        let constant = match node.head {
            Head::Const(c) => Some(c),
            Head::Op(op) => {
                let args: Option<SmallVec<[RationalPi; 2]>> =
                    (0..node.children.len()).map(|i| child(i).constant).collect();
                args.and_then(|a| fold_op(op, &a))
            }
            _ => None,
        };
        let thefunc_free =
            node.head != Head::Op(Op::Thefunc) && (0..node.children.len()).all(|i| child(i).thefunc_free);
        ClassData { constant, thefunc_free }
    }

    /// Joins `other` into `into`; returns (into changed, other changed).
    fn join(into: &mut ClassData, other: ClassData, sentinel: &mut Option<SentinelTrip>) -> (bool, bool) {
        let mut changed = (false, false);
        match (into.constant, other.constant) {
            (None, Some(c)) => {
                into.constant = Some(c);
                changed.0 = true;
            }
            (Some(_), None) => changed.1 = true,
            (Some(a), Some(b)) if a != b => {
                sentinel.get_or_insert(SentinelTrip { first: a, second: b });
            }
            _ => {}
        }
        if into.thefunc_free != other.thefunc_free {
            if other.thefunc_free {
                changed.0 = true;
            } else {
                changed.1 = true;
            }
            into.thefunc_free = true;
        }
        changed
    }

    /// Adds the folded constant as an explicit node of a constant class.
    fn modify(&mut self, id: Id) {
        let class = self.class(id);
        let Some(c) = class.data.constant else { return };
        if class.nodes.iter().any(|n| n.head == Head::Const(c)) {
            return;
        }
        let node = ENode::leaf(Head::Const(c));
        let cid = match self.memo.get(&node) {
            Some(existing) => self.find(*existing),
            None => self.insert_new(node),
        };
        self.union_impl(id, cid);
    }

    /// Merges two classes. Congruence is restored by [`EGraph::rebuild`].
    pub fn union(&mut self, a: Id, b: Id) -> Result<Id, EGraphError> {
        let (id, _) = self.union_impl(a, b);
        match self.sentinel {
            Some(trip) => Err(trip.into()),
            None => Ok(id),
        }
    }

    fn union_impl(&mut self, a: Id, b: Id) -> (Id, bool) {
        let (mut a, mut b) = (self.find_mut(a), self.find_mut(b));
        if a == b {
            return (a, false);
        }
        let (pa, pb) = (self.class(a).parents.len(), self.class(b).parents.len());
        if pa < pb || (pa == pb && b < a) {
            std::mem::swap(&mut a, &mut b);
        }
        self.clean = false;
        self.version += 1;
        self.uf[b.index()] = a;
        let class_b = self.classes[b.index()].take().expect("canonical id has a class");
        let mut sentinel = self.sentinel;
        let class_a = self.classes[a.index()].as_mut().expect("canonical id has a class");
        let (a_changed, b_changed) = Self::join(&mut class_a.data, class_b.data, &mut sentinel);
        if a_changed {
            self.analysis_pending.extend(class_a.parents.iter().cloned());
        }
        if b_changed {
            self.analysis_pending.extend(class_b.parents.iter().cloned());
        }
        self.pending.extend(class_b.parents.iter().cloned());
        class_a.nodes.extend(class_b.nodes);
        class_a.parents.extend(class_b.parents);
        self.sentinel = sentinel;
        self.modify(a);
        (a, true)
    }

    /// Restores the congruence and hashcons invariants and propagates the
    /// analyses to a fixpoint.
    pub fn rebuild(&mut self) -> Result<(), EGraphError> {
        while !self.pending.is_empty() || !self.analysis_pending.is_empty() {
            while let Some((node, class)) = self.pending.pop() {
                let node = self.canonicalize(&node);
                if let Some(old) = self.memo.insert(node, class) {
                    self.union_impl(old, class);
                }
            }
            while let Some((node, class)) = self.analysis_pending.pop() {
                let id = self.find_mut(class);
                let node_data = self.make(&self.canonicalize(&node));
                let mut sentinel = self.sentinel;
                let class = self.classes[id.index()].as_mut().expect("canonical id has a class");
                let (changed, _) = Self::join(&mut class.data, node_data, &mut sentinel);
                self.sentinel = sentinel;
                if changed {
                    let parents = class.parents.clone();
                    self.analysis_pending.extend(parents);
                    self.modify(id);
                }
            }
        }
        if let Some(trip) = self.sentinel {
            return Err(trip.into());
        }
        let mut count = 0;
        for i in 0..self.classes.len() {
            let Some(mut class) = self.classes[i].take() else { continue };
            for node in class.nodes.iter_mut() {
                *node = self.canonicalize(node);
            }
            class.nodes.sort_unstable();
            class.nodes.dedup();
            count += class.nodes.len();
            self.classes[i] = Some(class);
        }
        self.node_count = count;
        self.clean = true;
        Ok(())
    }

    /// Checks congruence, hashcons consistency and the incrementally
    /// maintained analyses against a from-scratch recomputation.
    pub fn audit(&self) -> Result<(), String> {
        if !self.clean {
            return Err("graph is not rebuilt".into());
        }
        let mut seen: FxHashMap<ENode, Id> = FxHashMap::default();
        for class in self.classes() {
            if self.find(class.id) != class.id {
                return Err(format!("class {:?} is not canonical", class.id));
            }
            for node in &class.nodes {
                let canon = self.canonicalize(node);
                if canon != *node {
                    return Err(format!("non-canonical node {node:?} in {:?}", class.id));
                }
                if let Some(other) = seen.insert(canon.clone(), class.id) {
                    return Err(format!("congruence: {node:?} in both {other:?} and {:?}", class.id));
                }
                match self.memo.get(&canon) {
                    Some(m) if self.find(*m) == class.id => {}
                    _ => return Err(format!("hashcons misses {node:?} of {:?}", class.id)),
                }
            }
        }
        let scratch = self.analysis_from_scratch();
        for class in self.classes() {
            let fresh = scratch[class.id.index()];
            if fresh != class.data {
                return Err(format!("analysis of {:?}: maintained {:?}, recomputed {:?}", class.id, class.data, fresh));
            }
        }
        Ok(())
    }

    fn analysis_from_scratch(&self) -> Vec<ClassData> {
        let mut data = vec![ClassData { constant: None, thefunc_free: false }; self.classes.len()];
        loop {
            let mut changed = false;
            for class in self.classes() {
                for node in &class.nodes {
                    let child = |i: usize| data[self.find(node.children[i]).index()];
                    let constant = match node.head {
                        Head::Const(c) => Some(c),
                        Head::Op(op) => (0..node.children.len())
                            .map(|i| child(i).constant)
                            .collect::<Option<Vec<_>>>()
                            .and_then(|a| fold_op(op, &a)),
                        _ => None,
                    };
                    let free =
                        node.head != Head::Op(Op::Thefunc) && (0..node.children.len()).all(|i| child(i).thefunc_free);
                    let d = &mut data[class.id.index()];
                    if d.constant.is_none() && constant.is_some() {
                        d.constant = constant;
                        changed = true;
                    }
                    if free && !d.thefunc_free {
                        d.thefunc_free = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                return data;
            }
        }
    }

    pub fn to_dot(&self) -> String {
        dot::to_dot(self)
    }
}
