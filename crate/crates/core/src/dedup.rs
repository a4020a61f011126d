//! Merging candidates that agree for every interpretation of `thefunc`.

use crate::egraph::{EGraph, EGraphError, Extractor, Id, OpCost, Rewrite, RunBudget, RunReport};
use crate::expr::Expr;
use crate::identity::{Classification, Identity};

#[derive(Clone, Debug)]
pub struct Group {
    /// Indices into the candidate list, ascending.
    pub members: Vec<usize>,
    pub representative: Identity,
    /// The group is provably equal to `thefunc(x)`.
    pub trivial: bool,
}

#[derive(Clone, Debug)]
pub struct Dedup {
    /// Ordered by smallest member index.
    pub groups: Vec<Group>,
    pub run: RunReport,
}

impl Dedup {
    pub fn removed(&self, candidates: usize) -> usize {
        candidates - self.groups.len()
    }
}

/// Groups candidates by e-class after saturating without the defining
/// equation, so `thefunc` stays uninterpreted.
pub fn dedup(candidates: &[Identity], rules: &[Rewrite], budget: &RunBudget) -> Result<(Dedup, EGraph), EGraphError> {
    let mut g = EGraph::new();
    let trivial = g.add(&Expr::thefunc(Expr::X))?;
    let ids = candidates.iter().map(|c| g.add(&c.rhs)).collect::<Result<Vec<Id>, _>>()?;
    let run = g.run(rules, budget)?;
    let trivial = g.find(trivial);
    let extractor = Extractor::new(&g, OpCost::STANDARD);
    let mut groups: Vec<Group> = Vec::new();
    let mut group_of_class: Vec<(Id, usize)> = Vec::new();
    for (index, id) in ids.iter().enumerate() {
        let class = g.find(*id);
        match group_of_class.iter().find(|(c, _)| *c == class) {
            Some((_, gi)) => groups[*gi].members.push(index),
            None => {
                let (rhs, _) = extractor.extract_best(class).expect("class has a term");
                let mut representative = Identity::new(rhs);
                let is_trivial = class == trivial;
                representative.classification =
                    if is_trivial { Classification::Trivial } else { Classification::Candidate };
                group_of_class.push((class, groups.len()));
                groups.push(Group { members: vec![index], representative, trivial: is_trivial });
            }
        }
    }
    Ok((Dedup { groups, run }, g))
}
