//! Satisfaction over weighted and relational models.
//!
//! [`satisfies`] follows the recursive definition literally and serves as
//! the reference. [`truthset`] computes the set of states where a formula
//! holds bottom-up, evaluating each distinct subformula once, and decides
//! common knowledge through the augmented edge relation `E_φ⁺`.

mod kripke;
mod truthset;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::formula::{Agent, Formula, Group};
use crate::model::{AbilitySet, WeightedModel};

pub use kripke::{kripke_satisfies, kripke_truthset};
pub use truthset::{
    augment_edges, truthset, truthset_by_iteration, AugmentedEdges, CommonStrategy, Evaluator,
    Truthset,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("agent {0} has no capability in this model")]
    UnknownAgent(Agent),
    #[error("{0} has no relational counterpart")]
    UnsupportedOperator(&'static str),
}

pub(crate) fn capability(m: &WeightedModel, a: &Agent) -> Result<AbilitySet, SemanticsError> {
    m.capability(a)
        .ok_or_else(|| SemanticsError::UnknownAgent(a.clone()))
}

/// `⋃_{a∈G} C(a)`.
pub fn pooled_capability(m: &WeightedModel, g: &Group) -> Result<AbilitySet, SemanticsError> {
    g.members()
        .iter()
        .try_fold(AbilitySet::EMPTY, |acc, a| Ok(acc.union(capability(m, a)?)))
}

/// `⋂_{a∈G} C(a)`.
pub fn shared_capability(m: &WeightedModel, g: &Group) -> Result<AbilitySet, SemanticsError> {
    let mut acc = AbilitySet(u64::MAX);
    for a in g.members() {
        acc = acc.intersection(capability(m, a)?);
    }
    Ok(acc)
}

/// `M, s ⊨ φ` for a state named `s`.
///
/// Propositions absent from the valuation are false everywhere.
pub fn satisfies(m: &WeightedModel, s: &str, phi: &Formula) -> Result<bool, SemanticsError> {
    let i = m
        .state_index(s)
        .ok_or_else(|| SemanticsError::UnknownState(s.to_string()))?;
    satisfies_at(m, i, phi)
}

/// `M, s ⊨ φ` by state index.
pub fn satisfies_at(m: &WeightedModel, s: usize, phi: &Formula) -> Result<bool, SemanticsError> {
    let n = m.num_states();
    let all_successors = |guard: AbilitySet, body: &Formula| -> Result<bool, SemanticsError> {
        for t in 0..n {
            if guard.is_subset(m.edge(s, t)) && !satisfies_at(m, t, body)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    match phi {
        Formula::Prop(p) => Ok(m.holds(p, s)),
        Formula::Not(a) => Ok(!satisfies_at(m, s, a)?),
        Formula::Implies(a, b) => Ok(!satisfies_at(m, s, a)? || satisfies_at(m, s, b)?),
        Formula::Know(a, body) => all_successors(capability(m, a)?, body),
        Formula::Everyone(g, body) => {
            for a in g.members() {
                if !all_successors(capability(m, a)?, body)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Distributed(g, body) => all_successors(pooled_capability(m, g)?, body),
        Formula::Mutual(g, body) => all_successors(shared_capability(m, g)?, body),
        Formula::Common(g, body) => {
            // `E_G^n ψ` holds at s iff ψ holds on every state exactly n
            // `E_G`-steps away. On |W| states, layers 1..=|W| already cover
            // everything reachable, so later layers repeat earlier ones.
            let caps: Vec<AbilitySet> = g
                .members()
                .iter()
                .map(|a| capability(m, a))
                .collect::<Result<_, _>>()?;
            let step = |u: usize, v: usize| caps.iter().any(|c| c.is_subset(m.edge(u, v)));
            let mut layer = FixedBitSet::with_capacity(n);
            layer.insert(s);
            for _ in 0..n {
                let mut next = FixedBitSet::with_capacity(n);
                for u in layer.ones() {
                    for v in 0..n {
                        if step(u, v) {
                            next.insert(v);
                        }
                    }
                }
                for t in next.ones() {
                    if !satisfies_at(m, t, body)? {
                        return Ok(false);
                    }
                }
                layer = next;
            }
            Ok(true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_open;
    use crate::model::fixture;

    fn check(state: &str, text: &str) -> bool {
        let m = fixture("paper_example").unwrap();
        satisfies(&m, state, &parse_open(text).unwrap()).unwrap()
    }

    #[test]
    fn paper_example_truths() {
        assert!(check("s2", "K{a} p3"));
        assert!(check("s4", "~K{b} p1 & ~K{b} ~p1"));
        assert!(check("s3", "K{c} (K{a} p3 | K{a} ~p3)"));
        assert!(check("s4", "E{a,b} (p3 & p4)"));
        assert!(check(
            "s5",
            "(~C{a,c} p1 & ~C{a,c} ~p1) & (~C{a,c} p2 & ~C{a,c} ~p2)"
        ));
        assert!(check("s4", "D{a,b} (~p1 & p4)"));
        assert!(check("s4", "~M{a,b} ~p1 & ~M{a,b} p4"));
        assert!(!check("s4", "M{a,b} p4"));
        assert!(!check("s5", "C{a,c} p1"));
    }

    #[test]
    fn errors() {
        let m = fixture("paper_example").unwrap();
        assert_eq!(
            satisfies(&m, "nowhere", &parse_open("p").unwrap()),
            Err(SemanticsError::UnknownState("nowhere".into()))
        );
        assert_eq!(
            satisfies(&m, "s1", &parse_open("K{z} p").unwrap()),
            Err(SemanticsError::UnknownAgent("z".into()))
        );
        assert_eq!(satisfies(&m, "s1", &parse_open("zzz").unwrap()), Ok(false));
    }

    #[test]
    fn counter_model_refutes_mutual_b() {
        let m = fixture("prop1_counter").unwrap();
        let f = parse_open("true -> M{a} ~M{a} ~true").unwrap();
        assert!(!satisfies(&m, "s", &f).unwrap());
    }
}
