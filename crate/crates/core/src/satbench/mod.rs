//! Brute-force satisfiability over small models, axiom soundness sweeps
//! and the expressivity fixture check.
//!
//! [`bounded_sat`] is a semi-decision aid: a formula with no model inside
//! the bounds may still be satisfiable in a larger one, so
//! [`SatStatus::UnsatWithinBound`] is not a proof of unsatisfiability.

mod axioms;
mod expressivity;

use serde_json::json;

use crate::formula::{Agent, Formula, RESERVED_PROP};
use crate::model::{AbilitySet, WeightedModel};
use crate::semantics::Evaluator;

pub use axioms::{
    instantiate_axioms, soundness_sweep, AxiomBody, AxiomInstance, SoundnessReport, SystemId,
    Violation,
};
pub use expressivity::{distinguishing_formula, expressivity_check, ExpressivityReport, Operator};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SatBounds {
    pub max_states: usize,
    pub max_abilities: usize,
    /// Candidate models examined before giving up.
    pub max_candidates: u64,
}

impl Default for SatBounds {
    fn default() -> Self {
        SatBounds {
            max_states: 4,
            max_abilities: 3,
            max_candidates: 10_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SatStatus {
    Sat,
    UnsatWithinBound,
    BoundExhausted,
}

impl SatStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SatStatus::Sat => "SAT",
            SatStatus::UnsatWithinBound => "UNSAT_WITHIN_BOUND",
            SatStatus::BoundExhausted => "BOUND_EXHAUSTED",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SatVerdict {
    pub status: SatStatus,
    /// A model and the name of a state where the formula holds.
    pub witness: Option<(WeightedModel, String)>,
    pub bounds: SatBounds,
    pub candidates: u64,
}

impl SatVerdict {
    pub fn is_sat(&self) -> bool {
        self.status == SatStatus::Sat
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "status": self.status.as_str(),
            "state": self.witness.as_ref().map(|(_, s)| s),
            "witness": self.witness.as_ref().map(|(m, _)| m.to_json_value()),
            "bound": {
                "max_states": self.bounds.max_states,
                "max_abilities": self.bounds.max_abilities,
                "max_candidates": self.bounds.max_candidates,
            },
            "candidates": self.candidates,
        })
    }
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    /// Label of `(s,t)`; mirrored to `(t,s)` in similarity mode.
    Edge(usize, usize),
    Capability(usize),
    Valuation(usize, usize),
}

/// Every model of one shape (`n` states `w0..`, `k` abilities `1..k`) with
/// capabilities for `agents` and valuations over `props`, in a fixed order.
///
/// Models are produced in place; [`ModelEnumerator::advance`] returns a
/// reference to the next one. Labels are enumerated as bitmasks in
/// increasing order, valuation bits fastest, edges slowest.
pub struct ModelEnumerator {
    model: WeightedModel,
    agents: Vec<Agent>,
    props: Vec<String>,
    similarity_only: bool,
    slots: Vec<Slot>,
    radices: Vec<u64>,
    digits: Vec<u64>,
    started: bool,
    done: bool,
}

impl ModelEnumerator {
    pub fn new(
        n: usize,
        k: usize,
        agents: &[Agent],
        props: &[String],
        similarity_only: bool,
    ) -> Self {
        Self::with_edges(n, k, agents, props, similarity_only, true)
    }

    /// With `edges = false` every label stays `∅`; only sound when nothing
    /// evaluated on the models looks at edges.
    fn with_edges(
        n: usize,
        k: usize,
        agents: &[Agent],
        props: &[String],
        similarity_only: bool,
        edges: bool,
    ) -> Self {
        let model = WeightedModel::new(
            (0..n).map(|i| format!("w{i}")).collect(),
            (1..=k).map(|i| i.to_string()).collect(),
        )
        .expect("bounded shape");
        let labels = 1u64 << k;
        let mut slots = Vec::new();
        let mut radices = Vec::new();
        for p in 0..props.len() {
            for s in 0..n {
                slots.push(Slot::Valuation(p, s));
                radices.push(2);
            }
        }
        for a in 0..agents.len() {
            slots.push(Slot::Capability(a));
            radices.push(labels);
        }
        for s in (0..n).filter(|_| edges) {
            for t in 0..n {
                if similarity_only && t < s {
                    continue;
                }
                slots.push(Slot::Edge(s, t));
                // Positivity: an off-diagonal label is never the full set.
                radices.push(if similarity_only && s != t {
                    labels - 1
                } else {
                    labels
                });
            }
        }
        // All-∅ labels are positive only if ∅ is not the full ability set.
        let done = radices.contains(&0) || (!edges && similarity_only && k == 0 && n > 1);
        let mut e = ModelEnumerator {
            model,
            agents: agents.to_vec(),
            props: props.to_vec(),
            similarity_only,
            digits: vec![0; slots.len()],
            slots,
            radices,
            started: false,
            done,
        };
        for i in 0..e.slots.len() {
            e.apply(i);
        }
        e
    }

    /// Number of models this shape yields.
    pub fn count(&self) -> u128 {
        self.radices.iter().map(|&r| r as u128).product()
    }

    fn apply(&mut self, i: usize) {
        let d = self.digits[i];
        match self.slots[i] {
            Slot::Edge(s, t) => {
                self.model.set_edge(s, t, AbilitySet(d));
                if self.similarity_only {
                    self.model.set_edge(t, s, AbilitySet(d));
                }
            }
            Slot::Capability(a) => self
                .model
                .set_capability(self.agents[a].clone(), AbilitySet(d)),
            Slot::Valuation(p, s) => {
                let p = self.props[p].clone();
                self.model.set_prop(&p, s, d == 1);
            }
        }
    }

    pub fn advance(&mut self) -> Option<&WeightedModel> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.model);
        }
        for i in 0..self.slots.len() {
            self.digits[i] += 1;
            if self.digits[i] < self.radices[i] {
                self.apply(i);
                return Some(&self.model);
            }
            self.digits[i] = 0;
            self.apply(i);
        }
        self.done = true;
        None
    }
}

/// Propositions whose value can matter: those of `φ` except the reserved one.
fn relevant_props(phi: &Formula) -> Vec<String> {
    phi.props()
        .into_iter()
        .filter(|p| p != RESERVED_PROP)
        .collect()
}

/// Searches shapes in order of `|W|` then `|A|` and returns the first model
/// and state satisfying `φ`.
pub fn bounded_sat(phi: &Formula, bounds: &SatBounds, similarity_only: bool) -> SatVerdict {
    let agents: Vec<Agent> = phi.agents().into_iter().collect();
    let props = relevant_props(phi);
    let eval = Evaluator::new(phi);
    // Without agents there are no modalities, so edge labels are irrelevant.
    let edges = !agents.is_empty();
    let mut candidates = 0u64;
    let verdict = |status, witness, candidates| SatVerdict {
        status,
        witness,
        bounds: *bounds,
        candidates,
    };
    for n in 1..=bounds.max_states {
        for k in 0..=bounds.max_abilities {
            let mut e = ModelEnumerator::with_edges(n, k, &agents, &props, similarity_only, edges);
            while let Some(m) = e.advance() {
                if candidates >= bounds.max_candidates {
                    return verdict(SatStatus::BoundExhausted, None, candidates);
                }
                candidates += 1;
                let set = eval.eval(m).expect("every agent of φ has a capability");
                if let Some(s) = set.ones().next() {
                    let mut w = m.clone();
                    w.normalize_valuation();
                    let name = w.states()[s].clone();
                    return verdict(SatStatus::Sat, Some((w, name)), candidates);
                }
            }
        }
    }
    verdict(SatStatus::UnsatWithinBound, None, candidates)
}
