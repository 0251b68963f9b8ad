//! Weighted models `(W, A, E, C, ν)` and relational models `(W, R, V)`.

mod fixtures;
mod json;
mod kripke;
mod random;

use std::collections::BTreeMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::formula::{Agent, Formula};

pub use fixtures::{fixture, FIXTURE_NAMES};
pub use kripke::KripkeModel;
pub use random::{random_kripke, random_model, random_model_with, RandomModelParams};

/// Upper bound on `|A|`; ability sets are stored as 64-bit masks.
pub const MAX_ABILITIES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("a model needs at least one state")]
    NoStates,
    #[error("duplicate state {0:?}")]
    DuplicateState(String),
    #[error("duplicate ability {0:?}")]
    DuplicateAbility(String),
    #[error("duplicate agent {0:?}")]
    DuplicateAgent(String),
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("unknown ability {0:?}")]
    UnknownAbility(String),
    #[error("unknown agent {0:?}")]
    UnknownAgent(String),
    #[error("no capability given for agent {0:?}")]
    MissingCapability(String),
    #[error("edge ({0:?}, {1:?}) listed twice with different labels")]
    ConflictingEdge(String, String),
    #[error("at most {MAX_ABILITIES} abilities are supported, got {0}")]
    TooManyAbilities(usize),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("malformed model file: {0}")]
    Json(String),
}

/// A subset of the ability set `A`, as a bitmask over ability indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AbilitySet(pub u64);

impl AbilitySet {
    pub const EMPTY: AbilitySet = AbilitySet(0);

    /// All of the first `k` abilities.
    pub fn full(k: usize) -> Self {
        if k >= 64 {
            AbilitySet(u64::MAX)
        } else {
            AbilitySet((1u64 << k) - 1)
        }
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn is_subset(self, other: AbilitySet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: AbilitySet) -> Self {
        AbilitySet(self.0 | other.0)
    }

    pub fn intersection(self, other: AbilitySet) -> Self {
        AbilitySet(self.0 & other.0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }
}

/// The structural class of a weighted model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModelClass {
    #[serde(rename = "symmetric")]
    pub is_symmetric: bool,
    #[serde(rename = "positive")]
    pub is_positive: bool,
}

impl ModelClass {
    pub fn is_similarity(self) -> bool {
        self.is_symmetric && self.is_positive
    }
}

/// A weighted model over a finite ability set.
///
/// Edges are stored densely: `|W|²` masks in row-major order, with `∅`
/// for pairs that carry no label. Agents are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedModel {
    pub(crate) states: Vec<String>,
    pub(crate) abilities: Vec<String>,
    pub(crate) edges: Vec<AbilitySet>,
    pub(crate) agents: Vec<Agent>,
    pub(crate) capabilities: Vec<AbilitySet>,
    /// Proposition ↦ states where it holds. Propositions true nowhere may
    /// be absent.
    pub(crate) valuation: BTreeMap<String, FixedBitSet>,
}

fn check_unique<'a>(
    names: impl IntoIterator<Item = &'a String>,
    err: fn(String) -> ModelError,
) -> Result<(), ModelError> {
    let mut seen = std::collections::BTreeSet::new();
    for n in names {
        if !seen.insert(n) {
            return Err(err(n.clone()));
        }
    }
    Ok(())
}

impl WeightedModel {
    /// A model with the given states and abilities, no labelled edges, no
    /// agents and an empty valuation.
    pub fn new(states: Vec<String>, abilities: Vec<String>) -> Result<Self, ModelError> {
        if states.is_empty() {
            return Err(ModelError::NoStates);
        }
        if abilities.len() > MAX_ABILITIES {
            return Err(ModelError::TooManyAbilities(abilities.len()));
        }
        check_unique(&states, ModelError::DuplicateState)?;
        check_unique(&abilities, ModelError::DuplicateAbility)?;
        let n = states.len();
        Ok(WeightedModel {
            states,
            abilities,
            edges: vec![AbilitySet::EMPTY; n * n],
            agents: Vec::new(),
            capabilities: Vec::new(),
            valuation: BTreeMap::new(),
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn abilities(&self) -> &[String] {
        &self.abilities
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_abilities(&self) -> usize {
        self.abilities.len()
    }

    pub fn full_abilities(&self) -> AbilitySet {
        AbilitySet::full(self.abilities.len())
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn ability_index(&self, name: &str) -> Option<usize> {
        self.abilities.iter().position(|a| a == name)
    }

    pub(crate) fn require_state(&self, name: &str) -> Result<usize, ModelError> {
        self.state_index(name)
            .ok_or_else(|| ModelError::UnknownState(name.to_string()))
    }

    pub fn ability_set<'a>(
        &self,
        names: impl IntoIterator<Item = &'a str>,
    ) -> Result<AbilitySet, ModelError> {
        let mut set = AbilitySet::EMPTY;
        for n in names {
            let i = self
                .ability_index(n)
                .ok_or_else(|| ModelError::UnknownAbility(n.to_string()))?;
            set.insert(i);
        }
        Ok(set)
    }

    pub fn ability_names(&self, set: AbilitySet) -> Vec<&str> {
        set.iter()
            .take_while(|&i| i < self.abilities.len())
            .map(|i| self.abilities[i].as_str())
            .collect()
    }

    /// `E(s, t)` by index.
    pub fn edge(&self, s: usize, t: usize) -> AbilitySet {
        self.edges[s * self.states.len() + t]
    }

    pub fn set_edge(&mut self, s: usize, t: usize, labels: AbilitySet) {
        let n = self.states.len();
        self.edges[s * n + t] = labels;
    }

    /// Sets `E(s,t)` from names; with `symmetric`, also `E(t,s)`.
    pub fn set_edge_named(
        &mut self,
        from: &str,
        to: &str,
        labels: &[&str],
        symmetric: bool,
    ) -> Result<(), ModelError> {
        let s = self.require_state(from)?;
        let t = self.require_state(to)?;
        let set = self.ability_set(labels.iter().copied())?;
        self.set_edge(s, t, set);
        if symmetric {
            self.set_edge(t, s, set);
        }
        Ok(())
    }

    pub fn capability(&self, agent: &Agent) -> Option<AbilitySet> {
        self.agents
            .binary_search(agent)
            .ok()
            .map(|i| self.capabilities[i])
    }

    /// Adds an agent, or replaces its capability.
    pub fn set_capability(&mut self, agent: Agent, caps: AbilitySet) {
        match self.agents.binary_search(&agent) {
            Ok(i) => self.capabilities[i] = caps,
            Err(i) => {
                self.agents.insert(i, agent);
                self.capabilities.insert(i, caps);
            }
        }
    }

    pub fn set_capability_named(&mut self, agent: &str, caps: &[&str]) -> Result<(), ModelError> {
        let set = self.ability_set(caps.iter().copied())?;
        self.set_capability(Agent::new(agent), set);
        Ok(())
    }

    /// States where `p` holds; `None` when `p` holds nowhere.
    pub fn prop_states(&self, p: &str) -> Option<&FixedBitSet> {
        self.valuation.get(p).filter(|s| s.count_ones(..) > 0)
    }

    pub fn holds(&self, p: &str, s: usize) -> bool {
        self.valuation.get(p).is_some_and(|set| set.contains(s))
    }

    pub fn set_prop(&mut self, p: &str, s: usize, value: bool) {
        let n = self.states.len();
        let set = self
            .valuation
            .entry(p.to_string())
            .or_insert_with(|| FixedBitSet::with_capacity(n));
        set.set(s, value);
    }

    pub fn set_prop_named(&mut self, p: &str, state: &str) -> Result<(), ModelError> {
        let s = self.require_state(state)?;
        self.set_prop(p, s, true);
        Ok(())
    }

    /// Propositions true somewhere, sorted.
    pub fn props(&self) -> Vec<&str> {
        self.valuation
            .iter()
            .filter(|(_, s)| s.count_ones(..) > 0)
            .map(|(p, _)| p.as_str())
            .collect()
    }

    /// `ν(s)`, sorted.
    pub fn props_at(&self, s: usize) -> Vec<&str> {
        self.valuation
            .iter()
            .filter(|(_, set)| set.contains(s))
            .map(|(p, _)| p.as_str())
            .collect()
    }

    /// Symmetry and positivity of the edge function.
    pub fn validate(&self) -> ModelClass {
        let n = self.states.len();
        let full = self.full_abilities();
        let mut class = ModelClass {
            is_symmetric: true,
            is_positive: true,
        };
        for s in 0..n {
            for t in 0..n {
                if self.edge(s, t) != self.edge(t, s) {
                    class.is_symmetric = false;
                }
                if s != t && self.edge(s, t) == full {
                    class.is_positive = false;
                }
            }
        }
        class
    }

    /// Keeps only the listed states (in the given order), restricting
    /// edges and valuation.
    pub fn restrict(&self, keep: &[usize]) -> WeightedModel {
        let m = keep.len();
        let mut edges = vec![AbilitySet::EMPTY; m * m];
        for (i, &s) in keep.iter().enumerate() {
            for (j, &t) in keep.iter().enumerate() {
                edges[i * m + j] = self.edge(s, t);
            }
        }
        let valuation = self
            .valuation
            .iter()
            .map(|(p, set)| {
                let mut out = FixedBitSet::with_capacity(m);
                for (i, &s) in keep.iter().enumerate() {
                    out.set(i, set.contains(s));
                }
                (p.clone(), out)
            })
            .collect();
        WeightedModel {
            states: keep.iter().map(|&s| self.states[s].clone()).collect(),
            abilities: self.abilities.clone(),
            edges,
            agents: self.agents.clone(),
            capabilities: self.capabilities.clone(),
            valuation,
        }
    }

    /// Drops valuation entries that are false everywhere, so that models
    /// differing only in such entries compare equal.
    pub(crate) fn normalize_valuation(&mut self) {
        self.valuation.retain(|_, s| s.count_ones(..) > 0);
    }
}

impl fmt::Display for ModelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "symmetric={}, positive={}",
            self.is_symmetric, self.is_positive
        )
    }
}

/// `|W| + |A| + |W|²·|A| + |φ|·|A| + |W|·|φ|`.
pub fn model_size(m: &WeightedModel, phi: &Formula) -> usize {
    let w = m.num_states();
    let a = m.num_abilities();
    let l = phi.length();
    w + a + w * w * a + l * a + w * l
}
