use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::formula::Agent;

/// A relational model `(W, R, V)` with one accessibility relation per agent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    pub(crate) states: Vec<String>,
    /// Agent ↦ successor set of each state.
    pub(crate) relations: BTreeMap<Agent, Vec<FixedBitSet>>,
    pub(crate) valuation: BTreeMap<String, FixedBitSet>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct KripkeFile {
    states: Vec<String>,
    #[serde(default)]
    relations: BTreeMap<String, Vec<(String, String)>>,
    #[serde(default)]
    valuation: BTreeMap<String, Vec<String>>,
}

impl KripkeModel {
    pub fn new(states: Vec<String>) -> Result<Self, ModelError> {
        if states.is_empty() {
            return Err(ModelError::NoStates);
        }
        let mut seen = std::collections::BTreeSet::new();
        if let Some(d) = states.iter().find(|s| !seen.insert(s.as_str())) {
            return Err(ModelError::DuplicateState(d.clone()));
        }
        Ok(KripkeModel {
            states,
            relations: BTreeMap::new(),
            valuation: BTreeMap::new(),
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn agents(&self) -> impl Iterator<Item = &Agent> {
        self.relations.keys()
    }

    /// Declares an agent with an empty relation if it has none yet.
    pub fn add_agent(&mut self, agent: Agent) {
        let n = self.states.len();
        self.relations
            .entry(agent)
            .or_insert_with(|| vec![FixedBitSet::with_capacity(n); n]);
    }

    pub fn add_pair(&mut self, agent: &Agent, s: usize, t: usize) {
        self.add_agent(agent.clone());
        self.relations.get_mut(agent).expect("just added")[s].insert(t);
    }

    pub fn relation(&self, agent: &Agent) -> Option<&[FixedBitSet]> {
        self.relations.get(agent).map(Vec::as_slice)
    }

    pub fn has_pair(&self, agent: &Agent, s: usize, t: usize) -> bool {
        self.relations.get(agent).is_some_and(|r| r[s].contains(t))
    }

    pub fn holds(&self, p: &str, s: usize) -> bool {
        self.valuation.get(p).is_some_and(|set| set.contains(s))
    }

    pub fn prop_states(&self, p: &str) -> Option<&FixedBitSet> {
        self.valuation.get(p)
    }

    pub fn set_prop(&mut self, p: &str, s: usize, value: bool) {
        let n = self.states.len();
        self.valuation
            .entry(p.to_string())
            .or_insert_with(|| FixedBitSet::with_capacity(n))
            .set(s, value);
    }

    /// Every relation is symmetric.
    pub fn is_symmetric(&self) -> bool {
        self.relations
            .values()
            .all(|r| (0..r.len()).all(|s| r[s].ones().all(|t| r[t].contains(s))))
    }

    pub fn restrict(&self, keep: &[usize]) -> KripkeModel {
        let m = keep.len();
        let remap = |set: &FixedBitSet| {
            let mut out = FixedBitSet::with_capacity(m);
            for (i, &s) in keep.iter().enumerate() {
                out.set(i, set.contains(s));
            }
            out
        };
        KripkeModel {
            states: keep.iter().map(|&s| self.states[s].clone()).collect(),
            relations: self
                .relations
                .iter()
                .map(|(a, r)| (a.clone(), keep.iter().map(|&s| remap(&r[s])).collect()))
                .collect(),
            valuation: self
                .valuation
                .iter()
                .map(|(p, set)| (p.clone(), remap(set)))
                .collect(),
        }
    }

    /// Loads `{"states":[..], "relations":{agent:[[from,to],..]}, "valuation":{prop:[state,..]}}`.
    pub fn from_json_str(text: &str) -> Result<Self, ModelError> {
        let file: KripkeFile =
            serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        let mut k = KripkeModel::new(file.states)?;
        for (agent, pairs) in &file.relations {
            let a = Agent::new(agent.clone());
            k.add_agent(a.clone());
            for (from, to) in pairs {
                let s = k.require_state(from)?;
                let t = k.require_state(to)?;
                k.add_pair(&a, s, t);
            }
        }
        for (p, states) in &file.valuation {
            for st in states {
                let s = k.require_state(st)?;
                k.set_prop(p, s, true);
            }
        }
        Ok(k)
    }

    fn require_state(&self, name: &str) -> Result<usize, ModelError> {
        self.state_index(name)
            .ok_or_else(|| ModelError::UnknownState(name.to_string()))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let file = KripkeFile {
            states: self.states.clone(),
            relations: self
                .relations
                .iter()
                .map(|(a, r)| {
                    let pairs = r
                        .iter()
                        .enumerate()
                        .flat_map(|(s, succ)| {
                            succ.ones()
                                .map(move |t| (self.states[s].clone(), self.states[t].clone()))
                        })
                        .collect();
                    (a.to_string(), pairs)
                })
                .collect(),
            valuation: self
                .valuation
                .iter()
                .map(|(p, set)| {
                    (
                        p.clone(),
                        set.ones().map(|s| self.states[s].clone()).collect(),
                    )
                })
                .collect(),
        };
        serde_json::to_value(file).expect("model serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("model serializes")
    }
}
