use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ModelError, WeightedModel};
use crate::formula::Agent;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    states: Vec<String>,
    #[serde(default)]
    abilities: Vec<String>,
    #[serde(default)]
    edges: Vec<EdgeEntry>,
    #[serde(default)]
    capabilities: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    valuation: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    agents: Option<Vec<String>>,
    /// Mirror each listed edge.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    symmetric: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeEntry {
    from: String,
    to: String,
    labels: Vec<String>,
}

impl WeightedModel {
    /// Loads a model from the JSON schema
    /// `{"states","abilities","edges","capabilities","valuation","agents"}`.
    ///
    /// Unlisted edges are `∅`; every declared agent needs a capability entry.
    /// When `"agents"` is absent the agents are the capability keys.
    pub fn from_json_str(text: &str) -> Result<Self, ModelError> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        Self::from_file(file)
    }

    pub fn from_json_value(value: serde_json::Value) -> Result<Self, ModelError> {
        let file: ModelFile =
            serde_json::from_value(value).map_err(|e| ModelError::Json(e.to_string()))?;
        Self::from_file(file)
    }

    fn from_file(file: ModelFile) -> Result<Self, ModelError> {
        let mut m = WeightedModel::new(file.states, file.abilities)?;

        let mut seen: BTreeMap<(usize, usize), super::AbilitySet> = BTreeMap::new();
        let mut put = |m: &mut WeightedModel, s: usize, t: usize, set| {
            if let Some(&prev) = seen.get(&(s, t)) {
                if prev != set {
                    return Err(ModelError::ConflictingEdge(
                        m.states[s].clone(),
                        m.states[t].clone(),
                    ));
                }
            }
            seen.insert((s, t), set);
            m.set_edge(s, t, set);
            Ok(())
        };
        for e in &file.edges {
            let s = m.require_state(&e.from)?;
            let t = m.require_state(&e.to)?;
            let set = m.ability_set(e.labels.iter().map(String::as_str))?;
            put(&mut m, s, t, set)?;
            if file.symmetric {
                put(&mut m, t, s, set)?;
            }
        }

        let agents = match file.agents {
            Some(list) => {
                let mut seen = std::collections::BTreeSet::new();
                if let Some(dup) = list.iter().find(|a| !seen.insert(a.as_str())) {
                    return Err(ModelError::DuplicateAgent(dup.clone()));
                }
                for key in file.capabilities.keys() {
                    if !list.contains(key) {
                        return Err(ModelError::UnknownAgent(key.clone()));
                    }
                }
                list
            }
            None => file.capabilities.keys().cloned().collect(),
        };
        for a in &agents {
            let caps = file
                .capabilities
                .get(a)
                .ok_or_else(|| ModelError::MissingCapability(a.clone()))?;
            let set = m.ability_set(caps.iter().map(String::as_str))?;
            m.set_capability(Agent::new(a.clone()), set);
        }

        for (state, props) in &file.valuation {
            let s = m.require_state(state)?;
            for p in props {
                m.set_prop(p, s, true);
            }
        }
        m.normalize_valuation();
        Ok(m)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let n = self.num_states();
        let mut edges = Vec::new();
        for s in 0..n {
            for t in 0..n {
                let set = self.edge(s, t);
                if !set.is_empty() {
                    edges.push(EdgeEntry {
                        from: self.states[s].clone(),
                        to: self.states[t].clone(),
                        labels: self
                            .ability_names(set)
                            .into_iter()
                            .map(String::from)
                            .collect(),
                    });
                }
            }
        }
        let capabilities = self
            .agents
            .iter()
            .zip(&self.capabilities)
            .map(|(a, &c)| {
                (
                    a.to_string(),
                    self.ability_names(c)
                        .into_iter()
                        .map(String::from)
                        .collect(),
                )
            })
            .collect();
        let valuation = (0..n)
            .map(|s| {
                (
                    self.states[s].clone(),
                    self.props_at(s).into_iter().map(String::from).collect(),
                )
            })
            .collect();
        let file = ModelFile {
            states: self.states.clone(),
            abilities: self.abilities.clone(),
            edges,
            capabilities,
            valuation,
            agents: Some(self.agents.iter().map(|a| a.to_string()).collect()),
            symmetric: false,
        };
        serde_json::to_value(file).expect("model serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("model serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixture;

    #[test]
    fn loads_minimal_file() {
        let m = WeightedModel::from_json_str(
            r#"{"states":["s","t"],"abilities":["1"],
                "edges":[{"from":"s","to":"t","labels":["1"]}],
                "capabilities":{"a":["1"]},"valuation":{"s":["p"]},"agents":["a"]}"#,
        )
        .unwrap();
        assert_eq!(m.edge(0, 1).len(), 1);
        assert!(m.edge(1, 0).is_empty());
        assert!(m.holds("p", 0) && !m.holds("p", 1));
    }

    #[test]
    fn symmetric_flag_mirrors_edges() {
        let m = WeightedModel::from_json_str(
            r#"{"states":["s","t"],"abilities":["1"],"symmetric":true,
                "edges":[{"from":"s","to":"t","labels":["1"]}],"capabilities":{}}"#,
        )
        .unwrap();
        assert_eq!(m.edge(1, 0), m.edge(0, 1));
    }

    #[test]
    fn structural_errors() {
        let missing_cap = r#"{"states":["s"],"abilities":[],"agents":["a"]}"#;
        assert_eq!(
            WeightedModel::from_json_str(missing_cap),
            Err(ModelError::MissingCapability("a".into()))
        );
        let dangling = r#"{"states":["s"],"abilities":["1"],
            "edges":[{"from":"s","to":"x","labels":["1"]}]}"#;
        assert_eq!(
            WeightedModel::from_json_str(dangling),
            Err(ModelError::UnknownState("x".into()))
        );
        let bad_label = r#"{"states":["s"],"abilities":["1"],
            "edges":[{"from":"s","to":"s","labels":["2"]}]}"#;
        assert_eq!(
            WeightedModel::from_json_str(bad_label),
            Err(ModelError::UnknownAbility("2".into()))
        );
        assert!(matches!(
            WeightedModel::from_json_str("{"),
            Err(ModelError::Json(_))
        ));
    }

    #[test]
    fn fixtures_round_trip_bit_exact() {
        for name in crate::model::FIXTURE_NAMES {
            let m = fixture(name).unwrap();
            let text = m.to_json_string();
            let back = WeightedModel::from_json_str(&text).unwrap();
            assert_eq!(back, m, "{name}");
            assert_eq!(back.to_json_string(), text, "{name}");
        }
    }
}
