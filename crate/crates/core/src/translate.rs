//! Moving between weighted and relational models.

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::model::{AbilitySet, KripkeModel, ModelError, WeightedModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("the similarity lift needs a symmetric model")]
    NotSymmetric,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// `σ`: `R(a) = {(s,t) | C(a) ⊆ E(s,t)}` on the same states and valuation.
pub fn standard_translation(m: &WeightedModel) -> KripkeModel {
    let n = m.num_states();
    let mut k = KripkeModel::new(m.states().to_vec()).expect("weighted states are valid");
    for a in m.agents() {
        let caps = m.capability(a).expect("listed agent");
        let rows = (0..n)
            .map(|s| {
                let mut row = FixedBitSet::with_capacity(n);
                for t in 0..n {
                    if caps.is_subset(m.edge(s, t)) {
                        row.insert(t);
                    }
                }
                row
            })
            .collect();
        k.relations.insert(a.clone(), rows);
    }
    k.valuation = m.valuation.clone();
    k
}

/// Abilities are the agents themselves: `E(s,t) = {a | (s,t) ∈ R(a)}` and
/// `C(a) = {a}`.
pub fn reverse_translation(k: &KripkeModel) -> Result<WeightedModel, TranslateError> {
    let agents: Vec<_> = k.agents().cloned().collect();
    let mut m = WeightedModel::new(
        k.states().to_vec(),
        agents.iter().map(|a| a.as_str().to_string()).collect(),
    )?;
    let n = k.num_states();
    for (i, a) in agents.iter().enumerate() {
        let mut only = AbilitySet::EMPTY;
        only.insert(i);
        m.set_capability(a.clone(), only);
        let rows = k.relation(a).expect("listed agent");
        for (s, row) in rows.iter().enumerate() {
            for t in row.ones() {
                let mut label = m.edge(s, t);
                label.insert(i);
                m.set_edge(s, t, label);
            }
        }
    }
    debug_assert_eq!(m.num_states(), n);
    m.valuation = k.valuation.clone();
    m.normalize_valuation();
    Ok(m)
}

/// The name of the ability the lift adds: `__lift`, extended with
/// underscores until it is unused.
pub fn fresh_ability_name(m: &WeightedModel) -> String {
    let mut name = "__lift".to_string();
    while m.ability_index(&name).is_some() {
        name.push('_');
    }
    name
}

/// Adds one ability nobody has and no edge carries. Since `E(s,t)` never
/// contains it, no edge equals the enlarged ability set and the result is
/// positive; everything else is untouched, so truth is preserved.
pub fn similarity_lift(m: &WeightedModel) -> Result<WeightedModel, TranslateError> {
    if !m.validate().is_symmetric {
        return Err(TranslateError::NotSymmetric);
    }
    let mut abilities = m.abilities().to_vec();
    abilities.push(fresh_ability_name(m));
    let mut out = WeightedModel::new(m.states().to_vec(), abilities)?;
    out.edges = m.edges.clone();
    out.agents = m.agents.clone();
    out.capabilities = m.capabilities.clone();
    out.valuation = m.valuation.clone();
    Ok(out)
}
