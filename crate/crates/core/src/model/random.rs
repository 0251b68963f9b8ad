use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AbilitySet, KripkeModel, WeightedModel};
use crate::formula::Agent;

/// Bounds and shape flags for [`random_model`].
#[derive(Debug, Clone)]
pub struct RandomModelParams {
    pub max_states: usize,
    pub max_abilities: usize,
    pub agents: Vec<Agent>,
    pub props: Vec<String>,
    /// Sample unordered pairs and mirror them.
    pub force_symmetric: bool,
    /// Resample any off-diagonal label equal to the full ability set.
    pub force_positive: bool,
    /// Probability that an ability is on a given edge.
    pub label_density: f64,
}

impl RandomModelParams {
    pub fn new(max_states: usize, max_abilities: usize) -> Self {
        RandomModelParams {
            max_states,
            max_abilities,
            agents: ["a", "b", "c"].into_iter().map(Agent::from).collect(),
            props: vec!["p".into(), "q".into()],
            force_symmetric: false,
            force_positive: false,
            label_density: 0.5,
        }
    }

    pub fn similarity(mut self) -> Self {
        self.force_symmetric = true;
        self.force_positive = true;
        self
    }
}

fn random_set(rng: &mut impl Rng, k: usize, density: f64) -> AbilitySet {
    let mut set = AbilitySet::EMPTY;
    for i in 0..k {
        if rng.gen_bool(density) {
            set.insert(i);
        }
    }
    set
}

/// Deterministic in `seed`.
pub fn random_model(seed: u64, params: &RandomModelParams) -> WeightedModel {
    random_model_with(&mut ChaCha8Rng::seed_from_u64(seed), params)
}

/// Samples `|W|` in `1..=max_states` and `|A|` in `0..=max_abilities`, then
/// each label, capability and valuation bit independently.
pub fn random_model_with(rng: &mut impl Rng, params: &RandomModelParams) -> WeightedModel {
    assert!(params.max_states >= 1, "need room for at least one state");
    let k = rng.gen_range(0..=params.max_abilities.min(super::MAX_ABILITIES));
    let mut n = rng.gen_range(1..=params.max_states);
    // With A = ∅ every edge is labelled A, so positivity allows one state only.
    if params.force_positive && k == 0 {
        n = 1;
    }
    let mut m = WeightedModel::new(
        (0..n).map(|i| format!("w{i}")).collect(),
        (1..=k).map(|i| i.to_string()).collect(),
    )
    .expect("generated names are unique");
    let full = AbilitySet::full(k);
    for s in 0..n {
        let start = if params.force_symmetric { s } else { 0 };
        for t in start..n {
            let mut label = random_set(rng, k, params.label_density);
            while params.force_positive && s != t && label == full {
                label = random_set(rng, k, params.label_density);
            }
            m.set_edge(s, t, label);
            if params.force_symmetric {
                m.set_edge(t, s, label);
            }
        }
    }
    for a in &params.agents {
        let caps = random_set(rng, k, 0.5);
        m.set_capability(a.clone(), caps);
    }
    for p in &params.props {
        for s in 0..n {
            if rng.gen_bool(0.5) {
                m.set_prop(p, s, true);
            }
        }
    }
    m.normalize_valuation();
    m
}

/// A relational model with `1..=max_states` states and each pair in each
/// agent's relation with probability `density`.
pub fn random_kripke(
    rng: &mut impl Rng,
    max_states: usize,
    agents: &[Agent],
    props: &[String],
    density: f64,
    symmetric: bool,
) -> KripkeModel {
    let n = rng.gen_range(1..=max_states);
    let mut k = KripkeModel::new((0..n).map(|i| format!("w{i}")).collect()).expect("unique");
    for a in agents {
        k.add_agent(a.clone());
        for s in 0..n {
            let start = if symmetric { s } else { 0 };
            for t in start..n {
                if rng.gen_bool(density) {
                    k.add_pair(a, s, t);
                    if symmetric {
                        k.add_pair(a, t, s);
                    }
                }
            }
        }
    }
    for p in props {
        for s in 0..n {
            if rng.gen_bool(0.5) {
                k.set_prop(p, s, true);
            }
        }
    }
    k
}
