use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::{capability, pooled_capability, shared_capability, SemanticsError};
use crate::formula::{Agent, Formula, Group, GroupOp};
use crate::model::{AbilitySet, WeightedModel};

/// The set of states where a formula holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Truthset {
    pub formula: Formula,
    pub members: FixedBitSet,
}

impl Truthset {
    pub fn contains(&self, s: usize) -> bool {
        self.members.contains(s)
    }

    pub fn state_names<'m>(&self, m: &'m WeightedModel) -> Vec<&'m str> {
        self.members
            .ones()
            .map(|s| m.states()[s].as_str())
            .collect()
    }
}

/// Group tokens attached to edges for deciding common knowledge.
///
/// The token for `G` sits on `E_φ(s,t)` when some member of `G` cannot
/// distinguish `s` from `t`, and on `E_φ⁺(s,t)` when a non-empty path of
/// such edges leads from `s` to `t`. The full augmented label is
/// `E(s,t)` together with these tokens; the ability part is left in the model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedEdges {
    /// Groups of the `E` and `C` operators in `φ`, in token order.
    pub groups: Vec<Group>,
    n: usize,
    words: usize,
    e_phi: Vec<u64>,
    e_phi_plus: Vec<u64>,
}

impl AugmentedEdges {
    pub fn group_index(&self, g: &Group) -> Option<usize> {
        self.groups.iter().position(|h| h == g)
    }

    fn bit(v: &[u64], base: usize, g: usize) -> bool {
        v[base + g / 64] >> (g % 64) & 1 == 1
    }

    fn base(&self, s: usize, t: usize) -> usize {
        (s * self.n + t) * self.words
    }

    /// Token `g` on `E_φ(s,t)`.
    pub fn in_e_phi(&self, s: usize, t: usize, g: usize) -> bool {
        Self::bit(&self.e_phi, self.base(s, t), g)
    }

    /// Token `g` on `E_φ⁺(s,t)`.
    pub fn in_e_phi_plus(&self, s: usize, t: usize, g: usize) -> bool {
        Self::bit(&self.e_phi_plus, self.base(s, t), g)
    }

    pub fn e_phi_groups(&self, s: usize, t: usize) -> Vec<&Group> {
        (0..self.groups.len())
            .filter(|&g| self.in_e_phi(s, t, g))
            .map(|g| &self.groups[g])
            .collect()
    }

    pub fn e_phi_plus_groups(&self, s: usize, t: usize) -> Vec<&Group> {
        (0..self.groups.len())
            .filter(|&g| self.in_e_phi_plus(s, t, g))
            .map(|g| &self.groups[g])
            .collect()
    }
}

fn build_augmented(
    m: &WeightedModel,
    groups: Vec<Group>,
) -> Result<AugmentedEdges, SemanticsError> {
    let n = m.num_states();
    let words = groups.len().div_ceil(64).max(1);
    let member_caps: Vec<Vec<AbilitySet>> = groups
        .iter()
        .map(|g| g.members().iter().map(|a| capability(m, a)).collect())
        .collect::<Result<_, _>>()?;
    let mut e_phi = vec![0u64; n * n * words];
    for s in 0..n {
        for t in 0..n {
            let label = m.edge(s, t);
            let base = (s * n + t) * words;
            for (g, caps) in member_caps.iter().enumerate() {
                if caps.iter().any(|c| c.is_subset(label)) {
                    e_phi[base + g / 64] |= 1 << (g % 64);
                }
            }
        }
    }
    // Transitive closure of every token's relation at once: a token reaches
    // (i,j) through k only if it is on both (i,k) and (k,j).
    let mut plus = e_phi.clone();
    for k in 0..n {
        for i in 0..n {
            let ik = (i * n + k) * words;
            for w in 0..words {
                let via = plus[ik + w];
                if via == 0 {
                    continue;
                }
                for j in 0..n {
                    let kj = plus[(k * n + j) * words + w];
                    plus[(i * n + j) * words + w] |= via & kj;
                }
            }
        }
    }
    Ok(AugmentedEdges {
        groups,
        n,
        words,
        e_phi,
        e_phi_plus: plus,
    })
}

/// `E_φ` and `E_φ⁺` for the `E`/`C` groups occurring in `φ`.
pub fn augment_edges(m: &WeightedModel, phi: &Formula) -> Result<AugmentedEdges, SemanticsError> {
    let mut groups: Vec<Group> = phi.groups_of(GroupOp::Common).into_iter().collect();
    for g in phi.groups_of(GroupOp::Everyone) {
        if !groups.contains(&g) {
            groups.push(g);
        }
    }
    build_augmented(m, groups)
}

/// How common knowledge is decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommonStrategy {
    /// Guard on membership of `G` in `E_φ⁺`.
    Augmented,
    /// Intersect `E_G^n ψ` for `n = 1..=|W|`.
    Iterated,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    Prop(String),
    Not(usize),
    Implies(usize, usize),
    Know(Agent, usize),
    Everyone(Group, usize),
    Common(Group, usize),
    Distributed(Group, usize),
    Mutual(Group, usize),
}

/// A formula flattened into a DAG of distinct subformulas, children first,
/// ready to be evaluated on many models.
#[derive(Debug, Clone)]
pub struct Evaluator {
    formula: Formula,
    nodes: Vec<Node>,
    common_groups: Vec<Group>,
}

impl Evaluator {
    pub fn new(phi: &Formula) -> Self {
        let mut ids: HashMap<Node, usize> = HashMap::new();
        let mut nodes = Vec::new();
        Self::compile(phi, &mut ids, &mut nodes);
        Evaluator {
            formula: phi.clone(),
            nodes,
            common_groups: phi.groups_of(GroupOp::Common).into_iter().collect(),
        }
    }

    /// Hash-conses on `(operator, child ids)` so that each lookup is O(1)
    /// regardless of subformula size.
    fn compile(f: &Formula, ids: &mut HashMap<Node, usize>, nodes: &mut Vec<Node>) -> usize {
        let node = match f {
            Formula::Prop(p) => Node::Prop(p.clone()),
            Formula::Not(a) => Node::Not(Self::compile(a, ids, nodes)),
            Formula::Implies(a, b) => {
                let x = Self::compile(a, ids, nodes);
                let y = Self::compile(b, ids, nodes);
                Node::Implies(x, y)
            }
            Formula::Know(ag, a) => Node::Know(ag.clone(), Self::compile(a, ids, nodes)),
            Formula::Everyone(g, a) => Node::Everyone(g.clone(), Self::compile(a, ids, nodes)),
            Formula::Common(g, a) => Node::Common(g.clone(), Self::compile(a, ids, nodes)),
            Formula::Distributed(g, a) => {
                Node::Distributed(g.clone(), Self::compile(a, ids, nodes))
            }
            Formula::Mutual(g, a) => Node::Mutual(g.clone(), Self::compile(a, ids, nodes)),
        };
        if let Some(&i) = ids.get(&node) {
            return i;
        }
        nodes.push(node.clone());
        ids.insert(node, nodes.len() - 1);
        nodes.len() - 1
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    /// Number of distinct subformulas.
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn eval(&self, m: &WeightedModel) -> Result<FixedBitSet, SemanticsError> {
        self.eval_with(m, CommonStrategy::Augmented)
    }

    pub fn eval_with(
        &self,
        m: &WeightedModel,
        strategy: CommonStrategy,
    ) -> Result<FixedBitSet, SemanticsError> {
        let n = m.num_states();
        let augmented = if strategy == CommonStrategy::Augmented && !self.common_groups.is_empty() {
            Some(build_augmented(m, self.common_groups.clone())?)
        } else {
            None
        };
        let mut sets: Vec<FixedBitSet> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let set = match node {
                Node::Prop(p) => m
                    .prop_states(p)
                    .cloned()
                    .unwrap_or_else(|| FixedBitSet::with_capacity(n)),
                Node::Not(a) => {
                    let mut s = sets[*a].clone();
                    s.toggle_range(..);
                    s
                }
                Node::Implies(a, b) => {
                    let mut s = sets[*a].clone();
                    s.toggle_range(..);
                    s.union_with(&sets[*b]);
                    s
                }
                Node::Know(ag, a) => box_by(m, capability(m, ag)?, &sets[*a]),
                Node::Everyone(g, a) => everyone(m, g, &sets[*a])?,
                Node::Distributed(g, a) => box_by(m, pooled_capability(m, g)?, &sets[*a]),
                Node::Mutual(g, a) => box_by(m, shared_capability(m, g)?, &sets[*a]),
                Node::Common(g, a) => match &augmented {
                    Some(aug) => {
                        let gi = aug.group_index(g).expect("common groups are tokens");
                        box_where(n, |s, t| aug.in_e_phi_plus(s, t, gi), &sets[*a])
                    }
                    None => {
                        let mut layer = everyone(m, g, &sets[*a])?;
                        let mut acc = layer.clone();
                        for _ in 1..n {
                            layer = everyone(m, g, &layer)?;
                            acc.intersect_with(&layer);
                        }
                        acc
                    }
                },
            };
            sets.push(set);
        }
        Ok(sets.pop().expect("at least one node"))
    }
}

/// `{s | ∀t: guard(s,t) ⇒ t ∈ body}`.
fn box_where(n: usize, guard: impl Fn(usize, usize) -> bool, body: &FixedBitSet) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(n);
    for s in 0..n {
        if (0..n).all(|t| !guard(s, t) || body.contains(t)) {
            out.insert(s);
        }
    }
    out
}

fn box_by(m: &WeightedModel, caps: AbilitySet, body: &FixedBitSet) -> FixedBitSet {
    box_where(m.num_states(), |s, t| caps.is_subset(m.edge(s, t)), body)
}

fn everyone(
    m: &WeightedModel,
    g: &Group,
    body: &FixedBitSet,
) -> Result<FixedBitSet, SemanticsError> {
    let mut acc = FixedBitSet::with_capacity(m.num_states());
    acc.insert_range(..);
    for a in g.members() {
        acc.intersect_with(&box_by(m, capability(m, a)?, body));
    }
    Ok(acc)
}

/// Truthset via the bottom-up algorithm with `E_φ⁺` for common knowledge.
pub fn truthset(m: &WeightedModel, phi: &Formula) -> Result<Truthset, SemanticsError> {
    Ok(Truthset {
        formula: phi.clone(),
        members: Evaluator::new(phi).eval(m)?,
    })
}

/// Truthset with common knowledge computed as `⋂_{n≤|W|} E_G^n ψ`.
pub fn truthset_by_iteration(m: &WeightedModel, phi: &Formula) -> Result<Truthset, SemanticsError> {
    Ok(Truthset {
        formula: phi.clone(),
        members: Evaluator::new(phi).eval_with(m, CommonStrategy::Iterated)?,
    })
}
