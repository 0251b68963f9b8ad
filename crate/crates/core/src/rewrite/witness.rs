use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;

use super::{AgentExtension, OperatorKey, RewriteError};
use crate::formula::Agent;
use crate::model::{AbilitySet, KripkeModel, WeightedModel};

fn cap(m: &WeightedModel, a: &Agent) -> Result<AbilitySet, RewriteError> {
    m.capability(a)
        .ok_or_else(|| RewriteError::UnknownAgent(a.clone()))
}

fn operator_capability(m: &WeightedModel, key: &OperatorKey) -> Result<AbilitySet, RewriteError> {
    Ok(match key {
        OperatorKey::Know(a) => cap(m, a)?,
        OperatorKey::Distributed(g) => g
            .members()
            .iter()
            .try_fold(AbilitySet::EMPTY, |acc, a| Ok(acc.union(cap(m, a)?)))?,
        OperatorKey::Mutual(g) => g
            .members()
            .iter()
            .try_fold(AbilitySet(u64::MAX), |acc, a| {
                Ok(acc.intersection(cap(m, a)?))
            })?,
    })
}

/// `C₂`: `f(K_b) ↦ C(b)`, `f(D_G) ↦ ⋃C`, `f(M_G) ↦ ⋂C`; original agents keep
/// their capabilities.
pub fn extend_capabilities_rho(
    m: &WeightedModel,
    ext: &AgentExtension,
) -> Result<WeightedModel, RewriteError> {
    let mut out = m.clone();
    for (key, fresh) in &ext.fresh {
        out.set_capability(fresh.clone(), operator_capability(m, key)?);
    }
    Ok(out)
}

/// As [`extend_capabilities_rho`], plus `C₂(o) = ∅`.
pub fn extend_capabilities_tau(
    m: &WeightedModel,
    ext: &AgentExtension,
) -> Result<WeightedModel, RewriteError> {
    let mut out = extend_capabilities_rho(m, ext)?;
    if let Some(o) = &ext.extra {
        out.set_capability(o.clone(), AbilitySet::EMPTY);
    }
    Ok(out)
}

/// Per-agent reflexive transitive closure.
pub fn refl_trans_closure(k: &KripkeModel) -> KripkeModel {
    let mut out = k.clone();
    let n = k.num_states();
    for rows in out.relations.values_mut() {
        for (s, row) in rows.iter_mut().enumerate() {
            row.insert(s);
        }
        for mid in 0..n {
            let via = rows[mid].clone();
            for row in rows.iter_mut() {
                if row.contains(mid) {
                    row.union_with(&via);
                }
            }
        }
    }
    out
}

/// Per-agent symmetric closure.
pub fn symmetric_closure(k: &KripkeModel) -> KripkeModel {
    let mut out = k.clone();
    for rows in out.relations.values_mut() {
        let original = rows.clone();
        for (s, row) in original.iter().enumerate() {
            for t in row.ones() {
                rows[t].insert(s);
            }
        }
    }
    out
}

/// `E′(s,t) = E(s,t) ∪ E(t,s)`.
pub fn symmetrize(m: &WeightedModel) -> WeightedModel {
    let mut out = m.clone();
    let n = m.num_states();
    for s in 0..n {
        for t in 0..n {
            out.set_edge(s, t, m.edge(s, t).union(m.edge(t, s)));
        }
    }
    out
}

fn reachable(n: usize, s: usize, step: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    let mut seen = FixedBitSet::with_capacity(n);
    seen.insert(s);
    let mut stack = vec![s];
    while let Some(u) = stack.pop() {
        for v in 0..n {
            if !seen.contains(v) && step(u, v) {
                seen.insert(v);
                stack.push(v);
            }
        }
    }
    seen.ones().collect()
}

/// The submodel generated by `s` under the relation of `M_ag` — the
/// largest relation any operator over `ag` quantifies over. Returns the
/// submodel and the new index of `s`.
pub fn generated_submodel(
    m: &WeightedModel,
    s: usize,
    ag: &BTreeSet<Agent>,
) -> Result<(WeightedModel, usize), RewriteError> {
    let guard = if ag.is_empty() {
        None
    } else {
        Some(ag.iter().try_fold(AbilitySet(u64::MAX), |acc, a| {
            Ok(acc.intersection(cap(m, a)?))
        })?)
    };
    let keep = match guard {
        Some(g) => reachable(m.num_states(), s, |u, v| g.is_subset(m.edge(u, v))),
        None => vec![s],
    };
    let at = keep.iter().position(|&x| x == s).expect("s is kept");
    Ok((m.restrict(&keep), at))
}

/// The submodel generated by `s` under `⋃_{a∈ag} R(a)`.
pub fn generated_kripke_submodel(
    k: &KripkeModel,
    s: usize,
    ag: &BTreeSet<Agent>,
) -> (KripkeModel, usize) {
    let keep = reachable(k.num_states(), s, |u, v| {
        ag.iter().any(|a| k.has_pair(a, u, v))
    });
    let at = keep.iter().position(|&x| x == s).expect("s is kept");
    (k.restrict(&keep), at)
}
