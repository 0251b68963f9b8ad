use fixedbitset::FixedBitSet;

use super::SemanticsError;
use crate::formula::{Agent, Formula, Group};
use crate::model::KripkeModel;

fn relation<'m>(k: &'m KripkeModel, a: &Agent) -> Result<&'m [FixedBitSet], SemanticsError> {
    k.relation(a)
        .ok_or_else(|| SemanticsError::UnknownAgent(a.clone()))
}

/// Successor rows of `⋂_{a∈G} R(a)`.
fn intersection(k: &KripkeModel, g: &Group) -> Result<Vec<FixedBitSet>, SemanticsError> {
    let n = k.num_states();
    let mut rows: Vec<FixedBitSet> = (0..n)
        .map(|_| {
            let mut r = FixedBitSet::with_capacity(n);
            r.insert_range(..);
            r
        })
        .collect();
    for a in g.members() {
        for (row, r) in rows.iter_mut().zip(relation(k, a)?) {
            row.intersect_with(r);
        }
    }
    Ok(rows)
}

/// Successor rows of the transitive closure of `⋃_{a∈G} R(a)`.
fn union_plus(k: &KripkeModel, g: &Group) -> Result<Vec<FixedBitSet>, SemanticsError> {
    let n = k.num_states();
    let mut rows: Vec<FixedBitSet> = (0..n).map(|_| FixedBitSet::with_capacity(n)).collect();
    for a in g.members() {
        for (row, r) in rows.iter_mut().zip(relation(k, a)?) {
            row.union_with(r);
        }
    }
    for mid in 0..n {
        let via = rows[mid].clone();
        for row in rows.iter_mut() {
            if row.contains(mid) {
                row.union_with(&via);
            }
        }
    }
    Ok(rows)
}

fn box_rows(rows: &[FixedBitSet], body: &FixedBitSet) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(rows.len());
    for (s, row) in rows.iter().enumerate() {
        if row.is_subset(body) {
            out.insert(s);
        }
    }
    out
}

/// States of a relational model where `φ` holds. `M_G` has no relational
/// reading and is rejected.
pub fn kripke_truthset(k: &KripkeModel, phi: &Formula) -> Result<FixedBitSet, SemanticsError> {
    let n = k.num_states();
    Ok(match phi {
        Formula::Prop(p) => k
            .prop_states(p)
            .cloned()
            .unwrap_or_else(|| FixedBitSet::with_capacity(n)),
        Formula::Not(a) => {
            let mut s = kripke_truthset(k, a)?;
            s.toggle_range(..);
            s
        }
        Formula::Implies(a, b) => {
            let mut s = kripke_truthset(k, a)?;
            s.toggle_range(..);
            s.union_with(&kripke_truthset(k, b)?);
            s
        }
        Formula::Know(a, body) => box_rows(relation(k, a)?, &kripke_truthset(k, body)?),
        Formula::Everyone(g, body) => {
            let inner = kripke_truthset(k, body)?;
            let mut acc = FixedBitSet::with_capacity(n);
            acc.insert_range(..);
            for a in g.members() {
                acc.intersect_with(&box_rows(relation(k, a)?, &inner));
            }
            acc
        }
        Formula::Common(g, body) => box_rows(&union_plus(k, g)?, &kripke_truthset(k, body)?),
        Formula::Distributed(g, body) => box_rows(&intersection(k, g)?, &kripke_truthset(k, body)?),
        Formula::Mutual(..) => return Err(SemanticsError::UnsupportedOperator("M")),
    })
}

pub fn kripke_satisfies(k: &KripkeModel, s: &str, phi: &Formula) -> Result<bool, SemanticsError> {
    let i = k
        .state_index(s)
        .ok_or_else(|| SemanticsError::UnknownState(s.to_string()))?;
    Ok(kripke_truthset(k, phi)?.contains(i))
}
