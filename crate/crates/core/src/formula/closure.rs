use std::collections::BTreeSet;

use super::{Formula, FormulaError, Group};

/// `∼ψ`: strips one negation, or adds one.
pub fn neg_dual(f: &Formula) -> Formula {
    match f {
        Formula::Not(inner) => (**inner).clone(),
        other => Formula::not(other.clone()),
    }
}

/// Formulas that a single member of the closure forces into it.
fn consequences(f: &Formula, groups: &BTreeSet<Group>) -> Vec<Formula> {
    let mut out: Vec<Formula> = f.children().into_iter().cloned().collect();
    out.push(neg_dual(f));
    match f {
        Formula::Know(a, body) => {
            let g = Group::singleton(a.clone());
            out.push(Formula::distributed(g.clone(), (**body).clone()));
            out.push(Formula::mutual(g, (**body).clone()));
        }
        Formula::Distributed(g, body) => {
            if let Some(a) = g.as_singleton() {
                out.push(Formula::know(a.clone(), (**body).clone()));
            }
            for h in groups.iter().filter(|h| g.is_subset(h)) {
                out.push(Formula::distributed(h.clone(), (**body).clone()));
            }
        }
        Formula::Common(g, body) => {
            for a in g.members() {
                out.push(Formula::know(a.clone(), (**body).clone()));
                out.push(Formula::know(a.clone(), f.clone()));
            }
        }
        Formula::Mutual(g, body) => {
            for a in g.members() {
                out.push(Formula::know(a.clone(), (**body).clone()));
            }
            for h in groups.iter().filter(|h| h.is_subset(g)) {
                out.push(Formula::mutual(h.clone(), (**body).clone()));
            }
        }
        _ => {}
    }
    out
}

/// The closure `cl(φ)`: the least set containing `φ` that is closed under
/// subformulas, `∼`, and the group-operator clauses. The subgroup and
/// supergroup clauses only range over groups that occur in `φ`.
///
/// Everyone's-knowledge nodes are rejected; expand them first.
pub fn closure(phi: &Formula) -> Result<BTreeSet<Formula>, FormulaError> {
    if phi.contains_everyone() {
        return Err(FormulaError::EveryoneNode);
    }
    let groups = phi.groups();
    let mut set = BTreeSet::new();
    let mut work = vec![phi.clone()];
    while let Some(f) = work.pop() {
        if set.contains(&f) {
            continue;
        }
        for g in consequences(&f, &groups) {
            if !set.contains(&g) {
                work.push(g);
            }
        }
        set.insert(f);
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_open;

    /// Naive round-based fixpoint, written independently of the worklist.
    fn closure_by_rounds(phi: &Formula) -> BTreeSet<Formula> {
        let groups = phi.groups();
        let mut set: BTreeSet<Formula> = [phi.clone()].into();
        loop {
            let mut next = set.clone();
            for f in &set {
                next.extend(f.subformulas());
                next.insert(match f {
                    Formula::Not(x) => (**x).clone(),
                    x => Formula::not(x.clone()),
                });
                match f {
                    Formula::Know(a, x) => {
                        let g = Group::new([a.clone()]).unwrap();
                        next.insert(Formula::Distributed(g.clone(), x.clone()));
                        next.insert(Formula::Mutual(g, x.clone()));
                    }
                    Formula::Distributed(g, x) => {
                        if g.len() == 1 {
                            next.insert(Formula::Know(g.members()[0].clone(), x.clone()));
                        }
                        for h in &groups {
                            if g.members().iter().all(|m| h.members().contains(m)) {
                                next.insert(Formula::Distributed(h.clone(), x.clone()));
                            }
                        }
                    }
                    Formula::Common(g, x) => {
                        for a in g.members() {
                            next.insert(Formula::Know(a.clone(), x.clone()));
                            next.insert(Formula::Know(a.clone(), Box::new(f.clone())));
                        }
                    }
                    Formula::Mutual(g, x) => {
                        for a in g.members() {
                            next.insert(Formula::Know(a.clone(), x.clone()));
                        }
                        for h in &groups {
                            if h.members().iter().all(|m| g.members().contains(m)) {
                                next.insert(Formula::Mutual(h.clone(), x.clone()));
                            }
                        }
                    }
                    _ => {}
                }
            }
            if next.len() == set.len() {
                return set;
            }
            set = next;
        }
    }

    fn set_of(texts: &[&str]) -> BTreeSet<Formula> {
        texts.iter().map(|t| parse_open(t).unwrap()).collect()
    }

    #[test]
    fn closure_of_knowledge() {
        let got = closure(&parse_open("K{a} p").unwrap()).unwrap();
        let want = set_of(&[
            "K{a} p", "~K{a} p", "p", "~p", "D{a} p", "~D{a} p", "M{a} p", "~M{a} p",
        ]);
        assert_eq!(got, want);
        assert_eq!(got.len(), 8);
    }

    #[test]
    fn closure_of_atom_and_double_negation() {
        assert_eq!(
            closure(&parse_open("p").unwrap()).unwrap(),
            set_of(&["p", "~p"])
        );
        assert_eq!(
            closure(&parse_open("~~p").unwrap()).unwrap(),
            set_of(&["~~p", "~p", "p"])
        );
    }

    #[test]
    fn closure_rejects_everyone() {
        assert_eq!(
            closure(&parse_open("E{a,b} p").unwrap()),
            Err(FormulaError::EveryoneNode)
        );
    }

    #[test]
    fn closure_agrees_with_round_oracle() {
        for text in [
            "K{a} p",
            "C{a,b} (p -> D{a} q)",
            "M{a,b,c} ~K{b} p",
            "(D{a} p -> D{a,b} M{b,c} q)",
            "~C{a} M{a,b} D{b} p",
        ] {
            let f = parse_open(text).unwrap();
            assert_eq!(closure(&f).unwrap(), closure_by_rounds(&f), "{text}");
        }
    }

    #[test]
    fn neg_dual_examples() {
        let p = Formula::prop("p");
        assert_eq!(neg_dual(&p), Formula::not(p.clone()));
        assert_eq!(neg_dual(&Formula::not(p.clone())), p);
        assert_eq!(
            neg_dual(&Formula::not(Formula::not(p.clone()))),
            Formula::not(p)
        );
    }
}
