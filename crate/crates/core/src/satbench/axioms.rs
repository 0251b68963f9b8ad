use std::fmt;
use std::str::FromStr;

use serde_json::json;

use crate::formula::{Agent, Formula, Group, LanguageTag};
use crate::model::WeightedModel;
use crate::semantics::Evaluator;

/// One of the sixteen systems `K(χ)` / `KB(χ)`, `χ ⊆ {C, D, M}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SystemId {
    /// `KB` base (similarity models) rather than `K` (all models).
    pub symmetric: bool,
    pub language: LanguageTag,
}

impl SystemId {
    pub fn all() -> Vec<SystemId> {
        [false, true]
            .into_iter()
            .flat_map(|symmetric| {
                LanguageTag::all()
                    .into_iter()
                    .map(move |language| SystemId {
                        symmetric,
                        language,
                    })
            })
            .collect()
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.symmetric { "KB" } else { "K" })?;
        let l = self.language;
        if l.has_c || l.has_d || l.has_m {
            f.write_str("(")?;
            for (on, c) in [(l.has_c, "C"), (l.has_d, "D"), (l.has_m, "M")] {
                if on {
                    f.write_str(c)?;
                }
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Accepts `K`, `KB`, `K(CD)`, `KB(CDM)` and the unparenthesised `KCD`.
impl FromStr for SystemId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("unknown system {s:?}");
        let (symmetric, rest) = if let Some(r) = s.strip_prefix("KB") {
            (true, r)
        } else if let Some(r) = s.strip_prefix('K') {
            (false, r)
        } else {
            return Err(bad());
        };
        let rest = match rest.strip_prefix('(') {
            Some(r) => r.strip_suffix(')').ok_or_else(bad)?,
            None => rest,
        };
        let mut language = LanguageTag::EL;
        let mut last = ' ';
        for c in rest.chars() {
            // Letters must be distinct and in C, D, M order.
            if c <= last {
                return Err(bad());
            }
            match c {
                'C' => language.has_c = true,
                'D' => language.has_d = true,
                'M' => language.has_m = true,
                _ => return Err(bad()),
            }
            last = c;
        }
        Ok(SystemId {
            symmetric,
            language,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomBody {
    Axiom(Formula),
    /// The C2 rule: from a valid premise infer the conclusion.
    Rule {
        premise: Formula,
        conclusion: Formula,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomInstance {
    pub schema: &'static str,
    pub body: AxiomBody,
}

impl AxiomInstance {
    fn axiom(schema: &'static str, f: Formula) -> Self {
        AxiomInstance {
            schema,
            body: AxiomBody::Axiom(f),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match &self.body {
            AxiomBody::Axiom(f) => json!({"schema": self.schema, "instance": f.to_string()}),
            AxiomBody::Rule {
                premise,
                conclusion,
            } => json!({
                "schema": self.schema,
                "premise": premise.to_string(),
                "conclusion": conclusion.to_string(),
            }),
        }
    }
}

fn dist(op: impl Fn(Formula) -> Formula, phi: &Formula, psi: &Formula) -> Formula {
    Formula::implies(
        op(Formula::implies(phi.clone(), psi.clone())),
        Formula::implies(op(phi.clone()), op(psi.clone())),
    )
}

fn b(op: impl Fn(Formula) -> Formula, phi: &Formula) -> Formula {
    Formula::implies(phi.clone(), op(Formula::not(op(Formula::not(phi.clone())))))
}

/// Every instance of the system's axiom schemata (and of rule C2) with
/// formulas drawn from `pool`, agents from `agents` and groups from `groups`.
pub fn instantiate_axioms(
    system: SystemId,
    pool: &[Formula],
    agents: &[Agent],
    groups: &[Group],
) -> Vec<AxiomInstance> {
    let mut out = Vec::new();
    let l = system.language;
    let k = |a: &Agent| {
        let a = a.clone();
        move |f| Formula::know(a.clone(), f)
    };
    let d = |g: &Group| {
        let g = g.clone();
        move |f| Formula::distributed(g.clone(), f)
    };
    let m = |g: &Group| {
        let g = g.clone();
        move |f| Formula::mutual(g.clone(), f)
    };
    for phi in pool {
        for psi in pool {
            for a in agents {
                out.push(AxiomInstance::axiom("K", dist(k(a), phi, psi)));
            }
            if l.has_d {
                for g in groups {
                    out.push(AxiomInstance::axiom("K_D", dist(d(g), phi, psi)));
                }
            }
            if l.has_m {
                for g in groups {
                    out.push(AxiomInstance::axiom("K_M", dist(m(g), phi, psi)));
                }
            }
            if l.has_c {
                for g in groups {
                    let premise = Formula::implies(
                        phi.clone(),
                        Formula::conjunction(
                            g.members()
                                .iter()
                                .map(|a| {
                                    Formula::know(a.clone(), Formula::and(phi.clone(), psi.clone()))
                                })
                                .collect::<Vec<_>>(),
                        )
                        .expect("nonempty"),
                    );
                    let conclusion =
                        Formula::implies(phi.clone(), Formula::common(g.clone(), psi.clone()));
                    out.push(AxiomInstance {
                        schema: "C2",
                        body: AxiomBody::Rule {
                            premise,
                            conclusion,
                        },
                    });
                }
            }
        }
        if system.symmetric {
            for a in agents {
                out.push(AxiomInstance::axiom("B", b(k(a), phi)));
            }
        }
        if l.has_c {
            for g in groups {
                let c = Formula::common(g.clone(), phi.clone());
                let rhs = Formula::conjunction(
                    g.members()
                        .iter()
                        .map(|a| Formula::know(a.clone(), Formula::and(phi.clone(), c.clone())))
                        .collect::<Vec<_>>(),
                )
                .expect("nonempty");
                out.push(AxiomInstance::axiom("C1", Formula::implies(c, rhs)));
            }
        }
        if l.has_d {
            for a in agents {
                let single = Group::singleton(a.clone());
                out.push(AxiomInstance::axiom(
                    "D1",
                    Formula::iff(d(&single)(phi.clone()), k(a)(phi.clone())),
                ));
            }
            for g in groups {
                for h in groups.iter().filter(|h| g.is_subset(h)) {
                    out.push(AxiomInstance::axiom(
                        "D2",
                        Formula::implies(d(g)(phi.clone()), d(h)(phi.clone())),
                    ));
                }
                if system.symmetric {
                    out.push(AxiomInstance::axiom("BD", b(d(g), phi)));
                }
            }
        }
        if l.has_m {
            for a in agents {
                let single = Group::singleton(a.clone());
                out.push(AxiomInstance::axiom(
                    "M1",
                    Formula::iff(m(&single)(phi.clone()), k(a)(phi.clone())),
                ));
            }
            for g in groups {
                for h in groups.iter().filter(|h| h.is_subset(g)) {
                    out.push(AxiomInstance::axiom(
                        "M2",
                        Formula::implies(m(g)(phi.clone()), m(h)(phi.clone())),
                    ));
                }
                if system.symmetric {
                    out.push(AxiomInstance::axiom("BM", b(m(g), phi)));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub instance: AxiomInstance,
    pub model_index: usize,
    pub model: WeightedModel,
    /// The falsifying state; `None` for a rule whose premise holds
    /// everywhere while its conclusion fails somewhere.
    pub state: Option<String>,
}

impl Violation {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = self.instance.to_json();
        let obj = v.as_object_mut().expect("object");
        obj.insert("model_index".into(), json!(self.model_index));
        obj.insert("state".into(), json!(self.state));
        obj.insert("model".into(), self.model.to_json_value());
        v
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SoundnessReport {
    pub instances: usize,
    pub models: usize,
    pub violations: Vec<Violation>,
}

impl SoundnessReport {
    pub fn is_sound(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every instance on every model: axioms at every state, rules
/// model-locally (premise true everywhere ⇒ conclusion true everywhere).
/// Only the first violation per instance is recorded.
pub fn soundness_sweep(instances: &[AxiomInstance], models: &[WeightedModel]) -> SoundnessReport {
    let mut report = SoundnessReport {
        instances: instances.len(),
        models: models.len(),
        violations: Vec::new(),
    };
    for inst in instances {
        let found = match &inst.body {
            AxiomBody::Axiom(f) => {
                let ev = Evaluator::new(f);
                models.iter().enumerate().find_map(|(i, m)| {
                    let set = ev.eval(m).ok()?;
                    (0..m.num_states())
                        .find(|&s| !set.contains(s))
                        .map(|s| (i, Some(m.states()[s].clone())))
                })
            }
            AxiomBody::Rule {
                premise,
                conclusion,
            } => {
                let (pe, ce) = (Evaluator::new(premise), Evaluator::new(conclusion));
                models.iter().enumerate().find_map(|(i, m)| {
                    let n = m.num_states();
                    let valid = |e: &Evaluator| e.eval(m).ok().map(|s| s.count_ones(..) == n);
                    (valid(&pe)? && !valid(&ce)?).then_some((i, None))
                })
            }
        };
        if let Some((model_index, state)) = found {
            report.violations.push(Violation {
                instance: inst.clone(),
                model_index,
                model: models[model_index].clone(),
                state,
            });
        }
    }
    report
}
