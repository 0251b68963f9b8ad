//! Satisfiability-preserving rewritings between the languages, and the
//! model constructions that witness them.
//!
//! Every rule first expands `E_G ψ` into `⋀_{a∈G} K_a ψ`; the guard sets
//! and fresh agents are then computed on the expanded formula.

mod witness;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::json;
use thiserror::Error;

use crate::formula::{Agent, Formula, Group, LanguageTag};

pub use witness::{
    extend_capabilities_rho, extend_capabilities_tau, generated_kripke_submodel,
    generated_submodel, refl_trans_closure, symmetric_closure, symmetrize,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("{rule} expects an {expected} formula, got {found}")]
    WrongLanguage {
        rule: Rule,
        expected: LanguageTag,
        found: LanguageTag,
    },
    #[error("{rule} needs a nonempty agent universe")]
    NoAgents { rule: Rule },
    #[error("{rule} produced an {found} formula instead of {expected}")]
    OutputLanguage {
        rule: Rule,
        expected: LanguageTag,
        found: LanguageTag,
    },
    #[error("the model has no capability for agent {0}")]
    UnknownAgent(Agent),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Rho,
    RhoPrime,
    RhoT,
    RhoS,
    RhoM,
    Tau,
    TauPrime,
}

impl Rule {
    pub const ALL: [Rule; 7] = [
        Rule::Rho,
        Rule::RhoPrime,
        Rule::RhoT,
        Rule::RhoS,
        Rule::RhoM,
        Rule::Tau,
        Rule::TauPrime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Rho => "rho",
            Rule::RhoPrime => "rho-prime",
            Rule::RhoT => "rho-t",
            Rule::RhoS => "rho-s",
            Rule::RhoM => "rho-m",
            Rule::Tau => "tau",
            Rule::TauPrime => "tau-prime",
        }
    }

    pub fn from_name(name: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.name() == name)
    }

    /// Language the input must belong to.
    pub fn source(self) -> LanguageTag {
        match self {
            Rule::Rho | Rule::RhoPrime => LanguageTag::ELCDM,
            Rule::RhoT | Rule::RhoS => LanguageTag::ELC,
            Rule::RhoM | Rule::Tau | Rule::TauPrime => LanguageTag::ELDM,
        }
    }

    /// Language the output is guaranteed to belong to.
    pub fn target(self) -> LanguageTag {
        match self {
            Rule::Rho | Rule::RhoPrime | Rule::RhoT | Rule::RhoS => LanguageTag::ELC,
            Rule::RhoM => LanguageTag::ELDM,
            Rule::Tau | Rule::TauPrime => LanguageTag::ELD,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A modal operator over the original agents that gets its own fresh agent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OperatorKey {
    Know(Agent),
    Distributed(Group),
    Mutual(Group),
}

impl OperatorKey {
    fn base_name(&self) -> String {
        let join = |g: &Group| {
            g.members()
                .iter()
                .map(Agent::as_str)
                .collect::<Vec<_>>()
                .join("_")
        };
        match self {
            OperatorKey::Know(a) => format!("K__{a}"),
            OperatorKey::Distributed(g) => format!("D__{}", join(g)),
            OperatorKey::Mutual(g) => format!("M__{}", join(g)),
        }
    }
}

impl fmt::Display for OperatorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorKey::Know(a) => write!(f, "K{{{a}}}"),
            OperatorKey::Distributed(g) => write!(f, "D{g}"),
            OperatorKey::Mutual(g) => write!(f, "M{g}"),
        }
    }
}

/// `Ag⁺`: the original agents, the fresh agent `f(·)` of each operator, and
/// optionally the extra agent `o`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AgentExtension {
    pub base: BTreeSet<Agent>,
    pub fresh: BTreeMap<OperatorKey, Agent>,
    pub extra: Option<Agent>,
}

impl AgentExtension {
    /// Assigns names in key order; a name already taken gets `_` appended
    /// until it is free.
    fn build(base: BTreeSet<Agent>, keys: BTreeSet<OperatorKey>, with_extra: bool) -> Self {
        let mut taken: BTreeSet<String> = base.iter().map(|a| a.as_str().to_string()).collect();
        let mut claim = |mut name: String| {
            while taken.contains(&name) {
                name.push('_');
            }
            taken.insert(name.clone());
            Agent::new(name)
        };
        let fresh = keys
            .into_iter()
            .map(|k| {
                let name = claim(k.base_name());
                (k, name)
            })
            .collect();
        let extra = with_extra.then(|| claim("o__".to_string()));
        AgentExtension { base, fresh, extra }
    }

    pub fn get(&self, key: &OperatorKey) -> Option<&Agent> {
        self.fresh.get(key)
    }

    fn f(&self, key: &OperatorKey) -> Agent {
        self.fresh
            .get(key)
            .cloned()
            .expect("every operator in the formula has a fresh agent")
    }

    /// All agents of `Ag⁺`, including `o` when present.
    pub fn all_agents(&self) -> BTreeSet<Agent> {
        let mut out = self.base.clone();
        out.extend(self.fresh.values().cloned());
        out.extend(self.extra.clone());
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "base": self.base.iter().map(Agent::as_str).collect::<Vec<_>>(),
            "fresh": self
                .fresh
                .iter()
                .map(|(k, v)| (k.to_string(), json!(v.as_str())))
                .collect::<serde_json::Map<_, _>>(),
            "extra": self.extra.as_ref().map(Agent::as_str),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteResult {
    pub rule: Rule,
    pub output: Formula,
    pub extension: AgentExtension,
    /// The side conditions conjoined to the (rewritten) input, in order.
    pub guard_set: Vec<Formula>,
}

impl RewriteResult {
    /// The JSON sidecar printed next to the rewritten formula.
    pub fn sidecar(&self) -> serde_json::Value {
        let mut v = self.extension.to_json();
        let obj = v.as_object_mut().expect("object");
        obj.insert("rule".into(), json!(self.rule.name()));
        obj.insert("guards".into(), json!(self.guard_set.len()));
        obj.insert("language".into(), json!(self.output.classify().to_string()));
        v
    }
}

fn check_source(rule: Rule, phi: &Formula) -> Result<(), RewriteError> {
    let found = phi.classify();
    if found.is_sublanguage_of(rule.source()) {
        Ok(())
    } else {
        Err(RewriteError::WrongLanguage {
            rule,
            expected: rule.source(),
            found,
        })
    }
}

fn finish(
    rule: Rule,
    output: Formula,
    extension: AgentExtension,
    guard_set: Vec<Formula>,
) -> Result<RewriteResult, RewriteError> {
    let found = output.classify();
    if !found.is_sublanguage_of(rule.target()) {
        return Err(RewriteError::OutputLanguage {
            rule,
            expected: rule.target(),
            found,
        });
    }
    Ok(RewriteResult {
        rule,
        output,
        extension,
        guard_set,
    })
}

/// Sorts by printed form and removes duplicates.
fn canonical(mut fs: Vec<Formula>) -> Vec<Formula> {
    let mut keyed: Vec<(String, Formula)> = fs.drain(..).map(|f| (f.to_string(), f)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.0 == b.0);
    keyed.into_iter().map(|(_, f)| f).collect()
}

fn conj(fs: &[Formula]) -> Formula {
    Formula::conjunction(fs.to_vec()).unwrap_or_else(Formula::top)
}

/// `φ ∧ (⋀Γ ∧ C_G ⋀Γ)`.
fn with_common_guard(phi: Formula, guards: &[Formula], g: Group) -> Formula {
    let all = conj(guards);
    Formula::and(phi, Formula::and(all.clone(), Formula::common(g, all)))
}

/// `ψ` applied under `op` `i` times.
fn iterate(i: usize, f: Formula, op: &impl Fn(Formula) -> Formula) -> Formula {
    (0..i).fold(f, |acc, _| op(acc))
}

/// The five implication schemata relating `K`, `D` and `M`:
/// `M_Gψ→K_aψ` and `K_aψ→D_Gψ` for `a∈G`; `M_Hψ→M_Gψ` and `D_Gψ→D_Hψ` for
/// `G⊆H`; `M_Iψ→D_Jψ` for `I∩J≠∅`. Agents and groups are those of `φ`,
/// `ψ` ranges over its subformulas.
pub fn mu(phi: &Formula) -> Vec<Formula> {
    let phi = phi.expand_everyone();
    let agents = phi.agents();
    let groups: Vec<Group> = phi.groups().into_iter().collect();
    let subs = phi.subformulas();
    let mut out = Vec::new();
    for psi in &subs {
        let k = |a: &Agent| Formula::know(a.clone(), psi.clone());
        let d = |g: &Group| Formula::distributed(g.clone(), psi.clone());
        let m = |g: &Group| Formula::mutual(g.clone(), psi.clone());
        for a in &agents {
            for g in groups.iter().filter(|g| g.contains(a)) {
                out.push(Formula::implies(m(g), k(a)));
                out.push(Formula::implies(k(a), d(g)));
            }
        }
        for g in &groups {
            for h in &groups {
                if g.is_subset(h) {
                    out.push(Formula::implies(m(h), m(g)));
                    out.push(Formula::implies(d(g), d(h)));
                }
                if g.intersects(h) {
                    out.push(Formula::implies(m(g), d(h)));
                }
            }
        }
    }
    canonical(out)
}

/// `K_aψ→K_aK_aψ`, `K_aψ→ψ` and `¬K_a⊥` for agents `a` of `φ` and
/// subformulas `ψ`.
pub fn mu_t(phi: &Formula) -> Vec<Formula> {
    let phi = phi.expand_everyone();
    let subs = phi.subformulas();
    let mut out = Vec::new();
    for a in phi.agents() {
        for psi in &subs {
            let ka = Formula::know(a.clone(), psi.clone());
            out.push(Formula::implies(
                ka.clone(),
                Formula::know(a.clone(), ka.clone()),
            ));
            out.push(Formula::implies(ka, psi.clone()));
        }
        out.push(Formula::not(Formula::know(a.clone(), Formula::bot())));
    }
    canonical(out)
}

/// `¬X¬Xψ→ψ` for `X` among `K_a`, `D_G`, `M_G` with agents and groups of
/// `φ`, and subformulas `ψ`.
pub fn mu_m(phi: &Formula) -> Vec<Formula> {
    let phi = phi.expand_everyone();
    let subs = phi.subformulas();
    let b = |op: &dyn Fn(Formula) -> Formula, psi: &Formula| {
        Formula::implies(Formula::not(op(Formula::not(op(psi.clone())))), psi.clone())
    };
    let mut out = Vec::new();
    for psi in &subs {
        for a in phi.agents() {
            out.push(b(&|f| Formula::know(a.clone(), f), psi));
        }
        for g in phi.groups() {
            out.push(b(&|f| Formula::distributed(g.clone(), f), psi));
            out.push(b(&|f| Formula::mutual(g.clone(), f), psi));
        }
    }
    canonical(out)
}

fn symmetry_guards(phi: &Formula, ag: &BTreeSet<Agent>) -> Vec<Formula> {
    let mut out = Vec::new();
    for a in ag {
        for psi in phi.subformulas() {
            let k = |f| Formula::know(a.clone(), f);
            out.push(Formula::implies(
                Formula::not(k(Formula::not(k(psi.clone())))),
                psi,
            ));
        }
    }
    canonical(out)
}

/// Operators that need a fresh agent under `ρ`: every `K_a`, `D_G`, `M_G`
/// node, and `K_a` for each member of a `C_G` group.
fn rho_keys(fs: &[&Formula]) -> BTreeSet<OperatorKey> {
    let mut keys = BTreeSet::new();
    for f in fs {
        f.visit(&mut |n| match n {
            Formula::Know(a, _) => {
                keys.insert(OperatorKey::Know(a.clone()));
            }
            Formula::Distributed(g, _) => {
                keys.insert(OperatorKey::Distributed(g.clone()));
            }
            Formula::Mutual(g, _) => {
                keys.insert(OperatorKey::Mutual(g.clone()));
            }
            Formula::Common(g, _) | Formula::Everyone(g, _) => {
                keys.extend(g.members().iter().cloned().map(OperatorKey::Know));
            }
            _ => {}
        });
    }
    keys
}

/// `K_a↦K_{f(K_a)}`, `D_G↦K_{f(D_G)}`, `M_G↦K_{f(M_G)}`,
/// `C_G↦C_{f(K_a)|a∈G}`.
fn rho_substitute(f: &Formula, ext: &AgentExtension) -> Formula {
    f.map_bottom_up(&mut |n| match n {
        Formula::Know(a, body) => Formula::Know(ext.f(&OperatorKey::Know(a)), body),
        Formula::Distributed(g, body) => Formula::Know(ext.f(&OperatorKey::Distributed(g)), body),
        Formula::Mutual(g, body) => Formula::Know(ext.f(&OperatorKey::Mutual(g)), body),
        Formula::Common(g, body) => {
            let image = Group::new(
                g.members()
                    .iter()
                    .map(|a| ext.f(&OperatorKey::Know(a.clone()))),
            )
            .expect("nonempty");
            Formula::Common(image, body)
        }
        other => other,
    })
}

fn rho_impl(phi: &Formula, with_guards: bool) -> Result<RewriteResult, RewriteError> {
    let rule = if with_guards {
        Rule::Rho
    } else {
        Rule::RhoPrime
    };
    check_source(rule, phi)?;
    let phi = phi.expand_everyone();
    let guards = if with_guards { mu(&phi) } else { Vec::new() };
    let mut scope: Vec<&Formula> = vec![&phi];
    scope.extend(guards.iter());
    let ext = AgentExtension::build(phi.agents(), rho_keys(&scope), false);
    let body = rho_substitute(&phi, &ext);
    if guards.is_empty() {
        return finish(rule, body, ext, Vec::new());
    }
    let rewritten: Vec<Formula> = guards.iter().map(|g| rho_substitute(g, &ext)).collect();
    // ag⁺: the agents of φ and every fresh agent.
    let ag_plus = Group::new(ext.all_agents()).expect("φ has agents when μ is nonempty");
    let output = with_common_guard(body, &rewritten, ag_plus);
    finish(rule, output, ext, rewritten)
}

/// `ELCDM → ELC`: conjoin `μ(φ)` and its common knowledge among `ag⁺(φ)`,
/// then give each operator its own agent.
pub fn rho(phi: &Formula) -> Result<RewriteResult, RewriteError> {
    rho_impl(phi, true)
}

/// [`rho`] without the guard conjunction.
pub fn rho_prime(phi: &Formula) -> Result<RewriteResult, RewriteError> {
    rho_impl(phi, false)
}

/// `ELC` over reflexive transitive models `→ ELC` over arbitrary ones:
/// `φ ∧ ⋀μᵗ(φ) ∧ C_Ag ⋀μᵗ(φ)`, `Ag` being the agents of `φ`.
pub fn rho_t(phi: &Formula) -> Result<RewriteResult, RewriteError> {
    check_source(Rule::RhoT, phi)?;
    let phi = phi.expand_everyone();
    let guards = mu_t(&phi);
    let ext = AgentExtension {
        base: phi.agents(),
        ..Default::default()
    };
    let output = match Group::new(phi.agents()) {
        Ok(ag) => with_common_guard(phi, &guards, ag),
        Err(_) => phi,
    };
    finish(Rule::RhoT, output, ext, guards)
}

/// `φ ∧ ⋀ (¬K_a¬K_aψ → ψ) ∧ C_Ag` of the same, over every `a ∈ ag` and
/// subformula `ψ`.
pub fn rho_s(phi: &Formula, ag: &BTreeSet<Agent>) -> Result<RewriteResult, RewriteError> {
    check_source(Rule::RhoS, phi)?;
    let phi = phi.expand_everyone();
    let group =
        Group::new(ag.iter().cloned()).map_err(|_| RewriteError::NoAgents { rule: Rule::RhoS })?;
    let guards = symmetry_guards(&phi, ag);
    let ext = AgentExtension {
        base: ag.clone(),
        ..Default::default()
    };
    let output = with_common_guard(phi, &guards, group);
    finish(Rule::RhoS, output, ext, guards)
}

/// `φ ∧ ⋀_{χ∈μᵐ(φ), 0≤i≤|φ|} M_Ag^i χ`, `Ag` being the agents of `φ`.
pub fn rho_m(phi: &Formula) -> Result<RewriteResult, RewriteError> {
    check_source(Rule::RhoM, phi)?;
    let phi = phi.expand_everyone();
    let ext = AgentExtension {
        base: phi.agents(),
        ..Default::default()
    };
    let Ok(ag) = Group::new(phi.agents()) else {
        return finish(Rule::RhoM, phi, ext, Vec::new());
    };
    let depth = phi.length();
    let step = |f| Formula::mutual(ag.clone(), f);
    let mut guards = Vec::new();
    for chi in mu_m(&phi) {
        for i in 0..=depth {
            guards.push(iterate(i, chi.clone(), &step));
        }
    }
    let output = Formula::and(phi, conj(&guards));
    finish(Rule::RhoM, output, ext, guards)
}

/// `K_a↦D_{o,f(K_a)}`, `D_G↦D_{o,f(D_G)}`, `M_G↦D_{o,f(M_G)}`.
fn tau_substitute(f: &Formula, ext: &AgentExtension) -> Formula {
    let o = ext.extra.clone().expect("τ extensions carry o");
    let pair = |x: Agent| Group::new([o.clone(), x]).expect("nonempty");
    f.map_bottom_up(&mut |n| match n {
        Formula::Know(a, body) => Formula::Distributed(pair(ext.f(&OperatorKey::Know(a))), body),
        Formula::Distributed(g, body) => {
            Formula::Distributed(pair(ext.f(&OperatorKey::Distributed(g))), body)
        }
        Formula::Mutual(g, body) => {
            Formula::Distributed(pair(ext.f(&OperatorKey::Mutual(g))), body)
        }
        other => other,
    })
}

fn tau_impl(phi: &Formula, with_guards: bool) -> Result<RewriteResult, RewriteError> {
    let rule = if with_guards {
        Rule::Tau
    } else {
        Rule::TauPrime
    };
    check_source(rule, phi)?;
    let phi = phi.expand_everyone();
    let guards = if with_guards { mu(&phi) } else { Vec::new() };
    let mut scope: Vec<&Formula> = vec![&phi];
    scope.extend(guards.iter());
    let ext = AgentExtension::build(phi.agents(), rho_keys(&scope), true);
    let body = tau_substitute(&phi, &ext);
    if !with_guards {
        return finish(rule, body, ext, Vec::new());
    }
    let o = ext.extra.clone().expect("built with o");
    let n = phi.length();
    let mut conjuncts = vec![Formula::not(Formula::know_iter(&o, n, Formula::bot()))];
    for chi in &guards {
        let chi = tau_substitute(chi, &ext);
        for i in 0..=n {
            conjuncts.push(Formula::know_iter(&o, i, chi.clone()));
        }
    }
    let output = Formula::and(body, conj(&conjuncts));
    finish(rule, output, ext, conjuncts)
}

/// `ELDM → ELD` via a fresh agent `o` with no abilities: conjoin `o`-chains
/// of `μ(φ)`, then replace every operator by `D_{o,f(·)}`.
pub fn tau(phi: &Formula) -> Result<RewriteResult, RewriteError> {
    tau_impl(phi, true)
}

/// [`tau`] without the guard conjunction.
pub fn tau_prime(phi: &Formula) -> Result<RewriteResult, RewriteError> {
    tau_impl(phi, false)
}

/// Dispatch by rule. `ag` is only consulted by `rho-s`.
pub fn apply(
    rule: Rule,
    phi: &Formula,
    ag: &BTreeSet<Agent>,
) -> Result<RewriteResult, RewriteError> {
    match rule {
        Rule::Rho => rho(phi),
        Rule::RhoPrime => rho_prime(phi),
        Rule::RhoT => rho_t(phi),
        Rule::RhoS => rho_s(phi, ag),
        Rule::RhoM => rho_m(phi),
        Rule::Tau => tau(phi),
        Rule::TauPrime => tau_prime(phi),
    }
}
