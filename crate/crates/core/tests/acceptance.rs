//! Acceptance criteria. Runs as a plain binary so that every criterion
//! prints its PASS/FAIL line. Failing criteria make the exit status non-zero
//! only when `SIMKNO_ACCEPTANCE_STRICT` is set.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use simkno_core::formula::{parse_open, Agent, Formula, Group, LanguageTag};
use simkno_core::gen::{corpus, random_formula_with, FormulaParams};
use simkno_core::model::{fixture, random_kripke, random_model, RandomModelParams};
use simkno_core::rewrite::{
    extend_capabilities_rho, extend_capabilities_tau, generated_kripke_submodel,
    generated_submodel, refl_trans_closure, rho, rho_m, rho_prime, rho_s, rho_t, symmetric_closure,
    symmetrize, tau, tau_prime,
};
use simkno_core::satbench::{bounded_sat, expressivity_check, SatBounds};
use simkno_core::semantics::{
    kripke_satisfies, kripke_truthset, satisfies, satisfies_at, truthset, truthset_by_iteration,
    Evaluator,
};
use simkno_core::translate::{reverse_translation, similarity_lift, standard_translation};
use simkno_core::{KripkeModel, WeightedModel};

struct Outcome {
    pass: bool,
    detail: String,
}

fn f(text: &str) -> Formula {
    parse_open(text).expect("valid formula")
}

fn agents() -> Vec<Agent> {
    ["a", "b", "c"].into_iter().map(Agent::from).collect()
}

fn all_groups() -> Vec<Group> {
    let ag = agents();
    (1u32..8)
        .map(|mask| {
            Group::new((0..3).filter(|i| mask >> i & 1 == 1).map(|i| ag[i].clone())).unwrap()
        })
        .collect()
}

/// Every state of `m` satisfies `phi`.
fn valid_in(m: &WeightedModel, phi: &Formula) -> bool {
    truthset(m, phi).unwrap().members.count_ones(..) == m.num_states()
}

fn criterion_1() -> Outcome {
    let m = fixture("paper_example").unwrap();
    let facts = [
        ("s2", "K{a} p3"),
        ("s4", "~K{b} p1 & ~K{b} ~p1"),
        ("s3", "K{c} (K{a} p3 | K{a} ~p3)"),
        ("s4", "E{a,b} (p3 & p4)"),
        ("s5", "~C{a,c} p1 & ~C{a,c} ~p1 & ~C{a,c} p2 & ~C{a,c} ~p2"),
        ("s4", "D{a,b} (~p1 & p4)"),
        ("s4", "~M{a,b} ~p1 & ~M{a,b} p4"),
    ];
    let good = facts
        .iter()
        .filter(|(s, text)| satisfies(&m, s, &f(text)).unwrap())
        .count();
    Outcome {
        pass: good == facts.len(),
        detail: format!("{good}/{} facts reproduced", facts.len()),
    }
}

fn pool() -> Vec<Formula> {
    [
        "p",
        "~q",
        "K{a} q",
        "(p -> K{b} q)",
        "C{a,b} p",
        "D{a,c} ~q",
        "M{b,c} p",
        "true",
    ]
    .iter()
    .map(|t| f(t))
    .collect()
}

fn valid_clauses() -> Vec<(&'static str, Formula)> {
    let pool = pool();
    let groups = all_groups();
    let mut out = Vec::new();
    for phi in &pool {
        for psi in &pool {
            for a in agents() {
                out.push((
                    "K",
                    Formula::implies(
                        Formula::know(a.clone(), Formula::implies(phi.clone(), psi.clone())),
                        Formula::implies(
                            Formula::know(a.clone(), phi.clone()),
                            Formula::know(a.clone(), psi.clone()),
                        ),
                    ),
                ));
            }
        }
        for g in &groups {
            let c = Formula::common(g.clone(), phi.clone());
            let rhs = Formula::conjunction(
                g.members()
                    .iter()
                    .map(|a| Formula::know(a.clone(), Formula::and(phi.clone(), c.clone())))
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            out.push(("C-unfold", Formula::implies(c, rhs)));
            for h in &groups {
                if g.is_subset(h) {
                    out.push((
                        "D-mono",
                        Formula::implies(
                            Formula::distributed(g.clone(), phi.clone()),
                            Formula::distributed(h.clone(), phi.clone()),
                        ),
                    ));
                }
                if h.is_subset(g) {
                    out.push((
                        "M-anti",
                        Formula::implies(
                            Formula::mutual(g.clone(), phi.clone()),
                            Formula::mutual(h.clone(), phi.clone()),
                        ),
                    ));
                }
            }
        }
        for a in agents() {
            let single = Group::singleton(a.clone());
            let k = Formula::know(a.clone(), phi.clone());
            out.push((
                "D-single",
                Formula::iff(Formula::distributed(single.clone(), phi.clone()), k.clone()),
            ));
            out.push((
                "M-single",
                Formula::iff(Formula::mutual(single, phi.clone()), k),
            ));
        }
    }
    out
}

fn b_clauses(phi: &Formula) -> Vec<(&'static str, Formula)> {
    let b = |op: &dyn Fn(Formula) -> Formula| {
        Formula::implies(phi.clone(), op(Formula::not(op(Formula::not(phi.clone())))))
    };
    let mut out = Vec::new();
    for a in agents() {
        out.push(("B(K)", b(&|x| Formula::know(a.clone(), x))));
    }
    for g in all_groups() {
        out.push(("B(D)", b(&|x| Formula::distributed(g.clone(), x))));
        out.push(("B(M)", b(&|x| Formula::mutual(g.clone(), x))));
    }
    out
}

fn criterion_2() -> Outcome {
    let params = RandomModelParams::new(5, 3);
    let general: Vec<WeightedModel> = (0..500).map(|s| random_model(s, &params)).collect();
    let sim_params = RandomModelParams::new(5, 3).similarity();
    let similar: Vec<WeightedModel> = (0..500)
        .map(|s| random_model(10_000 + s, &sim_params))
        .collect();

    let mut failures = Vec::new();
    let valid = valid_clauses();
    for (clause, phi) in &valid {
        if let Some(i) = general.iter().position(|m| !valid_in(m, phi)) {
            failures.push(format!("{clause} fails on model {i}: {phi}"));
        }
    }
    let b_instances: Vec<(&'static str, Formula)> = pool().iter().flat_map(b_clauses).collect();
    for (clause, phi) in &b_instances {
        if let Some(i) = similar.iter().position(|m| !valid_in(m, phi)) {
            failures.push(format!("{clause} fails on similarity model {i}: {phi}"));
        }
    }
    // On the counter model, each B-style clause with φ = ⊤ and the singleton
    // group {a} fails at s.
    let counter = fixture("prop1_counter").unwrap();
    let top = Formula::top();
    let single = Group::new(["a"]).unwrap();
    let refuted = [
        (
            "B(K)",
            Formula::know(
                "a",
                Formula::not(Formula::know("a", Formula::not(top.clone()))),
            ),
        ),
        (
            "B(D)",
            Formula::distributed(
                single.clone(),
                Formula::not(Formula::distributed(
                    single.clone(),
                    Formula::not(top.clone()),
                )),
            ),
        ),
        (
            "B(M)",
            Formula::mutual(
                single.clone(),
                Formula::not(Formula::mutual(single, Formula::not(top.clone()))),
            ),
        ),
    ];
    for (clause, consequent) in &refuted {
        let inst = Formula::implies(top.clone(), consequent.clone());
        if satisfies(&counter, "s", &inst).unwrap() {
            failures.push(format!("{clause} not refuted by the counter model"));
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: format!(
            "{} valid instances x 500 models, {} B-instances x 500 similarity models, 3 refutations; {} failures{}",
            valid.len(),
            b_instances.len(),
            failures.len(),
            failures.first().map(|s| format!(" (first: {s})")).unwrap_or_default()
        ),
    }
}

struct Suite3 {
    disagreements: Vec<String>,
    checks: usize,
    /// (model, formula) pairs whose formula contains C, for criterion 4.
    with_common: Vec<(WeightedModel, Formula)>,
}

fn criterion_3_inputs() -> Suite3 {
    let mut out = Suite3 {
        disagreements: Vec::new(),
        checks: 0,
        with_common: Vec::new(),
    };
    let elcd = FormulaParams::new(LanguageTag::ELCD, 20);
    let elcdm = FormulaParams::new(LanguageTag::ELCDM, 20);
    let model_params = RandomModelParams::new(5, 3);
    let sym_params = RandomModelParams {
        force_symmetric: true,
        ..RandomModelParams::new(5, 3)
    };
    let props: Vec<String> = vec!["p".into(), "q".into()];
    for seed in 0..300u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);

        // σ on general weighted models.
        let m = random_model(seed, &model_params);
        let k = standard_translation(&m);
        for _ in 0..50 {
            let phi = random_formula_with(&mut rng, &elcd);
            let lhs = truthset(&m, &phi).unwrap().members;
            let rhs = kripke_truthset(&k, &phi).unwrap();
            out.checks += 1;
            if lhs != rhs {
                out.disagreements.push(format!("sigma seed {seed}: {phi}"));
            }
            if phi.classify().has_c {
                out.with_common.push((m.clone(), phi));
            }
        }

        // Reverse translation on relational models.
        let n = random_kripke(&mut rng, 5, &agents(), &props, 0.4, false);
        let back = reverse_translation(&n).unwrap();
        for _ in 0..50 {
            let phi = random_formula_with(&mut rng, &elcd);
            let lhs = kripke_truthset(&n, &phi).unwrap();
            let rhs = truthset(&back, &phi).unwrap().members;
            out.checks += 1;
            if lhs != rhs {
                out.disagreements
                    .push(format!("reverse seed {seed}: {phi}"));
            }
        }

        // Lift on symmetric weighted models.
        let s = random_model(50_000 + seed, &sym_params);
        let lifted = similarity_lift(&s).unwrap();
        if !lifted.validate().is_similarity() {
            out.disagreements
                .push(format!("lift seed {seed}: not a similarity model"));
        }
        for _ in 0..50 {
            let phi = random_formula_with(&mut rng, &elcdm);
            let lhs = truthset(&s, &phi).unwrap().members;
            let rhs = truthset(&lifted, &phi).unwrap().members;
            out.checks += 1;
            if lhs != rhs {
                out.disagreements.push(format!("lift seed {seed}: {phi}"));
            }
            if phi.classify().has_c {
                out.with_common.push((s.clone(), phi));
            }
        }
    }
    out
}

fn criterion_4(inputs: &[(WeightedModel, Formula)]) -> Outcome {
    let mut bad = 0;
    let mut states = 0;
    for (m, phi) in inputs {
        let fast = truthset(m, phi).unwrap().members;
        let iterated = truthset_by_iteration(m, phi).unwrap().members;
        for s in 0..m.num_states() {
            states += 1;
            let reference = satisfies_at(m, s, phi).unwrap();
            if fast.contains(s) != reference || iterated.contains(s) != reference {
                bad += 1;
            }
        }
    }
    Outcome {
        pass: bad == 0 && !inputs.is_empty(),
        detail: format!(
            "{} C-formula inputs, {states} states, {bad} disagreements",
            inputs.len()
        ),
    }
}

#[derive(Default)]
struct Tally {
    checked: usize,
    failed: Vec<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed.push(what());
        }
    }

    fn summary(&self, name: &str) -> String {
        format!(
            "{name} {}/{}",
            self.checked - self.failed.len(),
            self.checked
        )
    }
}

/// Equivalence closure of every relation: an S5 model.
fn s5(k: &KripkeModel) -> KripkeModel {
    refl_trans_closure(&symmetric_closure(k))
}

/// Membership via the truthset algorithm; the recursive reference checker is
/// exponential in modal depth, which the rewritten formulas make large.
fn holds_at(
    m: &WeightedModel,
    s: usize,
    phi: &Formula,
) -> Result<bool, simkno_core::semantics::SemanticsError> {
    Ok(truthset(m, phi)?.contains(s))
}

fn holds(
    m: &WeightedModel,
    s: &str,
    phi: &Formula,
) -> Result<bool, simkno_core::semantics::SemanticsError> {
    holds_at(m, m.state_index(s).expect("known state"), phi)
}

fn criterion_5() -> Outcome {
    let params = FormulaParams::new(LanguageTag::ELCDM, 12);
    let formulas = corpus(2024, 200, &params);
    let bounds = SatBounds::default();
    let small = SatBounds {
        max_states: 3,
        max_abilities: 2,
        max_candidates: 50_000,
    };
    let props: Vec<String> = vec!["p".into(), "q".into()];
    let mut rho_fwd = Tally::default();
    let mut tau_fwd = Tally::default();
    let mut rho_t_fwd = Tally::default();
    let mut rho_t_back = Tally::default();
    let mut rho_s_fwd = Tally::default();
    let mut rho_s_back = Tally::default();
    let mut rho_m_fwd = Tally::default();
    let mut rho_m_back = Tally::default();
    let mut sat_count = 0;
    let mut rho_m_failures: Vec<Formula> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(77);

    for phi in &formulas {
        let lang = phi.classify();
        let verdict = bounded_sat(phi, &bounds, false);
        if let Some((m, s)) = &verdict.witness {
            sat_count += 1;
            let r = rho(phi).unwrap();
            let m2 = extend_capabilities_rho(m, &r.extension).unwrap();
            let mut ok = holds(&m2, s, &r.output).unwrap();
            for psi in phi.expand_everyone().subformulas() {
                let rewritten = rho_prime(&psi).unwrap().output;
                ok &= truthset(m, &psi).unwrap().members
                    == truthset(
                        &extend_capabilities_rho(m, &rho_prime(&psi).unwrap().extension).unwrap(),
                        &rewritten,
                    )
                    .unwrap()
                    .members;
            }
            rho_fwd.record(ok, || format!("rho: {phi}"));

            if lang.is_sublanguage_of(LanguageTag::ELDM) {
                let t = tau(phi).unwrap();
                let m2 = extend_capabilities_tau(m, &t.extension).unwrap();
                let mut ok = holds(&m2, s, &t.output).unwrap();
                let tp = tau_prime(phi).unwrap();
                let m3 = extend_capabilities_tau(m, &tp.extension).unwrap();
                ok &=
                    truthset(m, phi).unwrap().members == truthset(&m3, &tp.output).unwrap().members;
                tau_fwd.record(ok, || format!("tau: {phi}"));
            }
        }

        if lang.is_sublanguage_of(LanguageTag::ELC) {
            let ag: BTreeSet<Agent> = agents().into_iter().collect();
            let rt = rho_t(phi).unwrap();
            let rs = rho_s(phi, &ag).unwrap();
            let phi_agents = phi.expand_everyone().agents();
            for _ in 0..20 {
                // Forward: S5 models for ρᵗ, symmetric models for ρˢ.
                let base = random_kripke(&mut rng, 4, &agents(), &props, 0.3, false);
                let eq = s5(&base);
                let sym = symmetric_closure(&base);
                let rt_out = kripke_truthset(&eq, &rt.output).unwrap();
                for st in kripke_truthset(&eq, phi).unwrap().ones() {
                    rho_t_fwd.record(rt_out.contains(st), || format!("rho-t forward: {phi}"));
                }
                let rs_out = kripke_truthset(&sym, &rs.output).unwrap();
                for st in kripke_truthset(&sym, phi).unwrap().ones() {
                    rho_s_fwd.record(rs_out.contains(st), || format!("rho-s forward: {phi}"));
                }
                // Backward: symmetric models for ρᵗ, arbitrary ones for ρˢ.
                for (n, out, back, tally) in [
                    (
                        &sym,
                        &rt.output,
                        refl_trans_closure as fn(&KripkeModel) -> KripkeModel,
                        &mut rho_t_back,
                    ),
                    (&base, &rs.output, symmetric_closure, &mut rho_s_back),
                ] {
                    let set = kripke_truthset(n, out).unwrap();
                    for st in set.ones() {
                        let (sub, at) = generated_kripke_submodel(n, st, &ag);
                        let closed = back(&sub);
                        let name = closed.states()[at].clone();
                        tally.record(kripke_satisfies(&closed, &name, phi).unwrap(), || {
                            format!("backward: {phi}")
                        });
                    }
                }
            }
            // Backward from bounded-SAT witnesses of the rewritten formulas.
            if let Some((w, s)) = bounded_sat(&rt.output, &small, true).witness {
                let n = standard_translation(&w);
                let (sub, at) =
                    generated_kripke_submodel(&n, n.state_index(&s).unwrap(), &phi_agents);
                let closed = refl_trans_closure(&sub);
                let name = closed.states()[at].clone();
                rho_t_back.record(kripke_satisfies(&closed, &name, phi).unwrap(), || {
                    format!("rho-t backward (witness): {phi}")
                });
            }
            if let Some((w, s)) = bounded_sat(&rs.output, &small, false).witness {
                let mut w = w;
                for a in &ag {
                    if w.capability(a).is_none() {
                        w.set_capability(a.clone(), w.full_abilities());
                    }
                }
                let n = standard_translation(&w);
                let (sub, at) = generated_kripke_submodel(&n, n.state_index(&s).unwrap(), &ag);
                let closed = symmetric_closure(&sub);
                let name = closed.states()[at].clone();
                rho_s_back.record(kripke_satisfies(&closed, &name, phi).unwrap(), || {
                    format!("rho-s backward (witness): {phi}")
                });
            }
        }

        if lang.is_sublanguage_of(LanguageTag::ELDM) {
            let rm = rho_m(phi).unwrap();
            let phi_agents = phi.expand_everyone().agents();
            let sim = RandomModelParams::new(4, 3).similarity();
            let general = RandomModelParams::new(4, 3);
            let mut sources: Vec<(WeightedModel, Option<usize>)> = Vec::new();
            for i in 0..20 {
                sources.push((random_model(rng_seed(&mut rng, i), &general), None));
            }
            if let Some((w, s)) = bounded_sat(&rm.output, &small, false).witness {
                let at = w.state_index(&s).unwrap();
                sources.push((w, Some(at)));
            }
            let rm_eval = Evaluator::new(&rm.output);
            for i in 0..20 {
                let m = random_model(rng_seed(&mut rng, i), &sim);
                let out = rm_eval.eval(&m).unwrap();
                for st in truthset(&m, phi).unwrap().members.ones() {
                    rho_m_fwd.record(out.contains(st), || format!("rho-m forward: {phi}"));
                }
            }
            if let Some((w, s)) = bounded_sat(phi, &small, true).witness {
                let at = w.state_index(&s).unwrap();
                rho_m_fwd.record(rm_eval.eval(&w).unwrap().contains(at), || {
                    format!("rho-m forward (witness): {phi}")
                });
            }
            for (m, only) in sources {
                for st in rm_eval
                    .eval(&m)
                    .unwrap()
                    .ones()
                    .filter(|st| only.is_none_or(|o| o == *st))
                {
                    let (sub, at) = generated_submodel(&m, st, &phi_agents).unwrap();
                    let lifted = similarity_lift(&symmetrize(&sub)).unwrap();
                    let ok = holds_at(&lifted, at, phi).unwrap();
                    if !ok {
                        rho_m_failures.push(phi.clone());
                    }
                    rho_m_back.record(ok, || format!("rho-m backward: {phi}"));
                }
            }
        }
    }

    let tallies = [
        ("rho", &rho_fwd),
        ("tau", &tau_fwd),
        ("rho-t fwd", &rho_t_fwd),
        ("rho-t back", &rho_t_back),
        ("rho-s fwd", &rho_s_fwd),
        ("rho-s back", &rho_s_back),
        ("rho-m fwd", &rho_m_fwd),
        ("rho-m back", &rho_m_back),
    ];
    let failed: Vec<&String> = tallies.iter().flat_map(|(_, t)| t.failed.iter()).collect();
    let parts: Vec<String> = tallies.iter().map(|(n, t)| t.summary(n)).collect();
    // A failed backward construction refutes the witness, not necessarily
    // the equisatisfiability claim: look for a similarity model of φ directly.
    let rho_m_failed: BTreeSet<&Formula> = rho_m_failures.iter().collect();
    let still_sat = rho_m_failed
        .iter()
        .filter(|phi| bounded_sat(phi, &small, true).is_sat())
        .count();
    Outcome {
        pass: failed.is_empty() && tallies.iter().all(|(_, t)| t.checked > 0),
        detail: format!(
            "{sat_count}/200 bounded-SAT; {}{}{}",
            parts.join(", "),
            failed
                .first()
                .map(|s| format!("; first failure: {s}"))
                .unwrap_or_default(),
            if rho_m_failed.is_empty() {
                String::new()
            } else {
                format!(
                    "; rho-m backward failed for {} formulas, {still_sat} of them s-satisfiable by bounded search",
                    rho_m_failed.len()
                )
            }
        ),
    }
}

fn rng_seed(rng: &mut ChaCha8Rng, i: u64) -> u64 {
    use rand::Rng;
    rng.gen::<u64>() ^ i
}

fn criterion_6() -> Outcome {
    let r = expressivity_check(2);
    Outcome {
        pass: r.passed(),
        detail: format!(
            "D{{a,b}} false separates: {}, M{{a,b}} p separates: {}, ELCM classes {} (separator {:?}), ELCD classes {} (separator {:?})",
            r.d_discriminates,
            r.m_discriminates,
            r.elcm_classes,
            r.elcm_distinguisher.map(|f| f.to_string()),
            r.elcd_classes,
            r.elcd_distinguisher.map(|f| f.to_string()),
        ),
    }
}

fn criterion_7() -> Outcome {
    let phi = f("C{a,b} (p -> K{c} q) & ~C{a,c} ~p & C{b} D{a,c} q");
    let sizes = [10usize, 20, 40, 80];
    let mut points = Vec::new();
    for &n in &sizes {
        let mut params = RandomModelParams::new(n, 4);
        params.label_density = 0.7;
        // Force exactly n states by resampling.
        let m = (0..)
            .map(|s| random_model(s, &params))
            .find(|m| m.num_states() == n && m.num_abilities() == 4)
            .unwrap();
        let mut samples = Vec::new();
        for _ in 0..7 {
            let mut reps = 0u32;
            let start = Instant::now();
            while start.elapsed() < Duration::from_millis(20) {
                std::hint::black_box(truthset(&m, &phi).unwrap());
                reps += 1;
            }
            samples.push(start.elapsed().as_secs_f64() / reps as f64);
        }
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        points.push(((n as f64).ln(), samples[0].ln()));
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let slope = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>()
        / points.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let times: Vec<String> = points
        .iter()
        .zip(sizes)
        .map(|(p, n)| format!("{n}:{:.1}us", p.1.exp() * 1e6))
        .collect();
    Outcome {
        pass: slope <= 3.5,
        detail: format!("log-log slope {slope:.2} (limit 3.5); {}", times.join(" ")),
    }
}

fn main() {
    let failures = std::cell::RefCell::new(Vec::new());
    let report = |n: u8, name: &str, limit: Option<Duration>, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let in_time = limit.is_none_or(|l| took <= l);
        let pass = out.pass && in_time;
        if !pass {
            failures.borrow_mut().push(n);
        }
        let budget = limit
            .map(|l| format!(", limit {}s", l.as_secs()))
            .unwrap_or_default();
        println!(
            "criterion {n} [{name}]: {} — {} ({:.2}s{budget})",
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            took.as_secs_f64()
        );
    };
    report(
        1,
        "example regression",
        Some(Duration::from_secs(1)),
        &mut criterion_1,
    );
    report(
        2,
        "validities and countermodels",
        Some(Duration::from_secs(30)),
        &mut criterion_2,
    );
    let mut suite3 = None;
    report(
        3,
        "translation truth preservation",
        Some(Duration::from_secs(60)),
        &mut || {
            let s = criterion_3_inputs();
            let out = Outcome {
                pass: s.disagreements.is_empty(),
                detail: format!(
                    "{} formula/model checks, {} disagreements{}",
                    s.checks,
                    s.disagreements.len(),
                    s.disagreements
                        .first()
                        .map(|d| format!(" (first: {d})"))
                        .unwrap_or_default()
                ),
            };
            suite3 = Some(s);
            out
        },
    );
    let inputs = suite3.map(|s| s.with_common).unwrap_or_default();
    report(4, "algorithm agreement", None, &mut || criterion_4(&inputs));
    report(
        5,
        "rewrite witnesses",
        Some(Duration::from_secs(300)),
        &mut criterion_5,
    );
    report(
        6,
        "expressivity fixtures",
        Some(Duration::from_secs(120)),
        &mut criterion_6,
    );
    report(
        7,
        "polynomial model checking",
        Some(Duration::from_secs(120)),
        &mut criterion_7,
    );
    let failures = failures.into_inner();
    if failures.is_empty() {
        println!("acceptance: all criteria PASS");
        return;
    }
    println!("acceptance: FAIL for criteria {failures:?}");
    // Known failures are reported, not hidden; strict mode turns them into
    // a failing exit status.
    if std::env::var_os("SIMKNO_ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
