//! Seeded random formulas for property tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{Agent, Formula, Group, GroupOp, LanguageTag};

#[derive(Debug, Clone)]
pub struct FormulaParams {
    pub agents: Vec<Agent>,
    pub props: Vec<String>,
    /// Upper bound on [`Formula::length`].
    pub max_length: usize,
    /// Which of `C`, `D`, `M` may occur.
    pub language: LanguageTag,
    /// Whether `E_G` nodes may occur.
    pub everyone: bool,
}

impl FormulaParams {
    pub fn new(language: LanguageTag, max_length: usize) -> Self {
        FormulaParams {
            agents: ["a", "b", "c"].into_iter().map(Agent::from).collect(),
            props: vec!["p".into(), "q".into()],
            max_length,
            language,
            everyone: true,
        }
    }
}

pub fn random_formula(seed: u64, params: &FormulaParams) -> Formula {
    random_formula_with(&mut ChaCha8Rng::seed_from_u64(seed), params)
}

/// A formula of length between 1 and `max_length`, in `params.language`.
pub fn random_formula_with(rng: &mut impl Rng, params: &FormulaParams) -> Formula {
    assert!(params.max_length >= 1 && !params.props.is_empty());
    let budget = rng.gen_range(1..=params.max_length);
    grow(rng, params, budget)
}

fn random_group(rng: &mut impl Rng, agents: &[Agent], max_size: usize) -> Group {
    let size = rng.gen_range(1..=max_size.min(agents.len()));
    Group::new(agents.choose_multiple(rng, size).cloned()).expect("nonempty")
}

#[derive(Clone, Copy)]
enum Step {
    Not,
    Implies,
    Know,
    Group(GroupOp),
}

/// Builds a formula of length at most `budget`.
fn grow(rng: &mut impl Rng, p: &FormulaParams, budget: usize) -> Formula {
    if budget <= 1 || rng.gen_bool(0.15) {
        return Formula::prop(p.props.choose(rng).expect("props").clone());
    }
    let mut steps = vec![Step::Not];
    if budget >= 5 {
        steps.push(Step::Implies);
    }
    if !p.agents.is_empty() && budget >= 3 {
        steps.push(Step::Know);
    }
    if !p.agents.is_empty() && budget >= 5 {
        let allowed = [
            (GroupOp::Everyone, p.everyone),
            (GroupOp::Common, p.language.has_c),
            (GroupOp::Distributed, p.language.has_d),
            (GroupOp::Mutual, p.language.has_m),
        ];
        // Listed twice so group operators show up regularly.
        for _ in 0..2 {
            steps.extend(
                allowed
                    .iter()
                    .filter(|(_, ok)| *ok)
                    .map(|(op, _)| Step::Group(*op)),
            );
        }
    }
    match *steps.choose(rng).expect("nonempty") {
        Step::Not => Formula::not(grow(rng, p, budget - 1)),
        Step::Implies => {
            let rest = budget - 3;
            let left = rng.gen_range(1..rest);
            let a = grow(rng, p, left);
            let b = grow(rng, p, rest - a.length());
            Formula::implies(a, b)
        }
        Step::Know => {
            let a = p.agents.choose(rng).expect("agents").clone();
            Formula::know(a, grow(rng, p, budget - 2))
        }
        Step::Group(op) => {
            let g = random_group(rng, &p.agents, (budget - 3) / 2);
            let cost = 2 * g.len() + 2;
            Formula::group_op(op, g, grow(rng, p, budget - cost))
        }
    }
}

/// `count` formulas drawn from one stream seeded by `seed`.
pub fn corpus(seed: u64, count: usize, params: &FormulaParams) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_formula_with(&mut rng, params))
        .collect()
}
