use std::collections::HashMap;

use serde_json::json;

use crate::formula::{parse_open, Agent, Formula, Group, GroupOp};
use crate::model::{fixture, WeightedModel};
use crate::semantics::{satisfies, Evaluator};

/// A modal operator used to build formulas during the search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operator {
    Know(Agent),
    Group(GroupOp, Group),
}

impl Operator {
    pub fn apply(&self, f: Formula) -> Formula {
        match self {
            Operator::Know(a) => Formula::know(a.clone(), f),
            Operator::Group(op, g) => Formula::group_op(*op, g.clone(), f),
        }
    }

    /// `K_a` for each agent and `op_G` for each nonempty group of each
    /// listed group operator.
    pub fn all_over(agents: &[Agent], ops: &[GroupOp]) -> Vec<Operator> {
        let mut out: Vec<Operator> = agents.iter().cloned().map(Operator::Know).collect();
        let n = agents.len();
        for &op in ops {
            for mask in 1u32..(1 << n) {
                let g = Group::new(
                    (0..n)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| agents[i].clone()),
                )
                .expect("nonempty");
                out.push(Operator::Group(op, g));
            }
        }
        out
    }
}

/// Placeholder proposition carrying an arbitrary truthset.
const HOLE: &str = "_hole";

fn mask(m: &WeightedModel, f: &Formula) -> u64 {
    Evaluator::new(f)
        .eval(m)
        .expect("operators range over the model's agents")
        .ones()
        .fold(0, |acc, s| acc | 1 << s)
}

/// Truthset of `op(χ)` where `χ` is true exactly on `set`.
fn apply_to_set(m: &WeightedModel, op: &Operator, set: u64) -> u64 {
    let mut m = m.clone();
    for s in 0..m.num_states() {
        m.set_prop(HOLE, s, set >> s & 1 == 1);
    }
    mask(&m, &op.apply(Formula::prop(HOLE)))
}

/// Pairs of truthsets `(in M, in M′)` realised by some formula, with the
/// first formula found for each.
type Classes = HashMap<(u64, u64), Formula>;

fn boolean_closure(classes: &mut Classes, full: (u64, u64)) {
    loop {
        let current: Vec<((u64, u64), Formula)> =
            classes.iter().map(|(k, f)| (*k, f.clone())).collect();
        let before = classes.len();
        for (x, fx) in &current {
            classes
                .entry((!x.0 & full.0, !x.1 & full.1))
                .or_insert_with(|| Formula::not(fx.clone()));
            for (y, fy) in &current {
                let k = ((!x.0 | y.0) & full.0, (!x.1 | y.1) & full.1);
                classes
                    .entry(k)
                    .or_insert_with(|| Formula::implies(fx.clone(), fy.clone()));
            }
        }
        if classes.len() == before {
            return;
        }
    }
}

/// Searches every formula over `props` built from booleans and `ops` with
/// modal depth at most `depth` — up to equivalence on the two models — for
/// one true at exactly one of `(m1,s1)` and `(m2,s2)`. Returns it together
/// with the number of equivalence classes explored.
pub fn distinguishing_formula(
    (m1, s1): (&WeightedModel, usize),
    (m2, s2): (&WeightedModel, usize),
    props: &[String],
    ops: &[Operator],
    depth: usize,
) -> (Option<Formula>, usize) {
    assert!(m1.num_states() <= 64 && m2.num_states() <= 64);
    let full = |m: &WeightedModel| {
        if m.num_states() == 64 {
            u64::MAX
        } else {
            (1u64 << m.num_states()) - 1
        }
    };
    let full = (full(m1), full(m2));
    let mut classes = Classes::new();
    for p in props {
        let f = Formula::prop(p.clone());
        classes.insert((mask(m1, &f), mask(m2, &f)), f);
    }
    boolean_closure(&mut classes, full);
    for _ in 0..depth {
        let current: Vec<((u64, u64), Formula)> =
            classes.iter().map(|(k, f)| (*k, f.clone())).collect();
        for ((x1, x2), f) in current {
            for op in ops {
                let k = (apply_to_set(m1, op, x1), apply_to_set(m2, op, x2));
                classes.entry(k).or_insert_with(|| op.apply(f.clone()));
            }
        }
        boolean_closure(&mut classes, full);
    }
    let found = classes
        .iter()
        .filter(|((a, b), _)| (a >> s1 & 1) != (b >> s2 & 1))
        .map(|(_, f)| f.clone())
        .min_by_key(|f| (f.length(), f.to_string()));
    (found, classes.len())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpressivityReport {
    /// `D_{a,b}⊥` holds at `exp_d_square.u1` and fails at `exp_d_point.u'`.
    pub d_discriminates: bool,
    /// `M_{a,b}p` fails at `exp_m_pair.u1` and holds at `exp_m_point.u'`.
    pub m_discriminates: bool,
    pub elcm_classes: usize,
    /// An ELCM formula separating the `D` pair, if any (there should be none).
    pub elcm_distinguisher: Option<Formula>,
    pub elcd_classes: usize,
    /// An ELCD formula separating the `M` pair, if any (there should be none).
    pub elcd_distinguisher: Option<Formula>,
}

impl ExpressivityReport {
    pub fn passed(&self) -> bool {
        self.d_discriminates
            && self.m_discriminates
            && self.elcm_distinguisher.is_none()
            && self.elcd_distinguisher.is_none()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "d_discriminates": self.d_discriminates,
            "m_discriminates": self.m_discriminates,
            "elcm_classes": self.elcm_classes,
            "elcm_distinguisher": self.elcm_distinguisher.as_ref().map(ToString::to_string),
            "elcd_classes": self.elcd_classes,
            "elcd_distinguisher": self.elcd_distinguisher.as_ref().map(ToString::to_string),
            "passed": self.passed(),
        })
    }
}

/// Re-checks a candidate separator with the reference semantics.
fn confirmed(
    f: Option<Formula>,
    (m1, s1): (&WeightedModel, &str),
    (m2, s2): (&WeightedModel, &str),
) -> Option<Formula> {
    f.filter(|f| satisfies(m1, s1, f).expect("known") != satisfies(m2, s2, f).expect("known"))
}

/// The two expressivity separations on their fixtures, with a depth-`depth`
/// search for formulas of the weaker language that would tell the pointed
/// models apart.
pub fn expressivity_check(depth: usize) -> ExpressivityReport {
    let square = fixture("exp_d_square").expect("fixture");
    let d_point = fixture("exp_d_point").expect("fixture");
    let pair = fixture("exp_m_pair").expect("fixture");
    let m_point = fixture("exp_m_point").expect("fixture");
    let holds = |m: &WeightedModel, s: &str, text: &str| {
        satisfies(m, s, &parse_open(text).expect("valid")).expect("known")
    };
    let d_discriminates =
        holds(&square, "u1", "D{a,b} false") && !holds(&d_point, "u'", "D{a,b} false");
    let m_discriminates = !holds(&pair, "u1", "M{a,b} p") && holds(&m_point, "u'", "M{a,b} p");

    let agents: Vec<Agent> = vec!["a".into(), "b".into()];
    let props = vec!["p".to_string()];
    let idx = |m: &WeightedModel, s: &str| m.state_index(s).expect("fixture state");

    let elcm = Operator::all_over(&agents, &[GroupOp::Common, GroupOp::Mutual]);
    let (found, elcm_classes) = distinguishing_formula(
        (&square, idx(&square, "u1")),
        (&d_point, idx(&d_point, "u'")),
        &props,
        &elcm,
        depth,
    );
    let elcm_distinguisher = confirmed(found, (&square, "u1"), (&d_point, "u'"));

    let elcd = Operator::all_over(&agents, &[GroupOp::Common, GroupOp::Distributed]);
    let (found, elcd_classes) = distinguishing_formula(
        (&pair, idx(&pair, "u1")),
        (&m_point, idx(&m_point, "u'")),
        &props,
        &elcd,
        depth,
    );
    let elcd_distinguisher = confirmed(found, (&pair, "u1"), (&m_point, "u'"));

    ExpressivityReport {
        d_discriminates,
        m_discriminates,
        elcm_classes,
        elcm_distinguisher,
        elcd_classes,
        elcd_distinguisher,
    }
}
