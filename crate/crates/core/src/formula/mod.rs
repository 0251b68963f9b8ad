//! Formula syntax for epistemic logic with everyone's, common, distributed
//! and mutual knowledge.
//!
//! Only `¬`, `→` and the modal operators are primitive. Conjunction,
//! disjunction, equivalence and the constants are expanded by the smart
//! constructors ([`Formula::and`], [`Formula::or`], ...) and by the parser.

mod closure;
mod parse;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use closure::{closure, neg_dual};
pub use parse::{parse, parse_open, ParseError, ParseErrorKind};

/// Propositional variable used to encode `⊤` as `(_p0 -> _p0)`.
///
/// Its truth value never matters, so model enumeration may ignore it.
pub const RESERVED_PROP: &str = "_p0";

/// An agent identifier.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Agent(String);

impl Agent {
    pub fn new(id: impl Into<String>) -> Self {
        Agent(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Agent {
    fn from(s: &str) -> Self {
        Agent::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("groups must be nonempty")]
    EmptyGroup,
    #[error("closure is only defined for formulas without everyone's-knowledge operators")]
    EveryoneNode,
}

/// A nonempty set of agents, kept sorted and deduplicated so that
/// structural equality coincides with set equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Group(Vec<Agent>);

impl Group {
    pub fn new<I, A>(members: I) -> Result<Self, FormulaError>
    where
        I: IntoIterator<Item = A>,
        A: Into<Agent>,
    {
        let mut members: Vec<Agent> = members.into_iter().map(Into::into).collect();
        members.sort();
        members.dedup();
        if members.is_empty() {
            return Err(FormulaError::EmptyGroup);
        }
        Ok(Group(members))
    }

    pub fn singleton(agent: Agent) -> Self {
        Group(vec![agent])
    }

    pub fn members(&self) -> &[Agent] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, agent: &Agent) -> bool {
        self.0.binary_search(agent).is_ok()
    }

    pub fn is_subset(&self, other: &Group) -> bool {
        self.0.iter().all(|a| other.contains(a))
    }

    pub fn intersects(&self, other: &Group) -> bool {
        self.0.iter().any(|a| other.contains(a))
    }

    /// The only member of a singleton group.
    pub fn as_singleton(&self) -> Option<&Agent> {
        match self.0.as_slice() {
            [a] => Some(a),
            _ => None,
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Prop(String),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Know(Agent, Box<Formula>),
    /// Everyone in the group knows. Kept as its own node; expanding it into
    /// a conjunction of `Know` is exponential under nesting.
    Everyone(Group, Box<Formula>),
    Common(Group, Box<Formula>),
    Distributed(Group, Box<Formula>),
    Mutual(Group, Box<Formula>),
}

/// Modal operator kinds that carry a group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupOp {
    Everyone,
    Common,
    Distributed,
    Mutual,
}

impl GroupOp {
    pub fn symbol(self) -> &'static str {
        match self {
            GroupOp::Everyone => "E",
            GroupOp::Common => "C",
            GroupOp::Distributed => "D",
            GroupOp::Mutual => "M",
        }
    }
}

impl Formula {
    pub fn prop(name: impl Into<String>) -> Self {
        Formula::Prop(name.into())
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn know(agent: impl Into<Agent>, f: Formula) -> Self {
        Formula::Know(agent.into(), Box::new(f))
    }

    pub fn everyone(g: Group, f: Formula) -> Self {
        Formula::Everyone(g, Box::new(f))
    }

    pub fn common(g: Group, f: Formula) -> Self {
        Formula::Common(g, Box::new(f))
    }

    pub fn distributed(g: Group, f: Formula) -> Self {
        Formula::Distributed(g, Box::new(f))
    }

    pub fn mutual(g: Group, f: Formula) -> Self {
        Formula::Mutual(g, Box::new(f))
    }

    pub fn group_op(op: GroupOp, g: Group, f: Formula) -> Self {
        match op {
            GroupOp::Everyone => Formula::everyone(g, f),
            GroupOp::Common => Formula::common(g, f),
            GroupOp::Distributed => Formula::distributed(g, f),
            GroupOp::Mutual => Formula::mutual(g, f),
        }
    }

    /// `⊤`, encoded as `(_p0 → _p0)`.
    pub fn top() -> Self {
        Formula::implies(Formula::prop(RESERVED_PROP), Formula::prop(RESERVED_PROP))
    }

    /// `⊥`, encoded as `¬(_p0 → _p0)`.
    pub fn bot() -> Self {
        Formula::not(Formula::top())
    }

    /// `a ∧ b ≔ ¬(a → ¬b)`
    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::not(Formula::implies(a, Formula::not(b)))
    }

    /// `a ∨ b ≔ ¬a → b`
    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::implies(Formula::not(a), b)
    }

    /// `a ↔ b ≔ (a → b) ∧ (b → a)`
    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    /// Right-nested conjunction; `None` for an empty iterator.
    pub fn conjunction<I>(items: I) -> Option<Formula>
    where
        I: IntoIterator<Item = Formula>,
        I::IntoIter: DoubleEndedIterator,
    {
        items
            .into_iter()
            .rev()
            .reduce(|acc, f| Formula::and(f, acc))
    }

    /// `Know(a, ...)` applied `n` times.
    pub fn know_iter(agent: &Agent, n: usize, f: Formula) -> Self {
        (0..n).fold(f, |acc, _| Formula::know(agent.clone(), acc))
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Formula::Implies(a, b)
            if a.as_ref() == b.as_ref() && matches!(a.as_ref(), Formula::Prop(p) if p == RESERVED_PROP))
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, Formula::Not(inner) if inner.is_top())
    }

    /// Recognizes the `∧` encoding, returning the conjuncts.
    pub fn as_and(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Not(inner) => match inner.as_ref() {
                Formula::Implies(a, nb) => match nb.as_ref() {
                    Formula::Not(b) => Some((a, b)),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }

    /// Recognizes the `↔` encoding.
    pub fn as_iff(&self) -> Option<(&Formula, &Formula)> {
        let (l, r) = self.as_and()?;
        match (l, r) {
            (Formula::Implies(a, b), Formula::Implies(b2, a2)) if a == a2 && b == b2 => {
                Some((a, b))
            }
            _ => None,
        }
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Prop(_) => vec![],
            Formula::Implies(a, b) => vec![a, b],
            Formula::Not(f)
            | Formula::Know(_, f)
            | Formula::Everyone(_, f)
            | Formula::Common(_, f)
            | Formula::Distributed(_, f)
            | Formula::Mutual(_, f) => vec![f],
        }
    }

    /// The group and operator kind of a group modality.
    pub fn as_group_op(&self) -> Option<(GroupOp, &Group, &Formula)> {
        match self {
            Formula::Everyone(g, f) => Some((GroupOp::Everyone, g, f)),
            Formula::Common(g, f) => Some((GroupOp::Common, g, f)),
            Formula::Distributed(g, f) => Some((GroupOp::Distributed, g, f)),
            Formula::Mutual(g, f) => Some((GroupOp::Mutual, g, f)),
            _ => None,
        }
    }

    /// Number of symbols, brackets included.
    ///
    /// `E_G` is measured like the other group operators.
    pub fn length(&self) -> usize {
        match self {
            Formula::Prop(_) => 1,
            Formula::Not(f) => f.length() + 1,
            Formula::Implies(a, b) => a.length() + b.length() + 3,
            Formula::Know(_, f) => f.length() + 2,
            Formula::Everyone(g, f)
            | Formula::Common(g, f)
            | Formula::Distributed(g, f)
            | Formula::Mutual(g, f) => f.length() + 2 * g.len() + 2,
        }
    }

    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Prop(_) => 0,
            Formula::Not(f) => f.modal_depth(),
            Formula::Implies(a, b) => a.modal_depth().max(b.modal_depth()),
            Formula::Know(_, f)
            | Formula::Everyone(_, f)
            | Formula::Common(_, f)
            | Formula::Distributed(_, f)
            | Formula::Mutual(_, f) => f.modal_depth() + 1,
        }
    }

    /// All subformulas, each listed once in pre-order of first occurrence.
    pub fn subformulas(&self) -> Vec<Formula> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if seen.insert(f) {
                out.push(f.clone());
                for c in f.children().into_iter().rev() {
                    stack.push(c);
                }
            }
        }
        out
    }

    pub fn classify(&self) -> LanguageTag {
        let mut tag = LanguageTag::EL;
        self.visit(&mut |f| match f {
            Formula::Common(..) => tag.has_c = true,
            Formula::Distributed(..) => tag.has_d = true,
            Formula::Mutual(..) => tag.has_m = true,
            _ => {}
        });
        tag
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Agents occurring in the formula, either as `K_a` or as group members.
    pub fn agents(&self) -> BTreeSet<Agent> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Know(a, _) => {
                out.insert(a.clone());
            }
            _ => {
                if let Some((_, g, _)) = f.as_group_op() {
                    out.extend(g.members().iter().cloned());
                }
            }
        });
        out
    }

    /// Groups carried by `E`, `C`, `D` or `M` operators.
    pub fn groups(&self) -> BTreeSet<Group> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Some((_, g, _)) = f.as_group_op() {
                out.insert(g.clone());
            }
        });
        out
    }

    /// Groups carried by operators of one kind.
    pub fn groups_of(&self, op: GroupOp) -> BTreeSet<Group> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Some((o, g, _)) = f.as_group_op() {
                if o == op {
                    out.insert(g.clone());
                }
            }
        });
        out
    }

    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Prop(p) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    pub fn contains_everyone(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, Formula::Everyone(..)));
        found
    }

    /// Rebuilds the formula bottom-up, letting `f` replace each node after
    /// its children have been mapped.
    pub fn map_bottom_up(&self, f: &mut impl FnMut(Formula) -> Formula) -> Formula {
        let rebuilt = match self {
            Formula::Prop(p) => Formula::Prop(p.clone()),
            Formula::Not(a) => Formula::not(a.map_bottom_up(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_bottom_up(f), b.map_bottom_up(f)),
            Formula::Know(ag, a) => Formula::know(ag.clone(), a.map_bottom_up(f)),
            Formula::Everyone(g, a) => Formula::everyone(g.clone(), a.map_bottom_up(f)),
            Formula::Common(g, a) => Formula::common(g.clone(), a.map_bottom_up(f)),
            Formula::Distributed(g, a) => Formula::distributed(g.clone(), a.map_bottom_up(f)),
            Formula::Mutual(g, a) => Formula::mutual(g.clone(), a.map_bottom_up(f)),
        };
        f(rebuilt)
    }

    /// Replaces every `E_G ψ` by `⋀_{a∈G} K_a ψ`.
    pub fn expand_everyone(&self) -> Formula {
        self.map_bottom_up(&mut |f| match f {
            Formula::Everyone(g, body) => Formula::conjunction(
                g.members()
                    .iter()
                    .map(|a| Formula::know(a.clone(), (*body).clone()))
                    .collect::<Vec<_>>(),
            )
            .expect("groups are nonempty"),
            other => other,
        })
    }

    /// Replaces `D_{a}` and `M_{a}` by `K_a`.
    pub fn simplify_singletons(&self) -> Formula {
        self.map_bottom_up(&mut |f| match f {
            Formula::Distributed(g, body) | Formula::Mutual(g, body) if g.len() == 1 => {
                Formula::Know(g.members()[0].clone(), body)
            }
            other => other,
        })
    }
}

/// One of the eight languages, identified by which group operators it has.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LanguageTag {
    pub has_c: bool,
    pub has_d: bool,
    pub has_m: bool,
}

impl LanguageTag {
    pub const EL: LanguageTag = LanguageTag::new(false, false, false);
    pub const ELC: LanguageTag = LanguageTag::new(true, false, false);
    pub const ELD: LanguageTag = LanguageTag::new(false, true, false);
    pub const ELM: LanguageTag = LanguageTag::new(false, false, true);
    pub const ELCD: LanguageTag = LanguageTag::new(true, true, false);
    pub const ELCM: LanguageTag = LanguageTag::new(true, false, true);
    pub const ELDM: LanguageTag = LanguageTag::new(false, true, true);
    pub const ELCDM: LanguageTag = LanguageTag::new(true, true, true);

    pub const fn new(has_c: bool, has_d: bool, has_m: bool) -> Self {
        LanguageTag {
            has_c,
            has_d,
            has_m,
        }
    }

    pub fn all() -> [LanguageTag; 8] {
        [
            Self::EL,
            Self::ELC,
            Self::ELD,
            Self::ELM,
            Self::ELCD,
            Self::ELCM,
            Self::ELDM,
            Self::ELCDM,
        ]
    }

    /// Every formula of `self` is a formula of `other`.
    pub fn is_sublanguage_of(self, other: LanguageTag) -> bool {
        (!self.has_c || other.has_c) && (!self.has_d || other.has_d) && (!self.has_m || other.has_m)
    }
}

impl fmt::Display for LanguageTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("EL")?;
        if self.has_c {
            f.write_str("C")?;
        }
        if self.has_d {
            f.write_str("D")?;
        }
        if self.has_m {
            f.write_str("M")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_top() {
            return f.write_str("true");
        }
        if self.is_bot() {
            return f.write_str("false");
        }
        if let Some((a, b)) = self.as_iff() {
            return write!(f, "({a} <-> {b})");
        }
        if let Some((a, b)) = self.as_and() {
            return write!(f, "({a} & {b})");
        }
        match self {
            Formula::Prop(p) => f.write_str(p),
            Formula::Not(a) => write!(f, "~{a}"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Know(ag, a) => write!(f, "K{{{ag}}} {a}"),
            _ => {
                let (op, g, body) = self
                    .as_group_op()
                    .expect("remaining variants are group operators");
                write!(f, "{}{g} {body}", op.symbol())
            }
        }
    }
}
