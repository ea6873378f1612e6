//! The six-set extension, the literal universe and per-stage traces.

use std::collections::{BTreeMap, BTreeSet};

use crate::proof::derivation::{Sign, TaggedExpression};
use crate::theory::{Conjunction, Literal, Theory};

/// `⟨∂+, ∂−, ∂+O, ∂−O, ∂+∧, ∂−∧⟩`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Extension {
    pub factual_pos: BTreeSet<Literal>,
    pub factual_neg: BTreeSet<Literal>,
    pub obligation_pos: BTreeSet<Literal>,
    pub obligation_neg: BTreeSet<Literal>,
    pub conj_pos: BTreeSet<Conjunction>,
    pub conj_neg: BTreeSet<Conjunction>,
}

impl Extension {
    pub fn contains(&self, e: &TaggedExpression) -> bool {
        match e {
            TaggedExpression::Factual(Sign::Plus, l) => self.factual_pos.contains(l),
            TaggedExpression::Factual(Sign::Minus, l) => self.factual_neg.contains(l),
            TaggedExpression::Obligation(Sign::Plus, l) => self.obligation_pos.contains(l),
            TaggedExpression::Obligation(Sign::Minus, l) => self.obligation_neg.contains(l),
            TaggedExpression::Conjunctive(Sign::Plus, c) => self.conj_pos.contains(c),
            TaggedExpression::Conjunctive(Sign::Minus, c) => self.conj_neg.contains(c),
        }
    }

    pub fn insert(&mut self, e: TaggedExpression) -> bool {
        match e {
            TaggedExpression::Factual(Sign::Plus, l) => self.factual_pos.insert(l),
            TaggedExpression::Factual(Sign::Minus, l) => self.factual_neg.insert(l),
            TaggedExpression::Obligation(Sign::Plus, l) => self.obligation_pos.insert(l),
            TaggedExpression::Obligation(Sign::Minus, l) => self.obligation_neg.insert(l),
            TaggedExpression::Conjunctive(Sign::Plus, c) => self.conj_pos.insert(c),
            TaggedExpression::Conjunctive(Sign::Minus, c) => self.conj_neg.insert(c),
        }
    }

    /// Every member as a tagged expression.
    pub fn members(&self) -> impl Iterator<Item = TaggedExpression> + '_ {
        let lits = |set: &'_ BTreeSet<Literal>, f: fn(Literal) -> TaggedExpression| {
            set.iter().cloned().map(f).collect::<Vec<_>>()
        };
        lits(&self.factual_pos, TaggedExpression::plus_d)
            .into_iter()
            .chain(lits(&self.factual_neg, TaggedExpression::minus_d))
            .chain(lits(&self.obligation_pos, TaggedExpression::plus_o))
            .chain(lits(&self.obligation_neg, TaggedExpression::minus_o))
            .chain(self.conj_pos.iter().cloned().map(TaggedExpression::plus_and))
            .chain(self.conj_neg.iter().cloned().map(TaggedExpression::minus_and))
    }

    pub fn len(&self) -> usize {
        self.factual_pos.len()
            + self.factual_neg.len()
            + self.obligation_pos.len()
            + self.obligation_neg.len()
            + self.conj_pos.len()
            + self.conj_neg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Pointwise inclusion.
    pub fn is_subset(&self, other: &Extension) -> bool {
        self.factual_pos.is_subset(&other.factual_pos)
            && self.factual_neg.is_subset(&other.factual_neg)
            && self.obligation_pos.is_subset(&other.obligation_pos)
            && self.obligation_neg.is_subset(&other.obligation_neg)
            && self.conj_pos.is_subset(&other.conj_pos)
            && self.conj_neg.is_subset(&other.conj_neg)
    }

    /// No target both proved and refuted.
    pub fn is_coherent(&self) -> bool {
        self.factual_pos.is_disjoint(&self.factual_neg)
            && self.obligation_pos.is_disjoint(&self.obligation_neg)
            && self.conj_pos.is_disjoint(&self.conj_neg)
    }

    /// Neither positive literal set holds a literal together with its
    /// complement. Both `p` and `~p` may be refuted.
    pub fn is_consistent(&self) -> bool {
        let ok = |s: &BTreeSet<Literal>| {
            s.iter()
                .all(|l| !l.is_positive() || !s.contains(&l.complement()))
        };
        ok(&self.factual_pos) && ok(&self.obligation_pos)
    }

    /// Keeps only the members drawn from `u`.
    pub fn restrict(&self, u: &LiteralUniverse) -> Extension {
        let l = |s: &BTreeSet<Literal>| s.intersection(&u.literals).cloned().collect();
        let c = |s: &BTreeSet<Conjunction>| s.intersection(&u.conjunctions).cloned().collect();
        Extension {
            factual_pos: l(&self.factual_pos),
            factual_neg: l(&self.factual_neg),
            obligation_pos: l(&self.obligation_pos),
            obligation_neg: l(&self.obligation_neg),
            conj_pos: c(&self.conj_pos),
            conj_neg: c(&self.conj_neg),
        }
    }
}

/// Candidate literals and conjunctions of a theory.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LiteralUniverse {
    pub literals: BTreeSet<Literal>,
    pub conjunctions: BTreeSet<Conjunction>,
}

/// All literals over atoms occurring in the theory (closed under
/// complement) and the conjunctions occurring in rule bodies.
pub fn universe(t: &Theory) -> LiteralUniverse {
    let literals = t
        .atoms()
        .into_iter()
        .flat_map(|a| [Literal::new(a.clone(), true), Literal::new(a, false)])
        .collect();
    LiteralUniverse {
        literals,
        conjunctions: t.body_conjunctions(),
    }
}

/// Three-valued status of a target at the fixpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Proven,
    Refuted,
    Undecided,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Proven => "proven",
            Verdict::Refuted => "refuted",
            Verdict::Undecided => "undecided",
        })
    }
}

/// Why a conclusion entered the extension at its stage.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Justification {
    /// Member of `E0`.
    Fact,
    /// Applicable proponent; every attacker discarded or beaten.
    Proponent { rule: String, index: usize },
    /// The complement is a fact.
    ComplementFact,
    /// Every proponent discarded (possibly vacuously).
    NoLiveProponent,
    /// An applicable attacker that no live rule beats.
    UndefeatedAttacker { rule: String, index: usize },
    /// Every conjunct obligatory and independent of the other violations.
    ConjIndependent,
    /// A conjunct refuted as an obligation.
    ConjConjunctRefuted { conjunct: Literal },
    /// A conjunct not obligatory once the other violations are removed.
    ConjDependent { conjunct: Literal },
}

impl std::fmt::Display for Justification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Justification::Fact => write!(f, "fact"),
            Justification::Proponent { rule, index } => write!(f, "{rule} applicable at {index}"),
            Justification::ComplementFact => write!(f, "complement is a fact"),
            Justification::NoLiveProponent => write!(f, "no live proponent"),
            Justification::UndefeatedAttacker { rule, index } => {
                write!(f, "{rule} undefeated at {index}")
            }
            Justification::ConjIndependent => write!(f, "all conjuncts independent"),
            Justification::ConjConjunctRefuted { conjunct } => {
                write!(f, "conjunct {conjunct} refuted")
            }
            Justification::ConjDependent { conjunct } => {
                write!(f, "conjunct {conjunct} depends on a violation")
            }
        }
    }
}

/// Conclusions added at one stage. Stage 0 holds the facts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StageDelta {
    pub added: Vec<(TaggedExpression, Justification)>,
}

/// `E0, E1, ..., Ek` stored as deltas.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StageTrace {
    stages: Vec<StageDelta>,
    index: BTreeMap<TaggedExpression, (usize, usize)>,
}

impl StageTrace {
    pub(crate) fn from_stages(stages: Vec<StageDelta>) -> Self {
        let mut index = BTreeMap::new();
        for (n, d) in stages.iter().enumerate() {
            for (i, (e, _)) in d.added.iter().enumerate() {
                index.entry(e.clone()).or_insert((n, i));
            }
        }
        StageTrace { stages, index }
    }

    /// Number of stored stages, `k + 1` for fixpoint `Ek`.
    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn stages(&self) -> &[StageDelta] {
        &self.stages
    }

    /// `En`, clamped to the fixpoint.
    pub fn extension_at(&self, n: usize) -> Extension {
        let mut e = Extension::default();
        for d in self.stages.iter().take(n + 1) {
            for (t, _) in &d.added {
                e.insert(t.clone());
            }
        }
        e
    }

    /// All `E0..=Ek`.
    pub fn extensions(&self) -> Vec<Extension> {
        let mut out = Vec::with_capacity(self.stages.len());
        let mut e = Extension::default();
        for d in &self.stages {
            for (t, _) in &d.added {
                e.insert(t.clone());
            }
            out.push(e.clone());
        }
        out
    }

    /// First stage at which `e` is a member.
    pub fn stage_of(&self, e: &TaggedExpression) -> Option<usize> {
        self.index.get(e).map(|&(n, _)| n)
    }

    pub fn justification(&self, e: &TaggedExpression) -> Option<&Justification> {
        self.index
            .get(e)
            .map(|&(n, i)| &self.stages[n].added[i].1)
    }
}
