//! Bottom-up computation of extensions, reducts and conjunction verdicts.
//!
//! [`Engine`] owns a compiled theory and memoises the fixpoint of every
//! reduct it evaluates. A reduct is represented as a view over the root
//! theory (which rules and facts survive), so nested reducts never copy
//! rules.

pub(crate) mod compiled;
pub mod extension;
pub(crate) mod fixpoint;
mod query;
pub mod reduct;
pub mod stage;

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::parallel;
use crate::proof::derivation::TaggedExpression;
use crate::theory::{Literal, Theory};
use compiled::{Compiled, ConjId, LitId};
use fixpoint::{Indep, Item, View, ViewFix, Why};

pub use extension::{
    universe, Extension, Justification, LiteralUniverse, StageDelta, StageTrace, Verdict,
};
pub use reduct::{
    evaluate_conjunction, independent, reduct, reduct_refutes, ConjunctRecord,
    EvaluationVerdict, Independence, ReductKey,
};
pub use stage::{applicable_at, body_applicable, body_discarded, discarded_at, step};

/// How distinct reduct evaluations are scheduled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    #[default]
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("dependency cycle: reduct removing {{{}}} re-entered while being evaluated", .0.join(", "))]
    Cycle(Vec<String>),
    #[error("index {index} out of range for rule `{rule}` (head length {len})")]
    IndexOutOfRange {
        rule: String,
        index: usize,
        len: usize,
    },
    #[error("literal {literal} is not at index {index} of rule `{rule}`")]
    NotAtIndex {
        rule: String,
        literal: Literal,
        index: usize,
    },
}

/// A fixpoint extension with the stages that built it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixpoint {
    pub extension: Extension,
    pub trace: StageTrace,
}

/// Fixpoint of `t` and its stage trace.
pub fn compute_extension(t: &Theory) -> Result<(Extension, StageTrace), EngineError> {
    let fp = Engine::new(t.clone()).fixpoint()?;
    Ok((fp.extension.clone(), fp.trace.clone()))
}

type Key = Vec<LitId>;

/// Conjunctions evaluated in a view; `None` for every active one.
type Focus = Option<Vec<ConjId>>;

pub struct Engine {
    theory: Theory,
    compiled: Compiled,
    parallelism: Parallelism,
    memoize: bool,
    memo: Mutex<HashMap<(Key, Focus), Arc<ViewFix>>>,
    published: Mutex<HashMap<Key, Arc<Fixpoint>>>,
}

impl Engine {
    pub fn new(theory: Theory) -> Self {
        let compiled = Compiled::new(&theory);
        Engine {
            theory,
            compiled,
            parallelism: Parallelism::default(),
            memoize: true,
            memo: Mutex::new(HashMap::new()),
            published: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_parallelism(mut self, p: Parallelism) -> Self {
        self.parallelism = p;
        self
    }

    /// Disables the reduct cache; every reduct is recomputed on demand.
    pub fn without_memo(mut self) -> Self {
        self.memoize = false;
        self
    }

    pub fn theory(&self) -> &Theory {
        &self.theory
    }

    pub fn parallelism(&self) -> Parallelism {
        self.parallelism
    }

    /// Number of cached view fixpoints, the root included.
    pub fn cached_reducts(&self) -> usize {
        self.memo.lock().unwrap().len()
    }

    /// The fixpoint of the theory.
    pub fn fixpoint(&self) -> Result<Arc<Fixpoint>, EngineError> {
        self.publish(Vec::new())
    }

    pub fn extension(&self) -> Result<Extension, EngineError> {
        Ok(self.fixpoint()?.extension.clone())
    }

    /// The fixpoint of `red(D, L)`, restricted to the literals of the reduct.
    pub fn reduct_fixpoint(&self, l: &BTreeSet<Literal>) -> Result<Arc<Fixpoint>, EngineError> {
        self.publish(self.key_for(l.iter()))
    }

    /// Canonical key of `red(D, L)`.
    pub fn reduct_key(&self, l: &BTreeSet<Literal>) -> ReductKey {
        ReductKey::new(&self.theory, l)
    }

    fn key_for<'a>(&self, l: impl Iterator<Item = &'a Literal>) -> Key {
        let c = &self.compiled;
        let mut key: Key = l
            .filter_map(|l| c.lit_id(l))
            .filter(|&id| c.facts[id as usize] || c.heads_of(id).next().is_some())
            .collect();
        key.sort_unstable();
        key.dedup();
        key
    }

    fn publish(&self, key: Key) -> Result<Arc<Fixpoint>, EngineError> {
        if let Some(fp) = self.published.lock().unwrap().get(&key) {
            return Ok(fp.clone());
        }
        let vf = self.solve(key.clone(), None, &[])?;
        let fp = Arc::new(self.to_public(&vf));
        Ok(self
            .published
            .lock()
            .unwrap()
            .entry(key)
            .or_insert(fp)
            .clone())
    }

    pub(crate) fn root(&self) -> Result<Arc<ViewFix>, EngineError> {
        self.solve(Vec::new(), None, &[])
    }

    /// Conjunctions of `view` that the obligation status of `targets` can
    /// depend on: those in bodies of rules reachable backwards from the
    /// targets' atoms through heads, bodies and chain elements. `None` when
    /// that is every active conjunction.
    pub(crate) fn focus(&self, view: &View, targets: &[LitId]) -> Focus {
        let c = &self.compiled;
        let mut seen_atom = vec![false; c.atoms.len()];
        let mut seen_rule = vec![false; c.rules.len()];
        let mut wanted = vec![false; c.conjs.len()];
        let mut work: Vec<u32> = targets.iter().map(|&l| l / 2).collect();
        while let Some(a) = work.pop() {
            if std::mem::replace(&mut seen_atom[a as usize], true) {
                continue;
            }
            for q in [a * 2, a * 2 + 1] {
                for r in c.heads_of(q) {
                    if !view.rules[r as usize] || std::mem::replace(&mut seen_rule[r as usize], true) {
                        continue;
                    }
                    let rule = &c.rules[r as usize];
                    let lits = rule.head.iter().chain(&rule.plain).chain(&rule.obl).chain(&rule.neg_obl);
                    work.extend(lits.map(|&l| l / 2));
                    for &k in &rule.conj {
                        wanted[k as usize] = true;
                        work.extend(c.conj_lits[k as usize].iter().map(|&l| l / 2));
                    }
                }
            }
        }
        let active = (0..c.rules.len())
            .filter(|&r| view.rules[r])
            .flat_map(|r| c.rules[r].conj.iter().copied());
        let all: std::collections::BTreeSet<ConjId> = active.collect();
        let some: Vec<ConjId> = (0..c.conjs.len() as ConjId)
            .filter(|&k| wanted[k as usize])
            .collect();
        (some.len() < all.len()).then_some(some)
    }

    /// Key of the reduct obtained by also removing `extra` from the view
    /// `base`, or `None` when that reduct is `base` itself.
    fn child_key(&self, base: &View, extra: impl Iterator<Item = LitId>) -> Option<Key> {
        let c = &self.compiled;
        let extra: Vec<LitId> = extra.collect();
        if !extra.iter().any(|&l| base.removes_something(c, l)) {
            return None;
        }
        let mut key = base.removed.clone();
        key.extend(
            extra
                .into_iter()
                .filter(|&id| c.facts[id as usize] || c.heads_of(id).next().is_some()),
        );
        key.sort_unstable();
        key.dedup();
        Some(key)
    }

    fn solve(&self, key: Key, focus: Focus, ancestors: &[Key]) -> Result<Arc<ViewFix>, EngineError> {
        let memo_key = (key, focus);
        if self.memoize {
            if let Some(v) = self.memo.lock().unwrap().get(&memo_key) {
                return Ok(v.clone());
            }
        }
        let (key, focus) = &memo_key;
        let key = key.clone();
        if ancestors.contains(&key) {
            return Err(EngineError::Cycle(
                key.iter()
                    .map(|&l| self.compiled.lit(l).to_string())
                    .collect(),
            ));
        }
        let c = &self.compiled;
        let view = View::from_removed(c, key.clone());

        let mut conj_active = vec![false; c.conjs.len()];
        match focus {
            Some(ks) => ks.iter().for_each(|&k| conj_active[k as usize] = true),
            None => {
                for (r, rule) in c.rules.iter().enumerate() {
                    if view.rules[r] {
                        for &k in &rule.conj {
                            conj_active[k as usize] = true;
                        }
                    }
                }
            }
        }

        // Reduct test per conjunct: None for identity.
        let mut wanted: Vec<Vec<Option<Key>>> = vec![Vec::new(); c.conjs.len()];
        let mut targets: HashMap<Key, Vec<LitId>> = HashMap::new();
        for (k, lits) in c.conj_lits.iter().enumerate() {
            if !conj_active[k] {
                continue;
            }
            for (i, _) in lits.iter().enumerate() {
                let others = lits
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &l)| l ^ 1);
                let ck = self.child_key(&view, others);
                if let Some(ck) = &ck {
                    targets.entry(ck.clone()).or_default().push(lits[i]);
                }
                wanted[k].push(ck);
            }
        }
        let mut children: Vec<(Key, Focus)> = targets
            .into_iter()
            .map(|(ck, ls)| {
                let f = self.focus(&View::from_removed(c, ck.clone()), &ls);
                (ck, f)
            })
            .collect();
        children.sort();

        let mut chain = ancestors.to_vec();
        chain.push(key.clone());
        let results = parallel::map(
            &children,
            self.parallelism == Parallelism::Parallel,
            |(ck, f)| self.solve(ck.clone(), f.clone(), &chain),
        );
        let mut solved: HashMap<&Key, Arc<ViewFix>> = HashMap::new();
        for ((ck, _), r) in children.iter().zip(results) {
            solved.insert(ck, r?);
        }

        let indep: Vec<Vec<Indep>> = wanted
            .iter()
            .enumerate()
            .map(|(k, per)| {
                per.iter()
                    .zip(&c.conj_lits[k])
                    .map(|(ck, &l)| match ck {
                        None => Indep::Identity,
                        Some(ck) if solved[ck].opos[l as usize] => Indep::Yes,
                        Some(_) => Indep::No,
                    })
                    .collect()
            })
            .collect();

        let vf = Arc::new(fixpoint::solve(c, view, conj_active, indep));
        if !self.memoize {
            return Ok(vf);
        }
        Ok(self
            .memo
            .lock()
            .unwrap()
            .entry(memo_key.clone())
            .or_insert(vf)
            .clone())
    }

    fn to_public(&self, vf: &ViewFix) -> Fixpoint {
        let c = &self.compiled;
        let mut used = vec![false; c.atoms.len()];
        for (q, &f) in vf.view.facts.iter().enumerate() {
            if f {
                used[q / 2] = true;
            }
        }
        for (r, rule) in c.rules.iter().enumerate() {
            if !vf.view.rules[r] {
                continue;
            }
            let lits = rule
                .head
                .iter()
                .chain(&rule.plain)
                .chain(&rule.obl)
                .chain(&rule.neg_obl)
                .chain(rule.conj.iter().flat_map(|&k| &c.conj_lits[k as usize]));
            for &l in lits {
                used[(l / 2) as usize] = true;
            }
        }
        let in_u = |item: &Item| match *item {
            Item::FactualPos(q) | Item::FactualNeg(q) | Item::OblPos(q) | Item::OblNeg(q) => {
                used[(q / 2) as usize]
            }
            Item::ConjPos(k) | Item::ConjNeg(k) => vf.conj_active[k as usize],
        };

        let mut stages = Vec::new();
        let mut ext = Extension::default();
        for (n, delta) in vf.stages.iter().enumerate() {
            let added: Vec<_> = delta
                .iter()
                .filter(|(item, _)| in_u(item))
                .map(|(item, why)| (self.tagged(*item), self.justification(*why)))
                .collect();
            if n > 0 && added.is_empty() {
                continue;
            }
            for (e, _) in &added {
                ext.insert(e.clone());
            }
            stages.push(StageDelta { added });
        }
        Fixpoint {
            extension: ext,
            trace: StageTrace::from_stages(stages),
        }
    }

    fn tagged(&self, item: Item) -> TaggedExpression {
        let c = &self.compiled;
        match item {
            Item::FactualPos(q) => TaggedExpression::plus_d(c.lit(q)),
            Item::FactualNeg(q) => TaggedExpression::minus_d(c.lit(q)),
            Item::OblPos(q) => TaggedExpression::plus_o(c.lit(q)),
            Item::OblNeg(q) => TaggedExpression::minus_o(c.lit(q)),
            Item::ConjPos(k) => TaggedExpression::plus_and(c.conjs[k as usize].clone()),
            Item::ConjNeg(k) => TaggedExpression::minus_and(c.conjs[k as usize].clone()),
        }
    }

    fn justification(&self, why: Why) -> Justification {
        let c = &self.compiled;
        match why {
            Why::Fact => Justification::Fact,
            Why::Proponent { rule, index } => Justification::Proponent {
                rule: c.labels[rule as usize].clone(),
                index: index as usize,
            },
            Why::ComplementFact => Justification::ComplementFact,
            Why::NoLiveProponent => Justification::NoLiveProponent,
            Why::UndefeatedAttacker { rule, index } => Justification::UndefeatedAttacker {
                rule: c.labels[rule as usize].clone(),
                index: index as usize,
            },
            Why::ConjIndependent => Justification::ConjIndependent,
            Why::ConjRefuted { conjunct } => Justification::ConjConjunctRefuted {
                conjunct: c.lit(conjunct),
            },
            Why::ConjDependent { conjunct } => Justification::ConjDependent {
                conjunct: c.lit(conjunct),
            },
        }
    }
}
