//! Reducts `red(D, L)`, independence, and conjunction verdicts.

use std::collections::BTreeSet;
use std::hash::{DefaultHasher, Hash, Hasher};

use super::fixpoint::View;
use super::extension::Verdict;
use super::{Engine, EngineError};
use crate::theory::{Conjunction, Literal, Theory};

/// `red(D, L)`: facts minus `L`, every rule with some `l ∈ L` in its head
/// removed, and superiority pairs touching removed rules dropped.
pub fn reduct(t: &Theory, l: &BTreeSet<Literal>) -> Theory {
    let facts = t.facts().iter().filter(|f| !l.contains(f)).cloned();
    let rules: Vec<_> = t
        .rules()
        .iter()
        .filter(|r| !r.head().elements().iter().any(|h| l.contains(h)))
        .cloned()
        .collect();
    let kept: BTreeSet<&str> = rules.iter().map(|r| r.label()).collect();
    let sup: Vec<_> = t
        .superiority()
        .iter()
        .filter(|(a, b)| kept.contains(a.as_str()) && kept.contains(b.as_str()))
        .cloned()
        .collect();
    Theory::new(facts, rules, sup).expect("a reduct of a valid theory is valid")
}

/// Every `l ∈ L` is neither a fact nor a rule head in `red(D, L)`.
pub fn reduct_refutes(t: &Theory, l: &BTreeSet<Literal>) -> bool {
    let red = reduct(t, l);
    l.iter().all(|x| {
        !red.facts().contains(x)
            && red
                .rules_for(x, None, crate::theory::RuleFilter::ANY)
                .is_empty()
    })
}

/// Identity of a reduct: the base theory's fingerprint and the literals of
/// `L` that actually remove a fact or a rule.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReductKey {
    pub base: u64,
    pub removed: BTreeSet<Literal>,
}

impl ReductKey {
    pub fn new(t: &Theory, l: &BTreeSet<Literal>) -> Self {
        let removed = l
            .iter()
            .filter(|x| {
                t.facts().contains(x)
                    || !t
                        .rules_for(x, None, crate::theory::RuleFilter::ANY)
                        .is_empty()
            })
            .cloned()
            .collect();
        ReductKey {
            base: fingerprint(t),
            removed,
        }
    }
}

fn fingerprint(t: &Theory) -> u64 {
    let mut h = DefaultHasher::new();
    crate::dsl::serialize_theory(t).hash(&mut h);
    h.finish()
}

/// How a conjunct fared in the reduct removing the other violations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Independence {
    /// The reduct is the theory itself.
    Identity,
    Independent,
    Dependent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjunctRecord {
    pub conjunct: Literal,
    /// Status of the conjunct as an obligation in the theory.
    pub obligation: Verdict,
    pub independence: Independence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvaluationVerdict {
    pub conjunction: Conjunction,
    pub verdict: Verdict,
    pub conjuncts: Vec<ConjunctRecord>,
}

impl EvaluationVerdict {
    /// The first conjunct that refutes the conjunction, if any.
    pub fn deciding_conjunct(&self) -> Option<&ConjunctRecord> {
        self.conjuncts.iter().find(|r| {
            r.obligation == Verdict::Refuted || r.independence == Independence::Dependent
        })
    }
}

/// `m` is provable as an obligation in `D` and in `red(D, L)`.
pub fn independent(t: &Theory, m: &Literal, l: &BTreeSet<Literal>) -> Result<bool, EngineError> {
    Engine::new(t.clone()).independent(m, l)
}

/// Verdict for `c` against the fixpoint of `t`.
pub fn evaluate_conjunction(
    t: &Theory,
    c: &Conjunction,
) -> Result<EvaluationVerdict, EngineError> {
    Engine::new(t.clone()).evaluate_conjunction(c)
}

impl Engine {
    pub fn independent(&self, m: &Literal, l: &BTreeSet<Literal>) -> Result<bool, EngineError> {
        let Some(id) = self.compiled.lit_id(m) else {
            return Ok(false);
        };
        if !self.root()?.opos[id as usize] {
            return Ok(false);
        }
        let key = self.key_for(l.iter());
        let focus = self.focus(&View::from_removed(&self.compiled, key.clone()), &[id]);
        let red = self.solve(key, focus, &[])?;
        Ok(red.opos[id as usize])
    }

    /// Evaluates any conjunction against the fixpoint, occurring in the
    /// theory or not.
    pub fn evaluate_conjunction(&self, c: &Conjunction) -> Result<EvaluationVerdict, EngineError> {
        let cc = &self.compiled;
        let root = self.root()?;
        let ids: Vec<Option<u32>> = c.conjuncts().iter().map(|l| cc.lit_id(l)).collect();
        let mut conjuncts = Vec::with_capacity(ids.len());
        for (i, l) in c.conjuncts().iter().enumerate() {
            let obligation = match ids[i] {
                None => Verdict::Refuted,
                Some(q) if root.opos[q as usize] => Verdict::Proven,
                Some(q) if root.oneg[q as usize] => Verdict::Refuted,
                Some(_) => Verdict::Undecided,
            };
            let others = ids
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .filter_map(|(_, id)| id.map(|q| q ^ 1));
            let independence = match self.child_key(&root.view, others) {
                None => Independence::Identity,
                Some(key) => {
                    let targets: Vec<u32> = ids[i].into_iter().collect();
                    let focus = self.focus(&View::from_removed(cc, key.clone()), &targets);
                    let red = self.solve(key, focus, &[])?;
                    match ids[i] {
                        Some(q) if red.opos[q as usize] => Independence::Independent,
                        _ => Independence::Dependent,
                    }
                }
            };
            conjuncts.push(ConjunctRecord {
                conjunct: l.clone(),
                obligation,
                independence,
            });
        }
        let refuted = conjuncts.iter().any(|r| {
            r.obligation == Verdict::Refuted || r.independence == Independence::Dependent
        });
        let proven = conjuncts.iter().all(|r| r.obligation == Verdict::Proven);
        let verdict = if refuted {
            Verdict::Refuted
        } else if proven {
            Verdict::Proven
        } else {
            Verdict::Undecided
        };
        Ok(EvaluationVerdict {
            conjunction: c.clone(),
            verdict,
            conjuncts,
        })
    }
}
