//! Membership queries against the fixpoint.

use super::extension::Verdict;
use super::{Engine, EngineError};
use crate::proof::derivation::{Sign, TaggedExpression};
use crate::theory::Literal;

impl Engine {
    /// Whether the atom of `l` occurs in the theory.
    pub fn knows_atom(&self, l: &Literal) -> bool {
        self.compiled.lit_id(l).is_some()
    }

    /// Status of the target of `goal`, ignoring its sign. An atom the theory
    /// never mentions has no rules and is refuted.
    pub fn verdict(&self, goal: &TaggedExpression) -> Result<Verdict, EngineError> {
        let fp = self.fixpoint()?;
        let e = &fp.extension;
        let pick = |pos: bool, neg: bool| match (pos, neg) {
            (true, _) => Verdict::Proven,
            (false, true) => Verdict::Refuted,
            _ => Verdict::Undecided,
        };
        Ok(match goal {
            TaggedExpression::Factual(_, l) if !self.knows_atom(l) => Verdict::Refuted,
            TaggedExpression::Obligation(_, l) if !self.knows_atom(l) => Verdict::Refuted,
            TaggedExpression::Factual(_, l) => {
                pick(e.factual_pos.contains(l), e.factual_neg.contains(l))
            }
            TaggedExpression::Obligation(_, l) => {
                pick(e.obligation_pos.contains(l), e.obligation_neg.contains(l))
            }
            TaggedExpression::Conjunctive(_, c) if self.compiled.conj_id(c).is_some() => {
                pick(e.conj_pos.contains(c), e.conj_neg.contains(c))
            }
            TaggedExpression::Conjunctive(_, c) => self.evaluate_conjunction(c)?.verdict,
        })
    }

    /// Whether `goal`, sign included, holds at the fixpoint.
    pub fn query(&self, goal: &TaggedExpression) -> Result<bool, EngineError> {
        let v = self.verdict(goal)?;
        Ok(match goal.sign() {
            Sign::Plus => v == Verdict::Proven,
            Sign::Minus => v == Verdict::Refuted,
        })
    }
}
