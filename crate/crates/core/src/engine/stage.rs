//! Extension-level applicability and a direct, set-based application of
//! the extension operator. The engine does not use this path; it is the
//! readable reference the stage-exact solver is tested against.

use std::collections::BTreeSet;

use super::extension::{universe, Extension};
use super::reduct::reduct;
use super::{compute_extension, EngineError};
use crate::theory::{BodyAtom, Literal, Rule, Theory};

pub fn body_applicable(r: &Rule, e: &Extension) -> bool {
    r.antecedent().iter().all(|a| match a {
        BodyAtom::Plain(l) => e.factual_pos.contains(l),
        BodyAtom::Obl(l) => e.obligation_pos.contains(l),
        BodyAtom::NegObl(l) => e.obligation_neg.contains(l),
        BodyAtom::ConjObl(c) => e.conj_pos.contains(c),
    })
}

pub fn body_discarded(r: &Rule, e: &Extension) -> bool {
    r.antecedent().iter().any(|a| match a {
        BodyAtom::Plain(l) => e.factual_neg.contains(l),
        BodyAtom::Obl(l) => e.obligation_neg.contains(l),
        BodyAtom::NegObl(l) => e.obligation_pos.contains(l),
        BodyAtom::ConjObl(c) => e.conj_neg.contains(c),
    })
}

fn check_index(r: &Rule, q: &Literal, j: usize) -> Result<(), EngineError> {
    match r.head().get(j) {
        None => Err(EngineError::IndexOutOfRange {
            rule: r.label().to_string(),
            index: j,
            len: r.head().len(),
        }),
        Some(h) if h != q => Err(EngineError::NotAtIndex {
            rule: r.label().to_string(),
            literal: q.clone(),
            index: j,
        }),
        Some(_) => Ok(()),
    }
}

fn app(r: &Rule, j: usize, e: &Extension) -> bool {
    body_applicable(r, e)
        && r.head().elements()[..j - 1]
            .iter()
            .all(|c| e.obligation_pos.contains(c) && e.factual_pos.contains(&c.complement()))
}

fn disc(r: &Rule, j: usize, e: &Extension) -> bool {
    body_discarded(r, e)
        || r.head().elements()[..j - 1]
            .iter()
            .any(|c| e.obligation_neg.contains(c) || e.factual_neg.contains(&c.complement()))
}

/// `r` is applicable for `q` at 1-based index `j` in `e`.
pub fn applicable_at(r: &Rule, q: &Literal, j: usize, e: &Extension) -> Result<bool, EngineError> {
    check_index(r, q, j)?;
    Ok(app(r, j, e))
}

/// `r` is discarded for `q` at 1-based index `j` in `e`.
pub fn discarded_at(r: &Rule, q: &Literal, j: usize, e: &Extension) -> Result<bool, EngineError> {
    check_index(r, q, j)?;
    Ok(disc(r, j, e))
}

/// `(rule, index)` pairs of prescriptive rules with `q` in the head.
fn chain_slots<'a>(t: &'a Theory, q: &'a Literal) -> Vec<(&'a Rule, usize)> {
    t.rules()
        .iter()
        .filter(|r| r.is_prescriptive())
        .flat_map(|r| r.head().indexes_of(q).map(move |j| (r, j)))
        .collect()
}

fn constitutive<'a>(t: &'a Theory, q: &Literal) -> Vec<&'a Rule> {
    t.rules()
        .iter()
        .filter(|r| !r.is_prescriptive() && r.head().get(1) == Some(q))
        .collect()
}

/// One application of the extension operator: `E(n+1)` from `E(n)`.
pub fn step(t: &Theory, e: &Extension) -> Result<Extension, EngineError> {
    let u = universe(t);
    let mut next = e.clone();
    let facts = t.facts();
    let beats = |a: &Rule, b: &Rule| t.is_superior(a.label(), b.label());

    for q in &u.literals {
        let nq = q.complement();
        let pro = constitutive(t, q);
        let con = constitutive(t, &nq);

        let plus = facts.contains(q)
            || (!facts.contains(&nq)
                && pro
                    .iter()
                    .any(|r| r.is_defeasible() && body_applicable(r, e))
                && con.iter().all(|s| {
                    body_discarded(s, e)
                        || pro.iter().any(|t| body_applicable(t, e) && beats(t, s))
                }));
        if plus {
            next.factual_pos.insert(q.clone());
        }

        let minus = !facts.contains(q)
            && (facts.contains(&nq)
                || pro
                    .iter()
                    .filter(|r| r.is_defeasible())
                    .all(|r| body_discarded(r, e))
                || con.iter().any(|s| {
                    body_applicable(s, e)
                        && pro.iter().all(|t| body_discarded(t, e) || !beats(t, s))
                }));
        if minus {
            next.factual_neg.insert(q.clone());
        }

        let opro = chain_slots(t, q);
        let ocon = chain_slots(t, &nq);
        // A rule counts as applicable (discarded) for q when it is so at
        // some (every) index holding q.
        let o_app = |r: &Rule| opro.iter().any(|&(x, j)| x == r && app(x, j, e));
        let o_disc = |r: &Rule| opro.iter().filter(|&&(x, _)| x == r).all(|&(x, j)| disc(x, j, e));

        let oplus = opro
            .iter()
            .any(|&(r, j)| r.is_defeasible() && app(r, j, e))
            && ocon.iter().all(|&(s, k)| {
                disc(s, k, e) || opro.iter().any(|&(t, _)| o_app(t) && beats(t, s))
            });
        if oplus {
            next.obligation_pos.insert(q.clone());
        }

        let ominus = opro
            .iter()
            .filter(|(r, _)| r.is_defeasible())
            .all(|&(r, j)| disc(r, j, e))
            || ocon.iter().any(|&(s, k)| {
                app(s, k, e) && opro.iter().all(|&(t, _)| o_disc(t) || !beats(t, s))
            });
        if ominus {
            next.obligation_neg.insert(q.clone());
        }
    }

    for c in &u.conjunctions {
        let mut all_pos = true;
        let mut some_neg = false;
        for (i, ci) in c.conjuncts().iter().enumerate() {
            let l: BTreeSet<Literal> = c
                .conjuncts()
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, x)| x.complement())
                .collect();
            let red = reduct(t, &l);
            // An identity reduct leaves the conjunct to stage membership.
            let indep = if red == *t {
                None
            } else {
                Some(compute_extension(&red)?.0.obligation_pos.contains(ci))
            };
            all_pos &= e.obligation_pos.contains(ci) && indep != Some(false);
            some_neg |= e.obligation_neg.contains(ci) || indep == Some(false);
        }
        if all_pos {
            next.conj_pos.insert(c.clone());
        }
        if some_neg {
            next.conj_neg.insert(c.clone());
        }
    }
    Ok(next)
}
