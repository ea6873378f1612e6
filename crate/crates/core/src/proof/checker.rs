//! Step-by-step checking of linear derivations.
//!
//! Each step is checked against the prefix before it, by plain membership.
//! Clause identifiers name the failing condition, e.g. `+dO (2.2)`.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::derivation::{Derivation, Sign, TaggedExpression};
use crate::theory::{BodyAtom, Conjunction, Literal, Rule, Theory};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum StepVerdict {
    Justified { clause: String, by: String },
    Violated { clause: String, detail: String },
}

impl StepVerdict {
    pub fn is_justified(&self) -> bool {
        matches!(self, StepVerdict::Justified { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    /// 1-based position.
    pub position: usize,
    pub step: String,
    #[serde(flatten)]
    pub verdict: StepVerdict,
}

/// Verdicts for the checked steps, up to and including the first violation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub accepted: bool,
    pub length: usize,
    pub steps: Vec<StepRecord>,
}

impl CheckReport {
    pub fn first_violation(&self) -> Option<&StepRecord> {
        self.steps.iter().find(|s| !s.verdict.is_justified())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            match &s.verdict {
                StepVerdict::Justified { clause, by } => {
                    writeln!(f, "{:>4}  {:<24} ok  {clause}: {by}", s.position, s.step)?
                }
                StepVerdict::Violated { clause, detail } => {
                    writeln!(f, "{:>4}  {:<24} FAIL {clause}: {detail}", s.position, s.step)?
                }
            }
        }
        if self.accepted {
            writeln!(f, "accepted ({} steps)", self.length)
        } else {
            writeln!(f, "rejected")
        }
    }
}

/// Prefix `P(1..n)` with the earliest position of every expression.
struct Prefix<'a> {
    first: HashMap<&'a TaggedExpression, usize>,
}

impl<'a> Prefix<'a> {
    fn new(steps: &'a [TaggedExpression]) -> Self {
        let mut first = HashMap::new();
        for (i, s) in steps.iter().enumerate() {
            first.entry(s).or_insert(i);
        }
        Prefix { first }
    }

    fn has(&self, e: &TaggedExpression) -> bool {
        self.first.contains_key(e)
    }

    fn pd(&self, l: &Literal) -> bool {
        self.has(&TaggedExpression::plus_d(l.clone()))
    }

    fn md(&self, l: &Literal) -> bool {
        self.has(&TaggedExpression::minus_d(l.clone()))
    }

    fn po(&self, l: &Literal) -> bool {
        self.has(&TaggedExpression::plus_o(l.clone()))
    }

    fn mo(&self, l: &Literal) -> bool {
        self.has(&TaggedExpression::minus_o(l.clone()))
    }

    /// Earliest 0-based position of `e`.
    fn position(&self, e: &TaggedExpression) -> Option<usize> {
        self.first.get(e).copied()
    }
}

fn body_applicable(r: &Rule, p: &Prefix) -> bool {
    r.antecedent().iter().all(|a| match a {
        BodyAtom::Plain(l) => p.pd(l),
        BodyAtom::Obl(l) => p.po(l),
        BodyAtom::NegObl(l) => p.mo(l),
        BodyAtom::ConjObl(c) => p.has(&TaggedExpression::plus_and(c.clone())),
    })
}

fn body_discarded(r: &Rule, p: &Prefix) -> bool {
    r.antecedent().iter().any(|a| match a {
        BodyAtom::Plain(l) => p.md(l),
        BodyAtom::Obl(l) => p.mo(l),
        BodyAtom::NegObl(l) => p.po(l),
        BodyAtom::ConjObl(c) => p.has(&TaggedExpression::minus_and(c.clone())),
    })
}

fn app_at(r: &Rule, j: usize, p: &Prefix) -> bool {
    body_applicable(r, p)
        && r.head().elements()[..j - 1]
            .iter()
            .all(|c| p.po(c) && p.pd(&c.complement()))
}

fn disc_at(r: &Rule, j: usize, p: &Prefix) -> bool {
    body_discarded(r, p)
        || r.head().elements()[..j - 1]
            .iter()
            .any(|c| p.mo(c) || p.md(&c.complement()))
}

fn constitutive<'t>(t: &'t Theory, q: &Literal) -> impl Iterator<Item = &'t Rule> + 't {
    let q = q.clone();
    t.rules()
        .iter()
        .filter(move |r| !r.is_prescriptive() && r.head().get(1) == Some(&q))
}

fn slots<'t>(t: &'t Theory, q: &Literal) -> Vec<(&'t Rule, usize)> {
    t.rules()
        .iter()
        .filter(|r| r.is_prescriptive())
        .flat_map(|r| r.head().indexes_of(q).map(move |j| (r, j)))
        .collect()
}

fn ok(clause: &str, by: impl Into<String>) -> StepVerdict {
    StepVerdict::Justified {
        clause: clause.to_string(),
        by: by.into(),
    }
}

fn bad(clause: &str, detail: impl Into<String>) -> StepVerdict {
    StepVerdict::Violated {
        clause: clause.to_string(),
        detail: detail.into(),
    }
}

fn beats(t: &Theory, a: &Rule, b: &Rule) -> bool {
    t.is_superior(a.label(), b.label())
}

fn plus_d(t: &Theory, p: &Prefix, q: &Literal) -> StepVerdict {
    let nq = q.complement();
    if t.facts().contains(q) {
        return ok("+d (1)", format!("{q} is a fact"));
    }
    if t.facts().contains(&nq) {
        return bad("+d (2.1)", format!("{nq} is a fact"));
    }
    let Some(r) = constitutive(t, q).find(|r| r.is_defeasible() && body_applicable(r, p)) else {
        return bad("+d (2.2)", format!("no defeasible rule for {q} is applicable"));
    };
    for s in constitutive(t, &nq) {
        let handled = body_discarded(s, p)
            || constitutive(t, q).any(|u| body_applicable(u, p) && beats(t, u, s));
        if !handled {
            return bad(
                "+d (2.3)",
                format!("{} for {nq} is neither discarded nor defeated", s.label()),
            );
        }
    }
    ok("+d (2.2)", format!("{} applicable", r.label()))
}

fn minus_d(t: &Theory, p: &Prefix, q: &Literal) -> StepVerdict {
    let nq = q.complement();
    if t.facts().contains(q) {
        return bad("-d (1)", format!("{q} is a fact"));
    }
    if t.facts().contains(&nq) {
        return ok("-d (2.1)", format!("{nq} is a fact"));
    }
    if constitutive(t, q)
        .filter(|r| r.is_defeasible())
        .all(|r| body_discarded(r, p))
    {
        return ok("-d (2.2)", format!("every defeasible rule for {q} is discarded"));
    }
    for s in constitutive(t, &nq) {
        if body_applicable(s, p)
            && constitutive(t, q).all(|u| body_discarded(u, p) || !beats(t, u, s))
        {
            return ok("-d (2.3)", format!("{} for {nq} applicable and undefeated", s.label()));
        }
    }
    bad(
        "-d (2)",
        format!("a rule for {q} is live and no attacker for {nq} prevails"),
    )
}

fn plus_o(t: &Theory, p: &Prefix, q: &Literal) -> StepVerdict {
    let nq = q.complement();
    let pro = slots(t, q);
    let Some(&(r, j)) = pro
        .iter()
        .find(|&&(r, j)| r.is_defeasible() && app_at(r, j, p))
    else {
        return bad(
            "+dO (1)",
            format!("no defeasible prescriptive rule is applicable for {q}"),
        );
    };
    for (s, k) in slots(t, &nq) {
        let handled = disc_at(s, k, p)
            || pro
                .iter()
                .any(|&(u, m)| app_at(u, m, p) && beats(t, u, s));
        if !handled {
            return bad(
                "+dO (2.2)",
                format!(
                    "{} for {nq} at index {k} is neither discarded nor defeated",
                    s.label()
                ),
            );
        }
    }
    ok("+dO (1)", format!("{} applicable at index {j}", r.label()))
}

fn minus_o(t: &Theory, p: &Prefix, q: &Literal) -> StepVerdict {
    let nq = q.complement();
    let pro = slots(t, q);
    if pro
        .iter()
        .filter(|(r, _)| r.is_defeasible())
        .all(|&(r, j)| disc_at(r, j, p))
    {
        return ok(
            "-dO (1)",
            format!("every defeasible prescriptive rule for {q} is discarded"),
        );
    }
    let discarded = |u: &Rule| {
        pro.iter()
            .filter(|(x, _)| x.label() == u.label())
            .all(|&(x, m)| disc_at(x, m, p))
    };
    for (s, k) in slots(t, &nq) {
        if app_at(s, k, p) && pro.iter().all(|&(u, _)| discarded(u) || !beats(t, u, s)) {
            return ok(
                "-dO (2)",
                format!("{} for {nq} applicable at index {k} and undefeated", s.label()),
            );
        }
    }
    bad(
        "-dO (2.1)",
        format!("a prescriptive rule for {q} is live and no attacker for {nq} prevails"),
    )
}

/// Whether some other conjunct's violation appears in `P(1..k)`, where
/// `k` is the earliest step proving `ci` as an obligation.
fn violated_before(p: &Prefix, c: &Conjunction, i: usize, k: usize) -> Option<Literal> {
    c.conjuncts()
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, cj)| cj.complement())
        .find(|v| {
            p.position(&TaggedExpression::plus_d(v.clone()))
                .is_some_and(|pos| pos < k)
        })
}

fn plus_and(p: &Prefix, c: &Conjunction) -> StepVerdict {
    for (i, ci) in c.conjuncts().iter().enumerate() {
        let Some(k) = p.position(&TaggedExpression::plus_o(ci.clone())) else {
            return bad("+dO-and (1)", format!("+dO {ci} not yet derived"));
        };
        if let Some(v) = violated_before(p, c, i, k) {
            return bad(
                "+dO-and (2)",
                format!("+d {v} precedes +dO {ci} at step {}", k + 1),
            );
        }
    }
    ok("+dO-and", "every conjunct derived before the other violations")
}

fn minus_and(p: &Prefix, c: &Conjunction) -> StepVerdict {
    for (i, ci) in c.conjuncts().iter().enumerate() {
        if p.mo(ci) {
            return ok("-dO-and (1)", format!("-dO {ci} derived"));
        }
        if let Some(k) = p.position(&TaggedExpression::plus_o(ci.clone())) {
            if let Some(v) = violated_before(p, c, i, k) {
                return ok(
                    "-dO-and (2)",
                    format!("+d {v} precedes +dO {ci} at step {}", k + 1),
                );
            }
        }
    }
    bad(
        "-dO-and",
        "no conjunct is refuted or derived after another's violation",
    )
}

/// Checks `e` as the step following `prefix`.
pub fn check_step(t: &Theory, prefix: &[TaggedExpression], e: &TaggedExpression) -> StepVerdict {
    let p = Prefix::new(prefix);
    check_with(t, &p, e)
}

fn check_with(t: &Theory, p: &Prefix, e: &TaggedExpression) -> StepVerdict {
    match e {
        TaggedExpression::Factual(Sign::Plus, q) => plus_d(t, p, q),
        TaggedExpression::Factual(Sign::Minus, q) => minus_d(t, p, q),
        TaggedExpression::Obligation(Sign::Plus, q) => plus_o(t, p, q),
        TaggedExpression::Obligation(Sign::Minus, q) => minus_o(t, p, q),
        TaggedExpression::Conjunctive(Sign::Plus, c) => plus_and(p, c),
        TaggedExpression::Conjunctive(Sign::Minus, c) => minus_and(p, c),
    }
}

/// Checks every step in order, stopping at the first violation.
pub fn check_derivation(t: &Theory, d: &Derivation) -> CheckReport {
    let steps = d.steps();
    let mut p = Prefix::new(&[]);
    let mut records = Vec::new();
    let mut accepted = true;
    for (i, e) in steps.iter().enumerate() {
        let verdict = check_with(t, &p, e);
        let justified = verdict.is_justified();
        records.push(StepRecord {
            position: i + 1,
            step: e.to_string(),
            verdict,
        });
        if !justified {
            accepted = false;
            break;
        }
        p.first.entry(e).or_insert(i);
    }
    CheckReport {
        accepted,
        length: steps.len(),
        steps: records,
    }
}

/// No target occurs in `d` with both signs.
pub fn no_conflict(_t: &Theory, d: &Derivation) -> bool {
    let set: std::collections::HashSet<&TaggedExpression> = d.steps().iter().collect();
    d.steps().iter().all(|e| !set.contains(&e.negated()))
}
