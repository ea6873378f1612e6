//! Naive reference evaluator: applies the extension operator to whole sets
//! until nothing changes, with every reduct computed as a fresh theory.
//! Shares no code with the engine beyond the theory types.

use std::collections::{BTreeSet, HashMap};

use ddl_core::theory::{BodyAtom, Conjunction, Literal, Rule, Theory};
use ddl_core::Extension;

/// `red(t, l)`: facts in `l` dropped, rules with a head literal in `l`
/// dropped together with their superiority pairs.
pub fn reduct(t: &Theory, l: &BTreeSet<Literal>) -> Theory {
    let facts: Vec<Literal> = t.facts().iter().filter(|f| !l.contains(f)).cloned().collect();
    let rules: Vec<Rule> = t
        .rules()
        .iter()
        .filter(|r| !r.head().elements().iter().any(|h| l.contains(h)))
        .cloned()
        .collect();
    let kept: BTreeSet<&str> = rules.iter().map(|r| r.label()).collect();
    let sup: Vec<(String, String)> = t
        .superiority()
        .iter()
        .filter(|(a, b)| kept.contains(a.as_str()) && kept.contains(b.as_str()))
        .cloned()
        .collect();
    Theory::new(facts, rules, sup).expect("reduct of a valid theory is valid")
}

struct Eval<'a> {
    t: &'a Theory,
    e: &'a Extension,
}

impl Eval<'_> {
    fn holds(&self, a: &BodyAtom) -> bool {
        match a {
            BodyAtom::Plain(l) => self.e.factual_pos.contains(l),
            BodyAtom::Obl(l) => self.e.obligation_pos.contains(l),
            BodyAtom::NegObl(l) => self.e.obligation_neg.contains(l),
            BodyAtom::ConjObl(c) => self.e.conj_pos.contains(c),
        }
    }

    fn fails(&self, a: &BodyAtom) -> bool {
        match a {
            BodyAtom::Plain(l) => self.e.factual_neg.contains(l),
            BodyAtom::Obl(l) => self.e.obligation_neg.contains(l),
            BodyAtom::NegObl(l) => self.e.obligation_pos.contains(l),
            BodyAtom::ConjObl(c) => self.e.conj_neg.contains(c),
        }
    }

    fn body_ok(&self, r: &Rule) -> bool {
        r.antecedent().iter().all(|a| self.holds(a))
    }

    fn body_out(&self, r: &Rule) -> bool {
        r.antecedent().iter().any(|a| self.fails(a))
    }

    /// Applicable at 0-based position `i` of the chain.
    fn app(&self, r: &Rule, i: usize) -> bool {
        self.body_ok(r)
            && r.head().elements()[..i].iter().all(|c| {
                self.e.obligation_pos.contains(c) && self.e.factual_pos.contains(&c.complement())
            })
    }

    fn disc(&self, r: &Rule, i: usize) -> bool {
        self.body_out(r)
            || r.head().elements()[..i].iter().any(|c| {
                self.e.obligation_neg.contains(c) || self.e.factual_neg.contains(&c.complement())
            })
    }

    fn sup(&self, a: &Rule, b: &Rule) -> bool {
        self.t.superiority().contains(&(a.label().to_string(), b.label().to_string()))
    }

    fn factual(&self, q: &Literal) -> Vec<&Rule> {
        self.t
            .rules()
            .iter()
            .filter(|r| !r.is_prescriptive() && r.head().elements()[0] == *q)
            .collect()
    }

    /// Prescriptive `(rule, position)` pairs with `q` at that position.
    fn deontic(&self, q: &Literal) -> Vec<(&Rule, usize)> {
        let mut out = Vec::new();
        for r in self.t.rules().iter().filter(|r| r.is_prescriptive()) {
            for (i, h) in r.head().elements().iter().enumerate() {
                if h == q {
                    out.push((r, i));
                }
            }
        }
        out
    }

    fn plus(&self, q: &Literal) -> bool {
        let f = self.t.facts();
        if f.contains(q) {
            return true;
        }
        if f.contains(&q.complement()) {
            return false;
        }
        let pro = self.factual(q);
        let live = pro.iter().any(|r| r.is_defeasible() && self.body_ok(r));
        live && self.factual(&q.complement()).iter().all(|s| {
            self.body_out(s) || pro.iter().any(|t| self.body_ok(t) && self.sup(t, s))
        })
    }

    fn minus(&self, q: &Literal) -> bool {
        let f = self.t.facts();
        if f.contains(q) {
            return false;
        }
        if f.contains(&q.complement()) {
            return true;
        }
        let pro = self.factual(q);
        if pro.iter().filter(|r| r.is_defeasible()).all(|r| self.body_out(r)) {
            return true;
        }
        self.factual(&q.complement()).iter().any(|s| {
            self.body_ok(s) && pro.iter().all(|t| self.body_out(t) || !self.sup(t, s))
        })
    }

    fn oplus(&self, q: &Literal) -> bool {
        let pro = self.deontic(q);
        let live = pro.iter().any(|&(r, i)| r.is_defeasible() && self.app(r, i));
        live && self.deontic(&q.complement()).iter().all(|&(s, k)| {
            self.disc(s, k) || pro.iter().any(|&(t, i)| self.app(t, i) && self.sup(t, s))
        })
    }

    fn ominus(&self, q: &Literal) -> bool {
        let pro = self.deontic(q);
        if pro.iter().filter(|(r, _)| r.is_defeasible()).all(|&(r, i)| self.disc(r, i)) {
            return true;
        }
        // A supporter blocks an attack unless it is discarded at every
        // position holding q.
        let discarded = |t: &Rule| {
            pro.iter()
                .filter(|(x, _)| x.label() == t.label())
                .all(|&(x, i)| self.disc(x, i))
        };
        self.deontic(&q.complement()).iter().any(|&(s, k)| {
            self.app(s, k) && pro.iter().all(|&(t, _)| discarded(t) || !self.sup(t, s))
        })
    }
}

/// Per conjunction and conjunct: `None` when removing the other
/// conjuncts' violations leaves the theory unchanged, otherwise whether the
/// conjunct stays obligatory.
fn independence(t: &Theory, memo: &mut HashMap<String, Extension>) -> Vec<(Conjunction, Vec<Option<bool>>)> {
    t.body_conjunctions()
        .into_iter()
        .map(|c| {
            let per = c
                .conjuncts()
                .iter()
                .enumerate()
                .map(|(i, ci)| {
                    let l: BTreeSet<Literal> = c
                        .conjuncts()
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, x)| x.complement())
                        .collect();
                    let red = reduct(t, &l);
                    if red == *t {
                        None
                    } else {
                        Some(fixpoint_memo(&red, memo).obligation_pos.contains(ci))
                    }
                })
                .collect();
            (c, per)
        })
        .collect()
}

fn fixpoint_memo(t: &Theory, memo: &mut HashMap<String, Extension>) -> Extension {
    let key = ddl_core::serialize_theory(t);
    if let Some(e) = memo.get(&key) {
        return e.clone();
    }
    let indep = independence(t, memo);
    let lits: Vec<Literal> = t
        .atoms()
        .into_iter()
        .flat_map(|a| [Literal::new(a.clone(), true), Literal::new(a, false)])
        .collect();

    let mut e = Extension::default();
    e.factual_pos.extend(t.facts().iter().cloned());
    loop {
        let ev = Eval { t, e: &e };
        let mut next = e.clone();
        for q in &lits {
            if ev.plus(q) {
                next.factual_pos.insert(q.clone());
            }
            if ev.minus(q) {
                next.factual_neg.insert(q.clone());
            }
            if ev.oplus(q) {
                next.obligation_pos.insert(q.clone());
            }
            if ev.ominus(q) {
                next.obligation_neg.insert(q.clone());
            }
        }
        for (c, per) in &indep {
            let cs = c.conjuncts();
            let all = cs
                .iter()
                .zip(per)
                .all(|(ci, ind)| e.obligation_pos.contains(ci) && *ind != Some(false));
            let some = cs
                .iter()
                .zip(per)
                .any(|(ci, ind)| e.obligation_neg.contains(ci) || *ind == Some(false));
            if all {
                next.conj_pos.insert(c.clone());
            }
            if some {
                next.conj_neg.insert(c.clone());
            }
        }
        if next == e {
            break;
        }
        e = next;
    }
    memo.insert(key, e.clone());
    e
}

pub fn reference_extension(t: &Theory) -> Extension {
    fixpoint_memo(t, &mut HashMap::new())
}
