//! Exhaustive search over derivation orders.
//!
//! Every proof condition is monotone in the prefix except for the
//! placement of conjunct obligations relative to violations of the other
//! conjuncts. Steps outside that set are added as soon as they check; the
//! search branches over the order of the remaining ones.

use std::collections::{BTreeSet, HashSet};

use ddl_core::proof::checker::{check_step, StepVerdict};
use ddl_core::theory::{Atom, Conjunction, Literal, Theory};
use ddl_core::TaggedExpression as Te;

pub struct SearchResult {
    /// Conjunctions with `+dO c` reached in some checked derivation.
    pub derivable: BTreeSet<Conjunction>,
    /// False when the node limit cut the search short.
    pub complete: bool,
    pub nodes: usize,
}

/// Step set plus violation-before-obligation pairs.
type Key = (Vec<Te>, Vec<(Te, Te)>);

struct Search<'a> {
    t: &'a Theory,
    greedy: Vec<Te>,
    ordered: Vec<Te>,
    seen: HashSet<Key>,
    derivable: BTreeSet<Conjunction>,
    nodes: usize,
    limit: usize,
}

fn ok(t: &Theory, prefix: &[Te], e: &Te) -> bool {
    matches!(check_step(t, prefix, e), StepVerdict::Justified { .. })
}

impl Search<'_> {
    fn closure(&self, prefix: &mut Vec<Te>) {
        loop {
            let before = prefix.len();
            for e in &self.greedy {
                if !prefix.contains(e) && ok(self.t, prefix, e) {
                    prefix.push(e.clone());
                }
            }
            if prefix.len() == before {
                break;
            }
        }
    }

    /// Set of steps plus which ordered violations precede which ordered
    /// obligations; two prefixes with the same key have the same futures.
    fn key(&self, prefix: &[Te]) -> Key {
        let mut set: Vec<Te> = prefix.to_vec();
        set.sort();
        let mut pairs = Vec::new();
        for (i, e) in prefix.iter().enumerate() {
            if matches!(e, Te::Obligation(..)) && self.ordered.contains(e) {
                for v in &prefix[..i] {
                    if matches!(v, Te::Factual(..)) && self.ordered.contains(v) {
                        pairs.push((v.clone(), e.clone()));
                    }
                }
            }
        }
        pairs.sort();
        (set, pairs)
    }

    fn run(&mut self, mut prefix: Vec<Te>) {
        self.closure(&mut prefix);
        if !self.seen.insert(self.key(&prefix)) {
            return;
        }
        self.nodes += 1;
        for e in &prefix {
            if let Te::Conjunctive(ddl_core::proof::derivation::Sign::Plus, c) = e {
                self.derivable.insert(c.clone());
            }
        }
        if self.nodes >= self.limit {
            return;
        }
        let next: Vec<Te> = self
            .ordered
            .iter()
            .filter(|e| !prefix.contains(e) && ok(self.t, &prefix, e))
            .cloned()
            .collect();
        for e in next {
            let mut p = prefix.clone();
            p.push(e);
            self.run(p);
            if self.nodes >= self.limit {
                return;
            }
        }
    }
}

/// Which of `targets` (together with the body conjunctions of `t`) have a
/// checker-accepted derivation.
pub fn derivable_conjunctions(t: &Theory, targets: &[Conjunction], limit: usize) -> SearchResult {
    let mut conjs: BTreeSet<Conjunction> = t.body_conjunctions();
    conjs.extend(targets.iter().cloned());
    let mut atoms: BTreeSet<Atom> = t.atoms();
    for c in &conjs {
        atoms.extend(c.conjuncts().iter().map(|l| l.atom().clone()));
    }
    let lits: Vec<Literal> = atoms
        .into_iter()
        .flat_map(|a| [Literal::new(a.clone(), true), Literal::new(a, false)])
        .collect();

    let mut ordered = BTreeSet::new();
    for c in &conjs {
        for x in c.conjuncts() {
            ordered.insert(Te::plus_o(x.clone()));
            ordered.insert(Te::plus_d(x.complement()));
        }
    }
    let mut greedy = Vec::new();
    for q in &lits {
        for e in [
            Te::plus_d(q.clone()),
            Te::minus_d(q.clone()),
            Te::plus_o(q.clone()),
            Te::minus_o(q.clone()),
        ] {
            if !ordered.contains(&e) {
                greedy.push(e);
            }
        }
    }
    for c in &conjs {
        greedy.push(Te::plus_and(c.clone()));
        greedy.push(Te::minus_and(c.clone()));
    }

    let mut s = Search {
        t,
        greedy,
        ordered: ordered.into_iter().collect(),
        seen: HashSet::new(),
        derivable: BTreeSet::new(),
        nodes: 0,
        limit,
    };
    s.run(Vec::new());
    SearchResult {
        complete: s.nodes < limit,
        derivable: s.derivable,
        nodes: s.nodes,
    }
}
