//! Builds a linear derivation for a conclusion of the fixpoint.
//!
//! Every conclusion entered the fixpoint at some stage `s` because its
//! clause held in `E(s-1)`. The support of a step is drawn from the members
//! of that earlier stage, so ordering the support closure by dependencies
//! gives a derivation whose steps hold on their prefixes. Conjunctions add
//! ordering constraints between obligations and the violations of the other
//! conjuncts; supports that avoid those violations are preferred. Every
//! result is run through the checker before it is returned.

use std::cell::RefCell;
use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, HashSet};

use thiserror::Error;

use super::checker::check_derivation;
use super::derivation::{Derivation, Sign, TaggedExpression as Te};
use crate::engine::reduct::reduct;
use crate::engine::{Engine, EngineError, StageTrace};
use crate::theory::{BodyAtom, Conjunction, Literal, Rule, Theory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("{0} does not hold in the extension")]
    NotDerivable(String),
    #[error("no checker-accepted ordering found for {0}")]
    Unschedulable(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// One way of satisfying a clause: every group needs one of its options,
/// an option being a set of earlier conclusions.
#[derive(Default)]
struct Alt {
    groups: Vec<Vec<Vec<Te>>>,
    order: Vec<(Te, Te)>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Policy {
    Clean,
    Earliest,
}

/// `(before, after)` ordering constraints.
type Edges = Vec<(Te, Te)>;
/// Rank of an alternative: dirty, latest stage, item count.
type Score = (bool, usize, usize);

struct Ctx<'a> {
    engine: &'a Engine,
    t: &'a Theory,
    trace: &'a StageTrace,
    extra: RefCell<HashMap<Te, Option<usize>>>,
    avoid: BTreeSet<Te>,
    clean: RefCell<HashMap<Te, bool>>,
    busy: RefCell<HashSet<Te>>,
}

fn body_item(a: &BodyAtom, positive: bool) -> Te {
    match (a, positive) {
        (BodyAtom::Plain(l), true) => Te::plus_d(l.clone()),
        (BodyAtom::Plain(l), false) => Te::minus_d(l.clone()),
        (BodyAtom::Obl(l), true) => Te::plus_o(l.clone()),
        (BodyAtom::Obl(l), false) => Te::minus_o(l.clone()),
        (BodyAtom::NegObl(l), true) => Te::minus_o(l.clone()),
        (BodyAtom::NegObl(l), false) => Te::plus_o(l.clone()),
        (BodyAtom::ConjObl(c), true) => Te::plus_and(c.clone()),
        (BodyAtom::ConjObl(c), false) => Te::minus_and(c.clone()),
    }
}

impl<'a> Ctx<'a> {
    fn new(engine: &'a Engine, trace: &'a StageTrace) -> Self {
        Ctx {
            engine,
            t: engine.theory(),
            trace,
            extra: RefCell::default(),
            avoid: BTreeSet::new(),
            clean: RefCell::default(),
            busy: RefCell::default(),
        }
    }

    /// Stage at which `e` holds. Conclusions outside the traced universe
    /// that still hold are placed after the last stage.
    fn stage(&self, e: &Te) -> Option<usize> {
        if let Some(s) = self.trace.stage_of(e) {
            return Some(s);
        }
        if let Some(&s) = self.extra.borrow().get(e) {
            return s;
        }
        let s = match self.engine.query(e) {
            Ok(true) => Some(self.trace.len()),
            _ => None,
        };
        self.extra.borrow_mut().insert(e.clone(), s);
        s
    }

    fn before(&self, e: &Te, s: usize) -> bool {
        self.stage(e).is_some_and(|x| x < s)
    }

    fn all_before(&self, items: Vec<Te>, s: usize) -> Option<Vec<Te>> {
        items.iter().all(|x| self.before(x, s)).then_some(items)
    }

    fn body_app(&self, r: &Rule, s: usize) -> Option<Vec<Te>> {
        self.all_before(r.antecedent().iter().map(|a| body_item(a, true)).collect(), s)
    }

    fn body_disc(&self, r: &Rule, s: usize) -> Vec<Vec<Te>> {
        r.antecedent()
            .iter()
            .map(|a| body_item(a, false))
            .filter(|x| self.before(x, s))
            .map(|x| vec![x])
            .collect()
    }

    fn app_at(&self, r: &Rule, j: usize, s: usize) -> Option<Vec<Te>> {
        let mut items = self.body_app(r, s)?;
        for c in &r.head().elements()[..j - 1] {
            items.push(Te::plus_o(c.clone()));
            items.push(Te::plus_d(c.complement()));
        }
        self.all_before(items, s)
    }

    fn disc_at(&self, r: &Rule, j: usize, s: usize) -> Vec<Vec<Te>> {
        let mut out = self.body_disc(r, s);
        for c in &r.head().elements()[..j - 1] {
            for x in [Te::minus_o(c.clone()), Te::minus_d(c.complement())] {
                if self.before(&x, s) {
                    out.push(vec![x]);
                }
            }
        }
        out
    }

    fn constitutive(&self, q: &Literal) -> Vec<&'a Rule> {
        self.t
            .rules()
            .iter()
            .filter(|r| !r.is_prescriptive() && r.head().get(1) == Some(q))
            .collect()
    }

    fn slots(&self, q: &Literal) -> Vec<(&'a Rule, usize)> {
        self.t
            .rules()
            .iter()
            .filter(|r| r.is_prescriptive())
            .flat_map(|r| r.head().indexes_of(q).map(move |j| (r, j)))
            .collect()
    }

    fn beats(&self, a: &Rule, b: &Rule) -> bool {
        self.t.is_superior(a.label(), b.label())
    }

    fn requirements(&self, e: &Te) -> Vec<Alt> {
        let Some(s) = self.stage(e) else {
            return Vec::new();
        };
        let facts = self.t.facts();
        let mut alts = Vec::new();
        match e {
            Te::Factual(Sign::Plus, q) => {
                let nq = q.complement();
                if facts.contains(q) {
                    alts.push(Alt::default());
                } else if !facts.contains(&nq) {
                    let pro = self.constitutive(q);
                    let mut groups = vec![pro
                        .iter()
                        .filter(|r| r.is_defeasible())
                        .filter_map(|r| self.body_app(r, s))
                        .collect::<Vec<_>>()];
                    for a in self.constitutive(&nq) {
                        let mut g = self.body_disc(a, s);
                        g.extend(
                            pro.iter()
                                .filter(|u| self.beats(u, a))
                                .filter_map(|u| self.body_app(u, s)),
                        );
                        groups.push(g);
                    }
                    alts.push(Alt { groups, order: vec![] });
                }
            }
            Te::Factual(Sign::Minus, q) => {
                let nq = q.complement();
                if facts.contains(q) {
                    return alts;
                }
                if facts.contains(&nq) {
                    alts.push(Alt::default());
                }
                let pro = self.constitutive(q);
                alts.push(Alt {
                    groups: pro
                        .iter()
                        .filter(|r| r.is_defeasible())
                        .map(|r| self.body_disc(r, s))
                        .collect(),
                    order: vec![],
                });
                for a in self.constitutive(&nq) {
                    let Some(app) = self.body_app(a, s) else { continue };
                    let mut groups = vec![vec![app]];
                    for u in pro.iter().filter(|u| self.beats(u, a)) {
                        groups.push(self.body_disc(u, s));
                    }
                    alts.push(Alt { groups, order: vec![] });
                }
            }
            Te::Obligation(Sign::Plus, q) => {
                let pro = self.slots(q);
                let mut groups = vec![pro
                    .iter()
                    .filter(|(r, _)| r.is_defeasible())
                    .filter_map(|&(r, j)| self.app_at(r, j, s))
                    .collect::<Vec<_>>()];
                for (a, k) in self.slots(&q.complement()) {
                    let mut g = self.disc_at(a, k, s);
                    g.extend(
                        pro.iter()
                            .filter(|(u, _)| self.beats(u, a))
                            .filter_map(|&(u, m)| self.app_at(u, m, s)),
                    );
                    groups.push(g);
                }
                alts.push(Alt { groups, order: vec![] });
            }
            Te::Obligation(Sign::Minus, q) => {
                let pro = self.slots(q);
                alts.push(Alt {
                    groups: pro
                        .iter()
                        .filter(|(r, _)| r.is_defeasible())
                        .map(|&(r, j)| self.disc_at(r, j, s))
                        .collect(),
                    order: vec![],
                });
                for (a, k) in self.slots(&q.complement()) {
                    let Some(app) = self.app_at(a, k, s) else { continue };
                    let mut groups = vec![vec![app]];
                    for &(u, m) in pro.iter().filter(|(u, _)| self.beats(u, a)) {
                        groups.push(self.disc_at(u, m, s));
                    }
                    alts.push(Alt { groups, order: vec![] });
                }
            }
            Te::Conjunctive(Sign::Plus, c) => {
                let items: Vec<Te> = c.conjuncts().iter().cloned().map(Te::plus_o).collect();
                if let Some(items) = self.all_before(items, s) {
                    alts.push(Alt {
                        groups: items.into_iter().map(|x| vec![vec![x]]).collect(),
                        order: vec![],
                    });
                }
            }
            Te::Conjunctive(Sign::Minus, c) => {
                for (i, ci) in c.conjuncts().iter().enumerate() {
                    let refuted = Te::minus_o(ci.clone());
                    if self.before(&refuted, s) {
                        alts.push(Alt {
                            groups: vec![vec![vec![refuted]]],
                            order: vec![],
                        });
                    }
                    let obl = Te::plus_o(ci.clone());
                    if self.stage(&obl).is_none() {
                        continue;
                    }
                    for (j, cj) in c.conjuncts().iter().enumerate() {
                        let v = Te::plus_d(cj.complement());
                        if j != i && self.stage(&v).is_some() {
                            alts.push(Alt {
                                groups: vec![vec![vec![obl.clone()]], vec![vec![v.clone()]]],
                                order: vec![(v, obl.clone())],
                            });
                        }
                    }
                }
            }
        }
        alts.retain(|a| a.groups.iter().all(|g| !g.is_empty()));
        alts
    }

    fn is_clean(&self, e: &Te) -> bool {
        if self.avoid.contains(e) {
            return false;
        }
        if let Some(&c) = self.clean.borrow().get(e) {
            return c;
        }
        if !self.busy.borrow_mut().insert(e.clone()) {
            return false;
        }
        let c = self.requirements(e).iter().any(|a| {
            a.groups
                .iter()
                .all(|g| g.iter().any(|o| o.iter().all(|x| self.is_clean(x))))
        });
        self.busy.borrow_mut().remove(e);
        self.clean.borrow_mut().insert(e.clone(), c);
        c
    }

    fn option_key(&self, o: &[Te], policy: Policy) -> (bool, usize, usize, String) {
        let dirty = policy == Policy::Clean && !o.iter().all(|x| self.is_clean(x));
        let latest = o.iter().filter_map(|x| self.stage(x)).max().unwrap_or(0);
        let text = o.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        (dirty, latest, o.len(), text)
    }

    /// Chosen support items and ordering edges for `e`.
    fn choose(&self, e: &Te, policy: Policy) -> Option<(Vec<Te>, Edges)> {
        let mut best: Option<(Score, Vec<Te>, Edges)> = None;
        for alt in self.requirements(e) {
            let mut items = Vec::new();
            let mut score = (false, 0, 0);
            for g in &alt.groups {
                let o = g
                    .iter()
                    .min_by_key(|o| self.option_key(o, policy))
                    .expect("groups are non-empty");
                let (dirty, latest, n, _) = self.option_key(o, policy);
                score = (score.0 || dirty, score.1.max(latest), score.2 + n);
                items.extend(o.iter().cloned());
            }
            if best.as_ref().is_none_or(|(b, _, _)| score < *b) {
                best = Some((score, items, alt.order));
            }
        }
        best.map(|(_, items, order)| (items, order))
    }
}

fn conj_violations(c: &Conjunction) -> impl Iterator<Item = Te> + '_ {
    c.conjuncts().iter().map(|l| Te::plus_d(l.complement()))
}

fn schedule(ctx: &Ctx, goal: &Te, policy: Policy) -> Option<Derivation> {
    let mut deps: BTreeMap<Te, Vec<Te>> = BTreeMap::new();
    let mut order = Vec::new();
    let mut work = vec![goal.clone()];
    while let Some(e) = work.pop() {
        if deps.contains_key(&e) {
            continue;
        }
        let (items, edges) = ctx.choose(&e, policy)?;
        work.extend(items.iter().cloned());
        order.extend(edges);
        deps.insert(e, items);
    }

    let mut succ: BTreeMap<&Te, Vec<&Te>> = BTreeMap::new();
    let mut indeg: BTreeMap<&Te, usize> = deps.keys().map(|k| (k, 0)).collect();
    let mut edge = |a: &Te, b: &Te| {
        let (Some((a, _)), Some((b, _))) = (deps.get_key_value(a), deps.get_key_value(b)) else {
            return;
        };
        succ.entry(a).or_default().push(b);
        *indeg.get_mut(b).expect("node") += 1;
    };
    for (e, items) in &deps {
        for x in items {
            edge(x, e);
        }
    }
    for (a, b) in &order {
        edge(a, b);
    }
    for e in deps.keys() {
        if let Te::Conjunctive(Sign::Plus, c) = e {
            for (i, ci) in c.conjuncts().iter().enumerate() {
                for (j, v) in conj_violations(c).enumerate() {
                    if i != j {
                        edge(&Te::plus_o(ci.clone()), &v);
                    }
                }
            }
        }
    }

    let key = |e: &Te| Reverse((ctx.stage(e).unwrap_or(usize::MAX), e.to_string(), e.clone()));
    let mut ready: BinaryHeap<_> = indeg
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(e, _)| key(e))
        .collect();
    let mut out = Derivation::default();
    while let Some(Reverse((_, _, e))) = ready.pop() {
        if let Some(next) = succ.get(&e) {
            for &n in next {
                let d = indeg.get_mut(n).expect("node");
                *d -= 1;
                if *d == 0 {
                    ready.push(key(n));
                }
            }
        }
        out.push(e);
    }
    (out.len() == deps.len()).then_some(out)
}

/// Violations that must not precede the conjunct obligations of the
/// positive conjunctions a schedule for `goal` relies on.
fn forbidden(ctx: &Ctx, goal: &Te, policy: Policy) -> BTreeSet<Te> {
    let mut seen = BTreeSet::new();
    let mut work = vec![goal.clone()];
    let mut out = BTreeSet::new();
    while let Some(e) = work.pop() {
        if !seen.insert(e.clone()) {
            continue;
        }
        if let Te::Conjunctive(Sign::Plus, c) = &e {
            out.extend(conj_violations(c));
        }
        if let Some((items, _)) = ctx.choose(&e, policy) {
            work.extend(items);
        }
    }
    out
}

fn attempt(engine: &Engine, trace: &StageTrace, goal: &Te, policy: Policy) -> Option<Derivation> {
    let mut ctx = Ctx::new(engine, trace);
    if policy == Policy::Clean {
        // Grow the avoided set until it covers every conjunction the
        // chosen supports reach.
        for _ in 0..8 {
            let next = forbidden(&ctx, goal, policy);
            if next == ctx.avoid {
                break;
            }
            ctx.avoid = next;
            ctx.clean.borrow_mut().clear();
        }
    }
    let d = schedule(&ctx, goal, policy)?;
    check_derivation(engine.theory(), &d).accepted.then_some(d)
}

/// Derivation built from the obligations each conjunct has once the other
/// conjuncts' violations are removed.
fn via_reducts(engine: &Engine, c: &Conjunction, goal: &Te) -> Option<Derivation> {
    let mut steps: Vec<Te> = Vec::new();
    for (i, ci) in c.conjuncts().iter().enumerate() {
        let l: BTreeSet<Literal> = c
            .conjuncts()
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, x)| x.complement())
            .collect();
        let sub = Engine::new(reduct(engine.theory(), &l)).with_parallelism(engine.parallelism());
        let fp = sub.fixpoint().ok()?;
        let part = attempt(&sub, &fp.trace, &Te::plus_o(ci.clone()), Policy::Clean)?;
        for s in part.steps() {
            if !steps.contains(s) {
                steps.push(s.clone());
            }
        }
    }
    steps.push(goal.clone());
    let d = Derivation::new(steps);
    check_derivation(engine.theory(), &d).accepted.then_some(d)
}

/// A checker-accepted derivation ending in `goal`, keeping only the steps
/// its conclusion depends on.
pub fn witness_derivation(engine: &Engine, goal: &Te) -> Result<Derivation, WitnessError> {
    if !engine.query(goal)? {
        return Err(WitnessError::NotDerivable(goal.to_string()));
    }
    let fp = engine.fixpoint()?;
    for policy in [Policy::Clean, Policy::Earliest] {
        if let Some(d) = attempt(engine, &fp.trace, goal, policy) {
            return Ok(d);
        }
    }
    if let Te::Conjunctive(Sign::Plus, c) = goal {
        if let Some(d) = via_reducts(engine, c, goal) {
            return Ok(d);
        }
    }
    Err(WitnessError::Unschedulable(goal.to_string()))
}
