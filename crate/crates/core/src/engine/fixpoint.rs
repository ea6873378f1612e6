//! Stage-exact semi-naive iteration of the extension operator over one
//! view (the root theory or one of its reducts).
//!
//! Each round evaluates the dirty literals and conjunctions against `En`
//! only; additions are applied together at the end of the round, so the
//! stored deltas are exactly `En+1 \ En`.

use super::compiled::{Compiled, ConjId, LitId, RuleId};

/// Which rules and facts of the root survive in a view.
#[derive(Debug, Clone)]
pub(crate) struct View {
    pub rules: Vec<bool>,
    pub facts: Vec<bool>,
    /// Literals whose removal produced this view, sorted.
    pub removed: Vec<LitId>,
}

impl View {
    pub fn root(c: &Compiled) -> Self {
        View {
            rules: vec![true; c.rules.len()],
            facts: c.facts.clone(),
            removed: Vec::new(),
        }
    }

    /// `red(root, removed)`.
    pub fn from_removed(c: &Compiled, removed: Vec<LitId>) -> Self {
        let mut v = View::root(c);
        for &l in &removed {
            v.facts[l as usize] = false;
            for r in c.heads_of(l) {
                v.rules[r as usize] = false;
            }
        }
        v.removed = removed;
        v
    }

    /// Whether removing `l` changes this view.
    pub fn removes_something(&self, c: &Compiled, l: LitId) -> bool {
        self.facts[l as usize] || c.heads_of(l).any(|r| self.rules[r as usize])
    }
}

/// Outcome of the reduct test for one conjunct.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Indep {
    /// The reduct equals the current theory; decided by stage membership.
    Identity,
    Yes,
    No,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Why {
    Fact,
    Proponent { rule: RuleId, index: u32 },
    ComplementFact,
    NoLiveProponent,
    UndefeatedAttacker { rule: RuleId, index: u32 },
    ConjIndependent,
    ConjRefuted { conjunct: LitId },
    ConjDependent { conjunct: LitId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Item {
    FactualPos(LitId),
    FactualNeg(LitId),
    OblPos(LitId),
    OblNeg(LitId),
    ConjPos(ConjId),
    ConjNeg(ConjId),
}

/// Final sets of one view plus its stage deltas.
#[derive(Debug)]
#[allow(dead_code)]
pub(crate) struct ViewFix {
    pub view: View,
    pub pos: Vec<bool>,
    pub neg: Vec<bool>,
    pub opos: Vec<bool>,
    pub oneg: Vec<bool>,
    pub cpos: Vec<bool>,
    pub cneg: Vec<bool>,
    /// Conjunctions occurring in bodies of the view's rules.
    pub conj_active: Vec<bool>,
    /// Per candidate conjunction, the reduct test of each conjunct.
    pub indep: Vec<Vec<Indep>>,
    pub stages: Vec<Vec<(Item, Why)>>,
}

struct Solver<'a> {
    c: &'a Compiled,
    view: &'a View,
    indep: &'a [Vec<Indep>],
    conj_active: &'a [bool],
    pos: Vec<bool>,
    neg: Vec<bool>,
    opos: Vec<bool>,
    oneg: Vec<bool>,
    cpos: Vec<bool>,
    cneg: Vec<bool>,
    sat: Vec<u32>,
    bdisc: Vec<bool>,
    /// Leading chain elements `ck` with `ck ∈ +O` and `~ck ∈ +`.
    prefix_ok: Vec<u32>,
    /// Smallest `k` with `ck ∈ −O` or `~ck ∈ −`.
    first_bad: Vec<u32>,
    dirty_f: Dirty,
    dirty_o: Dirty,
    dirty_c: Dirty,
    changed: Dirty,
}

struct Dirty {
    flag: Vec<bool>,
    list: Vec<u32>,
}

impl Dirty {
    fn new(n: usize) -> Self {
        Dirty {
            flag: vec![false; n],
            list: Vec::new(),
        }
    }

    fn all(n: usize) -> Self {
        Dirty {
            flag: vec![true; n],
            list: (0..n as u32).collect(),
        }
    }

    fn mark(&mut self, i: u32) {
        if !self.flag[i as usize] {
            self.flag[i as usize] = true;
            self.list.push(i);
        }
    }

    fn take(&mut self) -> Vec<u32> {
        let list = std::mem::take(&mut self.list);
        for &i in &list {
            self.flag[i as usize] = false;
        }
        list
    }
}

/// Runs the stage iteration for `view` given the precomputed reduct tests.
pub(crate) fn solve(
    c: &Compiled,
    view: View,
    conj_active: Vec<bool>,
    indep: Vec<Vec<Indep>>,
) -> ViewFix {
    let nl = c.nlits();
    let nr = c.rules.len();
    let nc = c.conjs.len();
    let mut s = Solver {
        c,
        view: &view,
        indep: &indep,
        conj_active: &conj_active,
        pos: vec![false; nl],
        neg: vec![false; nl],
        opos: vec![false; nl],
        oneg: vec![false; nl],
        cpos: vec![false; nc],
        cneg: vec![false; nc],
        sat: vec![0; nr],
        bdisc: vec![false; nr],
        prefix_ok: vec![0; nr],
        first_bad: vec![u32::MAX; nr],
        dirty_f: Dirty::all(nl),
        dirty_o: Dirty::all(nl),
        dirty_c: Dirty::new(nc),
        changed: Dirty::new(nr),
    };
    for (i, &a) in conj_active.iter().enumerate() {
        if a {
            s.dirty_c.mark(i as u32);
        }
    }

    let facts: Vec<(Item, Why)> = (0..nl as u32)
        .filter(|&q| view.facts[q as usize])
        .map(|q| (Item::FactualPos(q), Why::Fact))
        .collect();
    s.apply(&facts);
    s.changed.take();
    let mut stages = vec![facts];

    loop {
        let adds = s.round();
        if adds.is_empty() {
            break;
        }
        s.apply(&adds);
        for r in s.changed.take() {
            s.mark_heads(r);
        }
        stages.push(adds);
    }

    let Solver {
        pos,
        neg,
        opos,
        oneg,
        cpos,
        cneg,
        ..
    } = s;
    ViewFix {
        view,
        pos,
        neg,
        opos,
        oneg,
        cpos,
        cneg,
        conj_active,
        indep,
        stages,
    }
}

impl Solver<'_> {
    fn active(&self, r: RuleId) -> bool {
        self.view.rules[r as usize]
    }

    fn body_app(&self, r: RuleId) -> bool {
        self.sat[r as usize] == self.c.rules[r as usize].body_len
    }

    fn app_at(&self, r: RuleId, j: u32) -> bool {
        self.body_app(r) && self.prefix_ok[r as usize] + 1 >= j
    }

    fn disc_at(&self, r: RuleId, j: u32) -> bool {
        self.bdisc[r as usize] || self.first_bad[r as usize] < j
    }

    fn round(&mut self) -> Vec<(Item, Why)> {
        let mut adds = Vec::new();
        for q in self.dirty_f.take() {
            if !self.pos[q as usize] {
                if let Some(w) = self.factual_pos(q) {
                    adds.push((Item::FactualPos(q), w));
                }
            }
            if !self.neg[q as usize] {
                if let Some(w) = self.factual_neg(q) {
                    adds.push((Item::FactualNeg(q), w));
                }
            }
        }
        for q in self.dirty_o.take() {
            if !self.opos[q as usize] {
                if let Some(w) = self.oblig_pos(q) {
                    adds.push((Item::OblPos(q), w));
                }
            }
            if !self.oneg[q as usize] {
                if let Some(w) = self.oblig_neg(q) {
                    adds.push((Item::OblNeg(q), w));
                }
            }
        }
        for k in self.dirty_c.take() {
            if !self.conj_active[k as usize] {
                continue;
            }
            if !self.cpos[k as usize] {
                if let Some(w) = self.conj_pos(k) {
                    adds.push((Item::ConjPos(k), w));
                }
            }
            if !self.cneg[k as usize] {
                if let Some(w) = self.conj_neg(k) {
                    adds.push((Item::ConjNeg(k), w));
                }
            }
        }
        adds
    }

    fn factual_pos(&self, q: LitId) -> Option<Why> {
        let c = self.c;
        if self.view.facts[(q ^ 1) as usize] {
            return None;
        }
        let prop = c.head_c[q as usize]
            .iter()
            .copied()
            .find(|&r| self.active(r) && c.rules[r as usize].defeasible && self.body_app(r))?;
        for &s in &c.head_c[(q ^ 1) as usize] {
            if !self.active(s) || self.bdisc[s as usize] {
                continue;
            }
            let beaten = c.superior_of[s as usize].iter().any(|&t| {
                self.active(t)
                    && !c.rules[t as usize].prescriptive
                    && c.rules[t as usize].head[0] == q
                    && self.body_app(t)
            });
            if !beaten {
                return None;
            }
        }
        Some(Why::Proponent {
            rule: prop,
            index: 1,
        })
    }

    fn factual_neg(&self, q: LitId) -> Option<Why> {
        let c = self.c;
        if self.view.facts[q as usize] {
            return None;
        }
        if self.view.facts[(q ^ 1) as usize] {
            return Some(Why::ComplementFact);
        }
        let all_discarded = c.head_c[q as usize].iter().all(|&r| {
            !self.active(r) || !c.rules[r as usize].defeasible || self.bdisc[r as usize]
        });
        if all_discarded {
            return Some(Why::NoLiveProponent);
        }
        for &s in &c.head_c[(q ^ 1) as usize] {
            if !self.active(s) || !self.body_app(s) {
                continue;
            }
            let unbeaten = c.superior_of[s as usize].iter().all(|&t| {
                !self.active(t)
                    || c.rules[t as usize].prescriptive
                    || c.rules[t as usize].head[0] != q
                    || self.bdisc[t as usize]
            });
            if unbeaten {
                return Some(Why::UndefeatedAttacker { rule: s, index: 1 });
            }
        }
        None
    }

    fn oblig_pos(&self, q: LitId) -> Option<Why> {
        let c = self.c;
        let &(prop, j) = c.head_p[q as usize].iter().find(|&&(r, j)| {
            self.active(r) && c.rules[r as usize].defeasible && self.app_at(r, j)
        })?;
        for &(s, k) in &c.head_p[(q ^ 1) as usize] {
            if !self.active(s) || self.disc_at(s, k) {
                continue;
            }
            let beaten = c.superior_of[s as usize].iter().any(|&t| {
                self.active(t)
                    && c.rules[t as usize].prescriptive
                    && c.rules[t as usize]
                        .head
                        .iter()
                        .enumerate()
                        .any(|(m, &h)| h == q && self.app_at(t, m as u32 + 1))
            });
            if !beaten {
                return None;
            }
        }
        Some(Why::Proponent {
            rule: prop,
            index: j,
        })
    }

    fn oblig_neg(&self, q: LitId) -> Option<Why> {
        let c = self.c;
        let all_discarded = c.head_p[q as usize].iter().all(|&(r, j)| {
            !self.active(r) || !c.rules[r as usize].defeasible || self.disc_at(r, j)
        });
        if all_discarded {
            return Some(Why::NoLiveProponent);
        }
        for &(s, k) in &c.head_p[(q ^ 1) as usize] {
            if !self.active(s) || !self.app_at(s, k) {
                continue;
            }
            let unbeaten = c.superior_of[s as usize].iter().all(|&t| {
                !self.active(t)
                    || !c.rules[t as usize].prescriptive
                    || c.rules[t as usize]
                        .head
                        .iter()
                        .enumerate()
                        .all(|(m, &h)| h != q || self.disc_at(t, m as u32 + 1))
            });
            if unbeaten {
                return Some(Why::UndefeatedAttacker { rule: s, index: k });
            }
        }
        None
    }

    fn conj_pos(&self, k: ConjId) -> Option<Why> {
        let lits = &self.c.conj_lits[k as usize];
        let ok = lits
            .iter()
            .zip(&self.indep[k as usize])
            .all(|(&l, &ind)| self.opos[l as usize] && ind != Indep::No);
        ok.then_some(Why::ConjIndependent)
    }

    fn conj_neg(&self, k: ConjId) -> Option<Why> {
        let lits = &self.c.conj_lits[k as usize];
        for (&l, &ind) in lits.iter().zip(&self.indep[k as usize]) {
            if self.oneg[l as usize] {
                return Some(Why::ConjRefuted { conjunct: l });
            }
            if ind == Indep::No {
                return Some(Why::ConjDependent { conjunct: l });
            }
        }
        None
    }

    fn apply(&mut self, adds: &[(Item, Why)]) {
        for &(item, _) in adds {
            match item {
                Item::FactualPos(q) => {
                    debug_assert!(!self.pos[q as usize]);
                    self.pos[q as usize] = true;
                }
                Item::FactualNeg(q) => {
                    debug_assert!(!self.neg[q as usize]);
                    self.neg[q as usize] = true;
                }
                Item::OblPos(q) => {
                    debug_assert!(!self.opos[q as usize]);
                    self.opos[q as usize] = true;
                }
                Item::OblNeg(q) => {
                    debug_assert!(!self.oneg[q as usize]);
                    self.oneg[q as usize] = true;
                }
                Item::ConjPos(k) => {
                    debug_assert!(!self.cpos[k as usize]);
                    self.cpos[k as usize] = true;
                }
                Item::ConjNeg(k) => {
                    debug_assert!(!self.cneg[k as usize]);
                    self.cneg[k as usize] = true;
                }
            }
        }
        let c = self.c;
        for &(item, _) in adds {
            match item {
                Item::FactualPos(q) => {
                    for &r in &c.body_plain[q as usize] {
                        self.satisfy(r);
                    }
                    // q = ~ck for rules with ck = ~q in the chain
                    for &(r, _) in &c.head_p[(q ^ 1) as usize] {
                        self.advance_prefix(r);
                    }
                }
                Item::FactualNeg(q) => {
                    for &r in &c.body_plain[q as usize] {
                        self.discard(r);
                    }
                    for &(r, k) in &c.head_p[(q ^ 1) as usize] {
                        self.bad_at(r, k);
                    }
                }
                Item::OblPos(q) => {
                    for &r in &c.body_obl[q as usize] {
                        self.satisfy(r);
                    }
                    for &r in &c.body_neg_obl[q as usize] {
                        self.discard(r);
                    }
                    for &(r, _) in &c.head_p[q as usize] {
                        self.advance_prefix(r);
                    }
                    for &k in &c.lit_conjs[q as usize] {
                        self.dirty_c.mark(k);
                    }
                }
                Item::OblNeg(q) => {
                    for &r in &c.body_obl[q as usize] {
                        self.discard(r);
                    }
                    for &r in &c.body_neg_obl[q as usize] {
                        self.satisfy(r);
                    }
                    for &(r, k) in &c.head_p[q as usize] {
                        self.bad_at(r, k);
                    }
                    for &k in &c.lit_conjs[q as usize] {
                        self.dirty_c.mark(k);
                    }
                }
                Item::ConjPos(k) => {
                    for &r in &c.conj_rules[k as usize] {
                        self.satisfy(r);
                    }
                }
                Item::ConjNeg(k) => {
                    for &r in &c.conj_rules[k as usize] {
                        self.discard(r);
                    }
                }
            }
        }
    }

    fn satisfy(&mut self, r: RuleId) {
        let i = r as usize;
        self.sat[i] += 1;
        debug_assert!(self.sat[i] <= self.c.rules[i].body_len);
        if self.sat[i] == self.c.rules[i].body_len {
            self.changed.mark(r);
        }
    }

    fn discard(&mut self, r: RuleId) {
        if !self.bdisc[r as usize] {
            self.bdisc[r as usize] = true;
            self.changed.mark(r);
        }
    }

    fn advance_prefix(&mut self, r: RuleId) {
        let i = r as usize;
        let head = &self.c.rules[i].head;
        let mut p = self.prefix_ok[i] as usize;
        while p < head.len() && self.opos[head[p] as usize] && self.pos[(head[p] ^ 1) as usize] {
            p += 1;
        }
        if p as u32 != self.prefix_ok[i] {
            self.prefix_ok[i] = p as u32;
            self.changed.mark(r);
        }
    }

    fn bad_at(&mut self, r: RuleId, k: u32) {
        if k < self.first_bad[r as usize] {
            self.first_bad[r as usize] = k;
            self.changed.mark(r);
        }
    }

    fn mark_heads(&mut self, r: RuleId) {
        let rule = &self.c.rules[r as usize];
        for &h in &rule.head {
            if rule.prescriptive {
                self.dirty_o.mark(h);
                self.dirty_o.mark(h ^ 1);
            } else {
                self.dirty_f.mark(h);
                self.dirty_f.mark(h ^ 1);
            }
        }
    }
}
