//! Dense integer form of a theory, built from its occurrence index.
//!
//! Atom `i` yields literal ids `2i` (positive) and `2i + 1` (negative), so
//! the complement of id `q` is `q ^ 1`.

use std::collections::HashMap;

use crate::theory::{Atom, BodyAtom, Cell, Conjunction, Literal, Theory};

pub(crate) type LitId = u32;
pub(crate) type RuleId = u32;
pub(crate) type ConjId = u32;

#[derive(Debug)]
pub(crate) struct CRule {
    pub prescriptive: bool,
    pub defeasible: bool,
    pub plain: Vec<LitId>,
    pub obl: Vec<LitId>,
    pub neg_obl: Vec<LitId>,
    pub conj: Vec<ConjId>,
    pub head: Vec<LitId>,
    pub body_len: u32,
}

#[derive(Debug)]
pub(crate) struct Compiled {
    pub atoms: Vec<Atom>,
    pub labels: Vec<String>,
    pub rules: Vec<CRule>,
    pub facts: Vec<bool>,
    /// Constitutive rules with the literal as head.
    pub head_c: Vec<Vec<RuleId>>,
    /// Prescriptive rules with the literal in the chain, with 1-based index.
    pub head_p: Vec<Vec<(RuleId, u32)>>,
    pub body_plain: Vec<Vec<RuleId>>,
    pub body_obl: Vec<Vec<RuleId>>,
    pub body_neg_obl: Vec<Vec<RuleId>>,
    pub conjs: Vec<Conjunction>,
    pub conj_lits: Vec<Vec<LitId>>,
    conj_ids: HashMap<Conjunction, ConjId>,
    pub conj_rules: Vec<Vec<RuleId>>,
    pub lit_conjs: Vec<Vec<ConjId>>,
    /// `superior_of[s]` lists every `t` with `t > s`.
    pub superior_of: Vec<Vec<RuleId>>,
}

impl Compiled {
    pub fn new(t: &Theory) -> Self {
        let atoms: Vec<Atom> = t.index().atoms().cloned().collect();
        let nlits = atoms.len() * 2;
        let atom_id: HashMap<&Atom, u32> = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a, i as u32))
            .collect();
        let lid = |l: &Literal| atom_id[l.atom()] * 2 + u32::from(!l.is_positive());

        let mut head_c = vec![Vec::new(); nlits];
        let mut head_p = vec![Vec::new(); nlits];
        let mut body_plain = vec![Vec::new(); nlits];
        let mut body_obl = vec![Vec::new(); nlits];
        let mut body_neg_obl = vec![Vec::new(); nlits];
        for (ai, a) in atoms.iter().enumerate() {
            let pos = ai * 2;
            let idx = t.index();
            let cells: [(Cell, usize); 10] = [
                (Cell::HeadConstitutive, pos),
                (Cell::HeadConstitutiveNeg, pos + 1),
                (Cell::HeadPrescriptive, pos),
                (Cell::HeadPrescriptiveNeg, pos + 1),
                (Cell::Body, pos),
                (Cell::BodyNeg, pos + 1),
                (Cell::BodyObl, pos),
                (Cell::BodyOblNeg, pos + 1),
                (Cell::BodyNegObl, pos),
                (Cell::BodyNegOblNeg, pos + 1),
            ];
            for (cell, q) in cells {
                for occ in idx.cell(a, cell) {
                    let r = occ.rule as RuleId;
                    match cell {
                        Cell::HeadConstitutive | Cell::HeadConstitutiveNeg => head_c[q].push(r),
                        Cell::HeadPrescriptive | Cell::HeadPrescriptiveNeg => {
                            head_p[q].push((r, occ.index as u32))
                        }
                        Cell::Body | Cell::BodyNeg => body_plain[q].push(r),
                        Cell::BodyObl | Cell::BodyOblNeg => body_obl[q].push(r),
                        Cell::BodyNegObl | Cell::BodyNegOblNeg => body_neg_obl[q].push(r),
                    }
                }
            }
        }

        let mut conjs = Vec::new();
        let mut conj_lits = Vec::new();
        let mut conj_rules = Vec::new();
        let mut conj_ids = HashMap::new();
        let mut lit_conjs = vec![Vec::new(); nlits];
        for (c, rules) in t.index().conjunctions() {
            let id = conjs.len() as ConjId;
            let lits: Vec<LitId> = c.conjuncts().iter().map(lid).collect();
            for &l in &lits {
                lit_conjs[l as usize].push(id);
            }
            conj_ids.insert(c.clone(), id);
            conjs.push(c.clone());
            conj_lits.push(lits);
            conj_rules.push(rules.iter().map(|&r| r as RuleId).collect());
        }

        let rules: Vec<CRule> = t
            .rules()
            .iter()
            .map(|r| {
                let mut cr = CRule {
                    prescriptive: r.is_prescriptive(),
                    defeasible: r.is_defeasible(),
                    plain: Vec::new(),
                    obl: Vec::new(),
                    neg_obl: Vec::new(),
                    conj: Vec::new(),
                    head: r.head().elements().iter().map(lid).collect(),
                    body_len: r.antecedent().len() as u32,
                };
                for a in r.antecedent() {
                    match a {
                        BodyAtom::Plain(l) => cr.plain.push(lid(l)),
                        BodyAtom::Obl(l) => cr.obl.push(lid(l)),
                        BodyAtom::NegObl(l) => cr.neg_obl.push(lid(l)),
                        BodyAtom::ConjObl(c) => cr.conj.push(conj_ids[c]),
                    }
                }
                cr
            })
            .collect();

        let mut facts = vec![false; nlits];
        for f in t.facts() {
            facts[lid(f) as usize] = true;
        }

        let mut superior_of = vec![Vec::new(); rules.len()];
        for (a, b) in t.superiority() {
            let (a, b) = (t.rule_position(a).unwrap(), t.rule_position(b).unwrap());
            superior_of[b].push(a as RuleId);
        }

        Compiled {
            labels: t.rules().iter().map(|r| r.label().to_string()).collect(),
            atoms,
            rules,
            facts,
            head_c,
            head_p,
            body_plain,
            body_obl,
            body_neg_obl,
            conjs,
            conj_lits,
            conj_ids,
            conj_rules,
            lit_conjs,
            superior_of,
        }
    }

    pub fn nlits(&self) -> usize {
        self.atoms.len() * 2
    }

    pub fn lit(&self, id: LitId) -> Literal {
        Literal::new(self.atoms[(id / 2) as usize].clone(), id.is_multiple_of(2))
    }

    pub fn lit_id(&self, l: &Literal) -> Option<LitId> {
        self.atoms
            .binary_search(l.atom())
            .ok()
            .map(|i| i as u32 * 2 + u32::from(!l.is_positive()))
    }

    pub fn conj_id(&self, c: &Conjunction) -> Option<ConjId> {
        self.conj_ids.get(c).copied()
    }

    /// Rules carrying `l` anywhere in their head.
    pub fn heads_of(&self, l: LitId) -> impl Iterator<Item = RuleId> + '_ {
        self.head_c[l as usize]
            .iter()
            .copied()
            .chain(self.head_p[l as usize].iter().map(|&(r, _)| r))
    }
}
