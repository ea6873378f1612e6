//! Propositional literals, compensation chains, rules and defeasible theories.
//!
//! Everything here is immutable once built. A [`Theory`] is validated on
//! construction and carries the occurrence index the engine compiles from.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Interned propositional atom name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(name: impl AsRef<str>) -> Self {
        Atom(Arc::from(name.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// Returns true when `s` is a valid atom or label identifier.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A signed atom.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    atom: Atom,
    positive: bool,
}

impl Literal {
    pub fn new(atom: Atom, positive: bool) -> Self {
        Literal { atom, positive }
    }

    pub fn pos(name: &str) -> Self {
        Literal::new(Atom::new(name), true)
    }

    pub fn neg(name: &str) -> Self {
        Literal::new(Atom::new(name), false)
    }

    /// Parses `a` or `~a`.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        let (positive, name) = match s.strip_prefix('~') {
            Some(rest) => (false, rest.trim_start()),
            None => (true, s),
        };
        is_identifier(name).then(|| Literal::new(Atom::new(name), positive))
    }

    pub fn atom(&self) -> &Atom {
        &self.atom
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn complement(&self) -> Literal {
        Literal {
            atom: self.atom.clone(),
            positive: !self.positive,
        }
    }
}

impl Ord for Literal {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.atom
            .cmp(&other.atom)
            .then_with(|| other.positive.cmp(&self.positive))
    }
}

impl PartialOrd for Literal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "~{}", self.atom)
        }
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Complement of a literal: flips the sign, keeps the atom.
pub fn complement(l: &Literal) -> Literal {
    l.complement()
}

/// Conjunctive obligation content: at least two distinct literals in
/// canonical order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Conjunction {
    conjuncts: Vec<Literal>,
}

impl Conjunction {
    pub fn new(conjuncts: impl IntoIterator<Item = Literal>) -> Result<Self, TheoryError> {
        let set: BTreeSet<Literal> = conjuncts.into_iter().collect();
        if set.len() < 2 {
            return Err(TheoryError::ShortConjunction(set.len()));
        }
        Ok(Conjunction {
            conjuncts: set.into_iter().collect(),
        })
    }

    /// Parses `a & ~b & c`.
    pub fn parse(s: &str) -> Option<Self> {
        let lits: Option<Vec<Literal>> = s.split('&').map(Literal::parse).collect();
        Conjunction::new(lits?).ok()
    }

    pub fn conjuncts(&self) -> &[Literal] {
        &self.conjuncts
    }

    pub fn len(&self) -> usize {
        self.conjuncts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conjuncts.is_empty()
    }

    /// The set of complements of the conjuncts.
    pub fn complements(&self) -> BTreeSet<Literal> {
        self.conjuncts.iter().map(Literal::complement).collect()
    }

    pub fn has_complementary_pair(&self) -> bool {
        self.conjuncts
            .windows(2)
            .any(|w| w[0].atom() == w[1].atom())
    }
}

impl fmt::Display for Conjunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.conjuncts.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Conjunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Compensation chain `c1 * c2 * ... * cn`. Positions are 1-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OtimesChain {
    elements: Vec<Literal>,
}

impl OtimesChain {
    pub fn new(elements: Vec<Literal>) -> Result<Self, TheoryError> {
        if elements.is_empty() {
            return Err(TheoryError::EmptyChain);
        }
        Ok(OtimesChain { elements })
    }

    pub fn single(l: Literal) -> Self {
        OtimesChain { elements: vec![l] }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Element at 1-based `index`.
    pub fn get(&self, index: usize) -> Option<&Literal> {
        index.checked_sub(1).and_then(|i| self.elements.get(i))
    }

    pub fn elements(&self) -> &[Literal] {
        &self.elements
    }

    /// 1-based indexes at which `q` occurs.
    pub fn indexes_of<'a>(&'a self, q: &'a Literal) -> impl Iterator<Item = usize> + 'a {
        self.elements
            .iter()
            .enumerate()
            .filter(move |(_, e)| *e == q)
            .map(|(i, _)| i + 1)
    }

    pub fn contains(&self, q: &Literal) -> bool {
        self.elements.contains(q)
    }
}

impl fmt::Display for OtimesChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for OtimesChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Premise of a rule.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BodyAtom {
    Plain(Literal),
    Obl(Literal),
    NegObl(Literal),
    ConjObl(Conjunction),
}

impl fmt::Display for BodyAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BodyAtom::Plain(l) => write!(f, "{l}"),
            BodyAtom::Obl(l) => write!(f, "O[{l}]"),
            BodyAtom::NegObl(l) => write!(f, "-O[{l}]"),
            BodyAtom::ConjObl(c) => write!(f, "O[{c}]"),
        }
    }
}

impl fmt::Debug for BodyAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arrow {
    DefeasibleConstitutive,
    DefeaterConstitutive,
    DefeasiblePrescriptive,
    DefeaterPrescriptive,
}

impl Arrow {
    pub fn is_prescriptive(self) -> bool {
        matches!(self, Arrow::DefeasiblePrescriptive | Arrow::DefeaterPrescriptive)
    }

    pub fn is_defeasible(self) -> bool {
        matches!(self, Arrow::DefeasibleConstitutive | Arrow::DefeasiblePrescriptive)
    }

    pub fn token(self) -> &'static str {
        match self {
            Arrow::DefeasibleConstitutive => "=>",
            Arrow::DefeaterConstitutive => "~>",
            Arrow::DefeasiblePrescriptive => "=O>",
            Arrow::DefeaterPrescriptive => "~O>",
        }
    }
}

/// A labelled rule `label: antecedent arrow head`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    label: String,
    antecedent: Vec<BodyAtom>,
    arrow: Arrow,
    head: OtimesChain,
}

impl Rule {
    /// Builds a rule. The antecedent is treated as a set. Only defeasible
    /// prescriptive rules may have a head longer than one literal.
    pub fn new(
        label: impl Into<String>,
        antecedent: impl IntoIterator<Item = BodyAtom>,
        arrow: Arrow,
        head: OtimesChain,
    ) -> Result<Self, TheoryError> {
        let label = label.into();
        if !is_identifier(&label) {
            return Err(TheoryError::BadLabel(label));
        }
        if head.len() > 1 && arrow != Arrow::DefeasiblePrescriptive {
            return Err(TheoryError::ChainOnSingleHeadRule { label, arrow });
        }
        let antecedent: BTreeSet<BodyAtom> = antecedent.into_iter().collect();
        Ok(Rule {
            label,
            antecedent: antecedent.into_iter().collect(),
            arrow,
            head,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn antecedent(&self) -> &[BodyAtom] {
        &self.antecedent
    }

    pub fn arrow(&self) -> Arrow {
        self.arrow
    }

    pub fn head(&self) -> &OtimesChain {
        &self.head
    }

    pub fn is_prescriptive(&self) -> bool {
        self.arrow.is_prescriptive()
    }

    pub fn is_defeasible(&self) -> bool {
        self.arrow.is_defeasible()
    }

    /// Splits the antecedent into plain literals, obligations, negated
    /// obligations and conjunctive obligations.
    pub fn partition(&self) -> AntecedentPartition {
        let mut p = AntecedentPartition::default();
        for a in &self.antecedent {
            match a {
                BodyAtom::Plain(l) => {
                    p.plain.insert(l.clone());
                }
                BodyAtom::Obl(l) => {
                    p.obl.insert(l.clone());
                }
                BodyAtom::NegObl(l) => {
                    p.neg_obl.insert(l.clone());
                }
                BodyAtom::ConjObl(c) => {
                    p.conj.insert(c.clone());
                }
            }
        }
        p
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.label)?;
        for (i, a) in self.antecedent.iter().enumerate() {
            if i == 0 {
                write!(f, " {a}")?;
            } else {
                write!(f, ", {a}")?;
            }
        }
        write!(f, " {} {}", self.arrow.token(), self.head)
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AntecedentPartition {
    pub plain: BTreeSet<Literal>,
    pub obl: BTreeSet<Literal>,
    pub neg_obl: BTreeSet<Literal>,
    pub conj: BTreeSet<Conjunction>,
}

pub fn antecedent_partition(r: &Rule) -> AntecedentPartition {
    r.partition()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ModeFilter {
    #[default]
    Any,
    Prescriptive,
    Constitutive,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StrengthFilter {
    #[default]
    Any,
    Defeasible,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RuleFilter {
    pub mode: ModeFilter,
    pub strength: StrengthFilter,
}

impl RuleFilter {
    pub const ANY: RuleFilter = RuleFilter {
        mode: ModeFilter::Any,
        strength: StrengthFilter::Any,
    };

    pub fn new(mode: ModeFilter, strength: StrengthFilter) -> Self {
        RuleFilter { mode, strength }
    }

    pub fn accepts(&self, r: &Rule) -> bool {
        let mode_ok = match self.mode {
            ModeFilter::Any => true,
            ModeFilter::Prescriptive => r.is_prescriptive(),
            ModeFilter::Constitutive => !r.is_prescriptive(),
        };
        mode_ok && (self.strength == StrengthFilter::Any || r.is_defeasible())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("duplicate rule label `{0}`")]
    DuplicateLabel(String),
    #[error("superiority refers to unknown rule `{0}`")]
    UnknownLabel(String),
    #[error("invalid label `{0}`")]
    BadLabel(String),
    #[error("rule `{label}` ({}) must have a single-literal head", arrow.token())]
    ChainOnSingleHeadRule { label: String, arrow: Arrow },
    #[error("empty compensation chain")]
    EmptyChain,
    #[error("conjunction needs at least two distinct literals, got {0}")]
    ShortConjunction(usize),
}

/// Conditions that keep a theory valid but void the consistency guarantee.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TheoryWarning {
    ComplementaryFacts(Literal),
    SuperiorityCycle(Vec<String>),
    ComplementaryConjunction { rule: String, conjunction: Conjunction },
}

impl fmt::Display for TheoryWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoryWarning::ComplementaryFacts(l) => {
                write!(f, "facts contain both {l} and {}", l.complement())
            }
            TheoryWarning::SuperiorityCycle(cycle) => {
                write!(f, "superiority relation is cyclic: {}", cycle.join(" > "))
            }
            TheoryWarning::ComplementaryConjunction { rule, conjunction } => write!(
                f,
                "rule `{rule}` uses conjunction O[{conjunction}] containing a complementary pair"
            ),
        }
    }
}

/// Cells of the per-atom occurrence array.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    HeadConstitutive = 0,
    HeadConstitutiveNeg = 1,
    HeadPrescriptive = 2,
    HeadPrescriptiveNeg = 3,
    Body = 4,
    BodyNeg = 5,
    BodyObl = 6,
    BodyOblNeg = 7,
    BodyNegObl = 8,
    BodyNegOblNeg = 9,
}

impl Cell {
    pub const ALL: [Cell; 10] = [
        Cell::HeadConstitutive,
        Cell::HeadConstitutiveNeg,
        Cell::HeadPrescriptive,
        Cell::HeadPrescriptiveNeg,
        Cell::Body,
        Cell::BodyNeg,
        Cell::BodyObl,
        Cell::BodyOblNeg,
        Cell::BodyNegObl,
        Cell::BodyNegOblNeg,
    ];

    pub fn head(prescriptive: bool, positive: bool) -> Cell {
        match (prescriptive, positive) {
            (false, true) => Cell::HeadConstitutive,
            (false, false) => Cell::HeadConstitutiveNeg,
            (true, true) => Cell::HeadPrescriptive,
            (true, false) => Cell::HeadPrescriptiveNeg,
        }
    }

    fn body(atom: &BodyAtom) -> Option<Cell> {
        Some(match atom {
            BodyAtom::Plain(l) if l.is_positive() => Cell::Body,
            BodyAtom::Plain(_) => Cell::BodyNeg,
            BodyAtom::Obl(l) if l.is_positive() => Cell::BodyObl,
            BodyAtom::Obl(_) => Cell::BodyOblNeg,
            BodyAtom::NegObl(l) if l.is_positive() => Cell::BodyNegObl,
            BodyAtom::NegObl(_) => Cell::BodyNegOblNeg,
            BodyAtom::ConjObl(_) => return None,
        })
    }
}

/// Where a rule mentions an atom: rule position in label order, and the
/// 1-based chain index for head cells (0 for body cells).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Occurrence {
    pub rule: usize,
    pub index: usize,
}

/// Ten-cell occurrence array per atom plus the rules using each
/// conjunctive obligation.
#[derive(Clone, Debug, Default)]
pub struct OccurrenceIndex {
    atoms: BTreeMap<Atom, [Vec<Occurrence>; 10]>,
    conjunctions: BTreeMap<Conjunction, Vec<usize>>,
}

impl OccurrenceIndex {
    fn build(rules: &[Rule], facts: &BTreeSet<Literal>) -> Self {
        let mut idx = OccurrenceIndex::default();
        for f in facts {
            idx.atoms.entry(f.atom().clone()).or_default();
        }
        for (ri, r) in rules.iter().enumerate() {
            for (pos, h) in r.head().elements().iter().enumerate() {
                let cell = Cell::head(r.is_prescriptive(), h.is_positive());
                idx.atoms.entry(h.atom().clone()).or_default()[cell as usize].push(Occurrence {
                    rule: ri,
                    index: pos + 1,
                });
            }
            for a in r.antecedent() {
                match (Cell::body(a), a) {
                    (Some(cell), BodyAtom::Plain(l) | BodyAtom::Obl(l) | BodyAtom::NegObl(l)) => {
                        idx.atoms.entry(l.atom().clone()).or_default()[cell as usize]
                            .push(Occurrence { rule: ri, index: 0 });
                    }
                    (_, BodyAtom::ConjObl(c)) => {
                        for l in c.conjuncts() {
                            idx.atoms.entry(l.atom().clone()).or_default();
                        }
                        idx.conjunctions.entry(c.clone()).or_default().push(ri);
                    }
                    _ => unreachable!(),
                }
            }
        }
        idx
    }

    pub fn cell(&self, atom: &Atom, cell: Cell) -> &[Occurrence] {
        self.atoms
            .get(atom)
            .map(|cells| cells[cell as usize].as_slice())
            .unwrap_or(&[])
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.keys()
    }

    pub fn conjunctions(&self) -> impl Iterator<Item = (&Conjunction, &[usize])> {
        self.conjunctions.iter().map(|(c, r)| (c, r.as_slice()))
    }

    /// Head occurrences of `q` among rules of the given mode.
    pub fn heads(&self, q: &Literal, prescriptive: bool) -> &[Occurrence] {
        self.cell(q.atom(), Cell::head(prescriptive, q.is_positive()))
    }
}

/// A validated defeasible theory `(F, R, >)`.
#[derive(Clone)]
pub struct Theory {
    facts: BTreeSet<Literal>,
    rules: Vec<Rule>,
    by_label: BTreeMap<String, usize>,
    superiority: BTreeSet<(String, String)>,
    index: OccurrenceIndex,
    warnings: Vec<TheoryWarning>,
}

impl Theory {
    pub fn new(
        facts: impl IntoIterator<Item = Literal>,
        rules: impl IntoIterator<Item = Rule>,
        superiority: impl IntoIterator<Item = (String, String)>,
    ) -> Result<Self, TheoryError> {
        let facts: BTreeSet<Literal> = facts.into_iter().collect();
        let mut sorted: BTreeMap<String, Rule> = BTreeMap::new();
        for r in rules {
            if sorted.contains_key(r.label()) {
                return Err(TheoryError::DuplicateLabel(r.label().to_string()));
            }
            sorted.insert(r.label().to_string(), r);
        }
        let superiority: BTreeSet<(String, String)> = superiority.into_iter().collect();
        for (a, b) in &superiority {
            for l in [a, b] {
                if !sorted.contains_key(l) {
                    return Err(TheoryError::UnknownLabel(l.clone()));
                }
            }
        }
        let rules: Vec<Rule> = sorted.into_values().collect();
        let by_label = rules
            .iter()
            .enumerate()
            .map(|(i, r)| (r.label().to_string(), i))
            .collect();
        let index = OccurrenceIndex::build(&rules, &facts);
        let mut theory = Theory {
            facts,
            rules,
            by_label,
            superiority,
            index,
            warnings: Vec::new(),
        };
        theory.warnings = theory.collect_warnings();
        Ok(theory)
    }

    pub fn empty() -> Self {
        Theory::new([], [], []).expect("empty theory is valid")
    }

    fn collect_warnings(&self) -> Vec<TheoryWarning> {
        let mut out = Vec::new();
        for f in &self.facts {
            if f.is_positive() && self.facts.contains(&f.complement()) {
                out.push(TheoryWarning::ComplementaryFacts(f.clone()));
            }
        }
        if let Some(cycle) = self.superiority_cycle() {
            out.push(TheoryWarning::SuperiorityCycle(cycle));
        }
        for r in &self.rules {
            for a in r.antecedent() {
                if let BodyAtom::ConjObl(c) = a {
                    if c.has_complementary_pair() {
                        out.push(TheoryWarning::ComplementaryConjunction {
                            rule: r.label().to_string(),
                            conjunction: c.clone(),
                        });
                    }
                }
            }
        }
        out
    }

    /// A cycle in the superiority graph, if any, as a label path.
    fn superiority_cycle(&self) -> Option<Vec<String>> {
        let n = self.rules.len();
        let mut succ = vec![Vec::new(); n];
        for (a, b) in &self.superiority {
            succ[self.by_label[a]].push(self.by_label[b]);
        }
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; n];
        let mut stack: Vec<usize> = Vec::new();
        fn dfs(
            v: usize,
            succ: &[Vec<usize>],
            state: &mut [u8],
            stack: &mut Vec<usize>,
        ) -> Option<Vec<usize>> {
            state[v] = 1;
            stack.push(v);
            for &w in &succ[v] {
                if state[w] == 1 {
                    let start = stack.iter().position(|&x| x == w).unwrap();
                    let mut cyc = stack[start..].to_vec();
                    cyc.push(w);
                    return Some(cyc);
                }
                if state[w] == 0 {
                    if let Some(c) = dfs(w, succ, state, stack) {
                        return Some(c);
                    }
                }
            }
            stack.pop();
            state[v] = 2;
            None
        }
        (0..n).find_map(|v| {
            if state[v] == 0 {
                dfs(v, &succ, &mut state, &mut stack)
                    .map(|c| c.into_iter().map(|i| self.rules[i].label().to_string()).collect())
            } else {
                None
            }
        })
    }

    pub fn facts(&self) -> &BTreeSet<Literal> {
        &self.facts
    }

    /// Rules in label order.
    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, label: &str) -> Option<&Rule> {
        self.by_label.get(label).map(|&i| &self.rules[i])
    }

    pub fn rule_position(&self, label: &str) -> Option<usize> {
        self.by_label.get(label).copied()
    }

    pub fn superiority(&self) -> &BTreeSet<(String, String)> {
        &self.superiority
    }

    pub fn is_superior(&self, stronger: &str, weaker: &str) -> bool {
        self.superiority
            .contains(&(stronger.to_string(), weaker.to_string()))
    }

    pub fn warnings(&self) -> &[TheoryWarning] {
        &self.warnings
    }

    pub fn index(&self) -> &OccurrenceIndex {
        &self.index
    }

    /// Complement-free facts and an acyclic superiority relation.
    pub fn is_consistent(&self) -> bool {
        !self.warnings.iter().any(|w| {
            matches!(
                w,
                TheoryWarning::ComplementaryFacts(_) | TheoryWarning::SuperiorityCycle(_)
            )
        })
    }

    /// Atoms occurring anywhere in the theory.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.index.atoms().cloned().collect()
    }

    /// Conjunctive obligations occurring in rule bodies.
    pub fn body_conjunctions(&self) -> BTreeSet<Conjunction> {
        self.index.conjunctions().map(|(c, _)| c.clone()).collect()
    }

    /// Rules whose head holds `q` at `index` (any index when `None`),
    /// restricted by `filter`. Returned in label order.
    pub fn rules_for(&self, q: &Literal, index: Option<usize>, filter: RuleFilter) -> Vec<&Rule> {
        let mut hits: BTreeSet<usize> = BTreeSet::new();
        for prescriptive in [false, true] {
            for occ in self.index.heads(q, prescriptive) {
                if index.is_none_or(|n| n == occ.index) {
                    hits.insert(occ.rule);
                }
            }
        }
        hits.into_iter()
            .map(|i| &self.rules[i])
            .filter(|r| filter.accepts(r))
            .collect()
    }
}

impl PartialEq for Theory {
    fn eq(&self, other: &Self) -> bool {
        self.facts == other.facts
            && self.rules == other.rules
            && self.superiority == other.superiority
    }
}

impl Eq for Theory {}

impl fmt::Debug for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Theory")
            .field("facts", &self.facts)
            .field("rules", &self.rules)
            .field("superiority", &self.superiority)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(s: &str) -> Literal {
        Literal::parse(s).unwrap()
    }

    fn rule(label: &str, body: Vec<BodyAtom>, arrow: Arrow, head: &[&str]) -> Rule {
        let chain = OtimesChain::new(head.iter().map(|h| lit(h)).collect()).unwrap();
        Rule::new(label, body, arrow, chain).unwrap()
    }

    use Arrow::*;
    use BodyAtom::*;

    /// Rules r1-r7 of the running example.
    fn example_rules() -> Theory {
        Theory::new(
            ["f1", "f2", "g2", "f3", "f7"].map(lit),
            vec![
                rule("r1", vec![Plain(lit("f1"))], DefeasiblePrescriptive, &["a", "b"]),
                rule(
                    "r2",
                    vec![Plain(lit("f2")), Plain(lit("g2"))],
                    DefeasiblePrescriptive,
                    &["b", "c"],
                ),
                rule("r3", vec![Plain(lit("f3"))], DefeasibleConstitutive, &["~a"]),
                rule("r4", vec![Plain(lit("d"))], DefeaterPrescriptive, &["~a"]),
                rule("r5", vec![NegObl(lit("a"))], DefeasibleConstitutive, &["~b"]),
                rule("r6", vec![Obl(lit("a")), Obl(lit("b"))], DefeasiblePrescriptive, &["~c"]),
                rule("r7", vec![Plain(lit("f7"))], DefeasibleConstitutive, &["d"]),
            ],
            [("r6".to_string(), "r2".to_string())],
        )
        .unwrap()
    }

    fn labels(rs: Vec<&Rule>) -> Vec<&str> {
        rs.into_iter().map(|r| r.label()).collect()
    }

    #[test]
    fn complement_flips_sign() {
        assert_eq!(complement(&lit("p")), lit("~p"));
        assert_eq!(complement(&lit("~p")), lit("p"));
        assert_eq!(complement(&complement(&lit("d"))), lit("d"));
    }

    #[test]
    fn rules_for_by_index() {
        let t = example_rules();
        let b = lit("b");
        assert_eq!(labels(t.rules_for(&b, Some(1), RuleFilter::ANY)), ["r2"]);
        assert_eq!(labels(t.rules_for(&b, Some(2), RuleFilter::ANY)), ["r1"]);
        assert_eq!(labels(t.rules_for(&b, None, RuleFilter::ANY)), ["r1", "r2"]);
        assert!(t.rules_for(&lit("z"), None, RuleFilter::ANY).is_empty());
        let na = lit("~a");
        assert_eq!(labels(t.rules_for(&na, None, RuleFilter::ANY)), ["r3", "r4"]);
        let cd = RuleFilter::new(ModeFilter::Constitutive, StrengthFilter::Defeasible);
        assert_eq!(labels(t.rules_for(&na, None, cd)), ["r3"]);
    }

    #[test]
    fn prescriptive_and_constitutive_partition() {
        let t = example_rules();
        let pick = |mode| {
            let f = RuleFilter::new(mode, StrengthFilter::Any);
            t.rules()
                .iter()
                .filter(|r| f.accepts(r))
                .map(|r| r.label())
                .collect::<Vec<_>>()
        };
        assert_eq!(pick(ModeFilter::Prescriptive), ["r1", "r2", "r4", "r6"]);
        assert_eq!(pick(ModeFilter::Constitutive), ["r3", "r5", "r7"]);
        let pd = RuleFilter::new(ModeFilter::Prescriptive, StrengthFilter::Defeasible);
        let pd: Vec<_> = t.rules().iter().filter(|r| pd.accepts(r)).map(|r| r.label()).collect();
        assert_eq!(pd, ["r1", "r2", "r6"]);
    }

    #[test]
    fn antecedent_partition_sets() {
        let conj = Conjunction::new([lit("c"), lit("~d")]).unwrap();
        let r = rule(
            "r",
            vec![
                Plain(lit("a")),
                Plain(lit("~b")),
                Obl(lit("~c")),
                NegObl(lit("a")),
                ConjObl(conj.clone()),
            ],
            DefeasiblePrescriptive,
            &["e", "f"],
        );
        let p = antecedent_partition(&r);
        assert_eq!(p.plain, [lit("a"), lit("~b")].into());
        assert_eq!(p.obl, [lit("~c")].into());
        assert_eq!(p.neg_obl, [lit("a")].into());
        assert_eq!(p.conj, [conj].into());

        let empty = rule("e", vec![], DefeasibleConstitutive, &["x"]);
        assert_eq!(antecedent_partition(&empty), AntecedentPartition::default());

        let t = example_rules();
        let p6 = t.rule("r6").unwrap().partition();
        assert_eq!(p6.obl, [lit("a"), lit("b")].into());
        assert!(p6.plain.is_empty() && p6.neg_obl.is_empty() && p6.conj.is_empty());
    }

    #[test]
    fn conjunction_is_canonical() {
        let a = Conjunction::new([lit("b"), lit("~a"), lit("a"), lit("b")]).unwrap();
        let b = Conjunction::new([lit("a"), lit("~a"), lit("b")]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "a & ~a & b");
        assert!(a.has_complementary_pair());
        assert!(Conjunction::new([lit("a"), lit("a")]).is_err());
    }

    #[test]
    fn chain_indexes_are_one_based() {
        let c = OtimesChain::new(vec![lit("a"), lit("b"), lit("a")]).unwrap();
        assert_eq!(c.get(1), Some(&lit("a")));
        assert_eq!(c.get(3), Some(&lit("a")));
        assert_eq!(c.get(0), None);
        assert_eq!(c.indexes_of(&lit("a")).collect::<Vec<_>>(), [1, 3]);
        assert_eq!(OtimesChain::single(lit("q")).len(), 1);
    }

    #[test]
    fn single_head_enforced_for_defeaters_and_constitutive() {
        let chain = OtimesChain::new(vec![lit("a"), lit("b")]).unwrap();
        for arrow in [DefeaterPrescriptive, DefeasibleConstitutive, DefeaterConstitutive] {
            assert!(matches!(
                Rule::new("r", [], arrow, chain.clone()),
                Err(TheoryError::ChainOnSingleHeadRule { .. })
            ));
        }
        assert!(Rule::new("r", [], DefeasiblePrescriptive, chain).is_ok());
    }

    #[test]
    fn validation_errors_and_warnings() {
        let r = |l: &str| rule(l, vec![], DefeasibleConstitutive, &["a"]);
        assert_eq!(
            Theory::new([], [r("x"), r("x")], []).unwrap_err(),
            TheoryError::DuplicateLabel("x".into())
        );
        assert_eq!(
            Theory::new([], [r("x")], [("x".into(), "y".into())]).unwrap_err(),
            TheoryError::UnknownLabel("y".into())
        );
        let t = Theory::new(
            [lit("p"), lit("~p")],
            [r("x"), r("y"), r("z")],
            [
                ("x".into(), "y".into()),
                ("y".into(), "z".into()),
                ("z".into(), "x".into()),
            ],
        )
        .unwrap();
        assert!(!t.is_consistent());
        assert!(matches!(t.warnings()[0], TheoryWarning::ComplementaryFacts(_)));
        assert!(matches!(&t.warnings()[1], TheoryWarning::SuperiorityCycle(c) if c.len() == 4));
        assert!(example_rules().is_consistent());
    }

    #[test]
    fn index_cells() {
        let t = example_rules();
        let a = Atom::new("a");
        assert_eq!(
            t.index().cell(&a, Cell::HeadPrescriptive),
            &[Occurrence { rule: 0, index: 1 }]
        );
        assert_eq!(t.index().cell(&a, Cell::HeadConstitutiveNeg).len(), 1);
        assert_eq!(t.index().cell(&a, Cell::HeadPrescriptiveNeg).len(), 1);
        assert_eq!(t.index().cell(&a, Cell::BodyNegObl).len(), 1);
        assert_eq!(t.index().cell(&a, Cell::BodyObl).len(), 1);
        assert!(t.index().cell(&a, Cell::Body).is_empty());
    }
}
