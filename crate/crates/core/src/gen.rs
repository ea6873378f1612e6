//! Seeded theory generators for benchmarks and property tests.
//!
//! Every generator is a pure function of its parameters and seed. Facts
//! are complement-free and superiority always points from a lower rule
//! number to a higher one, so generated theories carry no warnings apart
//! from conjunctions over complementary literals, which are never produced.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::theory::{Arrow, Atom, BodyAtom, Conjunction, Literal, OtimesChain, Rule, Theory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `v1` obligatory, each violation triggering the next obligation.
    ChainCtd,
    /// Random rules stratified in layers of atoms.
    Layered,
    /// Independent obligations, some violated, read by conjunctive bodies.
    ConjGrid,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::ChainCtd, Family::Layered, Family::ConjGrid];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::ChainCtd => "chain-ctd",
            Family::Layered => "layered",
            Family::ConjGrid => "conj-grid",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown family `{0}` (expected chain-ctd, layered or conj-grid)")]
pub struct UnknownFamily(pub String);

impl FromStr for Family {
    type Err = UnknownFamily;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.to_string() == s)
            .ok_or_else(|| UnknownFamily(s.to_string()))
    }
}

/// Size parameters: `n` atoms, `r` rules, `m` conjunctive bodies of width
/// `k`. `chain-ctd` and `conj-grid` derive their rule count from `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
    pub r: usize,
    pub m: usize,
    pub k: usize,
    pub seed: u64,
}

impl FamilySpec {
    pub fn new(family: Family, n: usize, r: usize, m: usize, k: usize, seed: u64) -> Self {
        FamilySpec {
            family,
            n,
            r,
            m,
            k,
            seed,
        }
    }
}

pub fn generate(spec: &FamilySpec) -> Theory {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut b = Builder::default();
    match spec.family {
        Family::ChainCtd => chain_ctd(&mut b, spec, &mut rng),
        Family::Layered => layered(&mut b, spec, &mut rng),
        Family::ConjGrid => conj_grid(&mut b, spec, &mut rng),
    }
    b.finish()
}

#[derive(Default)]
struct Builder {
    facts: BTreeMap<Atom, bool>,
    rules: Vec<Rule>,
    sup: Vec<(String, String)>,
}

impl Builder {
    fn fact(&mut self, l: Literal) {
        self.facts.entry(l.atom().clone()).or_insert(l.is_positive());
    }

    fn rule(&mut self, prefix: &str, body: Vec<BodyAtom>, arrow: Arrow, head: Vec<Literal>) -> String {
        let label = format!("{prefix}{}", self.rules.len() + 1);
        let head = OtimesChain::new(head).expect("non-empty head");
        self.rules
            .push(Rule::new(label.clone(), body, arrow, head).expect("well-formed rule"));
        label
    }

    fn finish(self) -> Theory {
        let facts = self.facts.into_iter().map(|(a, p)| Literal::new(a, p));
        Theory::new(facts, self.rules, self.sup).expect("generated theory is valid")
    }
}

fn lit(prefix: &str, i: usize, positive: bool) -> Literal {
    Literal::new(Atom::new(format!("{prefix}{i}")), positive)
}

/// `k` distinct positive literals drawn from `pool`, as a conjunction.
fn conjunction(pool: &[Literal], k: usize, rng: &mut ChaCha8Rng) -> Option<Conjunction> {
    let picked: Vec<Literal> = pool.choose_multiple(rng, k.min(pool.len())).cloned().collect();
    Conjunction::new(picked).ok()
}

fn chain_ctd(b: &mut Builder, spec: &FamilySpec, rng: &mut ChaCha8Rng) {
    let n = spec.n.max(1);
    for i in 1..=n {
        let body = if i == 1 {
            vec![]
        } else {
            vec![BodyAtom::Plain(lit("v", i - 1, false))]
        };
        b.rule("c", body, Arrow::DefeasiblePrescriptive, vec![lit("v", i, true)]);
        if i < n {
            b.fact(lit("v", i, false));
        }
    }
    let pool: Vec<Literal> = (1..=n).map(|i| lit("v", i, true)).collect();
    for j in 1..=spec.m {
        if let Some(c) = conjunction(&pool, spec.k.max(2), rng) {
            b.rule("x", vec![BodyAtom::ConjObl(c)], Arrow::DefeasibleConstitutive, vec![lit("w", j, true)]);
        }
    }
}

fn conj_grid(b: &mut Builder, spec: &FamilySpec, rng: &mut ChaCha8Rng) {
    let n = spec.n.max(spec.k).max(2);
    for i in 1..=n {
        let head = if i % 4 == 0 && i < n {
            vec![lit("p", i, true), lit("p", i + 1, true)]
        } else {
            vec![lit("p", i, true)]
        };
        b.rule("g", vec![], Arrow::DefeasiblePrescriptive, head);
        if i % 3 == 1 {
            b.fact(lit("p", i, false));
        }
    }
    let pool: Vec<Literal> = (1..=n).map(|i| lit("p", i, true)).collect();
    for j in 1..=spec.m {
        if let Some(c) = conjunction(&pool, spec.k.max(2), rng) {
            b.rule("x", vec![BodyAtom::ConjObl(c)], Arrow::DefeasibleConstitutive, vec![lit("q", j, true)]);
        }
    }
}

fn layered(b: &mut Builder, spec: &FamilySpec, rng: &mut ChaCha8Rng) {
    let n = spec.n.max(8);
    let width = (n / 8).max(4);
    let layer = |i: usize| i / width;
    let atom = |i: usize, positive: bool| lit("p", i, positive);

    for i in 0..width.min(n) {
        if rng.gen_bool(0.7) {
            b.fact(atom(i, rng.gen_bool(0.5)));
        }
    }

    let mut by_head: BTreeMap<(Literal, bool), Vec<String>> = BTreeMap::new();
    let total = spec.r;
    for _ in 0..total {
        let h = rng.gen_range(width.min(n - 1)..n);
        let below = layer(h) * width;
        let mut body = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let a = atom(rng.gen_range(0..below), rng.gen_bool(0.6));
            body.push(match rng.gen_range(0..20) {
                0..=11 => BodyAtom::Plain(a),
                12..=16 => BodyAtom::Obl(a),
                _ => BodyAtom::NegObl(a),
            });
        }
        let arrow = match rng.gen_range(0..20) {
            0..=7 => Arrow::DefeasibleConstitutive,
            8..=14 => Arrow::DefeasiblePrescriptive,
            15..=16 => Arrow::DefeaterConstitutive,
            _ => Arrow::DefeaterPrescriptive,
        };
        let first = atom(h, rng.gen_bool(0.6));
        let mut head = vec![first.clone()];
        if arrow == Arrow::DefeasiblePrescriptive && rng.gen_bool(0.3) {
            let top = ((layer(h) + 1) * width).min(n);
            for _ in 0..rng.gen_range(1..=2) {
                let c = atom(rng.gen_range(below..top), rng.gen_bool(0.6));
                if !head.iter().any(|x: &Literal| x.atom() == c.atom()) {
                    head.push(c);
                }
            }
        }
        let label = b.rule("r", body, arrow, head);
        let key = (first.complement(), arrow.is_prescriptive());
        if let Some(rivals) = by_head.get(&key) {
            if rng.gen_bool(0.3) {
                let earlier = rivals[rng.gen_range(0..rivals.len())].clone();
                b.sup.push((earlier, label.clone()));
            }
        }
        by_head.entry((first, arrow.is_prescriptive())).or_default().push(label);
    }
    let pool: Vec<Literal> = (width..n).map(|i| atom(i, true)).collect();
    for j in 1..=spec.m {
        if let Some(c) = conjunction(&pool, spec.k.max(2), rng) {
            let h = lit("q", j, true);
            b.rule("x", vec![BodyAtom::ConjObl(c)], Arrow::DefeasiblePrescriptive, vec![h]);
        }
    }
}

/// Random theory over at most `atoms` atoms and exactly `rules` rules, with
/// complement-free facts, acyclic superiority and short chains.
pub fn small_theory(atoms: usize, rules: usize, seed: u64) -> Theory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = ["a", "b", "c", "d"];
    let atoms = atoms.clamp(1, names.len());
    let any = |rng: &mut ChaCha8Rng| {
        Literal::new(Atom::new(names[rng.gen_range(0..atoms)]), rng.gen_bool(0.5))
    };
    let mut b = Builder::default();
    for name in &names[..atoms] {
        if rng.gen_bool(0.3) {
            b.fact(Literal::new(Atom::new(name), rng.gen_bool(0.5)));
        }
    }
    for _ in 0..rules {
        let mut body = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            body.push(match rng.gen_range(0..10) {
                0..=4 => BodyAtom::Plain(any(&mut rng)),
                5..=6 => BodyAtom::Obl(any(&mut rng)),
                7..=8 => BodyAtom::NegObl(any(&mut rng)),
                _ => {
                    let x = any(&mut rng);
                    let y = any(&mut rng);
                    match Conjunction::new([x.clone(), y]) {
                        Ok(c) if !c.has_complementary_pair() => BodyAtom::ConjObl(c),
                        _ => BodyAtom::Obl(x),
                    }
                }
            });
        }
        let arrow = match rng.gen_range(0..10) {
            0..=3 => Arrow::DefeasiblePrescriptive,
            4..=6 => Arrow::DefeasibleConstitutive,
            7 => Arrow::DefeaterConstitutive,
            _ => Arrow::DefeaterPrescriptive,
        };
        let mut head = vec![any(&mut rng)];
        if arrow == Arrow::DefeasiblePrescriptive && rng.gen_bool(0.35) {
            let c = any(&mut rng);
            if c.atom() != head[0].atom() {
                head.push(c);
            }
        }
        b.rule("r", body, arrow, head);
    }
    for i in 0..rules {
        for j in i + 1..rules {
            if rng.gen_bool(0.15) {
                b.sup.push((format!("r{}", i + 1), format!("r{}", j + 1)));
            }
        }
    }
    b.finish()
}

/// Non-empty random subset of the literals over the theory's atoms.
pub fn random_literals(t: &Theory, seed: u64) -> BTreeSet<Literal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lits: Vec<Literal> = t
        .atoms()
        .into_iter()
        .flat_map(|a| [Literal::new(a.clone(), true), Literal::new(a, false)])
        .collect();
    let mut out: BTreeSet<Literal> = lits.iter().filter(|_| rng.gen_bool(0.3)).cloned().collect();
    if out.is_empty() {
        if let Some(l) = lits.choose(&mut rng) {
            out.insert(l.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::serialize_theory;
    use crate::engine::compute_extension;

    #[test]
    fn chain_ctd_cascade() {
        let t = generate(&FamilySpec::new(Family::ChainCtd, 10, 0, 0, 0, 1));
        assert_eq!(t.rules().len(), 10);
        assert!(t.warnings().is_empty());
        let (e, _) = compute_extension(&t).unwrap();
        assert_eq!(e.obligation_pos.len(), 10);
        let r3 = t.rule("c3").unwrap();
        assert_eq!(r3.antecedent(), [BodyAtom::Plain(Literal::neg("v2"))]);
    }

    #[test]
    fn conj_grid_bodies() {
        let t = generate(&FamilySpec::new(Family::ConjGrid, 12, 0, 5, 3, 7));
        let conjs = t.body_conjunctions();
        assert_eq!(conjs.len(), 5);
        assert!(conjs.iter().all(|c| c.len() == 3));
        assert!(compute_extension(&t).is_ok());
    }

    #[test]
    fn deterministic_and_valid() {
        for family in Family::ALL {
            let spec = FamilySpec::new(family, 40, 80, 4, 4, 42);
            let a = serialize_theory(&generate(&spec));
            assert_eq!(a, serialize_theory(&generate(&spec)));
            let t = generate(&spec);
            assert!(t.warnings().is_empty(), "{family}: {:?}", t.warnings());
            assert!(t.is_consistent());
        }
        let spec = FamilySpec::new(Family::Layered, 50, 100, 0, 0, 3);
        assert_eq!(generate(&spec).rules().len(), 100);
        assert_ne!(
            serialize_theory(&generate(&spec)),
            serialize_theory(&generate(&FamilySpec { seed: 4, ..spec }))
        );
    }

    #[test]
    fn family_names() {
        for f in Family::ALL {
            assert_eq!(f.to_string().parse::<Family>(), Ok(f));
        }
        assert!("grid".parse::<Family>().is_err());
    }

    #[test]
    fn small_theories() {
        for seed in 0..200 {
            let t = small_theory(4, 6, seed);
            assert_eq!(t.rules().len(), 6);
            assert!(t.atoms().len() <= 4);
            assert!(t.is_consistent());
            assert!(!random_literals(&t, seed).is_empty());
        }
    }
}
