use proptest::prelude::*;

use ddl_core::dsl::{parse_theory, serialize_theory};
use ddl_core::engine::Parallelism;
use ddl_core::gen::{generate, small_theory, Family, FamilySpec};
use ddl_core::proof::checker::check_derivation;
use ddl_core::proof::derivation::Sign;
use ddl_core::proof::witness::witness_derivation;
use ddl_core::Engine;

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::ChainCtd),
        Just(Family::Layered),
        Just(Family::ConjGrid)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sequential_matches_parallel(f in family(), n in 4usize..40, m in 0usize..4, k in 2usize..4, seed: u64) {
        let t = generate(&FamilySpec::new(f, n, n, m, k, seed));
        let seq = Engine::new(t.clone()).with_parallelism(Parallelism::Sequential).extension().unwrap();
        let par = Engine::new(t).with_parallelism(Parallelism::Parallel).extension().unwrap();
        prop_assert_eq!(seq, par);
    }

    #[test]
    fn memo_is_transparent(atoms in 1usize..5, rules in 0usize..8, seed: u64) {
        let t = small_theory(atoms, rules, seed);
        let with = Engine::new(t.clone()).extension().unwrap();
        let without = Engine::new(t).without_memo().extension().unwrap();
        prop_assert_eq!(with, without);
    }

    #[test]
    fn serialize_round_trip(f in family(), n in 2usize..30, m in 0usize..3, seed: u64) {
        let t = generate(&FamilySpec::new(f, n, n, m, 2, seed));
        let text = serialize_theory(&t);
        let back = parse_theory(&text).unwrap().theory;
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(serialize_theory(&back), text);
    }

    #[test]
    fn witnesses_check(atoms in 1usize..5, rules in 0usize..7, seed: u64) {
        let engine = Engine::new(small_theory(atoms, rules, seed));
        let ext = engine.extension().unwrap();
        for goal in ext.members().filter(|e| e.sign() == Sign::Plus) {
            let d = witness_derivation(&engine, &goal).unwrap();
            prop_assert!(check_derivation(engine.theory(), &d).accepted, "{}", goal);
        }
    }
}
