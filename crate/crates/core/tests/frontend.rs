use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use xplain_core::ast::pretty_print;
use xplain_core::desugar::desugar_program;
use xplain_core::ground::ground;
use xplain_core::parser::parse_program;
use xplain_core::testing::{
    engine_answer_sets, naive_instantiate, random_program, random_program_with_variables, reference_answer_sets,
    GenConfig,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pretty_print_round_trips(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let config = GenConfig { choice: true, ..Default::default() };
        let p = random_program(&mut rng, &config);
        prop_assert_eq!(parse_program(&pretty_print(&p)).unwrap(), p.clone());
        let q = random_program_with_variables(&mut rng);
        prop_assert_eq!(parse_program(&pretty_print(&q)).unwrap(), q);
    }
}

#[test]
fn choice_rewriting_preserves_visible_answer_sets() {
    let mut rng = StdRng::seed_from_u64(11);
    let config = GenConfig {
        atoms: 7,
        max_rules: 8,
        choice: true,
        ..Default::default()
    };
    for _ in 0..200 {
        let p = random_program(&mut rng, &config);
        let desugared = desugar_program(&p).unwrap();
        assert!(desugared.rules.iter().all(|r| !r.is_choice()));
        let original_atoms: std::collections::BTreeSet<_> = p.rules.iter().flat_map(|r| r.atoms()).collect();
        for r in &desugared.rules {
            for a in r.atoms() {
                assert!(original_atoms.contains(a) || a.is_hidden(), "{a}");
            }
        }
        assert_eq!(engine_answer_sets(&p), reference_answer_sets(&p), "{p}");
    }
}

#[test]
fn grounding_matches_naive_instantiation() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..200 {
        let p = random_program_with_variables(&mut rng);
        let naive = naive_instantiate(&p);
        assert_eq!(engine_answer_sets(&p), engine_answer_sets(&naive), "{p}");
        assert_eq!(engine_answer_sets(&naive), reference_answer_sets(&naive), "{p}");
    }
}

#[test]
fn grounding_is_idempotent_and_bijective() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..100 {
        let p = random_program_with_variables(&mut rng);
        let g = ground(&p).unwrap();
        let again = ground(&g.to_program()).unwrap();
        assert_eq!(again.to_program(), g.to_program());
        for (id, atom) in g.atoms.iter() {
            assert_eq!(g.atom_id(atom), Some(id));
        }
    }
}
