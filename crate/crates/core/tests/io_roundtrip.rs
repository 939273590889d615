mod common;

use aop_core::fixtures::five_variable_instance;
use aop_core::io::{
    export_dot, read_artifact, read_formula, read_instance, read_witness, write_artifact, write_formula,
    write_instance, write_witness, InstanceExtras, IoError, ReadOptions,
};
use aop_core::p3sat::generate;
use aop_core::reduction::{assemble, base_gadget_instance};
use aop_core::solver::decide;
use common::random_problem;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn instance_roundtrip(seed in any::<u64>(), n in 0u32..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_problem(&mut rng, n, 20, 0.4);
        let text = write_instance(&p, &InstanceExtras::default());
        let back = read_instance(&text, ReadOptions::default()).unwrap();
        prop_assert_eq!(&back.problem, &p);
        prop_assert_eq!(write_instance(&back.problem, &back.extras), text);
    }

    #[test]
    fn witness_roundtrip(seed in any::<u64>(), n in 1u32..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_problem(&mut rng, n, 12, 0.3);
        if let Some(w) = decide(&p).status.witness() {
            let back = read_witness(&write_witness(w), p.graph()).unwrap();
            prop_assert_eq!(&back, w);
        }
    }

    #[test]
    fn formula_roundtrip(seed in any::<u64>(), n in 3usize..9) {
        let Ok(f) = generate(seed, n, n) else { return Ok(()) };
        let text = write_formula(f.formula(), Some(f.rotation()));
        let back = read_formula(&text).unwrap().planar().unwrap();
        prop_assert_eq!(back, f);
    }
}

#[test]
fn artifact_roundtrip() {
    let a = assemble(&five_variable_instance());
    let text = write_artifact(&a);
    let back = read_artifact(&text).unwrap();
    assert_eq!(back, a);
    assert_eq!(write_artifact(&back), text);
}

#[test]
fn multi_edges_need_the_flag() {
    let doc = r#"{"format":"acyclic-parity-orientation","version":1,
        "vertices":[{"id":0,"in_t":false},{"id":1,"in_t":true},{"id":2,"in_t":true}],
        "edges":[[0,1],[1,0],[1,2],[2,1],[1,2]],"arcs":[]}"#;
    assert!(read_instance(doc, ReadOptions::default()).is_err());
    let merged = read_instance(doc, ReadOptions { normalize_multi: true }).unwrap();
    assert_eq!(merged.problem.graph().edges().len(), 1);
}

#[test]
fn malformed_json_reports_position() {
    let err = read_instance("{\n  \"format\": ", ReadOptions::default()).unwrap_err();
    assert!(matches!(err, IoError::Parse { line: 2, .. }), "{err}");
}

#[test]
fn missing_rotation_is_reported() {
    let f = five_variable_instance();
    let text = write_formula(f.formula(), None);
    let err = read_formula(&text).unwrap().planar().unwrap_err();
    assert!(err.to_string().contains("embedding required"), "{err}");
}

#[test]
fn base_gadget_dot_matches_golden() {
    let g = base_gadget_instance();
    let dot = export_dot(&g.problem, None, Some(&g.registry));
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/base_gadget.dot");
    if std::env::var_os("BLESS").is_some() {
        std::fs::write(path, &dot).unwrap();
    }
    assert_eq!(dot, std::fs::read_to_string(path).unwrap());
}
