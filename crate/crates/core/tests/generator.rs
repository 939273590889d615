use aop_core::p3sat::{generate, incidence_graph, sat_oracle, search_unsatisfiable, validate_embedding, GenerateError};
use aop_core::reduction::{assemble, structural_check};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn generated_formulas_are_planar(seed in any::<u64>(), n in 3usize..12, extra in 0usize..10) {
        let m = (n + extra).min(2 * (n - 2));
        let f = match generate(seed, n, m) {
            Err(GenerateError::NoRoom { .. }) => return Ok(()),
            r => r.unwrap(),
        };
        prop_assert_eq!(f.formula().variable_count(), n);
        prop_assert_eq!(f.formula().clause_count(), m);
        for c in f.formula().clauses() {
            prop_assert!(c[0].var != c[1].var && c[1].var != c[2].var && c[0].var != c[2].var);
        }
        let report = validate_embedding(incidence_graph(f.formula()).neighbors(), f.rotation()).unwrap();
        prop_assert!(report.is_planar());
        prop_assert_eq!(generate(seed, n, m).unwrap(), f);
    }

    #[test]
    fn generated_reductions_pass_structure(seed in any::<u64>(), n in 3usize..7) {
        let f = generate(seed, n, n - 1).unwrap();
        let r = structural_check(&assemble(&f));
        prop_assert!(r.passed(), "{}", r);
    }
}

#[test]
fn moderate_densities_always_fit() {
    for n in 3..14 {
        for seed in 0..50 {
            assert!(generate(seed, n, n - 1).is_ok(), "seed {seed}, n {n}");
        }
    }
}

#[test]
fn too_many_clauses_is_rejected() {
    assert!(matches!(generate(0, 4, 5), Err(GenerateError::NoRoom { .. })));
    assert!(matches!(generate(0, 2, 1), Err(GenerateError::TooSmall { .. })));
}

#[test]
fn unsatisfiable_search_yields_unsatisfiable_planar_formulas() {
    let f = search_unsatisfiable(11, 7, 10, 40).unwrap().expect("found");
    assert_eq!(sat_oracle(f.formula(), 24).unwrap(), None);
    assert!(structural_check(&assemble(&f)).passed());
}
