use hat_core::concentric::{catalog, check_concentric, d8_fixture, CatalogEntry};
use hat_core::construct::mn::{build_mn_instance, MnError};
use hat_core::construct::sample::{sample_hat_instances, solvable_ambient_groups};
use hat_core::graph::{
    classify_basic, materialize_coset_graph, transitivity_report, BasicType, NormalSource, DEFAULT_VERTEX_BUDGET,
};
use hat_core::presentation::{h7_presentation, todd_coxeter, DEFAULT_MAX_COSETS};
use hat_core::subgroup::minimal_normal_subgroups;
use hat_core::Permutation;

#[test]
fn h7_closes_at_128_cosets() {
    let t = todd_coxeter(&h7_presentation(), DEFAULT_MAX_COSETS).unwrap();
    assert_eq!(t.coset_count(), 128);
    let seq = check_concentric(&t.generators).unwrap();
    assert_eq!(seq.n(), 7);
    assert_eq!(seq.verify_phi_homomorphism(1), Ok(4096));
}

#[test]
fn d8_pipeline_with_trivial_h() {
    let seq = check_concentric(&d8_fixture()).unwrap();
    let inst = build_mn_instance(&seq, &Permutation::identity(8), 3).unwrap();
    assert!(inst.passed());
    assert_eq!(inst.group.order_u64(), Some(40320));
    let cg = materialize_coset_graph(&inst.group, &inst.regular_set, &inst.tau_h, DEFAULT_VERTEX_BUDGET).unwrap();
    assert_eq!(cg.graph.vertex_count(), 5040);
    assert_eq!(cg.graph.valency(), Some(4));
    assert!(cg.graph.is_connected());
    let g = cg.action_group();
    let r = transitivity_report(&cg.graph, Some(&g), DEFAULT_VERTEX_BUDGET).unwrap();
    assert!(r.hat);
    assert_eq!(r.stabilizer.order_u64(), Some(8));
    assert!(r.stabilizer_concentric.is_some());
    let mins: Vec<_> = minimal_normal_subgroups(&inst.group, 1 << 16)
        .unwrap()
        .iter()
        .map(|n| cg.act_group(n))
        .collect();
    let c = classify_basic(&cg.graph, &g, NormalSource::Supplied(mins), None).unwrap();
    assert_eq!(c.outcome, BasicType::BiQuasiprimitive { aut_clause: None });
    assert_eq!(c.quotients[0].quotient_valency, Some(1));
}

#[test]
fn tau_h_is_a_bijection_exactly_on_c() {
    for entry in CatalogEntry::all_up_to(5) {
        let seq = catalog(entry).unwrap();
        for h in seq.b_set().iter() {
            match build_mn_instance(&seq, h, 1) {
                Ok(inst) => {
                    assert!(seq.c_set().contains(h), "{entry}: {h}");
                    assert!(inst.checks.iter().any(|c| c.name == "shift_conjugation" && c.result));
                }
                Err(MnError::NotAPermutation { .. }) => assert!(!seq.c_set().contains(h), "{entry}: {h}"),
                Err(MnError::AbelianH) => assert!(seq.h_set().is_abelian()),
                Err(e) => panic!("{entry}: {e}"),
            }
        }
    }
}

#[test]
fn sampled_solvable_instances_are_hat_with_elementary_abelian_stabilizers() {
    let instances = sample_hat_instances(&solvable_ambient_groups(), 60, 200_000, 11);
    assert_eq!(instances.len(), 60);
    for i in &instances {
        assert!(i.group.is_solvable());
        let cg = materialize_coset_graph(&i.group, &i.subgroup, &i.edge, DEFAULT_VERTEX_BUDGET).unwrap();
        assert_eq!(cg.graph.valency(), Some(4));
        assert!(cg.graph.is_connected());
        let r = transitivity_report(&cg.graph, Some(&cg.action_group()), DEFAULT_VERTEX_BUDGET).unwrap();
        assert!(r.hat);
        assert!(r.stabilizer_is_elementary_abelian().unwrap());
        assert!(r.stabilizer_concentric.is_some());
    }
}
