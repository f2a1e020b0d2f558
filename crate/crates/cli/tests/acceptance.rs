//! Acceptance criteria, one test each. Every test prints a single
//! `criterion N: PASS|FAIL` line to stdout (uncaptured) before asserting.

use std::collections::{HashSet, VecDeque};
use std::io::Write;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hat_cli::CertificateDocument;
use hat_core::check::{all_pass, Check};
use hat_core::concentric::{catalog, check_concentric, d8_fixture, CatalogEntry};
use hat_core::construct::mn::{build_mn_instance, build_tau_h, conjugation_failures, regular_generators, MnError};
use hat_core::construct::sample::{sample_hat_instances, solvable_ambient_groups};
use hat_core::construct::wreath::{build_wreath_instance, check_c1_c4, search_shift_element, verify_wreath_theorem};
use hat_core::graph::{
    graph_automorphism_group, materialize_coset_graph, normal_quotient, transitivity_report, CoverLemma, Graph,
    DEFAULT_VERTEX_BUDGET,
};
use hat_core::presentation::{h7_presentation, todd_coxeter, DEFAULT_MAX_COSETS};
use hat_core::subgroup::minimal_normal_subgroups;
use hat_core::{Permutation, PermutationGroup};

const SEED: u64 = 20;

fn report(n: u32, ok: bool, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "criterion {n}: {status} - {detail}").unwrap();
}

fn cyc(d: usize, c: &[&[usize]]) -> Permutation {
    Permutation::from_cycles(d, &c.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn random_perm(rng: &mut ChaCha8Rng, d: usize) -> Permutation {
    let mut v: Vec<u32> = (0..d as u32).collect();
    v.shuffle(rng);
    Permutation::from_images(v).unwrap()
}

/// Every element, by breadth-first closure under the generators.
fn closure(gens: &[Permutation]) -> HashSet<Permutation> {
    let id = Permutation::identity(gens[0].degree());
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Exhaustive backtracking count of adjacency-preserving bijections.
fn count_automorphisms(g: &Graph) -> u64 {
    fn go(g: &Graph, image: &mut Vec<usize>, used: &mut Vec<bool>) -> u64 {
        let k = image.len();
        if k == g.vertex_count() {
            return 1;
        }
        let mut total = 0;
        for y in 0..g.vertex_count() {
            if used[y] || g.degree(y) != g.degree(k) {
                continue;
            }
            if (0..k).all(|x| g.has_edge(k, x) == g.has_edge(y, image[x])) {
                used[y] = true;
                image.push(y);
                total += go(g, image, used);
                image.pop();
                used[y] = false;
            }
        }
        total
    }
    go(g, &mut Vec::new(), &mut vec![false; g.vertex_count()])
}

fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((i + 5, (i + 2) % 5 + 5));
    }
    Graph::from_edges(10, &edges).unwrap()
}

#[test]
fn criterion_1_permutation_engine() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut mismatches = 0;
    for _ in 0..200 {
        let d = rng.gen_range(1..=7);
        let k = rng.gen_range(1..=3);
        let gens: Vec<Permutation> = (0..k).map(|_| random_perm(&mut rng, d)).collect();
        let g = PermutationGroup::with_seed(gens.clone(), rng.gen()).unwrap();
        let all = closure(&gens);
        if g.order_u64() != Some(all.len() as u64) {
            mismatches += 1;
        }
        for _ in 0..20 {
            let x = random_perm(&mut rng, d);
            if g.contains(&x) != all.contains(&x) {
                mismatches += 1;
            }
        }
    }
    let a8 = PermutationGroup::new(vec![cyc(8, &[&[1, 2, 3]]), cyc(8, &[&[2, 3, 4, 5, 6, 7, 8]])]).unwrap();
    let a8_order = a8.order_u64();
    let elapsed = start.elapsed();
    let ok = mismatches == 0 && a8_order == Some(20160) && elapsed < Duration::from_secs(60);
    report(1, ok, &format!("{mismatches} mismatches over 200 sets, |A8| = {a8_order:?}, {elapsed:.2?}"));
    assert!(ok);
}

#[test]
fn criterion_2_h7_realization() {
    let start = Instant::now();
    let table = todd_coxeter(&h7_presentation(), DEFAULT_MAX_COSETS).unwrap();
    let cosets = table.coset_count();
    let seq = check_concentric(&table.generators);
    let (n, pairs) = match &seq {
        Ok(s) => (s.n(), s.verify_phi_homomorphism(SEED).ok()),
        Err(_) => (0, None),
    };
    let elapsed = start.elapsed();
    let ok = cosets == 128 && n == 7 && pairs == Some(4096) && elapsed < Duration::from_secs(10);
    report(2, ok, &format!("{cosets} cosets, n = {n}, phi checked on {pairs:?} pairs, {elapsed:.2?}"));
    assert!(ok);
}

#[test]
fn criterion_3_conjugation_lemma() {
    let start = Instant::now();
    let mut cases = 0;
    let mut failures = Vec::new();
    for entry in CatalogEntry::all_up_to(5) {
        let seq = catalog(entry).unwrap();
        let regular = regular_generators(&seq);
        for h in seq.b_set().iter() {
            cases += 1;
            match build_tau_h(&seq, h) {
                Ok(tau) => {
                    for i in conjugation_failures(&regular, &tau) {
                        failures.push(format!("{entry}, h = {h}, i = {i}"));
                    }
                }
                Err(e @ MnError::NotAPermutation { .. }) => failures.push(format!("{entry}, h = {h}: {e}")),
                Err(e) => panic!("{entry}: {e}"),
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(60);
    report(
        3,
        ok,
        &format!(
            "{} failures over {cases} (group, h) pairs, first: {}, {elapsed:.2?}",
            failures.len(),
            failures.first().map_or("none", String::as_str)
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_4_two_creator_pipeline() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut cases = 0;
    for name in ["D8", "D8xZ2^1"] {
        let entry: CatalogEntry = name.parse().unwrap();
        let seq = catalog(entry).unwrap();
        for h in seq.b_set().iter() {
            cases += 1;
            let inst = match build_mn_instance(&seq, h, SEED) {
                Ok(i) => i,
                Err(e) => {
                    failures.push(format!("{name}, h = {h}: {e}"));
                    continue;
                }
            };
            if !all_pass(&inst.checks[..5]) {
                failures.push(format!("{name}, h = {h}: certificate check failed"));
                continue;
            }
            let cg = match materialize_coset_graph(&inst.group, &inst.regular_set, &inst.tau_h, DEFAULT_VERTEX_BUDGET) {
                Ok(c) => c,
                Err(e) => {
                    failures.push(format!("{name}, h = {h}: {e}"));
                    continue;
                }
            };
            let g = &cg.graph;
            let r = transitivity_report(g, Some(&cg.action_group()), DEFAULT_VERTEX_BUDGET).unwrap();
            let ok = g.is_connected()
                && g.valency() == Some(4)
                && r.hat
                && r.stabilizer.order_u64() == Some(seq.h_set().len() as u64);
            if !ok {
                failures.push(format!("{name}, h = {h}: graph or report check failed"));
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < Duration::from_secs(300);
    report(
        4,
        ok,
        &format!(
            "{} of {cases} cases failed, first: {}, {elapsed:.2?}",
            failures.len(),
            failures.first().map_or("none", String::as_str)
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_5_wreath_theorem() {
    let start = Instant::now();
    let a8 = PermutationGroup::new(vec![cyc(8, &[&[1, 2, 3]]), cyc(8, &[&[2, 3, 4, 5, 6, 7, 8]])]).unwrap();
    let d8 = d8_fixture();
    let theorem = ["i_generation", "ii_intersection_index", "iv_core_free", "v_shift_structure"];
    let structure = ["tau_order", "blocks_conjugate", "power_restriction", "conjugation_chain", "socle_product"];
    let holds = |checks: &[Check], names: &[&str]| names.iter().all(|n| checks.iter().any(|c| c.name == *n && c.result));
    let mut ok = true;
    let mut details = Vec::new();
    match search_shift_element(&a8, &d8, 1 << 16).unwrap() {
        Some(a) => {
            ok &= check_c1_c4(&a8, &a, &d8).unwrap().conditions_hold();
            for m in [1, 2] {
                let checks = verify_wreath_theorem(&build_wreath_instance(&a8, &a, &d8, m).unwrap()).unwrap();
                let iii = checks.iter().find(|c| c.name == "iii_double_cosets_unequal").map(|c| c.result);
                ok &= holds(&checks, &theorem) && iii.is_some();
                details.push(format!("A8, m = {m}: (iii) {iii:?}"));
            }
        }
        None => {
            let mut doc = CertificateDocument::new("wreath shift search");
            doc.checks.push(Check::new(
                "a8_shift_search_exhausted",
                "no a in A8 fixes point 1, shifts the D8 triple and generates A8 with it",
                true,
                Some("every solution of h_i^a = h_{i+1} in Sym(8) was tested".into()),
            ));
            let path = std::env::temp_dir().join("hat-acceptance-a8-shift.json");
            std::fs::write(&path, doc.to_json()).unwrap();
            details.push(format!("A8 has no shift element, certificate {}", path.display()));
            let a4 = PermutationGroup::new(vec![cyc(4, &[&[1, 2, 3]]), cyc(4, &[&[2, 3, 4]])]).unwrap();
            let klein = vec![cyc(4, &[&[1, 2], &[3, 4]]), cyc(4, &[&[1, 3], &[2, 4]])];
            let a = search_shift_element(&a4, &klein, 1000).unwrap().expect("A4 has a shift element");
            let conditions = check_c1_c4(&a4, &a, &klein).unwrap();
            ok &= conditions.conditions_hold();
            for m in [1, 2] {
                let checks = verify_wreath_theorem(&build_wreath_instance(&a4, &a, &klein, m).unwrap()).unwrap();
                let reported = theorem.iter().chain(["iii_double_cosets_unequal"].iter()).all(|n| checks.iter().any(|c| c.name == *n));
                ok &= reported && holds(&checks, &structure);
                let summary: Vec<String> = checks[..5].iter().map(|c| format!("{} {}", c.name, c.result)).collect();
                details.push(format!("A4 toy m = {m}: {}", summary.join(", ")));
            }
        }
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(300);
    report(5, ok, &format!("{}; {elapsed:.2?}", details.join("; ")));
    assert!(ok);
}

#[test]
fn criterion_6_solvable_stabilizers() {
    let start = Instant::now();
    let instances = sample_hat_instances(&solvable_ambient_groups(), 60, 200_000, SEED);
    let mut counterexamples = 0;
    let mut not_hat = 0;
    for i in &instances {
        assert!(i.group.is_solvable());
        let cg = materialize_coset_graph(&i.group, &i.subgroup, &i.edge, DEFAULT_VERTEX_BUDGET).unwrap();
        let r = transitivity_report(&cg.graph, Some(&cg.action_group()), DEFAULT_VERTEX_BUDGET).unwrap();
        if !(r.hat && cg.graph.valency() == Some(4) && cg.graph.is_connected()) {
            not_hat += 1;
            continue;
        }
        if !r.stabilizer_is_elementary_abelian().unwrap() {
            counterexamples += 1;
        }
    }
    let hat_count = instances.len() - not_hat;
    let ok = hat_count >= 50 && counterexamples == 0;
    report(
        6,
        ok,
        &format!("{hat_count} solvable G-HAT instances, {counterexamples} counterexamples, {:.2?}", start.elapsed()),
    );
    assert!(ok);
}

#[test]
fn criterion_7_concentric_stabilizers() {
    let start = Instant::now();
    let mut stabilizers: Vec<(String, PermutationGroup)> = Vec::new();
    let mut reject = Vec::new();
    let mut collect = |label: String, graph: &Graph, g: &PermutationGroup| {
        let r = transitivity_report(graph, Some(g), DEFAULT_VERTEX_BUDGET).unwrap();
        if r.hat {
            if r.stabilizer_concentric.is_none() {
                reject.push(label.clone());
            }
            stabilizers.push((label, r.stabilizer));
        }
    };
    let seq = catalog(CatalogEntry::D8(0)).unwrap();
    for h in seq.b_set().iter() {
        if let Ok(inst) = build_mn_instance(&seq, h, SEED) {
            let cg = materialize_coset_graph(&inst.group, &inst.regular_set, &inst.tau_h, DEFAULT_VERTEX_BUDGET).unwrap();
            collect(format!("MN D8, h = {h}"), &cg.graph, &cg.action_group());
        }
    }
    for (k, i) in sample_hat_instances(&solvable_ambient_groups(), 60, 200_000, SEED).iter().enumerate() {
        let cg = materialize_coset_graph(&i.group, &i.subgroup, &i.edge, DEFAULT_VERTEX_BUDGET).unwrap();
        collect(format!("sample {k}"), &cg.graph, &cg.action_group());
    }
    let ok = reject.is_empty() && !stabilizers.is_empty();
    report(
        7,
        ok,
        &format!(
            "{} G-HAT stabilizers, {} not concentric, {:.2?}",
            stabilizers.len(),
            reject.len(),
            start.elapsed()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_8_graph_engine() {
    let start = Instant::now();
    let order = |g: &Graph| graph_automorphism_group(g, DEFAULT_VERTEX_BUDGET).unwrap().order_u64().unwrap();
    let fixed = [order(&Graph::cycle(4)), order(&Graph::complete(4)), order(&petersen())];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut mismatches = 0;
    for _ in 0..500 {
        let n = rng.gen_range(1..=10);
        let p: f64 = rng.gen();
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|_| rng.gen_bool(p))
            .collect();
        let g = Graph::from_edges(n, &edges).unwrap();
        let aut = graph_automorphism_group(&g, DEFAULT_VERTEX_BUDGET).unwrap();
        if !aut.generators().iter().all(|x| g.preserves(x)) || aut.order_u64() != Some(count_automorphisms(&g)) {
            mismatches += 1;
        }
    }
    let elapsed = start.elapsed();
    let ok = fixed == [8, 24, 120] && mismatches == 0 && elapsed < Duration::from_secs(120);
    report(8, ok, &format!("orders {fixed:?}, {mismatches} mismatches over 500 graphs, {elapsed:.2?}"));
    assert!(ok);
}

#[test]
fn criterion_9_quotient_machinery() {
    let start = Instant::now();
    let seq = catalog(CatalogEntry::D8(0)).unwrap();
    let inst = build_mn_instance(&seq, &Permutation::identity(seq.degree()), SEED).unwrap();
    let cg = materialize_coset_graph(&inst.group, &inst.regular_set, &inst.tau_h, DEFAULT_VERTEX_BUDGET).unwrap();
    let g = cg.action_group();
    let g_solvable = g.is_solvable();
    let mut violations = Vec::new();
    let mins = minimal_normal_subgroups(&inst.group, 1 << 16).unwrap();
    for n in &mins {
        let nv = cg.act_group(n);
        let q = normal_quotient(&cg.graph, &g, &nv).unwrap();
        let valency = q.quotient_valency;
        if !matches!(valency, Some(0 | 1 | 2 | 4)) {
            violations.push(format!("|N| = {}: valency {valency:?}", n.order()));
        }
        if q.is_normal_cover != (valency == Some(4)) {
            violations.push(format!("|N| = {}: cover flag disagrees with valency", n.order()));
        }
        if !g_solvable && nv.is_solvable() && !(q.is_normal_cover && q.n_semiregular) {
            violations.push(format!("|N| = {}: solvable N is not a semiregular normal cover", n.order()));
        }
        if q.cover_lemma == CoverLemma::Violated {
            violations.push(format!("|N| = {}: cover lemma violated", n.order()));
        }
    }
    let ok = violations.is_empty() && !mins.is_empty();
    report(
        9,
        ok,
        &format!(
            "{} minimal normal subgroups of orders {:?}, {} violations, {:.2?}",
            mins.len(),
            mins.iter().map(|n| n.order().to_string()).collect::<Vec<_>>(),
            violations.len(),
            start.elapsed()
        ),
    );
    assert!(ok);
}
