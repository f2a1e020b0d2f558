use std::collections::{HashSet, VecDeque};

use hat_core::format::{parse_graph, parse_group, write_graph, write_group};
use hat_core::graph::{graph_automorphism_group, materialize_coset_graph, normal_quotient, Graph, DEFAULT_VERTEX_BUDGET};
use hat_core::subgroup::{double_cosets_equal, index_of_self_intersection};
use hat_core::{ElementSet, Permutation, PermutationGroup};
use proptest::prelude::*;

fn perm(degree: usize) -> impl Strategy<Value = Permutation> {
    Just((0..degree as u32).collect::<Vec<u32>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn perms(max_degree: usize, max_count: usize) -> impl Strategy<Value = Vec<Permutation>> {
    (1..=max_degree).prop_flat_map(move |d| prop::collection::vec(perm(d), 1..=max_count))
}

/// Closure under right multiplication by the generators.
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

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for k in 0..n {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

fn count_automorphisms(g: &Graph) -> usize {
    let n = g.vertex_count();
    all_perms(n)
        .iter()
        .filter(|p| g.edges().iter().all(|&(u, v)| g.has_edge(p[u], p[v])))
        .count()
}

fn random_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let len = pairs.len();
        prop::collection::vec(any::<bool>(), len).prop_map(move |keep| {
            let edges: Vec<(usize, usize)> = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e).collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn product_laws((p, q, r) in (1usize..9).prop_flat_map(|d| (perm(d), perm(d), perm(d)))) {
        let d = p.degree();
        prop_assert_eq!(p.then(&q).then(&r), p.then(&q.then(&r)));
        prop_assert!(p.then(&p.inverse()).is_identity());
        prop_assert_eq!(p.conjugate(&q), q.inverse().then(&p).then(&q));
        let order: u64 = p.order().try_into().unwrap();
        prop_assert!(p.pow(order as i64).is_identity());
        for x in 0..d {
            prop_assert_eq!(p.then(&q).image(x), q.image(p.image(x)));
        }
    }

    #[test]
    fn order_and_membership_match_enumeration(gens in perms(7, 3), probe in any::<prop::sample::Index>()) {
        let g = PermutationGroup::new(gens.clone()).unwrap();
        let elements = closure(&gens);
        prop_assert_eq!(g.order_u64().unwrap(), elements.len() as u64);
        let d = gens[0].degree();
        let all = all_perms(d);
        let x = &all[probe.index(all.len())];
        let x = Permutation::from_images(x.iter().map(|&i| i as u32).collect()).unwrap();
        prop_assert_eq!(g.contains(&x), elements.contains(&x));
    }

    #[test]
    fn orbit_stabilizer(gens in perms(7, 3), p in any::<prop::sample::Index>()) {
        let g = PermutationGroup::new(gens.clone()).unwrap();
        let p = p.index(g.degree());
        let orbit = g.orbit(p).unwrap();
        let stab = g.point_stabilizer(p).unwrap();
        prop_assert_eq!(g.order_u64().unwrap(), orbit.len() as u64 * stab.order_u64().unwrap());
        let literal: HashSet<usize> = closure(&gens).iter().map(|x| x.image(p)).collect();
        prop_assert_eq!(literal.len(), orbit.len());
    }

    #[test]
    fn double_cosets_against_literal_sets(gens in perms(5, 2), hi in any::<prop::sample::Index>(), gi in any::<prop::sample::Index>()) {
        let group: Vec<Permutation> = closure(&gens).into_iter().collect();
        let h = ElementSet::generate(gens[0].degree(), &[group[hi.index(group.len())].clone()], 200).unwrap();
        let g = &group[gi.index(group.len())];
        let dc = |x: &Permutation| -> HashSet<Permutation> {
            h.iter().flat_map(|a| h.iter().map(move |b| a.then(x).then(b))).collect()
        };
        prop_assert_eq!(double_cosets_equal(&h, g), dc(g) == dc(&g.inverse()));
        let meet = h.iter().filter(|x| h.contains(&g.inverse().then(x).then(g))).count();
        prop_assert_eq!(index_of_self_intersection(&h, g), h.len() / meet);
    }

    #[test]
    fn coset_graph_valency_formula(gens in perms(5, 2), hi in any::<prop::sample::Index>(), gi in any::<prop::sample::Index>()) {
        let g = PermutationGroup::new(gens.clone()).unwrap();
        let group: Vec<Permutation> = closure(&gens).into_iter().collect();
        let h = ElementSet::generate(g.degree(), &[group[hi.index(group.len())].clone()], 200).unwrap();
        let x = &group[gi.index(group.len())];
        prop_assume!(!h.contains(x));
        let cg = materialize_coset_graph(&g, &h, x, 1000).unwrap();
        let formula = index_of_self_intersection(&h, x) * if double_cosets_equal(&h, x) { 1 } else { 2 };
        prop_assert_eq!(cg.graph.vertex_count(), group.len() / h.len());
        prop_assert_eq!(cg.graph.valency(), Some(formula));
        for s in g.generators() {
            prop_assert!(cg.graph.preserves(&cg.act(s)));
        }
    }

    #[test]
    fn automorphism_order_matches_exhaustive(g in random_graph(7)) {
        let aut = graph_automorphism_group(&g, DEFAULT_VERTEX_BUDGET).unwrap();
        prop_assert!(aut.generators().iter().all(|p| g.preserves(p)));
        prop_assert_eq!(aut.order_u64().unwrap() as usize, count_automorphisms(&g));
    }

    #[test]
    fn quotient_valency_never_grows(n in 3usize..12, step in 1usize..6) {
        let c = Graph::cycle(n);
        let rot = Permutation::from_images((0..n as u32).map(|i| (i + 1) % n as u32).collect()).unwrap();
        let refl = Permutation::from_images((0..n as u32).map(|i| (n as u32 - i) % n as u32).collect()).unwrap();
        let g = PermutationGroup::new(vec![rot.clone(), refl]).unwrap();
        let sub = PermutationGroup::new(vec![rot.pow(step as i64)]).unwrap();
        let q = normal_quotient(&c, &g, &sub).unwrap();
        prop_assert!(q.quotient_valency.unwrap() <= 2);
        prop_assert_eq!(q.is_normal_cover, q.quotient_valency == Some(2));
        prop_assert_eq!(q.orbit_partition.len(), n / sub.order_u64().unwrap() as usize);
    }

    #[test]
    fn group_file_round_trip(gens in perms(9, 4)) {
        let text = write_group(gens[0].degree(), &gens);
        let f = parse_group(&text).unwrap();
        prop_assert_eq!(&f.generators, &gens);
        prop_assert_eq!(write_group(f.degree, &f.generators), text);
    }

    #[test]
    fn graph_file_round_trip(g in random_graph(9)) {
        let text = write_graph(&g);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(write_graph(&back), text);
    }
}
