//! Seeded small coset-graph instances `Cos(G, H, HgH)` with
//! `|H : H ∩ H^g| = 2` and `HgH ≠ Hg^-1H`, which are connected tetravalent
//! `G`-half-arc-transitive graphs when `G = <H, g>`.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::elements::ElementSet;
use crate::group::PermutationGroup;
use crate::perm::Permutation;
use crate::subgroup::{core_of, double_cosets_equal, index_of_self_intersection};

#[derive(Debug, Clone)]
pub struct CosetInstance {
    /// `<H, g>`.
    pub group: PermutationGroup,
    pub subgroup: ElementSet,
    pub edge: Permutation,
}

fn group(degree: usize, cycles: &[&[&[usize]]]) -> PermutationGroup {
    let gens = cycles
        .iter()
        .map(|c| Permutation::from_cycles(degree, &c.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).expect("valid"))
        .collect();
    PermutationGroup::new(gens).expect("nonempty")
}

/// `x -> ax + b` over `Z_p`, on points `1..=p`.
fn affine(p: usize, primitive_root: usize) -> PermutationGroup {
    let shift = Permutation::from_images((0..p).map(|x| ((x + 1) % p) as u32).collect()).expect("bijective");
    let scale = Permutation::from_images((0..p).map(|x| (x * primitive_root % p) as u32).collect()).expect("bijective");
    PermutationGroup::new(vec![shift, scale]).expect("nonempty")
}

/// A fixed list of solvable groups of degree at most 8.
pub fn solvable_ambient_groups() -> Vec<PermutationGroup> {
    vec![
        group(4, &[&[&[1, 2, 3, 4]], &[&[1, 2]]]),
        group(6, &[&[&[1, 2, 3]], &[&[1, 2]], &[&[1, 4], &[2, 5], &[3, 6]]]),
        group(8, &[&[&[1, 2]], &[&[1, 3], &[2, 4]], &[&[1, 5], &[2, 6], &[3, 7], &[4, 8]]]),
        group(8, &[&[&[1, 2]], &[&[1, 3, 5, 7], &[2, 4, 6, 8]]]),
        group(8, &[&[&[1, 2]], &[&[1, 3, 5, 7], &[2, 4, 6, 8]], &[&[1, 3], &[2, 4]]]),
        group(8, &[&[&[1, 2, 3, 4]], &[&[1, 2]], &[&[1, 5], &[2, 6], &[3, 7], &[4, 8]]]),
        group(8, &[&[&[1, 2, 3, 4, 5, 6, 7, 8]], &[&[2, 8], &[3, 7], &[4, 6]]]),
        affine(5, 2),
        affine(7, 3),
    ]
}

/// Up to `count` distinct instances from `attempts` seeded draws: `H` is
/// generated by one to three random 2-elements of an ambient group, `g` is
/// a random element, and `H` must be a core-free 2-group in `<H, g>`.
pub fn sample_hat_instances(ambient: &[PermutationGroup], count: usize, attempts: usize, seed: u64) -> Vec<CosetInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pools: Vec<(ElementSet, Vec<Permutation>)> = ambient
        .iter()
        .map(|g| {
            let all = g.enumerate_elements(1 << 16).expect("small ambient group");
            let two: Vec<Permutation> = all
                .iter()
                .filter(|x| !x.is_identity() && x.order().count_ones() == 1)
                .cloned()
                .collect();
            (all, two)
        })
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for attempt in 0..attempts {
        if out.len() >= count {
            break;
        }
        let (all, two) = &pools[attempt % pools.len()];
        let k = rng.gen_range(1..=3);
        let gens: Vec<Permutation> = (0..k).map(|_| two[rng.gen_range(0..two.len())].clone()).collect();
        let Ok(h) = ElementSet::generate(all.degree(), &gens, 1 << 10) else {
            continue;
        };
        if !h.len().is_power_of_two() {
            continue;
        }
        let g = all.get(rng.gen_range(0..all.len())).clone();
        if index_of_self_intersection(&h, &g) != 2 || double_cosets_equal(&h, &g) {
            continue;
        }
        let mut sorted: Vec<Permutation> = h.iter().cloned().collect();
        sorted.sort();
        if !seen.insert((sorted, g.clone())) {
            continue;
        }
        let mut spanning = h.generating_set();
        spanning.push(g.clone());
        let group = PermutationGroup::with_seed(spanning, seed).expect("nonempty");
        if !core_of(&h, &group).is_trivial() {
            continue;
        }
        out.push(CosetInstance {
            group,
            subgroup: h,
            edge: g,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ambient_groups_are_solvable() {
        let orders: Vec<u64> = solvable_ambient_groups().iter().map(|g| g.order_u64().unwrap()).collect();
        assert_eq!(orders, vec![24, 72, 128, 64, 384, 1152, 16, 20, 42]);
        assert!(solvable_ambient_groups().iter().all(PermutationGroup::is_solvable));
    }

    #[test]
    fn sampled_instances_meet_the_criterion() {
        let inst = sample_hat_instances(&solvable_ambient_groups(), 10, 5000, 7);
        assert_eq!(inst.len(), 10);
        for i in &inst {
            assert_eq!(index_of_self_intersection(&i.subgroup, &i.edge), 2);
            assert!(!double_cosets_equal(&i.subgroup, &i.edge));
        }
    }
}
