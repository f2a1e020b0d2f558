//! Automorphism groups of explicitly enumerated groups.
//!
//! An automorphism is determined by the images of a generating set. The
//! search fixes generators one at a time, deepest level first, and keeps
//! one automorphism per new orbit point (Sims-style), so the result is a
//! generating set rather than a list of all automorphisms. Automorphisms are
//! returned as permutations of the canonical element order.

use std::collections::VecDeque;

use crate::elements::{ElementIndex, ElementSet};
use crate::group::PermutationGroup;
use crate::perm::{PermError, Permutation};

/// Automorphisms of `h` mapping the set `stabilized` onto itself; an empty
/// set imposes no constraint.
pub fn automorphism_group(h: &ElementSet, stabilized: &[Permutation]) -> Result<PermutationGroup, PermError> {
    let idx = ElementIndex::new(h);
    let mut in_set = vec![false; h.len()];
    for s in stabilized {
        let i = h.index_of(s).ok_or_else(|| PermError::NotBijective(format!("{s} is not an element of the group")))?;
        in_set[i] = true;
    }
    let search = AutSearch::new(&idx, if stabilized.is_empty() { None } else { Some(in_set) });
    let maps = search.generators();
    let gens: Vec<Permutation> = maps
        .into_iter()
        .map(|m| Permutation::from_images(m).expect("automorphisms are bijective"))
        .collect();
    if gens.is_empty() {
        Ok(PermutationGroup::trivial(h.len()))
    } else {
        PermutationGroup::new(gens)
    }
}

/// Greedy generating set, as element indices: at each step the element
/// outside the current span with the smallest `weight` (ties by index).
pub fn generating_indices(idx: &ElementIndex, weight: &[usize]) -> Vec<usize> {
    let n = idx.len();
    let mut span = vec![false; n];
    span[idx.identity()] = true;
    let mut members = vec![idx.identity()];
    let mut gens = Vec::new();
    while members.len() < n {
        let x = (0..n)
            .filter(|&x| !span[x])
            .min_by_key(|&x| (weight[x], x))
            .expect("span is incomplete");
        gens.push(x);
        let mut queue: VecDeque<usize> = members.iter().copied().collect();
        while let Some(y) = queue.pop_front() {
            for &g in &gens {
                let z = idx.mul(y, g);
                if !span[z] {
                    span[z] = true;
                    members.push(z);
                    queue.push_back(z);
                }
            }
        }
    }
    gens
}

struct AutSearch<'a> {
    idx: &'a ElementIndex<'a>,
    gens: Vec<usize>,
    /// Admissible images of each generator: same order, centralizer size,
    /// number of square roots and membership in the stabilized set.
    candidates: Vec<Vec<usize>>,
    in_set: Option<Vec<bool>>,
}

impl<'a> AutSearch<'a> {
    fn new(idx: &'a ElementIndex<'a>, in_set: Option<Vec<bool>>) -> Self {
        let n = idx.len();
        let order: Vec<usize> = (0..n).map(|x| idx.element_order(x)).collect();
        let centralizer: Vec<usize> = (0..n)
            .map(|x| (0..n).filter(|&y| idx.mul(x, y) == idx.mul(y, x)).count())
            .collect();
        let mut roots = vec![0usize; n];
        for y in 0..n {
            roots[idx.mul(y, y)] += 1;
        }
        let class = |x: usize| (order[x], centralizer[x], roots[x], in_set.as_ref().is_some_and(|s| s[x]));
        let mut class_size = std::collections::HashMap::new();
        for x in 0..n {
            *class_size.entry(class(x)).or_insert(0usize) += 1;
        }
        let weight: Vec<usize> = (0..n).map(|x| class_size[&class(x)]).collect();
        // rare elements first: their images are the most constrained
        let gens = generating_indices(idx, &weight);
        let candidates = gens
            .iter()
            .map(|&g| (0..n).filter(|&y| class(y) == class(g)).collect())
            .collect();
        AutSearch {
            idx,
            gens,
            candidates,
            in_set,
        }
    }

    fn generators(&self) -> Vec<Vec<u32>> {
        let mut found: Vec<Vec<u32>> = Vec::new();
        for k in (0..self.gens.len()).rev() {
            // everything found so far fixes gens[..k]
            let mut orbit = self.orbit(self.gens[k], &found);
            for &y in &self.candidates[k] {
                if orbit[y] {
                    continue;
                }
                let mut images = self.gens[..k].to_vec();
                images.push(y);
                if let Some(map) = self.extend(&mut images) {
                    found.push(map);
                    orbit = self.orbit(self.gens[k], &found);
                }
            }
        }
        found
    }

    fn orbit(&self, x: usize, maps: &[Vec<u32>]) -> Vec<bool> {
        let mut seen = vec![false; self.idx.len()];
        seen[x] = true;
        let mut queue = VecDeque::from([x]);
        while let Some(y) = queue.pop_front() {
            for m in maps {
                let z = m[y] as usize;
                if !seen[z] {
                    seen[z] = true;
                    queue.push_back(z);
                }
            }
        }
        seen
    }

    /// Depth-first completion of `images` to a full automorphism.
    fn extend(&self, images: &mut Vec<usize>) -> Option<Vec<u32>> {
        let map = self.partial_map(images)?;
        if images.len() == self.gens.len() {
            if let Some(s) = &self.in_set {
                if (0..s.len()).any(|x| s[x] && !s[map[x] as usize]) {
                    return None;
                }
            }
            return Some(map);
        }
        let k = images.len();
        for &y in &self.candidates[k] {
            images.push(y);
            let done = self.extend(images);
            images.pop();
            if done.is_some() {
                return done;
            }
        }
        None
    }

    /// The injective homomorphism on `<gens[..k]>` sending `gens[i]` to
    /// `images[i]`, if one exists; unreached entries are `u32::MAX`.
    fn partial_map(&self, images: &[usize]) -> Option<Vec<u32>> {
        let n = self.idx.len();
        let id = self.idx.identity();
        let mut map = vec![u32::MAX; n];
        let mut used = vec![false; n];
        map[id] = id as u32;
        used[id] = true;
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            let fx = map[x] as usize;
            for (i, &g) in self.gens[..images.len()].iter().enumerate() {
                let y = self.idx.mul(x, g);
                let fy = self.idx.mul(fx, images[i]);
                if map[y] == u32::MAX {
                    if used[fy] {
                        return None;
                    }
                    used[fy] = true;
                    map[y] = fy as u32;
                    queue.push_back(y);
                } else if map[y] as usize != fy {
                    return None;
                }
            }
        }
        Some(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(d: usize, c: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(d, &c.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn order(h: &ElementSet, s: &[Permutation]) -> u64 {
        automorphism_group(h, s).unwrap().order_u64().unwrap()
    }

    #[test]
    fn small_automorphism_groups() {
        let a = cyc(4, &[&[1, 2], &[3, 4]]);
        let b = cyc(4, &[&[1, 3], &[2, 4]]);
        let klein = ElementSet::generate(4, &[a.clone(), b.clone()], 10).unwrap();
        assert_eq!(order(&klein, &[]), 6);
        assert_eq!(order(&klein, &[a, b]), 2);
        let z3 = ElementSet::generate(3, &[cyc(3, &[&[1, 2, 3]])], 10).unwrap();
        assert_eq!(order(&z3, &[]), 2);
        let d8 = ElementSet::generate(4, &[cyc(4, &[&[1, 2, 3, 4]]), cyc(4, &[&[2, 4]])], 10).unwrap();
        assert_eq!(order(&d8, &[]), 8);
        let z2_3 = ElementSet::generate(6, &[cyc(6, &[&[1, 2]]), cyc(6, &[&[3, 4]]), cyc(6, &[&[5, 6]])], 10)
            .unwrap();
        assert_eq!(order(&z2_3, &[]), 168);
        let s4 = ElementSet::generate(4, &[cyc(4, &[&[1, 2, 3, 4]]), cyc(4, &[&[1, 2]])], 30).unwrap();
        assert_eq!(order(&s4, &[]), 24);
    }
}
