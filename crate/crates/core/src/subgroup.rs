//! Small-subgroup algorithms on explicit element sets: self-intersection
//! index, double-coset equality, cores, and backtracking searches for
//! conjugating elements in the full symmetric group.

use num_bigint::BigUint;

use crate::elements::ElementSet;
use crate::group::PermutationGroup;
use crate::perm::{PermError, Permutation};

/// `|H : H ∩ H^g|`.
pub fn index_of_self_intersection(h: &ElementSet, g: &Permutation) -> usize {
    let kept = h.iter().filter(|x| h.contains(&x.conjugate(g))).count();
    h.len() / kept
}

/// Whether `HgH = Hg^-1H`, i.e. whether some `x` in `H` has `g x g` in `H`.
pub fn double_cosets_equal(h: &ElementSet, g: &Permutation) -> bool {
    h.iter().any(|x| h.contains(&g.then(x).then(g)))
}

/// An `x` in `H` with `g x g` in `H`, witnessing `g^-1 ∈ HgH`.
pub fn double_coset_witness(h: &ElementSet, g: &Permutation) -> Option<Permutation> {
    h.iter().find(|x| h.contains(&g.then(x).then(g))).cloned()
}

/// Largest normal subgroup of `G` inside `H`: iterate `C <- C ∩ C^s` over the
/// generators `s` of `G` until nothing changes.
pub fn core_of(h: &ElementSet, g: &PermutationGroup) -> ElementSet {
    let mut core = h.clone();
    loop {
        let before = core.len();
        for s in g.generators() {
            // x in C^s iff s x s^-1 in C
            let sinv = s.inverse();
            let kept: Vec<Permutation> = core
                .iter()
                .filter(|x| core.contains(&x.conjugate(&sinv)))
                .cloned()
                .collect();
            core = ElementSet::from_closed(h.degree(), kept);
        }
        if core.len() == before {
            return core;
        }
    }
}

/// Whether every element of `H` lies in `G` (spot check for `H ≤ G`).
pub fn is_contained(h: &ElementSet, g: &PermutationGroup) -> bool {
    h.iter().all(|x| g.contains(x))
}

/// Backtracking search over `Sym(n)` for permutations `t` with
/// `from[i]^t = to[i]` for every `i`. Stops after `limit` solutions.
pub fn conjugating_elements(
    from: &[Permutation],
    to: &[Permutation],
    limit: usize,
) -> Vec<Permutation> {
    assert_eq!(from.len(), to.len());
    let n = match from.first() {
        Some(p) => p.degree(),
        None => return Vec::new(),
    };
    // t conjugates from[i] to to[i] iff (x^from[i])^t = (x^t)^to[i] for all x.
    let mut search = ConjugacySearch {
        from,
        to,
        n,
        image: vec![usize::MAX; n],
        used: vec![false; n],
        out: Vec::new(),
        limit,
    };
    search.run();
    search.out
}

struct ConjugacySearch<'a> {
    from: &'a [Permutation],
    to: &'a [Permutation],
    n: usize,
    image: Vec<usize>,
    used: Vec<bool>,
    out: Vec<Permutation>,
    limit: usize,
}

impl ConjugacySearch<'_> {
    fn run(&mut self) {
        if self.out.len() >= self.limit {
            return;
        }
        let Some(x) = (0..self.n).find(|&x| self.image[x] == usize::MAX) else {
            let images = self.image.iter().map(|&y| y as u32).collect();
            self.out.push(Permutation::from_images(images).expect("bijection by construction"));
            return;
        };
        for y in 0..self.n {
            if self.used[y] {
                continue;
            }
            let mut assigned = Vec::new();
            if self.propagate(x, y, &mut assigned) {
                self.run();
            }
            for a in assigned {
                self.used[self.image[a]] = false;
                self.image[a] = usize::MAX;
            }
            if self.out.len() >= self.limit {
                return;
            }
        }
    }

    /// Sets `x -> y` and follows the forced images along generator edges.
    fn propagate(&mut self, x: usize, y: usize, assigned: &mut Vec<usize>) -> bool {
        let mut stack = vec![(x, y)];
        while let Some((p, q)) = stack.pop() {
            if self.image[p] != usize::MAX {
                if self.image[p] != q {
                    return false;
                }
                continue;
            }
            if self.used[q] {
                return false;
            }
            self.image[p] = q;
            self.used[q] = true;
            assigned.push(p);
            for (f, t) in self.from.iter().zip(self.to) {
                stack.push((f.image(p), t.image(q)));
            }
        }
        true
    }
}

/// Centralizer of `gens` in the full symmetric group, as an element list.
pub fn symmetric_centralizer(gens: &[Permutation], cap: usize) -> Result<ElementSet, PermError> {
    let Some(first) = gens.first() else {
        return Err(PermError::NoGenerators);
    };
    let found = conjugating_elements(gens, gens, cap + 1);
    if found.len() > cap {
        return Err(PermError::OverCap {
            order: format!(">{cap}"),
            cap,
        });
    }
    Ok(ElementSet::from_closed(first.degree(), found))
}

/// Distinct normal closures of nontrivial conjugacy-class representatives
/// of an enumerated group.
pub fn class_normal_closures(g: &PermutationGroup, cap: usize) -> Result<Vec<PermutationGroup>, PermError> {
    let elements = g.enumerate_elements(cap)?;
    let classes = elements.classes_under(g.generators());
    let mut closures: Vec<PermutationGroup> = Vec::new();
    for class in classes {
        let rep = elements.get(class[0]);
        if rep.is_identity() {
            continue;
        }
        let n = g.normal_closure(std::slice::from_ref(rep));
        if !closures.iter().any(|c| c.same_group(&n)) {
            closures.push(n);
        }
    }
    Ok(closures)
}

/// The minimal members of [`class_normal_closures`].
pub fn minimal_normal_subgroups(
    g: &PermutationGroup,
    cap: usize,
) -> Result<Vec<PermutationGroup>, PermError> {
    let closures = class_normal_closures(g, cap)?;
    let minimal = closures
        .iter()
        .filter(|n| {
            !closures
                .iter()
                .any(|m| m.order() < n.order() && m.is_subgroup_of(n))
        })
        .cloned()
        .collect();
    Ok(minimal)
}

/// Whether `g` is simple, decided on class representatives: every nontrivial
/// normal closure must be the whole group.
pub fn is_simple(g: &PermutationGroup, cap: usize) -> Result<bool, PermError> {
    if g.order() == BigUint::from(1u32) {
        return Ok(false);
    }
    let mins = minimal_normal_subgroups(g, cap)?;
    Ok(mins.len() == 1 && mins[0].order() == g.order())
}
