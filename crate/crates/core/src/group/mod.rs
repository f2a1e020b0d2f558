//! Permutation groups given by generators, backed by a lazily built
//! stabilizer chain.

mod chain;

use std::collections::VecDeque;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::elements::ElementSet;
use crate::perm::{PermError, Permutation};
use chain::StabChain;

/// Seed used when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 0x5eed_0fc0_ffee;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitivityFlags {
    pub transitive: bool,
    pub semiregular: bool,
    pub regular: bool,
}

#[derive(Debug)]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    seed: u64,
    chain: OnceLock<StabChain>,
}

impl Clone for PermutationGroup {
    fn clone(&self) -> Self {
        let chain = OnceLock::new();
        if let Some(c) = self.chain.get() {
            let _ = chain.set(c.clone());
        }
        PermutationGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            seed: self.seed,
            chain,
        }
    }
}

impl PermutationGroup {
    /// Group generated by `gens` (all of one degree, at least one).
    pub fn new(gens: Vec<Permutation>) -> Result<Self, PermError> {
        Self::with_seed(gens, DEFAULT_SEED)
    }

    pub fn with_seed(gens: Vec<Permutation>, seed: u64) -> Result<Self, PermError> {
        let degree = gens.first().ok_or(PermError::NoGenerators)?.degree();
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
        Ok(PermutationGroup {
            degree,
            generators: gens,
            seed,
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new(vec![Permutation::identity(degree)]).expect("identity is a valid generator")
    }

    fn from_chain(generators: Vec<Permutation>, chain: StabChain, seed: u64) -> Self {
        let degree = chain.degree;
        let generators = if generators.is_empty() {
            vec![Permutation::identity(degree)]
        } else {
            generators
        };
        let lock = OnceLock::new();
        let _ = lock.set(chain);
        PermutationGroup {
            degree,
            generators,
            seed,
            chain: lock,
        }
    }

    fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::build(self.degree, &self.generators, &[], self.seed, None))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn base(&self) -> Vec<usize> {
        self.chain().base()
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        self.chain().strong_generators()
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    /// Order as `u64` when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.order().to_u64()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain().contains(g)
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.iter().all(Permutation::is_identity)
    }

    fn check_point(&self, p: usize) -> Result<(), PermError> {
        if p >= self.degree {
            Err(PermError::PointOutOfRange {
                point: p + 1,
                degree: self.degree,
            })
        } else {
            Ok(())
        }
    }

    /// Orbit of a 0-based point, sorted.
    pub fn orbit(&self, p: usize) -> Result<Vec<usize>, PermError> {
        self.check_point(p)?;
        let mut seen = vec![false; self.degree];
        seen[p] = true;
        let mut queue = VecDeque::from([p]);
        let mut out = vec![p];
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = g.image(x);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Orbit partition, each block sorted, blocks ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for p in 0..self.degree {
            if !seen[p] {
                let orb = self.orbit(p).expect("in range");
                for &x in &orb {
                    seen[x] = true;
                }
                out.push(orb);
            }
        }
        out
    }

    /// Point stabilizers in one orbit are conjugate, so semiregularity is
    /// decided by one stabilizer per orbit: `|G_p| = |G| / |p^G|`.
    pub fn transitivity_flags(&self) -> TransitivityFlags {
        let orbits = self.orbits();
        let order = self.order();
        let transitive = orbits.len() == 1;
        let semiregular = orbits
            .iter()
            .all(|o| BigUint::from(o.len()) == order);
        TransitivityFlags {
            transitive,
            semiregular,
            regular: transitive && semiregular,
        }
    }

    /// Stabilizer of a 0-based point.
    pub fn point_stabilizer(&self, p: usize) -> Result<PermutationGroup, PermError> {
        self.check_point(p)?;
        let chain = self.chain();
        let rebased;
        let chain = if chain.levels.first().map(|l| l.base) == Some(p) {
            chain
        } else {
            rebased = StabChain::build(
                self.degree,
                &self.generators,
                &[p],
                self.seed,
                Some(&chain.order()),
            );
            &rebased
        };
        let tail = chain.tail(1);
        let gens = tail.levels.first().map(|l| l.gens.clone()).unwrap_or_default();
        Ok(PermutationGroup::from_chain(gens, tail, self.seed))
    }

    /// Group generated by `self` and `extra`.
    pub fn extended(&self, extra: &[Permutation]) -> Result<PermutationGroup, PermError> {
        let mut gens = self.generators.clone();
        gens.extend(extra.iter().cloned());
        PermutationGroup::with_seed(gens, self.seed)
    }

    pub fn is_subgroup_of(&self, other: &PermutationGroup) -> bool {
        self.degree == other.degree && self.generators.iter().all(|g| other.contains(g))
    }

    pub fn same_group(&self, other: &PermutationGroup) -> bool {
        self.is_subgroup_of(other) && self.order() == other.order()
    }

    /// Whether `self` is normalized by every generator of `g`.
    pub fn is_normal_in(&self, g: &PermutationGroup) -> bool {
        self.is_subgroup_of(g)
            && g.generators
                .iter()
                .all(|x| self.generators.iter().all(|n| self.contains(&n.conjugate(x))))
    }

    /// Smallest normal subgroup of `self` containing `elements`.
    pub fn normal_closure(&self, elements: &[Permutation]) -> PermutationGroup {
        let mut gens: Vec<Permutation> = elements.iter().filter(|e| !e.is_identity()).cloned().collect();
        if gens.is_empty() {
            return PermutationGroup::trivial(self.degree);
        }
        let mut current = PermutationGroup::with_seed(gens.clone(), self.seed).expect("nonempty");
        loop {
            let mut added = false;
            'scan: for n in current.generators.clone() {
                for x in &self.generators {
                    let c = n.conjugate(x);
                    if !current.contains(&c) {
                        gens.push(c);
                        added = true;
                        break 'scan;
                    }
                }
            }
            if !added {
                return current;
            }
            current = PermutationGroup::with_seed(gens.clone(), self.seed).expect("nonempty");
        }
    }

    /// Derived subgroup as the normal closure of generator commutators.
    pub fn derived_subgroup(&self) -> PermutationGroup {
        let mut comms = Vec::new();
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                let c = a.inverse().then(&b.inverse()).then(a).then(b);
                if !c.is_identity() {
                    comms.push(c);
                }
            }
        }
        self.normal_closure(&comms)
    }

    pub fn is_solvable(&self) -> bool {
        let mut g = self.clone();
        loop {
            if g.order().is_one() {
                return true;
            }
            let d = g.derived_subgroup();
            if d.order() == g.order() {
                return false;
            }
            g = d;
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .enumerate()
            .all(|(i, a)| self.generators[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    /// Explicit element list; refuses when the order exceeds `cap`.
    pub fn enumerate_elements(&self, cap: usize) -> Result<ElementSet, PermError> {
        let order = self.order();
        if order > BigUint::from(cap) {
            return Err(PermError::OverCap {
                order: order.to_string(),
                cap,
            });
        }
        ElementSet::generate(self.degree, &self.generators, cap)
    }

    /// Whether the group is primitive: transitive, and the block generated
    /// by any pair containing point 0 is everything.
    pub fn is_primitive(&self) -> bool {
        if self.degree == 1 {
            return true;
        }
        if !self.transitivity_flags().transitive {
            return false;
        }
        (1..self.degree).all(|b| self.minimal_block(0, b).len() == self.degree)
    }

    /// Smallest block of imprimitivity containing `a` and `b`.
    pub fn minimal_block(&self, a: usize, b: usize) -> Vec<usize> {
        let n = self.degree;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        let mut queue = vec![(a, b)];
        while let Some((x, y)) = queue.pop() {
            let rx = find(&mut parent, x);
            let ry = find(&mut parent, y);
            if rx == ry {
                continue;
            }
            parent[ry] = rx;
            for g in &self.generators {
                queue.push((g.image(x), g.image(y)));
            }
        }
        let r = find(&mut parent, a);
        (0..n).filter(|&x| find(&mut parent, x) == r).collect()
    }
}
