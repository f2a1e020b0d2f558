//! Base and strong generating set.
//!
//! Construction runs a seeded random Schreier-Sims phase and then a
//! deterministic pass that sifts every Schreier generator of every level.
//! The second pass adds whatever the random phase missed, so the finished
//! chain is complete regardless of the seed.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::perm::Permutation;

#[derive(Clone, Debug)]
pub(crate) struct Level {
    pub base: usize,
    pub gens: Vec<Permutation>,
    pub orbit: Vec<u32>,
    /// `(u, u^-1)` with `base^u = point`, indexed by point.
    pub transversal: Vec<Option<(Permutation, Permutation)>>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut level = Level {
            base,
            gens: Vec::new(),
            orbit: Vec::new(),
            transversal: vec![None; degree],
        };
        level.rebuild_orbit(degree);
        level
    }

    fn rebuild_orbit(&mut self, degree: usize) {
        for t in &mut self.transversal {
            *t = None;
        }
        let id = Permutation::identity(degree);
        self.transversal[self.base] = Some((id.clone(), id));
        self.orbit.clear();
        self.orbit.push(self.base as u32);
        let mut i = 0;
        while i < self.orbit.len() {
            let x = self.orbit[i] as usize;
            i += 1;
            for s in &self.gens {
                let y = s.image(x);
                if self.transversal[y].is_none() {
                    let u = self.transversal[x].as_ref().unwrap().0.then(s);
                    let uinv = u.inverse();
                    self.transversal[y] = Some((u, uinv));
                    self.orbit.push(y as u32);
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct StabChain {
    pub degree: usize,
    pub levels: Vec<Level>,
}

/// Consecutive trivially-sifting random elements that end the random phase.
const RANDOM_QUIET_ROUNDS: usize = 24;

impl StabChain {
    /// Complete chain for `<gens>` whose base starts with `prefix`.
    pub fn build(
        degree: usize,
        gens: &[Permutation],
        prefix: &[usize],
        seed: u64,
        known_order: Option<&BigUint>,
    ) -> Self {
        let mut chain = StabChain {
            degree,
            levels: prefix.iter().map(|&b| Level::new(b, degree)).collect(),
        };
        let gens: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        for g in &gens {
            if chain.levels.iter().all(|l| g.fixes(l.base)) {
                let moved = (0..degree).find(|&x| !g.fixes(x)).unwrap();
                chain.levels.push(Level::new(moved, degree));
            }
        }
        for i in 0..chain.levels.len() {
            let fixed: Vec<usize> = chain.levels[..i].iter().map(|l| l.base).collect();
            chain.levels[i].gens = gens
                .iter()
                .filter(|g| fixed.iter().all(|&b| g.fixes(b)))
                .cloned()
                .collect();
            chain.levels[i].rebuild_orbit(degree);
        }
        if gens.is_empty() {
            return chain;
        }
        chain.random_phase(&gens, seed, known_order);
        if known_order.is_some_and(|o| &chain.order() == o) {
            return chain;
        }
        chain.complete();
        chain
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    /// Strips `g` through levels `from..`; returns the residue and the level
    /// where stripping stopped (`levels.len()` if it went through).
    pub fn sift(&self, g: &Permutation, from: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let pt = h.image(level.base);
            match &level.transversal[pt] {
                None => return (h, i),
                Some((_, uinv)) => h = h.then(uinv),
            }
        }
        let n = self.levels.len();
        (h, n)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.sift(g, 0).0.is_identity()
    }

    /// Adds `h`, a non-identity element fixing the first `j` base points,
    /// as a strong generator of levels `from..=j`.
    fn add_strong(&mut self, h: Permutation, from: usize, j: usize) {
        if j == self.levels.len() {
            let moved = (0..self.degree).find(|&x| !h.fixes(x)).unwrap();
            self.levels.push(Level::new(moved, self.degree));
        }
        for l in from..=j {
            self.levels[l].gens.push(h.clone());
            self.levels[l].rebuild_orbit(self.degree);
        }
    }

    fn random_phase(&mut self, gens: &[Permutation], seed: u64, known_order: Option<&BigUint>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pool: Vec<Permutation> = gens.to_vec();
        while pool.len() < 10 {
            let k = pool.len() % gens.len();
            pool.push(gens[k].clone());
        }
        let mut acc = Permutation::identity(self.degree);
        // product replacement warm-up
        for _ in 0..40 {
            step(&mut pool, &mut acc, &mut rng);
        }
        let mut quiet = 0;
        while quiet < RANDOM_QUIET_ROUNDS {
            if known_order.is_some_and(|o| &self.order() == o) {
                return;
            }
            step(&mut pool, &mut acc, &mut rng);
            let (h, j) = self.sift(&acc, 0);
            if h.is_identity() {
                quiet += 1;
            } else {
                quiet = 0;
                self.add_strong(h, 0, j);
            }
        }
    }

    /// Deterministic Schreier-Sims completion from the bottom level up.
    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let li = i as usize;
            match self.nonsifting_schreier_generator(li) {
                Some((h, j)) => {
                    self.add_strong(h, li + 1, j);
                    i = j as isize;
                }
                None => i -= 1,
            }
        }
    }

    fn nonsifting_schreier_generator(&self, i: usize) -> Option<(Permutation, usize)> {
        let level = &self.levels[i];
        for &beta in &level.orbit {
            let (u, _) = level.transversal[beta as usize].as_ref().unwrap();
            for s in &level.gens {
                let us = u.then(s);
                let target = s.image(beta as usize);
                let (_, vinv) = level.transversal[target].as_ref().unwrap();
                let schreier = us.then(vinv);
                if schreier.is_identity() {
                    continue;
                }
                let (h, j) = self.sift(&schreier, i + 1);
                if !h.is_identity() {
                    return Some((h, j));
                }
            }
        }
        None
    }

    /// Sub-chain from level `from` onward: a complete chain for the
    /// pointwise stabilizer of the first `from` base points.
    pub fn tail(&self, from: usize) -> StabChain {
        StabChain {
            degree: self.degree,
            levels: self.levels[from..].to_vec(),
        }
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut out: Vec<Permutation> = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out
    }
}

fn step(pool: &mut [Permutation], acc: &mut Permutation, rng: &mut ChaCha8Rng) {
    let n = pool.len();
    let i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n - 1);
    if j >= i {
        j += 1;
    }
    let rhs = if rng.gen_bool(0.5) {
        pool[j].clone()
    } else {
        pool[j].inverse()
    };
    pool[i] = if rng.gen_bool(0.5) {
        pool[i].then(&rhs)
    } else {
        rhs.then(&pool[i])
    };
    *acc = acc.then(&pool[i]);
}
