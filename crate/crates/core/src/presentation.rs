//! Finite presentations and HLT coset enumeration over the trivial subgroup.

use thiserror::Error;

use crate::elements::ElementSet;
use crate::perm::Permutation;

pub const DEFAULT_MAX_COSETS: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("generator index {index} outside 1..={count}")]
    BadGenerator { index: i32, count: usize },
    #[error("empty relator at position {0}")]
    EmptyRelator(usize),
    #[error("no generators")]
    NoGenerators,
    #[error("enumeration did not close within {0} cosets")]
    Exceeded(usize),
}

/// Words are sequences of signed 1-based generator indices; `-i` is the
/// inverse of generator `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePresentation {
    generator_count: usize,
    relators: Vec<Vec<i32>>,
}

impl FinitePresentation {
    pub fn new(generator_count: usize, relators: Vec<Vec<i32>>) -> Result<Self, PresentationError> {
        if generator_count == 0 {
            return Err(PresentationError::NoGenerators);
        }
        for (k, r) in relators.iter().enumerate() {
            if r.is_empty() {
                return Err(PresentationError::EmptyRelator(k));
            }
            if let Some(&bad) = r
                .iter()
                .find(|&&x| x == 0 || x.unsigned_abs() as usize > generator_count)
            {
                return Err(PresentationError::BadGenerator {
                    index: bad,
                    count: generator_count,
                });
            }
        }
        Ok(FinitePresentation {
            generator_count,
            relators,
        })
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn relators(&self) -> &[Vec<i32>] {
        &self.relators
    }
}

/// The 7-generator presentation: `a_i^2`, `(a_i a_j)^2` for `|i - j| <= 4`,
/// and `(a1 a6)^2 = a3`, `(a2 a7)^2 = a4`, `(a1 a7)^2 = a5`.
pub fn h7_presentation() -> FinitePresentation {
    let mut relators: Vec<Vec<i32>> = (1..=7).map(|i| vec![i, i]).collect();
    for i in 1..=7i32 {
        for j in i + 1..=7 {
            if j - i <= 4 {
                relators.push(vec![i, j, i, j]);
            }
        }
    }
    relators.push(vec![1, 6, 1, 6, -3]);
    relators.push(vec![2, 7, 2, 7, -4]);
    relators.push(vec![1, 7, 1, 7, -5]);
    FinitePresentation::new(7, relators).expect("well-formed")
}

/// Result of a closed enumeration over the trivial subgroup.
#[derive(Debug, Clone)]
pub struct CosetTable {
    /// `table[c][2i]` is `c·a_i`, `table[c][2i+1]` is `c·a_i^-1`; 0-based.
    pub table: Vec<Vec<u32>>,
    /// Right-regular action of each generator on the cosets.
    pub generators: Vec<Permutation>,
}

impl CosetTable {
    pub fn coset_count(&self) -> usize {
        self.table.len()
    }

    /// Evaluates a word in the returned permutation representation.
    pub fn evaluate(&self, word: &[i32]) -> Permutation {
        let n = self.coset_count();
        word.iter().fold(Permutation::identity(n), |acc, &x| {
            let g = &self.generators[x.unsigned_abs() as usize - 1];
            if x > 0 {
                acc.then(g)
            } else {
                acc.then(&g.inverse())
            }
        })
    }
}

const NONE: u32 = u32::MAX;

struct Enumerator {
    cols: usize,
    relators: Vec<Vec<usize>>,
    table: Vec<Vec<u32>>,
    parent: Vec<u32>,
    live: Vec<bool>,
    queue: Vec<u32>,
    max: usize,
}

#[inline]
fn inv(col: usize) -> usize {
    col ^ 1
}

impl Enumerator {
    fn new(pres: &FinitePresentation, max: usize) -> Self {
        let cols = 2 * pres.generator_count;
        let relators = pres
            .relators
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| {
                        let g = x.unsigned_abs() as usize - 1;
                        if x > 0 {
                            2 * g
                        } else {
                            2 * g + 1
                        }
                    })
                    .collect()
            })
            .collect();
        Enumerator {
            cols,
            relators,
            table: vec![vec![NONE; cols]],
            parent: vec![0],
            live: vec![true],
            queue: Vec::new(),
            max,
        }
    }

    fn live_count(&self) -> usize {
        self.live.iter().filter(|&&l| l).count()
    }

    fn define(&mut self, c: usize, x: usize) -> bool {
        if self.table.len() >= self.max {
            return false;
        }
        let d = self.table.len();
        self.table.push(vec![NONE; self.cols]);
        self.parent.push(d as u32);
        self.live.push(true);
        self.table[c][x] = d as u32;
        self.table[d][inv(x)] = c as u32;
        true
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] as usize != r {
            r = self.parent[r] as usize;
        }
        let mut x = c;
        while self.parent[x] as usize != r {
            let next = self.parent[x] as usize;
            self.parent[x] = r as u32;
            x = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize) {
        let ra = self.rep(a);
        let rb = self.rep(b);
        if ra == rb {
            return;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo as u32;
        self.live[hi] = false;
        self.queue.push(hi as u32);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let g = self.queue[i] as usize;
            i += 1;
            for x in 0..self.cols {
                let d = self.table[g][x];
                if d == NONE {
                    continue;
                }
                let d = d as usize;
                self.table[d][inv(x)] = NONE;
                let mu = self.rep(g);
                let nu = self.rep(d);
                if self.table[mu][x] != NONE {
                    let t = self.table[mu][x] as usize;
                    self.merge(nu, t);
                } else if self.table[nu][inv(x)] != NONE {
                    let t = self.table[nu][inv(x)] as usize;
                    self.merge(mu, t);
                } else {
                    self.table[mu][x] = nu as u32;
                    self.table[nu][inv(x)] = mu as u32;
                }
            }
        }
    }

    /// Scans relator `r` at coset `c`. With `fill`, defines new cosets to
    /// complete the scan; returns `false` if that ran out of room.
    fn scan(&mut self, c: usize, r: usize, fill: bool) -> bool {
        let len = self.relators[r].len();
        let mut f = c;
        let mut b = c;
        let mut i = 0usize;
        let mut j = len as isize - 1;
        loop {
            while (i as isize) <= j && self.table[f][self.relators[r][i]] != NONE {
                f = self.table[f][self.relators[r][i]] as usize;
                i += 1;
            }
            if (i as isize) > j {
                if f != c {
                    self.coincidence(f, c);
                }
                return true;
            }
            while j >= i as isize && self.table[b][inv(self.relators[r][j as usize])] != NONE {
                b = self.table[b][inv(self.relators[r][j as usize])] as usize;
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return true;
            }
            if j == i as isize {
                let x = self.relators[r][i];
                self.table[f][x] = b as u32;
                self.table[b][inv(x)] = f as u32;
                return true;
            }
            if !fill {
                return true;
            }
            let x = self.relators[r][i];
            if !self.define(f, x) {
                return false;
            }
        }
    }

    /// Renumbers live cosets in definition order and drops dead rows.
    /// Returns the new index of `keep` (or the next live coset after it).
    fn compact(&mut self, keep: usize) -> usize {
        let mut map = vec![NONE; self.table.len()];
        let mut next = 0u32;
        for (c, &l) in self.live.iter().enumerate() {
            if l {
                map[c] = next;
                next += 1;
            }
        }
        let new_keep = (keep..self.table.len())
            .find(|&c| self.live[c])
            .map_or(next as usize, |c| map[c] as usize);
        let mut table = Vec::with_capacity(next as usize);
        for (c, row) in self.table.iter().enumerate() {
            if self.live[c] {
                table.push(
                    row.iter()
                        .map(|&d| if d == NONE { NONE } else { map[d as usize] })
                        .collect(),
                );
            }
        }
        self.table = table;
        self.parent = (0..next).collect();
        self.live = vec![true; next as usize];
        new_keep
    }

    fn lookahead(&mut self) {
        let mut c = 0;
        while c < self.table.len() {
            for r in 0..self.relators.len() {
                if !self.live[c] {
                    break;
                }
                self.scan(c, r, false);
            }
            c += 1;
        }
    }

    fn run(&mut self) -> Result<(), PresentationError> {
        let mut c = 0;
        while c < self.table.len() {
            let mut r = 0;
            while r < self.relators.len() && self.live[c] {
                if self.scan(c, r, true) {
                    r += 1;
                    continue;
                }
                let before = self.live_count();
                self.lookahead();
                if self.live_count() == before {
                    return Err(PresentationError::Exceeded(self.max));
                }
                c = self.compact(c);
                r = 0;
                if c >= self.table.len() {
                    break;
                }
            }
            if c < self.table.len() && self.live[c] {
                for x in 0..self.cols {
                    if self.table[c][x] == NONE && !self.define(c, x) {
                        let before = self.live_count();
                        self.lookahead();
                        if self.live_count() == before {
                            return Err(PresentationError::Exceeded(self.max));
                        }
                        c = self.compact(c);
                        break;
                    }
                }
                if c < self.table.len() && self.live[c] && self.table[c].iter().all(|&d| d != NONE) {
                    c += 1;
                }
            } else {
                c += 1;
            }
        }
        self.compact(0);
        Ok(())
    }
}

/// Enumerates the cosets of the trivial subgroup, giving the right-regular
/// representation of the presented group.
pub fn todd_coxeter(pres: &FinitePresentation, max_cosets: usize) -> Result<CosetTable, PresentationError> {
    let mut e = Enumerator::new(pres, max_cosets.max(1));
    e.run()?;
    let n = e.table.len();
    let generators = (0..pres.generator_count)
        .map(|g| {
            let images = (0..n).map(|c| e.table[c][2 * g]).collect();
            Permutation::from_images(images).expect("closed table rows are bijective")
        })
        .collect();
    Ok(CosetTable {
        table: e.table,
        generators,
    })
}

/// Right-regular representation on the canonical element order: point `i`
/// is the `i`-th element, and `R(g)` sends `x` to `xg`. One permutation per
/// entry of `designated`.
pub fn regular_rep_from_multiplication(
    elements: &ElementSet,
    designated: &[Permutation],
) -> Vec<Permutation> {
    designated.iter().map(|g| right_regular(elements, g)).collect()
}

/// `R(g)` on the canonical order of `elements`.
pub fn right_regular(elements: &ElementSet, g: &Permutation) -> Permutation {
    let images = elements
        .iter()
        .map(|x| elements.index_of(&x.then(g)).expect("closed under products") as u32)
        .collect();
    Permutation::from_images(images).expect("right multiplication is bijective")
}
