//! Concentric involution sequences.
//!
//! A sequence `a_1..a_n` of involutions is concentric when every window
//! `<a_i..a_j>` has order `2^(j-i+1)` and the shift `a_i -> a_{i+1}` extends
//! to an isomorphism `phi: B -> C`, where `B = <a_1..a_{n-1}>` and
//! `C = <a_2..a_n>`.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::automorphism::automorphism_group;
use crate::elements::{ElementIndex, ElementSet, DEFAULT_ELEMENT_CAP};
use crate::group::PermutationGroup;
use crate::perm::{PermError, Permutation};
use crate::presentation::{h7_presentation, regular_rep_from_multiplication, todd_coxeter, PresentationError};

/// Homomorphism checks cover every pair up to this size of `B`, and a
/// seeded sample beyond it.
pub const FULL_PHI_CHECK_LIMIT: usize = 1 << 10;
const PHI_SAMPLE_PAIRS: usize = 1 << 20;

/// First failed condition of a candidate sequence; indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejection {
    NotInvolution { index: usize },
    WindowOrder { i: usize, j: usize, expected: usize, found: usize },
    /// A word in `a_1..a_{n-1}` that is trivial in `B` while its shift is
    /// not trivial in `C`.
    PhiConflict { word: Vec<usize> },
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::NotInvolution { index } => write!(f, "a{index} is not an involution"),
            Rejection::WindowOrder { i, j, expected, found } => {
                write!(f, "|<a{i}..a{j}>| = {found}, expected {expected}")
            }
            Rejection::PhiConflict { word } => {
                let w: Vec<String> = word.iter().map(|i| format!("a{i}")).collect();
                write!(f, "shift is not a homomorphism: {} = 1 in B but its shift is not 1", w.join(" "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConcentricError {
    #[error("rejected: {0}")]
    Rejected(Rejection),
    #[error("group order {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("group order {order} does not match 2^{n}")]
    OrderMismatch { order: usize, n: usize },
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),
    #[error("catalog group {0} exceeds order 2^14")]
    CatalogTooLarge(String),
    #[error("internal inconsistency: no concentric sequence found in {0}")]
    NotFound(String),
}

#[derive(Debug, Clone)]
pub struct ConcentricSequence {
    gens: Vec<Permutation>,
    h_set: ElementSet,
    b_set: ElementSet,
    c_set: ElementSet,
    /// `phi[i]` is the index in `c_set` of the image of `b_set[i]`.
    phi: Vec<usize>,
}

impl ConcentricSequence {
    pub fn n(&self) -> usize {
        self.gens.len()
    }

    pub fn degree(&self) -> usize {
        self.h_set.degree()
    }

    pub fn gens(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn h_set(&self) -> &ElementSet {
        &self.h_set
    }

    pub fn b_set(&self) -> &ElementSet {
        &self.b_set
    }

    pub fn c_set(&self) -> &ElementSet {
        &self.c_set
    }

    /// Table form of `phi`, as `(B index, C index)` in canonical order.
    pub fn phi_table(&self) -> &[usize] {
        &self.phi
    }

    pub fn phi(&self, b: &Permutation) -> Option<&Permutation> {
        self.b_set.index_of(b).map(|i| self.c_set.get(self.phi[i]))
    }

    /// Checks `phi(xy) = phi(x) phi(y)`: on every pair when `|B|` is at most
    /// `FULL_PHI_CHECK_LIMIT`, otherwise on a seeded sample. Returns the
    /// number of pairs checked, or the first failing pair.
    pub fn verify_phi_homomorphism(&self, seed: u64) -> Result<usize, (Permutation, Permutation)> {
        let b = &self.b_set;
        let check = |i: usize, j: usize| -> bool {
            let xy = b.get(i).then(b.get(j));
            let k = b.index_of(&xy).expect("B is closed");
            self.c_set.get(self.phi[k]) == &self.c_set.get(self.phi[i]).then(self.c_set.get(self.phi[j]))
        };
        let fail = |i: usize, j: usize| (b.get(i).clone(), b.get(j).clone());
        if b.len() <= FULL_PHI_CHECK_LIMIT {
            for i in 0..b.len() {
                for j in 0..b.len() {
                    if !check(i, j) {
                        return Err(fail(i, j));
                    }
                }
            }
            Ok(b.len() * b.len())
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..PHI_SAMPLE_PAIRS {
                let (i, j) = (rng.gen_range(0..b.len()), rng.gen_range(0..b.len()));
                if !check(i, j) {
                    return Err(fail(i, j));
                }
            }
            Ok(PHI_SAMPLE_PAIRS)
        }
    }
}

/// Checks the three defining conditions and builds `phi`.
pub fn check_concentric(gens: &[Permutation]) -> Result<ConcentricSequence, ConcentricError> {
    let Some(first) = gens.first() else {
        return Err(PermError::NoGenerators.into());
    };
    let degree = first.degree();
    if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
        return Err(PermError::DegreeMismatch {
            expected: degree,
            found: g.degree(),
        }
        .into());
    }
    if let Some(k) = gens.iter().position(|g| !g.is_involution()) {
        return Err(ConcentricError::Rejected(Rejection::NotInvolution { index: k + 1 }));
    }
    let n = gens.len();
    for len in 2..=n {
        for i in 0..=n - len {
            let j = i + len - 1;
            let expected = 1usize << len;
            let w = ElementSet::generate(degree, &gens[i..=j], DEFAULT_ELEMENT_CAP)?;
            if w.len() != expected {
                return Err(ConcentricError::Rejected(Rejection::WindowOrder {
                    i: i + 1,
                    j: j + 1,
                    expected,
                    found: w.len(),
                }));
            }
        }
    }
    let h_set = ElementSet::generate(degree, gens, DEFAULT_ELEMENT_CAP)?;
    let b_set = ElementSet::generate(degree, &gens[..n - 1], DEFAULT_ELEMENT_CAP)?;
    let c_set = ElementSet::generate(degree, &gens[1..], DEFAULT_ELEMENT_CAP)?;
    let phi = build_phi(gens, &b_set, &c_set).map_err(|word| ConcentricError::Rejected(Rejection::PhiConflict { word }))?;
    Ok(ConcentricSequence {
        gens: gens.to_vec(),
        h_set,
        b_set,
        c_set,
        phi,
    })
}

/// Labelled breadth-first closure over the Cayley graph of `B`: `phi(1) = 1`
/// and each edge `x -> x a_i` maps to `phi(x) -> phi(x) a_{i+1}`. On conflict
/// returns a relator of `B` whose shift fails.
fn build_phi(gens: &[Permutation], b_set: &ElementSet, c_set: &ElementSet) -> Result<Vec<usize>, Vec<usize>> {
    let n = gens.len();
    let mut phi = vec![usize::MAX; b_set.len()];
    // word back to the identity: (parent, generator) per visited element
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; b_set.len()];
    let root = b_set.index_of(&Permutation::identity(b_set.degree())).expect("identity");
    phi[root] = c_set.index_of(&Permutation::identity(c_set.degree())).expect("identity");
    let mut queue = VecDeque::from([root]);
    let word_to = |parent: &[Option<(usize, usize)>], mut x: usize| {
        let mut w = Vec::new();
        while let Some((p, g)) = parent[x] {
            w.push(g + 1);
            x = p;
        }
        w.reverse();
        w
    };
    while let Some(x) = queue.pop_front() {
        let fx = c_set.get(phi[x]).clone();
        for i in 0..n - 1 {
            let y = b_set.index_of(&b_set.get(x).then(&gens[i])).expect("B is closed");
            let fy = c_set.index_of(&fx.then(&gens[i + 1])).expect("C is closed");
            if phi[y] == usize::MAX {
                phi[y] = fy;
                parent[y] = Some((x, i));
                queue.push_back(y);
            } else if phi[y] != fy {
                let mut w = word_to(&parent, x);
                w.push(i + 1);
                w.extend(word_to(&parent, y).into_iter().rev());
                return Err(w);
            }
        }
    }
    Ok(phi)
}

/// Exhaustive backtracking search for a concentric generating sequence of
/// length `n` inside `h`. Candidates are involutions ordered by centralizer
/// size (descending, ties by canonical index); the first success in that
/// order is returned whatever the worker count.
pub fn find_concentric_sequence(h: &ElementSet, n: usize) -> Result<Option<ConcentricSequence>, ConcentricError> {
    let order = h.len();
    if !order.is_power_of_two() {
        return Err(ConcentricError::NotPowerOfTwo(order));
    }
    if order != 1usize << n {
        return Err(ConcentricError::OrderMismatch { order, n });
    }
    if n == 0 {
        return Ok(None);
    }
    let tables = Tables::new(h);
    let run = |roots: Vec<usize>, aut: Option<&PermutationGroup>, budget: usize| {
        // a central a_1 (or a_n) makes every a_i central through the shift, so
        // a non-abelian H rules both out
        roots
            .into_par_iter()
            .filter(|&j| tables.abelian || !tables.central[j])
            .find_map_first(|a1| {
                let mut search = Search::new(&tables, n, aut, a1, budget);
                match search.extend() {
                    Outcome::Found => Some(Some(search.seq.clone())),
                    Outcome::OutOfBudget => Some(None),
                    Outcome::Exhausted => None,
                }
            })
    };
    // a budgeted plain search settles most groups; otherwise search again
    // with one candidate per orbit of the prefix stabilizer in Aut(H)
    let found = match run((0..tables.invs.len()).collect(), None, PLAIN_SEARCH_BUDGET) {
        Some(Some(seq)) => Some(seq),
        None => None,
        Some(None) => {
            let aut = automorphism_group(h, &[])?;
            run(orbit_representatives(&aut, &tables.invs), Some(&aut), usize::MAX).flatten()
        }
    };
    match found {
        Some(seq) => {
            let gens: Vec<Permutation> = seq.iter().map(|&j| h.get(tables.invs[j]).clone()).collect();
            Ok(Some(check_concentric(&gens)?))
        }
        None => Ok(None),
    }
}

/// Positions in `invs` holding the first element of each orbit of `group`
/// (acting on element indices), in the order of `invs`.
fn orbit_representatives(group: &PermutationGroup, invs: &[usize]) -> Vec<usize> {
    if group.is_trivial() {
        return (0..invs.len()).collect();
    }
    let mut orbit_id = vec![usize::MAX; group.degree()];
    for (k, orbit) in group.orbits().into_iter().enumerate() {
        for p in orbit {
            orbit_id[p] = k;
        }
    }
    let mut seen = std::collections::HashSet::new();
    (0..invs.len()).filter(|&j| seen.insert(orbit_id[invs[j]])).collect()
}

/// Index arithmetic on the canonical element order of `H`.
struct Tables {
    order: usize,
    identity: u32,
    /// Element indices of the involutions, in search order.
    invs: Vec<usize>,
    /// `rmul[j][x]` is the index of `x * invs[j]`.
    rmul: Vec<Vec<u32>>,
    central: Vec<bool>,
    abelian: bool,
}

impl Tables {
    fn new(h: &ElementSet) -> Self {
        let idx = ElementIndex::new(h);
        let order = h.len();
        let mut invs: Vec<(usize, usize)> = h
            .iter()
            .enumerate()
            .filter(|(_, x)| x.is_involution())
            .map(|(i, _)| ((0..order).filter(|&z| idx.mul(i, z) == idx.mul(z, i)).count(), i))
            .collect();
        invs.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let central: Vec<bool> = invs.iter().map(|&(c, _)| c == order).collect();
        let invs: Vec<usize> = invs.into_iter().map(|(_, i)| i).collect();
        let gens = crate::automorphism::generating_indices(&idx, &vec![0; order]);
        let abelian = gens.iter().all(|&x| gens.iter().all(|&y| idx.mul(x, y) == idx.mul(y, x)));
        let rmul = invs
            .iter()
            .map(|&a| (0..order).map(|x| idx.mul(x, a) as u32).collect())
            .collect();
        Tables {
            order,
            identity: idx.identity() as u32,
            invs,
            rmul,
            central,
            abelian,
        }
    }
}

/// Nodes one root of the plain search may visit.
const PLAIN_SEARCH_BUDGET: usize = 1 << 12;

enum Outcome {
    Found,
    Exhausted,
    OutOfBudget,
}

struct Search<'a> {
    t: &'a Tables,
    n: usize,
    /// `stabilizers[k]` fixes `a_1..a_k` pointwise inside `Aut(H)`; empty
    /// for the plain search.
    stabilizers: Vec<PermutationGroup>,
    budget: usize,
    /// Positions in `t.invs`.
    seq: Vec<usize>,
    /// `windows[i]` lists `<a_i..a_k>` for the current length `k`; the
    /// second half of each list is the coset added by `a_k`.
    windows: Vec<Vec<u32>>,
    member: Vec<Vec<bool>>,
    phi: Vec<u32>,
}

impl<'a> Search<'a> {
    fn new(t: &'a Tables, n: usize, aut: Option<&PermutationGroup>, a1: usize, budget: usize) -> Self {
        let mut s = Search {
            t,
            n,
            stabilizers: aut.into_iter().cloned().collect(),
            budget,
            seq: Vec::new(),
            windows: Vec::new(),
            member: Vec::new(),
            phi: vec![u32::MAX; t.order],
        };
        s.push(a1);
        s
    }

    fn push(&mut self, a: usize) {
        for (w, m) in self.windows.iter_mut().zip(self.member.iter_mut()) {
            let coset: Vec<u32> = w.iter().map(|&x| self.t.rmul[a][x as usize]).collect();
            for &y in &coset {
                m[y as usize] = true;
            }
            w.extend(coset);
        }
        let id = self.t.identity;
        let ai = self.t.invs[a] as u32;
        let mut m = vec![false; self.t.order];
        m[id as usize] = true;
        m[ai as usize] = true;
        self.windows.push(vec![id, ai]);
        self.member.push(m);
        self.seq.push(a);
        if let Some(top) = self.stabilizers.last() {
            let stab = if top.is_trivial() {
                top.clone()
            } else {
                top.point_stabilizer(ai as usize).expect("element index in range")
            };
            self.stabilizers.push(stab);
        }
    }

    fn pop(&mut self) {
        if self.stabilizers.len() > 1 {
            self.stabilizers.pop();
        }
        self.seq.pop();
        self.windows.pop();
        self.member.pop();
        for (w, m) in self.windows.iter_mut().zip(self.member.iter_mut()) {
            let half = w.len() / 2;
            for &y in &w[half..] {
                m[y as usize] = false;
            }
            w.truncate(half);
        }
    }

    fn extend(&mut self) -> Outcome {
        if self.seq.len() == self.n {
            return Outcome::Found;
        }
        let t = self.t;
        let candidates = match self.stabilizers.last() {
            Some(stab) => orbit_representatives(stab, &t.invs),
            None => (0..t.invs.len()).collect(),
        };
        for a in candidates {
            let ai = t.invs[a];
            if self.member[0][ai] || (self.seq.len() + 1 == self.n && !t.abelian && t.central[a]) {
                continue;
            }
            // a w a for an involution a
            let normalizes = (0..self.seq.len()).all(|i| {
                self.seq[i..].iter().all(|&w| {
                    let aw = t.rmul[w][ai] as usize;
                    self.member[i][t.rmul[a][aw] as usize]
                })
            });
            if !normalizes || !self.shift_is_consistent(a) {
                continue;
            }
            if self.budget == 0 {
                return Outcome::OutOfBudget;
            }
            self.budget -= 1;
            self.push(a);
            match self.extend() {
                Outcome::Exhausted => self.pop(),
                done => return done,
            }
        }
        Outcome::Exhausted
    }

    /// Whether `a_i -> a_{i+1}` extends to a homomorphism from
    /// `<a_1..a_{k-1}>` to `<a_2..a_k>` once `a` is appended as `a_k`.
    fn shift_is_consistent(&mut self, a: usize) -> bool {
        let k = self.seq.len() + 1;
        if k < 3 {
            return true;
        }
        let t = self.t;
        for &x in &self.windows[0] {
            self.phi[x as usize] = u32::MAX;
        }
        let id = t.identity;
        self.phi[id as usize] = id;
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            let fx = self.phi[x as usize];
            for i in 0..k - 1 {
                let next = if i + 1 < self.seq.len() { self.seq[i + 1] } else { a };
                let y = t.rmul[self.seq[i]][x as usize];
                let fy = t.rmul[next][fx as usize];
                if self.phi[y as usize] == u32::MAX {
                    self.phi[y as usize] = fy;
                    queue.push_back(y);
                } else if self.phi[y as usize] != fy {
                    return false;
                }
            }
        }
        true
    }
}

/// Known concentric families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogEntry {
    /// `Z2^m`, `m >= 1`.
    Elementary(u32),
    /// `D8 x Z2^m`, `m >= 0`.
    D8(u32),
    /// `D8^2 x Z2^m`, `m >= 0`.
    D8Squared(u32),
    H7,
    H7xZ2,
}

impl CatalogEntry {
    /// `log2` of the group order.
    pub fn n(&self) -> u32 {
        match *self {
            CatalogEntry::Elementary(m) => m,
            CatalogEntry::D8(m) => 3 + m,
            CatalogEntry::D8Squared(m) => 6 + m,
            CatalogEntry::H7 => 7,
            CatalogEntry::H7xZ2 => 8,
        }
    }

    /// Every admissible entry of order at most `2^max_n`.
    pub fn all_up_to(max_n: u32) -> Vec<CatalogEntry> {
        let mut out = Vec::new();
        out.extend((1..=max_n).map(CatalogEntry::Elementary));
        out.extend((0..=max_n.saturating_sub(3)).filter(|_| max_n >= 3).map(CatalogEntry::D8));
        out.extend((0..=max_n.saturating_sub(6)).filter(|_| max_n >= 6).map(CatalogEntry::D8Squared));
        if max_n >= 7 {
            out.push(CatalogEntry::H7);
        }
        if max_n >= 8 {
            out.push(CatalogEntry::H7xZ2);
        }
        out
    }
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CatalogEntry::Elementary(m) => write!(f, "Z2^{m}"),
            CatalogEntry::D8(m) => write!(f, "D8xZ2^{m}"),
            CatalogEntry::D8Squared(m) => write!(f, "D8^2xZ2^{m}"),
            CatalogEntry::H7 => f.write_str("H7"),
            CatalogEntry::H7xZ2 => f.write_str("H7xZ2"),
        }
    }
}

impl FromStr for CatalogEntry {
    type Err = ConcentricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ConcentricError::UnknownEntry(s.to_string());
        let exp = |t: &str| t.parse::<u32>().map_err(|_| bad());
        let entry = match s {
            "H7" => CatalogEntry::H7,
            "H7xZ2" => CatalogEntry::H7xZ2,
            "D8" => CatalogEntry::D8(0),
            "D8^2" => CatalogEntry::D8Squared(0),
            _ => {
                if let Some(rest) = s.strip_prefix("D8^2xZ2^") {
                    CatalogEntry::D8Squared(exp(rest)?)
                } else if let Some(rest) = s.strip_prefix("D8xZ2^") {
                    CatalogEntry::D8(exp(rest)?)
                } else if let Some(rest) = s.strip_prefix("Z2^") {
                    let m = exp(rest)?;
                    if m == 0 {
                        return Err(bad());
                    }
                    CatalogEntry::Elementary(m)
                } else {
                    return Err(bad());
                }
            }
        };
        Ok(entry)
    }
}

/// Regular representation of `Z2`.
fn z2_regular() -> Vec<Permutation> {
    vec![Permutation::from_images(vec![1, 0]).expect("valid")]
}

/// `R(r)` and `R(s)` on the element order `e, r, r^2, r^3, s, rs, r^2s, r^3s`.
pub fn d8_regular() -> (Permutation, Permutation) {
    // r^i s^j has index i + 4j; r^i s r = r^(i-1) s
    let r: Vec<u32> = (0..8u32).map(|k| if k < 4 { (k + 1) % 4 } else { 4 + (k + 3) % 4 }).collect();
    let s: Vec<u32> = (0..8u32).map(|k| (k + 4) % 8).collect();
    (Permutation::from_images(r).expect("valid"), Permutation::from_images(s).expect("valid"))
}

/// The `(s, r^2, rs)` sequence in the regular representation of `D8`.
pub fn d8_fixture() -> Vec<Permutation> {
    let (r, s) = d8_regular();
    vec![s.clone(), r.then(&r), r.then(&s)]
}

/// Direct product of regular representations in the product action: the
/// first factor is the most significant coordinate.
pub fn direct_product(factors: &[Vec<Permutation>]) -> Vec<Permutation> {
    let degrees: Vec<usize> = factors.iter().map(|f| f[0].degree()).collect();
    let total: usize = degrees.iter().product();
    let mut out = Vec::new();
    let mut stride = total;
    for (k, f) in factors.iter().enumerate() {
        stride /= degrees[k];
        for g in f {
            let images = (0..total)
                .map(|p| {
                    let digit = (p / stride) % degrees[k];
                    (p - digit * stride + g.image(digit) * stride) as u32
                })
                .collect();
            out.push(Permutation::from_images(images).expect("product action is bijective"));
        }
    }
    out
}

/// Generators of the catalog group in its regular representation.
pub fn catalog_group(entry: CatalogEntry) -> Result<Vec<Permutation>, ConcentricError> {
    if entry.n() > 14 {
        return Err(ConcentricError::CatalogTooLarge(entry.to_string()));
    }
    let (r, s) = d8_regular();
    let d8 = vec![r, s];
    let h7 = || -> Result<Vec<Permutation>, ConcentricError> {
        Ok(todd_coxeter(&h7_presentation(), crate::presentation::DEFAULT_MAX_COSETS)?.generators)
    };
    let mut factors: Vec<Vec<Permutation>> = Vec::new();
    let z2s = match entry {
        CatalogEntry::Elementary(m) => m,
        CatalogEntry::D8(m) => {
            factors.push(d8.clone());
            m
        }
        CatalogEntry::D8Squared(m) => {
            factors.push(d8.clone());
            factors.push(d8.clone());
            m
        }
        CatalogEntry::H7 => {
            factors.push(h7()?);
            0
        }
        CatalogEntry::H7xZ2 => {
            factors.push(h7()?);
            1
        }
    };
    factors.extend((0..z2s).map(|_| z2_regular()));
    Ok(direct_product(&factors))
}

/// Builds the catalog group and searches it for a concentric sequence.
pub fn catalog(entry: CatalogEntry) -> Result<ConcentricSequence, ConcentricError> {
    let gens = catalog_group(entry)?;
    let h = ElementSet::generate(gens[0].degree(), &gens, DEFAULT_ELEMENT_CAP)?;
    find_concentric_sequence(&h, entry.n() as usize)?.ok_or_else(|| ConcentricError::NotFound(entry.to_string()))
}

/// Regular representation of `<gens>` on its canonical element order.
pub fn regularize(gens: &[Permutation]) -> Result<Vec<Permutation>, PermError> {
    let Some(first) = gens.first() else {
        return Err(PermError::NoGenerators);
    };
    let h = ElementSet::generate(first.degree(), gens, DEFAULT_ELEMENT_CAP)?;
    Ok(regular_rep_from_multiplication(&h, gens))
}
