//! Explicit element sets for small subgroups.
//!
//! Elements are kept in canonical order (lexicographic on image sequences)
//! and hash-indexed, so "the i-th element" is reproducible across runs.

use std::collections::{HashMap, VecDeque};

use indexmap::IndexSet;

use crate::perm::{PermError, Permutation};

/// Default ceiling on explicit subgroup sizes.
pub const DEFAULT_ELEMENT_CAP: usize = 1 << 18;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementSet {
    degree: usize,
    elements: IndexSet<Permutation>,
}

impl ElementSet {
    /// Closure of `gens` under products; fails once the size passes `cap`.
    pub fn generate(degree: usize, gens: &[Permutation], cap: usize) -> Result<Self, PermError> {
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch {
                expected: degree,
                found: g.degree(),
            });
        }
        let id = Permutation::identity(degree);
        let mut set = IndexSet::new();
        set.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for s in gens {
                let y = x.then(s);
                if !set.contains(&y) {
                    if set.len() >= cap {
                        return Err(PermError::OverCap {
                            order: format!(">{cap}"),
                            cap,
                        });
                    }
                    set.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(Self::from_unsorted(degree, set))
    }

    /// Wraps a set already known to be a subgroup.
    pub fn from_closed(degree: usize, elements: impl IntoIterator<Item = Permutation>) -> Self {
        Self::from_unsorted(degree, elements.into_iter().collect())
    }

    fn from_unsorted(degree: usize, mut set: IndexSet<Permutation>) -> Self {
        set.sort_unstable();
        ElementSet { degree, elements: set }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.elements.contains(g)
    }

    pub fn index_of(&self, g: &Permutation) -> Option<usize> {
        self.elements.get_index_of(g)
    }

    pub fn get(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Permutation> {
        self.elements.iter()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// Whether the set is closed under products and inverses.
    pub fn is_closed(&self) -> bool {
        self.elements.iter().all(|x| self.contains(&x.inverse()))
            && self
                .elements
                .iter()
                .all(|x| self.elements.iter().all(|y| self.contains(&x.then(y))))
    }

    /// `{g^-1 x g : x in self}`.
    pub fn conjugate(&self, g: &Permutation) -> ElementSet {
        Self::from_unsorted(self.degree, self.elements.iter().map(|x| x.conjugate(g)).collect())
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        Self::from_unsorted(
            self.degree,
            self.elements.iter().filter(|x| other.contains(x)).cloned().collect(),
        )
    }

    pub fn is_subset_of(&self, other: &ElementSet) -> bool {
        self.elements.iter().all(|x| other.contains(x))
    }

    pub fn is_abelian(&self) -> bool {
        let v: Vec<&Permutation> = self.elements.iter().collect();
        v.iter()
            .enumerate()
            .all(|(i, a)| v[i + 1..].iter().all(|b| a.commutes_with(b)))
    }

    pub fn is_elementary_abelian_2(&self) -> bool {
        self.is_abelian() && self.elements.iter().all(|x| x.then(x).is_identity())
    }

    /// Involutions in canonical order.
    pub fn involutions(&self) -> Vec<Permutation> {
        self.elements.iter().filter(|x| x.is_involution()).cloned().collect()
    }

    pub fn centralizer_size(&self, g: &Permutation) -> usize {
        self.elements.iter().filter(|x| x.commutes_with(g)).count()
    }

    /// A generating set picked greedily in canonical order.
    pub fn generating_set(&self) -> Vec<Permutation> {
        let mut gens: Vec<Permutation> = Vec::new();
        let mut span = ElementSet::generate(self.degree, &[], usize::MAX).expect("trivial");
        for x in self.elements.iter() {
            if span.len() == self.len() {
                break;
            }
            if !span.contains(x) {
                gens.push(x.clone());
                span = ElementSet::generate(self.degree, &gens, usize::MAX).expect("uncapped");
            }
        }
        gens
    }

    /// Conjugacy classes under the action of `gens` (not necessarily in the
    /// set), as index lists; each class is sorted, classes ordered by their
    /// least index.
    pub fn classes_under(&self, gens: &[Permutation]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut class = vec![start];
            let mut i = 0;
            while i < class.len() {
                let x = self.get(class[i]).clone();
                i += 1;
                for g in gens {
                    let y = x.conjugate(g);
                    let k = self.index_of(&y).expect("set closed under conjugation");
                    if !seen[k] {
                        seen[k] = true;
                        class.push(k);
                    }
                }
            }
            class.sort_unstable();
            out.push(class);
        }
        out
    }
}

/// Index arithmetic on an `ElementSet`: elements are identified by their
/// images of a short list of base points, so products cost `O(|base|)`.
#[derive(Debug, Clone)]
pub struct ElementIndex<'a> {
    set: &'a ElementSet,
    base: Vec<usize>,
    index: HashMap<Vec<u16>, u32>,
    /// Direct lookup by the image of the only base point, when there is one.
    by_point: Option<Vec<u32>>,
    inverse: Vec<u32>,
    identity: usize,
}

impl<'a> ElementIndex<'a> {
    pub fn new(set: &'a ElementSet) -> Self {
        let mut base = Vec::new();
        let mut moving: Vec<&Permutation> = set.iter().filter(|x| !x.is_identity()).collect();
        while let Some(x) = moving.first() {
            let p = (0..set.degree()).find(|&p| !x.fixes(p)).expect("non-identity");
            base.push(p);
            moving.retain(|y| y.fixes(p));
        }
        let index: HashMap<Vec<u16>, u32> = set
            .iter()
            .enumerate()
            .map(|(i, x)| (base.iter().map(|&b| x.image(b) as u16).collect(), i as u32))
            .collect();
        let identity = set.index_of(&Permutation::identity(set.degree())).expect("identity");
        let by_point = (base.len() == 1).then(|| {
            let mut v = vec![u32::MAX; set.degree()];
            for (i, x) in set.iter().enumerate() {
                v[x.image(base[0])] = i as u32;
            }
            v
        });
        let mut idx = ElementIndex {
            set,
            base,
            index,
            by_point,
            inverse: Vec::new(),
            identity,
        };
        idx.inverse = set.iter().map(|x| idx.find(&x.inverse()) as u32).collect();
        idx
    }

    pub fn set(&self) -> &'a ElementSet {
        self.set
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Index of a permutation known to lie in the set.
    pub fn find(&self, g: &Permutation) -> usize {
        if let Some(v) = &self.by_point {
            return v[g.image(self.base[0])] as usize;
        }
        let key: Vec<u16> = self.base.iter().map(|&b| g.image(b) as u16).collect();
        self.index[&key] as usize
    }

    /// Index of `x * y`.
    pub fn mul(&self, x: usize, y: usize) -> usize {
        let (x, y) = (self.set.get(x), self.set.get(y));
        if let Some(v) = &self.by_point {
            return v[y.image(x.image(self.base[0]))] as usize;
        }
        let key: Vec<u16> = self.base.iter().map(|&b| y.image(x.image(b)) as u16).collect();
        self.index[&key] as usize
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x] as usize
    }

    /// Index of `x^z = z^-1 x z`.
    pub fn conj(&self, x: usize, z: usize) -> usize {
        self.mul(self.mul(self.inv(z), x), z)
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }
}
