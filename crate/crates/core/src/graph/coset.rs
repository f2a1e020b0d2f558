//! Coset graphs `Cos(G, H, H{g, g^-1}H)` on the right cosets of `H`.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;

use super::{Graph, GraphError};
use crate::elements::ElementSet;
use crate::group::PermutationGroup;
use crate::perm::Permutation;

#[derive(Debug, Clone)]
pub struct CosetGraph {
    pub graph: Graph,
    /// Vertex `v` is the coset `H transversal[v]`.
    pub transversal: Vec<Permutation>,
    subgroup: ElementSet,
    index: HashMap<Permutation, usize>,
    group: PermutationGroup,
}

/// Smallest element of `Hx`, which names the coset.
fn coset_key(h: &ElementSet, x: &Permutation) -> Permutation {
    h.iter().map(|y| y.then(x)).min().expect("H contains the identity")
}

impl CosetGraph {
    pub fn vertex_of(&self, x: &Permutation) -> Option<usize> {
        self.index.get(&coset_key(&self.subgroup, x)).copied()
    }

    /// Right multiplication by `x` (an element of `G`) on the vertices.
    pub fn act(&self, x: &Permutation) -> Permutation {
        let images = self
            .transversal
            .iter()
            .map(|t| self.vertex_of(&t.then(x)).expect("x lies in G") as u32)
            .collect();
        Permutation::from_images(images).expect("G permutes the cosets")
    }

    /// `G` acting on the vertices through its generators.
    pub fn action_group(&self) -> PermutationGroup {
        let gens = self.group.generators().iter().map(|g| self.act(g)).collect();
        PermutationGroup::with_seed(gens, self.group.seed()).expect("nonempty")
    }

    /// Image of a subgroup of `G` in the vertex action.
    pub fn act_group(&self, n: &PermutationGroup) -> PermutationGroup {
        let gens = n.generators().iter().map(|g| self.act(g)).collect();
        PermutationGroup::with_seed(gens, n.seed()).expect("nonempty")
    }
}

/// Builds the coset graph by breadth-first search over the cosets, joining
/// `Hx` and `Hy` when `y x^-1` lies in `HgH ∪ Hg^-1H`.
pub fn materialize_coset_graph(
    g: &PermutationGroup,
    h: &ElementSet,
    edge: &Permutation,
    max_vertices: usize,
) -> Result<CosetGraph, GraphError> {
    if let Some(x) = h.iter().find(|x| !g.contains(x)) {
        return Err(GraphError::NotAnElement(x.clone()));
    }
    if !g.contains(edge) {
        return Err(GraphError::NotAnElement(edge.clone()));
    }
    if h.contains(edge) {
        return Err(GraphError::EdgeElementInSubgroup);
    }
    let index = g.order() / BigUint::from(h.len());
    if index > BigUint::from(max_vertices) {
        return Err(GraphError::IndexOverCap {
            index: index.to_string(),
            cap: max_vertices,
        });
    }
    let inverse = edge.inverse();
    let steps: Vec<Permutation> = h
        .iter()
        .flat_map(|y| [edge.then(y), inverse.then(y)])
        .collect();
    let id = Permutation::identity(g.degree());
    let mut keys: HashMap<Permutation, usize> = HashMap::new();
    keys.insert(coset_key(h, &id), 0);
    let mut transversal = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for s in g.generators() {
            let y = x.then(s);
            if let Entry::Vacant(slot) = keys.entry(coset_key(h, &y)) {
                slot.insert(transversal.len());
                transversal.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut adjacency = Vec::with_capacity(transversal.len());
    for x in &transversal {
        let mut list: Vec<usize> = steps
            .iter()
            .map(|d| keys[&coset_key(h, &d.then(x))])
            .collect();
        list.sort_unstable();
        list.dedup();
        adjacency.push(list);
    }
    Ok(CosetGraph {
        graph: Graph::from_adjacency(adjacency)?,
        transversal,
        subgroup: h.clone(),
        index: keys,
        group: g.clone(),
    })
}
