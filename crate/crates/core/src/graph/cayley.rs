//! Cayley graphs of explicitly enumerated groups and their normality.

use num_bigint::BigUint;

use super::{graph_automorphism_group, Graph, GraphError};
use crate::automorphism::automorphism_group;
use crate::elements::ElementSet;
use crate::group::PermutationGroup;
use crate::perm::{PermError, Permutation};
use crate::presentation::right_regular;

/// Largest group handed to the automorphism search on group elements.
pub const AUT_ELEMENT_CAP: usize = 1 << 12;

/// `Cay(G, S)` on the canonical element order, with `x ~ s x`. Right
/// multiplication by `G` then acts by automorphisms.
pub fn cayley_graph(elements: &ElementSet, connection: &[Permutation]) -> Result<Graph, GraphError> {
    let mut set: Vec<usize> = Vec::with_capacity(connection.len());
    for s in connection {
        let i = elements.index_of(s).ok_or_else(|| GraphError::NotAnElement(s.clone()))?;
        if s.is_identity() {
            return Err(GraphError::ContainsIdentity);
        }
        set.push(i);
    }
    set.sort_unstable();
    set.dedup();
    for &i in &set {
        let inv = elements.index_of(&elements.get(i).inverse()).expect("closed");
        if set.binary_search(&inv).is_err() {
            return Err(GraphError::NotInverseClosed);
        }
    }
    let adjacency = elements
        .iter()
        .map(|x| {
            set.iter()
                .map(|&s| elements.index_of(&elements.get(s).then(x)).expect("closed"))
                .collect()
        })
        .collect();
    Graph::from_adjacency(adjacency)
}

/// `Aut(G, S)`, as permutations of the canonical element order.
pub fn aut_stabilizing_set(elements: &ElementSet, connection: &[Permutation]) -> Result<PermutationGroup, PermError> {
    if elements.len() > AUT_ELEMENT_CAP {
        return Err(PermError::OverCap {
            order: elements.len().to_string(),
            cap: AUT_ELEMENT_CAP,
        });
    }
    automorphism_group(elements, connection)
}

#[derive(Debug, Clone)]
pub struct CayleyNormality {
    pub aut_order: BigUint,
    pub group_order: usize,
    pub aut_gs_order: BigUint,
    /// Whether `R(G)` is normal in the full automorphism group.
    pub normal: bool,
    /// `|N_Aut(R(G))|`, when Aut was small enough to enumerate.
    pub normalizer_order: Option<BigUint>,
    /// Whether the normalizer has order `|G| |Aut(G,S)|`.
    pub normalizer_matches: Option<bool>,
    /// Whether the identity-vertex stabilizer of the normalizer acts
    /// faithfully on the neighbourhood.
    pub faithful_on_neighbourhood: Option<bool>,
}

pub fn cayley_normality_report(
    elements: &ElementSet,
    connection: &[Permutation],
    vertex_budget: usize,
    enumeration_cap: usize,
) -> Result<CayleyNormality, GraphError> {
    let graph = cayley_graph(elements, connection)?;
    let aut = graph_automorphism_group(&graph, vertex_budget)?;
    let gens = elements.generating_set();
    let regular: Vec<Permutation> = gens.iter().map(|g| right_regular(elements, g)).collect();
    let rg = if regular.is_empty() {
        PermutationGroup::trivial(elements.len())
    } else {
        PermutationGroup::new(regular)?
    };
    let normal = rg.is_normal_in(&aut);
    let aut_gs = aut_stabilizing_set(elements, connection)?;
    let expected = BigUint::from(elements.len()) * aut_gs.order();
    let identity = elements
        .index_of(&Permutation::identity(elements.degree()))
        .expect("groups contain the identity");
    let mut normalizer_order = None;
    let mut normalizer_matches = None;
    let mut faithful = None;
    if aut.order() <= BigUint::from(enumeration_cap) {
        let all = aut.enumerate_elements(enumeration_cap)?;
        let normalizer: Vec<&Permutation> = all
            .iter()
            .filter(|a| rg.generators().iter().all(|r| rg.contains(&r.conjugate(a))))
            .collect();
        let neighbourhood = graph.neighbors(identity);
        let moving_stabilizer = normalizer
            .iter()
            .filter(|a| a.fixes(identity) && !a.is_identity())
            .all(|a| neighbourhood.iter().any(|&v| !a.fixes(v)));
        normalizer_order = Some(BigUint::from(normalizer.len()));
        normalizer_matches = Some(BigUint::from(normalizer.len()) == expected);
        faithful = Some(moving_stabilizer);
    }
    Ok(CayleyNormality {
        aut_order: aut.order(),
        group_order: elements.len(),
        aut_gs_order: aut_gs.order(),
        normal,
        normalizer_order,
        normalizer_matches,
        faithful_on_neighbourhood: faithful,
    })
}
