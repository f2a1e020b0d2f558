//! Vertex, edge and arc transitivity of a group acting on a graph.

use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::{graph_automorphism_group, Graph, GraphError};
use crate::concentric::{find_concentric_sequence, ConcentricSequence};
use crate::elements::DEFAULT_ELEMENT_CAP;
use crate::group::PermutationGroup;

#[derive(Debug, Clone)]
pub struct TransitivityReport {
    /// Whether the group was supplied rather than computed as the full
    /// automorphism group.
    pub supplied_group: bool,
    pub group_order: BigUint,
    pub vertex_transitive: bool,
    pub edge_transitive: bool,
    pub arc_transitive: bool,
    pub hat: bool,
    /// Arc orbit sizes, the orbit of the arc from vertex 1 to its first
    /// neighbour first.
    pub arc_orbit_sizes: Vec<usize>,
    pub edge_orbit_count: usize,
    /// Stabilizer of vertex 1.
    pub stabilizer: PermutationGroup,
    /// Concentric sequence of the stabilizer, searched when `hat` holds
    /// and the stabilizer is a nontrivial 2-group.
    pub stabilizer_concentric: Option<ConcentricSequence>,
    /// Whether that search ran.
    pub concentric_searched: bool,
}

impl TransitivityReport {
    /// Elementary abelian 2-group test on the stabilizer, by enumeration.
    pub fn stabilizer_is_elementary_abelian(&self) -> Result<bool, GraphError> {
        let set = self.stabilizer.enumerate_elements(DEFAULT_ELEMENT_CAP)?;
        Ok(set.is_elementary_abelian_2())
    }
}

/// Orbits of a group on `0..count` given the image map of each generator.
fn orbits_under(count: usize, gens: &[Vec<usize>], seeds: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut seen = vec![false; count];
    let mut sizes = Vec::new();
    for seed in seeds {
        if seen[seed] {
            continue;
        }
        seen[seed] = true;
        let mut queue = VecDeque::from([seed]);
        let mut size = 0;
        while let Some(x) = queue.pop_front() {
            size += 1;
            for g in gens {
                let y = g[x];
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        sizes.push(size);
    }
    sizes
}

pub fn transitivity_report(
    graph: &Graph,
    group: Option<&PermutationGroup>,
    budget: usize,
) -> Result<TransitivityReport, GraphError> {
    let computed;
    let g = match group {
        Some(g) => {
            if let Some(i) = g.generators().iter().position(|p| !graph.preserves(p)) {
                return Err(GraphError::NotActing(i + 1));
            }
            g
        }
        None => {
            computed = graph_automorphism_group(graph, budget)?;
            &computed
        }
    };
    let n = graph.vertex_count();
    let offsets: Vec<usize> = std::iter::once(0)
        .chain((0..n).scan(0, |acc, v| {
            *acc += graph.degree(v);
            Some(*acc)
        }))
        .collect();
    let arc_id = |u: usize, v: usize| offsets[u] + graph.neighbors(u).binary_search(&v).expect("adjacent");
    let arcs: Vec<(usize, usize)> = (0..n).flat_map(|u| graph.neighbors(u).iter().map(move |&v| (u, v))).collect();
    let arc_maps: Vec<Vec<usize>> = g
        .generators()
        .iter()
        .map(|p| arcs.iter().map(|&(u, v)| arc_id(p.image(u), p.image(v))).collect())
        .collect();
    let arc_orbit_sizes = orbits_under(arcs.len(), &arc_maps, 0..arcs.len());
    // an edge is named by its arc with the smaller tail
    let edge_maps: Vec<Vec<usize>> = arc_maps
        .iter()
        .map(|m| {
            (0..arcs.len())
                .map(|a| {
                    let (u, v) = arcs[m[a]];
                    arc_id(u.min(v), u.max(v))
                })
                .collect()
        })
        .collect();
    let edge_seeds = (0..arcs.len()).filter(|&a| arcs[a].0 < arcs[a].1);
    let edge_orbits = orbits_under(arcs.len(), &edge_maps, edge_seeds);

    let vertex_transitive = g.orbits().len() == 1;
    let edge_transitive = edge_orbits.len() == 1;
    let arc_transitive = arc_orbit_sizes.len() == 1;
    let hat = vertex_transitive && edge_transitive && !arc_transitive;
    let stabilizer = g.point_stabilizer(0)?;
    let order = stabilizer.order();
    let mut stabilizer_concentric = None;
    let mut concentric_searched = false;
    if hat && !order.is_one() && (&order & (&order - 1u32)) == BigUint::from(0u32) {
        concentric_searched = true;
        let set = stabilizer.enumerate_elements(DEFAULT_ELEMENT_CAP)?;
        let bits = order.bits() as usize - 1;
        stabilizer_concentric = find_concentric_sequence(&set, bits)?;
    }
    Ok(TransitivityReport {
        supplied_group: group.is_some(),
        group_order: g.order(),
        vertex_transitive,
        edge_transitive,
        arc_transitive,
        hat,
        arc_orbit_sizes,
        edge_orbit_count: edge_orbits.len(),
        stabilizer,
        stabilizer_concentric,
        concentric_searched,
    })
}

impl TransitivityReport {
    pub fn stabilizer_order_u64(&self) -> Option<u64> {
        self.stabilizer.order().to_u64()
    }
}
