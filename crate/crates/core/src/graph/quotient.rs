//! Normal quotients and the basic-type classification.

use num_bigint::BigUint;

use super::{transitivity_report, Graph, GraphError, DEFAULT_VERTEX_BUDGET};
use crate::group::PermutationGroup;
use crate::subgroup::{class_normal_closures, minimal_normal_subgroups};

/// Outcome of the normal-cover lemma on one quotient: when `G` is not
/// solvable, `N` is solvable and the graph is a connected tetravalent
/// `G`-HAT graph, the graph must be a normal cover of the quotient with `N`
/// semiregular.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverLemma {
    NotApplicable,
    Holds,
    Violated,
}

#[derive(Debug, Clone)]
pub struct QuotientResult {
    /// Orbits of `N`, each sorted, ordered by least vertex.
    pub orbit_partition: Vec<Vec<usize>>,
    pub quotient: Graph,
    /// `None` when the quotient is not regular.
    pub quotient_valency: Option<usize>,
    pub is_normal_cover: bool,
    pub n_semiregular: bool,
    /// `N` is transitive, so the quotient is a single vertex.
    pub degenerate: bool,
    pub n_order: BigUint,
    pub cover_lemma: CoverLemma,
}

/// `Γ_N` for `N` normal in `G`, both acting on the vertices of `graph`.
pub fn normal_quotient(graph: &Graph, g: &PermutationGroup, n: &PermutationGroup) -> Result<QuotientResult, GraphError> {
    if !n.is_normal_in(g) {
        return Err(GraphError::NotNormal);
    }
    if let Some(i) = g.generators().iter().position(|p| !graph.preserves(p)) {
        return Err(GraphError::NotActing(i + 1));
    }
    if !g.transitivity_flags().transitive {
        return Err(GraphError::NotVertexTransitive);
    }
    let orbit_partition = n.orbits();
    let mut block = vec![0usize; graph.vertex_count()];
    for (b, orbit) in orbit_partition.iter().enumerate() {
        for &v in orbit {
            block[v] = b;
        }
    }
    let mut adjacency = vec![Vec::new(); orbit_partition.len()];
    for (u, v) in graph.edges() {
        let (a, b) = (block[u], block[v]);
        if a != b {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
    }
    for list in &mut adjacency {
        list.sort_unstable();
        list.dedup();
    }
    let quotient = Graph::from_adjacency(adjacency)?;
    let quotient_valency = quotient.valency();
    let is_normal_cover = quotient_valency.is_some() && quotient_valency == graph.valency();
    let n_order = n.order();
    let n_semiregular = orbit_partition.iter().all(|o| BigUint::from(o.len()) == n_order);
    let degenerate = orbit_partition.len() == 1;
    let cover_lemma = if graph.valency() == Some(4)
        && graph.is_connected()
        && n.is_solvable()
        && !g.is_solvable()
        && transitivity_report(graph, Some(g), DEFAULT_VERTEX_BUDGET)?.hat
    {
        if is_normal_cover && n_semiregular {
            CoverLemma::Holds
        } else {
            CoverLemma::Violated
        }
    } else {
        CoverLemma::NotApplicable
    };
    Ok(QuotientResult {
        orbit_partition,
        quotient,
        quotient_valency,
        is_normal_cover,
        n_semiregular,
        degenerate,
        n_order,
        cover_lemma,
    })
}

/// Where the minimal normal subgroups come from.
#[derive(Debug, Clone)]
pub enum NormalSource {
    /// Candidates supplied by the caller, acting on the vertices.
    Supplied(Vec<PermutationGroup>),
    /// Enumerate `G` (at most `cap` elements) and compute them.
    Computed { cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasicType {
    /// The quotient by the `witness`-th tested subgroup has valency 4.
    NotBasic { witness: usize },
    Quasiprimitive,
    /// `aut_clause`: whether some normal subgroup of the full automorphism
    /// group has exactly two orbits; `None` when that group was not
    /// supplied or is too large to enumerate.
    BiQuasiprimitive { aut_clause: Option<bool> },
    /// The quotient by the `witness`-th tested subgroup is a cycle of
    /// length at least 3.
    CycleType { witness: usize, length: usize },
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub outcome: BasicType,
    /// True when the subgroups came from [`NormalSource::Supplied`].
    pub relative_to_supplied: bool,
    pub tested: Vec<PermutationGroup>,
    pub quotients: Vec<QuotientResult>,
}

fn is_cycle(graph: &Graph) -> bool {
    graph.vertex_count() >= 3 && graph.valency() == Some(2) && graph.is_connected()
}

/// Classifies `(graph, G)` by its quotients over minimal normal subgroups.
/// `aut`, when given with an enumeration cap, decides the extra clause of
/// the bi-quasiprimitive case.
pub fn classify_basic(
    graph: &Graph,
    g: &PermutationGroup,
    source: NormalSource,
    aut: Option<(&PermutationGroup, usize)>,
) -> Result<Classification, GraphError> {
    let relative_to_supplied = matches!(source, NormalSource::Supplied(_));
    let tested = match source {
        NormalSource::Supplied(list) => list,
        NormalSource::Computed { cap } => minimal_normal_subgroups(g, cap)
            .map_err(|e| GraphError::Infeasible(format!("normal subgroups of G: {e}")))?,
    };
    let quotients = tested
        .iter()
        .map(|n| normal_quotient(graph, g, n))
        .collect::<Result<Vec<_>, _>>()?;
    let outcome = if let Some(w) = quotients.iter().position(|q| q.quotient_valency == Some(4)) {
        BasicType::NotBasic { witness: w }
    } else if let Some(w) = quotients.iter().position(|q| q.orbit_partition.len() >= 3) {
        let q = &quotients[w];
        if !is_cycle(&q.quotient) {
            return Err(GraphError::Infeasible(format!(
                "quotient on {} orbits is neither a cycle nor of valency 4",
                q.orbit_partition.len()
            )));
        }
        BasicType::CycleType {
            witness: w,
            length: q.orbit_partition.len(),
        }
    } else if quotients.iter().all(|q| q.degenerate) {
        BasicType::Quasiprimitive
    } else {
        let aut_clause = match aut {
            Some((a, cap)) => class_normal_closures(a, cap)
                .ok()
                .map(|ns| ns.iter().any(|m| m.orbits().len() == 2)),
            None => None,
        };
        BasicType::BiQuasiprimitive { aut_clause }
    };
    Ok(Classification {
        outcome,
        relative_to_supplied,
        tested,
        quotients,
    })
}
