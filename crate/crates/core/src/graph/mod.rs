//! Simple undirected graphs and the group actions on them.

mod cayley;
mod coset;
mod quotient;
mod search;
mod transitivity;

pub use cayley::{aut_stabilizing_set, cayley_graph, cayley_normality_report, CayleyNormality};
pub use coset::{materialize_coset_graph, CosetGraph};
pub use quotient::{classify_basic, normal_quotient, BasicType, Classification, CoverLemma, NormalSource, QuotientResult};
pub use search::{graph_automorphism_group, DEFAULT_VERTEX_BUDGET};
pub use transitivity::{transitivity_report, TransitivityReport};

use std::collections::VecDeque;

use thiserror::Error;

use crate::concentric::ConcentricError;
use crate::perm::{PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("repeated edge {0} {1}")]
    MultiEdge(usize, usize),
    #[error("vertex {vertex} out of range for {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("{vertices} vertices exceed the budget of {budget}")]
    BudgetExceeded { vertices: usize, budget: usize },
    #[error("index {index} exceeds the vertex cap {cap}")]
    IndexOverCap { index: String, cap: usize },
    #[error("g lies in H, so the coset graph would have loops")]
    EdgeElementInSubgroup,
    #[error("generator {0} does not preserve adjacency")]
    NotActing(usize),
    #[error("N is not normal in G")]
    NotNormal,
    #[error("connection set is not closed under inverses")]
    NotInverseClosed,
    #[error("connection set contains the identity")]
    ContainsIdentity,
    #[error("{0} is not an element of the group")]
    NotAnElement(Permutation),
    #[error("G is not transitive on vertices")]
    NotVertexTransitive,
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Concentric(#[from] ConcentricError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Graph on `0..n` with the given 0-based edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x + 1, count: n });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u + 1));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        Self::from_adjacency(adjacency)
    }

    /// Takes per-vertex neighbour lists, which must be symmetric.
    pub fn from_adjacency(mut adjacency: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let n = adjacency.len();
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::MultiEdge(u + 1, w[0] + 1));
            }
            if let Some(&v) = list.iter().find(|&&v| v >= n) {
                return Err(GraphError::VertexOutOfRange { vertex: v + 1, count: n });
            }
            if list.binary_search(&u).is_ok() {
                return Err(GraphError::Loop(u + 1));
            }
        }
        for u in 0..n {
            for &v in &adjacency[u] {
                if adjacency[v].binary_search(&u).is_err() {
                    return Err(GraphError::MultiEdge(u + 1, v + 1));
                }
            }
        }
        Ok(Graph { adjacency })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, list) in self.adjacency.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Common degree, if the graph is regular and nonempty.
    pub fn valency(&self) -> Option<usize> {
        let d = self.adjacency.first()?.len();
        self.adjacency.iter().all(|l| l.len() == d).then_some(d)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == n
    }

    /// Whether `p` maps edges to edges.
    pub fn preserves(&self, p: &Permutation) -> bool {
        p.degree() == self.vertex_count()
            && self
                .adjacency
                .iter()
                .enumerate()
                .all(|(u, list)| list.iter().all(|&v| self.has_edge(p.image(u), p.image(v))))
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges).expect("cycle of length at least 3")
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::from_edges(n, &edges).expect("simple")
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::from_edges(10, &edges).expect("simple")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_loops_and_repeats() {
        assert_eq!(Graph::from_edges(3, &[(0, 0)]), Err(GraphError::Loop(1)));
        assert_eq!(Graph::from_edges(3, &[(0, 1), (1, 0)]), Err(GraphError::MultiEdge(1, 2)));
        assert!(matches!(Graph::from_edges(2, &[(0, 2)]), Err(GraphError::VertexOutOfRange { .. })));
        assert!(Graph::from_adjacency(vec![vec![1], vec![]]).is_err());
    }

    #[test]
    fn basic_shapes() {
        let p = Graph::petersen();
        assert_eq!(p.valency(), Some(3));
        assert_eq!(p.edge_count(), 15);
        assert!(p.is_connected());
        let two = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!two.is_connected());
        assert_eq!(Graph::cycle(5).edges().len(), 5);
    }
}
