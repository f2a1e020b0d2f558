//! Graph automorphisms by equitable-partition refinement and backtracking.
//!
//! The first path of the search tree individualizes the first vertex of
//! the smallest non-singleton cell at each level. Levels are then revisited
//! deepest first: for each vertex of the level's target cell outside the
//! orbit of the first-path choice under the automorphisms found so far, a
//! depth-first search looks for a leaf whose correspondence with the first
//! leaf preserves adjacency. Refinement traces must agree with the first
//! path at every depth.

use std::collections::VecDeque;

use super::{Graph, GraphError};
use crate::group::PermutationGroup;
use crate::perm::Permutation;

/// Largest vertex count accepted by default.
pub const DEFAULT_VERTEX_BUDGET: usize = 50_000;

#[derive(Clone)]
struct Partition {
    /// Vertices in cell order.
    lab: Vec<usize>,
    pos: Vec<usize>,
    /// Start position of each vertex's cell.
    start: Vec<usize>,
    /// `end[s]` is the end of the cell starting at `s`.
    end: Vec<usize>,
}

impl Partition {
    fn unit(n: usize) -> Self {
        let mut end = vec![0; n];
        end[0] = n;
        Partition {
            lab: (0..n).collect(),
            pos: (0..n).collect(),
            start: vec![0; n],
            end,
        }
    }

    fn is_discrete(&self) -> bool {
        self.lab.iter().all(|&v| self.end[self.start[v]] == self.start[v] + 1)
    }

    /// First smallest cell with more than one vertex.
    fn target_cell(&self) -> Option<usize> {
        let n = self.lab.len();
        let mut best: Option<(usize, usize)> = None;
        let mut s = 0;
        while s < n {
            let size = self.end[s] - s;
            if size > 1 && best.is_none_or(|(_, b)| size < b) {
                best = Some((s, size));
            }
            s = self.end[s];
        }
        best.map(|(s, _)| s)
    }

    fn individualize(&mut self, v: usize) -> usize {
        let s = self.start[v];
        let e = self.end[s];
        let p = self.pos[v];
        let first = self.lab[s];
        self.lab.swap(s, p);
        self.pos[first] = p;
        self.pos[v] = s;
        for i in s + 1..e {
            self.start[self.lab[i]] = s + 1;
        }
        self.end[s] = s + 1;
        self.end[s + 1] = e;
        s
    }

    /// Refines to the coarsest equitable partition below `self`, splitting
    /// by neighbour counts in each queued cell; fragments are ordered by
    /// count. Appends a label-independent trace.
    fn refine(&mut self, graph: &Graph, first: usize, trace: &mut Vec<u32>) {
        let n = self.lab.len();
        let mut queued = vec![false; n];
        let mut queue = VecDeque::from([first]);
        queued[first] = true;
        let mut count = vec![0u32; n];
        let mut touched: Vec<usize> = Vec::new();
        while let Some(s) = queue.pop_front() {
            queued[s] = false;
            for i in s..self.end[s] {
                for &y in graph.neighbors(self.lab[i]) {
                    if count[y] == 0 {
                        touched.push(y);
                    }
                    count[y] += 1;
                }
            }
            let mut cells: Vec<usize> = touched.iter().map(|&y| self.start[y]).collect();
            cells.sort_unstable();
            cells.dedup();
            for c in cells {
                let ce = self.end[c];
                let mut slice: Vec<usize> = self.lab[c..ce].to_vec();
                slice.sort_by_key(|&v| count[v]);
                if count[slice[0]] == count[slice[slice.len() - 1]] {
                    continue;
                }
                trace.extend([c as u32, ce as u32]);
                let mut frag = c;
                for (k, &v) in slice.iter().enumerate() {
                    let i = c + k;
                    self.lab[i] = v;
                    self.pos[v] = i;
                    if k > 0 && count[v] != count[slice[k - 1]] {
                        self.end[frag] = i;
                        trace.extend([count[slice[k - 1]], (i - frag) as u32]);
                        frag = i;
                    }
                    self.start[v] = frag;
                }
                self.end[frag] = ce;
                trace.extend([count[slice[slice.len() - 1]], (ce - frag) as u32]);
                let mut f = c;
                while f < ce {
                    if !queued[f] {
                        queued[f] = true;
                        queue.push_back(f);
                    }
                    f = self.end[f];
                }
            }
            for &y in &touched {
                count[y] = 0;
            }
            touched.clear();
            trace.push(u32::MAX);
        }
    }
}

struct Search<'a> {
    graph: &'a Graph,
    /// First-path partitions and the traces that produced them.
    path: Vec<(Partition, Vec<u32>)>,
}

impl Search<'_> {
    fn child(&self, part: &Partition, v: usize) -> (Partition, Vec<u32>) {
        let mut p = part.clone();
        let s = p.individualize(v);
        let mut trace = vec![s as u32];
        p.refine(self.graph, s, &mut trace);
        (p, trace)
    }

    fn leaf_map(&self, leaf: &Partition) -> Option<Permutation> {
        let first = &self.path.last().expect("nonempty path").0;
        let mut images = vec![0u32; leaf.lab.len()];
        for (i, &v) in first.lab.iter().enumerate() {
            images[v] = leaf.lab[i] as u32;
        }
        let p = Permutation::from_images(images).expect("leaf orders are bijections");
        self.graph.preserves(&p).then_some(p)
    }

    fn dfs(&self, part: &Partition, depth: usize) -> Option<Permutation> {
        let Some(t) = part.target_cell() else {
            return self.leaf_map(part);
        };
        for i in t..part.end[t] {
            let (child, trace) = self.child(part, part.lab[i]);
            if depth + 1 < self.path.len() && trace == self.path[depth + 1].1 {
                if let Some(p) = self.dfs(&child, depth + 1) {
                    return Some(p);
                }
            }
        }
        None
    }
}

fn orbit_of(x: usize, gens: &[Permutation], n: usize) -> Vec<bool> {
    let mut seen = vec![false; n];
    seen[x] = true;
    let mut queue = VecDeque::from([x]);
    while let Some(y) = queue.pop_front() {
        for g in gens {
            let z = g.image(y);
            if !seen[z] {
                seen[z] = true;
                queue.push_back(z);
            }
        }
    }
    seen
}

/// Generators of the full automorphism group, each verified to preserve
/// adjacency.
pub fn graph_automorphism_group(graph: &Graph, budget: usize) -> Result<PermutationGroup, GraphError> {
    let n = graph.vertex_count();
    if n > budget {
        return Err(GraphError::BudgetExceeded { vertices: n, budget });
    }
    if n == 0 {
        return Err(GraphError::Infeasible("graph has no vertices".into()));
    }
    let mut root = Partition::unit(n);
    let mut trace = Vec::new();
    root.refine(graph, 0, &mut trace);
    let mut search = Search {
        graph,
        path: vec![(root, trace)],
    };
    let mut choices = Vec::new();
    loop {
        let part = &search.path.last().expect("nonempty").0;
        let Some(t) = part.target_cell() else { break };
        let v = part.lab[t];
        choices.push((t, v));
        let next = search.child(part, v);
        search.path.push(next);
    }
    debug_assert!(search.path.last().expect("nonempty").0.is_discrete());
    let mut gens: Vec<Permutation> = Vec::new();
    for level in (0..choices.len()).rev() {
        let (t, w) = choices[level];
        let part = search.path[level].0.clone();
        let mut orbit = orbit_of(w, &gens, n);
        for i in t..part.end[t] {
            let v = part.lab[i];
            if orbit[v] {
                continue;
            }
            let (child, trace) = search.child(&part, v);
            if trace != search.path[level + 1].1 {
                continue;
            }
            if let Some(p) = search.dfs(&child, level + 1) {
                gens.push(p);
                orbit = orbit_of(w, &gens, n);
            }
        }
    }
    if gens.is_empty() {
        Ok(PermutationGroup::trivial(n))
    } else {
        Ok(PermutationGroup::new(gens)?)
    }
}
