//! Undirected simple graphs in compressed adjacency form.

mod generators;
mod io;
mod targets;

pub use generators::{gen_barabasi_albert, gen_erdos_renyi, gen_watts_strogatz, GraphGenSpec, Model};
pub use io::{read_edge_list, write_edge_list, write_edge_list_with_header};
pub use targets::{
    canonical_sparse_target, clique, TargetSpec, SPARSE_TARGET_EDGES, SPARSE_TARGET_MAX_DEGREE, SPARSE_TARGET_NODES,
};

use crate::error::{Error, Result};

/// Undirected simple graph on nodes `0..n`.
///
/// Neighbor lists are stored back to back (`neighbors[offsets[i]..offsets[i + 1]]`),
/// each sorted ascending with no duplicates and no self-loops. Every edge
/// appears in both endpoint lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
}

impl Graph {
    /// Graph on `n` nodes with no edges.
    pub fn empty(n: usize) -> Self {
        Self {
            offsets: vec![0; n + 1],
            neighbors: Vec::new(),
        }
    }

    /// Builds a graph from undirected pairs. Duplicate pairs (in either
    /// orientation) collapse into one edge; self-loops and out-of-range ids
    /// are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut lists = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::param(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            if u == v {
                return Err(Error::param(format!("self-loop at node {u}")));
            }
            lists[u].push(v);
            lists[v].push(u);
        }
        Ok(Self::from_lists(lists))
    }

    /// Packs per-node lists, sorting and deduplicating each one. Callers
    /// guarantee symmetry and the absence of self-loops.
    pub(crate) fn from_lists(mut lists: Vec<Vec<usize>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0);
        let total: usize = lists.iter().map(Vec::len).sum();
        let mut neighbors = Vec::with_capacity(total);
        for list in &mut lists {
            list.sort_unstable();
            list.dedup();
            neighbors.extend_from_slice(list);
            offsets.push(neighbors.len());
        }
        Self { offsets, neighbors }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.offsets.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0)
    }

    pub fn mean_degree(&self) -> f64 {
        match self.node_count() {
            0 => 0.0,
            n => self.neighbors.len() as f64 / n as f64,
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.node_count() && v < self.node_count() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.node_count());
        debug_assert_eq!(y.len(), self.node_count());
        for (i, out) in y.iter_mut().enumerate() {
            *out = self.neighbors(i).iter().map(|&j| x[j]).sum();
        }
    }

    /// Union of this graph's edges with `extra`; pairs already present collapse.
    pub fn with_edges<I>(&self, extra: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_edges(self.node_count(), self.edges().chain(extra))
    }

    /// Relabels node `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.node_count();
        if perm.len() != n {
            return Err(Error::param("permutation length differs from node count"));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::param("not a permutation"));
            }
        }
        Self::from_edges(n, self.edges().map(|(u, v)| (perm[u], perm[v])))
    }

    /// Checks symmetry, simplicity and ordering of the adjacency lists.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.node_count();
        if !self.neighbors.len().is_multiple_of(2) {
            return Err(Error::param("odd adjacency length"));
        }
        for u in 0..n {
            let list = self.neighbors(u);
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::param(format!("neighbors of {u} not strictly ascending")));
            }
            for &v in list {
                if v >= n || v == u {
                    return Err(Error::param(format!("bad neighbor {v} of {u}")));
                }
                if self.neighbors(v).binary_search(&u).is_err() {
                    return Err(Error::param(format!("edge ({u}, {v}) not symmetric")));
                }
            }
        }
        Ok(())
    }
}

/// Edge density `2E / (n(n-1))`.
pub fn density(g: &Graph) -> Result<f64> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::param(format!("density needs at least 2 nodes, got {n}")));
    }
    Ok(2.0 * g.edge_count() as f64 / (n as f64 * (n - 1) as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_symmetrizes_and_dedups() {
        let g = Graph::from_edges(4, [(0, 1), (1, 0), (2, 1), (3, 0)]).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.neighbors(0), &[1, 3]);
        assert_eq!(g.neighbors(1), &[0, 2]);
        g.check_invariants().unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 3), (1, 2)]);
    }

    #[test]
    fn rejects_self_loop_and_out_of_range() {
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
    }

    #[test]
    fn density_values() {
        assert_eq!(density(&clique(20).unwrap().to_graph()).unwrap(), 1.0);
        assert_eq!(density(&Graph::empty(10)).unwrap(), 0.0);
        assert!(density(&Graph::empty(1)).is_err());
    }

    #[test]
    fn permutation_preserves_edges() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let p = g.permuted(&[2, 0, 1]).unwrap();
        assert!(p.has_edge(2, 0));
        assert!(p.has_edge(0, 1));
        assert!(!p.has_edge(2, 1));
        assert!(g.permuted(&[0, 0, 1]).is_err());
    }

    #[test]
    fn mat_vec() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let mut y = vec![0.0; 3];
        g.mul_vec(&[1.0, 2.0, 3.0], &mut y);
        assert_eq!(y, vec![2.0, 4.0, 2.0]);
    }
}
