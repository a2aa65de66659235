//! Error clusters: maximal cliques of the identity graph over a parsed batch.
//!
//! Two parsed trees are joined when their FEATS-mode GRCTs are identical,
//! which is the same as their normalized kernel being 1. Identity is
//! transitive, so the graph is a disjoint union of cliques and every maximal
//! clique is a connected component. Bron–Kerbosch is still run in its
//! general pivoting form.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::grct::{grct_equal, GrctTree};
use crate::kernel::{ncptk, KernelParams};

/// Simple undirected graph on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityGraph {
    adj: Vec<Vec<bool>>,
}

impl IdentityGraph {
    pub fn new(n: usize) -> Self {
        IdentityGraph {
            adj: vec![vec![false; n]; n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::new(n);
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    /// Self-loops are ignored.
    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a != b {
            self.adj[a][b] = true;
            self.adj[b][a] = true;
        }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    /// Edges `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.adj[a][b])
            .collect()
    }

    fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v]
            .iter()
            .enumerate()
            .filter_map(|(u, &e)| e.then_some(u))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for u in self.neighbors(v) {
                    if !seen[u] {
                        seen[u] = true;
                        comp.push(u);
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Edge `(i, j)` iff the two trees are identical.
pub fn identity_graph(trees: &[GrctTree]) -> IdentityGraph {
    let mut g = IdentityGraph::new(trees.len());
    for i in 0..trees.len() {
        for j in i + 1..trees.len() {
            if grct_equal(&trees[i], &trees[j]) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// All maximal cliques (Bron–Kerbosch with Tomita pivoting).
///
/// Each clique is sorted; the list is ordered by smallest member. Isolated
/// vertices come back as singletons.
pub fn bron_kerbosch(g: &IdentityGraph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut r = Vec::new();
    let p: Vec<usize> = (0..g.len()).collect();
    expand(g, &mut r, p, Vec::new(), &mut out);
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out
}

fn expand(
    g: &IdentityGraph,
    r: &mut Vec<usize>,
    mut p: Vec<usize>,
    mut x: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() {
        if x.is_empty() && !r.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    // pivot: the vertex of P ∪ X with the most neighbours in P
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .max_by_key(|&u| {
            (
                p.iter().filter(|&&v| g.has_edge(u, v)).count(),
                core::cmp::Reverse(u),
            )
        })
        .expect("P is non-empty");
    let candidates: Vec<usize> = p
        .iter()
        .copied()
        .filter(|&v| !g.has_edge(pivot, v))
        .collect();
    for v in candidates {
        let next_p = p.iter().copied().filter(|&u| g.has_edge(v, u)).collect();
        let next_x = x.iter().copied().filter(|&u| g.has_edge(v, u)).collect();
        r.push(v);
        expand(g, r, next_p, next_x, out);
        r.pop();
        p.retain(|&u| u != v);
        x.push(v);
    }
}

/// Normalized kernel between the representatives of two clusters.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClusterPair {
    pub first: usize,
    pub second: usize,
    pub ncptk: f64,
}

/// Error clusters of one batch.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ErrorClusterSet {
    /// Maximal cliques, each sorted, ordered by smallest member.
    pub clusters: Vec<Vec<usize>>,
    /// Smallest member of each cluster.
    pub representatives: Vec<usize>,
    /// One entry per unordered pair of clusters (indices into `clusters`).
    pub pairwise_ncptk: Vec<ClusterPair>,
}

impl ErrorClusterSet {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.clusters.iter().map(Vec::len).collect()
    }
}

/// Clusters a batch of FEATS-mode GRCTs and scores the clusters against
/// each other through their representatives.
pub fn cluster_batch(trees: &[GrctTree], p: &KernelParams) -> Result<ErrorClusterSet, Error> {
    let clusters = bron_kerbosch(&identity_graph(trees));
    let representatives: Vec<usize> = clusters.iter().map(|c| c[0]).collect();
    let mut pairwise_ncptk = Vec::new();
    for i in 0..representatives.len() {
        for j in i + 1..representatives.len() {
            let v = ncptk(&trees[representatives[i]], &trees[representatives[j]], p)?;
            pairwise_ncptk.push(ClusterPair {
                first: i,
                second: j,
                ncptk: v,
            });
        }
    }
    Ok(ErrorClusterSet {
        clusters,
        representatives,
        pairwise_ncptk,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn empty_graph_gives_singletons() {
        assert_eq!(
            bron_kerbosch(&IdentityGraph::new(3)),
            vec![vec![0], vec![1], vec![2]]
        );
    }

    #[test]
    fn triangle() {
        let g = IdentityGraph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(bron_kerbosch(&g), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn path_is_not_transitive() {
        let g = IdentityGraph::from_edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(bron_kerbosch(&g), vec![vec![0, 1], vec![1, 2]]);
    }

    #[test]
    fn no_vertices() {
        assert!(bron_kerbosch(&IdentityGraph::new(0)).is_empty());
    }

    fn tree(s: &str) -> GrctTree {
        GrctTree::from_bracketed(s).unwrap()
    }

    #[test]
    fn identity_graph_shapes() {
        let a = tree("(root (NOUN x))");
        let b = tree("(root (VERB x))");
        assert_eq!(
            identity_graph(&[a.clone(), a.clone(), b.clone()]).edges(),
            vec![(0, 1)]
        );
        assert!(identity_graph(&[a.clone(), b.clone()]).edges().is_empty());
        assert_eq!(identity_graph(&vec![a; 4]).edges().len(), 6);
    }

    #[test]
    fn fifty_identical_trees() {
        let a = tree("(root (NOUN x))");
        let set = cluster_batch(&vec![a; 50], &KernelParams::default()).unwrap();
        assert_eq!(set.sizes(), vec![50]);
        assert!(set.pairwise_ncptk.is_empty());
    }

    #[test]
    fn two_shapes() {
        let a = tree("(root (NOUN x) (det (DET y)))");
        let b = tree("(root (NOUN x) (amod (ADJ y)))");
        let mut trees = vec![a; 30];
        trees.extend(vec![b; 20]);
        // interleave to check ordering by smallest member
        trees.swap(0, 45);
        let set = cluster_batch(&trees, &KernelParams::default()).unwrap();
        assert_eq!(set.sizes(), vec![20, 30]);
        assert_eq!(set.representatives, vec![0, 1]);
        assert_eq!(set.pairwise_ncptk.len(), 1);
        let v = set.pairwise_ncptk[0].ncptk;
        assert!(v > 0.0 && v < 1.0 - 1e-9);
    }
}
