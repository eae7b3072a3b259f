//! Undirected simple graphs with BFS spanning trees and fundamental cycles.

use std::collections::VecDeque;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// An undirected edge traversed in a chosen direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DirEdge {
    pub edge: usize,
    /// `true` when traversed from `edges[edge][0]` to `edges[edge][1]`.
    pub forward: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Graph {
    n_vertices: usize,
    /// Each edge stored once with `a < b`.
    edges: Vec<[usize; 2]>,
    #[serde(skip)]
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    /// `edges` must be free of self-loops and duplicates; endpoints are normalized to `a < b`.
    pub fn new(n_vertices: usize, edges: Vec<[usize; 2]>) -> Self {
        let edges: Vec<[usize; 2]> = edges
            .into_iter()
            .map(|[a, b]| {
                assert!(a != b, "self-loop at vertex {a}");
                assert!(a < n_vertices && b < n_vertices, "edge endpoint out of range");
                [a.min(b), a.max(b)]
            })
            .collect();
        let mut adjacency = vec![Vec::new(); n_vertices];
        for (e, &[a, b]) in edges.iter().enumerate() {
            adjacency[a].push((b, e));
            adjacency[b].push((a, e));
        }
        for list in &mut adjacency {
            list.sort_unstable();
            debug_assert!(list.windows(2).all(|w| w[0].0 != w[1].0), "duplicate edge");
        }
        Self { n_vertices, edges, adjacency }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    /// `(neighbor, edge id)` pairs sorted by neighbor.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn tail(&self, d: DirEdge) -> usize {
        let [a, b] = self.edges[d.edge];
        if d.forward {
            a
        } else {
            b
        }
    }

    pub fn head(&self, d: DirEdge) -> usize {
        let [a, b] = self.edges[d.edge];
        if d.forward {
            b
        } else {
            a
        }
    }

    /// The directed edge from `from` to `to`, if adjacent.
    pub fn dir_edge(&self, from: usize, to: usize) -> Option<DirEdge> {
        let list = &self.adjacency[from];
        list.binary_search_by_key(&to, |&(n, _)| n)
            .ok()
            .map(|i| DirEdge { edge: list[i].1, forward: from < to })
    }

    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n_vertices];
        let mut next = 0;
        for start in 0..self.n_vertices {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &(w, _) in &self.adjacency[v] {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// BFS tree from `root`; vertices unreachable from `root` are left out.
    pub fn spanning_tree(&self, root: usize) -> SpanningTree {
        let mut parent = vec![None; self.n_vertices];
        let mut depth = vec![usize::MAX; self.n_vertices];
        let mut order = vec![root];
        let mut in_tree = vec![false; self.edges.len()];
        depth[root] = 0;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &(w, e) in &self.adjacency[v] {
                if depth[w] == usize::MAX {
                    depth[w] = depth[v] + 1;
                    parent[w] = Some(DirEdge { edge: e, forward: v < w });
                    in_tree[e] = true;
                    order.push(w);
                }
            }
        }
        SpanningTree { root, parent, depth, order, in_tree }
    }

    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let tree = self.spanning_tree(from);
        tree.path_from_root(self, to)
    }

    /// One closed walk at `tree.root` per non-tree edge `u → v`:
    /// root ⇝ u → v ⇝ root along the tree.
    pub fn fundamental_cycles(&self, tree: &SpanningTree) -> Vec<Vec<usize>> {
        let mut cycles = Vec::new();
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            if tree.in_tree[e] || !tree.contains(a) || !tree.contains(b) {
                continue;
            }
            let mut walk = tree.path_from_root(self, a).unwrap();
            let mut back = tree.path_from_root(self, b).unwrap();
            back.reverse();
            walk.extend(back);
            cycles.push(walk);
        }
        cycles
    }

    /// SHA-256 over the vertex count and edge list.
    pub fn structure_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.n_vertices as u64).to_le_bytes());
        for &[a, b] in &self.edges {
            h.update((a as u64).to_le_bytes());
            h.update((b as u64).to_le_bytes());
        }
        hex::encode(h.finalize())
    }
}

#[derive(Debug, Clone)]
pub struct SpanningTree {
    pub root: usize,
    /// Edge from the parent into each vertex.
    pub parent: Vec<Option<DirEdge>>,
    pub depth: Vec<usize>,
    /// BFS order; parents precede children.
    pub order: Vec<usize>,
    pub in_tree: Vec<bool>,
}

impl SpanningTree {
    pub fn contains(&self, v: usize) -> bool {
        self.depth[v] != usize::MAX
    }

    pub fn path_from_root(&self, graph: &Graph, v: usize) -> Option<Vec<usize>> {
        if !self.contains(v) {
            return None;
        }
        let mut path = vec![v];
        let mut cur = v;
        while let Some(d) = self.parent[cur] {
            cur = graph.tail(d);
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square_with_tail() -> Graph {
        // 0-1-2-3-0 square plus pendant 4 on vertex 2
        Graph::new(5, vec![[0, 1], [1, 2], [2, 3], [3, 0], [2, 4]])
    }

    #[test]
    fn dir_edges_and_orientation() {
        let g = square_with_tail();
        let d = g.dir_edge(3, 0).unwrap();
        assert_eq!(g.tail(d), 3);
        assert_eq!(g.head(d), 0);
        assert!(g.dir_edge(0, 2).is_none());
    }

    #[test]
    fn tree_and_cycles() {
        let g = square_with_tail();
        let tree = g.spanning_tree(0);
        assert_eq!(tree.in_tree.iter().filter(|&&t| t).count(), 4);
        let cycles = g.fundamental_cycles(&tree);
        assert_eq!(cycles.len(), g.n_edges() - g.n_vertices() + 1);
        for c in &cycles {
            assert_eq!(c.first(), c.last());
            assert_eq!(c[0], 0);
            for w in c.windows(2) {
                assert!(g.dir_edge(w[0], w[1]).is_some());
            }
        }
    }

    #[test]
    fn components_and_paths() {
        let g = Graph::new(4, vec![[0, 1], [2, 3]]);
        assert_eq!(g.component_count(), 2);
        assert!(g.shortest_path(0, 3).is_none());
        assert_eq!(square_with_tail().shortest_path(4, 0).unwrap().len(), 4);
    }
}
