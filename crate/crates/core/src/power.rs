//! The m-th power of a forest: adjacency between all vertex pairs at
//! forest distance 1..=m, precomputed once by truncated breadth-first
//! search so the game engine can query neighbourhoods cheaply.

use std::collections::VecDeque;

use crate::forest::Forest;

/// Precomputed power-graph adjacency over a base forest.
///
/// Immutable after construction and safe to share across threads.
#[derive(Debug, Clone)]
pub struct PowerView {
    base: Forest,
    radius: u32,
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

impl PowerView {
    /// Builds the power adjacency by running one BFS per vertex, truncated
    /// at depth `m`. Radius 0 yields the edgeless graph, radius 1 the base
    /// forest itself.
    pub fn build(base: Forest, m: u32) -> Self {
        let n = base.vertex_count();
        let mut adjacency = vec![Vec::new(); n];
        let mut dist = vec![u32::MAX; n];
        let mut touched = Vec::new();
        let mut queue = VecDeque::new();
        for v in 0..n {
            if m == 0 {
                break;
            }
            dist[v] = 0;
            touched.push(v);
            queue.push_back(v);
            while let Some(x) = queue.pop_front() {
                if dist[x] == m {
                    continue;
                }
                for &y in base.neighbours(x) {
                    if dist[y] == u32::MAX {
                        dist[y] = dist[x] + 1;
                        touched.push(y);
                        queue.push_back(y);
                        adjacency[v].push(y);
                    }
                }
            }
            adjacency[v].sort_unstable();
            for &t in &touched {
                dist[t] = u32::MAX;
            }
            touched.clear();
        }
        let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
        PowerView {
            base,
            radius: m,
            adjacency,
            edge_count,
        }
    }

    pub fn base(&self) -> &Forest {
        &self.base
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn vertex_count(&self) -> usize {
        self.base.vertex_count()
    }

    /// All vertices at base-forest distance 1..=radius from `v`, sorted.
    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn contains_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Maximum degree of the power graph.
    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Edge list of the power graph sorted by `(min, max)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (u, list) in self.adjacency.iter().enumerate() {
            for &v in list {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }
}
