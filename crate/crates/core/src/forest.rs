//! Forests: construction, validation, distances, generators, and
//! exhaustive enumeration of small bounded-degree labelled trees.
//!
//! Vertices are dense 0-based indices. Components are discovered by
//! traversal at construction time; component ids are assigned in order of
//! their smallest vertex.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Largest `n` accepted by [`enumerate_trees`].
pub const ENUMERATION_CAP: usize = 10;

/// A simple acyclic graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    adjacency: Vec<Vec<usize>>,
    component_id: Vec<usize>,
    components: Vec<Vec<usize>>,
}

impl Forest {
    /// Builds a forest from an edge list, rejecting self-loops, duplicate
    /// edges, out-of-range endpoints, and cycles.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        let mut normalized: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({u},{v}) out of range for n={n}"
                )));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if normalized.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("duplicate edge".into()));
        }
        for &(u, v) in &normalized {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        // Component discovery; edge count = n - #components iff acyclic
        // for a simple graph.
        let mut component_id = vec![usize::MAX; n];
        let mut components = Vec::new();
        for start in 0..n {
            if component_id[start] != usize::MAX {
                continue;
            }
            let cid = components.len();
            let mut members = Vec::new();
            let mut queue = VecDeque::from([start]);
            component_id[start] = cid;
            while let Some(x) = queue.pop_front() {
                members.push(x);
                for &y in &adjacency[x] {
                    if component_id[y] == usize::MAX {
                        component_id[y] = cid;
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        if normalized.len() != n - components.len() {
            return Err(Error::InvalidInput(format!(
                "graph is not acyclic: {} edges, {} vertices, {} components",
                normalized.len(),
                n,
                components.len()
            )));
        }
        Ok(Forest {
            adjacency,
            component_id,
            components,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn component_id(&self, v: usize) -> usize {
        self.component_id[v]
    }

    /// Member lists per component, each sorted ascending.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// Edge list sorted by `(min, max)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (u, list) in self.adjacency.iter().enumerate() {
            for &v in list {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Path length between `u` and `v`, or `None` when they lie in
    /// distinct components.
    pub fn distance(&self, u: usize, v: usize) -> Result<Option<u32>> {
        let n = self.vertex_count();
        if u >= n || v >= n {
            return Err(Error::InvalidInput(format!(
                "vertex index out of range (n={n})"
            )));
        }
        if self.component_id[u] != self.component_id[v] {
            return Ok(None);
        }
        if u == v {
            return Ok(Some(0));
        }
        let mut dist = vec![u32::MAX; n];
        dist[u] = 0;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adjacency[x] {
                if dist[y] == u32::MAX {
                    dist[y] = dist[x] + 1;
                    if y == v {
                        return Ok(Some(dist[y]));
                    }
                    queue.push_back(y);
                }
            }
        }
        unreachable!("same component but not reached");
    }

    /// Parses the text format: first non-comment line `n <count>`, then one
    /// `<u> <v>` edge per line; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: &str| {
                Error::InvalidInput(format!("line {}: {} ({:?})", lineno + 1, msg, raw))
            };
            let mut parts = line.split_whitespace();
            if n.is_none() {
                if parts.next() != Some("n") {
                    return Err(bad("expected header `n <vertex_count>`"));
                }
                let count = parts
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| bad("bad vertex count"))?;
                if parts.next().is_some() {
                    return Err(bad("trailing tokens after header"));
                }
                n = Some(count);
            } else {
                let u = parts
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| bad("bad edge endpoint"))?;
                let v = parts
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| bad("bad edge endpoint"))?;
                if parts.next().is_some() {
                    return Err(bad("trailing tokens after edge"));
                }
                edges.push((u, v));
            }
        }
        let n = n.ok_or_else(|| Error::InvalidInput("missing `n <vertex_count>` header".into()))?;
        Forest::from_edges(n, &edges)
    }

    /// Writes the text format; edges come out sorted by `(min, max)`.
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.vertex_count());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// The path `0-1-...-(n-1)`.
    pub fn path(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("path requires n >= 1".into()));
        }
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Forest::from_edges(n, &edges)
    }

    /// Rooted tree where the root (vertex 0) has `d` children and every
    /// other internal vertex has `d - 1` children, truncated at `n`
    /// vertices; vertices are numbered in breadth-first order.
    pub fn complete_dary(n: usize, d: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("complete_dary requires n >= 1".into()));
        }
        let mut edges = Vec::new();
        // (vertex, remaining child slots)
        let mut queue = VecDeque::from([(0usize, d)]);
        let mut next = 1usize;
        while next < n {
            let Some((parent, slots)) = queue.pop_front() else {
                return Err(Error::InvalidInput(format!(
                    "complete_dary with max_degree {d} cannot reach {n} vertices"
                )));
            };
            let take = slots.min(n - next);
            for _ in 0..take {
                edges.push((parent, next));
                queue.push_back((next, d.saturating_sub(1)));
                next += 1;
            }
        }
        Forest::from_edges(n, &edges)
    }

    /// Seeded random tree with maximum degree at most `max_degree`, built
    /// by rejection-free sequential attachment: vertex `i` attaches to a
    /// vertex drawn uniformly from those with residual degree.
    pub fn random_tree(n: usize, max_degree: usize, seed: u64) -> Result<Self> {
        check_degree_feasible(n, max_degree)?;
        let mut rng = SplitMix64::new(seed);
        let mut edges = Vec::with_capacity(n.saturating_sub(1));
        attach_random_tree(&mut rng, &mut edges, 0, n, max_degree);
        Forest::from_edges(n, &edges)
    }

    /// Seeded random forest: component sizes are drawn from the seed
    /// stream (each uniform in `1..=remaining`, clamped to 2 when
    /// `max_degree == 1`), then each component is built like
    /// [`Forest::random_tree`] from the same stream.
    pub fn random_forest(n: usize, max_degree: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("random_forest requires n >= 1".into()));
        }
        if n > 1 && max_degree < 1 {
            return Err(Error::InvalidInput(
                "max_degree < 1 cannot host any edge".into(),
            ));
        }
        let mut rng = SplitMix64::new(seed);
        let mut edges = Vec::new();
        let mut offset = 0;
        while offset < n {
            let remaining = n - offset;
            let mut size = 1 + rng.below(remaining as u64) as usize;
            if max_degree == 1 {
                size = size.min(2);
            }
            attach_random_tree(&mut rng, &mut edges, offset, size, max_degree);
            offset += size;
        }
        Forest::from_edges(n, &edges)
    }

    /// Dispatch entry point used by the CLI.
    pub fn generate(
        kind: GenKind,
        n: usize,
        max_degree: Option<usize>,
        seed: Option<u64>,
    ) -> Result<Self> {
        let need_degree = || {
            max_degree.ok_or_else(|| {
                Error::InvalidInput(format!("--max-degree is required for kind `{kind}`"))
            })
        };
        let need_seed = || {
            seed.ok_or_else(|| Error::InvalidInput(format!("--seed is required for kind `{kind}`")))
        };
        match kind {
            GenKind::Path => Forest::path(n),
            GenKind::CompleteDary => Forest::complete_dary(n, need_degree()?),
            GenKind::RandomTree => Forest::random_tree(n, need_degree()?, need_seed()?),
            GenKind::RandomForest => Forest::random_forest(n, need_degree()?, need_seed()?),
        }
    }
}

fn check_degree_feasible(n: usize, max_degree: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("tree requires n >= 1".into()));
    }
    if n > 1 && max_degree < 1 {
        return Err(Error::InvalidInput(
            "a tree with n >= 2 needs max_degree >= 1".into(),
        ));
    }
    if n > 2 && max_degree < 2 {
        return Err(Error::InvalidInput(
            "a tree with n >= 3 needs max_degree >= 2".into(),
        ));
    }
    Ok(())
}

/// Appends edges of a random tree on vertices `offset..offset+size`,
/// drawing attachment points from `rng`.
fn attach_random_tree(
    rng: &mut SplitMix64,
    edges: &mut Vec<(usize, usize)>,
    offset: usize,
    size: usize,
    max_degree: usize,
) {
    let mut degree = vec![0usize; size];
    // local indices with residual degree
    let mut attachable: Vec<usize> = if size > 1 { vec![0] } else { Vec::new() };
    for i in 1..size {
        let slot = rng.below(attachable.len() as u64) as usize;
        let j = attachable[slot];
        edges.push((offset + j, offset + i));
        degree[j] += 1;
        degree[i] += 1;
        if degree[j] == max_degree {
            attachable.swap_remove(slot);
        }
        if degree[i] < max_degree {
            attachable.push(i);
        }
    }
}

/// Generator kinds accepted by [`Forest::generate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Path,
    CompleteDary,
    RandomTree,
    RandomForest,
}

impl std::fmt::Display for GenKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            GenKind::Path => "path",
            GenKind::CompleteDary => "complete-dary",
            GenKind::RandomTree => "random-tree",
            GenKind::RandomForest => "random-forest",
        };
        f.write_str(name)
    }
}

impl FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "path" => Ok(GenKind::Path),
            "complete-dary" | "complete_dary" => Ok(GenKind::CompleteDary),
            "random-tree" | "random_tree" => Ok(GenKind::RandomTree),
            "random-forest" | "random_forest" => Ok(GenKind::RandomForest),
            other => Err(Error::InvalidInput(format!("unknown generator kind `{other}`"))),
        }
    }
}

/// Yields every labelled tree on `n` vertices with maximum degree at most
/// `max_degree`, exactly once, by walking all Prüfer sequences in
/// lexicographic order. Capped at [`ENUMERATION_CAP`] vertices.
pub fn enumerate_trees(n: usize, max_degree: usize) -> Result<TreeEnumerator> {
    if n == 0 {
        return Err(Error::InvalidInput("enumerate_trees requires n >= 1".into()));
    }
    if n > ENUMERATION_CAP {
        return Err(Error::InvalidInput(format!(
            "enumerate_trees is capped at n <= {ENUMERATION_CAP}, got {n}"
        )));
    }
    Ok(TreeEnumerator {
        n,
        max_degree,
        sequence: if n >= 3 { Some(vec![0; n - 2]) } else { None },
        emitted_small: false,
        done: false,
    })
}

pub struct TreeEnumerator {
    n: usize,
    max_degree: usize,
    /// Current Prüfer sequence (odometer), `None` for n < 3.
    sequence: Option<Vec<usize>>,
    emitted_small: bool,
    done: bool,
}

impl TreeEnumerator {
    fn advance(&mut self) -> bool {
        let seq = self.sequence.as_mut().expect("advance without sequence");
        for digit in seq.iter_mut().rev() {
            *digit += 1;
            if *digit < self.n {
                return true;
            }
            *digit = 0;
        }
        false
    }

    fn degree_ok(&self) -> bool {
        let seq = self.sequence.as_ref().unwrap();
        let mut count = vec![0usize; self.n];
        for &a in seq {
            count[a] += 1;
            // degree of a = count + 1
            if count[a] + 1 > self.max_degree {
                return false;
            }
        }
        true
    }

    fn decode(&self) -> Forest {
        let seq = self.sequence.as_ref().unwrap();
        let n = self.n;
        let mut degree = vec![1usize; n];
        for &a in seq {
            degree[a] += 1;
        }
        let mut used = vec![false; n];
        let mut edges = Vec::with_capacity(n - 1);
        for &a in seq {
            // smallest unused leaf
            let leaf = (0..n)
                .find(|&j| !used[j] && degree[j] == 1)
                .expect("a leaf always remains");
            edges.push((leaf, a));
            used[leaf] = true;
            degree[a] -= 1;
        }
        let mut last = (0..n).filter(|&j| !used[j] && degree[j] == 1);
        let (a, b) = (last.next().unwrap(), last.next().unwrap());
        edges.push((a, b));
        Forest::from_edges(n, &edges).expect("Prüfer decode always yields a tree")
    }
}

impl Iterator for TreeEnumerator {
    type Item = Forest;

    fn next(&mut self) -> Option<Forest> {
        if self.done {
            return None;
        }
        if self.n < 3 {
            // n=1: the single vertex; n=2: the single edge (if allowed).
            if self.emitted_small {
                self.done = true;
                return None;
            }
            self.emitted_small = true;
            if self.n == 2 && self.max_degree < 1 {
                self.done = true;
                return None;
            }
            let edges: &[(usize, usize)] = if self.n == 2 { &[(0, 1)] } else { &[] };
            return Some(Forest::from_edges(self.n, edges).unwrap());
        }
        loop {
            if self.degree_ok() {
                let tree = self.decode();
                if !self.advance() {
                    self.done = true;
                }
                return Some(tree);
            }
            if !self.advance() {
                self.done = true;
                return None;
            }
        }
    }
}
