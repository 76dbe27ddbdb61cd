//! Finite undirected multigraphs and the boundary primitives everything
//! else is built from.
//!
//! Loops are stored but inert: they never appear in boundaries, cuts,
//! gradients or degrees. Parallel edges count with multiplicity.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// An unordered edge as stored in the edge list.
pub type Edge = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
    max_degree: usize,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v) in &edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::VertexOutOfRange { vertex: w, count: vertex_count });
                }
            }
            if u != v {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        let max_degree = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Graph { vertex_count, edges, adjacency, max_degree })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Number of stored edges, loops included.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn min_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Non-loop neighbours of `v`, sorted, repeated once per parallel edge.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        reached == self.vertex_count
    }

    /// Serialize in the `n m` / `u v` text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.vertex_count, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parse the text format. Lines starting with `#` and blank lines are
    /// skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(Error::Parse { line: 0, msg: "empty input".into() })?;
        let [n, m] = parse_numbers::<2>(header, line)?;
        let mut edges = Vec::with_capacity(m);
        for (line, l) in lines {
            if edges.len() == m {
                return Err(Error::Parse { line, msg: format!("more than {m} edge lines") });
            }
            let [u, v] = parse_numbers::<2>(l, line)?;
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse { line: 0, msg: format!("expected {m} edges, found {}", edges.len()) });
        }
        Graph::new(n, edges)
    }

    pub(crate) fn check(&self, set: &VertexSet) -> Result<()> {
        if set.universe() != self.vertex_count {
            return Err(Error::UniverseMismatch { set: set.universe(), graph: self.vertex_count });
        }
        Ok(())
    }
}

pub(crate) fn parse_numbers<const N: usize>(text: &str, line: usize) -> Result<[usize; N]> {
    let mut out = [0usize; N];
    let mut fields = text.split_whitespace();
    for slot in out.iter_mut() {
        let field = fields
            .next()
            .ok_or_else(|| Error::Parse { line, msg: format!("expected {N} integers") })?;
        *slot = field
            .parse()
            .map_err(|_| Error::Parse { line, msg: format!("not a nonnegative integer: `{field}`") })?;
    }
    if fields.next().is_some() {
        return Err(Error::Parse { line, msg: format!("expected {N} integers") });
    }
    Ok(out)
}

/// A subset of the vertices of a graph with `universe` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexSet {
    members: Vec<bool>,
    len: usize,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet { members: vec![false; universe], len: 0 }
    }

    pub fn full(universe: usize) -> Self {
        VertexSet { members: vec![true; universe], len: universe }
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(universe: usize, vertices: I) -> Result<Self> {
        let mut set = VertexSet::empty(universe);
        for v in vertices {
            if v >= universe {
                return Err(Error::VertexOutOfRange { vertex: v, count: universe });
            }
            set.insert(v);
        }
        Ok(set)
    }

    pub fn universe(&self) -> usize {
        self.members.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.get(v).copied().unwrap_or(false)
    }

    /// Returns true if `v` was not already present.
    pub fn insert(&mut self, v: usize) -> bool {
        let fresh = !self.members[v];
        if fresh {
            self.members[v] = true;
            self.len += 1;
        }
        fresh
    }

    pub fn remove(&mut self, v: usize) -> bool {
        let present = self.members[v];
        if present {
            self.members[v] = false;
            self.len -= 1;
        }
        present
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().enumerate().filter_map(|(v, &m)| m.then_some(v))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn complement(&self) -> VertexSet {
        VertexSet {
            members: self.members.iter().map(|m| !m).collect(),
            len: self.members.len() - self.len,
        }
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.members.iter().zip(&other.members).all(|(a, b)| !(a & b))
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let members: Vec<bool> = self.members.iter().zip(&other.members).map(|(a, b)| a | b).collect();
        let len = members.iter().filter(|&&m| m).count();
        VertexSet { members, len }
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let members: Vec<bool> = self.members.iter().zip(&other.members).map(|(a, b)| *a && !b).collect();
        let len = members.iter().filter(|&&m| m).count();
        VertexSet { members, len }
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.members.iter().zip(&other.members).all(|(a, b)| !a || *b)
    }

    /// Lexicographic order of the sorted member lists.
    pub fn lex_cmp(&self, other: &VertexSet) -> Ordering {
        self.iter().cmp(other.iter())
    }

    pub(crate) fn as_slice(&self) -> &[bool] {
        &self.members
    }
}

/// Integer-valued function on the vertices of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexFunction(pub Vec<i64>);

impl VertexFunction {
    pub fn zeros(n: usize) -> Self {
        VertexFunction(vec![0; n])
    }

    pub fn characteristic(set: &VertexSet) -> Self {
        VertexFunction(set.as_slice().iter().map(|&m| i64::from(m)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn max(&self) -> Option<i64> {
        self.0.iter().copied().max()
    }
}

/// Non-loop edges with exactly one endpoint in `a`.
pub fn edge_boundary(g: &Graph, a: &VertexSet) -> Result<Vec<Edge>> {
    g.check(a)?;
    Ok(g.edges.iter().copied().filter(|&(u, v)| a.contains(u) != a.contains(v)).collect())
}

/// `|∂A|` without materializing the edges.
pub fn edge_boundary_size(g: &Graph, a: &VertexSet) -> Result<usize> {
    g.check(a)?;
    Ok(boundary_size_unchecked(g, a.as_slice()))
}

pub(crate) fn boundary_size_unchecked(g: &Graph, members: &[bool]) -> usize {
    members
        .iter()
        .enumerate()
        .filter(|(_, &m)| m)
        .map(|(v, _)| g.adjacency[v].iter().filter(|&&w| !members[w]).count())
        .sum()
}

/// Vertices of `a` within graph distance `radius` of the complement.
/// Radius 1 is the vertex boundary; radius 2 is the `∂₂` set.
pub fn vertex_boundary(g: &Graph, a: &VertexSet, radius: usize) -> Result<VertexSet> {
    g.check(a)?;
    if radius == 0 {
        return Err(Error::Precondition("radius must be at least 1".into()));
    }
    let n = g.vertex_count;
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for v in 0..n {
        if !a.contains(v) {
            dist[v] = 0;
            queue.push_back(v);
        }
    }
    while let Some(v) = queue.pop_front() {
        if dist[v] == radius {
            continue;
        }
        for &w in &g.adjacency[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    VertexSet::from_vertices(n, (0..n).filter(|&v| a.contains(v) && dist[v] <= radius))
}

/// Edges with one endpoint in each of two disjoint sets.
pub fn cut_set(g: &Graph, b1: &VertexSet, b2: &VertexSet) -> Result<Vec<Edge>> {
    g.check(b1)?;
    g.check(b2)?;
    if let Some(v) = b1.iter().find(|&v| b2.contains(v)) {
        return Err(Error::Overlap(v));
    }
    Ok(g
        .edges
        .iter()
        .copied()
        .filter(|&(u, v)| (b1.contains(u) && b2.contains(v)) || (b2.contains(u) && b1.contains(v)))
        .collect())
}

/// `Σ_e |f(v₂) − f(v₁)|` over non-loop edges.
pub fn gradient_total(g: &Graph, f: &VertexFunction) -> Result<u64> {
    if f.len() != g.vertex_count {
        return Err(Error::UniverseMismatch { set: f.len(), graph: g.vertex_count });
    }
    Ok(g.edges.iter().map(|&(u, v)| f.0[u].abs_diff(f.0[v])).sum())
}

/// `{v : f(v) ≥ λ}`.
pub fn superlevel(f: &VertexFunction, lambda: i64) -> VertexSet {
    let members: Vec<bool> = f.0.iter().map(|&x| x >= lambda).collect();
    let len = members.iter().filter(|&&m| m).count();
    VertexSet { members, len }
}
