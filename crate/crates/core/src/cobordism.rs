//! Bipartite red/blue intersection graphs with group-word edge labels, their
//! covers over a coset action, the lifted sweepout and its constant, and the
//! token game that replays the stabilization count.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{parse_numbers, vertex_boundary, Graph, VertexSet};
use crate::groups::CosetAction;
use crate::sweepout::Sweepout;

/// Edge from red `red` to blue `blue` labelled by a generator word (empty
/// for the identity).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledEdge {
    pub red: usize,
    pub blue: usize,
    pub word: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionGraph {
    red_count: usize,
    blue_count: usize,
    edges: Vec<LabelledEdge>,
    max_degree: usize,
}

impl IntersectionGraph {
    pub fn new(red_count: usize, blue_count: usize, edges: Vec<LabelledEdge>) -> Result<Self> {
        let mut degree = vec![0usize; red_count + blue_count];
        for e in &edges {
            if e.red >= red_count {
                return Err(Error::VertexOutOfRange { vertex: e.red, count: red_count });
            }
            if e.blue >= blue_count {
                return Err(Error::VertexOutOfRange { vertex: e.blue, count: blue_count });
            }
            degree[e.red] += 1;
            degree[red_count + e.blue] += 1;
        }
        let max_degree = degree.into_iter().max().unwrap_or(0);
        Ok(IntersectionGraph { red_count, blue_count, edges, max_degree })
    }

    pub fn red_count(&self) -> usize {
        self.red_count
    }

    pub fn blue_count(&self) -> usize {
        self.blue_count
    }

    /// `|Γ_W|`, reds and blues together.
    pub fn vertex_count(&self) -> usize {
        self.red_count + self.blue_count
    }

    pub fn edges(&self) -> &[LabelledEdge] {
        &self.edges
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// `r b e`, then `red blue word` per edge; words are comma separated,
    /// `-` for the identity.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.red_count, self.blue_count, self.edges.len());
        for e in &self.edges {
            let word = if e.word.is_empty() { "-".to_string() } else { e.word.join(",") };
            let _ = writeln!(s, "{} {} {}", e.red, e.blue, word);
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let [r, b, e] = parse_numbers::<3>(header, line)?;
        let mut edges = Vec::with_capacity(e);
        for (line, l) in lines {
            let parts: Vec<&str> = l.split_whitespace().collect();
            if parts.len() != 3 {
                return Err(Error::Parse { line, msg: format!("expected `red blue word`, got `{l}`") });
            }
            let [red, blue] = parse_numbers::<2>(&format!("{} {}", parts[0], parts[1]), line)?;
            let word = if parts[2] == "-" { Vec::new() } else { parts[2].split(',').map(str::to_string).collect() };
            edges.push(LabelledEdge { red, blue, word });
        }
        if edges.len() != e {
            return Err(Error::Parse { line: 1, msg: format!("header promises {e} edges, found {}", edges.len()) });
        }
        IntersectionGraph::new(r, b, edges)
    }
}

/// A bipartite graph with its colouring; `blue[v]` marks blue vertices.
#[derive(Clone, Debug)]
pub struct Cover {
    pub graph: Graph,
    pub blue: Vec<bool>,
    pub coset_count: usize,
}

impl Cover {
    /// Vertex id of base vertex `v` (reds first, then blues) over coset `x`.
    pub fn vertex(&self, v: usize, x: usize) -> usize {
        v * self.coset_count + x
    }
}

/// Vertices `(v, x)`; an edge `(r, x) -- (b, word·x)` for every base edge and
/// coset `x`.
pub fn cover_graph(base: &IntersectionGraph, action: &CosetAction) -> Result<Cover> {
    let n = action.coset_count();
    let mut edges = Vec::with_capacity(base.edges.len() * n);
    for e in &base.edges {
        for x in 0..n {
            let y = action.act_word(&e.word, x)?;
            edges.push((e.red * n + x, (base.red_count + e.blue) * n + y));
        }
    }
    let graph = Graph::new(base.vertex_count() * n, edges)?;
    let blue = (0..base.vertex_count() * n).map(|id| id / n >= base.red_count).collect();
    Ok(Cover { graph, blue, coset_count: n })
}

/// `(c, p)`: the longest label word and the number of generators.
pub fn displacement_constant(base: &IntersectionGraph, action: &CosetAction) -> (usize, usize) {
    let c = base.edges.iter().map(|e| e.word.len()).max().unwrap_or(0);
    (c, action.generators().len())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverBoundData {
    pub p: usize,
    pub c: usize,
    /// `|Γ_W|·(p^c + 1)`.
    pub k_quasi: u128,
    /// Maximum degree of the cover.
    pub k: usize,
    /// Vertex width the budget was computed for.
    pub w: usize,
    /// `k²·w + k`.
    pub m_budget: u128,
}

pub fn cover_bound_data(base: &IntersectionGraph, action: &CosetAction, cover: &Cover, w: usize) -> CoverBoundData {
    let (c, p) = displacement_constant(base, action);
    let k_quasi = base.vertex_count() as u128 * ((p as u128).pow(c as u32) + 1);
    let k = cover.graph.max_degree();
    let budget = stabilization_budget(k, w);
    CoverBoundData { p, c, k_quasi, k, w, m_budget: budget.m }
}

/// Sweep the cover fiber by fiber in the order of a sweepout of the
/// cosets, each fiber in base order.
pub fn lifted_sweepout(base: &IntersectionGraph, cover: &Cover, s: &Sweepout) -> Result<Sweepout> {
    let n = cover.coset_count;
    if s.len() != n || s.order().iter().any(|&x| x >= n) {
        return Err(Error::NotASweepout(format!("expected an ordering of all {n} cosets")));
    }
    let order: Vec<usize> = s.order().iter().flat_map(|&x| (0..base.vertex_count()).map(move |v| v * n + x)).collect();
    Sweepout::new(&cover.graph, order)
}

/// `K·max(w, 1)` for the lifted vertex width, where `w` is the vertex width
/// of the coset sweepout.
pub fn lifted_bound(data: &CoverBoundData, coset_width: usize) -> u128 {
    data.k_quasi * coset_width.max(1) as u128
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StabilizationBudget {
    /// `k²·w + k`.
    pub m: u128,
    /// `k² + k`.
    pub constant: u128,
}

pub fn stabilization_budget(k: usize, w: usize) -> StabilizationBudget {
    let k = k as u128;
    StabilizationBudget { m: k * k * w as u128 + k, constant: k * k + k }
}

/// When attached tokens return to the pool.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReleasePolicy {
    /// Once the blue vertex leaves `∂₂F`.
    #[default]
    LeavingBoundary,
    /// Never.
    Never,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TokenStep {
    pub vertex: usize,
    pub blue: bool,
    pub free_before: u128,
    pub attached_after: u128,
    /// `|blue ∩ ∂₂F_{j+1}|`.
    pub blue_in_boundary: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TokenTrace {
    pub steps: Vec<TokenStep>,
    /// Index into the order of the first blue vertex that found fewer than
    /// `k` free tokens.
    pub failed_at: Option<usize>,
    pub max_attached: u128,
}

impl TokenTrace {
    pub fn success(&self) -> bool {
        self.failed_at.is_none()
    }
}

/// Replay the sweepout with `m` tokens. Adding a blue vertex needs `k`
/// free tokens and attaches `deg` of them; red vertices cost nothing.
/// Under [`ReleasePolicy::LeavingBoundary`] the count
/// `attached ≤ k·|blue ∩ ∂₂F| ≤ k²·w` is checked after every step.
pub fn token_game(
    graph: &Graph,
    blue: &[bool],
    s: &Sweepout,
    k: usize,
    m: u128,
    policy: ReleasePolicy,
) -> Result<TokenTrace> {
    let n = graph.vertex_count();
    if blue.len() != n {
        return Err(Error::UniverseMismatch { set: blue.len(), graph: n });
    }
    for &(u, v) in graph.edges() {
        if blue[u] == blue[v] {
            return Err(Error::NotBipartite(u, v));
        }
    }
    if k < graph.max_degree() {
        return Err(Error::Precondition(format!("k = {k} is below the maximum degree {}", graph.max_degree())));
    }
    if s.len() != n {
        return Err(Error::NotASweepout(format!("expected an ordering of all {n} vertices")));
    }
    let w = s.width_vertex() as u128;
    let k128 = k as u128;
    let mut attached = vec![0u128; n];
    let mut total = 0u128;
    let mut prefix = VertexSet::empty(n);
    let mut steps = Vec::with_capacity(n);
    let mut max_attached = 0;
    for (j, &v) in s.order().iter().enumerate() {
        let free_before = m.saturating_sub(total);
        prefix.insert(v);
        if blue[v] {
            if free_before < k128 {
                return Ok(TokenTrace { steps, failed_at: Some(j), max_attached });
            }
            attached[v] = graph.degree(v) as u128;
            total += attached[v];
        }
        let boundary = vertex_boundary(graph, &prefix, 2)?;
        if policy == ReleasePolicy::LeavingBoundary {
            for u in prefix.iter() {
                if attached[u] > 0 && !boundary.contains(u) {
                    total -= attached[u];
                    attached[u] = 0;
                }
            }
        }
        let blue_in_boundary = boundary.iter().filter(|&u| blue[u]).count();
        if policy == ReleasePolicy::LeavingBoundary && (total > k128 * blue_in_boundary as u128 || total > k128 * k128 * w) {
            return Err(Error::InvariantViolation(format!(
                "{total} tokens attached after step {j}, above k·|blue ∩ ∂₂F| = {} or k²·w = {}",
                k128 * blue_in_boundary as u128,
                k128 * k128 * w
            )));
        }
        max_attached = max_attached.max(total);
        steps.push(TokenStep { vertex: v, blue: blue[v], free_before, attached_after: total, blue_in_boundary });
    }
    Ok(TokenTrace { steps, failed_at: None, max_attached })
}
