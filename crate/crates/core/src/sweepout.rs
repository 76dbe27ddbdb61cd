//! Sweepouts (orderings of a vertex set read as nested prefixes), their
//! widths, the exact cutwidth by subset dynamic programming, the recursive
//! construction from bisections, and the series bound on its width.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::bisect::{bisect_by_bites, symmetry_group, SymmetryGroup};
use crate::error::{Error, Result};
use crate::folner::{profile_auto, ExactOptions, FolnerProfileTable, ProfileFunction};
use crate::graph::{cut_set, Graph, VertexSet};
use crate::groups::{make_family_capped, schreier_graph, FamilyKind, DEFAULT_COSET_CAP};

pub const CUTWIDTH_EXACT_CAP: usize = 20;

/// Boundary convention for widths.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Convention {
    /// `|E(F, A ∖ F)|`.
    #[default]
    Edge,
    /// Vertices of `F` adjacent to `A ∖ F`.
    Vertex,
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge" => Ok(Convention::Edge),
            "vertex" => Ok(Convention::Vertex),
            _ => Err(Error::Precondition(format!("unknown convention `{s}`"))),
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Edge => "edge",
            Convention::Vertex => "vertex",
        })
    }
}

/// An ordering of a vertex set `A`; prefix `j` is `F_j`. Boundaries are
/// taken inside `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sweepout {
    order: Vec<usize>,
    universe: usize,
    edge_widths: Vec<usize>,
    vertex_widths: Vec<usize>,
}

impl Sweepout {
    pub fn new(g: &Graph, order: Vec<usize>) -> Result<Self> {
        let n = g.vertex_count();
        let mut in_a = vec![false; n];
        for &v in &order {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, count: n });
            }
            if in_a[v] {
                return Err(Error::NotASweepout(format!("vertex {v} listed twice")));
            }
            in_a[v] = true;
        }
        let mut in_f = vec![false; n];
        // neighbours in A ∖ F, with multiplicity
        let mut outside: Vec<usize> =
            (0..n).map(|v| g.neighbors(v).iter().filter(|&&w| in_a[w]).count()).collect();
        let (mut cut, mut boundary) = (0usize, 0usize);
        let mut edge_widths = vec![0];
        let mut vertex_widths = vec![0];
        for &v in &order {
            let inside = g.neighbors(v).iter().filter(|&&w| in_f[w]).count();
            cut = cut + outside[v] - inside;
            in_f[v] = true;
            for &w in g.neighbors(v) {
                if in_a[w] {
                    outside[w] -= 1;
                    if in_f[w] && w != v && outside[w] == 0 {
                        boundary -= 1;
                    }
                }
            }
            if outside[v] > 0 {
                boundary += 1;
            }
            edge_widths.push(cut);
            vertex_widths.push(boundary);
        }
        Ok(Sweepout { order, universe: n, edge_widths, vertex_widths })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// The swept set `A`.
    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::from_vertices(self.universe, self.order.iter().copied()).expect("validated on construction")
    }

    /// Per-prefix widths for `j = 0..=|A|`.
    pub fn prefix_widths(&self, convention: Convention) -> &[usize] {
        match convention {
            Convention::Edge => &self.edge_widths,
            Convention::Vertex => &self.vertex_widths,
        }
    }

    pub fn width(&self, convention: Convention) -> usize {
        self.prefix_widths(convention).iter().copied().max().unwrap_or(0)
    }

    pub fn width_edge(&self) -> usize {
        self.width(Convention::Edge)
    }

    pub fn width_vertex(&self) -> usize {
        self.width(Convention::Vertex)
    }

    pub fn reversed(&self, g: &Graph) -> Sweepout {
        Sweepout::new(g, self.order.iter().rev().copied().collect()).expect("same vertices")
    }

    /// Single line of space-separated vertices.
    pub fn to_text(&self) -> String {
        let mut s = self.order.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
        s.push('\n');
        s
    }

    pub fn from_text(g: &Graph, text: &str) -> Result<Self> {
        let order = text
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|e| Error::Parse { line: 1, msg: format!("`{t}`: {e}") }))
            .collect::<Result<Vec<_>>>()?;
        Sweepout::new(g, order)
    }
}

/// Width recomputed prefix by prefix from the boundary primitives.
pub fn width(g: &Graph, s: &Sweepout, convention: Convention) -> Result<usize> {
    let a = s.vertex_set();
    g.check(&a)?;
    let mut prefix = VertexSet::empty(g.vertex_count());
    let mut best = 0;
    for &v in s.order() {
        prefix.insert(v);
        let rest = a.difference(&prefix);
        let w = match convention {
            Convention::Edge => cut_set(g, &prefix, &rest)?.len(),
            Convention::Vertex => prefix.iter().filter(|&u| g.neighbors(u).iter().any(|&x| rest.contains(x))).count(),
        };
        best = best.max(w);
    }
    Ok(best)
}

/// Exact cutwidth of the whole graph by dynamic programming over vertex
/// subsets, `best(S) = max(|E(S, V ∖ S)|, min_{v ∈ S} best(S ∖ v))`, with the
/// smallest last vertex winning ties.
pub fn cutwidth_exact(g: &Graph) -> Result<(usize, Sweepout)> {
    let n = g.vertex_count();
    if n > CUTWIDTH_EXACT_CAP {
        return Err(Error::SizeCap { size: n, cap: CUTWIDTH_EXACT_CAP });
    }
    let size = 1usize << n;
    let mut cut = vec![0u16; size];
    let mut best = vec![0u16; size];
    let mut last = vec![0u8; size];
    for mask in 1..size {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let inside = g.neighbors(low).iter().filter(|&&w| rest >> w & 1 == 1).count();
        cut[mask] = (cut[rest] as usize + g.degree(low) - 2 * inside) as u16;
        let mut choice = (u16::MAX, 0u8);
        let mut bits = mask;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let b = best[mask & !(1 << v)];
            if b < choice.0 {
                choice = (b, v as u8);
            }
        }
        best[mask] = choice.0.max(cut[mask]);
        last[mask] = choice.1;
    }
    let mut order = Vec::with_capacity(n);
    let mut mask = size - 1;
    while mask != 0 {
        let v = last[mask] as usize;
        order.push(v);
        mask &= !(1 << v);
    }
    order.reverse();
    let s = Sweepout::new(g, order)?;
    debug_assert_eq!(s.width_edge(), best[size - 1] as usize);
    Ok((best[size - 1] as usize, s))
}

/// Best ordering of at most a handful of vertices by trying every
/// permutation; the first optimal permutation in lexicographic order wins.
pub fn sweepout_exhaustive(g: &Graph, a: &VertexSet) -> Result<Sweepout> {
    g.check(a)?;
    let members = a.to_vec();
    if members.len() > 8 {
        return Err(Error::SizeCap { size: members.len(), cap: 8 });
    }
    let mut best: Option<Sweepout> = None;
    let mut perm = members;
    loop {
        let s = Sweepout::new(g, perm.clone())?;
        if best.as_ref().is_none_or(|b| s.width_edge() < b.width_edge()) {
            best = Some(s);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(best.unwrap_or(Sweepout::new(g, Vec::new())?))
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let Some(i) = (0..p.len() - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..p.len()).rev().find(|&j| p[j] > p[i]).expect("p[i+1] > p[i]");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Concatenate a sweepout of `B₁` and one of `B₂`, checking
/// `w ≤ |E(B₁, B₂)| + max(w₁, w₂)`.
pub fn assemble(g: &Graph, s1: &Sweepout, s2: &Sweepout) -> Result<Sweepout> {
    let b1 = s1.vertex_set();
    let b2 = s2.vertex_set();
    g.check(&b1)?;
    g.check(&b2)?;
    let cut = cut_set(g, &b1, &b2)?.len();
    let order: Vec<usize> = s1.order().iter().chain(s2.order()).copied().collect();
    let s = Sweepout::new(g, order)?;
    let limit = cut + s1.width_edge().max(s2.width_edge());
    if s.width_edge() > limit {
        return Err(Error::InvariantViolation(format!("assembled width {} exceeds {limit}", s.width_edge())));
    }
    Ok(s)
}

/// A sweepout built by recursive bisection.
#[derive(Clone, Debug)]
pub struct RecursiveSweepout {
    pub sweepout: Sweepout,
    /// Largest sum of bisection cuts along a root-to-leaf chain plus the
    /// leaf width; the recursion guarantees `width_edge ≤ chain_bound`.
    pub chain_bound: usize,
    /// Number of bisections performed.
    pub nodes: usize,
}

/// Bisect by bites, recurse on both halves in parallel and assemble,
/// choosing the child orientations that give the smallest width. Sets of at
/// most four vertices are ordered exhaustively.
pub fn sweepout_recursive(
    g: &Graph,
    a: &VertexSet,
    profile: &FolnerProfileTable,
    q: &SymmetryGroup,
) -> Result<RecursiveSweepout> {
    g.check(a)?;
    if a.len() <= 4 {
        let s = sweepout_exhaustive(g, a)?;
        let w = s.width_edge();
        return Ok(RecursiveSweepout { sweepout: s, chain_bound: w, nodes: 0 });
    }
    let split = bisect_by_bites(g, a, profile, q)?;
    let (left, right) = rayon::join(
        || sweepout_recursive(g, &split.b1, profile, q),
        || sweepout_recursive(g, &split.b2, profile, q),
    );
    let (left, right) = (left?, right?);
    let mut best: Option<Sweepout> = None;
    for s1 in [left.sweepout.clone(), left.sweepout.reversed(g)] {
        for s2 in [right.sweepout.clone(), right.sweepout.reversed(g)] {
            let s = assemble(g, &s1, &s2)?;
            if best.as_ref().is_none_or(|b| s.width_edge() < b.width_edge()) {
                best = Some(s);
            }
        }
    }
    let sweepout = best.expect("four candidates");
    let chain_bound = split.cut_size() + left.chain_bound.max(right.chain_bound);
    if sweepout.width_edge() > chain_bound {
        return Err(Error::InvariantViolation(format!(
            "width {} above chain bound {chain_bound}",
            sweepout.width_edge()
        )));
    }
    Ok(RecursiveSweepout { sweepout, chain_bound, nodes: 1 + left.nodes + right.nodes })
}

/// `6 + 2·Σ_{k ≥ 1} Φ((3/4)^k·|A|/4)·(3/4)^k·|A|`, summed while
/// `(3/4)^k·|A| ≥ 4`; smaller sets are covered by the constant.
pub fn folsw_bound(profile: &dyn ProfileFunction, size: usize) -> BigRational {
    let mut total = BigRational::zero();
    let three_quarters = BigRational::new(BigInt::from(3), BigInt::from(4));
    let four = BigRational::from_integer(BigInt::from(4));
    let mut x = BigRational::from_integer(BigInt::from(size)) * &three_quarters;
    while x >= four {
        total += profile.value_at(&(&x / &four)) * &x;
        x *= &three_quarters;
    }
    BigRational::from_integer(BigInt::from(6)) + total * BigRational::from_integer(BigInt::from(2))
}

/// Float value of an exact rational, for reports.
pub fn approx(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Growth exponent `1 − α` of the series bound for a profile decaying like
/// `V^{−α}`, meaningful for `0 < α ≤ 1`.
pub fn predicted_rate_exponent(alpha: f64) -> Result<f64> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(1.0 - alpha)
    } else {
        Err(Error::Precondition(format!("decay exponent {alpha} outside (0, 1]")))
    }
}

/// Options for the width reports.
#[derive(Clone, Debug)]
pub struct SeriesOptions {
    pub exact: ExactOptions,
    pub q_cap: usize,
    pub seed: u64,
    pub convention: Convention,
    pub coset_cap: usize,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions {
            exact: ExactOptions::default(),
            q_cap: crate::bisect::DEFAULT_Q_CAP,
            seed: 0,
            convention: Convention::Edge,
            coset_cap: DEFAULT_COSET_CAP,
        }
    }
}

/// Profile adequate for sweeping out the whole of a graph with `size`
/// vertices: witnesses up to `size/2`, exact through `3·size/16` where the
/// budget allows.
pub fn sweepout_profile(g: &Graph, q: &SymmetryGroup, opts: &SeriesOptions) -> Result<FolnerProfileTable> {
    let n = g.vertex_count();
    let exact = ExactOptions { anchor: q.is_transitive().then_some(0), ..opts.exact.clone() };
    profile_auto(g, (n / 2).max(1), 3 * n / 16, &exact, opts.seed)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesRow {
    pub size: usize,
    pub width_constructive: usize,
    pub width_over_size: f64,
    pub folsw_bound: BigRational,
    pub width_exact: Option<usize>,
}

/// Constructive widths of the full coset spaces of a family at each
/// parameter (the side length for tori).
pub fn subextensive_series(kind: FamilyKind, params: &[usize], opts: &SeriesOptions) -> Result<Vec<SeriesRow>> {
    params
        .iter()
        .map(|&n| {
            let action = make_family_capped(&kind.instantiate(n)?, opts.coset_cap)?;
            let g = schreier_graph(&action);
            let q = symmetry_group(&action, opts.q_cap, opts.seed);
            let profile = sweepout_profile(&g, &q, opts)?;
            let size = g.vertex_count();
            let rec = sweepout_recursive(&g, &VertexSet::full(size), &profile, &q)?;
            let w = rec.sweepout.width(opts.convention);
            let width_exact = if size <= CUTWIDTH_EXACT_CAP {
                let (value, s) = cutwidth_exact(&g)?;
                Some(if opts.convention == Convention::Edge { value } else { s.width(opts.convention) })
            } else {
                None
            };
            Ok(SeriesRow {
                size,
                width_constructive: w,
                width_over_size: w as f64 / size as f64,
                folsw_bound: folsw_bound(&profile, size),
                width_exact,
            })
        })
        .collect()
}

/// CSV with columns `size,width_constructive,width_over_size,folsw_bound,width_exact`.
pub fn write_series_csv<W: std::io::Write>(rows: &[SeriesRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().from_writer(out);
    w.write_record(["size", "width_constructive", "width_over_size", "folsw_bound", "width_exact"])?;
    for r in rows {
        w.write_record([
            r.size.to_string(),
            r.width_constructive.to_string(),
            format!("{:.6}", r.width_over_size),
            format!("{:.6}", approx(&r.folsw_bound)),
            r.width_exact.map(|v| v.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
