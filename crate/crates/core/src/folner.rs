//! Folner profiles `Φ(V) = min_{0 < |A| ≤ V} |∂A| / |A|`: exact enumeration,
//! greedy upper bounds, the cube bound for ℤ^d, and the quotient
//! monotonicity check.

use std::io::Write;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{edge_boundary_size, superlevel, Graph, VertexFunction, VertexSet};
use crate::groups::{pushforward, schreier_graph, CosetMap, InfiniteFamily};

pub type Ratio = num_rational::Ratio<u64>;

pub const DEFAULT_SUBSET_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileKind {
    Exact,
    UpperBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileEntry {
    pub ratio: Ratio,
    pub witness: VertexSet,
}

/// `V ↦ (ratio, witness)` for `V = 1..=v_max`.
#[derive(Clone, Debug)]
pub struct FolnerProfileTable {
    entries: Vec<ProfileEntry>,
    kind: ProfileKind,
    exact_through: usize,
}

impl FolnerProfileTable {
    pub fn v_max(&self) -> usize {
        self.entries.len()
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    /// Largest `V` for which the entry is known to be the exact minimum.
    pub fn exact_through(&self) -> usize {
        self.exact_through
    }

    /// Entry at `V`, clamped into `1..=v_max`.
    pub fn entry(&self, v: usize) -> &ProfileEntry {
        &self.entries[v.clamp(1, self.entries.len()) - 1]
    }

    pub fn ratio(&self, v: usize) -> Ratio {
        self.entry(v).ratio
    }

    pub fn witness(&self, v: usize) -> &VertexSet {
        &self.entry(v).witness
    }

    pub fn entries(&self) -> &[ProfileEntry] {
        &self.entries
    }

    /// CSV with columns `V,ratio_num,ratio_den,witness`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().from_writer(out);
        w.write_record(["V", "ratio_num", "ratio_den", "witness"])?;
        for (i, e) in self.entries.iter().enumerate() {
            let witness = e.witness.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
            w.write_record([(i + 1).to_string(), e.ratio.numer().to_string(), e.ratio.denom().to_string(), witness])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Entrywise minimum of two tables over the same graph, re-made
    /// non-increasing. Entries up to `exact.exact_through()` stay exact.
    pub fn merge(exact: &FolnerProfileTable, upper: &FolnerProfileTable) -> FolnerProfileTable {
        let v_max = exact.v_max().max(upper.v_max());
        let mut best: Vec<Option<(usize, u64, u64, VertexSet)>> = vec![None; v_max + 1];
        for table in [exact, upper] {
            for e in &table.entries {
                let k = e.witness.len();
                let b = e.ratio * Ratio::from_integer(k as u64);
                let cand = (b.to_integer(), k as u64);
                let slot = &mut best[k.min(v_max)];
                let better = match slot {
                    None => true,
                    Some((_, sb, _, sw)) => cand.0 < *sb || (cand.0 == *sb && e.witness.lex_cmp(sw).is_lt()),
                };
                if better {
                    *slot = Some((k, cand.0, cand.1, e.witness.clone()));
                }
            }
        }
        let sized: Vec<Option<(usize, VertexSet)>> =
            best.into_iter().map(|s| s.map(|(_, b, _, w)| (b as usize, w))).collect();
        let entries = running_minimum(&sized, v_max).expect("merged tables have an entry at V = 1");
        let exact_through = exact.exact_through.min(v_max);
        let kind = if exact_through >= v_max { ProfileKind::Exact } else { ProfileKind::UpperBound };
        FolnerProfileTable { entries, kind, exact_through }
    }
}

/// A profile evaluated at real arguments.
pub trait ProfileFunction: Sync {
    /// `Φ(V)`. Arguments below 1 clamp to 1.
    fn value_at(&self, v: &BigRational) -> BigRational;
}

impl ProfileFunction for FolnerProfileTable {
    /// Sets have integer size, so `Φ(V) = Φ(⌊V⌋)`; past `v_max` the last
    /// entry is an upper bound.
    fn value_at(&self, v: &BigRational) -> BigRational {
        let floor = v.floor().to_integer();
        let idx = if floor < BigInt::one() {
            1
        } else {
            usize::try_from(&floor).unwrap_or(usize::MAX).min(self.v_max())
        };
        let r = self.ratio(idx);
        BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
    }
}

/// The cube bound `2d·⌈V^{1/d}⌉^{d−1} / V` for ℤ^d, witnessed by the first
/// `V` points of the cube in lexicographic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalyticProfile {
    pub dim: usize,
}

pub fn analytic_profile(family: InfiniteFamily) -> Result<AnalyticProfile> {
    match family {
        InfiniteFamily::Lattice(dim) => Ok(AnalyticProfile { dim }),
        other => Err(Error::InvalidFamily(format!("no analytic profile for {other}"))),
    }
}

impl AnalyticProfile {
    /// Smallest integer `s` with `s^d ≥ v`.
    fn ceil_root(&self, v: &BigRational) -> BigInt {
        let target = v.ceil().to_integer();
        let d = self.dim as u32;
        let mut lo = BigInt::one();
        let mut hi = BigInt::one();
        while num_traits::pow(hi.clone(), d as usize) < target {
            hi *= 2;
        }
        while lo < hi {
            let mid: BigInt = (&lo + &hi) / 2;
            if num_traits::pow(mid.clone(), d as usize) >= target {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    }
}

impl ProfileFunction for AnalyticProfile {
    /// Evaluated at `⌊V⌋`, since `Φ(V) = Φ(⌊V⌋)` and the cube bound is only
    /// attained at integer volumes.
    fn value_at(&self, v: &BigRational) -> BigRational {
        let v = if *v < BigRational::one() { BigRational::one() } else { v.floor() };
        let side = self.ceil_root(&v);
        let face = num_traits::pow(side, self.dim - 1);
        BigRational::from_integer(BigInt::from(2 * self.dim) * face) / v
    }
}

/// Options for exact enumeration.
#[derive(Clone, Debug)]
pub struct ExactOptions {
    /// Maximum number of connected sets visited.
    pub budget: u64,
    /// Only enumerate sets containing this vertex. Correct for
    /// vertex-transitive graphs; with anchor 0 the witnesses also match the
    /// unanchored lexicographic tie-break.
    pub anchor: Option<usize>,
    /// Only enumerate subsets of this set.
    pub within: Option<VertexSet>,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { budget: DEFAULT_SUBSET_BUDGET, anchor: None, within: None }
    }
}

/// Exact profile with default options.
pub fn profile_exact(g: &Graph, v_max: usize) -> Result<FolnerProfileTable> {
    profile_exact_with(g, v_max, &ExactOptions::default())
}

/// Exact profile by enumerating connected vertex sets of size at most
/// `v_max`. Restricting to connected sets loses nothing: a disconnected
/// minimizer has a component with no larger ratio and smaller size, and
/// that component wins the size tie-break.
pub fn profile_exact_with(g: &Graph, v_max: usize, opts: &ExactOptions) -> Result<FolnerProfileTable> {
    if v_max == 0 {
        return Err(Error::Precondition("v_max must be positive".into()));
    }
    let n = g.vertex_count();
    if let Some(w) = &opts.within {
        g.check(w)?;
    }
    let allowed_base: Vec<bool> = match &opts.within {
        Some(w) => (0..n).map(|v| w.contains(v)).collect(),
        None => vec![true; n],
    };
    let roots: Vec<usize> = match opts.anchor {
        Some(a) => {
            if a >= n || !allowed_base[a] {
                return Err(Error::Precondition(format!("anchor {a} is not an allowed vertex")));
            }
            vec![a]
        }
        None => (0..n).filter(|&v| allowed_base[v]).collect(),
    };
    let depth = v_max.min(n);
    let visits = AtomicU64::new(0);
    let abort = AtomicBool::new(false);
    let per_root: Vec<Vec<Option<(usize, Vec<usize>)>>> = roots
        .par_iter()
        .map(|&root| {
            let allowed: Vec<bool> = match opts.anchor {
                Some(_) => allowed_base.clone(),
                None => (0..n).map(|v| allowed_base[v] && v >= root).collect(),
            };
            let mut e = Enumerator {
                g,
                depth,
                allowed,
                in_set: vec![false; n],
                marked: vec![false; n],
                members: Vec::with_capacity(depth),
                boundary: 0,
                best: vec![None; depth + 1],
                visits: &visits,
                abort: &abort,
                budget: opts.budget,
            };
            e.marked[root] = true;
            e.recurse(vec![root]);
            e.best
        })
        .collect();
    if abort.load(AtomicOrdering::Relaxed) {
        return Err(Error::BudgetExceeded { budget: opts.budget });
    }
    let mut best: Vec<Option<(usize, Vec<usize>)>> = vec![None; depth + 1];
    for root_best in per_root {
        for (k, cand) in root_best.into_iter().enumerate() {
            if let Some((b, members)) = cand {
                if better_same_size(b, &members, &best[k]) {
                    best[k] = Some((b, members));
                }
            }
        }
    }
    let sized: Vec<Option<(usize, VertexSet)>> = best
        .into_iter()
        .map(|c| c.map(|(b, m)| (b, VertexSet::from_vertices(n, m).expect("enumerated vertices are in range"))))
        .collect();
    let entries = running_minimum(&sized, v_max)
        .ok_or_else(|| Error::Precondition("no nonempty subset to minimize over".into()))?;
    Ok(FolnerProfileTable { entries, kind: ProfileKind::Exact, exact_through: v_max })
}

fn better_same_size(b: usize, members: &[usize], current: &Option<(usize, Vec<usize>)>) -> bool {
    match current {
        None => true,
        Some((cb, cm)) => b < *cb || (b == *cb && members < cm.as_slice()),
    }
}

/// Turn per-size minima (`sized[k] = (|∂A|, A)` with `|A| = k`) into the
/// profile table: strict improvements only, so ties keep the smaller set.
fn running_minimum(sized: &[Option<(usize, VertexSet)>], v_max: usize) -> Option<Vec<ProfileEntry>> {
    let mut entries = Vec::with_capacity(v_max);
    let mut current: Option<(usize, usize, &VertexSet)> = None;
    for v in 1..=v_max {
        if let Some(Some((b, w))) = sized.get(v) {
            let k = w.len();
            let improves = match current {
                None => true,
                Some((cb, ck, _)) => (*b as u128) * (ck as u128) < (cb as u128) * (k as u128),
            };
            if improves {
                current = Some((*b, k, w));
            }
        }
        let (b, k, w) = current?;
        entries.push(ProfileEntry { ratio: Ratio::new(b as u64, k as u64), witness: w.clone() });
    }
    Some(entries)
}

/// Redelmeier-style enumeration of connected sets containing a root, each
/// visited once.
struct Enumerator<'a> {
    g: &'a Graph,
    depth: usize,
    allowed: Vec<bool>,
    in_set: Vec<bool>,
    marked: Vec<bool>,
    members: Vec<usize>,
    boundary: usize,
    best: Vec<Option<(usize, Vec<usize>)>>,
    visits: &'a AtomicU64,
    abort: &'a AtomicBool,
    budget: u64,
}

impl Enumerator<'_> {
    fn recurse(&mut self, mut untried: Vec<usize>) {
        while let Some(v) = untried.pop() {
            if self.abort.load(AtomicOrdering::Relaxed) {
                return;
            }
            if self.visits.fetch_add(1, AtomicOrdering::Relaxed) >= self.budget {
                self.abort.store(true, AtomicOrdering::Relaxed);
                return;
            }
            let inside = self.g.neighbors(v).iter().filter(|&&w| self.in_set[w]).count();
            self.boundary = self.boundary + self.g.degree(v) - 2 * inside;
            self.in_set[v] = true;
            self.members.push(v);
            self.visit();
            if self.members.len() < self.depth {
                let mut fresh = Vec::new();
                for &w in self.g.neighbors(v) {
                    if self.allowed[w] && !self.marked[w] {
                        self.marked[w] = true;
                        fresh.push(w);
                    }
                }
                let mut next = untried.clone();
                next.extend_from_slice(&fresh);
                self.recurse(next);
                for w in fresh {
                    self.marked[w] = false;
                }
            }
            self.members.pop();
            self.in_set[v] = false;
            self.boundary = self.boundary + 2 * inside - self.g.degree(v);
        }
    }

    fn visit(&mut self) {
        let k = self.members.len();
        let improves = match &self.best[k] {
            None => true,
            Some((b, _)) => self.boundary <= *b,
        };
        if improves {
            let mut sorted = self.members.clone();
            sorted.sort_unstable();
            if better_same_size(self.boundary, &sorted, &self.best[k]) {
                self.best[k] = Some((self.boundary, sorted));
            }
        }
    }
}

/// Greedy upper-bound profile: grow a set from every start vertex, always
/// adding the frontier vertex with the most neighbours inside (seeded random
/// tie-break), then run a single-vertex add/remove descent on the best set
/// of each size.
pub fn profile_heuristic(g: &Graph, v_max: usize, seed: u64) -> Result<FolnerProfileTable> {
    if v_max == 0 {
        return Err(Error::Precondition("v_max must be positive".into()));
    }
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::Precondition("empty graph".into()));
    }
    let depth = v_max.min(n);
    let growths: Vec<(Vec<usize>, Vec<usize>)> = (0..n)
        .into_par_iter()
        .map(|start| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (start as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let priority: Vec<u64> = (0..n).map(|_| rng.random()).collect();
            grow(g, start, &priority, depth)
        })
        .collect();

    let mut best: Vec<Option<(usize, Vec<usize>)>> = vec![None; depth + 1];
    for (order, boundaries) in &growths {
        for k in 1..=order.len() {
            let b = boundaries[k - 1];
            let worth = match &best[k] {
                None => true,
                Some((cb, _)) => b <= *cb,
            };
            if worth {
                let mut members = order[..k].to_vec();
                members.sort_unstable();
                if better_same_size(b, &members, &best[k]) {
                    best[k] = Some((b, members));
                }
            }
        }
    }

    let descended: Vec<(usize, Vec<usize>)> = best
        .par_iter()
        .flatten()
        .map(|(b, members)| descend(g, members, *b, depth))
        .collect();
    for (b, members) in descended {
        let k = members.len();
        if better_same_size(b, &members, &best[k]) {
            best[k] = Some((b, members));
        }
    }

    let sized: Vec<Option<(usize, VertexSet)>> = best
        .into_iter()
        .map(|c| c.map(|(b, m)| (b, VertexSet::from_vertices(n, m).expect("vertices in range"))))
        .collect();
    let entries = running_minimum(&sized, v_max).expect("every start yields a singleton");
    Ok(FolnerProfileTable { entries, kind: ProfileKind::UpperBound, exact_through: 0 })
}

fn grow(g: &Graph, start: usize, priority: &[u64], limit: usize) -> (Vec<usize>, Vec<usize>) {
    use std::collections::BinaryHeap;
    let n = g.vertex_count();
    let mut inside = vec![0usize; n];
    let mut in_set = vec![false; n];
    let mut heap = BinaryHeap::from([(0usize, priority[start], start)]);
    let mut order = Vec::with_capacity(limit);
    let mut boundaries = Vec::with_capacity(limit);
    let mut boundary = 0usize;
    while order.len() < limit {
        let Some((count, _, v)) = heap.pop() else { break };
        if in_set[v] || count != inside[v] {
            continue;
        }
        in_set[v] = true;
        boundary = boundary + g.degree(v) - 2 * inside[v];
        order.push(v);
        boundaries.push(boundary);
        for &w in g.neighbors(v) {
            if !in_set[w] {
                inside[w] += 1;
                heap.push((inside[w], priority[w], w));
            }
        }
    }
    (order, boundaries)
}

/// Best-improvement descent over single-vertex additions and removals,
/// keeping the size within `1..=limit`.
fn descend(g: &Graph, members: &[usize], boundary: usize, limit: usize) -> (usize, Vec<usize>) {
    let n = g.vertex_count();
    let mut in_set = vec![false; n];
    for &v in members {
        in_set[v] = true;
    }
    let mut inside = vec![0usize; n];
    for &v in members {
        for &w in g.neighbors(v) {
            inside[w] += 1;
        }
    }
    let mut size = members.len();
    let mut b = boundary;
    for _ in 0..4 * limit.max(1) {
        // candidate (new boundary, new size, vertex); compare ratios exactly
        let mut best: Option<(usize, usize, usize)> = None;
        let mut consider = |nb: usize, ns: usize, v: usize| {
            let better = match best {
                None => nb * size < b * ns,
                Some((bb, bs, _)) => nb * bs < bb * ns,
            };
            if better {
                best = Some((nb, ns, v));
            }
        };
        for v in 0..n {
            if in_set[v] {
                if size > 1 {
                    consider(b + 2 * inside[v] - g.degree(v), size - 1, v);
                }
            } else if inside[v] > 0 && size < limit {
                consider(b + g.degree(v) - 2 * inside[v], size + 1, v);
            }
        }
        let Some((nb, ns, v)) = best else { break };
        in_set[v] = !in_set[v];
        for &w in g.neighbors(v) {
            if in_set[v] {
                inside[w] += 1;
            } else {
                inside[w] -= 1;
            }
        }
        b = nb;
        size = ns;
    }
    (b, (0..n).filter(|&v| in_set[v]).collect())
}

/// Exact where the budget allows, greedy elsewhere. Exact entries are
/// computed for `V ≤ exact_target` as far as `opts.budget` reaches.
pub fn profile_auto(
    g: &Graph,
    v_max: usize,
    exact_target: usize,
    opts: &ExactOptions,
    seed: u64,
) -> Result<FolnerProfileTable> {
    let upper = profile_heuristic(g, v_max, seed)?;
    let mut exact: Option<FolnerProfileTable> = None;
    for v in 1..=exact_target.min(v_max) {
        match profile_exact_with(g, v, opts) {
            Ok(t) => exact = Some(t),
            Err(Error::BudgetExceeded { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    Ok(match exact {
        Some(e) => FolnerProfileTable::merge(&e, &upper),
        None => upper,
    })
}

/// One row of the quotient monotonicity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneRow {
    pub v: usize,
    pub source: Ratio,
    pub target: Ratio,
    /// Super-level threshold found by scanning `λ = 1, 2, …`.
    pub lambda: i64,
    /// `|∂A′|` and `|A′|` of the reconstructed target set.
    pub rebuilt_boundary: usize,
    pub rebuilt_size: usize,
}

/// Verify `Φ_target(V) ≤ Φ_source(V)` for `V ≤ v_max` and rebuild each
/// target witness from the pushforward of the source witness.
pub fn check_quotient_monotone(map: &CosetMap, v_max: usize, opts: &ExactOptions) -> Result<Vec<MonotoneRow>> {
    let gs = schreier_graph(map.source());
    let gt = schreier_graph(map.target());
    let source = profile_exact_with(&gs, v_max, opts)?;
    let target_opts = ExactOptions { within: None, ..opts.clone() };
    let target = profile_exact_with(&gt, v_max, &target_opts)?;
    let mut rows = Vec::with_capacity(v_max);
    for v in 1..=v_max {
        let (ps, pt) = (source.ratio(v), target.ratio(v));
        if pt > ps {
            return Err(Error::InvariantViolation(format!("Φ_target({v}) = {pt} > Φ_source({v}) = {ps}")));
        }
        let a = source.witness(v);
        let a_boundary = edge_boundary_size(&gs, a)?;
        let pushed = pushforward(map, &VertexFunction::characteristic(a))?;
        let top = pushed.max().unwrap_or(0);
        let mut found = None;
        for lambda in 1..=top {
            let level = superlevel(&pushed, lambda);
            let lb = edge_boundary_size(&gt, &level)?;
            if !level.is_empty() && lb * a.len() <= a_boundary * level.len() {
                found = Some((lambda, lb, level.len()));
                break;
            }
        }
        let (lambda, lb, ls) = found.ok_or_else(|| {
            Error::InvariantViolation(format!("no qualifying super-level set at V = {v}"))
        })?;
        if ls > v || Ratio::new(lb as u64, ls as u64) < pt {
            return Err(Error::InvariantViolation(format!("rebuilt set at V = {v} contradicts the target profile")));
        }
        rows.push(MonotoneRow { v, source: ps, target: pt, lambda, rebuilt_boundary: lb, rebuilt_size: ls });
    }
    Ok(rows)
}

/// Convert an exact ratio to a big rational.
pub fn to_big(r: Ratio) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// `true` if `r` is zero.
pub fn is_zero(r: &BigRational) -> bool {
    r.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::groups::{cayley_ball, make_family, quotient_cosets, Family};
    use std::collections::HashSet;

    fn r(n: u64, d: u64) -> Ratio {
        Ratio::new(n, d)
    }

    // Independent oracle: all nonempty subsets by bitmask.
    fn brute_profile(g: &Graph, v_max: usize) -> Vec<Ratio> {
        let n = g.vertex_count();
        let mut best_by_size = vec![None::<usize>; n + 1];
        for mask in 1u32..(1 << n) {
            let k = mask.count_ones() as usize;
            let set = VertexSet::from_vertices(n, (0..n).filter(|&v| mask >> v & 1 == 1)).unwrap();
            let b = edge_boundary_size(g, &set).unwrap();
            best_by_size[k] = Some(best_by_size[k].map_or(b, |c: usize| c.min(b)));
        }
        let mut out = Vec::new();
        let mut cur: Option<Ratio> = None;
        for v in 1..=v_max {
            if let Some(Some(b)) = best_by_size.get(v) {
                let rv = r(*b as u64, v as u64);
                cur = Some(cur.map_or(rv, |c| c.min(rv)));
            }
            out.push(cur.unwrap());
        }
        out
    }

    #[test]
    fn cycle_profile() {
        let t = profile_exact(&cycle(6), 6).unwrap();
        assert_eq!(t.ratio(1), r(2, 1));
        assert_eq!(t.ratio(2), r(1, 1));
        assert_eq!(t.ratio(3), r(2, 3));
        assert_eq!(t.ratio(6), r(0, 1));
        assert_eq!(t.witness(3).to_vec(), vec![0, 1, 2]);
        assert_eq!(t.witness(1).to_vec(), vec![0]);
        let ratios: Vec<_> = t.entries().iter().map(|e| e.ratio).collect();
        assert_eq!(ratios, brute_profile(&cycle(6), 6));
    }

    #[test]
    fn single_vertex() {
        let g = Graph::new(1, vec![]).unwrap();
        assert_eq!(profile_exact(&g, 1).unwrap().ratio(1), r(0, 1));
    }

    #[test]
    fn torus_block() {
        let a = make_family(&Family::Torus { dim: 2, n: 4 }).unwrap();
        let g = schreier_graph(&a);
        let t = profile_exact(&g, 4).unwrap();
        assert_eq!(t.ratio(4), r(2, 1));
        let w = t.witness(4);
        assert_eq!(edge_boundary_size(&g, w).unwrap(), 8);
        let anchored = profile_exact_with(&g, 8, &ExactOptions { anchor: Some(0), ..Default::default() }).unwrap();
        let free = profile_exact(&g, 8).unwrap();
        for v in 1..=8 {
            assert_eq!(anchored.ratio(v), free.ratio(v));
            assert_eq!(anchored.witness(v), free.witness(v));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = grid(6, 6);
        let err = profile_exact_with(&g, 10, &ExactOptions { budget: 1000, ..Default::default() });
        assert!(matches!(err, Err(Error::BudgetExceeded { budget: 1000 })));
    }

    #[test]
    fn heuristic_on_cycle_is_exact() {
        for seed in 0..5 {
            let h = profile_heuristic(&cycle(6), 6, seed).unwrap();
            let e = profile_exact(&cycle(6), 6).unwrap();
            for v in 1..=6 {
                assert_eq!(h.ratio(v), e.ratio(v));
            }
            assert_eq!(h.kind(), ProfileKind::UpperBound);
        }
    }

    #[test]
    fn heuristic_large_torus() {
        let g = schreier_graph(&make_family(&Family::Torus { dim: 2, n: 16 }).unwrap());
        let h = profile_heuristic(&g, 64, 0).unwrap();
        assert!(h.ratio(64) <= r(1, 1));
        let w = h.witness(64);
        assert!(w.len() <= 64);
        assert_eq!(r(edge_boundary_size(&g, w).unwrap() as u64, w.len() as u64), h.ratio(64));
    }

    #[test]
    fn heuristic_is_deterministic() {
        let g = schreier_graph(&make_family(&Family::Heisenberg(3)).unwrap());
        let a = profile_heuristic(&g, 13, 42).unwrap();
        let b = profile_heuristic(&g, 13, 42).unwrap();
        assert_eq!(a.entries(), b.entries());
    }

    #[test]
    fn heuristic_dominates_exact_on_small_graphs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..200 {
            let n = rng.random_range(2..=12);
            let m = rng.random_range(n - 1..=3 * n);
            // random spanning path keeps the graph connected
            let mut edges: Vec<_> = (1..n).map(|v| (rng.random_range(0..v), v)).collect();
            while edges.len() < m {
                edges.push((rng.random_range(0..n), rng.random_range(0..n)));
            }
            let g = Graph::new(n, edges).unwrap();
            let e = profile_exact(&g, n).unwrap();
            let h = profile_heuristic(&g, n, trial).unwrap();
            let oracle = brute_profile(&g, n);
            for v in 1..=n {
                assert_eq!(e.ratio(v), oracle[v - 1]);
                assert!(h.ratio(v) >= e.ratio(v));
            }
        }
    }

    #[test]
    fn table_invariants() {
        for fam in [Family::Cyclic(9), Family::Dihedral(5), Family::Lamplighter(2), Family::Heisenberg(2)] {
            let g = schreier_graph(&make_family(&fam).unwrap());
            let n = g.vertex_count();
            for t in [profile_exact(&g, n).unwrap(), profile_heuristic(&g, n, 1).unwrap()] {
                for v in 1..=n {
                    if v > 1 {
                        assert!(t.ratio(v) <= t.ratio(v - 1));
                    }
                    let w = t.witness(v);
                    assert!(!w.is_empty() && w.len() <= v);
                    assert_eq!(r(edge_boundary_size(&g, w).unwrap() as u64, w.len() as u64), t.ratio(v));
                }
                assert_eq!(t.ratio(n), r(0, 1));
            }
        }
    }

    #[test]
    fn csv_output() {
        let t = profile_exact(&cycle(6), 3).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "V,ratio_num,ratio_den,witness\n1,2,1,0\n2,1,1,0 1\n3,2,3,0 1 2\n"
        );
    }

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn analytic_values() {
        let z1 = analytic_profile(InfiniteFamily::Lattice(1)).unwrap();
        assert_eq!(z1.value_at(&big(10, 1)), big(1, 5));
        let z2 = analytic_profile(InfiniteFamily::Lattice(2)).unwrap();
        // a 4×4 square has 16 boundary edges
        assert_eq!(z2.value_at(&big(16, 1)), big(1, 1));
        assert_eq!(z2.value_at(&big(1, 2)), big(4, 1));
        assert!(analytic_profile(InfiniteFamily::Heisenberg).is_err());
    }

    // Ratio of the first V points of the cube [0, s)^d in lexicographic
    // order, s minimal with s^d ≥ V, counted directly in ℤ^d.
    fn lex_prefix_ratio(d: usize, v: usize) -> BigRational {
        let mut s = 1usize;
        while s.pow(d as u32) < v {
            s += 1;
        }
        let points: Vec<Vec<i64>> = (0..v)
            .map(|mut i| {
                let mut p = vec![0i64; d];
                for c in (0..d).rev() {
                    p[c] = (i % s) as i64;
                    i /= s;
                }
                p
            })
            .collect();
        let set: HashSet<Vec<i64>> = points.iter().cloned().collect();
        let mut boundary = 0i64;
        for p in &points {
            for c in 0..d {
                for delta in [-1, 1] {
                    let mut q = p.clone();
                    q[c] += delta;
                    if !set.contains(&q) {
                        boundary += 1;
                    }
                }
            }
        }
        big(boundary, v as i64)
    }

    #[test]
    fn analytic_is_certified_by_lex_prefixes() {
        for d in 1..=3 {
            let p = AnalyticProfile { dim: d };
            for v in 1..=150usize {
                assert!(p.value_at(&big(v as i64, 1)) >= lex_prefix_ratio(d, v), "d={d} V={v}");
            }
        }
        let p = AnalyticProfile { dim: 2 };
        assert_eq!(p.value_at(&big(29, 2)), p.value_at(&big(14, 1)));
    }

    #[test]
    fn analytic_dominates_ball_profile() {
        // connected sets of size ≤ 10 through the origin fit in a radius-11 ball
        let ball = cayley_ball(InfiniteFamily::Lattice(2), 11, 100_000).unwrap();
        let opts = ExactOptions { anchor: Some(0), within: Some(ball.interior.clone()), budget: 50_000_000 };
        let t = profile_exact_with(&ball.graph, 10, &opts).unwrap();
        let p = AnalyticProfile { dim: 2 };
        for v in 1..=10 {
            assert!(p.value_at(&big(v as i64, 1)) >= to_big(t.ratio(v)), "V={v}");
        }
        assert_eq!(t.ratio(4), r(2, 1));
        assert_eq!(t.ratio(9), r(4, 3));
    }

    #[test]
    fn quotient_monotone_examples() {
        let c12 = make_family(&Family::Cyclic(12)).unwrap();
        let c4 = make_family(&Family::Cyclic(4)).unwrap();
        let rows = check_quotient_monotone(&quotient_cosets(&c12, &c4).unwrap(), 4, &ExactOptions::default()).unwrap();
        assert_eq!(rows.len(), 4);
        // arcs are optimal in both; only V = 4 differs (the whole of C₄)
        for row in &rows[..3] {
            assert_eq!(row.source, row.target);
        }
        assert_eq!(rows[3].target, r(0, 1));

        let t4 = make_family(&Family::Torus { dim: 2, n: 4 }).unwrap();
        let t2 = make_family(&Family::Torus { dim: 2, n: 2 }).unwrap();
        let rows = check_quotient_monotone(&quotient_cosets(&t4, &t2).unwrap(), 4, &ExactOptions::default()).unwrap();
        assert!(rows.iter().all(|row| row.target <= row.source));
        assert_eq!(rows[0].source, r(4, 1));
        assert_eq!(rows[0].target, r(2, 1));
    }
}
