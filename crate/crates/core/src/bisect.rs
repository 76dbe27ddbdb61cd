//! Approximate bisection `A = B₁ ⊔ B₂` with `|A|/4 ≤ |Bᵢ| ≤ 3|A|/4`, by
//! repeatedly biting translated Folner sets off `A`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::folner::{FolnerProfileTable, Ratio};
use crate::graph::{cut_set, edge_boundary_size, Edge, Graph, VertexSet};
use crate::groups::{commuting_permutation, CosetAction};

pub const DEFAULT_Q_CAP: usize = 100_000;

pub const BISEC_EXACT_CAP: usize = 20;

/// A finite set of graph automorphisms of the Schreier graph.
///
/// Built from the permutations commuting with every generator. For the
/// regular catalog actions these are the right translations, a group of
/// order `|C|` acting simply transitively.
#[derive(Clone, Debug)]
pub struct SymmetryGroup {
    permutations: Vec<Vec<usize>>,
    exact: bool,
    transitive: bool,
}

impl SymmetryGroup {
    pub fn permutations(&self) -> &[Vec<usize>] {
        &self.permutations
    }

    pub fn len(&self) -> usize {
        self.permutations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.permutations.is_empty()
    }

    /// The whole group was enumerated.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Some element carries coset 0 to every coset.
    pub fn is_transitive(&self) -> bool {
        self.transitive
    }

    /// Exact and transitive: the bite and bisection guarantees apply.
    pub fn guarantees(&self) -> bool {
        self.exact && self.transitive
    }
}

/// Enumerate the automorphisms commuting with the action. With more than
/// `cap` cosets, `cap` seeded targets are sampled instead and the result is
/// flagged inexact.
pub fn symmetry_group(action: &CosetAction, cap: usize, seed: u64) -> SymmetryGroup {
    let n = action.coset_count();
    let tree = action.spanning_tree();
    let exact = n <= cap;
    let targets: Vec<usize> = if exact {
        (0..n).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t: Vec<usize> = (0..cap).map(|_| rng.random_range(0..n)).collect();
        t.insert(0, 0);
        t.sort_unstable();
        t.dedup();
        t
    };
    let permutations: Vec<Vec<usize>> =
        targets.par_iter().filter_map(|&y| commuting_permutation(action, &tree, y)).collect();
    let transitive = permutations.len() == n;
    SymmetryGroup { permutations, exact, transitive }
}

/// Outcome of one bite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bite {
    pub set: VertexSet,
    /// `|E(A′, A ∖ A′)|`.
    pub cut: usize,
    pub q_index: usize,
    /// `cut·|F| − |∂F|·|A′|`; at most 0 under an exact transitive `Q`.
    pub discrepancy: i128,
}

fn bite_candidate(g: &Graph, in_a: &[bool], perm: &[usize], f: &[usize]) -> (Vec<usize>, usize) {
    let mut inside: Vec<usize> = f.iter().map(|&v| perm[v]).filter(|&v| in_a[v]).collect();
    inside.sort_unstable();
    let mut cut = 0;
    for &v in &inside {
        for &w in g.neighbors(v) {
            if in_a[w] && inside.binary_search(&w).is_err() {
                cut += 1;
            }
        }
    }
    (inside, cut)
}

/// Cut off `A′ = qF ∩ A` for the `q ∈ Q` minimising
/// `(cut·|F| − |∂F|·|A′|, cut, q index)` over nonempty candidates.
pub fn bite(g: &Graph, a: &VertexSet, f: &VertexSet, q: &SymmetryGroup) -> Result<Bite> {
    g.check(a)?;
    g.check(f)?;
    if a.is_empty() {
        return Err(Error::Precondition("cannot bite an empty set".into()));
    }
    if f.is_empty() || 2 * f.len() > a.len() {
        return Err(Error::Precondition(format!("witness of size {} does not fit in half of {}", f.len(), a.len())));
    }
    let f_members = f.to_vec();
    let f_boundary = edge_boundary_size(g, f)? as i128;
    let f_size = f.len() as i128;
    let in_a = a.as_slice();
    let best = q
        .permutations
        .par_iter()
        .enumerate()
        .filter_map(|(i, perm)| {
            let (inside, cut) = bite_candidate(g, in_a, perm, &f_members);
            if inside.is_empty() {
                return None;
            }
            let discrepancy = cut as i128 * f_size - f_boundary * inside.len() as i128;
            Some((discrepancy, cut, i, inside))
        })
        .min_by(|x, y| (x.0, x.1, x.2).cmp(&(y.0, y.1, y.2)));
    let Some((discrepancy, cut, q_index, inside)) = best else {
        return Err(Error::EmptyBite { tried: q.len() });
    };
    if q.guarantees() && discrepancy > 0 {
        return Err(Error::InvariantViolation(format!(
            "best bite has cut {cut} on {} vertices, above |∂F|/|F| = {f_boundary}/{f_size}",
            inside.len()
        )));
    }
    let set = VertexSet::from_vertices(g.vertex_count(), inside)?;
    Ok(Bite { set, cut, q_index, discrepancy })
}

/// `(Σ_q |qF ∩ A|, Σ_q |E(qF ∩ A, A ∖ qF)|)` over all of `Q`.
pub fn averaging_sums(g: &Graph, a: &VertexSet, f: &VertexSet, q: &SymmetryGroup) -> Result<(u64, u64)> {
    g.check(a)?;
    g.check(f)?;
    let f_members = f.to_vec();
    let in_a = a.as_slice();
    Ok(q.permutations
        .par_iter()
        .map(|perm| {
            let (inside, cut) = bite_candidate(g, in_a, perm, &f_members);
            (inside.len() as u64, cut as u64)
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bisection {
    pub b1: VertexSet,
    pub b2: VertexSet,
    /// `E(B₁, B₂)`.
    pub cut: Vec<Edge>,
    /// Produced under an exact transitive symmetry group, or by exhaustive
    /// search.
    pub exact: bool,
}

impl Bisection {
    pub fn cut_size(&self) -> usize {
        self.cut.len()
    }

    pub fn is_balanced(&self) -> bool {
        balanced(self.b1.len(), self.b1.len() + self.b2.len()) && balanced(self.b2.len(), self.b1.len() + self.b2.len())
    }
}

/// `|A|/4 ≤ part ≤ 3|A|/4`.
pub fn balanced(part: usize, total: usize) -> bool {
    4 * part >= total && 4 * part <= 3 * total
}

/// `Φ(⌊|A|/4⌋)·|A|`, the bisection bound for a set of the given size.
pub fn bisection_bound(profile: &FolnerProfileTable, size: usize) -> Ratio {
    profile.ratio(size / 4) * Ratio::from_integer(size as u64)
}

/// Bite pieces off `A` until at most `3|A|/4` remains; the pieces form `B₁`
/// and the remainder `B₂`. Each bite uses the profile witness at
/// `⌊|A_j|/2⌋`, clamped to the table.
pub fn bisect_by_bites(g: &Graph, a: &VertexSet, profile: &FolnerProfileTable, q: &SymmetryGroup) -> Result<Bisection> {
    g.check(a)?;
    let total = a.len();
    if total < 4 {
        return Err(Error::Precondition(format!("bisection needs |A| ≥ 4, got {total}")));
    }
    if profile.v_max() < total / 4 {
        return Err(Error::Precondition(format!("profile stops at {} below |A|/4 = {}", profile.v_max(), total / 4)));
    }
    let mut rest = a.clone();
    let mut b1 = VertexSet::empty(g.vertex_count());
    let phi = profile.ratio(total / 4);
    let mut bite_bound = Ratio::from_integer(0);
    while 4 * rest.len() > 3 * total {
        let f = profile.witness(rest.len() / 2);
        let piece = bite(g, &rest, f, q)?;
        bite_bound += Ratio::new(piece.cut as u64, 1);
        for v in piece.set.iter() {
            rest.remove(v);
            b1.insert(v);
        }
    }
    let cut = cut_set(g, &b1, &rest)?;
    let bisection = Bisection { b1, b2: rest, cut, exact: q.guarantees() };
    if q.guarantees() {
        if !bisection.is_balanced() {
            return Err(Error::InvariantViolation(format!(
                "unbalanced split {} / {}",
                bisection.b1.len(),
                bisection.b2.len()
            )));
        }
        let limit = phi * Ratio::from_integer(bisection.b1.len() as u64);
        if Ratio::from_integer(bisection.cut_size() as u64) > limit || bite_bound > limit {
            return Err(Error::InvariantViolation(format!(
                "cut {} exceeds Φ(⌊|A|/4⌋)·|B₁| = {limit}",
                bisection.cut_size()
            )));
        }
    }
    Ok(bisection)
}

/// A minimum-cut balanced partition of `A` by exhaustive search, `|A| ≤ 20`.
/// Ties go to the smallest membership mask of `B₁` over the sorted `A`.
pub fn bisec_exact(g: &Graph, a: &VertexSet) -> Result<Bisection> {
    g.check(a)?;
    let members = a.to_vec();
    let k = members.len();
    if k > BISEC_EXACT_CAP {
        return Err(Error::SizeCap { size: k, cap: BISEC_EXACT_CAP });
    }
    if k < 2 {
        return Err(Error::Precondition("nothing to bisect".into()));
    }
    let mut bit = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in members.iter().enumerate() {
        bit[v] = i;
    }
    let local: Vec<Vec<usize>> =
        members.iter().map(|&v| g.neighbors(v).iter().filter(|&&w| bit[w] != usize::MAX).map(|&w| bit[w]).collect()).collect();
    let size = 1usize << k;
    let mut cut = vec![0u32; size];
    for mask in 1..size {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let inside = local[low].iter().filter(|&&j| rest >> j & 1 == 1).count() as u32;
        cut[mask] = cut[rest] + local[low].len() as u32 - 2 * inside;
    }
    let best = (1..size - 1)
        .filter(|&m| balanced(m.count_ones() as usize, k) && balanced(k - m.count_ones() as usize, k))
        .min_by_key(|&m| (cut[m], m))
        .ok_or_else(|| Error::Precondition(format!("no balanced split of {k} vertices")))?;
    let b1 = VertexSet::from_vertices(g.vertex_count(), (0..k).filter(|&i| best >> i & 1 == 1).map(|i| members[i]))?;
    let b2 = a.difference(&b1);
    let cut = cut_set(g, &b1, &b2)?;
    Ok(Bisection { b1, b2, cut, exact: true })
}
