//! Finite coset spaces with a generator action, their Schreier graphs and
//! equivariant quotient maps between them.
//!
//! A subgroup `H` is never stored. The primitive is the permutation action of
//! a symmetric generating set on the cosets, which is all a Schreier graph
//! needs. Every catalog family is the left-regular action of a finite group
//! on itself, so its Schreier graph is a Cayley graph.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexFunction};

mod cayley;
pub use cayley::{cayley_ball, CayleyBall, InfiniteFamily};

pub const DEFAULT_COSET_CAP: usize = 1_000_000;

/// A named generator. Self-inverse generators are stored once; their
/// `inverse_label` is an alias that resolves to the same permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub inverse_label: String,
    perm: Vec<usize>,
}

impl Generator {
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn is_involution(&self) -> bool {
        self.perm.iter().enumerate().all(|(x, &y)| self.perm[y] == x)
    }
}

/// Descriptor of a finite coset space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// ℤ/n with generators ±1.
    Cyclic(usize),
    /// (ℤ/n)^dim with ± standard generators.
    Torus { dim: usize, n: usize },
    /// 3×3 upper unitriangular matrices over ℤ/n.
    Heisenberg(usize),
    /// ℤ/2 ≀ ℤ/n: lamp toggle and shift.
    Lamplighter(usize),
    /// Dihedral group of order 2n acting on itself.
    Dihedral(usize),
    /// Explicit permutations, which must be closed under inverses.
    Custom(Vec<Vec<usize>>),
}

impl Family {
    pub fn kind(&self) -> FamilyKind {
        match self {
            Family::Cyclic(_) => FamilyKind::Cyclic,
            Family::Torus { dim, .. } => FamilyKind::Torus(*dim),
            Family::Heisenberg(_) => FamilyKind::Heisenberg,
            Family::Lamplighter(_) => FamilyKind::Lamplighter,
            Family::Dihedral(_) => FamilyKind::Dihedral,
            Family::Custom(_) => FamilyKind::Custom,
        }
    }

    /// Parse a descriptor such as `cyclic:6`, `torus:2x8`, `heis:4`,
    /// `lamp:3`, `dihedral:5` or `custom:<file>`.
    pub fn parse(desc: &str) -> Result<Family> {
        let (kind, arg) = desc
            .split_once(':')
            .ok_or_else(|| Error::InvalidFamily(format!("`{desc}` has no `:` parameter")))?;
        if kind == "custom" {
            return Family::from_permutation_file(Path::new(arg));
        }
        let kind: FamilyKind = kind.parse()?;
        match kind {
            FamilyKind::Torus(_) => {
                let (d, n) = arg
                    .split_once('x')
                    .ok_or_else(|| Error::InvalidFamily(format!("torus needs `DxN`, got `{arg}`")))?;
                Ok(Family::Torus { dim: parse_param(d)?, n: parse_param(n)? })
            }
            other => other.instantiate(parse_param(arg)?),
        }
    }

    pub fn from_permutation_file(path: &Path) -> Result<Family> {
        let text = std::fs::read_to_string(path)?;
        Family::from_permutation_text(&text)
    }

    /// One permutation per line as space-separated images; `#` comments.
    pub fn from_permutation_text(text: &str) -> Result<Family> {
        let mut perms = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perm = line
                .split_whitespace()
                .map(|f| f.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
            perms.push(perm);
        }
        Ok(Family::Custom(perms))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Cyclic(n) => write!(f, "cyclic:{n}"),
            Family::Torus { dim, n } => write!(f, "torus:{dim}x{n}"),
            Family::Heisenberg(n) => write!(f, "heis:{n}"),
            Family::Lamplighter(n) => write!(f, "lamp:{n}"),
            Family::Dihedral(n) => write!(f, "dihedral:{n}"),
            Family::Custom(p) => write!(f, "custom({} generators)", p.len()),
        }
    }
}

fn parse_param(s: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::InvalidFamily(format!("bad parameter `{s}`")))
}

/// A family without its size parameter, e.g. `cyclic` or `torus:2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Cyclic,
    Torus(usize),
    Heisenberg,
    Lamplighter,
    Dihedral,
    Custom,
}

impl FamilyKind {
    pub fn instantiate(self, n: usize) -> Result<Family> {
        Ok(match self {
            FamilyKind::Cyclic => Family::Cyclic(n),
            FamilyKind::Torus(dim) => Family::Torus { dim, n },
            FamilyKind::Heisenberg => Family::Heisenberg(n),
            FamilyKind::Lamplighter => Family::Lamplighter(n),
            FamilyKind::Dihedral => Family::Dihedral(n),
            FamilyKind::Custom => {
                return Err(Error::InvalidFamily("custom families have no size parameter".into()))
            }
        })
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cyclic" => FamilyKind::Cyclic,
            "heis" => FamilyKind::Heisenberg,
            "lamp" => FamilyKind::Lamplighter,
            "dihedral" => FamilyKind::Dihedral,
            "custom" => FamilyKind::Custom,
            "torus" => FamilyKind::Torus(2),
            _ => match s.strip_prefix("torus:") {
                Some(d) => FamilyKind::Torus(parse_param(d)?),
                None => return Err(Error::InvalidFamily(format!("unknown family `{s}`"))),
            },
        })
    }
}

/// A validated transitive action of a symmetric generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetAction {
    coset_count: usize,
    generators: Vec<Generator>,
    family: Family,
}

impl CosetAction {
    pub fn coset_count(&self) -> usize {
        self.coset_count
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Index of the generator a label resolves to. A self-inverse
    /// generator also answers to its inverse alias.
    pub fn generator_index(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.label == label).or_else(|| {
            self.generators
                .iter()
                .position(|g| g.inverse_label == label && g.inverse_label != g.label && g.is_involution())
        })
    }

    pub fn inverse_index(&self, index: usize) -> usize {
        let g = &self.generators[index];
        if g.inverse_label == g.label {
            index
        } else {
            self.generators.iter().position(|h| h.label == g.inverse_label).unwrap_or(index)
        }
    }

    pub fn act(&self, generator: usize, x: usize) -> usize {
        self.generators[generator].perm[x]
    }

    /// Apply a word `s₁ s₂ … s_k` to `x`, rightmost letter first.
    pub fn act_word<S: AsRef<str>>(&self, word: &[S], x: usize) -> Result<usize> {
        let mut y = x;
        for label in word.iter().rev() {
            let label = label.as_ref();
            let g = self.generator_index(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
            y = self.generators[g].perm[y];
        }
        Ok(y)
    }

    /// Build and validate an action from labelled generators.
    pub fn from_generators(coset_count: usize, generators: Vec<Generator>, family: Family) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if !is_permutation(&g.perm, coset_count) {
                return Err(Error::NotAPermutation { index: i, count: coset_count });
            }
        }
        let action = CosetAction { coset_count, generators, family };
        for (i, g) in action.generators.iter().enumerate() {
            let j = action
                .generators
                .iter()
                .position(|h| h.label == g.inverse_label)
                .or_else(|| (g.inverse_label != g.label && g.is_involution()).then_some(i))
                .ok_or_else(|| Error::InverseClosure(format!("no generator labelled `{}`", g.inverse_label)))?;
            let inv = &action.generators[j].perm;
            if (0..coset_count).any(|x| inv[g.perm[x]] != x) {
                return Err(Error::InverseClosure(format!("`{}` and `{}` are not inverse", g.label, g.inverse_label)));
            }
        }
        let reached = action.orbit_size(0);
        if reached != coset_count {
            return Err(Error::NotTransitive { reached, count: coset_count });
        }
        Ok(action)
    }

    fn orbit_size(&self, start: usize) -> usize {
        if self.coset_count == 0 {
            return 0;
        }
        let mut seen = vec![false; self.coset_count];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut count = 1;
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = g.perm[x];
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count
    }

    /// Breadth-first spanning tree from coset 0: for every coset other than
    /// 0, its parent and the generator index carrying parent to it.
    pub(crate) fn spanning_tree(&self) -> Vec<(usize, usize, usize)> {
        let mut seen = vec![false; self.coset_count];
        let mut tree = Vec::with_capacity(self.coset_count.saturating_sub(1));
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for (s, g) in self.generators.iter().enumerate() {
                let y = g.perm[x];
                if !seen[y] {
                    seen[y] = true;
                    tree.push((x, s, y));
                    queue.push_back(y);
                }
            }
        }
        tree
    }
}

fn is_permutation(perm: &[usize], n: usize) -> bool {
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &y in perm {
        if y >= n || seen[y] {
            return false;
        }
        seen[y] = true;
    }
    true
}

fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (x, &y) in perm.iter().enumerate() {
        inv[y] = x;
    }
    inv
}

/// Push a generator and its inverse, storing an involution once.
fn push_pair(out: &mut Vec<Generator>, label: &str, inverse_label: &str, perm: Vec<usize>) {
    let inv = invert(&perm);
    if inv == perm {
        out.push(Generator { label: label.into(), inverse_label: inverse_label.into(), perm });
    } else {
        out.push(Generator { label: label.into(), inverse_label: inverse_label.into(), perm });
        out.push(Generator { label: inverse_label.into(), inverse_label: label.into(), perm: inv });
    }
}

fn checked_size(factors: &[usize], cap: usize) -> Result<usize> {
    let mut total: usize = 1;
    for &f in factors {
        total = total.checked_mul(f).filter(|&t| t <= cap).ok_or(Error::SizeOverflow { cap })?;
    }
    Ok(total)
}

/// Instantiate a family with the default coset cap.
pub fn make_family(family: &Family) -> Result<CosetAction> {
    make_family_capped(family, DEFAULT_COSET_CAP)
}

pub fn make_family_capped(family: &Family, cap: usize) -> Result<CosetAction> {
    let positive = |n: usize, what: &str| {
        if n == 0 {
            Err(Error::InvalidFamily(format!("{what} parameter must be positive")))
        } else {
            Ok(n)
        }
    };
    let mut gens = Vec::new();
    let count = match family {
        Family::Cyclic(n) => {
            let n = positive(*n, "cyclic")?;
            checked_size(&[n], cap)?;
            push_pair(&mut gens, "a", "A", (0..n).map(|x| (x + 1) % n).collect());
            n
        }
        Family::Torus { dim, n } => {
            let n = positive(*n, "torus")?;
            let dim = positive(*dim, "torus dimension")?;
            let count = checked_size(&vec![n; dim], cap)?;
            for axis in 0..dim {
                let stride = n.pow(axis as u32);
                let perm = (0..count)
                    .map(|x| {
                        let coord = (x / stride) % n;
                        x - coord * stride + ((coord + 1) % n) * stride
                    })
                    .collect();
                push_pair(&mut gens, &format!("e{axis}"), &format!("E{axis}"), perm);
            }
            count
        }
        Family::Heisenberg(n) => {
            let n = positive(*n, "heis")?;
            let count = checked_size(&[n, n, n], cap)?;
            let decode = |x: usize| (x % n, (x / n) % n, x / (n * n));
            let encode = |a: usize, b: usize, c: usize| a + n * b + n * n * c;
            // (1,0,0)·(a,b,c) = (a+1, b, c+b); (0,1,0)·(a,b,c) = (a, b+1, c)
            let x_perm = (0..count)
                .map(|x| {
                    let (a, b, c) = decode(x);
                    encode((a + 1) % n, b, (c + b) % n)
                })
                .collect();
            let y_perm = (0..count)
                .map(|x| {
                    let (a, b, c) = decode(x);
                    encode(a, (b + 1) % n, c)
                })
                .collect();
            push_pair(&mut gens, "x", "X", x_perm);
            push_pair(&mut gens, "y", "Y", y_perm);
            count
        }
        Family::Lamplighter(n) => {
            let n = positive(*n, "lamp")?;
            if n > 12 {
                return Err(Error::InvalidFamily("lamplighter supports n ≤ 12".into()));
            }
            let count = checked_size(&[n, 1 << n], cap)?;
            let mask = (1usize << n) - 1;
            // element (lamps, pos) encoded as pos + n·lamps; left multiplication
            // by the shift rotates lamps and position, the toggle flips lamp 0
            let shift = (0..count)
                .map(|x| {
                    let (pos, lamps) = (x % n, x / n);
                    let rotated = ((lamps << 1) | (lamps >> (n - 1))) & mask;
                    (pos + 1) % n + n * rotated
                })
                .collect();
            let toggle = (0..count).map(|x| (x % n) + n * ((x / n) ^ 1)).collect();
            push_pair(&mut gens, "t", "T", shift);
            push_pair(&mut gens, "l", "L", toggle);
            count
        }
        Family::Dihedral(n) => {
            let n = positive(*n, "dihedral")?;
            let count = checked_size(&[2, n], cap)?;
            // r^k s^e encoded as k + n·e
            let rot = (0..count).map(|x| (x % n + 1) % n + n * (x / n)).collect();
            let refl = (0..count).map(|x| (n - x % n) % n + n * (1 - x / n)).collect();
            push_pair(&mut gens, "r", "R", rot);
            push_pair(&mut gens, "s", "S", refl);
            count
        }
        Family::Custom(perms) => {
            let count = perms.first().map_or(0, Vec::len);
            if count == 0 {
                return Err(Error::InvalidFamily("custom family needs at least one nonempty permutation".into()));
            }
            checked_size(&[count], cap)?;
            for (i, p) in perms.iter().enumerate() {
                if !is_permutation(p, count) {
                    return Err(Error::NotAPermutation { index: i, count });
                }
            }
            let mut used = vec![false; perms.len()];
            let mut labels = vec![String::new(); perms.len()];
            let mut inverse = vec![String::new(); perms.len()];
            for i in 0..perms.len() {
                labels[i] = format!("g{i}");
            }
            for i in 0..perms.len() {
                if used[i] {
                    continue;
                }
                let inv = invert(&perms[i]);
                if inv == perms[i] {
                    used[i] = true;
                    inverse[i] = labels[i].clone();
                    continue;
                }
                let j = (0..perms.len())
                    .find(|&j| !used[j] && j != i && perms[j] == inv)
                    .ok_or_else(|| Error::InverseClosure(format!("inverse of permutation {i} is not listed")))?;
                used[i] = true;
                used[j] = true;
                inverse[i] = labels[j].clone();
                inverse[j] = labels[i].clone();
            }
            for (i, p) in perms.iter().enumerate() {
                gens.push(Generator { label: labels[i].clone(), inverse_label: inverse[i].clone(), perm: p.clone() });
            }
            count
        }
    };
    CosetAction::from_generators(count, gens, family.clone())
}

/// The Schreier graph: one edge `{x, s·x}` per coset and generator pair
/// `{s, s⁻¹}` with `s·x ≠ x`. For a self-inverse generator the edge is
/// emitted once per 2-cycle.
pub fn schreier_graph(action: &CosetAction) -> Graph {
    let mut edges = Vec::new();
    for (i, g) in action.generators.iter().enumerate() {
        let j = action.inverse_index(i);
        if j < i {
            continue;
        }
        for x in 0..action.coset_count {
            let y = g.perm[x];
            if y == x {
                continue;
            }
            if j == i && y < x {
                continue;
            }
            edges.push((x, y));
        }
    }
    Graph::new(action.coset_count, edges).expect("generator images are in range")
}

/// Closure of the generator permutations under composition, or `None` once
/// it exceeds `cap` elements.
pub fn generated_group(action: &CosetAction, cap: usize) -> Option<Vec<Vec<usize>>> {
    let identity: Vec<usize> = (0..action.coset_count).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([identity.clone()]);
    let mut elements = vec![identity.clone()];
    let mut queue = VecDeque::from([identity]);
    while let Some(p) = queue.pop_front() {
        for g in &action.generators {
            let q: Vec<usize> = p.iter().map(|&y| g.perm[y]).collect();
            if seen.insert(q.clone()) {
                if elements.len() == cap {
                    return None;
                }
                elements.push(q.clone());
                queue.push_back(q);
            }
        }
    }
    Some(elements)
}

/// The permutation of the cosets commuting with every generator and sending
/// coset 0 to `y`, if one exists. Such permutations are automorphisms of
/// the Schreier graph.
pub fn commuting_permutation(action: &CosetAction, tree: &[(usize, usize, usize)], y: usize) -> Option<Vec<usize>> {
    let n = action.coset_count;
    let mut phi = vec![usize::MAX; n];
    phi[0] = y;
    for &(x, s, z) in tree {
        phi[z] = action.generators[s].perm[phi[x]];
    }
    for g in &action.generators {
        for x in 0..n {
            if phi[g.perm[x]] != g.perm[phi[x]] {
                return None;
            }
        }
    }
    Some(phi)
}

/// An equivariant surjection between coset spaces.
#[derive(Clone, Debug)]
pub struct CosetMap {
    source: CosetAction,
    target: CosetAction,
    assignment: Vec<usize>,
}

impl CosetMap {
    pub fn source(&self) -> &CosetAction {
        &self.source
    }

    pub fn target(&self) -> &CosetAction {
        &self.target
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn image(&self, x: usize) -> usize {
        self.assignment[x]
    }

    /// Source cosets over each target coset.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut fibers = vec![Vec::new(); self.target.coset_count];
        for (x, &y) in self.assignment.iter().enumerate() {
            fibers[y].push(x);
        }
        fibers
    }
}

/// The unique equivariant map sending coset 0 to coset 0.
pub fn quotient_cosets(fine: &CosetAction, coarse: &CosetAction) -> Result<CosetMap> {
    if fine.family.kind() != coarse.family.kind() {
        return Err(Error::Incompatible(format!("{} vs {}", fine.family, coarse.family)));
    }
    let target_of: Vec<usize> = fine
        .generators
        .iter()
        .map(|g| {
            coarse
                .generator_index(&g.label)
                .ok_or_else(|| Error::Incompatible(format!("label `{}` missing from {}", g.label, coarse.family)))
        })
        .collect::<Result<_>>()?;
    let mut assignment = vec![usize::MAX; fine.coset_count];
    assignment[0] = 0;
    for (x, s, y) in fine.spanning_tree() {
        assignment[y] = coarse.generators[target_of[s]].perm[assignment[x]];
    }
    for (s, g) in fine.generators.iter().enumerate() {
        let t = &coarse.generators[target_of[s]].perm;
        for x in 0..fine.coset_count {
            if assignment[g.perm[x]] != t[assignment[x]] {
                return Err(Error::NoEquivariantMap(format!(
                    "{} does not cover {} (generator `{}` at coset {x})",
                    fine.family, coarse.family, g.label
                )));
            }
        }
    }
    let mut fiber = vec![0usize; coarse.coset_count];
    for &y in &assignment {
        fiber[y] += 1;
    }
    if coarse.coset_count == 0
        || !fine.coset_count.is_multiple_of(coarse.coset_count)
        || fiber.iter().any(|&f| f != fine.coset_count / coarse.coset_count)
    {
        return Err(Error::NoEquivariantMap("fibers are not of equal size".into()));
    }
    Ok(CosetMap { source: fine.clone(), target: coarse.clone(), assignment })
}

/// `(π_*f)(x) = Σ_{g ∈ π⁻¹(x)} f(g)`.
pub fn pushforward(map: &CosetMap, f: &VertexFunction) -> Result<VertexFunction> {
    if f.len() != map.source.coset_count {
        return Err(Error::UniverseMismatch { set: f.len(), graph: map.source.coset_count });
    }
    let mut out = vec![0i64; map.target.coset_count];
    for (x, &value) in f.0.iter().enumerate() {
        out[map.assignment[x]] += value;
    }
    Ok(VertexFunction(out))
}

/// All catalog quotient pairs `(fine, coarse)` whose fine space has at most
/// `max_cosets` cosets.
pub fn catalog_maps(max_cosets: usize) -> Vec<(Family, Family)> {
    let mut pairs = Vec::new();
    let mut push = |fine: Family, coarse: Family| pairs.push((fine, coarse));
    for big in 2..=max_cosets {
        for small in 2..big {
            if big % small == 0 {
                push(Family::Cyclic(big), Family::Cyclic(small));
            }
        }
    }
    for n in 2..=max_cosets {
        for m in 1..n {
            if n % m == 0 && m > 1 && n * n <= max_cosets {
                push(Family::Torus { dim: 2, n }, Family::Torus { dim: 2, n: m });
            }
            if n % m == 0 && 2 * n <= max_cosets {
                push(Family::Dihedral(n), Family::Dihedral(m));
            }
            if n % m == 0 && n * n * n <= max_cosets {
                push(Family::Heisenberg(n), Family::Heisenberg(m));
            }
            if n % m == 0 && n <= 12 && n << n <= max_cosets {
                push(Family::Lamplighter(n), Family::Lamplighter(m));
            }
        }
    }
    for n in 2..=4 {
        if n * n * n <= max_cosets {
            push(Family::Torus { dim: 3, n }, Family::Torus { dim: 3, n: 1 });
        }
    }
    pairs
}

/// Catalog actions with at most `max_cosets` cosets and at least two.
pub fn catalog_actions(max_cosets: usize) -> Vec<Family> {
    let mut out = Vec::new();
    for n in 2..=max_cosets {
        out.push(Family::Cyclic(n));
        if n * n <= max_cosets {
            out.push(Family::Torus { dim: 2, n });
        }
        if 2 * n <= max_cosets {
            out.push(Family::Dihedral(n));
        }
        if n * n * n <= max_cosets {
            out.push(Family::Heisenberg(n));
        }
        if n <= 12 && n << n <= max_cosets {
            out.push(Family::Lamplighter(n));
        }
    }
    out
}

/// Group the cosets by a key; used by tests to inspect fibres.
pub fn fiber_sizes(map: &CosetMap) -> HashMap<usize, usize> {
    let mut sizes = HashMap::new();
    for &y in &map.assignment {
        *sizes.entry(y).or_insert(0) += 1;
    }
    sizes
}
