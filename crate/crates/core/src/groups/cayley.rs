//! Finite balls in Cayley graphs of infinite groups.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InfiniteFamily {
    /// ℤ^d with the ± standard basis.
    Lattice(usize),
    /// Integer Heisenberg group with generators x, y and inverses.
    Heisenberg,
    /// ℤ/2 ≀ ℤ with shift and lamp toggle.
    Lamplighter,
}

impl FromStr for InfiniteFamily {
    type Err = Error;

    /// `z:D`, `heisz` or `lampz`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "heisz" => Ok(InfiniteFamily::Heisenberg),
            "lampz" => Ok(InfiniteFamily::Lamplighter),
            _ => s
                .strip_prefix("z:")
                .and_then(|d| d.parse().ok())
                .filter(|&d| d > 0)
                .map(InfiniteFamily::Lattice)
                .ok_or_else(|| Error::InvalidFamily(format!("unknown infinite family `{s}`"))),
        }
    }
}

impl fmt::Display for InfiniteFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfiniteFamily::Lattice(d) => write!(f, "z:{d}"),
            InfiniteFamily::Heisenberg => write!(f, "heisz"),
            InfiniteFamily::Lamplighter => write!(f, "lampz"),
        }
    }
}

/// Normal form of a group element. Lattice points and Heisenberg triples
/// use the coordinates directly; lamplighter elements are the position
/// followed by the sorted lit lamps.
type Element = Vec<i64>;

impl InfiniteFamily {
    fn identity(&self) -> Element {
        match self {
            InfiniteFamily::Lattice(d) => vec![0; *d],
            InfiniteFamily::Heisenberg => vec![0; 3],
            InfiniteFamily::Lamplighter => vec![0],
        }
    }

    /// Left multiplication by each generator pair representative, with a
    /// flag for self-inverse generators.
    fn generator_images(&self, g: &Element) -> Vec<(Element, Element, bool)> {
        match self {
            InfiniteFamily::Lattice(d) => (0..*d)
                .map(|i| {
                    let mut up = g.clone();
                    let mut down = g.clone();
                    up[i] += 1;
                    down[i] -= 1;
                    (up, down, false)
                })
                .collect(),
            InfiniteFamily::Heisenberg => {
                let (a, b, c) = (g[0], g[1], g[2]);
                vec![
                    (vec![a + 1, b, c + b], vec![a - 1, b, c - b], false),
                    (vec![a, b + 1, c], vec![a, b - 1, c], false),
                ]
            }
            InfiniteFamily::Lamplighter => {
                let shifted = |delta: i64| {
                    let mut out = vec![g[0] + delta];
                    out.extend(g[1..].iter().map(|&l| l + delta));
                    out
                };
                let mut toggled: Vec<i64> = g[1..].to_vec();
                match toggled.binary_search(&0) {
                    Ok(i) => {
                        toggled.remove(i);
                    }
                    Err(i) => toggled.insert(i, 0),
                }
                toggled.insert(0, g[0]);
                vec![(shifted(1), shifted(-1), false), (toggled.clone(), toggled, true)]
            }
        }
    }

    /// Degree of every vertex in the full Cayley graph.
    pub fn degree(&self) -> usize {
        match self {
            InfiniteFamily::Lattice(d) => 2 * d,
            InfiniteFamily::Heisenberg => 4,
            InfiniteFamily::Lamplighter => 3,
        }
    }
}

/// The radius-`r` ball around the identity, with the vertices at distance
/// at most `r − 1` marked as interior. Boundaries of interior subsets agree
/// with the full Cayley graph.
#[derive(Clone, Debug)]
pub struct CayleyBall {
    pub graph: Graph,
    pub interior: VertexSet,
    pub radius: usize,
    pub family: InfiniteFamily,
    /// Word length of every vertex; vertex 0 is the identity.
    pub distance: Vec<usize>,
}

pub fn cayley_ball(family: InfiniteFamily, radius: usize, cap: usize) -> Result<CayleyBall> {
    if radius == 0 {
        return Err(Error::Precondition("radius must be positive".into()));
    }
    let mut index: HashMap<Element, usize> = HashMap::new();
    let mut elements = vec![family.identity()];
    let mut distance = vec![0usize];
    index.insert(family.identity(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if distance[i] == radius {
            continue;
        }
        for (fwd, back, _) in family.generator_images(&elements[i]) {
            for next in [fwd, back] {
                if !index.contains_key(&next) {
                    if elements.len() == cap {
                        return Err(Error::SizeCap { size: cap + 1, cap });
                    }
                    index.insert(next.clone(), elements.len());
                    elements.push(next);
                    distance.push(distance[i] + 1);
                    queue.push_back(elements.len() - 1);
                }
            }
        }
    }
    let mut edges = Vec::new();
    for (i, g) in elements.iter().enumerate() {
        for (fwd, _, involution) in family.generator_images(g) {
            if let Some(&j) = index.get(&fwd) {
                if !involution || i < j {
                    edges.push((i, j));
                }
            }
        }
    }
    let n = elements.len();
    let interior = VertexSet::from_vertices(n, (0..n).filter(|&v| distance[v] < radius))?;
    Ok(CayleyBall { graph: Graph::new(n, edges)?, interior, radius, family, distance })
}
