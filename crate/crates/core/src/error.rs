use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex set over {set} vertices used with a graph of {graph} vertices")]
    UniverseMismatch { set: usize, graph: usize },

    #[error("vertex {vertex} out of range (vertex count {count})")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("vertex sets overlap at vertex {0}")]
    Overlap(usize),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("permutation {index} is not a permutation of 0..{count}")]
    NotAPermutation { index: usize, count: usize },

    #[error("generator set is not closed under inverses: {0}")]
    InverseClosure(String),

    #[error("generators do not act transitively ({reached} of {count} cosets reachable from 0)")]
    NotTransitive { reached: usize, count: usize },

    #[error("coset count exceeds cap {cap}")]
    SizeOverflow { cap: usize },

    #[error("incompatible coset actions: {0}")]
    Incompatible(String),

    #[error("no equivariant map exists: {0}")]
    NoEquivariantMap(String),

    #[error("unknown generator label `{0}`")]
    UnknownLabel(String),

    #[error("enumeration budget of {budget} sets exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("size cap exceeded: {size} > {cap}")]
    SizeCap { size: usize, cap: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("no nonempty bite found among {tried} sampled symmetries")]
    EmptyBite { tried: usize },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("not a sweepout: {0}")]
    NotASweepout(String),

    #[error("graph is not bipartite: edge ({0}, {1}) joins vertices of the same colour")]
    NotBipartite(usize, usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures that can only come from a bug: every checked
    /// inequality in this crate is a theorem.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::InvariantViolation(_))
    }
}
