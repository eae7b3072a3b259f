use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid braid word: {0}")]
    InvalidBraid(String),

    #[error("box has {sites} sites, cannot hold {particles} distinct particles")]
    Capacity { sites: usize, particles: usize },

    #[error("invalid lattice box: {0}")]
    InvalidBox(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("path lift failed: {0}")]
    Lift(String),

    #[error("path is not closed (starts at vertex {start}, ends at vertex {end})")]
    NotALoop { start: usize, end: usize },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),

    #[error("exterior power is empty: fiber seed dimension {w_dim} < particle number {particles}")]
    EmptyFiber { w_dim: usize, particles: usize },

    #[error(
        "pseudo-scalar construction requires odd space dimension, got d = {d}; for even d the \
         block sign is +1 and the bundle is trivial instead of fermionic"
    )]
    DimensionParity { d: usize },

    #[error("unsupported space dimension: {0}")]
    Dimension(String),

    #[error("unsupported topology: {0}")]
    UnsupportedTopology(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("symmetry violation: {what} (residual {residual:.3e})")]
    SymmetryViolation { what: String, residual: f64 },

    #[error("frame is not parallel (max residual {residual:.3e})")]
    InvalidFrame { residual: f64 },

    #[error("graph is not connected ({components} components)")]
    Disconnected { components: usize },

    #[error("bundle is not trivializable: loop holonomy deviates from identity by {deviation:.3e}")]
    Obstructed { deviation: f64 },

    #[error(
        "triples are not equivalent under the given unitary (H residual {hamiltonian:.3e}, worst \
         cell '{worst_cell}' residual {cell:.3e})"
    )]
    NotEquivalent { hamiltonian: f64, worst_cell: String, cell: f64 },

    #[error("invalid physical parameters: {0}")]
    InvalidParams(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("wave function node at t = {t}: |psi| = {magnitude:.3e} below guard {guard:.3e}")]
    NodeGuard { t: f64, magnitude: f64, guard: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
