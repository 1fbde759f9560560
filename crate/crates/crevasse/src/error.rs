use thiserror::Error;

/// Everything that can go wrong when building or combining the structures in
/// this crate. Operations that merely *report* a property (validity checks,
/// stability reports, suite runs) return data instead of erroring; `Error` is
/// reserved for malformed inputs and misuse.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("atom count {0} out of range (this crate materializes at most 16 atoms)")]
    AtomCountOutOfRange(usize),

    #[error("elements belong to different algebras ({0} vs {1} atoms)")]
    AlgebraMismatch(usize, usize),

    #[error("family is not cellular: {0}")]
    NotCellular(String),

    #[error("family is not a partition: {0}")]
    NotAPartition(String),

    #[error("partition does not refine the requested target")]
    NotRefining,

    #[error("function table is not defined on every element of its source")]
    IncompleteTable,

    #[error("selection is incoherent: {0}")]
    IncoherentSelection(String),

    #[error("element set is not an ultrafilter meeting every filter member: {0}")]
    NotAnUltrafilter(String),

    #[error("partition algebra fails its defining conditions; see validate_bpa")]
    InvalidAlgebra,

    #[error("partition algebra is unstable: element {witness:?} is never selected")]
    Unstable { witness: Vec<u8> },

    #[error("maps are not composable: {0}")]
    NotComposable(String),

    #[error("not a partition homomorphism: {0}")]
    NotPartitional(String),

    #[error("point {0} is outside the ground set")]
    PointOutOfRange(usize),

    #[error("depth {requested} exceeds the usable bound {bound}")]
    DepthOutOfRange { requested: usize, bound: usize },

    #[error("level {level} has {nodes} nodes, too many to materialize as a finite algebra")]
    LevelTooWide { level: usize, nodes: usize },

    #[error("branch is invalid: {0}")]
    BadBranch(String),

    #[error("branch lies inside the declared subspace; probe expects an outside branch")]
    BranchInsideSubspace,

    #[error("malformed record: {0}")]
    Record(String),

    #[error("unknown suite \"{0}\" (expected lattice, algebras, morphisms, duality, or tree)")]
    UnknownSuite(String),

    #[error("bound out of range: {0}")]
    BadBound(String),
}

pub type Result<T> = std::result::Result<T, Error>;
