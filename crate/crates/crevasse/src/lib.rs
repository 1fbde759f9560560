//! Boolean partition algebras, partition uniformities, and the spectrum
//! duality between them, verified exhaustively at desk scale.
//!
//! The crate has two sides. On the algebra side, a finite powerset algebra
//! carries a filter of partitions; ultrafilters that meet every filter
//! member exactly once form its spectrum. On the space side, a finite point
//! set carries a filter of covers ("crevasses"); each point determines an
//! ultrafilter of the blocks around it. The [`duality`] module implements
//! the two constructions that swap these sides, the canonical comparison
//! maps, and completion; [`tree`] scales the same story to lazily
//! represented infinite branch spaces cut off at a depth bound; [`suites`]
//! re-derives every law by brute force and reports the outcome.
//!
//! Start with the runnable tours in `examples/`:
//!
//! ```text
//! cargo run --example lattice_tour        # partitions and refinement
//! cargo run --example spectra             # ultrafilters and selections
//! cargo run --example homomorphisms       # the triple criterion
//! cargo run --example dual_pair           # spectrum space and back
//! cargo run --example completion_tour     # completing a glued space
//! cargo run --example cantor_tree         # an infinite binary tree, bounded
//! ```
//!
//! The `crevasse` binary wraps the same functionality for scripting: a
//! `verify` command that runs the law suites, `dual` and `complete` for
//! single structures, and `enumerate` for debugging.

pub mod algebra;
pub mod duality;
pub mod error;
pub mod lattice;
pub mod morphism;
pub mod partition_algebra;
pub mod record;
pub mod space;
pub mod suites;
pub mod tree;

pub use algebra::{Element, FunctionTable, GroundAlgebra};
pub use duality::{completion, dual_algebra, dual_space, Completion, SpectrumSpace};
pub use error::{Error, Result};
pub use lattice::{CellularFamily, CoarseningMap, Partition};
pub use morphism::PartitionHom;
pub use partition_algebra::{BooleanPartitionAlgebra, PartitionFilter, Ultrafilter};
pub use space::{PartitionSpace, UniformMap};
pub use tree::{Antichain, BranchDescriptor, NodeWord, Subspace, TreeModel};
