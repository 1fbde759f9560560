//! Partitions of a finite algebra and the refinement order on them.
//!
//! A cellular family is a set of pairwise-disjoint nonzero elements; a
//! partition is a cellular family whose join is the top element. Partitions
//! are kept in a canonical form (blocks sorted by smallest atom) so
//! structural equality is partition equality. The refinement order `p ⪯ q`
//! ("p refines q") holds when every block of `p` sits inside a block of
//! `q`; coarsening maps send each fine block to the block that absorbs it
//! and compose like an inverse system.

use std::fmt;

use crate::algebra::{Element, FunctionTable, GroundAlgebra};
use crate::error::{Error, Result};

/// Pairwise-disjoint nonzero elements in canonical order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellularFamily {
    blocks: Vec<Element>,
    algebra: GroundAlgebra,
}

/// A cellular family covering the whole algebra.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    blocks: Vec<Element>,
    algebra: GroundAlgebra,
}

/// True when the elements are nonzero and pairwise disjoint.
pub fn is_cellular(algebra: GroundAlgebra, blocks: &[Element]) -> Result<bool> {
    let mut seen = 0u16;
    let mut masks: Vec<u16> = Vec::with_capacity(blocks.len());
    for b in blocks {
        if b.algebra() != algebra {
            return Err(Error::AlgebraMismatch(
                algebra.atom_count(),
                b.algebra().atom_count(),
            ));
        }
        if b.is_bottom() {
            return Ok(false);
        }
        if masks.contains(&b.mask()) {
            // a repeated block is not a *family* of disjoint elements
            return Ok(false);
        }
        if seen & b.mask() != 0 {
            return Ok(false);
        }
        seen |= b.mask();
        masks.push(b.mask());
    }
    Ok(true)
}

/// True when the elements form a partition: cellular and jointly covering.
pub fn is_partition(algebra: GroundAlgebra, blocks: &[Element]) -> Result<bool> {
    if !is_cellular(algebra, blocks)? {
        return Ok(false);
    }
    let union = blocks.iter().fold(0u16, |m, b| m | b.mask());
    Ok(union == algebra.full_mask())
}

fn canonical_block_order(blocks: &mut [Element]) {
    blocks.sort_by_key(|b| b.min_atom().unwrap_or(usize::MAX));
}

impl CellularFamily {
    pub fn new(algebra: GroundAlgebra, mut blocks: Vec<Element>) -> Result<Self> {
        if !is_cellular(algebra, &blocks)? {
            return Err(Error::NotCellular(format!("{blocks:?}")));
        }
        canonical_block_order(&mut blocks);
        Ok(CellularFamily { blocks, algebra })
    }

    pub fn blocks(&self) -> &[Element] {
        &self.blocks
    }

    pub fn algebra(&self) -> GroundAlgebra {
        self.algebra
    }

    pub fn is_partition(&self) -> bool {
        let union = self.blocks.iter().fold(0u16, |m, b| m | b.mask());
        union == self.algebra.full_mask()
    }

    /// Completes the family to a partition by appending each uncovered atom
    /// as a singleton block, in ascending atom order.
    pub fn extend_to_maximal(&self) -> Partition {
        let covered = self.blocks.iter().fold(0u16, |m, b| m | b.mask());
        let mut blocks = self.blocks.clone();
        for i in 0..self.algebra.atom_count() {
            if covered & (1 << i) == 0 {
                blocks.push(self.algebra.atom(i).unwrap());
            }
        }
        canonical_block_order(&mut blocks);
        Partition { blocks, algebra: self.algebra }
    }
}

impl Partition {
    pub fn new(algebra: GroundAlgebra, mut blocks: Vec<Element>) -> Result<Self> {
        if !is_cellular(algebra, &blocks)? {
            return Err(Error::NotCellular(format!("{blocks:?}")));
        }
        let union = blocks.iter().fold(0u16, |m, b| m | b.mask());
        if union != algebra.full_mask() {
            return Err(Error::NotAPartition(format!(
                "{blocks:?} does not cover the algebra"
            )));
        }
        canonical_block_order(&mut blocks);
        Ok(Partition { blocks, algebra })
    }

    /// Builds a partition from atom lists, e.g. `[[0,1],[2,3]]`.
    pub fn from_atom_blocks(algebra: GroundAlgebra, blocks: &[Vec<usize>]) -> Result<Self> {
        let elems = blocks
            .iter()
            .map(|b| algebra.element(b))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(algebra, elems)
    }

    /// The finest partition: every atom is its own block.
    pub fn singletons(algebra: GroundAlgebra) -> Self {
        Partition {
            blocks: algebra.atoms().collect(),
            algebra,
        }
    }

    /// The coarsest partition: one block holding everything. Degenerates to
    /// the empty partition over the zero-atom algebra.
    pub fn coarsest(algebra: GroundAlgebra) -> Self {
        if algebra.atom_count() == 0 {
            Partition { blocks: Vec::new(), algebra }
        } else {
            Partition { blocks: vec![algebra.top()], algebra }
        }
    }

    pub fn blocks(&self) -> &[Element] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn algebra(&self) -> GroundAlgebra {
        self.algebra
    }

    pub fn contains_block(&self, e: Element) -> bool {
        self.blocks.contains(&e)
    }

    /// The unique block containing the atom.
    pub fn block_of_atom(&self, atom: usize) -> Result<Element> {
        self.blocks
            .iter()
            .copied()
            .find(|b| b.contains_atom(atom))
            .ok_or(Error::PointOutOfRange(atom))
    }

    pub fn block_index(&self, e: Element) -> Option<usize> {
        self.blocks.iter().position(|&b| b == e)
    }

    /// True when every block of `self` lies below a block of `other`.
    pub fn refines(&self, other: &Partition) -> Result<bool> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch(
                self.algebra.atom_count(),
                other.algebra.atom_count(),
            ));
        }
        'outer: for b in &self.blocks {
            for c in &other.blocks {
                if b.mask() & !c.mask() == 0 {
                    continue 'outer;
                }
            }
            return Ok(false);
        }
        Ok(true)
    }

    /// Meet in the refinement order: all nonzero pairwise intersections.
    /// The result refines both inputs and is the coarsest partition doing so.
    pub fn meet(&self, other: &Partition) -> Result<Partition> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch(
                self.algebra.atom_count(),
                other.algebra.atom_count(),
            ));
        }
        let mut blocks = Vec::new();
        for p in &self.blocks {
            for q in &other.blocks {
                let m = p.mask() & q.mask();
                if m != 0 {
                    blocks.push(self.algebra.element_from_mask(m).unwrap());
                }
            }
        }
        canonical_block_order(&mut blocks);
        Ok(Partition { blocks, algebra: self.algebra })
    }

    /// Finite powerset partitions always admit joins of arbitrary block
    /// subsets, so this is constantly true. It exists so partitions and
    /// their tree-side counterparts (where the answer can be no) answer the
    /// same question.
    pub fn is_subcomplete(&self) -> bool {
        true
    }

    /// The embedding of the powerset of this partition's blocks into the
    /// ambient algebra, sending a block set to its join. Injective, preserves
    /// all joins and complements.
    pub fn subcomplete_embedding(&self) -> Result<FunctionTable> {
        let source = GroundAlgebra::new(self.block_count())?;
        let target = self.algebra;
        FunctionTable::tabulate(source, target, |subset| {
            let mut mask = 0u16;
            for (i, b) in self.blocks.iter().enumerate() {
                if subset.contains_atom(i) {
                    mask |= b.mask();
                }
            }
            target.element_from_mask(mask).unwrap()
        })
    }

    /// All partitions coarsening `self`, i.e. everything above it in the
    /// refinement order. One per set partition of the block list.
    pub fn coarsenings(&self) -> Vec<Partition> {
        let k = self.block_count();
        growth_strings(k)
            .into_iter()
            .map(|assignment| {
                let groups = assignment.iter().copied().max().map_or(0, |m| m + 1);
                let mut masks = vec![0u16; groups];
                for (block, &g) in assignment.iter().enumerate() {
                    masks[g] |= self.blocks[block].mask();
                }
                let mut blocks: Vec<Element> = masks
                    .into_iter()
                    .map(|m| self.algebra.element_from_mask(m).unwrap())
                    .collect();
                canonical_block_order(&mut blocks);
                Partition { blocks, algebra: self.algebra }
            })
            .collect()
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.blocks).finish()
    }
}

impl fmt::Debug for CellularFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.blocks).finish()
    }
}

/// Restricted growth strings on `n` positions: position 0 maps to group 0,
/// and each later position uses a group at most one past the running
/// maximum. Enumerates set partitions of `{0..n}` without repeats.
fn growth_strings(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut current = vec![0usize; n];
    fn rec(current: &mut Vec<usize>, pos: usize, max_used: usize, out: &mut Vec<Vec<usize>>) {
        if pos == current.len() {
            out.push(current.clone());
            return;
        }
        for g in 0..=max_used + 1 {
            current[pos] = g;
            rec(current, pos + 1, max_used.max(g), out);
        }
    }
    rec(&mut current, 1, 0, &mut out);
    out
}

/// Every partition of the algebra, in a deterministic order. The count is
/// the Bell number of the atom count, so callers should keep the algebra
/// small; the command-line tool caps enumeration at six atoms.
pub fn all_partitions(algebra: GroundAlgebra) -> Vec<Partition> {
    Partition::singletons(algebra).coarsenings()
}

/// The map of an inverse system: sends each block of the finer partition to
/// the unique block of the coarser one containing it.
#[derive(Clone, PartialEq, Eq)]
pub struct CoarseningMap {
    source: Partition,
    target: Partition,
    assignment: Vec<usize>,
}

impl CoarseningMap {
    /// Errors with [`Error::NotRefining`] unless `source ⪯ target`.
    pub fn new(source: Partition, target: Partition) -> Result<Self> {
        if !source.refines(&target)? {
            return Err(Error::NotRefining);
        }
        let assignment = source
            .blocks()
            .iter()
            .map(|b| {
                target
                    .blocks()
                    .iter()
                    .position(|c| b.mask() & !c.mask() == 0)
                    .expect("refinement guarantees a containing block")
            })
            .collect();
        Ok(CoarseningMap { source, target, assignment })
    }

    pub fn identity(p: Partition) -> Self {
        let assignment = (0..p.block_count()).collect();
        CoarseningMap { source: p.clone(), target: p, assignment }
    }

    pub fn source(&self) -> &Partition {
        &self.source
    }

    pub fn target(&self) -> &Partition {
        &self.target
    }

    /// Image of a source block; errors if the element is not one.
    pub fn apply(&self, block: Element) -> Result<Element> {
        let i = self
            .source
            .block_index(block)
            .ok_or_else(|| Error::NotAPartition(format!("{block:?} is not a source block")))?;
        Ok(self.target.blocks()[self.assignment[i]])
    }

    /// `other` after `self`, defined when the middle partitions agree.
    pub fn then(&self, other: &CoarseningMap) -> Result<CoarseningMap> {
        if self.target != other.source {
            return Err(Error::NotComposable(
                "coarsening maps do not share the middle partition".into(),
            ));
        }
        let assignment = self
            .assignment
            .iter()
            .map(|&i| other.assignment[i])
            .collect();
        Ok(CoarseningMap {
            source: self.source.clone(),
            target: other.target.clone(),
            assignment,
        })
    }
}

impl fmt::Debug for CoarseningMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoarseningMap({:?} -> {:?})", self.source, self.target)
    }
}
