//! Maps that respect partition filters.
//!
//! A table is *partitional* for a source filter when it is a Boolean
//! homomorphism and the nonzero image of every filter member is a partition
//! of the target; it is a *partition homomorphism* when those images
//! additionally land in the target's filter. Two independent routes decide
//! partitionality: the definition above, and the extended-partition route
//! that never mentions the homomorphism axioms. The verification suites
//! sweep every table at desk scale to confirm the routes agree on valid
//! source structures.
//!
//! The member quantifier is evaluated on the filter's base alone: for a
//! homomorphism, a partition image of the base forces partition images of
//! every coarsening (images of merged blocks are joins of images). The
//! `*_by_members` forms spell out the full quantifier and exist so the
//! suites can cross-check the reduction instead of trusting it.

use std::fmt;

use crate::algebra::{
    is_boolean_homomorphism, is_extended_partition, Element, FunctionTable, GroundAlgebra,
};
use crate::error::{Error, Result};
use crate::lattice::{is_partition, Partition};
use crate::partition_algebra::{BooleanPartitionAlgebra, PartitionBound};

fn check_source(table: &FunctionTable, source: &BooleanPartitionAlgebra) -> Result<()> {
    if table.source() != source.algebra() {
        return Err(Error::AlgebraMismatch(
            source.algebra().atom_count(),
            table.source().atom_count(),
        ));
    }
    Ok(())
}

/// Nonzero image family of a partition, deduplicated.
fn nonzero_image(table: &FunctionTable, p: &Partition) -> Result<Vec<Element>> {
    let mut img = table.image_family(p.blocks())?;
    img.retain(|e| !e.is_bottom());
    Ok(img)
}

/// Partitional by definition, with the member quantifier reduced to the
/// filter base.
pub fn is_partitional(table: &FunctionTable, source: &BooleanPartitionAlgebra) -> Result<bool> {
    check_source(table, source)?;
    if !is_boolean_homomorphism(table) {
        return Ok(false);
    }
    let img = nonzero_image(table, source.filter().base())?;
    is_partition(table.target(), &img)
}

/// Partitional with the quantifier spelled out over every filter member.
/// Desk-scale only; the suites compare this with [`is_partitional`].
pub fn is_partitional_by_members(
    table: &FunctionTable,
    source: &BooleanPartitionAlgebra,
) -> Result<bool> {
    check_source(table, source)?;
    if !is_boolean_homomorphism(table) {
        return Ok(false);
    }
    for m in source.filter().members() {
        let img = nonzero_image(table, &m)?;
        if !is_partition(table.target(), &img)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Partition homomorphism: partitional, and every image partition is a
/// member of the target filter. Quantifier reduced to the base.
pub fn is_partition_hom(
    table: &FunctionTable,
    source: &BooleanPartitionAlgebra,
    target: &BooleanPartitionAlgebra,
) -> Result<bool> {
    check_source(table, source)?;
    if table.target() != target.algebra() {
        return Err(Error::AlgebraMismatch(
            target.algebra().atom_count(),
            table.target().atom_count(),
        ));
    }
    if !is_boolean_homomorphism(table) {
        return Ok(false);
    }
    let img = nonzero_image(table, source.filter().base())?;
    if !is_partition(table.target(), &img)? {
        return Ok(false);
    }
    target.filter().contains(&Partition::new(table.target(), img)?)
}

/// Partition homomorphism with the quantifier spelled out over members.
pub fn is_partition_hom_by_members(
    table: &FunctionTable,
    source: &BooleanPartitionAlgebra,
    target: &BooleanPartitionAlgebra,
) -> Result<bool> {
    check_source(table, source)?;
    if !is_boolean_homomorphism(table) {
        return Ok(false);
    }
    for m in source.filter().members() {
        let img = nonzero_image(table, &m)?;
        if !is_partition(table.target(), &img)? {
            return Ok(false);
        }
        if !target.filter().contains(&Partition::new(table.target(), img)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The second route to partitionality: zero maps to zero and the indexed
/// image of every filter member is an extended partition of the target.
/// Never consults the homomorphism axioms; agreement with
/// [`is_partitional`] on valid structures is a checked law, not an
/// implementation shortcut.
pub fn partitional_via_extended(
    table: &FunctionTable,
    source: &BooleanPartitionAlgebra,
) -> Result<bool> {
    check_source(table, source)?;
    if !table.apply(table.source().bottom())?.is_bottom() {
        return Ok(false);
    }
    for m in source.filter().members() {
        let images = m
            .blocks()
            .iter()
            .map(|&b| table.apply(b))
            .collect::<Result<Vec<_>>>()?;
        if !is_extended_partition(table.target(), &images)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A verified partition homomorphism between two partition algebras.
#[derive(Clone, PartialEq, Eq)]
pub struct PartitionHom {
    table: FunctionTable,
    source: BooleanPartitionAlgebra,
    target: BooleanPartitionAlgebra,
}

impl PartitionHom {
    pub fn new(
        source: BooleanPartitionAlgebra,
        target: BooleanPartitionAlgebra,
        table: FunctionTable,
    ) -> Result<Self> {
        if !is_partition_hom(&table, &source, &target)? {
            return Err(Error::NotPartitional(format!(
                "table {:?} -> {:?} fails the partition homomorphism conditions",
                table.source(),
                table.target()
            )));
        }
        Ok(PartitionHom { table, source, target })
    }

    /// Wraps a partitional table as a homomorphism into the target's full
    /// structure, the canonical codomain for bare-algebra targets.
    pub fn into_full_target(
        source: BooleanPartitionAlgebra,
        target: GroundAlgebra,
        table: FunctionTable,
    ) -> Result<Self> {
        Self::new(
            source,
            BooleanPartitionAlgebra::full(target, PartitionBound::Arbitrary),
            table,
        )
    }

    pub fn identity(bpa: &BooleanPartitionAlgebra) -> Self {
        PartitionHom {
            table: FunctionTable::identity(bpa.algebra()),
            source: bpa.clone(),
            target: bpa.clone(),
        }
    }

    pub fn table(&self) -> &FunctionTable {
        &self.table
    }

    pub fn source(&self) -> &BooleanPartitionAlgebra {
        &self.source
    }

    pub fn target(&self) -> &BooleanPartitionAlgebra {
        &self.target
    }

    pub fn apply(&self, x: Element) -> Result<Element> {
        self.table.apply(x)
    }

    /// `other` after `self`, verified to be a partition homomorphism again.
    pub fn then(&self, other: &PartitionHom) -> Result<PartitionHom> {
        if self.target != other.source {
            return Err(Error::NotComposable(
                "middle partition algebras differ".into(),
            ));
        }
        PartitionHom::new(
            self.source.clone(),
            other.target.clone(),
            self.table.then(&other.table)?,
        )
    }
}

impl fmt::Debug for PartitionHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PartitionHom({:?} -> {:?})",
            self.source.algebra(),
            self.target.algebra()
        )
    }
}

/// Every Boolean homomorphism from one powerset algebra to another. Each is
/// the preimage map of a unique function from target atoms to source atoms,
/// so there are `source_atoms ^ target_atoms` of them. Deterministic order.
pub fn all_homomorphisms(source: GroundAlgebra, target: GroundAlgebra) -> Vec<FunctionTable> {
    let s = source.atom_count();
    let t = target.atom_count();
    let count = s.pow(t as u32);
    let mut out = Vec::with_capacity(count);
    // digits of `index` in base `s` give the atom assignment
    for index in 0..count {
        let mut assignment = Vec::with_capacity(t);
        let mut rest = index;
        for _ in 0..t {
            assignment.push(rest % s);
            rest /= s;
        }
        let table = FunctionTable::tabulate(source, target, |x| {
            let mut mask = 0u16;
            for (j, &a) in assignment.iter().enumerate() {
                if x.contains_atom(a) {
                    mask |= 1 << j;
                }
            }
            target.element_from_mask(mask).unwrap()
        })
        .unwrap();
        out.push(table);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition_algebra::PartitionBound;

    fn p(n: usize) -> GroundAlgebra {
        GroundAlgebra::new(n).unwrap()
    }

    fn full(n: usize) -> BooleanPartitionAlgebra {
        BooleanPartitionAlgebra::full(p(n), PartitionBound::Arbitrary)
    }

    /// The block-collapse table from four atoms onto two: preimage map of
    /// the section sending target atom j to source atom 2j.
    fn collapse_4_to_2() -> FunctionTable {
        let s = p(4);
        let t = p(2);
        FunctionTable::tabulate(s, t, |x| {
            let mut mask = 0u16;
            if x.contains_atom(0) {
                mask |= 1;
            }
            if x.contains_atom(2) {
                mask |= 2;
            }
            t.element_from_mask(mask).unwrap()
        })
        .unwrap()
    }

    #[test]
    fn collapse_is_partitional() {
        let table = collapse_4_to_2();
        let source = full(4);
        assert!(is_partitional(&table, &source).unwrap());
        assert!(is_partitional_by_members(&table, &source).unwrap());
        assert!(partitional_via_extended(&table, &source).unwrap());
        assert!(is_partition_hom(&table, &source, &full(2)).unwrap());
    }

    #[test]
    fn nonzero_to_top_is_not_partitional() {
        // sends every nonzero element of P(2) to the top of P(1)
        let s = p(2);
        let t = p(1);
        let table = FunctionTable::tabulate(s, t, |x| {
            if x.is_bottom() {
                t.bottom()
            } else {
                t.top()
            }
        })
        .unwrap();
        let source = full(2);
        // the singleton partition maps to {1, 1}: as a *set* that is the
        // one-block partition, but the indexed family repeats a nonzero
        // entry, and the table is not a homomorphism. Both routes say no.
        assert!(!is_boolean_homomorphism(&table));
        assert!(!is_partitional(&table, &source).unwrap());
        assert!(!partitional_via_extended(&table, &source).unwrap());
        let img = table
            .image_family(Partition::singletons(s).blocks())
            .unwrap();
        assert!(is_partition(t, &img).unwrap());
    }

    #[test]
    fn routes_may_split_on_invalid_sources() {
        // On a broken filter the extended route quantifies over too few
        // partitions to force the homomorphism axioms.
        let s = p(4);
        let split = Partition::from_atom_blocks(s, &[vec![0, 1], vec![2, 3]]).unwrap();
        let source = BooleanPartitionAlgebra::from_generators(s, vec![split]).unwrap();
        let t = p(2);
        let table = FunctionTable::tabulate(s, t, |x| {
            // decided by the two halves only; not a homomorphism
            let mut mask = 0u16;
            if x.contains_atom(0) || x.contains_atom(1) {
                mask |= 1;
            }
            if x.contains_atom(2) || x.contains_atom(3) {
                mask |= 2;
            }
            t.element_from_mask(mask).unwrap()
        })
        .unwrap();
        assert!(partitional_via_extended(&table, &source).unwrap());
        assert!(!is_partitional(&table, &source).unwrap());
    }

    #[test]
    fn composition_of_collapses_is_a_partition_hom() {
        let first = PartitionHom::new(full(4), full(2), collapse_4_to_2()).unwrap();
        let t1 = p(2);
        let t2 = p(1);
        let second_table = FunctionTable::tabulate(t1, t2, |x| {
            if x.contains_atom(0) {
                t2.top()
            } else {
                t2.bottom()
            }
        })
        .unwrap();
        let second = PartitionHom::new(full(2), full(1), second_table).unwrap();
        let composite = first.then(&second).unwrap();
        assert!(is_partitional(composite.table(), composite.source()).unwrap());
    }

    #[test]
    fn composite_images_factor_through_block_images() {
        let f = collapse_4_to_2();
        let t1 = p(2);
        let t2 = p(1);
        let g = FunctionTable::tabulate(t1, t2, |x| {
            if x.contains_atom(0) {
                t2.top()
            } else {
                t2.bottom()
            }
        })
        .unwrap();
        let gf = f.then(&g).unwrap();
        for m in full(4).filter().members() {
            let direct = nonzero_image(&gf, &m).unwrap();
            let mut staged = g
                .image_family(&nonzero_image(&f, &m).unwrap())
                .unwrap();
            staged.retain(|e| !e.is_bottom());
            assert_eq!(direct, staged, "member {m:?}");
        }
    }

    #[test]
    fn hom_enumeration_counts() {
        assert_eq!(all_homomorphisms(p(3), p(2)).len(), 9);
        assert_eq!(all_homomorphisms(p(2), p(3)).len(), 8);
        for t in all_homomorphisms(p(3), p(2)) {
            assert!(is_boolean_homomorphism(&t));
        }
    }

    #[test]
    fn identity_is_neutral_for_composition() {
        let f = PartitionHom::new(full(4), full(2), collapse_4_to_2()).unwrap();
        assert_eq!(f.then(&PartitionHom::identity(&full(2))).unwrap(), f);
        assert_eq!(PartitionHom::identity(&full(4)).then(&f).unwrap(), f);
    }
}
