//! Finite Boolean algebras presented as powersets of a small atom set.
//!
//! Every algebra in this crate is the full powerset of `atoms` named
//! `0..atoms`, with elements stored as bitmasks. Sixteen atoms is the
//! materialization ceiling; anything wider lives on the lazy tree side.
//! The degenerate zero-atom algebra (where bottom and top coincide) is
//! representable because empty ground sets show up as duals of empty
//! spectra, but the verification sweeps never include it.

use std::fmt;

use crate::error::{Error, Result};

/// A finite powerset algebra, identified by its atom count.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAlgebra {
    atoms: u8,
}

impl GroundAlgebra {
    pub const MAX_ATOMS: usize = 16;

    pub fn new(atoms: usize) -> Result<Self> {
        if atoms > Self::MAX_ATOMS {
            return Err(Error::AtomCountOutOfRange(atoms));
        }
        Ok(GroundAlgebra { atoms: atoms as u8 })
    }

    pub fn atom_count(&self) -> usize {
        self.atoms as usize
    }

    /// Bitmask of the top element: all atoms set.
    pub fn full_mask(&self) -> u16 {
        if self.atoms == 0 {
            0
        } else {
            u16::MAX >> (16 - self.atoms)
        }
    }

    pub fn bottom(&self) -> Element {
        Element { mask: 0, algebra: *self }
    }

    pub fn top(&self) -> Element {
        Element { mask: self.full_mask(), algebra: *self }
    }

    /// The element with exactly the given atoms. Atoms out of range error.
    pub fn element(&self, atoms: &[usize]) -> Result<Element> {
        let mut mask = 0u16;
        for &a in atoms {
            if a >= self.atom_count() {
                return Err(Error::PointOutOfRange(a));
            }
            mask |= 1 << a;
        }
        Ok(Element { mask, algebra: *self })
    }

    /// Element from a raw bitmask; bits beyond the atom count error.
    pub fn element_from_mask(&self, mask: u16) -> Result<Element> {
        if mask & !self.full_mask() != 0 {
            return Err(Error::PointOutOfRange(mask.trailing_zeros() as usize));
        }
        Ok(Element { mask, algebra: *self })
    }

    pub fn atom(&self, index: usize) -> Result<Element> {
        self.element(&[index])
    }

    /// All elements in mask order, bottom first and top last.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        let algebra = *self;
        (0..=self.full_mask()).map(move |mask| Element { mask, algebra }).take(
            1usize << self.atoms,
        )
    }

    pub fn atoms(&self) -> impl Iterator<Item = Element> + '_ {
        let algebra = *self;
        (0..self.atom_count()).map(move |i| Element { mask: 1 << i, algebra })
    }

    pub fn element_count(&self) -> usize {
        1usize << self.atoms
    }
}

impl fmt::Debug for GroundAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({})", self.atoms)
    }
}

/// One element of a [`GroundAlgebra`]: a set of atoms stored as a bitmask.
///
/// Elements remember their algebra so cross-algebra operations can be
/// rejected instead of silently truncated.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    mask: u16,
    algebra: GroundAlgebra,
}

impl Element {
    pub fn mask(&self) -> u16 {
        self.mask
    }

    pub fn algebra(&self) -> GroundAlgebra {
        self.algebra
    }

    pub fn is_bottom(&self) -> bool {
        self.mask == 0
    }

    pub fn is_top(&self) -> bool {
        self.mask == self.algebra.full_mask()
    }

    pub fn atom_list(&self) -> Vec<usize> {
        (0..self.algebra.atom_count()).filter(|i| self.mask & (1 << i) != 0).collect()
    }

    pub fn contains_atom(&self, atom: usize) -> bool {
        atom < self.algebra.atom_count() && self.mask & (1 << atom) != 0
    }

    pub fn count_atoms(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// Index of the smallest atom, used for canonical block ordering.
    pub fn min_atom(&self) -> Option<usize> {
        if self.mask == 0 {
            None
        } else {
            Some(self.mask.trailing_zeros() as usize)
        }
    }

    fn check_same(self, other: Element) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::AlgebraMismatch(
                self.algebra.atom_count(),
                other.algebra.atom_count(),
            ));
        }
        Ok(())
    }

    pub fn meet(self, other: Element) -> Result<Element> {
        self.check_same(other)?;
        Ok(Element { mask: self.mask & other.mask, algebra: self.algebra })
    }

    pub fn join(self, other: Element) -> Result<Element> {
        self.check_same(other)?;
        Ok(Element { mask: self.mask | other.mask, algebra: self.algebra })
    }

    pub fn complement(self) -> Element {
        Element { mask: !self.mask & self.algebra.full_mask(), algebra: self.algebra }
    }

    pub fn leq(self, other: Element) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.mask & !other.mask == 0)
    }

    pub fn is_disjoint(self, other: Element) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.mask & other.mask == 0)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for a in self.atom_list() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

/// A family of elements indexed by position. Extended partitions allow
/// repeated zeros: entries at distinct positions must be disjoint and the
/// join of all entries must be the top element. Equivalently, every atom
/// lands in exactly one entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedPartition {
    entries: Vec<Element>,
    algebra: GroundAlgebra,
}

impl ExtendedPartition {
    pub fn try_new(algebra: GroundAlgebra, entries: Vec<Element>) -> Result<Self> {
        if !is_extended_partition(algebra, &entries)? {
            return Err(Error::NotAPartition(
                "entries are not pairwise disjoint with join 1".into(),
            ));
        }
        Ok(ExtendedPartition { entries, algebra })
    }

    pub fn entries(&self) -> &[Element] {
        &self.entries
    }

    pub fn algebra(&self) -> GroundAlgebra {
        self.algebra
    }
}

/// Checks the extended-partition conditions on an indexed family: entries at
/// distinct positions meet to bottom, and the family joins to top. `(0,0,1)`
/// qualifies; `(a,a,b)` with `a` nonzero does not.
pub fn is_extended_partition(algebra: GroundAlgebra, entries: &[Element]) -> Result<bool> {
    let mut seen = 0u16;
    for e in entries {
        if e.algebra() != algebra {
            return Err(Error::AlgebraMismatch(algebra.atom_count(), e.algebra().atom_count()));
        }
        if seen & e.mask() != 0 {
            return Ok(false);
        }
        seen |= e.mask();
    }
    Ok(seen == algebra.full_mask())
}

/// A total function between two finite algebras, tabulated on every source
/// element. Index `i` holds the image of the source element with mask `i`.
#[derive(Clone, PartialEq, Eq)]
pub struct FunctionTable {
    source: GroundAlgebra,
    target: GroundAlgebra,
    values: Vec<Element>,
}

impl FunctionTable {
    pub fn new(
        source: GroundAlgebra,
        target: GroundAlgebra,
        values: Vec<Element>,
    ) -> Result<Self> {
        if values.len() != source.element_count() {
            return Err(Error::IncompleteTable);
        }
        for v in &values {
            if v.algebra() != target {
                return Err(Error::AlgebraMismatch(
                    target.atom_count(),
                    v.algebra().atom_count(),
                ));
            }
        }
        Ok(FunctionTable { source, target, values })
    }

    /// Builds the table from a closure evaluated on every source element.
    pub fn tabulate(
        source: GroundAlgebra,
        target: GroundAlgebra,
        mut f: impl FnMut(Element) -> Element,
    ) -> Result<Self> {
        let values: Vec<Element> = source.elements().map(&mut f).collect();
        Self::new(source, target, values)
    }

    pub fn identity(algebra: GroundAlgebra) -> Self {
        FunctionTable {
            source: algebra,
            target: algebra,
            values: algebra.elements().collect(),
        }
    }

    pub fn source(&self) -> GroundAlgebra {
        self.source
    }

    pub fn target(&self) -> GroundAlgebra {
        self.target
    }

    pub fn apply(&self, x: Element) -> Result<Element> {
        if x.algebra() != self.source {
            return Err(Error::AlgebraMismatch(
                self.source.atom_count(),
                x.algebra().atom_count(),
            ));
        }
        Ok(self.values[x.mask() as usize])
    }

    /// Image of a family of elements, deduplicated, in first-seen order.
    pub fn image_family(&self, xs: &[Element]) -> Result<Vec<Element>> {
        let mut out: Vec<Element> = Vec::with_capacity(xs.len());
        for &x in xs {
            let y = self.apply(x)?;
            if !out.contains(&y) {
                out.push(y);
            }
        }
        Ok(out)
    }

    /// All source elements whose image satisfies the predicate.
    pub fn preimage_where(&self, mut pred: impl FnMut(Element) -> bool) -> Vec<Element> {
        self.source
            .elements()
            .filter(|&x| pred(self.values[x.mask() as usize]))
            .collect()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.element_count()];
        for v in &self.values {
            let i = v.mask() as usize;
            if seen[i] {
                return false;
            }
            seen[i] = true;
        }
        true
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.element_count()];
        for v in &self.values {
            seen[v.mask() as usize] = true;
        }
        seen.iter().all(|&b| b)
    }

    /// `other` after `self`; errors unless the algebras line up.
    pub fn then(&self, other: &FunctionTable) -> Result<FunctionTable> {
        if self.target != other.source {
            return Err(Error::NotComposable(format!(
                "target {:?} does not match source {:?}",
                self.target, other.source
            )));
        }
        let values = self
            .values
            .iter()
            .map(|v| other.values[v.mask() as usize])
            .collect();
        FunctionTable::new(self.source, other.target, values)
    }
}

impl fmt::Debug for FunctionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FunctionTable({:?} -> {:?})", self.source, self.target)
    }
}

/// Direct check of the homomorphism axioms on every element pair: bottom and
/// top are preserved, and so are binary meets, binary joins, and complements.
pub fn is_boolean_homomorphism(t: &FunctionTable) -> bool {
    let src = t.source();
    let full = src.full_mask();
    let vals = &t.values;
    if vals[0].mask() != 0 || vals[full as usize].mask() != t.target().full_mask() {
        return false;
    }
    let tgt_full = t.target().full_mask();
    for x in 0..=full {
        let fx = vals[x as usize].mask();
        if vals[(!x & full) as usize].mask() != !fx & tgt_full {
            return false;
        }
        for y in 0..=x {
            let fy = vals[y as usize].mask();
            if vals[(x & y) as usize].mask() != fx & fy {
                return false;
            }
            if vals[(x | y) as usize].mask() != fx | fy {
                return false;
            }
        }
        if x == full {
            break;
        }
    }
    true
}

/// All length-three extended partitions of the algebra, in lexicographic
/// mask order. Each atom is assigned to exactly one slot, so there are
/// `3^atoms` of them.
pub fn extended_triples(algebra: GroundAlgebra) -> Vec<[Element; 3]> {
    let full = algebra.full_mask();
    let mut out = Vec::new();
    let count = algebra.element_count() as u32;
    for a in 0..count {
        let a = a as u16;
        for b in 0..count {
            let b = b as u16;
            if a & b != 0 {
                continue;
            }
            let c = !(a | b) & full;
            out.push([
                Element { mask: a, algebra },
                Element { mask: b, algebra },
                Element { mask: c, algebra },
            ]);
        }
    }
    out
}

/// Homomorphism test by the triple criterion: a map is a homomorphism
/// exactly when it sends every length-three extended partition of the source
/// to an extended partition of the target. Independent of
/// [`is_boolean_homomorphism`]; the verification suites compare the two.
pub fn hom_via_triples(t: &FunctionTable) -> bool {
    let triples = extended_triples(t.source());
    maps_triples_to_extended(t, &triples)
}

/// The triple criterion against a precomputed triple list, for sweeps that
/// test many tables over one source.
pub fn maps_triples_to_extended(t: &FunctionTable, triples: &[[Element; 3]]) -> bool {
    let tgt_full = t.target().full_mask();
    for tr in triples {
        let fa = t.values[tr[0].mask() as usize].mask();
        let fb = t.values[tr[1].mask() as usize].mask();
        let fc = t.values[tr[2].mask() as usize].mask();
        if fa & fb != 0 || fa & fc != 0 || fb & fc != 0 || fa | fb | fc != tgt_full {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize) -> GroundAlgebra {
        GroundAlgebra::new(n).unwrap()
    }

    #[test]
    fn meet_of_overlapping_doubletons() {
        let b = p(3);
        let x = b.element(&[0, 1]).unwrap();
        let y = b.element(&[1, 2]).unwrap();
        assert_eq!(x.meet(y).unwrap(), b.element(&[1]).unwrap());
    }

    #[test]
    fn leq_is_mask_containment() {
        let b = p(3);
        let x = b.element(&[0]).unwrap();
        let y = b.element(&[0, 2]).unwrap();
        assert!(x.leq(y).unwrap());
        assert!(!y.leq(x).unwrap());
        assert!(b.bottom().leq(x).unwrap());
        assert!(x.leq(b.top()).unwrap());
    }

    #[test]
    fn cross_algebra_operations_are_rejected() {
        let x = p(2).top();
        let y = p(3).top();
        assert!(matches!(x.meet(y), Err(Error::AlgebraMismatch(2, 3))));
    }

    #[test]
    fn zero_zero_one_is_extended() {
        let b = p(2);
        let fam = vec![b.bottom(), b.bottom(), b.top()];
        assert!(is_extended_partition(b, &fam).unwrap());
    }

    #[test]
    fn element_with_complement_and_zero_is_extended() {
        let b = p(3);
        for a in b.elements() {
            let fam = vec![a, a.complement(), b.bottom()];
            assert!(is_extended_partition(b, &fam).unwrap());
        }
    }

    #[test]
    fn overlapping_pair_is_not_extended() {
        let b = p(2);
        let fam = vec![b.element(&[0]).unwrap(), b.top()];
        assert!(!is_extended_partition(b, &fam).unwrap());
    }

    #[test]
    fn repeated_nonzero_entry_is_not_extended() {
        let b = p(2);
        let a = b.element(&[0]).unwrap();
        let fam = vec![a, a, a.complement()];
        assert!(!is_extended_partition(b, &fam).unwrap());
    }

    // Deduplicated-set characterization: a family is extended exactly when
    // its distinct nonzero entries form a partition (pairwise disjoint,
    // join 1) and no nonzero entry repeats at two positions.
    #[test]
    fn extended_matches_set_characterization() {
        let b = p(2);
        let elems: Vec<Element> = b.elements().collect();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let fam = vec![elems[i], elems[j], elems[k]];
                    let set_reading = {
                        let mut nonzero: Vec<Element> =
                            fam.iter().copied().filter(|e| !e.is_bottom()).collect();
                        let distinct = {
                            let mut d = nonzero.clone();
                            d.sort();
                            d.dedup();
                            d.len() == nonzero.len()
                        };
                        nonzero.sort();
                        nonzero.dedup();
                        let disjoint = nonzero.iter().enumerate().all(|(i, x)| {
                            nonzero[..i].iter().all(|y| x.is_disjoint(*y).unwrap())
                        });
                        let join = nonzero.iter().fold(0u16, |m, e| m | e.mask());
                        distinct && disjoint && join == b.full_mask()
                    };
                    assert_eq!(
                        is_extended_partition(b, &fam).unwrap(),
                        set_reading,
                        "family {fam:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn triple_count_is_three_to_the_atoms() {
        assert_eq!(extended_triples(p(2)).len(), 9);
        assert_eq!(extended_triples(p(3)).len(), 27);
    }

    #[test]
    fn top_bottom_swap_is_not_a_homomorphism() {
        let b = p(2);
        let t = FunctionTable::tabulate(b, b, |x| {
            if x.is_bottom() {
                b.top()
            } else if x.is_top() {
                b.bottom()
            } else {
                x
            }
        })
        .unwrap();
        assert!(!hom_via_triples(&t));
        assert!(!is_boolean_homomorphism(&t));
    }

    #[test]
    fn atom_relabeling_is_a_homomorphism() {
        let b = p(3);
        // relabel atoms by the cycle 0 -> 1 -> 2 -> 0
        let t = FunctionTable::tabulate(b, b, |x| {
            let mut mask = 0u16;
            for a in x.atom_list() {
                mask |= 1 << ((a + 1) % 3);
            }
            b.element_from_mask(mask).unwrap()
        })
        .unwrap();
        assert!(is_boolean_homomorphism(&t));
        assert!(hom_via_triples(&t));
        assert!(t.is_injective());
    }

    #[test]
    fn identity_composes_neutrally() {
        let b = p(3);
        let id = FunctionTable::identity(b);
        let t = FunctionTable::tabulate(b, b, |x| x.complement()).unwrap();
        assert_eq!(id.then(&t).unwrap(), t);
        assert_eq!(t.then(&id).unwrap(), t);
    }

    #[test]
    fn zero_atom_algebra_is_degenerate() {
        let b = p(0);
        assert_eq!(b.element_count(), 1);
        assert!(b.bottom().is_top());
    }
}
