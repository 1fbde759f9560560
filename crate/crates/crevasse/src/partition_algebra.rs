//! Filters of partitions on a finite algebra and the structures they carry:
//! ultrafilters that meet every filter member exactly once, coherent block
//! selections along the refinement order, and the translations between the
//! two.
//!
//! A filter here is always principal: the refinement lattice of a finite
//! algebra is finite, so a generator set collapses to its meet. The pair
//! (algebra, filter) is kept even when it fails the partition-algebra
//! conditions, because diagnosing *which* condition fails is part of the
//! public interface; [`BooleanPartitionAlgebra::validate`] reports the three
//! conditions separately and [`induced`](BooleanPartitionAlgebra::induced)
//! repairs any filter into a fully valid structure on a smaller algebra.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{Element, GroundAlgebra};
use crate::error::{Error, Result};
use crate::lattice::{CoarseningMap, Partition};

/// A principal filter in the refinement order, stored by generators and
/// their meet.
#[derive(Clone, PartialEq, Eq)]
pub struct PartitionFilter {
    algebra: GroundAlgebra,
    generators: Vec<Partition>,
    base: Partition,
}

impl PartitionFilter {
    /// Upward closure of the generators. No generators means the filter
    /// holding only the coarsest partition.
    pub fn from_generators(algebra: GroundAlgebra, generators: Vec<Partition>) -> Result<Self> {
        let mut base = Partition::coarsest(algebra);
        for g in &generators {
            if g.algebra() != algebra {
                return Err(Error::AlgebraMismatch(
                    algebra.atom_count(),
                    g.algebra().atom_count(),
                ));
            }
            base = base.meet(g)?;
        }
        Ok(PartitionFilter { algebra, generators, base })
    }

    pub fn algebra(&self) -> GroundAlgebra {
        self.algebra
    }

    pub fn generators(&self) -> &[Partition] {
        &self.generators
    }

    /// The meet of all generators; membership is refinement by this.
    pub fn base(&self) -> &Partition {
        &self.base
    }

    pub fn contains(&self, p: &Partition) -> Result<bool> {
        self.base.refines(p)
    }

    /// Every member, i.e. every partition the base refines. The count is the
    /// Bell number of the base's block count.
    pub fn members(&self) -> Vec<Partition> {
        self.base.coarsenings()
    }
}

impl fmt::Debug for PartitionFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartitionFilter(base = {:?})", self.base)
    }
}

/// Whether block counts of filter members are bounded. On a finite algebra
/// the two bounds describe the same filter; the distinction matters only to
/// callers recording which convention they asked for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionBound {
    Finite,
    Arbitrary,
}

/// An algebra together with a partition filter, valid or not.
#[derive(Clone, PartialEq, Eq)]
pub struct BooleanPartitionAlgebra {
    filter: PartitionFilter,
}

/// The three defining conditions, reported separately. They stand or fall
/// together: the verification suites check pairwise equivalence on every
/// principal filter at desk scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Validity {
    /// Every element outside {0, 1} forms a two-block member with its
    /// complement.
    pub two_block_members: bool,
    /// Every nonzero element appears as a block of some member.
    pub every_element_blocked: bool,
    /// Every partition of the algebra is a member.
    pub all_partitions_included: bool,
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        self.two_block_members && self.every_element_blocked && self.all_partitions_included
    }
}

impl BooleanPartitionAlgebra {
    pub fn new(filter: PartitionFilter) -> Self {
        BooleanPartitionAlgebra { filter }
    }

    pub fn from_generators(algebra: GroundAlgebra, generators: Vec<Partition>) -> Result<Self> {
        Ok(Self::new(PartitionFilter::from_generators(algebra, generators)?))
    }

    /// The filter of all partitions. On a finite algebra this is the only
    /// valid structure, whichever block-count bound is requested.
    pub fn full(algebra: GroundAlgebra, _bound: PartitionBound) -> Self {
        let base = Partition::singletons(algebra);
        BooleanPartitionAlgebra {
            filter: PartitionFilter {
                algebra,
                generators: vec![base.clone()],
                base,
            },
        }
    }

    pub fn algebra(&self) -> GroundAlgebra {
        self.filter.algebra
    }

    pub fn filter(&self) -> &PartitionFilter {
        &self.filter
    }

    /// Evaluates the three defining conditions. The member quantifiers are
    /// settled at the base: members are exactly the base's coarsenings, so
    /// their blocks are exactly the nonzero unions of base blocks (any such
    /// union b sits in the member {b, rest}), and the filter holds every
    /// partition exactly when it holds the finest one. The verification
    /// suite replays both reductions against literal member sweeps.
    pub fn validate(&self) -> Validity {
        let algebra = self.algebra();
        let base = self.filter.base();

        let mut two_block_members = true;
        for b in algebra.elements() {
            if b.is_bottom() || b.is_top() {
                continue;
            }
            let pair = Partition::new(algebra, vec![b, b.complement()]).unwrap();
            if !self.filter.contains(&pair).unwrap() {
                two_block_members = false;
                break;
            }
        }

        let union_of_base_blocks = |b: Element| {
            base.blocks()
                .iter()
                .all(|blk| blk.mask() & b.mask() == 0 || blk.mask() & !b.mask() == 0)
        };
        let every_element_blocked = algebra
            .elements()
            .all(|b| b.is_bottom() || union_of_base_blocks(b));

        let all_partitions_included = self
            .filter
            .contains(&Partition::singletons(algebra))
            .unwrap();

        Validity {
            two_block_members,
            every_element_blocked,
            all_partitions_included,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    /// True when every filter member is a subcomplete partition. Checking
    /// the base suffices: subcompleteness travels up the coarsening order.
    pub fn is_subcomplete(&self) -> bool {
        self.filter.base().is_subcomplete()
    }

    /// Restricts the structure to the elements actually used by the filter:
    /// zero plus all blocks of all members. That set is closed under the
    /// algebra operations and forms a powerset algebra whose atoms are the
    /// base blocks; the filter carries over generator by generator. The
    /// result is valid whatever the input was.
    pub fn induced(&self) -> InducedAlgebra {
        let base = self.filter.base();
        let carriers: Vec<Element> = base.blocks().to_vec();
        let algebra = GroundAlgebra::new(carriers.len())
            .expect("base blocks never outnumber atoms");
        let restrict = |e: Element| -> Element {
            let mut mask = 0u16;
            for (i, c) in carriers.iter().enumerate() {
                if c.mask() & e.mask() != 0 {
                    mask |= 1 << i;
                }
            }
            algebra.element_from_mask(mask).unwrap()
        };
        let generators: Vec<Partition> = self
            .filter
            .generators()
            .iter()
            .map(|g| {
                let blocks = g.blocks().iter().map(|&b| restrict(b)).collect();
                Partition::new(algebra, blocks).expect("blocks restrict to blocks")
            })
            .collect();
        let generators = if generators.is_empty() {
            vec![Partition::coarsest(algebra)]
        } else {
            generators
        };
        let inner = BooleanPartitionAlgebra::from_generators(algebra, generators)
            .expect("restricted generators live on the induced algebra");
        InducedAlgebra { inner, carriers, source: self.algebra() }
    }
}

impl fmt::Debug for BooleanPartitionAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BooleanPartitionAlgebra({:?}, {:?})", self.algebra(), self.filter)
    }
}

/// A partition algebra rebuilt on the elements a filter actually uses,
/// remembering which source element each new atom came from.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InducedAlgebra {
    inner: BooleanPartitionAlgebra,
    carriers: Vec<Element>,
    source: GroundAlgebra,
}

impl InducedAlgebra {
    pub fn bpa(&self) -> &BooleanPartitionAlgebra {
        &self.inner
    }

    pub fn algebra(&self) -> GroundAlgebra {
        self.inner.algebra()
    }

    pub fn source_algebra(&self) -> GroundAlgebra {
        self.source
    }

    /// The source element represented by the given induced atom.
    pub fn carriers(&self) -> &[Element] {
        &self.carriers
    }

    /// Expands an induced element back to the source algebra.
    pub fn expand(&self, e: Element) -> Result<Element> {
        if e.algebra() != self.algebra() {
            return Err(Error::AlgebraMismatch(
                self.algebra().atom_count(),
                e.algebra().atom_count(),
            ));
        }
        let mut mask = 0u16;
        for (i, c) in self.carriers.iter().enumerate() {
            if e.contains_atom(i) {
                mask |= c.mask();
            }
        }
        self.source.element_from_mask(mask)
    }

    /// Contracts a source element to the induced algebra, if it is a union
    /// of carriers.
    pub fn contract(&self, e: Element) -> Option<Element> {
        let mut mask = 0u16;
        let mut covered = 0u16;
        for (i, c) in self.carriers.iter().enumerate() {
            if c.mask() & e.mask() != 0 {
                if c.mask() & !e.mask() != 0 {
                    return None;
                }
                mask |= 1 << i;
                covered |= c.mask();
            }
        }
        if covered != e.mask() {
            return None;
        }
        Some(self.algebra().element_from_mask(mask).unwrap())
    }
}

/// An ultrafilter on a finite powerset algebra, stored by the atom it
/// concentrates on. Its member set is everything containing that atom.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ultrafilter {
    algebra: GroundAlgebra,
    atom: usize,
}

impl Ultrafilter {
    pub fn principal(algebra: GroundAlgebra, atom: usize) -> Result<Self> {
        if atom >= algebra.atom_count() {
            return Err(Error::PointOutOfRange(atom));
        }
        Ok(Ultrafilter { algebra, atom })
    }

    /// Checks the ultrafilter axioms on an explicit element set and recovers
    /// the concentration atom. Errors spell out the violated axiom.
    pub fn from_element_set(algebra: GroundAlgebra, set: &[Element]) -> Result<Self> {
        for e in set {
            if e.algebra() != algebra {
                return Err(Error::AlgebraMismatch(
                    algebra.atom_count(),
                    e.algebra().atom_count(),
                ));
            }
        }
        let contains = |m: u16| set.iter().any(|e| e.mask() == m);
        if !contains(algebra.full_mask()) {
            return Err(Error::NotAnUltrafilter("missing the top element".into()));
        }
        if contains(0) {
            return Err(Error::NotAnUltrafilter("contains the bottom element".into()));
        }
        for x in set {
            for y in set {
                if !contains(x.mask() & y.mask()) {
                    return Err(Error::NotAnUltrafilter(format!(
                        "not meet-closed at {x:?}, {y:?}"
                    )));
                }
            }
            for up in algebra.elements() {
                if x.mask() & !up.mask() == 0 && !contains(up.mask()) {
                    return Err(Error::NotAnUltrafilter(format!(
                        "not upward closed above {x:?}"
                    )));
                }
            }
        }
        for e in algebra.elements() {
            if contains(e.mask()) == contains(!e.mask() & algebra.full_mask()) {
                return Err(Error::NotAnUltrafilter(format!(
                    "undecided between {e:?} and its complement"
                )));
            }
        }
        let meet = set.iter().fold(algebra.full_mask(), |m, e| m & e.mask());
        debug_assert_eq!(meet.count_ones(), 1);
        Ok(Ultrafilter { algebra, atom: meet.trailing_zeros() as usize })
    }

    pub fn algebra(&self) -> GroundAlgebra {
        self.algebra
    }

    pub fn atom(&self) -> usize {
        self.atom
    }

    pub fn contains(&self, e: Element) -> Result<bool> {
        if e.algebra() != self.algebra {
            return Err(Error::AlgebraMismatch(
                self.algebra.atom_count(),
                e.algebra().atom_count(),
            ));
        }
        Ok(e.contains_atom(self.atom))
    }

    pub fn elements(&self) -> Vec<Element> {
        self.algebra
            .elements()
            .filter(|e| e.contains_atom(self.atom))
            .collect()
    }

    /// How many blocks of the partition belong to the ultrafilter.
    pub fn blocks_hit(&self, p: &Partition) -> Result<usize> {
        let mut n = 0;
        for &b in p.blocks() {
            if self.contains(b)? {
                n += 1;
            }
        }
        Ok(n)
    }
}

impl fmt::Debug for Ultrafilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ultrafilter@{}", self.atom)
    }
}

/// The members that pin down the whole filter: the base and the generators.
/// Every other member coarsens the base, so facts stated blockwise over all
/// members reduce to these.
fn determining_members(filter: &PartitionFilter) -> Vec<Partition> {
    let mut out = vec![filter.base().clone()];
    for g in filter.generators() {
        if !out.contains(g) {
            out.push(g.clone());
        }
    }
    out
}

/// Ultrafilters hitting every member of the filter exactly once, without
/// any validity gate. Private: public enumeration goes through
/// [`enumerate_filter_ultrafilters`], which insists on a valid structure.
/// Checking the base and the generators is exhaustive: the unique block of
/// a coarsening that holds the candidate's atom is the one absorbing the
/// unique base block holding it.
fn filter_ultrafilters_raw(filter: &PartitionFilter) -> Vec<Ultrafilter> {
    let algebra = filter.algebra();
    let checking = determining_members(filter);
    (0..algebra.atom_count())
        .map(|a| Ultrafilter { algebra, atom: a })
        .filter(|u| checking.iter().all(|m| u.blocks_hit(m).unwrap() == 1))
        .collect()
}

/// All ultrafilters meeting every filter member exactly once, in atom
/// order. Errors unless the structure is valid; diagnostics for invalid
/// filters come from [`stability_report`] instead.
pub fn enumerate_filter_ultrafilters(
    bpa: &BooleanPartitionAlgebra,
) -> Result<Vec<Ultrafilter>> {
    if !bpa.is_valid() {
        return Err(Error::InvalidAlgebra);
    }
    Ok(filter_ultrafilters_raw(bpa.filter()))
}

/// A raw association of filter members to chosen blocks, not yet checked
/// for coherence.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Selection {
    pub choices: Vec<(Partition, Element)>,
}

/// A coherent block selection: one block per filter member, compatible with
/// every coarsening map between members. The base choice determines all the
/// others, because every member coarsens the base; only explicitly supplied
/// choices are stored and everything else is recomputed on demand, so a
/// point costs the same on a two-member filter and on one with billions of
/// members.
#[derive(Clone)]
pub struct LimitPoint {
    filter: PartitionFilter,
    choices: BTreeMap<Partition, Element>,
}

impl PartialEq for LimitPoint {
    fn eq(&self, other: &Self) -> bool {
        self.filter == other.filter && self.base_choice() == other.base_choice()
    }
}

impl Eq for LimitPoint {}

impl LimitPoint {
    /// Verifies a raw selection. It must choose a block of the base; every
    /// further pair must pick a block of an actual member and agree with
    /// the block absorbing the base choice there. Agreement with the base
    /// forces agreement across every coarsening map between given members,
    /// since absorption composes along chains of coarsenings.
    pub fn from_selection(filter: &PartitionFilter, selection: &Selection) -> Result<Self> {
        let mut choices = BTreeMap::new();
        for (p, x) in &selection.choices {
            if !filter.contains(p)? {
                return Err(Error::IncoherentSelection(format!(
                    "{p:?} is not a filter member"
                )));
            }
            if !p.contains_block(*x) {
                return Err(Error::IncoherentSelection(format!(
                    "{x:?} is not a block of {p:?}"
                )));
            }
            if let Some(prev) = choices.insert(p.clone(), *x) {
                if prev != *x {
                    return Err(Error::IncoherentSelection(format!(
                        "two different choices on {p:?}"
                    )));
                }
            }
        }
        let base = filter.base();
        let Some(&seed) = choices.get(base) else {
            return Err(Error::IncoherentSelection(
                "no choice on the base, which the others must coarsen".into(),
            ));
        };
        for (p, &x) in &choices {
            let map = CoarseningMap::new(base.clone(), p.clone())?;
            if map.apply(seed)? != x {
                return Err(Error::IncoherentSelection(format!(
                    "the base choice does not coarsen to the choice on {p:?}"
                )));
            }
        }
        Ok(LimitPoint { filter: filter.clone(), choices })
    }

    /// The coherent selection generated by one base block: every member gets
    /// the block absorbing it.
    pub fn from_base_block(filter: &PartitionFilter, block: Element) -> Result<Self> {
        let base = filter.base();
        if !base.contains_block(block) {
            return Err(Error::IncoherentSelection(format!(
                "{block:?} is not a base block"
            )));
        }
        let mut choices = BTreeMap::new();
        choices.insert(base.clone(), block);
        Ok(LimitPoint { filter: filter.clone(), choices })
    }

    pub fn filter(&self) -> &PartitionFilter {
        &self.filter
    }

    /// The chosen block on any member: the stored value if one was given,
    /// otherwise the block absorbing the base choice.
    pub fn choice(&self, p: &Partition) -> Result<Element> {
        if let Some(&x) = self.choices.get(p) {
            return Ok(x);
        }
        if !self.filter.contains(p)? {
            return Err(Error::IncoherentSelection(format!(
                "{p:?} is not a member"
            )));
        }
        let map = CoarseningMap::new(self.filter.base().clone(), p.clone())?;
        map.apply(self.base_choice())
    }

    /// The explicitly stored choices; [`choice`](Self::choice) derives the
    /// rest from the base.
    pub fn choices(&self) -> impl Iterator<Item = (&Partition, Element)> {
        self.choices.iter().map(|(p, &x)| (p, x))
    }

    /// The choice on the base, which determines all the others.
    pub fn base_choice(&self) -> Element {
        self.choices[self.filter.base()]
    }
}

impl fmt::Debug for LimitPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LimitPoint(base -> {:?})", self.base_choice())
    }
}

/// Every coherent selection along the filter, one per base block.
pub fn coherent_limit_points(filter: &PartitionFilter) -> Vec<LimitPoint> {
    filter
        .base()
        .blocks()
        .iter()
        .map(|&b| LimitPoint::from_base_block(filter, b).unwrap())
        .collect()
}

/// Turns a coherent selection into the upward closure of its chosen blocks
/// and checks that the result is an ultrafilter hitting each determining
/// member once. Every chosen block absorbs the base choice, so the closure
/// of all of them is the closure of the base choice alone.
pub fn limit_to_ultrafilter(
    bpa: &BooleanPartitionAlgebra,
    point: &LimitPoint,
) -> Result<Ultrafilter> {
    let algebra = bpa.algebra();
    let seed = point.base_choice();
    let closure: Vec<Element> = algebra
        .elements()
        .filter(|e| seed.mask() & !e.mask() == 0)
        .collect();
    let u = Ultrafilter::from_element_set(algebra, &closure)?;
    for m in determining_members(bpa.filter()) {
        if u.blocks_hit(&m)? != 1 {
            return Err(Error::NotAnUltrafilter(format!(
                "closure misses member {m:?}"
            )));
        }
    }
    Ok(u)
}

/// Reads off the coherent selection inside an ultrafilter: the unique block
/// it contains from each determining member. Errors if one of them is hit
/// more or less than once.
pub fn ultrafilter_to_limit(
    bpa: &BooleanPartitionAlgebra,
    u: &Ultrafilter,
) -> Result<LimitPoint> {
    if u.algebra() != bpa.algebra() {
        return Err(Error::AlgebraMismatch(
            bpa.algebra().atom_count(),
            u.algebra().atom_count(),
        ));
    }
    let mut choices = Vec::new();
    for m in determining_members(bpa.filter()) {
        let hits: Vec<Element> = m
            .blocks()
            .iter()
            .copied()
            .filter(|&b| u.contains(b).unwrap())
            .collect();
        if hits.len() != 1 {
            return Err(Error::NotAnUltrafilter(format!(
                "member {m:?} is hit {} times",
                hits.len()
            )));
        }
        choices.push((m, hits[0]));
    }
    LimitPoint::from_selection(bpa.filter(), &Selection { choices })
}

/// Four readings of stability, each computed from its own definition. On a
/// valid finite structure they agree; on a broken filter they can split,
/// which is exactly what the dual-construction diagnostics rely on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    /// Every nonzero element is chosen by some coherent selection on some
    /// member.
    pub selections_reach_every_element: bool,
    /// For each member, every block is chosen by some coherent selection.
    pub projections_surjective: bool,
    /// The union of all filter ultrafilters is everything but zero.
    pub ultrafilters_cover: bool,
    /// The intersection of all filter ultrafilters is exactly the top.
    pub ultrafilter_core_trivial: bool,
}

impl StabilityReport {
    pub fn all(&self) -> bool {
        self.selections_reach_every_element
            && self.projections_surjective
            && self.ultrafilters_cover
            && self.ultrafilter_core_trivial
    }
}

/// Evaluates all four stability readings on any filter, valid or not. The
/// first two literally sweep every member, so this is a desk-scale
/// diagnostic; [`stability_witness`] serves the same purpose at any size.
pub fn stability_report(bpa: &BooleanPartitionAlgebra) -> StabilityReport {
    let algebra = bpa.algebra();
    let filter = bpa.filter();
    let points = coherent_limit_points(filter);
    let members = filter.members();

    let mut reached = vec![false; algebra.element_count()];
    for pt in &points {
        for m in &members {
            reached[pt.choice(m).unwrap().mask() as usize] = true;
        }
    }
    let selections_reach_every_element = algebra
        .elements()
        .all(|e| e.is_bottom() || reached[e.mask() as usize]);

    let projections_surjective = members.iter().all(|m| {
        m.blocks()
            .iter()
            .all(|&b| points.iter().any(|pt| pt.choice(m).unwrap() == b))
    });

    let ultras = filter_ultrafilters_raw(filter);
    let ultrafilters_cover = !ultras.is_empty()
        && algebra
            .elements()
            .all(|e| e.is_bottom() || ultras.iter().any(|u| u.contains(e).unwrap()));
    let core: Vec<u16> = algebra
        .elements()
        .map(|e| e.mask())
        .filter(|&m| ultras.iter().all(|u| (m >> u.atom()) & 1 == 1))
        .collect();
    let ultrafilter_core_trivial = !ultras.is_empty() && core == vec![algebra.full_mask()];

    StabilityReport {
        selections_reach_every_element,
        projections_surjective,
        ultrafilters_cover,
        ultrafilter_core_trivial,
    }
}

/// The first nonzero element never chosen by any coherent selection, if one
/// exists. This witnesses instability in the first reading and feeds the
/// command-line diagnostics. An element is chosen somewhere exactly when it
/// is a nonzero union of base blocks: coherent selections choose the blocks
/// absorbing their base block, member blocks are such unions, and any such
/// union b is the chosen block of the member that keeps b whole and leaves
/// the rest of the base untouched. [`stability_report`] replays this
/// against the literal member sweep at desk scale.
pub fn stability_witness(bpa: &BooleanPartitionAlgebra) -> Option<Element> {
    let base = bpa.filter().base();
    let union_of_base_blocks = |b: Element| {
        base.blocks()
            .iter()
            .all(|blk| blk.mask() & b.mask() == 0 || blk.mask() & !b.mask() == 0)
    };
    bpa.algebra()
        .elements()
        .find(|&e| !e.is_bottom() && !union_of_base_blocks(e))
}

/// The set of spectrum points whose ultrafilter contains `a`, encoded as an
/// element of the powerset algebra over the spectrum.
pub fn stone_image(bpa: &BooleanPartitionAlgebra, a: Element) -> Result<Element> {
    let ultras = enumerate_filter_ultrafilters(bpa)?;
    let spectrum = GroundAlgebra::new(ultras.len())?;
    let mut mask = 0u16;
    for (i, u) in ultras.iter().enumerate() {
        if u.contains(a)? {
            mask |= 1 << i;
        }
    }
    spectrum.element_from_mask(mask)
}

/// Blockwise image of a partition under the spectrum map, with empty images
/// dropped; always a partition of the spectrum powerset.
pub fn stone_partition(bpa: &BooleanPartitionAlgebra, p: &Partition) -> Result<Partition> {
    let ultras = enumerate_filter_ultrafilters(bpa)?;
    let spectrum = GroundAlgebra::new(ultras.len())?;
    let mut blocks = Vec::new();
    for &b in p.blocks() {
        let mut mask = 0u16;
        for (i, u) in ultras.iter().enumerate() {
            if u.contains(b)? {
                mask |= 1 << i;
            }
        }
        if mask != 0 {
            blocks.push(spectrum.element_from_mask(mask).unwrap());
        }
    }
    Partition::new(spectrum, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize) -> GroundAlgebra {
        GroundAlgebra::new(n).unwrap()
    }

    fn partition(algebra: GroundAlgebra, blocks: &[&[usize]]) -> Partition {
        let blocks: Vec<Vec<usize>> = blocks.iter().map(|b| b.to_vec()).collect();
        Partition::from_atom_blocks(algebra, &blocks).unwrap()
    }

    fn split4() -> (GroundAlgebra, Partition) {
        let b = p(4);
        let q = partition(b, &[&[0, 1], &[2, 3]]);
        (b, q)
    }

    #[test]
    fn atom_generators_give_all_partitions() {
        let b = p(4);
        let f =
            PartitionFilter::from_generators(b, vec![Partition::singletons(b)]).unwrap();
        assert_eq!(f.members().len(), 15);
    }

    #[test]
    fn coarsest_generator_gives_one_member() {
        let b = p(2);
        let f =
            PartitionFilter::from_generators(b, vec![Partition::coarsest(b)]).unwrap();
        assert_eq!(f.members(), vec![Partition::coarsest(b)]);
    }

    #[test]
    fn crossed_generators_meet_to_singletons() {
        let b = p(4);
        let g1 = partition(b, &[&[0, 1], &[2, 3]]);
        let g2 = partition(b, &[&[0, 2], &[1, 3]]);
        let f = PartitionFilter::from_generators(b, vec![g1, g2]).unwrap();
        assert_eq!(*f.base(), Partition::singletons(b));
        assert_eq!(f.members().len(), 15);
    }

    #[test]
    fn full_structure_is_valid() {
        let b = p(4);
        let bpa = BooleanPartitionAlgebra::full(b, PartitionBound::Arbitrary);
        let v = bpa.validate();
        assert!(v.two_block_members);
        assert!(v.every_element_blocked);
        assert!(v.all_partitions_included);
    }

    #[test]
    fn split_filter_fails_all_three_conditions() {
        let (b, q) = split4();
        let bpa = BooleanPartitionAlgebra::from_generators(b, vec![q]).unwrap();
        let v = bpa.validate();
        assert!(!v.two_block_members);
        assert!(!v.every_element_blocked);
        assert!(!v.all_partitions_included);
    }

    #[test]
    fn one_atom_structure_is_vacuously_valid() {
        let b = p(1);
        let bpa = BooleanPartitionAlgebra::from_generators(b, vec![Partition::coarsest(b)])
            .unwrap();
        assert!(bpa.validate().is_valid());
    }

    #[test]
    fn induced_algebra_of_split_filter() {
        let (b, q) = split4();
        let bpa = BooleanPartitionAlgebra::from_generators(b, vec![q]).unwrap();
        let ind = bpa.induced();
        assert_eq!(ind.algebra().atom_count(), 2);
        assert_eq!(
            ind.carriers(),
            &[b.element(&[0, 1]).unwrap(), b.element(&[2, 3]).unwrap()]
        );
        assert!(ind.bpa().is_valid());
    }

    #[test]
    fn induced_algebra_of_coarsest_filter_has_one_atom() {
        let b = p(2);
        let bpa = BooleanPartitionAlgebra::from_generators(b, vec![Partition::coarsest(b)])
            .unwrap();
        let ind = bpa.induced();
        assert_eq!(ind.algebra().atom_count(), 1);
        assert_eq!(ind.carriers(), &[b.top()]);
    }

    #[test]
    fn induced_expand_contract_round_trip() {
        let (b, q) = split4();
        let bpa = BooleanPartitionAlgebra::from_generators(b, vec![q]).unwrap();
        let ind = bpa.induced();
        for e in ind.algebra().elements() {
            let big = ind.expand(e).unwrap();
            assert_eq!(ind.contract(big), Some(e));
        }
        assert_eq!(ind.contract(b.element(&[0]).unwrap()), None);
    }

    #[test]
    fn ultrafilter_counts() {
        let b4 = p(4);
        let full = BooleanPartitionAlgebra::full(b4, PartitionBound::Finite);
        assert_eq!(enumerate_filter_ultrafilters(&full).unwrap().len(), 4);

        let b1 = p(1);
        let tiny = BooleanPartitionAlgebra::full(b1, PartitionBound::Finite);
        assert_eq!(enumerate_filter_ultrafilters(&tiny).unwrap().len(), 1);

        let (b, q) = split4();
        let bpa = BooleanPartitionAlgebra::from_generators(b, vec![q]).unwrap();
        assert!(enumerate_filter_ultrafilters(&bpa).is_err());
        assert_eq!(
            enumerate_filter_ultrafilters(bpa.induced().bpa()).unwrap().len(),
            2
        );
    }

    #[test]
    fn ultrafilter_from_element_set_recovers_atom() {
        let b = p(3);
        let u = Ultrafilter::principal(b, 1).unwrap();
        let recovered = Ultrafilter::from_element_set(b, &u.elements()).unwrap();
        assert_eq!(recovered, u);
    }

    #[test]
    fn ultrafilter_from_bad_set_is_rejected() {
        let b = p(2);
        // upward closed but missing complements decision: the whole algebra
        let all: Vec<Element> = b.elements().collect();
        assert!(Ultrafilter::from_element_set(b, &all).is_err());
    }

    #[test]
    fn selection_through_block_of_atom_one() {
        let b = p(3);
        let full = BooleanPartitionAlgebra::full(b, PartitionBound::Finite);
        let members = full.filter().members();
        assert_eq!(members.len(), 5);
        let choices = members
            .iter()
            .map(|m| (m.clone(), m.block_of_atom(1).unwrap()))
            .collect();
        let pt =
            LimitPoint::from_selection(full.filter(), &Selection { choices }).unwrap();
        let u = limit_to_ultrafilter(&full, &pt).unwrap();
        assert_eq!(u.atom(), 1);
    }

    #[test]
    fn incoherent_selection_is_rejected() {
        let b = p(4);
        let full = BooleanPartitionAlgebra::full(b, PartitionBound::Finite);
        let mut choices: Vec<(Partition, Element)> = full
            .filter()
            .members()
            .into_iter()
            .map(|m| {
                let x = m.block_of_atom(0).unwrap();
                (m, x)
            })
            .collect();
        // overwrite one choice so it no longer follows atom 0
        let split = partition(b, &[&[0, 1], &[2, 3]]);
        for (m, x) in &mut choices {
            if *m == split {
                *x = b.element(&[2, 3]).unwrap();
            }
        }
        let err = LimitPoint::from_selection(full.filter(), &Selection { choices });
        assert!(matches!(err, Err(Error::IncoherentSelection(_))));
    }

    #[test]
    fn ultrafilter_to_limit_reads_off_blocks() {
        let b = p(4);
        let full = BooleanPartitionAlgebra::full(b, PartitionBound::Finite);
        let u = Ultrafilter::principal(b, 2).unwrap();
        let pt = ultrafilter_to_limit(&full, &u).unwrap();
        let split = partition(b, &[&[0, 1], &[2, 3]]);
        assert_eq!(pt.choice(&split).unwrap(), b.element(&[2, 3]).unwrap());
    }

    #[test]
    fn full_structure_is_stable() {
        for n in 1..=4 {
            let bpa = BooleanPartitionAlgebra::full(p(n), PartitionBound::Finite);
            let r = stability_report(&bpa);
            assert!(r.all(), "atoms = {n}: {r:?}");
        }
    }

    #[test]
    fn split_filter_stability_split() {
        let (b, q) = split4();
        let bpa = BooleanPartitionAlgebra::from_generators(b, vec![q]).unwrap();
        let r = stability_report(&bpa);
        // selections only ever choose {0,1}, {2,3}, or the top, so the first
        // reading fails; the other three hold on the raw filter.
        assert!(!r.selections_reach_every_element);
        assert!(r.projections_surjective);
        assert!(r.ultrafilters_cover);
        assert!(r.ultrafilter_core_trivial);
        assert_eq!(stability_witness(&bpa), Some(b.element(&[0]).unwrap()));
    }

    #[test]
    fn stone_image_collects_containing_ultrafilters() {
        let b = p(4);
        let full = BooleanPartitionAlgebra::full(b, PartitionBound::Finite);
        let a = b.element(&[0, 1]).unwrap();
        let img = stone_image(&full, a).unwrap();
        assert_eq!(img.atom_list(), vec![0, 1]);
        assert!(stone_image(&full, b.bottom()).unwrap().is_bottom());
        assert!(stone_image(&full, b.top()).unwrap().is_top());
    }

    #[test]
    fn stone_partition_of_split() {
        let (b, q) = split4();
        let full = BooleanPartitionAlgebra::full(b, PartitionBound::Finite);
        let img = stone_partition(&full, &q).unwrap();
        assert_eq!(img.block_count(), 2);
        assert_eq!(img.blocks()[0].atom_list(), vec![0, 1]);
        assert_eq!(img.blocks()[1].atom_list(), vec![2, 3]);
    }
}
