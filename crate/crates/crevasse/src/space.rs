//! Finite point sets carrying a filter of covers.
//!
//! A crevasse is a partition of the ground set; the filter they generate
//! plays the role of a non-Archimedean uniform structure. Ground sets are
//! identified with the atoms of a powerset algebra, so crevasses, their
//! refinement order, and coherent block selections all reuse the partition
//! machinery. A space is separating when the meet of its crevasses is the
//! singleton partition, and complete when it is separating and every
//! coherent selection of crevasse blocks pins down an actual point.

use std::fmt;

use crate::algebra::GroundAlgebra;
use crate::error::{Error, Result};
use crate::lattice::Partition;
use crate::partition_algebra::{
    coherent_limit_points, BooleanPartitionAlgebra, InducedAlgebra, LimitPoint,
    PartitionFilter, Ultrafilter,
};

/// A finite set of points together with a filter of covering partitions.
#[derive(Clone, PartialEq, Eq)]
pub struct PartitionSpace {
    filter: PartitionFilter,
}

impl PartitionSpace {
    /// `crevasses` are partitions of `{0..points}` given by point blocks.
    pub fn new(points: usize, crevasses: Vec<Partition>) -> Result<Self> {
        let ground = GroundAlgebra::new(points)?;
        let filter = PartitionFilter::from_generators(ground, crevasses)?;
        Ok(PartitionSpace { filter })
    }

    pub fn from_point_blocks(points: usize, crevasses: &[Vec<Vec<usize>>]) -> Result<Self> {
        let ground = GroundAlgebra::new(points)?;
        let parts = crevasses
            .iter()
            .map(|blocks| Partition::from_atom_blocks(ground, blocks))
            .collect::<Result<Vec<_>>>()?;
        Self::new(points, parts)
    }

    /// The ground set as a powerset algebra; points are its atoms.
    pub fn ground(&self) -> GroundAlgebra {
        self.filter.algebra()
    }

    pub fn point_count(&self) -> usize {
        self.ground().atom_count()
    }

    pub fn crevasse_filter(&self) -> &PartitionFilter {
        &self.filter
    }

    pub fn generators(&self) -> &[Partition] {
        self.filter.generators()
    }

    /// The meet of all crevasses: the finest distinction the space makes.
    pub fn base(&self) -> &Partition {
        self.filter.base()
    }

    /// True when the crevasses jointly separate points: the base partition
    /// is all singletons.
    pub fn is_separating(&self) -> bool {
        self.base().blocks().iter().all(|b| b.count_atoms() == 1)
    }

    /// The algebra-with-filter view of the space: the full powerset of the
    /// ground set carrying the crevasse filter.
    pub fn as_partition_algebra(&self) -> BooleanPartitionAlgebra {
        BooleanPartitionAlgebra::new(self.filter.clone())
    }

    /// The algebra the crevasses can see: zero plus all blocks of all
    /// crevasses, rebuilt on its own atoms.
    pub fn induced_algebra(&self) -> InducedAlgebra {
        self.as_partition_algebra().induced()
    }

    /// Coherent selections of one block per crevasse, the candidate limits
    /// of the space.
    pub fn coherent_points(&self) -> Vec<LimitPoint> {
        coherent_limit_points(&self.filter)
    }

    /// Does some actual point sit inside every block the selection picks?
    pub fn realizes(&self, point: &LimitPoint) -> Option<usize> {
        (0..self.point_count()).find(|&x| {
            point
                .choices()
                .all(|(_, block)| block.contains_atom(x))
        })
    }

    /// Separating, and every coherent selection is realized by a point.
    /// Non-separating spaces report false by convention: their coherent
    /// selections conflate the points a completion would distinguish.
    pub fn is_complete(&self) -> bool {
        self.is_separating()
            && self
                .coherent_points()
                .iter()
                .all(|pt| self.realizes(pt).is_some())
    }

    /// The ultrafilter of crevasse blocks around a point, read in the
    /// induced algebra: it concentrates on the base block holding the point.
    pub fn point_ultrafilter(&self, x: usize) -> Result<Ultrafilter> {
        if x >= self.point_count() {
            return Err(Error::PointOutOfRange(x));
        }
        let induced = self.induced_algebra();
        let atom = self
            .base()
            .blocks()
            .iter()
            .position(|b| b.contains_atom(x))
            .expect("base covers every point");
        Ultrafilter::principal(induced.algebra(), atom)
    }
}

impl fmt::Debug for PartitionSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PartitionSpace({} points, base {:?})",
            self.point_count(),
            self.base()
        )
    }
}

/// A function on points between two partition spaces. Uniform continuity is
/// a separate check so that counterexample maps can be represented.
#[derive(Clone, PartialEq, Eq)]
pub struct UniformMap {
    source: PartitionSpace,
    target: PartitionSpace,
    map: Vec<usize>,
}

impl UniformMap {
    pub fn new(source: PartitionSpace, target: PartitionSpace, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.point_count() {
            return Err(Error::IncompleteTable);
        }
        for &y in &map {
            if y >= target.point_count() {
                return Err(Error::PointOutOfRange(y));
            }
        }
        Ok(UniformMap { source, target, map })
    }

    pub fn identity(space: &PartitionSpace) -> Self {
        UniformMap {
            source: space.clone(),
            target: space.clone(),
            map: (0..space.point_count()).collect(),
        }
    }

    pub fn source(&self) -> &PartitionSpace {
        &self.source
    }

    pub fn target(&self) -> &PartitionSpace {
        &self.target
    }

    pub fn apply(&self, x: usize) -> Result<usize> {
        self.map.get(x).copied().ok_or(Error::PointOutOfRange(x))
    }

    pub fn point_map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.point_count()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target.point_count()];
        for &y in &self.map {
            seen[y] = true;
        }
        seen.iter().all(|&b| b)
    }

    /// Preimage of a partition of the target ground set, with empty blocks
    /// dropped. Always a partition of the source ground set.
    pub fn pullback(&self, q: &Partition) -> Result<Partition> {
        if q.algebra() != self.target.ground() {
            return Err(Error::AlgebraMismatch(
                self.target.point_count(),
                q.algebra().atom_count(),
            ));
        }
        let ground = self.source.ground();
        let mut blocks = Vec::new();
        for block in q.blocks() {
            let mut mask = 0u16;
            for (x, &y) in self.map.iter().enumerate() {
                if block.contains_atom(y) {
                    mask |= 1 << x;
                }
            }
            if mask != 0 {
                blocks.push(ground.element_from_mask(mask).unwrap());
            }
        }
        Partition::new(ground, blocks)
    }

    /// `other` after `self`.
    pub fn then(&self, other: &UniformMap) -> Result<UniformMap> {
        if self.target != other.source {
            return Err(Error::NotComposable("middle spaces differ".into()));
        }
        let map = self.map.iter().map(|&y| other.map[y]).collect();
        UniformMap::new(self.source.clone(), other.target.clone(), map)
    }
}

impl fmt::Debug for UniformMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniformMap({:?})", self.map)
    }
}

/// Uniform continuity, checked on the target's generators: each pullback
/// must already be a crevasse of the source. Pullbacks of coarser members
/// are coarser, so the generator check settles every member; the
/// `by_members` form below verifies that reduction at desk scale.
pub fn is_uniformly_continuous(map: &UniformMap) -> Result<bool> {
    for q in map.target().generators() {
        if !map.source().crevasse_filter().contains(&map.pullback(q)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Uniform continuity quantified over every member of the target filter.
pub fn is_uniformly_continuous_by_members(map: &UniformMap) -> Result<bool> {
    for q in map.target().crevasse_filter().members() {
        if !map.source().crevasse_filter().contains(&map.pullback(&q)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn singleton_space(points: usize) -> PartitionSpace {
        let ground = GroundAlgebra::new(points).unwrap();
        PartitionSpace::new(points, vec![Partition::singletons(ground)]).unwrap()
    }

    fn split_space() -> PartitionSpace {
        PartitionSpace::from_point_blocks(4, &[vec![vec![0, 1], vec![2, 3]]]).unwrap()
    }

    #[test]
    fn separating_iff_base_is_singletons() {
        assert!(singleton_space(4).is_separating());
        assert!(!split_space().is_separating());
        let crossed = PartitionSpace::from_point_blocks(
            4,
            &[vec![vec![0, 1], vec![2, 3]], vec![vec![0, 2], vec![1, 3]]],
        )
        .unwrap();
        assert!(crossed.is_separating());
    }

    #[test]
    fn parity_map_to_singleton_pair_is_uniformly_continuous() {
        let x = singleton_space(4);
        let y = singleton_space(2);
        let f = UniformMap::new(x, y, vec![0, 1, 0, 1]).unwrap();
        assert!(is_uniformly_continuous(&f).unwrap());
        assert!(is_uniformly_continuous_by_members(&f).unwrap());
    }

    #[test]
    fn collapse_from_split_space_is_uniformly_continuous() {
        let x = split_space();
        let y = singleton_space(2);
        let f = UniformMap::new(x, y, vec![0, 0, 1, 1]).unwrap();
        assert!(is_uniformly_continuous(&f).unwrap());
    }

    #[test]
    fn parity_from_split_space_is_not_uniformly_continuous() {
        // the preimage of the singleton crevasse is the crossed split,
        // which the source filter does not contain
        let x = split_space();
        let y = singleton_space(2);
        let f = UniformMap::new(x, y, vec![0, 1, 0, 1]).unwrap();
        assert!(!is_uniformly_continuous(&f).unwrap());
        assert!(!is_uniformly_continuous_by_members(&f).unwrap());
    }

    #[test]
    fn pullback_drops_empty_blocks() {
        let x = singleton_space(2);
        let y = singleton_space(3);
        let f = UniformMap::new(x, y.clone(), vec![0, 0]).unwrap();
        let q = Partition::singletons(y.ground());
        let pulled = f.pullback(&q).unwrap();
        assert_eq!(pulled.block_count(), 1);
        assert!(pulled.blocks()[0].is_top());
    }

    #[test]
    fn coherent_point_counts() {
        assert_eq!(singleton_space(3).coherent_points().len(), 3);
        let glued = PartitionSpace::from_point_blocks(3, &[vec![vec![0, 1, 2]]]).unwrap();
        assert_eq!(glued.coherent_points().len(), 1);
        let crossed = PartitionSpace::from_point_blocks(
            4,
            &[vec![vec![0, 1], vec![2, 3]], vec![vec![0, 2], vec![1, 3]]],
        )
        .unwrap();
        assert_eq!(crossed.coherent_points().len(), 4);
    }

    #[test]
    fn finite_separating_spaces_are_complete() {
        assert!(singleton_space(1).is_complete());
        assert!(singleton_space(4).is_complete());
    }

    #[test]
    fn non_separating_spaces_report_incomplete() {
        assert!(!split_space().is_complete());
    }

    #[test]
    fn glued_points_share_their_ultrafilter() {
        let x = split_space();
        assert_eq!(x.point_ultrafilter(0).unwrap(), x.point_ultrafilter(1).unwrap());
        assert_ne!(x.point_ultrafilter(1).unwrap(), x.point_ultrafilter(2).unwrap());
        assert_eq!(x.point_ultrafilter(0).unwrap().atom(), 0);
    }

    #[test]
    fn composition_preserves_uniform_continuity_here() {
        let x = singleton_space(4);
        let y = singleton_space(2);
        let z = singleton_space(1);
        let f = UniformMap::new(x, y.clone(), vec![0, 1, 0, 1]).unwrap();
        let g = UniformMap::new(y, z, vec![0, 0]).unwrap();
        let gf = f.then(&g).unwrap();
        assert!(is_uniformly_continuous(&gf).unwrap());
    }

    /// Completeness oracle via convergence of round filters. A filter on the
    /// point powerset is determined by the set it concentrates on; it is
    /// round ("Cauchy") when every crevasse has a block containing that set,
    /// and converges to x when every block around x contains the set. A
    /// space is complete in the classical sense when every round filter
    /// converges. This never consults coherent selections.
    fn cauchy_complete(space: &PartitionSpace) -> bool {
        let n = space.point_count();
        let members = space.crevasse_filter().members();
        'filters: for seed in 1u16..(1 << n) {
            let cauchy = members.iter().all(|m| {
                m.blocks().iter().any(|b| seed & !b.mask() == 0)
            });
            if !cauchy {
                continue;
            }
            for x in 0..n {
                let converges = members.iter().all(|m| {
                    let block = m.block_of_atom(x).unwrap();
                    seed & !block.mask() == 0
                });
                if converges {
                    continue 'filters;
                }
            }
            return false;
        }
        true
    }

    #[test]
    fn coherent_formulation_matches_filter_convergence() {
        // sweep every principal crevasse filter on up to four points
        for n in 1..=4 {
            let ground = GroundAlgebra::new(n).unwrap();
            for base in crate::lattice::all_partitions(ground) {
                let space = PartitionSpace::new(n, vec![base]).unwrap();
                let coherent_side = space.is_separating()
                    && space
                        .coherent_points()
                        .iter()
                        .all(|pt| space.realizes(pt).is_some());
                let cauchy_side = space.is_separating() && cauchy_complete(&space);
                assert_eq!(coherent_side, cauchy_side, "space {space:?}");
                assert_eq!(space.is_complete(), coherent_side);
            }
        }
    }
}
