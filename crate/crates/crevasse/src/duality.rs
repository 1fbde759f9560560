//! The two constructions that swap algebras and spaces, their action on
//! maps, the canonical comparison maps, and completion.
//!
//! From an algebra with a valid partition filter, [`dual_space`] builds the
//! spectrum: one point per filter ultrafilter, one crevasse per generator,
//! blocks collecting the ultrafilters that share a generator block. From a
//! space, [`dual_algebra`] builds the algebra its crevasses can see. The
//! comparison maps [`stone_reflection`] (element to the set of ultrafilters
//! holding it) and [`space_reflection`] (point to the ultrafilter of blocks
//! around it) connect each object with its double dual; [`completion`]
//! packages the space-side reflection with a report grading how close it is
//! to a homeomorphism. On maps, [`preimage_hom`] and [`spectrum_map`] act
//! contravariantly, and the verification suites close the loop by checking
//! functor laws, naturality, and both round-trip identities by sweep.

use crate::algebra::FunctionTable;
use crate::error::{Error, Result};
use crate::morphism::{is_partition_hom, PartitionHom};
use crate::partition_algebra::{
    enumerate_filter_ultrafilters, stability_witness, stone_partition,
    BooleanPartitionAlgebra, InducedAlgebra, Ultrafilter,
};
use crate::space::{is_uniformly_continuous, PartitionSpace, UniformMap};

/// A spectrum presented as a partition space, remembering which ultrafilter
/// each point stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumSpace {
    space: PartitionSpace,
    points: Vec<Ultrafilter>,
}

impl SpectrumSpace {
    pub fn space(&self) -> &PartitionSpace {
        &self.space
    }

    pub fn points(&self) -> &[Ultrafilter] {
        &self.points
    }

    pub fn index_of(&self, u: &Ultrafilter) -> Option<usize> {
        self.points.iter().position(|v| v == u)
    }
}

/// The spectrum of a partition algebra: ultrafilters as points, generator
/// images as crevasses. Errors on invalid input, naming a nonzero element
/// no coherent selection ever reaches.
pub fn dual_space(bpa: &BooleanPartitionAlgebra) -> Result<SpectrumSpace> {
    if !bpa.is_valid() {
        let witness = stability_witness(bpa)
            .map(|e| e.atom_list().iter().map(|&a| a as u8).collect())
            .unwrap_or_default();
        return Err(Error::Unstable { witness });
    }
    let points = enumerate_filter_ultrafilters(bpa)?;
    let generators = bpa
        .filter()
        .generators()
        .iter()
        .map(|g| stone_partition(bpa, g))
        .collect::<Result<Vec<_>>>()?;
    let space = PartitionSpace::new(points.len(), generators)?;
    Ok(SpectrumSpace { space, points })
}

/// The algebra of a space: zero plus every crevasse block, rebuilt on its
/// own atoms with the crevasse filter carried over.
pub fn dual_algebra(space: &PartitionSpace) -> InducedAlgebra {
    space.induced_algebra()
}

/// The canonical homomorphism from an algebra into the algebra of its
/// spectrum, sending an element to the set of ultrafilters containing it.
/// On a finite valid structure this is an isomorphism; the returned
/// homomorphism is verified, and [`reflection_witness`] records the
/// isomorphism laws one by one.
pub fn stone_reflection(bpa: &BooleanPartitionAlgebra) -> Result<PartitionHom> {
    let spectrum = dual_space(bpa)?;
    let double = dual_algebra(spectrum.space());
    let table = reflection_table(bpa, &spectrum, &double)?;
    PartitionHom::new(bpa.clone(), double.bpa().clone(), table)
}

fn reflection_table(
    bpa: &BooleanPartitionAlgebra,
    spectrum: &SpectrumSpace,
    double: &InducedAlgebra,
) -> Result<FunctionTable> {
    let values = bpa
        .algebra()
        .elements()
        .map(|x| {
            let mut mask = 0u16;
            for (i, u) in spectrum.points().iter().enumerate() {
                if u.contains(x)? {
                    mask |= 1 << i;
                }
            }
            let as_points = spectrum.space().ground().element_from_mask(mask)?;
            double.contract(as_points).ok_or_else(|| {
                Error::InvalidAlgebra
            })
        })
        .collect::<Result<Vec<_>>>()?;
    FunctionTable::new(bpa.algebra(), double.algebra(), values)
}

/// Isomorphism laws of the reflection, recorded outcome by outcome so a
/// report can be rechecked later against fresh computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityWitness {
    pub forward: FunctionTable,
    pub backward: Option<FunctionTable>,
    pub outcomes: Vec<(String, bool)>,
}

impl DualityWitness {
    pub fn all_hold(&self) -> bool {
        self.outcomes.iter().all(|(_, ok)| *ok)
    }
}

/// Builds the reflection and grades it: homomorphism both ways, injective,
/// surjective, filter respected in both directions.
pub fn reflection_witness(bpa: &BooleanPartitionAlgebra) -> Result<DualityWitness> {
    let spectrum = dual_space(bpa)?;
    let double = dual_algebra(spectrum.space());
    let forward = reflection_table(bpa, &spectrum, &double)?;
    let mut outcomes = Vec::new();
    let fwd_hom = is_partition_hom(&forward, bpa, double.bpa())?;
    outcomes.push(("forward is a partition homomorphism".to_string(), fwd_hom));
    let injective = forward.is_injective();
    outcomes.push(("forward is injective".to_string(), injective));
    let surjective = forward.is_surjective();
    outcomes.push(("forward is surjective".to_string(), surjective));
    let backward = if injective && surjective {
        let values = double
            .algebra()
            .elements()
            .map(|y| {
                bpa.algebra()
                    .elements()
                    .find(|&x| forward.apply(x).unwrap() == y)
                    .expect("surjectivity provides a preimage")
            })
            .collect();
        let back = FunctionTable::new(double.algebra(), bpa.algebra(), values)?;
        let back_hom = is_partition_hom(&back, double.bpa(), bpa)?;
        outcomes.push(("backward is a partition homomorphism".to_string(), back_hom));
        Some(back)
    } else {
        None
    };
    Ok(DualityWitness { forward, backward, outcomes })
}

/// Recomputes a witness from scratch and compares recorded outcomes.
pub fn recheck_reflection(bpa: &BooleanPartitionAlgebra, w: &DualityWitness) -> Result<bool> {
    let fresh = reflection_witness(bpa)?;
    Ok(fresh == *w)
}

/// The canonical map from a space into the spectrum of its algebra: each
/// point goes to the ultrafilter of blocks around it.
pub fn space_reflection(space: &PartitionSpace) -> Result<UniformMap> {
    let algebra = dual_algebra(space);
    let spectrum = dual_space(algebra.bpa())?;
    let map = (0..space.point_count())
        .map(|x| {
            let u = space.point_ultrafilter(x)?;
            spectrum
                .index_of(&u)
                .ok_or(Error::InvalidAlgebra)
        })
        .collect::<Result<Vec<_>>>()?;
    UniformMap::new(space.clone(), spectrum.space().clone(), map)
}

/// How much of a homeomorphism the completion map achieved. On finite
/// spaces every field is decided exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompletionReport {
    pub uniformly_continuous: bool,
    /// Every block of every completed crevasse contains an image point.
    pub dense: bool,
    /// Injective, and every source crevasse is the pullback of a completed
    /// one. Fails exactly when the space is not separating.
    pub embedding: bool,
    /// Embedding, bijective, and the inverse is uniformly continuous.
    pub homeomorphism: bool,
}

/// A completed space with the canonical map into it and its grades.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completion {
    pub completed: PartitionSpace,
    pub map: UniformMap,
    pub report: CompletionReport,
}

/// Completes a space through its spectrum and grades the canonical map.
pub fn completion(space: &PartitionSpace) -> Result<Completion> {
    let map = space_reflection(space)?;
    let completed = map.target().clone();
    let report = grade_completion(space, &map)?;
    Ok(Completion { completed, map, report })
}

fn grade_completion(space: &PartitionSpace, map: &UniformMap) -> Result<CompletionReport> {
    let completed = map.target();
    let uniformly_continuous = is_uniformly_continuous(map)?;

    // every crevasse block contains a base block, so hitting the base
    // blocks hits everything
    let mut dense = true;
    for &block in completed.crevasse_filter().base().blocks() {
        let hit = (0..space.point_count())
            .any(|x| block.contains_atom(map.apply(x).unwrap()));
        if !hit {
            dense = false;
            break;
        }
    }

    let mut embedding = map.is_injective();
    if embedding {
        for (g, dual_g) in space.generators().iter().zip(completed.generators()) {
            if map.pullback(dual_g)? != *g {
                embedding = false;
                break;
            }
        }
    }

    let homeomorphism = embedding && map.is_surjective() && {
        let inverse: Vec<usize> = (0..completed.point_count())
            .map(|y| map.point_map().iter().position(|&z| z == y).unwrap())
            .collect();
        let back = UniformMap::new(completed.clone(), space.clone(), inverse)?;
        is_uniformly_continuous(&back)?
    };

    Ok(CompletionReport { uniformly_continuous, dense, embedding, homeomorphism })
}

/// Recomputes the grades of a completion and compares with the record.
pub fn recheck_completion(space: &PartitionSpace, c: &Completion) -> Result<bool> {
    let fresh = completion(space)?;
    Ok(fresh == *c)
}

/// Contravariant action on maps, space side to algebra side: a uniformly
/// continuous map pulls the target's visible sets back to the source's.
pub fn preimage_hom(f: &UniformMap) -> Result<PartitionHom> {
    if !is_uniformly_continuous(f)? {
        return Err(Error::NotPartitional(
            "map is not uniformly continuous, preimages leave the visible algebra".into(),
        ));
    }
    let source_alg = dual_algebra(f.source());
    let target_alg = dual_algebra(f.target());
    let values = target_alg
        .algebra()
        .elements()
        .map(|r| {
            let as_points = target_alg.expand(r)?;
            let mut mask = 0u16;
            for (x, &y) in f.point_map().iter().enumerate() {
                if as_points.contains_atom(y) {
                    mask |= 1 << x;
                }
            }
            let pre = f.source().ground().element_from_mask(mask)?;
            source_alg.contract(pre).ok_or(Error::InvalidAlgebra)
        })
        .collect::<Result<Vec<_>>>()?;
    let table = FunctionTable::new(target_alg.algebra(), source_alg.algebra(), values)?;
    PartitionHom::new(target_alg.bpa().clone(), source_alg.bpa().clone(), table)
}

/// Contravariant action on maps, algebra side to space side: ultrafilters
/// pull back along a partition homomorphism.
pub fn spectrum_map(h: &PartitionHom) -> Result<UniformMap> {
    let source_spectrum = dual_space(h.target())?;
    let target_spectrum = dual_space(h.source())?;
    let map = source_spectrum
        .points()
        .iter()
        .map(|u| {
            // the unique source atom whose image holds u's atom
            let a = h
                .source()
                .algebra()
                .atoms()
                .position(|x| h.apply(x).unwrap().contains_atom(u.atom()));
            let a = a.ok_or(Error::InvalidAlgebra)?;
            let pulled = Ultrafilter::principal(h.source().algebra(), a)?;
            target_spectrum
                .index_of(&pulled)
                .ok_or(Error::InvalidAlgebra)
        })
        .collect::<Result<Vec<_>>>()?;
    UniformMap::new(
        source_spectrum.space().clone(),
        target_spectrum.space().clone(),
        map,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GroundAlgebra;
    use crate::lattice::Partition;
    use crate::partition_algebra::{stability_report, PartitionBound};

    fn p(n: usize) -> GroundAlgebra {
        GroundAlgebra::new(n).unwrap()
    }

    fn full(n: usize) -> BooleanPartitionAlgebra {
        BooleanPartitionAlgebra::full(p(n), PartitionBound::Arbitrary)
    }

    fn split_space() -> PartitionSpace {
        PartitionSpace::from_point_blocks(4, &[vec![vec![0, 1], vec![2, 3]]]).unwrap()
    }

    #[test]
    fn spectrum_of_full_structure_is_discrete() {
        let s = dual_space(&full(4)).unwrap();
        assert_eq!(s.space().point_count(), 4);
        assert!(s.space().is_separating());
        assert!(s.space().is_complete());
    }

    #[test]
    fn broken_filter_reports_unreached_witness() {
        let b = p(4);
        let split = Partition::from_atom_blocks(b, &[vec![0, 1], vec![2, 3]]).unwrap();
        let bpa = BooleanPartitionAlgebra::from_generators(b, vec![split]).unwrap();
        match dual_space(&bpa) {
            Err(Error::Unstable { witness }) => assert_eq!(witness, vec![0]),
            other => panic!("expected instability, got {other:?}"),
        }
    }

    #[test]
    fn algebra_of_split_space_is_stable_and_small() {
        let a = dual_algebra(&split_space());
        assert_eq!(a.algebra().atom_count(), 2);
        assert!(a.bpa().is_valid());
        assert!(stability_report(a.bpa()).all());
    }

    #[test]
    fn reflection_on_full_structure_is_an_isomorphism() {
        let w = reflection_witness(&full(3)).unwrap();
        assert!(w.all_hold(), "{:?}", w.outcomes);
        assert!(w.backward.is_some());
        assert!(recheck_reflection(&full(3), &w).unwrap());
    }

    #[test]
    fn completing_a_glued_space_halves_it() {
        let c = completion(&split_space()).unwrap();
        assert_eq!(c.completed.point_count(), 2);
        assert_eq!(c.map.point_map(), &[0, 0, 1, 1]);
        assert!(c.report.uniformly_continuous);
        assert!(c.report.dense);
        assert!(!c.report.embedding);
        assert!(!c.report.homeomorphism);
    }

    #[test]
    fn completing_a_separating_space_changes_nothing() {
        let ground = GroundAlgebra::new(3).unwrap();
        let x = PartitionSpace::new(3, vec![Partition::singletons(ground)]).unwrap();
        let c = completion(&x).unwrap();
        assert!(c.report.uniformly_continuous);
        assert!(c.report.dense);
        assert!(c.report.embedding);
        assert!(c.report.homeomorphism);
        assert!(recheck_completion(&x, &c).unwrap());
    }

    #[test]
    fn preimage_hom_of_parity_collects_even_points() {
        let ground4 = GroundAlgebra::new(4).unwrap();
        let ground2 = GroundAlgebra::new(2).unwrap();
        let x = PartitionSpace::new(4, vec![Partition::singletons(ground4)]).unwrap();
        let y = PartitionSpace::new(2, vec![Partition::singletons(ground2)]).unwrap();
        let f = UniformMap::new(x, y, vec![0, 1, 0, 1]).unwrap();
        let h = preimage_hom(&f).unwrap();
        let zero = h.source().algebra().element(&[0]).unwrap();
        assert_eq!(h.apply(zero).unwrap().atom_list(), vec![0, 2]);
    }

    #[test]
    fn spectrum_map_of_a_doubling_hom_collapses_pairs() {
        // the homomorphism P(2) -> P(4) sending {0} to {0,1}
        let a2 = p(2);
        let a4 = p(4);
        let table = FunctionTable::tabulate(a2, a4, |x| {
            let mut mask = 0u16;
            if x.contains_atom(0) {
                mask |= 0b0011;
            }
            if x.contains_atom(1) {
                mask |= 0b1100;
            }
            a4.element_from_mask(mask).unwrap()
        })
        .unwrap();
        let h = PartitionHom::new(full(2), full(4), table).unwrap();
        let s = spectrum_map(&h).unwrap();
        assert_eq!(s.point_map(), &[0, 0, 1, 1]);
        assert!(is_uniformly_continuous(&s).unwrap());
    }

    #[test]
    fn algebra_side_round_trip_is_identity() {
        let x = split_space();
        let a = dual_algebra(&x);
        let psi = stone_reflection(a.bpa()).unwrap();
        let c = space_reflection(&x).unwrap();
        let back = preimage_hom(&c).unwrap();
        let composite = psi.table().then(back.table()).unwrap();
        assert_eq!(composite, FunctionTable::identity(a.algebra()));
    }

    #[test]
    fn space_side_round_trip_is_identity() {
        let b = full(3);
        let s = dual_space(&b).unwrap();
        let psi = stone_reflection(&b).unwrap();
        let c = space_reflection(s.space()).unwrap();
        let back = spectrum_map(&psi).unwrap();
        let composite = c.then(&back).unwrap();
        assert_eq!(composite.point_map(), &[0, 1, 2]);
    }
}
