//! One full trip around the duality: space to algebra to spectrum and
//! back, with the reflection graded as an isomorphism.

use crevasse::duality::{
    dual_algebra, dual_space, reflection_witness, space_reflection, stone_reflection,
};
use crevasse::error::Error;
use crevasse::lattice::Partition;
use crevasse::partition_algebra::BooleanPartitionAlgebra;
use crevasse::{GroundAlgebra, PartitionSpace};

fn main() {
    // a three-point space whose single crevasse separates every point
    let space = PartitionSpace::from_point_blocks(3, &[vec![vec![0], vec![1], vec![2]]]).unwrap();
    println!("space separating: {}", space.is_separating());

    let algebra = dual_algebra(&space);
    println!(
        "algebra of the space: {} atoms, {} generators",
        algebra.algebra().atom_count(),
        algebra.bpa().filter().generators().len()
    );

    let spectrum = dual_space(algebra.bpa()).unwrap();
    println!("spectrum points: {}", spectrum.space().point_count());

    // the canonical point map realizes the homeomorphism
    let cmap = space_reflection(&space).unwrap();
    println!("canonical map: {:?}", cmap.point_map());
    println!(
        "injective and surjective: {} {}",
        cmap.is_injective(),
        cmap.is_surjective()
    );

    // the element-side reflection, graded law by law
    let witness = reflection_witness(algebra.bpa()).unwrap();
    for (law, ok) in &witness.outcomes {
        println!("  {law}: {ok}");
    }
    println!("reflection is an isomorphism: {}", witness.all_hold());
    let psi = stone_reflection(algebra.bpa()).unwrap();
    println!("reflection table is injective: {}", psi.table().is_injective());

    // an unstable structure is refused with a concrete witness
    let ground = GroundAlgebra::new(4).unwrap();
    let halves = Partition::from_atom_blocks(ground, &[vec![0, 1], vec![2, 3]]).unwrap();
    let unstable = BooleanPartitionAlgebra::from_generators(ground, vec![halves]).unwrap();
    match dual_space(&unstable) {
        Err(Error::Unstable { witness }) => {
            println!("unstable structure refused, unreached atoms {witness:?}");
        }
        other => println!("unexpected: {other:?}"),
    }
}
