//! Walk the partition lattice of a four-atom algebra: enumeration,
//! refinement, meets, join decomposition, and maximal cellular families.

use crevasse::lattice::{all_partitions, CellularFamily, CoarseningMap};
use crevasse::{GroundAlgebra, Partition};

fn main() {
    let algebra = GroundAlgebra::new(4).unwrap();
    let parts = all_partitions(algebra);
    println!("partitions of a 4-atom algebra: {}", parts.len());

    let fine = Partition::singletons(algebra);
    let coarse = Partition::coarsest(algebra);
    println!("finest refines coarsest: {}", fine.refines(&coarse).unwrap());
    println!("coarsest refines finest: {}", coarse.refines(&fine).unwrap());

    // meets compute greatest lower bounds; check one pair by hand
    let ab_cd = Partition::from_atom_blocks(algebra, &[vec![0, 1], vec![2, 3]]).unwrap();
    let ac_bd = Partition::from_atom_blocks(algebra, &[vec![0, 2], vec![1, 3]]).unwrap();
    let meet = ab_cd.meet(&ac_bd).unwrap();
    println!("{:?} meet {:?} = {:?}", ab_cd, ac_bd, meet);
    println!("meet is the finest partition here: {}", meet == fine);

    // coarsening maps compose along refinement chains
    let up = CoarseningMap::new(fine.clone(), ab_cd.clone()).unwrap();
    let further = CoarseningMap::new(ab_cd.clone(), coarse.clone()).unwrap();
    let composed = up.then(&further).unwrap();
    let direct = CoarseningMap::new(fine.clone(), coarse.clone()).unwrap();
    let block = fine.blocks()[0];
    println!(
        "composite and direct coarsening agree on {:?}: {}",
        block,
        composed.apply(block).unwrap() == direct.apply(block).unwrap()
    );

    // every block of a coarsening is the union of the blocks below it
    for c in ab_cd.blocks() {
        let below: Vec<_> = fine
            .blocks()
            .iter()
            .filter(|b| b.mask() & !c.mask() == 0)
            .collect();
        let joined = below.iter().fold(0u16, |m, b| m | b.mask());
        println!("block {:?} decomposes into {} singletons: {}", c, below.len(), joined == c.mask());
    }

    // a cellular family that misses atoms is not yet a partition; its
    // maximal extension is
    let partial = CellularFamily::new(algebra, vec![algebra.element(&[0, 1]).unwrap()]).unwrap();
    println!("family {{01}} is a partition: {}", partial.is_partition());
    let extended = partial.extend_to_maximal();
    println!("extended to {:?}", extended);
}
