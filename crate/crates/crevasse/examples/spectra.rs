//! Partition filters on a four-atom algebra: validity, stability, and the
//! two equivalent presentations of spectrum points.

use crevasse::lattice::all_partitions;
use crevasse::partition_algebra::{
    coherent_limit_points, enumerate_filter_ultrafilters, limit_to_ultrafilter,
    stability_witness, BooleanPartitionAlgebra,
};
use crevasse::GroundAlgebra;

fn main() {
    let algebra = GroundAlgebra::new(4).unwrap();

    for base in all_partitions(algebra) {
        let bpa = BooleanPartitionAlgebra::from_generators(algebra, vec![base.clone()]).unwrap();
        let v = bpa.validate();
        println!(
            "base {:?}: two-block {} / blocked {} / all-partitions {}",
            base, v.two_block_members, v.every_element_blocked, v.all_partitions_included
        );
        if let Some(w) = stability_witness(&bpa) {
            println!("  unstable, no selection reaches {:?}", w);
        }

        // the induced structure is always valid; its spectrum has one
        // point per block of the base
        let induced = bpa.induced();
        let ultras = enumerate_filter_ultrafilters(induced.bpa()).unwrap();
        println!(
            "  induced on {} atoms, spectrum size {}",
            induced.algebra().atom_count(),
            ultras.len()
        );

        // coherent selections and filter ultrafilters are the same points
        let points = coherent_limit_points(induced.bpa().filter());
        assert_eq!(points.len(), ultras.len());
        for pt in &points {
            let u = limit_to_ultrafilter(induced.bpa(), pt).unwrap();
            assert!(ultras.contains(&u));
        }
    }

    println!("every selection translated to an ultrafilter and back");
}
