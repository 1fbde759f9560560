//! Completion grades for three finite spaces: separating, non-separating,
//! and a two-crevasse space completed through its spectrum.

use crevasse::duality::completion;
use crevasse::PartitionSpace;

fn grade(label: &str, space: &PartitionSpace) {
    let c = completion(space).unwrap();
    let r = c.report;
    println!("{label}:");
    println!("  completed points {}", c.completed.point_count());
    println!("  map {:?}", c.map.point_map());
    println!(
        "  uniformly-continuous {} dense {} embedding {} homeomorphism {}",
        r.uniformly_continuous, r.dense, r.embedding, r.homeomorphism
    );
}

fn main() {
    // separating: the canonical map is a homeomorphism
    let separated =
        PartitionSpace::from_point_blocks(3, &[vec![vec![0], vec![1], vec![2]]]).unwrap();
    grade("three points, singleton crevasse", &separated);

    // non-separating: points 0 and 1 are never told apart, the completion
    // collapses them, the map stays dense but is no embedding
    let glued = PartitionSpace::from_point_blocks(3, &[vec![vec![0, 1], vec![2]]]).unwrap();
    grade("three points, glued pair", &glued);

    // two crevasses refine each other's information; the completion sees
    // their common refinement
    let crossed = PartitionSpace::from_point_blocks(
        4,
        &[
            vec![vec![0, 1], vec![2, 3]],
            vec![vec![0, 2], vec![1, 3]],
        ],
    )
    .unwrap();
    grade("four points, crossed halvings", &crossed);
}
