//! The binary branch space at bounded depth: truncations complete to
//! themselves, the eventually-zero subspace is dense but incomplete, and
//! the all-ones branch diverges from every representative.

use crevasse::tree::{BranchDescriptor, Subspace, TreeModel};

fn main() {
    let depth = 8;
    let full = TreeModel::binary(depth, Subspace::All).unwrap();
    let sparse = TreeModel::binary(depth, Subspace::EventuallyZero).unwrap();

    for d in 0..=depth {
        let bij = full.truncated_completion_bijective(d).unwrap();
        let dense = sparse.density_check(d).unwrap();
        println!("depth {d}: truncation bijective {bij}, eventually-zero dense {dense}");
    }

    let call = sparse.completeness();
    println!("eventually-zero complete: {}", call.complete);
    if let Some(missing) = &call.unrealized {
        println!("unrealized branch: {missing}");

        // how fast each depth-8 representative separates from it
        let probe = sparse.nonsurjectivity_probe(missing, depth).unwrap();
        println!("{}", probe.caveat());
        let max = probe.max_divergence_depth();
        let earliest = probe.entries.iter().filter(|(_, d)| *d == 1).count();
        println!(
            "representatives probed {}, divergence depth up to {max}, {} split at the root",
            probe.entries.len(),
            earliest
        );
    }

    // the level filter satisfies the defining structure conditions on the
    // materialized truncation
    let conditions = full.level_filter_conditions(3).unwrap();
    println!("level filter conditions all hold: {}", conditions.all());

    // eventually periodic branches have decidable divergence
    let zeros = BranchDescriptor::constant(0);
    let alternating = BranchDescriptor::parse("", "01").unwrap();
    println!(
        "0^w vs (01)^w first divergence: {:?}",
        zeros.first_divergence(&alternating)
    );
}
