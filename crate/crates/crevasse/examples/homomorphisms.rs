//! Sweep every function table from a three-atom to a two-atom algebra and
//! classify: Boolean homomorphisms, partitional maps, partition homs.

use crevasse::algebra::{extended_triples, is_boolean_homomorphism, maps_triples_to_extended};
use crevasse::morphism::{all_homomorphisms, is_partition_hom, is_partitional};
use crevasse::partition_algebra::{BooleanPartitionAlgebra, PartitionBound};
use crevasse::{Element, FunctionTable, GroundAlgebra, PartitionHom};

fn main() {
    let p3 = GroundAlgebra::new(3).unwrap();
    let p2 = GroundAlgebra::new(2).unwrap();
    let full3 = BooleanPartitionAlgebra::full(p3, PartitionBound::Arbitrary);
    let full2 = BooleanPartitionAlgebra::full(p2, PartitionBound::Arbitrary);

    let triples = extended_triples(p3);
    let targets: Vec<Element> = p2.elements().collect();
    let mut homs = 0usize;
    let mut partitional = 0usize;
    let mut agree = true;
    for code in 0..1usize << 16 {
        let mut c = code;
        let values: Vec<Element> = (0..8)
            .map(|_| {
                let v = targets[c & 3];
                c >>= 2;
                v
            })
            .collect();
        let table = FunctionTable::new(p3, p2, values).unwrap();
        let hom = is_boolean_homomorphism(&table);
        agree &= maps_triples_to_extended(&table, &triples) == hom;
        if hom {
            homs += 1;
            if is_partitional(&table, &full3).unwrap() {
                partitional += 1;
            }
        }
    }
    println!("tables: 65536");
    println!("boolean homomorphisms: {homs}");
    println!("partitional among them: {partitional}");
    println!("triple criterion matches everywhere: {agree}");

    // between full structures, partition homs compose
    let tables = all_homomorphisms(p3, p2);
    let ph: Vec<PartitionHom> = tables
        .into_iter()
        .filter(|t| is_partition_hom(t, &full3, &full2).unwrap())
        .map(|t| PartitionHom::new(full3.clone(), full2.clone(), t).unwrap())
        .collect();
    println!("partition homs three atoms to two: {}", ph.len());

    let collapse = PartitionHom::identity(&full2);
    let composed = ph[0].then(&collapse).unwrap();
    println!(
        "composition with the identity is unchanged: {}",
        composed.table() == ph[0].table()
    );
}
