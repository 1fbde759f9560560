//! Randomized laws: record round trips stay lossless and the lattice
//! operations keep their algebraic identities on arbitrary partitions.

use proptest::collection::vec;
use proptest::prelude::*;

use crevasse::lattice::Partition;
use crevasse::partition_algebra::BooleanPartitionAlgebra;
use crevasse::record;
use crevasse::tree::{BranchDescriptor, Subspace, TreeModel};
use crevasse::{FunctionTable, GroundAlgebra, PartitionSpace};

/// Groups atoms by assignment value; every assignment describes exactly
/// one partition.
fn partition_from(algebra: GroundAlgebra, assignment: &[usize]) -> Partition {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut labels: Vec<usize> = Vec::new();
    for (atom, &label) in assignment.iter().enumerate() {
        match labels.iter().position(|&l| l == label) {
            Some(i) => blocks[i].push(atom),
            None => {
                labels.push(label);
                blocks.push(vec![atom]);
            }
        }
    }
    Partition::from_atom_blocks(algebra, &blocks).unwrap()
}

fn assignments(n: usize) -> impl Strategy<Value = Vec<usize>> {
    vec(0..n, n)
}

proptest! {
    #[test]
    fn element_records_round_trip(n in 1usize..=5, mask in 0u16..32) {
        let algebra = GroundAlgebra::new(n).unwrap();
        let mask = mask & algebra.full_mask();
        let e = algebra.element_from_mask(mask).unwrap();
        let v = record::emit_element(e);
        prop_assert_eq!(record::parse_element(algebra, &v).unwrap(), e);
    }

    #[test]
    fn partition_records_round_trip(n in 1usize..=5, a in assignments(5)) {
        let algebra = GroundAlgebra::new(n).unwrap();
        let p = partition_from(algebra, &a[..n]);
        let v = record::emit_partition(&p);
        prop_assert_eq!(record::parse_partition(algebra, &v).unwrap(), p);
    }

    #[test]
    fn structure_records_round_trip(n in 1usize..=5, a in assignments(5), b in assignments(5)) {
        let algebra = GroundAlgebra::new(n).unwrap();
        let gens = vec![partition_from(algebra, &a[..n]), partition_from(algebra, &b[..n])];
        let bpa = BooleanPartitionAlgebra::from_generators(algebra, gens).unwrap();
        let v = record::emit_structure(&bpa);
        prop_assert_eq!(record::parse_structure(&v).unwrap(), bpa);
    }

    #[test]
    fn space_records_round_trip(n in 1usize..=5, a in assignments(5)) {
        let algebra = GroundAlgebra::new(n).unwrap();
        let space = PartitionSpace::new(n, vec![partition_from(algebra, &a[..n])]).unwrap();
        let v = record::emit_space(&space);
        prop_assert_eq!(record::parse_space(&v).unwrap(), space);
    }

    #[test]
    fn table_records_round_trip(
        ns in 1usize..=4,
        nt in 1usize..=4,
        picks in vec(0u16..16, 16),
    ) {
        let source = GroundAlgebra::new(ns).unwrap();
        let target = GroundAlgebra::new(nt).unwrap();
        let values = (0..source.element_count())
            .map(|i| target.element_from_mask(picks[i] & target.full_mask()).unwrap())
            .collect();
        let table = FunctionTable::new(source, target, values).unwrap();
        let sb = BooleanPartitionAlgebra::from_generators(source, vec![]).unwrap();
        let tb = BooleanPartitionAlgebra::from_generators(target, vec![]).unwrap();
        let v = record::emit_morphism_parts(&sb, &tb, &table);
        let (s2, t2, table2) = record::parse_morphism_parts(&v).unwrap();
        prop_assert_eq!(s2, sb);
        prop_assert_eq!(t2, tb);
        prop_assert_eq!(table2, table);
    }

    #[test]
    fn branch_records_round_trip(
        prefix in vec(0u8..2, 0..4),
        period in vec(0u8..2, 1..4),
    ) {
        let b = BranchDescriptor::new(prefix, period).unwrap();
        let v = record::emit_branch(&b);
        let b2 = record::parse_branch(&v).unwrap();
        prop_assert_eq!(record::emit_branch(&b2), v);
    }

    #[test]
    fn tree_records_round_trip(depth in 1usize..=12, which in 0usize..3) {
        let subspace = match which {
            0 => Subspace::All,
            1 => Subspace::EventuallyZero,
            _ => Subspace::FinitelyManyOnes,
        };
        let model = TreeModel::binary(depth, subspace).unwrap();
        let v = record::emit_tree(&model);
        let model2 = record::parse_tree(&v).unwrap();
        prop_assert_eq!(record::emit_tree(&model2), v);
    }

    #[test]
    fn meet_is_commutative_associative_idempotent(
        n in 1usize..=5,
        a in assignments(5),
        b in assignments(5),
        c in assignments(5),
    ) {
        let algebra = GroundAlgebra::new(n).unwrap();
        let p = partition_from(algebra, &a[..n]);
        let q = partition_from(algebra, &b[..n]);
        let r = partition_from(algebra, &c[..n]);
        prop_assert_eq!(p.meet(&q).unwrap(), q.meet(&p).unwrap());
        prop_assert_eq!(p.meet(&p).unwrap(), p.clone());
        let left = p.meet(&q).unwrap().meet(&r).unwrap();
        let right = p.meet(&q.meet(&r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn meet_is_the_greatest_lower_bound_shape(
        n in 1usize..=5,
        a in assignments(5),
        b in assignments(5),
    ) {
        let algebra = GroundAlgebra::new(n).unwrap();
        let p = partition_from(algebra, &a[..n]);
        let q = partition_from(algebra, &b[..n]);
        let m = p.meet(&q).unwrap();
        prop_assert!(m.refines(&p).unwrap());
        prop_assert!(m.refines(&q).unwrap());
    }

    #[test]
    fn refinement_is_antisymmetric(
        n in 1usize..=5,
        a in assignments(5),
        b in assignments(5),
    ) {
        let algebra = GroundAlgebra::new(n).unwrap();
        let p = partition_from(algebra, &a[..n]);
        let q = partition_from(algebra, &b[..n]);
        if p.refines(&q).unwrap() && q.refines(&p).unwrap() {
            prop_assert_eq!(p, q);
        }
    }
}
