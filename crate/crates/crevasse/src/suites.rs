//! Law suites: every claim the crate makes, re-derived by exhaustive sweep
//! at desk scale and reported check by check.
//!
//! Each check has a stable name and stops at its first counterexample,
//! recorded as a JSON object holding the exact instance. [`replay`] re-runs
//! a named check on such a record, so a failure in a report can always be
//! reproduced from the report alone. Sweeps and replays share the same
//! per-instance predicates; the sweep only chooses what to feed them.

use std::time::Instant;

use serde_json::{json, Value};

use crate::algebra::{
    extended_triples, is_boolean_homomorphism, maps_triples_to_extended, Element,
    FunctionTable, GroundAlgebra,
};
use crate::duality::{
    completion, dual_algebra, dual_space, preimage_hom, recheck_reflection,
    reflection_witness, space_reflection, spectrum_map, stone_reflection,
};
use crate::error::{Error, Result};
use crate::lattice::{
    all_partitions, is_partition, CellularFamily, CoarseningMap, Partition,
};
use crate::morphism::{
    all_homomorphisms, is_partition_hom, is_partition_hom_by_members, is_partitional,
    is_partitional_by_members, partitional_via_extended, PartitionHom,
};
use crate::partition_algebra::{
    coherent_limit_points, enumerate_filter_ultrafilters, limit_to_ultrafilter,
    stability_report, stability_witness, ultrafilter_to_limit, BooleanPartitionAlgebra,
};
use crate::record;
use crate::space::{is_uniformly_continuous, PartitionSpace, UniformMap};
use crate::tree::{BranchDescriptor, Subspace, TreeModel};

pub const SUITE_NAMES: [&str; 5] = ["lattice", "algebras", "morphisms", "duality", "tree"];

/// Sweep sizes. The defaults match the exhaustive desk-scale story: four
/// atoms and points is where the counts stay in the hundreds, and depth
/// eight keeps tree levels at 256 nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_atoms: usize,
    pub max_points: usize,
    pub depth: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_atoms: 4, max_points: 4, depth: 8 }
    }
}

impl Bounds {
    /// Caps keep every sweep exhaustive in reasonable time: partition
    /// counts are Bell numbers, so six atoms is already two hundred
    /// partitions, and depth twelve is four thousand tree nodes.
    pub fn validated(self) -> Result<Self> {
        if !(1..=6).contains(&self.max_atoms) {
            return Err(Error::BadBound(format!(
                "max-atoms must be between 1 and 6, got {}",
                self.max_atoms
            )));
        }
        if !(1..=6).contains(&self.max_points) {
            return Err(Error::BadBound(format!(
                "max-points must be between 1 and 6, got {}",
                self.max_points
            )));
        }
        if !(1..=12).contains(&self.depth) {
            return Err(Error::BadBound(format!(
                "depth must be between 1 and 12, got {}",
                self.depth
            )));
        }
        Ok(self)
    }
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// First failing instance, in the record shapes [`replay`] accepts.
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub instances: Vec<(String, usize)>,
    pub checks: Vec<CheckOutcome>,
    pub wall_ms: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "instances": self
                .instances
                .iter()
                .map(|(kind, count)| json!({ "kind": kind, "count": count }))
                .collect::<Vec<_>>(),
            "checks": self
                .checks
                .iter()
                .map(|c| {
                    let mut o = json!({ "name": c.name, "passed": c.passed });
                    if let Some(cx) = &c.counterexample {
                        o["counterexample"] = cx.clone();
                    }
                    o
                })
                .collect::<Vec<_>>(),
            "passed": self.passed(),
            "wall_ms": self.wall_ms as u64,
        })
    }

    /// One fact per line, fixed order, so reports diff cleanly.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("suite {}\n", self.suite));
        for (kind, count) in &self.instances {
            out.push_str(&format!("instances {kind}={count}\n"));
        }
        for c in &self.checks {
            if c.passed {
                out.push_str(&format!("check {} pass\n", c.name));
            } else {
                let cx = c
                    .counterexample
                    .as_ref()
                    .map(|v| v.to_string())
                    .unwrap_or_default();
                out.push_str(&format!("check {} fail {cx}\n", c.name));
            }
        }
        out.push_str(&format!(
            "result {}\n",
            if self.passed() { "pass" } else { "fail" }
        ));
        out.push_str(&format!("wall-ms {}\n", self.wall_ms));
        out
    }
}

pub fn run_suite(name: &str, bounds: &Bounds) -> Result<SuiteReport> {
    let bounds = bounds.validated()?;
    match name {
        "lattice" => Ok(lattice_suite(&bounds)),
        "algebras" => Ok(algebras_suite(&bounds)),
        "morphisms" => Ok(morphisms_suite(&bounds)),
        "duality" => Ok(duality_suite(&bounds)),
        "tree" => Ok(tree_suite(&bounds)),
        other => Err(Error::UnknownSuite(other.to_string())),
    }
}

pub fn run_all(bounds: &Bounds) -> Result<Vec<SuiteReport>> {
    SUITE_NAMES
        .iter()
        .map(|name| run_suite(name, bounds))
        .collect()
}

fn outcome(name: &str, counterexample: Option<Value>) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        passed: counterexample.is_none(),
        counterexample,
    }
}

// ---------------------------------------------------------------- lattice

fn lattice_instance(algebra: GroundAlgebra, parts: &[&Partition]) -> Value {
    json!({
        "algebra": record::emit_algebra(algebra),
        "partitions": parts.iter().map(|p| record::emit_partition(p)).collect::<Vec<_>>(),
    })
}

/// Reflexivity, antisymmetry, and transitivity among the given partitions.
fn order_axioms_hold(parts: &[Partition]) -> bool {
    for p in parts {
        if !p.refines(p).unwrap() {
            return false;
        }
    }
    for p in parts {
        for q in parts {
            if p.refines(q).unwrap() && q.refines(p).unwrap() && p != q {
                return false;
            }
            if !p.refines(q).unwrap() {
                continue;
            }
            for r in parts {
                if q.refines(r).unwrap() && !p.refines(r).unwrap() {
                    return false;
                }
            }
        }
    }
    true
}

/// Identity and composition of coarsening maps along p ⪯ q ⪯ r, plus the
/// defining property that each block maps to the block containing it.
/// Vacuous when the chain does not refine.
fn coarsening_laws_hold(p: &Partition, q: &Partition, r: &Partition) -> bool {
    if !(p.refines(q).unwrap() && q.refines(r).unwrap()) {
        return true;
    }
    let pq = CoarseningMap::new(p.clone(), q.clone()).unwrap();
    let qr = CoarseningMap::new(q.clone(), r.clone()).unwrap();
    let pr = CoarseningMap::new(p.clone(), r.clone()).unwrap();
    let id = CoarseningMap::new(p.clone(), p.clone()).unwrap();
    let via_then = pq.then(&qr).unwrap();
    for &b in p.blocks() {
        if id.apply(b).unwrap() != b {
            return false;
        }
        let up = pq.apply(b).unwrap();
        if !q.contains_block(up) || b.mask() & !up.mask() != 0 {
            return false;
        }
        let direct = pr.apply(b).unwrap();
        if qr.apply(up).unwrap() != direct || via_then.apply(b).unwrap() != direct {
            return false;
        }
    }
    true
}

/// The computed meet is a lower bound that every common refinement refines:
/// exactly the greatest lower bound the brute search would find.
fn meet_matches_brute(all: &[Partition], p: &Partition, q: &Partition) -> bool {
    let meet = p.meet(q).unwrap();
    if !(meet.refines(p).unwrap() && meet.refines(q).unwrap()) {
        return false;
    }
    all.iter().all(|s| {
        !(s.refines(p).unwrap() && s.refines(q).unwrap()) || s.refines(&meet).unwrap()
    })
}

/// Along p ⪯ q, every block of q is the join of the p-blocks below it.
fn join_decomposition_holds(p: &Partition, q: &Partition) -> bool {
    if !p.refines(q).unwrap() {
        return true;
    }
    q.blocks().iter().all(|c| {
        let mut joined = 0u16;
        for b in p.blocks() {
            if b.mask() & !c.mask() == 0 {
                joined |= b.mask();
            }
        }
        joined == c.mask()
    })
}

/// A cellular family is maximal exactly when it is a partition, and its
/// maximal extension keeps the original blocks.
fn maximal_cellular_agrees(algebra: GroundAlgebra, blocks: &[Element]) -> bool {
    let family = match CellularFamily::new(algebra, blocks.to_vec()) {
        Ok(f) => f,
        Err(_) => return false,
    };
    let extended = family.extend_to_maximal();
    if !blocks.iter().all(|&b| extended.contains_block(b)) {
        return false;
    }
    let covered = blocks.iter().fold(0u16, |m, b| m | b.mask());
    let maximal = covered == algebra.full_mask();
    maximal == is_partition(algebra, blocks).unwrap()
}

/// All families of pairwise disjoint nonzero elements, the empty one
/// included. One per partition of a subset of the atoms.
fn cellular_families(algebra: GroundAlgebra) -> Vec<Vec<Element>> {
    let elements: Vec<Element> = algebra.elements().filter(|e| !e.is_bottom()).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(
        elements: &[Element],
        start: usize,
        used: u16,
        current: &mut Vec<Element>,
        out: &mut Vec<Vec<Element>>,
    ) {
        out.push(current.clone());
        for i in start..elements.len() {
            if elements[i].mask() & used == 0 {
                current.push(elements[i]);
                rec(elements, i + 1, used | elements[i].mask(), current, out);
                current.pop();
            }
        }
    }
    rec(&elements, 0, 0, &mut current, &mut out);
    out
}

fn lattice_suite(bounds: &Bounds) -> SuiteReport {
    let start = Instant::now();
    let mut partitions_total = 0usize;
    let mut families_total = 0usize;

    let mut order_cx = None;
    let mut coarsening_cx = None;
    let mut meet_cx = None;
    let mut join_cx = None;
    let mut cellular_cx = None;

    for n in 1..=bounds.max_atoms {
        let algebra = GroundAlgebra::new(n).unwrap();
        let all = all_partitions(algebra);
        partitions_total += all.len();

        if order_cx.is_none() {
            'order: for p in &all {
                if !p.refines(p).unwrap() {
                    order_cx = Some(lattice_instance(algebra, &[p]));
                    break;
                }
                for q in &all {
                    if p.refines(q).unwrap() && q.refines(p).unwrap() && p != q {
                        order_cx = Some(lattice_instance(algebra, &[p, q]));
                        break 'order;
                    }
                    if !p.refines(q).unwrap() {
                        continue;
                    }
                    for r in &all {
                        if q.refines(r).unwrap() && !p.refines(r).unwrap() {
                            order_cx = Some(lattice_instance(algebra, &[p, q, r]));
                            break 'order;
                        }
                    }
                }
            }
        }

        if coarsening_cx.is_none() {
            'maps: for p in &all {
                for q in &all {
                    if !p.refines(q).unwrap() {
                        continue;
                    }
                    for r in &all {
                        if q.refines(r).unwrap() && !coarsening_laws_hold(p, q, r) {
                            coarsening_cx = Some(lattice_instance(algebra, &[p, q, r]));
                            break 'maps;
                        }
                    }
                }
            }
        }

        if meet_cx.is_none() {
            'meets: for (i, p) in all.iter().enumerate() {
                for q in &all[i..] {
                    if !meet_matches_brute(&all, p, q) {
                        meet_cx = Some(lattice_instance(algebra, &[p, q]));
                        break 'meets;
                    }
                }
            }
        }

        if join_cx.is_none() {
            'joins: for p in &all {
                for q in &all {
                    if p.refines(q).unwrap() && !join_decomposition_holds(p, q) {
                        join_cx = Some(lattice_instance(algebra, &[p, q]));
                        break 'joins;
                    }
                }
            }
        }

        let families = cellular_families(algebra);
        families_total += families.len();
        if cellular_cx.is_none() {
            for family in &families {
                if !maximal_cellular_agrees(algebra, family) {
                    cellular_cx = Some(json!({
                        "algebra": record::emit_algebra(algebra),
                        "family": family
                            .iter()
                            .map(|&b| record::emit_element(b))
                            .collect::<Vec<_>>(),
                    }));
                    break;
                }
            }
        }
    }

    SuiteReport {
        suite: "lattice".into(),
        instances: vec![
            ("algebras".into(), bounds.max_atoms),
            ("partitions".into(), partitions_total),
            ("cellular-families".into(), families_total),
        ],
        checks: vec![
            outcome("refinement-partial-order", order_cx),
            outcome("coarsening-inverse-system", coarsening_cx),
            outcome("meet-matches-brute-glb", meet_cx),
            outcome("join-decomposition", join_cx),
            outcome("maximal-cellular-is-partition", cellular_cx),
        ],
        wall_ms: start.elapsed().as_millis(),
    }
}

// --------------------------------------------------------------- algebras

/// The three defining readings agree with each other and with their
/// spelled-out member-sweep forms.
fn validity_readings_consistent(bpa: &BooleanPartitionAlgebra) -> bool {
    let v = bpa.validate();
    if v.two_block_members != v.every_element_blocked
        || v.every_element_blocked != v.all_partitions_included
    {
        return false;
    }
    let algebra = bpa.algebra();
    let members = bpa.filter().members();
    let literal_blocked = algebra
        .elements()
        .all(|b| b.is_bottom() || members.iter().any(|m| m.contains_block(b)));
    let literal_all = all_partitions(algebra)
        .iter()
        .all(|p| bpa.filter().contains(p).unwrap());
    v.every_element_blocked == literal_blocked && v.all_partitions_included == literal_all
}

fn induced_is_fully_valid(bpa: &BooleanPartitionAlgebra) -> bool {
    let v = bpa.induced().bpa().validate();
    v.two_block_members && v.every_element_blocked && v.all_partitions_included
}

/// On valid structures all four stability readings hold; invalid ones are
/// covered by [`witness_matches_report`] instead.
fn stability_agrees_when_valid(bpa: &BooleanPartitionAlgebra) -> bool {
    !bpa.is_valid() || stability_report(bpa).all()
}

/// The witness exists exactly when the first reading fails, and a claimed
/// witness is confirmed unreached by the literal member sweep.
fn witness_matches_report(bpa: &BooleanPartitionAlgebra) -> bool {
    let report = stability_report(bpa);
    match stability_witness(bpa) {
        None => report.selections_reach_every_element,
        Some(w) => {
            if report.selections_reach_every_element {
                return false;
            }
            let points = coherent_limit_points(bpa.filter());
            bpa.filter()
                .members()
                .iter()
                .all(|m| points.iter().all(|pt| pt.choice(m).unwrap() != w))
        }
    }
}

/// Selections and ultrafilters translate back and forth without loss, in
/// equal numbers. Scoped to valid structures, where both directions are
/// total.
fn limits_biject_with_ultrafilters(bpa: &BooleanPartitionAlgebra) -> bool {
    if !bpa.is_valid() {
        return true;
    }
    let points = coherent_limit_points(bpa.filter());
    let ultras = match enumerate_filter_ultrafilters(bpa) {
        Ok(u) => u,
        Err(_) => return false,
    };
    if points.len() != ultras.len() {
        return false;
    }
    for pt in &points {
        match limit_to_ultrafilter(bpa, pt).and_then(|u| {
            ultrafilter_to_limit(bpa, &u).map(|back| (u, back))
        }) {
            Ok((u, back)) => {
                if back != *pt || !ultras.contains(&u) {
                    return false;
                }
            }
            Err(_) => return false,
        }
    }
    for u in &ultras {
        match ultrafilter_to_limit(bpa, u).and_then(|pt| limit_to_ultrafilter(bpa, &pt)) {
            Ok(back) => {
                if back != *u {
                    return false;
                }
            }
            Err(_) => return false,
        }
    }
    true
}

/// The spectrum of the induced structure has one point per induced atom.
fn spectrum_counts_induced_atoms(bpa: &BooleanPartitionAlgebra) -> bool {
    let induced = bpa.induced();
    match enumerate_filter_ultrafilters(induced.bpa()) {
        Ok(ultras) => ultras.len() == induced.algebra().atom_count(),
        Err(_) => false,
    }
}

fn algebras_suite(bounds: &Bounds) -> SuiteReport {
    let start = Instant::now();
    let mut raw = Vec::new();
    for n in 1..=bounds.max_atoms {
        let algebra = GroundAlgebra::new(n).unwrap();
        for base in all_partitions(algebra) {
            raw.push(BooleanPartitionAlgebra::from_generators(algebra, vec![base]).unwrap());
        }
    }
    // induced structures double as the valid instances for the checks that
    // are scoped to validity
    let mut instances = raw.clone();
    instances.extend(raw.iter().map(|b| b.induced().bpa().clone()));

    let sweep = |pred: &dyn Fn(&BooleanPartitionAlgebra) -> bool,
                 pool: &[BooleanPartitionAlgebra]| {
        pool.iter()
            .find(|b| !pred(b))
            .map(|b| record::emit_structure(b))
    };

    let checks = vec![
        outcome(
            "validity-readings-consistent",
            sweep(&validity_readings_consistent, &raw),
        ),
        outcome(
            "induced-structure-fully-valid",
            sweep(&induced_is_fully_valid, &raw),
        ),
        outcome(
            "stability-readings-agree-on-valid",
            sweep(&stability_agrees_when_valid, &instances),
        ),
        outcome(
            "witness-matches-first-reading",
            sweep(&witness_matches_report, &instances),
        ),
        outcome(
            "limits-biject-with-ultrafilters",
            sweep(&limits_biject_with_ultrafilters, &instances),
        ),
        outcome(
            "spectrum-counts-induced-atoms",
            sweep(&spectrum_counts_induced_atoms, &raw),
        ),
    ];

    SuiteReport {
        suite: "algebras".into(),
        instances: vec![
            ("principal-filters".into(), raw.len()),
            ("structures-checked".into(), instances.len()),
        ],
        checks,
        wall_ms: start.elapsed().as_millis(),
    }
}

// -------------------------------------------------------------- morphisms

fn full(n: usize) -> BooleanPartitionAlgebra {
    BooleanPartitionAlgebra::full(
        GroundAlgebra::new(n).unwrap(),
        crate::partition_algebra::PartitionBound::Arbitrary,
    )
}

fn triple_criterion_agrees(table: &FunctionTable) -> bool {
    crate::algebra::hom_via_triples(table) == is_boolean_homomorphism(table)
}

fn extended_criterion_agrees(table: &FunctionTable, source: &BooleanPartitionAlgebra) -> bool {
    partitional_via_extended(table, source).unwrap() == is_partitional(table, source).unwrap()
}

/// Identity, closure under composition, and associativity, within the
/// given maps.
fn category_laws_hold(homs: &[PartitionHom]) -> bool {
    for h in homs {
        let ids = PartitionHom::identity(h.source());
        let idt = PartitionHom::identity(h.target());
        let left = match ids.then(h) {
            Ok(c) => c,
            Err(_) => return false,
        };
        let right = match h.then(&idt) {
            Ok(c) => c,
            Err(_) => return false,
        };
        if left.table() != h.table() || right.table() != h.table() {
            return false;
        }
    }
    for h in homs {
        for k in homs {
            if h.target() != k.source() {
                continue;
            }
            let hk = match h.then(k) {
                Ok(c) => c,
                Err(_) => return false,
            };
            for l in homs {
                if k.target() != l.source() {
                    continue;
                }
                let left = match hk.then(l) {
                    Ok(c) => c,
                    Err(_) => return false,
                };
                let right = match k.then(l).and_then(|kl| h.then(&kl)) {
                    Ok(c) => c,
                    Err(_) => return false,
                };
                if left.table() != right.table() {
                    return false;
                }
            }
        }
    }
    true
}

fn generator_reduction_agrees(
    table: &FunctionTable,
    source: &BooleanPartitionAlgebra,
    target: &BooleanPartitionAlgebra,
) -> bool {
    is_partitional(table, source).unwrap() == is_partitional_by_members(table, source).unwrap()
        && is_partition_hom(table, source, target).unwrap()
            == is_partition_hom_by_members(table, source, target).unwrap()
}

fn morphisms_suite(bounds: &Bounds) -> SuiteReport {
    let start = Instant::now();
    let p3 = GroundAlgebra::new(3).unwrap();
    let p2 = GroundAlgebra::new(2).unwrap();
    let full3 = full(3);
    let full2 = full(2);
    let triples = extended_triples(p3);
    let targets: Vec<Element> = p2.elements().collect();

    let mut triple_cx = None;
    let mut extended_cx = None;
    let mut hom_count = 0usize;
    let table_count = 1usize << 16;
    for code in 0..table_count {
        let mut c = code;
        let values: Vec<Element> = (0..8)
            .map(|_| {
                let v = targets[c & 3];
                c >>= 2;
                v
            })
            .collect();
        let table = FunctionTable::new(p3, p2, values).unwrap();
        let is_hom = is_boolean_homomorphism(&table);
        if is_hom {
            hom_count += 1;
        }
        if triple_cx.is_none() && maps_triples_to_extended(&table, &triples) != is_hom {
            triple_cx = Some(record::emit_morphism_parts(&full3, &full2, &table));
        }
        if extended_cx.is_none() && !extended_criterion_agrees(&table, &full3) {
            extended_cx = Some(record::emit_morphism_parts(&full3, &full2, &table));
        }
    }

    // between powersets, homomorphisms are functions on atoms backwards
    let frozen_cx = (hom_count != 9).then(|| {
        json!({
            "expected-homomorphisms": 9,
            "found": hom_count,
            "source": record::emit_structure(&full3),
            "target": record::emit_structure(&full2),
        })
    });

    let cap = bounds.max_atoms.min(3);
    let fulls: Vec<BooleanPartitionAlgebra> = (1..=cap).map(full).collect();
    let mut homs = Vec::new();
    for s in &fulls {
        for t in &fulls {
            for table in all_homomorphisms(s.algebra(), t.algebra()) {
                if is_partition_hom(&table, s, t).unwrap() {
                    homs.push(PartitionHom::new(s.clone(), t.clone(), table).unwrap());
                }
            }
        }
    }
    let mut category_cx = None;
    'category: for h in &homs {
        if !category_laws_hold(std::slice::from_ref(h)) {
            category_cx = Some(json!({ "maps": [morphism_value(h)] }));
            break;
        }
        for k in &homs {
            if h.target() != k.source() {
                continue;
            }
            if !category_laws_hold(&[h.clone(), k.clone()]) {
                category_cx = Some(json!({ "maps": [morphism_value(h), morphism_value(k)] }));
                break 'category;
            }
            for l in &homs {
                if k.target() == l.source()
                    && !category_laws_hold(&[h.clone(), k.clone(), l.clone()])
                {
                    category_cx = Some(json!({
                        "maps": [morphism_value(h), morphism_value(k), morphism_value(l)],
                    }));
                    break 'category;
                }
            }
        }
    }

    let mut reduction_cx = None;
    let mut reduction_count = 0usize;
    'reduction: for n_s in 1..=cap {
        let a_s = GroundAlgebra::new(n_s).unwrap();
        for n_t in 1..=cap {
            let a_t = GroundAlgebra::new(n_t).unwrap();
            let tables = all_homomorphisms(a_s, a_t);
            for base_s in all_partitions(a_s) {
                let src =
                    BooleanPartitionAlgebra::from_generators(a_s, vec![base_s]).unwrap();
                for base_t in all_partitions(a_t) {
                    let tgt =
                        BooleanPartitionAlgebra::from_generators(a_t, vec![base_t]).unwrap();
                    for table in &tables {
                        reduction_count += 1;
                        if !generator_reduction_agrees(table, &src, &tgt) {
                            reduction_cx =
                                Some(record::emit_morphism_parts(&src, &tgt, table));
                            break 'reduction;
                        }
                    }
                }
            }
        }
    }

    SuiteReport {
        suite: "morphisms".into(),
        instances: vec![
            ("tables".into(), table_count),
            ("boolean-homomorphisms".into(), hom_count),
            ("partition-homs".into(), homs.len()),
            ("reduction-cases".into(), reduction_count),
        ],
        checks: vec![
            outcome("triple-criterion-matches-homomorphism", triple_cx),
            outcome("extended-criterion-matches-partitional", extended_cx),
            outcome("homomorphism-count-frozen", frozen_cx),
            outcome("category-laws", category_cx),
            outcome("generator-reduction-matches-member-sweep", reduction_cx),
        ],
        wall_ms: start.elapsed().as_millis(),
    }
}

fn morphism_value(h: &PartitionHom) -> Value {
    record::emit_morphism_parts(h.source(), h.target(), h.table())
}

// ---------------------------------------------------------------- duality

fn dual_algebra_subcomplete_stable(space: &PartitionSpace) -> bool {
    let induced = dual_algebra(space);
    let bpa = induced.bpa();
    bpa.is_subcomplete()
        && bpa.is_valid()
        && stability_report(bpa).all()
        && stability_witness(bpa).is_none()
}

fn spectrum_separating_complete(space: &PartitionSpace) -> bool {
    match dual_space(dual_algebra(space).bpa()) {
        Ok(spectrum) => spectrum.space().is_separating() && spectrum.space().is_complete(),
        Err(_) => false,
    }
}

fn reflection_is_isomorphism(space: &PartitionSpace) -> bool {
    let bpa = dual_algebra(space).bpa().clone();
    match reflection_witness(&bpa) {
        Ok(w) => w.all_hold() && recheck_reflection(&bpa, &w).unwrap_or(false),
        Err(_) => false,
    }
}

/// The canonical map is always uniformly continuous and dense; it is an
/// embedding, and a homeomorphism, exactly for separating spaces.
fn canonical_map_grades_by_separation(space: &PartitionSpace) -> bool {
    match completion(space) {
        Ok(c) => {
            let r = c.report;
            r.uniformly_continuous
                && r.dense
                && r.embedding == space.is_separating()
                && r.homeomorphism == space.is_separating()
        }
        Err(_) => false,
    }
}

/// Both triangle identities: algebra-side composite is the identity table
/// on the space's algebra, space-side composite is the identity on the
/// spectrum of that algebra.
fn round_trips_identity(space: &PartitionSpace) -> bool {
    let inner = || -> Result<bool> {
        let bpa = dual_algebra(space).bpa().clone();
        let cmap = space_reflection(space)?;
        let psi = stone_reflection(&bpa)?;
        let back = preimage_hom(&cmap)?;
        let algebra_side = psi.table().then(back.table())?;
        if algebra_side != FunctionTable::identity(bpa.algebra()) {
            return Ok(false);
        }

        let spectrum = dual_space(&bpa)?.space().clone();
        let c_s = space_reflection(&spectrum)?;
        let down = spectrum_map(&psi)?;
        let space_side = c_s.then(&down)?;
        let identity: Vec<usize> = (0..spectrum.point_count()).collect();
        Ok(space_side.point_map() == identity.as_slice())
    };
    inner().unwrap_or(false)
}

/// Square on the space side: completing before or after a uniformly
/// continuous map gives the same composite.
fn space_naturality_holds(f: &UniformMap) -> bool {
    let inner = || -> Result<bool> {
        let lhs = f.then(&space_reflection(f.target())?)?;
        let rhs = space_reflection(f.source())?.then(&spectrum_map(&preimage_hom(f)?)?)?;
        Ok(lhs.point_map() == rhs.point_map())
    };
    inner().unwrap_or(false)
}

/// Square on the algebra side: reflecting before or after a partition
/// homomorphism gives the same composite.
fn algebra_naturality_holds(h: &PartitionHom) -> bool {
    let inner = || -> Result<bool> {
        let psi_source = stone_reflection(h.source())?;
        let psi_target = stone_reflection(h.target())?;
        let lhs = h.table().then(psi_target.table())?;
        let rhs = psi_source
            .table()
            .then(preimage_hom(&spectrum_map(h)?)?.table())?;
        Ok(lhs == rhs)
    };
    inner().unwrap_or(false)
}

fn functor_identity_space(space: &PartitionSpace) -> bool {
    let inner = || -> Result<bool> {
        let pulled = preimage_hom(&UniformMap::identity(space))?;
        if *pulled.table() != FunctionTable::identity(dual_algebra(space).algebra()) {
            return Ok(false);
        }
        let bpa = dual_algebra(space).bpa().clone();
        let pushed = spectrum_map(&PartitionHom::identity(&bpa))?;
        let n = pushed.source().point_count();
        let identity: Vec<usize> = (0..n).collect();
        Ok(pushed.point_map() == identity.as_slice())
    };
    inner().unwrap_or(false)
}

fn functor_composition_space(f: &UniformMap, g: &UniformMap) -> bool {
    let inner = || -> Result<bool> {
        let pulled = preimage_hom(&f.then(g)?)?;
        let stepwise = preimage_hom(g)?.table().then(preimage_hom(f)?.table())?;
        Ok(*pulled.table() == stepwise)
    };
    inner().unwrap_or(false)
}

fn functor_composition_algebra(h: &PartitionHom, k: &PartitionHom) -> bool {
    let inner = || -> Result<bool> {
        let pushed = spectrum_map(&h.then(k)?)?;
        let stepwise = spectrum_map(k)?.then(&spectrum_map(h)?)?;
        Ok(pushed.point_map() == stepwise.point_map())
    };
    inner().unwrap_or(false)
}

fn principal_spaces(max_points: usize) -> Vec<PartitionSpace> {
    let mut spaces = Vec::new();
    for n in 1..=max_points {
        let ground = GroundAlgebra::new(n).unwrap();
        for base in all_partitions(ground) {
            spaces.push(PartitionSpace::new(n, vec![base]).unwrap());
        }
    }
    spaces
}

fn uniformly_continuous_maps(x: &PartitionSpace, y: &PartitionSpace) -> Vec<UniformMap> {
    let s = x.point_count();
    let t = y.point_count();
    let mut maps = Vec::new();
    let total = t.pow(s as u32);
    for code in 0..total {
        let mut c = code;
        let assignment: Vec<usize> = (0..s)
            .map(|_| {
                let v = c % t;
                c /= t;
                v
            })
            .collect();
        let map = UniformMap::new(x.clone(), y.clone(), assignment).unwrap();
        if is_uniformly_continuous(&map).unwrap() {
            maps.push(map);
        }
    }
    maps
}

fn duality_suite(bounds: &Bounds) -> SuiteReport {
    let start = Instant::now();
    let spaces = principal_spaces(bounds.max_points);

    let sweep = |pred: &dyn Fn(&PartitionSpace) -> bool| {
        spaces.iter().find(|s| !pred(s)).map(|s| record::emit_space(s))
    };

    let dual_cx = sweep(&dual_algebra_subcomplete_stable);
    let spectrum_cx = sweep(&spectrum_separating_complete);
    let reflection_cx = sweep(&reflection_is_isomorphism);
    let canonical_cx = sweep(&canonical_map_grades_by_separation);
    let round_cx = sweep(&round_trips_identity);

    // naturality and functor laws sweep every map between small instances
    let small_spaces = principal_spaces(bounds.max_points.min(3));
    let mut uc_count = 0usize;
    let mut naturality_cx = None;
    'nat_space: for x in &small_spaces {
        for y in &small_spaces {
            for f in uniformly_continuous_maps(x, y) {
                uc_count += 1;
                if !space_naturality_holds(&f) {
                    let mut v = record::emit_point_map(&f);
                    v["square"] = json!("space");
                    naturality_cx = Some(v);
                    break 'nat_space;
                }
            }
        }
    }
    let fulls: Vec<BooleanPartitionAlgebra> =
        (1..=bounds.max_atoms.min(3)).map(full).collect();
    let mut homs = Vec::new();
    for s in &fulls {
        for t in &fulls {
            for table in all_homomorphisms(s.algebra(), t.algebra()) {
                if is_partition_hom(&table, s, t).unwrap() {
                    homs.push(PartitionHom::new(s.clone(), t.clone(), table).unwrap());
                }
            }
        }
    }
    if naturality_cx.is_none() {
        for h in &homs {
            if !algebra_naturality_holds(h) {
                let mut v = morphism_value(h);
                v["square"] = json!("algebra");
                naturality_cx = Some(v);
                break;
            }
        }
    }

    let mut functor_cx = None;
    for space in &small_spaces {
        if !functor_identity_space(space) {
            functor_cx = Some(json!({
                "law": "identity",
                "space": record::emit_space(space),
            }));
            break;
        }
    }
    if functor_cx.is_none() {
        // composition instances stay at two points: the square already
        // swept three
        let tiny = principal_spaces(bounds.max_points.min(2));
        'comp_space: for x in &tiny {
            for y in &tiny {
                for f in uniformly_continuous_maps(x, y) {
                    for z in &tiny {
                        for g in uniformly_continuous_maps(y, z) {
                            if !functor_composition_space(&f, &g) {
                                functor_cx = Some(json!({
                                    "law": "composition-space",
                                    "first": record::emit_point_map(&f),
                                    "second": record::emit_point_map(&g),
                                }));
                                break 'comp_space;
                            }
                        }
                    }
                }
            }
        }
    }
    if functor_cx.is_none() {
        let tiny: Vec<&PartitionHom> = homs
            .iter()
            .filter(|h| {
                h.source().algebra().atom_count() <= 2
                    && h.target().algebra().atom_count() <= 2
            })
            .collect();
        'comp_alg: for h in &tiny {
            for k in &tiny {
                if h.target() != k.source() {
                    continue;
                }
                if !functor_composition_algebra(h, k) {
                    functor_cx = Some(json!({
                        "law": "composition-algebra",
                        "first": morphism_value(h),
                        "second": morphism_value(k),
                    }));
                    break 'comp_alg;
                }
            }
        }
    }

    SuiteReport {
        suite: "duality".into(),
        instances: vec![
            ("spaces".into(), spaces.len()),
            ("uniformly-continuous-maps".into(), uc_count),
            ("partition-homs".into(), homs.len()),
        ],
        checks: vec![
            outcome("dual-algebra-subcomplete-stable", dual_cx),
            outcome("spectrum-separating-complete", spectrum_cx),
            outcome("reflection-is-isomorphism", reflection_cx),
            outcome("canonical-map-grades-by-separation", canonical_cx),
            outcome("round-trips-are-identities", round_cx),
            outcome("naturality-squares-commute", naturality_cx),
            outcome("functor-laws", functor_cx),
        ],
        wall_ms: start.elapsed().as_millis(),
    }
}

// ------------------------------------------------------------------- tree

fn tree_instance(model: &TreeModel, depth: Option<usize>) -> Value {
    let mut v = json!({ "tree": record::emit_tree(model) });
    if let Some(d) = depth {
        v["depth"] = json!(d);
    }
    v
}

fn truncation_bijective_at(model: &TreeModel, depth: usize) -> bool {
    model.truncated_completion_bijective(depth).unwrap_or(false)
}

fn density_at(model: &TreeModel, depth: usize) -> bool {
    model.density_check(depth).unwrap_or(false)
}

/// The completeness call matches the subspace, and an incomplete call
/// names a legal branch outside it.
fn completeness_call_consistent(model: &TreeModel) -> bool {
    let call = model.completeness();
    match model.subspace() {
        Subspace::All => call.complete && call.unrealized.is_none(),
        _ => match call.unrealized {
            Some(w) => {
                !call.complete
                    && model.check_branch(&w).is_ok()
                    && !model.subspace_contains(&w)
            }
            None => false,
        },
    }
}

/// Every representative gets an entry, and each recorded depth is the
/// first level where the representative's path leaves the target.
fn probe_covers_representatives(
    model: &TreeModel,
    branch: &BranchDescriptor,
    depth: usize,
) -> bool {
    let reps = match model.representatives(depth) {
        Ok(r) => r,
        Err(_) => return false,
    };
    match model.nonsurjectivity_probe(branch, depth) {
        Ok(report) => {
            report.entries.len() == reps.len()
                && !report.entries.is_empty()
                && report.entries.iter().all(|(witness, d)| {
                    witness.first_divergence(branch).map(|i| i + 1) == Some(*d)
                })
        }
        Err(_) => false,
    }
}

/// Levels coarsen upward node by node, and the truncated level filter
/// satisfies the defining structure conditions at a small sample depth.
fn level_structure_sound(model: &TreeModel, depth: usize) -> bool {
    for k in 1..=depth {
        let nodes = match model.level_nodes(k) {
            Ok(n) => n,
            Err(_) => return false,
        };
        for node in nodes {
            let parent = node.parent().expect("depth is at least one");
            let below = model.node_element(node).unwrap();
            let above = model.node_element(parent).unwrap();
            if !model.leq(&below, &above) {
                return false;
            }
        }
    }
    let sample = depth.min(3);
    match model.level_filter_conditions(sample) {
        Ok(conditions) => conditions.all(),
        Err(_) => false,
    }
}

fn tree_suite(bounds: &Bounds) -> SuiteReport {
    let start = Instant::now();
    let depth = bounds.depth;
    let all_model = TreeModel::binary(depth, Subspace::All).unwrap();
    let ez_model = TreeModel::binary(depth, Subspace::EventuallyZero).unwrap();
    let models = [&all_model, &ez_model];

    let mut truncation_cx = None;
    'trunc: for model in models {
        for d in 0..=depth {
            if !truncation_bijective_at(model, d) {
                truncation_cx = Some(tree_instance(model, Some(d)));
                break 'trunc;
            }
        }
    }

    let mut density_cx = None;
    'density: for model in models {
        for d in 0..=depth {
            if !density_at(model, d) {
                density_cx = Some(tree_instance(model, Some(d)));
                break 'density;
            }
        }
    }

    let completeness_cx = models
        .iter()
        .find(|m| !completeness_call_consistent(m))
        .map(|m| tree_instance(m, None));

    let ones = BranchDescriptor::constant(1);
    let probe_cx = (!probe_covers_representatives(&ez_model, &ones, depth)).then(|| {
        let mut v = tree_instance(&ez_model, Some(depth));
        v["branch"] = record::emit_branch(&ones);
        v
    });

    let level_cx = models
        .iter()
        .find(|m| !level_structure_sound(m, depth))
        .map(|m| tree_instance(m, Some(depth)));

    let representatives = ez_model
        .representatives(depth)
        .map(|r| r.len())
        .unwrap_or(0);

    SuiteReport {
        suite: "tree".into(),
        instances: vec![
            ("models".into(), models.len()),
            ("depths".into(), depth + 1),
            ("representatives-at-depth".into(), representatives),
        ],
        checks: vec![
            outcome("truncations-complete-bijectively", truncation_cx),
            outcome("density-at-every-depth", density_cx),
            outcome("incompleteness-witnessed", completeness_cx),
            outcome("probe-covers-representatives", probe_cx),
            outcome("level-filter-structure", level_cx),
        ],
        wall_ms: start.elapsed().as_millis(),
    }
}

// ----------------------------------------------------------------- replay

fn parse_lattice_instance(v: &Value) -> Result<(GroundAlgebra, Vec<Partition>)> {
    let algebra = record::parse_algebra(
        v.get("algebra")
            .ok_or_else(|| Error::Record("missing field \"algebra\"".into()))?,
    )?;
    let parts = v
        .get("partitions")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Record("missing field \"partitions\"".into()))?
        .iter()
        .map(|p| record::parse_partition(algebra, p))
        .collect::<Result<Vec<_>>>()?;
    Ok((algebra, parts))
}

fn parse_tree_instance(v: &Value) -> Result<(TreeModel, Option<usize>)> {
    let model = record::parse_tree(
        v.get("tree")
            .ok_or_else(|| Error::Record("missing field \"tree\"".into()))?,
    )?;
    let depth = match v.get("depth") {
        None => None,
        Some(d) => Some(
            d.as_u64()
                .ok_or_else(|| Error::Record("\"depth\" must be an integer".into()))?
                as usize,
        ),
    };
    Ok((model, depth))
}

fn need(v: &Value, name: &str) -> Result<Value> {
    v.get(name)
        .cloned()
        .ok_or_else(|| Error::Record(format!("missing field \"{name}\"")))
}

fn want_pair(parts: &[Partition]) -> Result<(&Partition, &Partition)> {
    match parts {
        [p, q, ..] => Ok((p, q)),
        _ => Err(Error::Record("expected at least two partitions".into())),
    }
}

/// Re-runs the named check on a counterexample record. `Ok(true)` means the
/// failure reproduces; `Ok(false)` means the instance passes the check.
pub fn replay(check: &str, instance: &Value) -> Result<bool> {
    let fails = match check {
        "refinement-partial-order" => {
            let (_, parts) = parse_lattice_instance(instance)?;
            !order_axioms_hold(&parts)
        }
        "coarsening-inverse-system" => {
            let (_, parts) = parse_lattice_instance(instance)?;
            match parts.as_slice() {
                [p, q, r] => !coarsening_laws_hold(p, q, r),
                _ => return Err(Error::Record("expected three partitions".into())),
            }
        }
        "meet-matches-brute-glb" => {
            let (algebra, parts) = parse_lattice_instance(instance)?;
            let (p, q) = want_pair(&parts)?;
            !meet_matches_brute(&all_partitions(algebra), p, q)
        }
        "join-decomposition" => {
            let (_, parts) = parse_lattice_instance(instance)?;
            let (p, q) = want_pair(&parts)?;
            !join_decomposition_holds(p, q)
        }
        "maximal-cellular-is-partition" => {
            let algebra = record::parse_algebra(&need(instance, "algebra")?)?;
            let family = need(instance, "family")?
                .as_array()
                .ok_or_else(|| Error::Record("\"family\" must be an array".into()))?
                .iter()
                .map(|b| record::parse_element(algebra, b))
                .collect::<Result<Vec<_>>>()?;
            !maximal_cellular_agrees(algebra, &family)
        }
        "validity-readings-consistent" => {
            !validity_readings_consistent(&record::parse_structure(instance)?)
        }
        "induced-structure-fully-valid" => {
            !induced_is_fully_valid(&record::parse_structure(instance)?)
        }
        "stability-readings-agree-on-valid" => {
            !stability_agrees_when_valid(&record::parse_structure(instance)?)
        }
        "witness-matches-first-reading" => {
            !witness_matches_report(&record::parse_structure(instance)?)
        }
        "limits-biject-with-ultrafilters" => {
            !limits_biject_with_ultrafilters(&record::parse_structure(instance)?)
        }
        "spectrum-counts-induced-atoms" => {
            !spectrum_counts_induced_atoms(&record::parse_structure(instance)?)
        }
        "triple-criterion-matches-homomorphism" => {
            let (_, _, table) = record::parse_morphism_parts(instance)?;
            !triple_criterion_agrees(&table)
        }
        "extended-criterion-matches-partitional" => {
            let (source, _, table) = record::parse_morphism_parts(instance)?;
            !extended_criterion_agrees(&table, &source)
        }
        "homomorphism-count-frozen" => {
            let (source, target) = match record::parse_morphism_parts(instance) {
                Ok((s, t, _)) => (s.algebra(), t.algebra()),
                Err(_) => (
                    record::parse_structure(&need(instance, "source")?)?.algebra(),
                    record::parse_structure(&need(instance, "target")?)?.algebra(),
                ),
            };
            all_homomorphisms(source, target).len() != 9
        }
        "category-laws" => {
            let maps = need(instance, "maps")?;
            let homs = maps
                .as_array()
                .ok_or_else(|| Error::Record("\"maps\" must be an array".into()))?
                .iter()
                .map(|m| {
                    let (s, t, table) = record::parse_morphism_parts(m)?;
                    PartitionHom::new(s, t, table)
                })
                .collect::<Result<Vec<_>>>()?;
            !category_laws_hold(&homs)
        }
        "generator-reduction-matches-member-sweep" => {
            let (source, target, table) = record::parse_morphism_parts(instance)?;
            !generator_reduction_agrees(&table, &source, &target)
        }
        "dual-algebra-subcomplete-stable" => {
            !dual_algebra_subcomplete_stable(&record::parse_space(instance)?)
        }
        "spectrum-separating-complete" => {
            !spectrum_separating_complete(&record::parse_space(instance)?)
        }
        "reflection-is-isomorphism" => {
            !reflection_is_isomorphism(&record::parse_space(instance)?)
        }
        "canonical-map-grades-by-separation" => {
            !canonical_map_grades_by_separation(&record::parse_space(instance)?)
        }
        "round-trips-are-identities" => {
            !round_trips_identity(&record::parse_space(instance)?)
        }
        "naturality-squares-commute" => {
            match need(instance, "square")?.as_str() {
                Some("space") => !space_naturality_holds(&record::parse_point_map(instance)?),
                Some("algebra") => {
                    let (s, t, table) = record::parse_morphism_parts(instance)?;
                    !algebra_naturality_holds(&PartitionHom::new(s, t, table)?)
                }
                _ => {
                    return Err(Error::Record(
                        "\"square\" must be \"space\" or \"algebra\"".into(),
                    ))
                }
            }
        }
        "functor-laws" => match need(instance, "law")?.as_str() {
            Some("identity") => {
                !functor_identity_space(&record::parse_space(&need(instance, "space")?)?)
            }
            Some("composition-space") => {
                let f = record::parse_point_map(&need(instance, "first")?)?;
                let g = record::parse_point_map(&need(instance, "second")?)?;
                !functor_composition_space(&f, &g)
            }
            Some("composition-algebra") => {
                let (s1, t1, table1) =
                    record::parse_morphism_parts(&need(instance, "first")?)?;
                let (s2, t2, table2) =
                    record::parse_morphism_parts(&need(instance, "second")?)?;
                let h = PartitionHom::new(s1, t1, table1)?;
                let k = PartitionHom::new(s2, t2, table2)?;
                !functor_composition_algebra(&h, &k)
            }
            _ => return Err(Error::Record("unknown functor law".into())),
        },
        "truncations-complete-bijectively" => {
            let (model, depth) = parse_tree_instance(instance)?;
            let d = depth.ok_or_else(|| Error::Record("missing field \"depth\"".into()))?;
            !truncation_bijective_at(&model, d)
        }
        "density-at-every-depth" => {
            let (model, depth) = parse_tree_instance(instance)?;
            let d = depth.ok_or_else(|| Error::Record("missing field \"depth\"".into()))?;
            !density_at(&model, d)
        }
        "incompleteness-witnessed" => {
            let (model, _) = parse_tree_instance(instance)?;
            !completeness_call_consistent(&model)
        }
        "probe-covers-representatives" => {
            let (model, depth) = parse_tree_instance(instance)?;
            let d = depth.ok_or_else(|| Error::Record("missing field \"depth\"".into()))?;
            let branch = record::parse_branch(&need(instance, "branch")?)?;
            !probe_covers_representatives(&model, &branch, d)
        }
        "level-filter-structure" => {
            let (model, depth) = parse_tree_instance(instance)?;
            let d = depth.ok_or_else(|| Error::Record("missing field \"depth\"".into()))?;
            !level_structure_sound(&model, d)
        }
        // the dual command's refusal, replayed: the structure must still
        // be rejected as unstable
        "dual-requires-stable-structure" => {
            let bpa = record::parse_structure(instance)?;
            matches!(dual_space(&bpa), Err(Error::Unstable { .. }))
        }
        other => {
            return Err(Error::Record(format!("no replayable check named \"{other}\"")))
        }
    };
    Ok(fails)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_at_small_bounds() {
        let bounds = Bounds { max_atoms: 3, max_points: 3, depth: 4 };
        for name in SUITE_NAMES {
            let report = run_suite(name, &bounds).unwrap();
            for check in &report.checks {
                assert!(
                    check.passed,
                    "{name}/{} failed: {:?}",
                    check.name, check.counterexample
                );
            }
        }
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(
            run_suite("nosuch", &Bounds::default()),
            Err(Error::UnknownSuite(_))
        ));
    }

    #[test]
    fn bounds_are_capped() {
        assert!(Bounds { max_atoms: 7, ..Bounds::default() }.validated().is_err());
        assert!(Bounds { max_points: 0, ..Bounds::default() }.validated().is_err());
        assert!(Bounds { depth: 13, ..Bounds::default() }.validated().is_err());
        assert!(Bounds::default().validated().is_ok());
    }

    #[test]
    fn report_text_is_line_oriented() {
        let report = run_suite(
            "lattice",
            &Bounds { max_atoms: 2, max_points: 2, depth: 2 },
        )
        .unwrap();
        let text = report.render_text();
        assert!(text.starts_with("suite lattice\n"));
        assert!(text.contains("check refinement-partial-order pass\n"));
        assert!(text.contains("\nresult pass\n"));
        assert!(report.passed());
        assert_eq!(report.to_json()["passed"], json!(true));
    }

    #[test]
    fn replay_reproduces_a_planted_instability() {
        let unstable = json!({
            "algebra": { "atoms": 4 },
            "generators": [[[0, 1], [2, 3]]],
        });
        assert!(replay("dual-requires-stable-structure", &unstable).unwrap());
        let stable = json!({
            "algebra": { "atoms": 2 },
            "generators": [[[0], [1]]],
        });
        assert!(!replay("dual-requires-stable-structure", &stable).unwrap());
    }

    #[test]
    fn replay_reproduces_a_density_failure() {
        let thin = json!({
            "tree": {
                "branching": [2],
                "depth_bound": 4,
                "subspace": [{ "prefix": "0", "period": "0" }],
            },
            "depth": 1,
        });
        assert!(replay("density-at-every-depth", &thin).unwrap());
    }

    #[test]
    fn replay_rejects_unknown_checks_and_bad_records() {
        assert!(matches!(
            replay("nosuch-check", &json!({})),
            Err(Error::Record(_))
        ));
        assert!(matches!(
            replay("meet-matches-brute-glb", &json!({ "algebra": { "atoms": 2 } })),
            Err(Error::Record(_))
        ));
    }
}
