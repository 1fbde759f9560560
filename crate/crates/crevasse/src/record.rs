//! JSON records for every object the command line moves around. Shapes are
//! frozen so outputs stay diffable:
//!
//! - algebra: `{"atoms": 3}`
//! - element: sorted atom list, `[0, 2]`
//! - partition: block list, `[[0, 1], [2, 3]]`
//! - function table: `[[input, output], ...]` element pairs, one per
//!   source element
//! - partition structure: `{"algebra": {...}, "generators": [partition, ...]}`
//! - space: `{"points": 4, "crevasses": [partition, ...]}`
//! - tree: `{"branching": [2], "depth_bound": 12, "subspace": "eventually-zero"}`
//!   with an optional `"closure": "full-unions"`
//! - branch: `{"prefix": "10", "period": "0"}`
//!
//! Every parser rejects with [`Error::Record`] and a message naming the
//! offending part; every emitter produces a record its parser maps back to
//! an equal object.

use serde_json::{json, Value};

use crate::algebra::{Element, FunctionTable, GroundAlgebra};
use crate::error::{Error, Result};
use crate::lattice::Partition;
use crate::partition_algebra::BooleanPartitionAlgebra;
use crate::space::{PartitionSpace, UniformMap};
use crate::tree::{BranchDescriptor, ClosureRule, Subspace, TreeModel};

fn bad(what: impl Into<String>) -> Error {
    Error::Record(what.into())
}

fn field<'v>(v: &'v Value, name: &str) -> Result<&'v Value> {
    v.get(name).ok_or_else(|| bad(format!("missing field \"{name}\"")))
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| bad(format!("{what} must be a nonnegative integer")))
}

fn as_array<'v>(v: &'v Value, what: &str) -> Result<&'v Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))
}

fn as_str<'v>(v: &'v Value, what: &str) -> Result<&'v str> {
    v.as_str().ok_or_else(|| bad(format!("{what} must be a string")))
}

pub fn parse_algebra(v: &Value) -> Result<GroundAlgebra> {
    let atoms = as_usize(field(v, "atoms")?, "\"atoms\"")?;
    GroundAlgebra::new(atoms)
}

pub fn emit_algebra(a: GroundAlgebra) -> Value {
    json!({ "atoms": a.atom_count() })
}

pub fn parse_element(algebra: GroundAlgebra, v: &Value) -> Result<Element> {
    let atoms = as_array(v, "an element")?;
    let mut list = Vec::with_capacity(atoms.len());
    for a in atoms {
        list.push(as_usize(a, "an atom index")?);
    }
    algebra.element(&list)
}

pub fn emit_element(x: Element) -> Value {
    Value::Array(x.atom_list().into_iter().map(|a| json!(a)).collect())
}

pub fn parse_partition(algebra: GroundAlgebra, v: &Value) -> Result<Partition> {
    let blocks = as_array(v, "a partition")?;
    let mut parsed = Vec::with_capacity(blocks.len());
    for b in blocks {
        parsed.push(parse_element(algebra, b)?);
    }
    Partition::new(algebra, parsed)
}

pub fn emit_partition(p: &Partition) -> Value {
    Value::Array(p.blocks().iter().map(|&b| emit_element(b)).collect())
}

/// Parses `[[input, output], ...]` pairs into a total table. Each source
/// element must appear exactly once.
pub fn parse_table(source: GroundAlgebra, target: GroundAlgebra, v: &Value) -> Result<FunctionTable> {
    let pairs = as_array(v, "a function table")?;
    let mut values: Vec<Option<Element>> = vec![None; source.element_count()];
    for pair in pairs {
        let pair = as_array(pair, "a table entry")?;
        if pair.len() != 2 {
            return Err(bad("a table entry must be an [input, output] pair"));
        }
        let x = parse_element(source, &pair[0])?;
        let y = parse_element(target, &pair[1])?;
        let slot = &mut values[x.mask() as usize];
        if slot.is_some() {
            return Err(bad(format!("two outputs for input {:?}", x.atom_list())));
        }
        *slot = Some(y);
    }
    let values: Option<Vec<Element>> = values.into_iter().collect();
    let values = values.ok_or_else(|| bad("table does not cover every source element"))?;
    FunctionTable::new(source, target, values)
}

pub fn emit_table(t: &FunctionTable) -> Value {
    Value::Array(
        t.source()
            .elements()
            .map(|x| json!([emit_element(x), emit_element(t.apply(x).unwrap())]))
            .collect(),
    )
}

pub fn parse_structure(v: &Value) -> Result<BooleanPartitionAlgebra> {
    let algebra = parse_algebra(field(v, "algebra")?)?;
    let gens = as_array(field(v, "generators")?, "\"generators\"")?;
    let mut generators = Vec::with_capacity(gens.len());
    for g in gens {
        generators.push(parse_partition(algebra, g)?);
    }
    BooleanPartitionAlgebra::from_generators(algebra, generators)
}

pub fn emit_structure(b: &BooleanPartitionAlgebra) -> Value {
    json!({
        "algebra": emit_algebra(b.algebra()),
        "generators": b
            .filter()
            .generators()
            .iter()
            .map(emit_partition)
            .collect::<Vec<_>>(),
    })
}

pub fn parse_space(v: &Value) -> Result<PartitionSpace> {
    let points = as_usize(field(v, "points")?, "\"points\"")?;
    let ground = GroundAlgebra::new(points)?;
    let crevasses = as_array(field(v, "crevasses")?, "\"crevasses\"")?;
    let mut parsed = Vec::with_capacity(crevasses.len());
    for c in crevasses {
        parsed.push(parse_partition(ground, c)?);
    }
    PartitionSpace::new(points, parsed)
}

pub fn emit_space(s: &PartitionSpace) -> Value {
    json!({
        "points": s.point_count(),
        "crevasses": s.generators().iter().map(emit_partition).collect::<Vec<_>>(),
    })
}

/// Morphism record: a function table between the algebras of two explicit
/// structures. The table is not required to be a homomorphism; checks that
/// care verify it themselves.
pub fn parse_morphism_parts(
    v: &Value,
) -> Result<(BooleanPartitionAlgebra, BooleanPartitionAlgebra, FunctionTable)> {
    let source = parse_structure(field(v, "source")?)?;
    let target = parse_structure(field(v, "target")?)?;
    let table = parse_table(source.algebra(), target.algebra(), field(v, "table")?)?;
    Ok((source, target, table))
}

pub fn emit_morphism_parts(
    source: &BooleanPartitionAlgebra,
    target: &BooleanPartitionAlgebra,
    table: &FunctionTable,
) -> Value {
    json!({
        "source": emit_structure(source),
        "target": emit_structure(target),
        "table": emit_table(table),
    })
}

/// Point-map record: a function between two spaces, one target point per
/// source point.
pub fn parse_point_map(v: &Value) -> Result<UniformMap> {
    let source = parse_space(field(v, "source")?)?;
    let target = parse_space(field(v, "target")?)?;
    let points = as_array(field(v, "points")?, "\"points\"")?;
    let map = points
        .iter()
        .map(|p| as_usize(p, "a point"))
        .collect::<Result<Vec<_>>>()?;
    UniformMap::new(source, target, map)
}

pub fn emit_point_map(f: &UniformMap) -> Value {
    json!({
        "source": emit_space(f.source()),
        "target": emit_space(f.target()),
        "points": f.point_map(),
    })
}

pub fn parse_branch(v: &Value) -> Result<BranchDescriptor> {
    let prefix = as_str(field(v, "prefix")?, "\"prefix\"")?;
    let period = as_str(field(v, "period")?, "\"period\"")?;
    BranchDescriptor::parse(prefix, period)
}

pub fn emit_branch(b: &BranchDescriptor) -> Value {
    let digits = |ds: &[u8]| ds.iter().map(|d| d.to_string()).collect::<String>();
    json!({ "prefix": digits(b.prefix()), "period": digits(b.period()) })
}

fn parse_subspace(v: &Value) -> Result<Subspace> {
    if let Some(name) = v.as_str() {
        return match name {
            "all" => Ok(Subspace::All),
            "eventually-zero" => Ok(Subspace::EventuallyZero),
            "finitely-many-ones" => Ok(Subspace::FinitelyManyOnes),
            other => Err(bad(format!("unknown subspace \"{other}\""))),
        };
    }
    if let Some(branches) = v.as_array() {
        let mut parsed = Vec::with_capacity(branches.len());
        for b in branches {
            parsed.push(parse_branch(b)?);
        }
        return Ok(Subspace::Explicit(parsed));
    }
    Err(bad("\"subspace\" must be a name or a list of branches"))
}

fn emit_subspace(s: &Subspace) -> Value {
    match s {
        Subspace::All => json!("all"),
        Subspace::EventuallyZero => json!("eventually-zero"),
        Subspace::FinitelyManyOnes => json!("finitely-many-ones"),
        Subspace::Explicit(branches) => {
            Value::Array(branches.iter().map(emit_branch).collect())
        }
    }
}

pub fn parse_tree(v: &Value) -> Result<TreeModel> {
    let fanouts = as_array(field(v, "branching")?, "\"branching\"")?;
    let mut branching = Vec::with_capacity(fanouts.len());
    for f in fanouts {
        let f = as_usize(f, "a branching factor")?;
        branching.push(u8::try_from(f).map_err(|_| bad("branching factor out of range"))?);
    }
    let depth_bound = as_usize(field(v, "depth_bound")?, "\"depth_bound\"")?;
    let subspace = parse_subspace(field(v, "subspace")?)?;
    let model = TreeModel::new(branching, depth_bound, subspace)?;
    match v.get("closure") {
        None => Ok(model),
        Some(c) => match as_str(c, "\"closure\"")? {
            "node-antichains" => Ok(model.with_closure(ClosureRule::NodeAntichains)),
            "full-unions" => Ok(model.with_closure(ClosureRule::FullUnions)),
            other => Err(bad(format!("unknown closure rule \"{other}\""))),
        },
    }
}

pub fn emit_tree(t: &TreeModel) -> Value {
    let mut v = json!({
        "branching": t.branching(),
        "depth_bound": t.depth_bound(),
        "subspace": emit_subspace(t.subspace()),
    });
    if t.closure() == ClosureRule::FullUnions {
        v["closure"] = json!("full-unions");
    }
    v
}

/// Any top-level record the command line accepts, told apart by shape.
#[derive(Clone, Debug, PartialEq)]
pub enum Record {
    Algebra(GroundAlgebra),
    Structure(BooleanPartitionAlgebra),
    Space(PartitionSpace),
    Tree(TreeModel),
    Branch(BranchDescriptor),
}

pub fn parse_record(v: &Value) -> Result<Record> {
    let obj = v
        .as_object()
        .ok_or_else(|| bad("a record must be a JSON object"))?;
    if obj.contains_key("generators") {
        Ok(Record::Structure(parse_structure(v)?))
    } else if obj.contains_key("crevasses") {
        Ok(Record::Space(parse_space(v)?))
    } else if obj.contains_key("branching") {
        Ok(Record::Tree(parse_tree(v)?))
    } else if obj.contains_key("period") {
        Ok(Record::Branch(parse_branch(v)?))
    } else if obj.contains_key("atoms") {
        Ok(Record::Algebra(parse_algebra(v)?))
    } else {
        Err(bad(
            "record shape not recognized: expected one of the keys \
             generators, crevasses, branching, period, atoms",
        ))
    }
}

pub fn parse_record_str(s: &str) -> Result<Record> {
    let v: Value = serde_json::from_str(s).map_err(|e| bad(format!("invalid JSON: {e}")))?;
    parse_record(&v)
}

pub fn emit_record(r: &Record) -> Value {
    match r {
        Record::Algebra(a) => emit_algebra(*a),
        Record::Structure(b) => emit_structure(b),
        Record::Space(s) => emit_space(s),
        Record::Tree(t) => emit_tree(t),
        Record::Branch(b) => emit_branch(b),
    }
}
