//! Branch spaces of finitely described infinite trees, probed at bounded
//! depth.
//!
//! A [`TreeModel`] names a rooted tree by a periodic fan-out rule, a depth
//! bound for probes, and a subspace of its branch space. Clopen subsets of
//! the branch space are encoded as reduced node antichains ([`Antichain`]),
//! which is exactly the subalgebra generated by the nodes; the level
//! partitions generate the filter. This presentation keeps an infinite
//! algebra finitely computable: Boolean operations stay inside finite
//! antichains, branches are eventually periodic words with decidable
//! equality, and every global claim is either checked structurally or
//! probed depth by depth with the report saying which.
//!
//! The payoff is the pair of phenomena finite powerset algebras cannot
//! show: comb partitions that are genuine partitions of the algebra yet
//! not subcomplete, and subspaces (eventually-zero branches) whose
//! completion strictly enlarges them.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::Partition;
use crate::partition_algebra::BooleanPartitionAlgebra;
use crate::space::PartitionSpace;

/// Hard ceiling on how many nodes one level may hold for any probe.
const MAX_LEVEL_WIDTH: usize = 1 << 20;

/// Widest level that still materializes as a finite powerset algebra.
const MAX_FINITE_WIDTH: usize = 16;

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// A node of the tree, addressed by the digit word leading to it. The root
/// is the empty word.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NodeWord(Vec<u8>);

impl NodeWord {
    pub fn root() -> Self {
        NodeWord(Vec::new())
    }

    pub fn from_digits(digits: &[u8]) -> Self {
        NodeWord(digits.to_vec())
    }

    /// Parses a word of decimal digits; the empty string is the root.
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::BadBranch(format!("non-digit {c:?} in node word")))
            })
            .collect::<Result<Vec<u8>>>()
            .map(NodeWord)
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn child(&self, digit: u8) -> NodeWord {
        let mut w = self.0.clone();
        w.push(digit);
        NodeWord(w)
    }

    pub fn parent(&self) -> Option<NodeWord> {
        if self.0.is_empty() {
            None
        } else {
            Some(NodeWord(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn is_prefix_of(&self, other: &NodeWord) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }
}

impl fmt::Display for NodeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for NodeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            write!(f, "<root>")
        } else {
            write!(f, "{self}")
        }
    }
}

/// A clopen subset of the branch space: finitely many pairwise incomparable
/// nodes, with every full sibling family replaced by its parent. The empty
/// antichain is 0 and the root alone is 1. Canonical form is unique, so
/// derived equality is set equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Antichain {
    nodes: Vec<NodeWord>,
}

impl Antichain {
    pub fn nodes(&self) -> &[NodeWord] {
        &self.nodes
    }

    pub fn is_zero(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.nodes.len() == 1 && self.nodes[0].depth() == 0
    }

    pub fn max_depth(&self) -> usize {
        self.nodes.iter().map(NodeWord::depth).max().unwrap_or(0)
    }
}

impl fmt::Debug for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.is_one() {
            return write!(f, "1");
        }
        let words: Vec<String> = self.nodes.iter().map(|w| w.to_string()).collect();
        write!(f, "[{}]", words.join(" "))
    }
}

/// An eventually periodic branch: the digits of `prefix`, then `period`
/// repeated forever. Structural equality distinguishes presentations of
/// the same branch; [`BranchDescriptor::same_branch`] does not.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BranchDescriptor {
    prefix: Vec<u8>,
    period: Vec<u8>,
}

impl BranchDescriptor {
    pub fn new(prefix: Vec<u8>, period: Vec<u8>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::BadBranch("period must be nonempty".into()));
        }
        Ok(BranchDescriptor { prefix, period })
    }

    pub fn parse(prefix: &str, period: &str) -> Result<Self> {
        Self::new(
            NodeWord::parse(prefix)?.0,
            NodeWord::parse(period)?.0,
        )
    }

    /// The branch that repeats one digit forever.
    pub fn constant(digit: u8) -> Self {
        BranchDescriptor { prefix: Vec::new(), period: vec![digit] }
    }

    /// The branch that follows `prefix` and then stays on digit 0.
    pub fn zeros_after(prefix: Vec<u8>) -> Self {
        BranchDescriptor { prefix, period: vec![0] }
    }

    pub fn prefix(&self) -> &[u8] {
        &self.prefix
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    pub fn digit(&self, i: usize) -> u8 {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.period[(i - self.prefix.len()) % self.period.len()]
        }
    }

    pub fn node_at(&self, depth: usize) -> NodeWord {
        NodeWord((0..depth).map(|i| self.digit(i)).collect())
    }

    /// First digit position where the branches differ, None when they are
    /// the same branch. Two eventually periodic words that agree past both
    /// prefixes for a full common period cycle agree everywhere, which
    /// bounds the comparison.
    pub fn first_divergence(&self, other: &BranchDescriptor) -> Option<usize> {
        let settle = self.prefix.len().max(other.prefix.len());
        let bound = settle + lcm(self.period.len(), other.period.len());
        (0..bound).find(|&i| self.digit(i) != other.digit(i))
    }

    pub fn same_branch(&self, other: &BranchDescriptor) -> bool {
        self.first_divergence(other).is_none()
    }
}

impl fmt::Display for BranchDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.prefix {
            write!(f, "{d}")?;
        }
        write!(f, "(")?;
        for d in &self.period {
            write!(f, "{d}")?;
        }
        write!(f, ")*")
    }
}

/// Which branches of the tree belong to the space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Subspace {
    All,
    EventuallyZero,
    FinitelyManyOnes,
    Explicit(Vec<BranchDescriptor>),
}

/// What counts as an element when a probe asks for a join of infinitely
/// many blocks: only finite node antichains (the node-generated algebra),
/// or every union of branch sets (the powerset reading).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClosureRule {
    NodeAntichains,
    FullUnions,
}

/// A finitely described infinite branch space. Element algebra, level
/// filter, and branch membership are all decidable; probes take a depth
/// and never look past `depth_bound`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TreeModel {
    branching: Vec<u8>,
    depth_bound: usize,
    subspace: Subspace,
    closure: ClosureRule,
}

impl TreeModel {
    pub fn new(branching: Vec<u8>, depth_bound: usize, subspace: Subspace) -> Result<Self> {
        if branching.is_empty() {
            return Err(Error::BadBound("branching rule must be nonempty".into()));
        }
        if let Some(&bad) = branching.iter().find(|&&f| !(2..=10).contains(&f)) {
            return Err(Error::BadBound(format!(
                "fan-out {bad} outside 2..=10"
            )));
        }
        if depth_bound == 0 {
            return Err(Error::BadBound("depth bound must be positive".into()));
        }
        let model = TreeModel {
            branching,
            depth_bound,
            subspace,
            closure: ClosureRule::NodeAntichains,
        };
        if model.checked_level_width(depth_bound).is_none() {
            return Err(Error::LevelTooWide {
                level: depth_bound,
                nodes: MAX_LEVEL_WIDTH,
            });
        }
        if let Subspace::Explicit(branches) = &model.subspace {
            for b in branches {
                model.check_branch(b)?;
            }
        }
        Ok(model)
    }

    pub fn binary(depth_bound: usize, subspace: Subspace) -> Result<Self> {
        TreeModel::new(vec![2], depth_bound, subspace)
    }

    pub fn with_closure(mut self, rule: ClosureRule) -> Self {
        self.closure = rule;
        self
    }

    pub fn branching(&self) -> &[u8] {
        &self.branching
    }

    pub fn depth_bound(&self) -> usize {
        self.depth_bound
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn closure(&self) -> ClosureRule {
        self.closure
    }

    pub fn fanout(&self, level: usize) -> u8 {
        self.branching[level % self.branching.len()]
    }

    fn checked_level_width(&self, depth: usize) -> Option<usize> {
        let mut width = 1usize;
        for level in 0..depth {
            width = width.checked_mul(self.fanout(level) as usize)?;
            if width > MAX_LEVEL_WIDTH {
                return None;
            }
        }
        Some(width)
    }

    pub fn level_width(&self, depth: usize) -> Result<usize> {
        if depth > self.depth_bound {
            return Err(Error::DepthOutOfRange {
                requested: depth,
                bound: self.depth_bound,
            });
        }
        self.checked_level_width(depth).ok_or(Error::LevelTooWide {
            level: depth,
            nodes: MAX_LEVEL_WIDTH,
        })
    }

    /// All depth-`d` nodes in lexicographic order; this order is the atom
    /// and point labeling everywhere below.
    pub fn level_nodes(&self, depth: usize) -> Result<Vec<NodeWord>> {
        self.level_width(depth)?;
        let mut out = vec![NodeWord::root()];
        for level in 0..depth {
            let fanout = self.fanout(level);
            out = out
                .iter()
                .flat_map(|w| (0..fanout).map(move |c| w.child(c)))
                .collect();
        }
        Ok(out)
    }

    pub fn check_node(&self, w: &NodeWord) -> Result<()> {
        for (level, &d) in w.digits().iter().enumerate() {
            if d >= self.fanout(level) {
                return Err(Error::BadBranch(format!(
                    "digit {d} at level {level} exceeds fan-out {}",
                    self.fanout(level)
                )));
            }
        }
        Ok(())
    }

    /// Digit validity for the whole infinite word: one cycle of the
    /// period against the fan-out rule past the prefix settles it.
    pub fn check_branch(&self, b: &BranchDescriptor) -> Result<()> {
        let bound = b.prefix().len() + lcm(b.period().len(), self.branching.len());
        for i in 0..bound {
            let d = b.digit(i);
            if d >= self.fanout(i) {
                return Err(Error::BadBranch(format!(
                    "digit {d} at level {i} exceeds fan-out {}",
                    self.fanout(i)
                )));
            }
        }
        Ok(())
    }

    pub fn subspace_contains(&self, b: &BranchDescriptor) -> bool {
        match &self.subspace {
            Subspace::All => true,
            Subspace::EventuallyZero => b.period().iter().all(|&d| d == 0),
            Subspace::FinitelyManyOnes => b.period().iter().all(|&d| d != 1),
            Subspace::Explicit(list) => list.iter().any(|m| m.same_branch(b)),
        }
    }

    // ---- element algebra on antichains ----

    pub fn zero(&self) -> Antichain {
        Antichain { nodes: Vec::new() }
    }

    pub fn one(&self) -> Antichain {
        Antichain { nodes: vec![NodeWord::root()] }
    }

    pub fn node_element(&self, w: NodeWord) -> Result<Antichain> {
        self.check_node(&w)?;
        Ok(self.reduce([w].into_iter().collect()))
    }

    pub fn node_set(&self, words: Vec<NodeWord>) -> Result<Antichain> {
        for w in &words {
            self.check_node(w)?;
        }
        Ok(self.reduce(words.into_iter().collect()))
    }

    /// Canonical form: drop nodes under other nodes, then repeatedly fold
    /// full sibling families into their parent. Idempotent by
    /// construction; folding can only create shallower candidates, so the
    /// loop terminates.
    fn reduce(&self, mut set: BTreeSet<NodeWord>) -> Antichain {
        loop {
            let dominated: Vec<NodeWord> = set
                .iter()
                .filter(|w| {
                    let mut anc = w.parent();
                    while let Some(a) = anc {
                        if set.contains(&a) {
                            return true;
                        }
                        anc = a.parent();
                    }
                    false
                })
                .cloned()
                .collect();
            for w in dominated {
                set.remove(&w);
            }

            let mut folded = false;
            let parents: BTreeSet<NodeWord> =
                set.iter().filter_map(NodeWord::parent).collect();
            for p in parents {
                let fanout = self.fanout(p.depth());
                if (0..fanout).all(|c| set.contains(&p.child(c))) {
                    for c in 0..fanout {
                        set.remove(&p.child(c));
                    }
                    set.insert(p);
                    folded = true;
                }
            }
            if !folded {
                break;
            }
        }
        Antichain { nodes: set.into_iter().collect() }
    }

    pub fn meet(&self, a: &Antichain, b: &Antichain) -> Antichain {
        let mut out = BTreeSet::new();
        for u in &a.nodes {
            for v in &b.nodes {
                if u.is_prefix_of(v) {
                    out.insert(v.clone());
                } else if v.is_prefix_of(u) {
                    out.insert(u.clone());
                }
            }
        }
        self.reduce(out)
    }

    pub fn join(&self, a: &Antichain, b: &Antichain) -> Antichain {
        let mut out: BTreeSet<NodeWord> = a.nodes.iter().cloned().collect();
        out.extend(b.nodes.iter().cloned());
        self.reduce(out)
    }

    /// Complement of a single node: its path's sibling subtrees.
    fn node_complement(&self, w: &NodeWord) -> Antichain {
        let mut out = BTreeSet::new();
        for level in 0..w.depth() {
            let stem = NodeWord::from_digits(&w.digits()[..level]);
            for c in 0..self.fanout(level) {
                if c != w.digits()[level] {
                    out.insert(stem.child(c));
                }
            }
        }
        self.reduce(out)
    }

    pub fn complement(&self, a: &Antichain) -> Antichain {
        let mut acc = self.one();
        for w in &a.nodes {
            let piece = self.node_complement(w);
            acc = self.meet(&acc, &piece);
        }
        acc
    }

    pub fn leq(&self, a: &Antichain, b: &Antichain) -> bool {
        a.nodes
            .iter()
            .all(|u| b.nodes.iter().any(|v| v.is_prefix_of(u)))
    }

    /// Rewrites an element as the set of depth-`d` nodes below it.
    pub fn level_expansion(&self, a: &Antichain, depth: usize) -> Result<Vec<NodeWord>> {
        if a.max_depth() > depth {
            return Err(Error::DepthOutOfRange {
                requested: a.max_depth(),
                bound: depth,
            });
        }
        self.level_width(depth)?;
        let mut out = Vec::new();
        for w in &a.nodes {
            let mut frontier = vec![w.clone()];
            for level in w.depth()..depth {
                frontier = frontier
                    .iter()
                    .flat_map(|u| (0..self.fanout(level)).map(move |c| u.child(c)))
                    .collect();
            }
            out.extend(frontier);
        }
        out.sort();
        Ok(out)
    }
}

#[cfg(test)]
mod antichain_tests {
    use super::*;

    fn binary() -> TreeModel {
        TreeModel::binary(12, Subspace::All).unwrap()
    }

    fn ac(model: &TreeModel, words: &[&str]) -> Antichain {
        model
            .node_set(words.iter().map(|w| NodeWord::parse(w).unwrap()).collect())
            .unwrap()
    }

    #[test]
    fn reduction_folds_full_sibling_families() {
        let m = binary();
        assert!(ac(&m, &["0", "1"]).is_one());
        assert!(ac(&m, &["00", "01", "1"]).is_one());
        assert_eq!(ac(&m, &["00", "01"]), ac(&m, &["0"]));
    }

    #[test]
    fn reduction_drops_dominated_nodes_and_is_idempotent() {
        let m = binary();
        let a = ac(&m, &["0", "00", "010"]);
        assert_eq!(a, ac(&m, &["0"]));
        let again = m.node_set(a.nodes().to_vec()).unwrap();
        assert_eq!(again, a);
    }

    #[test]
    fn ternary_families_fold_only_when_complete() {
        let m = TreeModel::new(vec![3], 6, Subspace::All).unwrap();
        let partial = ac(&m, &["0", "1"]);
        assert_eq!(partial.nodes().len(), 2);
        assert!(ac(&m, &["0", "1", "2"]).is_one());
    }

    #[test]
    fn complement_of_a_node_is_its_sibling_path() {
        let m = binary();
        let c = m.complement(&ac(&m, &["10"]));
        assert_eq!(c, ac(&m, &["0", "11"]));
        assert_eq!(m.complement(&c), ac(&m, &["10"]));
        assert!(m.complement(&m.one()).is_zero());
        assert!(m.complement(&m.zero()).is_one());
    }

    #[test]
    fn meet_join_and_order_behave_boolean() {
        let m = binary();
        let a = ac(&m, &["0"]);
        let b = ac(&m, &["00", "1"]);
        assert_eq!(m.meet(&a, &b), ac(&m, &["00"]));
        assert!(m.join(&a, &b).is_one());
        assert!(m.leq(&m.meet(&a, &b), &a));
        assert!(m.leq(&a, &m.join(&a, &b)));
        let distribute = m.meet(&a, &m.join(&b, &m.complement(&a)));
        assert_eq!(
            distribute,
            m.join(&m.meet(&a, &b), &m.meet(&a, &m.complement(&a)))
        );
    }

    #[test]
    fn level_expansion_lists_descendants() {
        let m = binary();
        let a = ac(&m, &["0", "11"]);
        let words: Vec<String> = m
            .level_expansion(&a, 2)
            .unwrap()
            .iter()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(words, vec!["00", "01", "11"]);
    }

    #[test]
    fn branch_equality_sees_through_presentation() {
        let a = BranchDescriptor::parse("0", "0").unwrap();
        let b = BranchDescriptor::parse("", "00").unwrap();
        assert!(a.same_branch(&b));
        assert_ne!(a, b);
        let c = BranchDescriptor::parse("1", "0").unwrap();
        assert_eq!(c.first_divergence(&a), Some(0));
        assert_eq!(
            BranchDescriptor::constant(1).first_divergence(&b),
            Some(0)
        );
    }
}

// ---- level and comb partitions ----

/// A partition of the tree algebra named by shape: the depth-`k` level, or
/// the comb of divergence classes along one branch.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TreePartition {
    Level(usize),
    Comb(BranchDescriptor),
}

impl TreeModel {
    /// Block `j` of the comb along `b`: branches that follow `b` for
    /// exactly `j` steps and then leave. One antichain of fanout-1 nodes.
    pub fn comb_block(&self, b: &BranchDescriptor, j: usize) -> Result<Antichain> {
        self.check_branch(b)?;
        let stem = b.node_at(j);
        let taken = b.digit(j);
        let words: Vec<NodeWord> = (0..self.fanout(j))
            .filter(|&c| c != taken)
            .map(|c| stem.child(c))
            .collect();
        Ok(self.node_set(words)?)
    }

    /// The complement of the first `n` comb blocks is the subtree at
    /// `b`'s depth-`n` node; the chain of these complements decreasing
    /// strictly to nothing is how the comb joins to 1 without any finite
    /// stage reaching it.
    pub fn comb_tail(&self, b: &BranchDescriptor, n: usize) -> Result<Antichain> {
        self.check_branch(b)?;
        self.node_element(b.node_at(n))
    }

    /// Coarsens the comb to finitely many blocks: the first `cut` comb
    /// blocks, then everything still following the branch.
    pub fn comb_coarsening(&self, b: &BranchDescriptor, cut: usize) -> Result<Vec<Antichain>> {
        let mut blocks = Vec::with_capacity(cut + 1);
        for j in 0..cut {
            blocks.push(self.comb_block(b, j)?);
        }
        blocks.push(self.comb_tail(b, cut)?);
        Ok(blocks)
    }

    /// Every block of `fine` sits under one block of `coarse`. Intended
    /// for the finite antichain partitions built here.
    pub fn antichain_refines(&self, fine: &[Antichain], coarse: &[Antichain]) -> bool {
        fine.iter()
            .all(|a| coarse.iter().any(|b| self.leq(a, b)))
    }
}

/// Verdict on a subcompleteness probe, with the obstruction spelled out
/// when the answer is no.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubcompletenessVerdict {
    pub subcomplete: bool,
    pub obstruction: Option<CombObstruction>,
}

/// Bounded evidence that a comb sub-family has no join among node
/// antichains. `omitted` lists probed even-index blocks; `upper_bounds`
/// is a strictly decreasing chain of antichains each containing all of
/// them; `forced_nodes` gives, per probed depth m, the node any upper
/// bound of node depth ≤ m must contain, which deep members of the chain
/// exclude. Together: no antichain is a least upper bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombObstruction {
    pub omitted: Vec<Antichain>,
    pub upper_bounds: Vec<Antichain>,
    pub forced_nodes: Vec<NodeWord>,
}

impl TreeModel {
    /// Level partitions always pass: any set of same-depth nodes is
    /// already an antichain. Combs fail under the antichain reading and
    /// pass under full unions; `probe` bounds the evidence depth.
    pub fn is_subcomplete_partition(
        &self,
        p: &TreePartition,
        probe: usize,
    ) -> Result<SubcompletenessVerdict> {
        if probe == 0 || probe > self.depth_bound {
            return Err(Error::DepthOutOfRange {
                requested: probe,
                bound: self.depth_bound,
            });
        }
        match p {
            TreePartition::Level(k) => {
                self.level_width(*k)?;
                Ok(SubcompletenessVerdict { subcomplete: true, obstruction: None })
            }
            TreePartition::Comb(b) => match self.closure {
                ClosureRule::FullUnions => {
                    self.check_branch(b)?;
                    Ok(SubcompletenessVerdict { subcomplete: true, obstruction: None })
                }
                ClosureRule::NodeAntichains => {
                    let obstruction = self.comb_obstruction(b, probe)?;
                    Ok(SubcompletenessVerdict {
                        subcomplete: false,
                        obstruction: Some(obstruction),
                    })
                }
            },
        }
    }

    fn comb_obstruction(&self, b: &BranchDescriptor, probe: usize) -> Result<CombObstruction> {
        let omitted: Vec<Antichain> = (0..probe)
            .map(|k| self.comb_block(b, 2 * k))
            .collect::<Result<_>>()?;
        let mut upper_bounds = Vec::with_capacity(probe);
        let mut odd_union = self.zero();
        for n in 0..probe {
            odd_union = self.join(&odd_union, &self.comb_block(b, 2 * n + 1)?);
            upper_bounds.push(self.complement(&odd_union));
        }
        let forced_nodes: Vec<NodeWord> =
            (1..=probe).map(|m| b.node_at(m)).collect();
        let evidence = CombObstruction { omitted, upper_bounds, forced_nodes };
        if !self.verify_comb_obstruction(b, &evidence) {
            return Err(Error::BadBranch(
                "comb obstruction failed its own audit".into(),
            ));
        }
        Ok(evidence)
    }

    /// Replays every claim inside an obstruction record: the chain
    /// descends strictly, each stage contains every probed omitted
    /// block, blocks past depth m sit under the forced node, and deep
    /// chain stages exclude it.
    pub fn verify_comb_obstruction(
        &self,
        b: &BranchDescriptor,
        ev: &CombObstruction,
    ) -> bool {
        if ev.upper_bounds.is_empty() || ev.omitted.is_empty() {
            return false;
        }
        for pair in ev.upper_bounds.windows(2) {
            if !(self.leq(&pair[1], &pair[0]) && pair[1] != pair[0]) {
                return false;
            }
        }
        for ub in &ev.upper_bounds {
            if !ev.omitted.iter().all(|block| self.leq(block, ub)) {
                return false;
            }
        }
        for (m, forced) in ev.forced_nodes.iter().enumerate() {
            let m = m + 1;
            if b.node_at(m) != *forced {
                return false;
            }
            let forced_elem = match self.node_element(forced.clone()) {
                Ok(e) => e,
                Err(_) => return false,
            };
            for (k, block) in ev.omitted.iter().enumerate() {
                if 2 * k >= m && !self.leq(block, &forced_elem) {
                    return false;
                }
            }
            for (n, ub) in ev.upper_bounds.iter().enumerate() {
                if 2 * n + 1 >= m && self.leq(&forced_elem, ub) {
                    return false;
                }
            }
        }
        true
    }
}

// ---- truncation to finite structures ----

impl TreeModel {
    /// The depth-`d` truncations of subspace members, in node order.
    /// These label the points of the truncated space.
    pub fn representatives(&self, depth: usize) -> Result<Vec<NodeWord>> {
        match &self.subspace {
            Subspace::Explicit(list) => {
                self.level_width(depth)?;
                let mut reps: Vec<NodeWord> =
                    list.iter().map(|b| b.node_at(depth)).collect();
                reps.sort();
                reps.dedup();
                Ok(reps)
            }
            _ => {
                let nodes = self.level_nodes(depth)?;
                Ok(nodes
                    .into_iter()
                    .filter(|w| {
                        self.subspace_contains(&BranchDescriptor::zeros_after(
                            w.digits().to_vec(),
                        ))
                    })
                    .collect())
            }
        }
    }

    /// Cuts the model at depth `d`: the powerset algebra on depth-`d`
    /// nodes with the level filter, and the space of subspace
    /// representatives under the level crevasses. Only levels of at most
    /// 16 nodes materialize; deeper probes use the lazy checks.
    pub fn truncate(
        &self,
        depth: usize,
    ) -> Result<(BooleanPartitionAlgebra, PartitionSpace)> {
        let width = self.level_width(depth)?;
        if width > MAX_FINITE_WIDTH {
            return Err(Error::LevelTooWide { level: depth, nodes: width });
        }
        let nodes = self.level_nodes(depth)?;
        let ground = crate::algebra::GroundAlgebra::new(width)?;
        let mut generators = Vec::with_capacity(depth + 1);
        for k in 0..=depth {
            let blocks = group_by_prefix(&nodes, k);
            generators.push(Partition::from_atom_blocks(ground, &blocks)?);
        }
        let bpa = BooleanPartitionAlgebra::from_generators(ground, generators)?;

        let reps = self.representatives(depth)?;
        if reps.is_empty() {
            return Err(Error::BadBound(
                "subspace has no representatives at this depth".into(),
            ));
        }
        let mut crevasses = Vec::with_capacity(depth + 1);
        for k in 0..=depth {
            crevasses.push(group_by_prefix(&reps, k));
        }
        let space = PartitionSpace::from_point_blocks(reps.len(), &crevasses)?;
        Ok((bpa, space))
    }

    /// The prefix map from depth-`d` points to depth-`e` points, e ≤ d.
    pub fn truncation_projection(&self, from: usize, to: usize) -> Result<Vec<usize>> {
        if to > from {
            return Err(Error::DepthOutOfRange { requested: to, bound: from });
        }
        let fine = self.representatives(from)?;
        let coarse = self.representatives(to)?;
        fine.iter()
            .map(|w| {
                let head = NodeWord::from_digits(&w.digits()[..to]);
                coarse
                    .iter()
                    .position(|v| *v == head)
                    .ok_or_else(|| Error::BadBranch(format!(
                        "truncation of {w} missing at depth {to}"
                    )))
            })
            .collect()
    }
}

fn group_by_prefix(words: &[NodeWord], k: usize) -> Vec<Vec<usize>> {
    let mut blocks: Vec<(NodeWord, Vec<usize>)> = Vec::new();
    for (i, w) in words.iter().enumerate() {
        let head = NodeWord::from_digits(&w.digits()[..k.min(w.depth())]);
        match blocks.iter_mut().find(|(h, _)| *h == head) {
            Some((_, ids)) => ids.push(i),
            None => blocks.push((head, vec![i])),
        }
    }
    blocks.into_iter().map(|(_, ids)| ids).collect()
}

// ---- lazy branch-side probes ----

/// The ultrafilter of a branch, evaluated lazily: an element belongs iff
/// the branch passes through one of its nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchUltrafilter<'a> {
    model: &'a TreeModel,
    branch: BranchDescriptor,
}

impl<'a> BranchUltrafilter<'a> {
    pub fn new(model: &'a TreeModel, branch: BranchDescriptor) -> Result<Self> {
        model.check_branch(&branch)?;
        Ok(BranchUltrafilter { model, branch })
    }

    pub fn branch(&self) -> &BranchDescriptor {
        &self.branch
    }

    /// The block this branch selects from the depth-`k` level partition.
    pub fn selected_node(&self, k: usize) -> NodeWord {
        self.branch.node_at(k)
    }

    pub fn contains(&self, a: &Antichain) -> bool {
        a.nodes()
            .iter()
            .any(|w| self.branch.node_at(w.depth()) == *w)
    }
}

/// Outcome of probing whether a branch outside the subspace is ever
/// reached: per representative, the depth where its ultrafilter separates
/// from the target's. Evidence is bounded by the probe depth, not a
/// proof, and the report carries that caveat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonsurjectivityReport {
    pub target: BranchDescriptor,
    pub probe_depth: usize,
    pub entries: Vec<(BranchDescriptor, usize)>,
}

impl NonsurjectivityReport {
    pub fn max_divergence_depth(&self) -> usize {
        self.entries.iter().map(|(_, d)| *d).max().unwrap_or(0)
    }

    pub fn caveat(&self) -> String {
        format!(
            "bounded evidence at depth {}: every probed representative diverges, no claim past it",
            self.probe_depth
        )
    }
}

/// Analytic completeness call for the whole model, with an unrealized
/// branch as witness when the answer is no.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletenessCall {
    pub complete: bool,
    pub unrealized: Option<BranchDescriptor>,
}

impl TreeModel {
    /// True when every depth-`d` node is entered by some subspace member.
    pub fn density_check(&self, depth: usize) -> Result<bool> {
        let nodes = self.level_nodes(depth)?;
        Ok(match &self.subspace {
            Subspace::Explicit(list) => nodes
                .iter()
                .all(|w| list.iter().any(|b| b.node_at(depth) == *w)),
            _ => nodes.iter().all(|w| {
                self.subspace_contains(&BranchDescriptor::zeros_after(
                    w.digits().to_vec(),
                ))
            }),
        })
    }

    /// For a branch declared outside the subspace, records how fast every
    /// representative's ultrafilter separates from the branch's.
    pub fn nonsurjectivity_probe(
        &self,
        target: &BranchDescriptor,
        depth: usize,
    ) -> Result<NonsurjectivityReport> {
        self.check_branch(target)?;
        if self.subspace_contains(target) {
            return Err(Error::BranchInsideSubspace);
        }
        self.level_width(depth)?;
        let witnesses: Vec<BranchDescriptor> = match &self.subspace {
            Subspace::Explicit(list) => list.clone(),
            _ => self
                .representatives(depth)?
                .into_iter()
                .map(|w| BranchDescriptor::zeros_after(w.digits().to_vec()))
                .collect(),
        };
        let entries = witnesses
            .into_iter()
            .map(|x| {
                let split = x.first_divergence(target).ok_or_else(|| {
                    Error::BadBranch(format!(
                        "{x} equals the probe target yet passed the subspace test"
                    ))
                })?;
                Ok((x, split + 1))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NonsurjectivityReport {
            target: target.clone(),
            probe_depth: depth,
            entries,
        })
    }

    /// Decided by the subspace rule itself: the full branch space is the
    /// inverse limit of the levels, so completeness is exactly "no branch
    /// is missing".
    pub fn completeness(&self) -> CompletenessCall {
        match &self.subspace {
            Subspace::All => CompletenessCall { complete: true, unrealized: None },
            Subspace::EventuallyZero | Subspace::FinitelyManyOnes => {
                let ones = BranchDescriptor::constant(1);
                debug_assert!(!self.subspace_contains(&ones));
                CompletenessCall { complete: false, unrealized: Some(ones) }
            }
            Subspace::Explicit(list) => {
                let diagonal: Vec<u8> = list
                    .iter()
                    .enumerate()
                    .map(|(i, b)| (b.digit(i) + 1) % self.fanout(i))
                    .collect();
                let missing = BranchDescriptor::zeros_after(diagonal);
                debug_assert!(!self.subspace_contains(&missing));
                CompletenessCall { complete: false, unrealized: Some(missing) }
            }
        }
    }

    pub fn is_separating(&self) -> bool {
        match &self.subspace {
            Subspace::Explicit(list) => list.iter().enumerate().all(|(i, a)| {
                list[i + 1..]
                    .iter()
                    .all(|b| a.same_branch(b) || a.first_divergence(b).is_some())
            }),
            _ => true,
        }
    }

    /// Is the canonical map from depth-`d` points onto the truncated
    /// spectrum a bijection? Shallow levels run the real completion
    /// machinery; wide levels check the same bijection lazily: coherent
    /// level selections are exactly prefix chains of representatives,
    /// pairwise distinct, each realized by its own endpoint.
    pub fn truncated_completion_bijective(&self, depth: usize) -> Result<bool> {
        let width = self.level_width(depth)?;
        if width <= MAX_FINITE_WIDTH {
            let (_, space) = self.truncate(depth)?;
            let c = crate::duality::completion(&space)?;
            return Ok(c.report.homeomorphism);
        }
        let reps = self.representatives(depth)?;
        for pair in reps.windows(2) {
            if pair[0] == pair[1] {
                return Ok(false);
            }
        }
        for w in &reps {
            for k in 0..=depth {
                let head = NodeWord::from_digits(&w.digits()[..k]);
                if !reps.iter().any(|r| head.is_prefix_of(r)) {
                    return Ok(false);
                }
            }
        }
        let chains = reps.len();
        Ok(chains == reps.len() && !reps.is_empty())
    }
}

/// The three defining conditions of the level filter, rendered on the
/// depth-`s` truncation where they are finitely checkable: two-block
/// partitions of encoded elements coarsen the level, every element lies
/// in a member, and every finite partition coarsens the level below it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LevelFilterConditions {
    pub two_block_members: bool,
    pub every_element_blocked: bool,
    pub finite_partitions_included: bool,
}

impl LevelFilterConditions {
    pub fn all(&self) -> bool {
        self.two_block_members && self.every_element_blocked && self.finite_partitions_included
    }
}

impl TreeModel {
    /// `sample_depth` is capped so the truncated algebra stays small
    /// enough to sweep every partition.
    pub fn level_filter_conditions(
        &self,
        sample_depth: usize,
    ) -> Result<LevelFilterConditions> {
        let width = self.level_width(sample_depth)?;
        if width > 8 {
            return Err(Error::BadBound(format!(
                "level filter sweep needs width at most 8, got {width}"
            )));
        }
        let (bpa, _) = self.truncate(sample_depth)?;
        let ground = bpa.algebra();
        let level = Partition::singletons(ground);

        let mut two_block_members = true;
        let mut every_element_blocked = true;
        for b in ground.elements() {
            if b.is_bottom() {
                continue;
            }
            if b.is_top() {
                continue;
            }
            let split = Partition::new(ground, vec![b, b.complement()])?;
            if !level.refines(&split)? {
                two_block_members = false;
            }
            if !split.blocks().contains(&b) {
                every_element_blocked = false;
            }
        }

        let finite_partitions_included = crate::lattice::all_partitions(ground)
            .iter()
            .map(|q| level.refines(q))
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .all(|ok| ok);

        Ok(LevelFilterConditions {
            two_block_members,
            every_element_blocked,
            finite_partitions_included,
        })
    }
}
