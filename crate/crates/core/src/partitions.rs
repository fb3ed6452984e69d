//! Finite-set partitions, restriction, incidence graphs, and orthogonality.
//!
//! Partitions are kept in a canonical form (blocks sorted by least element,
//! elements sorted within a block) so that structural equality coincides with
//! mathematical equality. Orthogonality is decided on the incidence graph of
//! two partitions: one vertex per block, one edge per shared element. A pair
//! of parallel edges counts as a cycle of length two.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap on the ground-set size for full partition enumeration.
/// Bell(10) = 115975.
pub const DEFAULT_ENUM_BOUND: usize = 10;

/// An element of a partition ground set. Also used as a vertex identifier by
/// the hypergraph layer, so partitions over vertex borders and over
/// `{0, 1..n}` share one type.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElemId(String);

impl ElemId {
    pub fn new(id: impl Into<String>) -> Self {
        ElemId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ElemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for ElemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for ElemId {
    fn from(s: &str) -> Self {
        ElemId(s.to_string())
    }
}

impl From<String> for ElemId {
    fn from(s: String) -> Self {
        ElemId(s)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("blocks are not disjoint: element {0} occurs twice")]
    Overlap(ElemId),
    #[error("empty block")]
    EmptyBlock,
    #[error("restriction target is empty")]
    EmptyRestriction,
    #[error("element {0} is not in the ground set")]
    NotInGround(ElemId),
    #[error("ground sets differ")]
    GroundMismatch,
    #[error("ground of size {0} exceeds the enumeration bound {1}")]
    EnumerationBound(usize, usize),
    #[error("renaming is not a bijection on the ground set")]
    BadRenaming,
}

/// A partition of a finite set, in canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    ground: Vec<ElemId>,
    blocks: Vec<Vec<ElemId>>,
}

impl Partition {
    /// Builds a partition from its blocks; the ground set is their union.
    pub fn new<I, B, E>(blocks: I) -> Result<Self, PartitionError>
    where
        I: IntoIterator<Item = B>,
        B: IntoIterator<Item = E>,
        E: Into<ElemId>,
    {
        let mut seen = BTreeSet::new();
        let mut canon: Vec<Vec<ElemId>> = Vec::new();
        for block in blocks {
            let mut b: Vec<ElemId> = block.into_iter().map(Into::into).collect();
            if b.is_empty() {
                return Err(PartitionError::EmptyBlock);
            }
            b.sort();
            b.dedup();
            for e in &b {
                if !seen.insert(e.clone()) {
                    return Err(PartitionError::Overlap(e.clone()));
                }
            }
            canon.push(b);
        }
        canon.sort();
        let ground: Vec<ElemId> = seen.into_iter().collect();
        Ok(Partition { ground, blocks: canon })
    }

    /// The partition of the empty set (no blocks).
    pub fn empty() -> Self {
        Partition { ground: Vec::new(), blocks: Vec::new() }
    }

    /// The one-block partition of a non-empty set, or the empty partition.
    pub fn single_block<I: IntoIterator<Item = ElemId>>(elems: I) -> Self {
        let mut b: Vec<ElemId> = elems.into_iter().collect();
        b.sort();
        b.dedup();
        if b.is_empty() {
            Partition::empty()
        } else {
            Partition { ground: b.clone(), blocks: vec![b] }
        }
    }

    /// The all-singletons partition.
    pub fn discrete<I: IntoIterator<Item = ElemId>>(elems: I) -> Self {
        let mut g: Vec<ElemId> = elems.into_iter().collect();
        g.sort();
        g.dedup();
        let blocks = g.iter().map(|e| vec![e.clone()]).collect();
        Partition { ground: g, blocks }
    }

    pub fn ground(&self) -> &[ElemId] {
        &self.ground
    }

    pub fn blocks(&self) -> &[Vec<ElemId>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn contains(&self, e: &ElemId) -> bool {
        self.ground.binary_search(e).is_ok()
    }

    /// Index of the block containing `e`, if any.
    pub fn block_of(&self, e: &ElemId) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(e).is_ok())
    }

    pub fn same_block(&self, x: &ElemId, y: &ElemId) -> bool {
        match (self.block_of(x), self.block_of(y)) {
            (Some(i), Some(j)) => i == j,
            _ => false,
        }
    }

    /// Restriction on a non-empty subset of the ground set: two elements share
    /// a block in the result iff they share a block here. Blocks that do not
    /// meet the subset vanish.
    pub fn restrict(&self, subset: &BTreeSet<ElemId>) -> Result<Partition, PartitionError> {
        if subset.is_empty() {
            return Err(PartitionError::EmptyRestriction);
        }
        for e in subset {
            if !self.contains(e) {
                return Err(PartitionError::NotInGround(e.clone()));
            }
        }
        let blocks = self.blocks.iter().filter_map(|b| {
            let nb: Vec<ElemId> = b.iter().filter(|e| subset.contains(*e)).cloned().collect();
            if nb.is_empty() {
                None
            } else {
                Some(nb)
            }
        });
        Partition::new(blocks)
    }

    /// Applies a bijective renaming to every element.
    pub fn rename(&self, map: &BTreeMap<ElemId, ElemId>) -> Result<Partition, PartitionError> {
        let mut targets = BTreeSet::new();
        for e in &self.ground {
            let t = map.get(e).ok_or_else(|| PartitionError::NotInGround(e.clone()))?;
            if !targets.insert(t.clone()) {
                return Err(PartitionError::BadRenaming);
            }
        }
        Partition::new(
            self.blocks
                .iter()
                .map(|b| b.iter().map(|e| map[e].clone()).collect::<Vec<_>>()),
        )
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let elems: Vec<&str> = b.iter().map(|e| e.as_str()).collect();
                format!("({})", elems.join(","))
            })
            .collect();
        write!(f, "[{}]", blocks.join(","))
    }
}

/// The incidence graph of two partitions over the same ground set: one vertex
/// per block of each side, one edge per shared element. Parallel edges are
/// cycles.
#[derive(Debug, Clone)]
pub struct IncidenceGraph {
    left_blocks: usize,
    right_blocks: usize,
    /// One `(left block, right block)` pair per ground element.
    edges: Vec<(usize, usize)>,
}

impl IncidenceGraph {
    pub fn new(p: &Partition, q: &Partition) -> Result<Self, PartitionError> {
        if p.ground != q.ground {
            return Err(PartitionError::GroundMismatch);
        }
        let edges = p
            .ground
            .iter()
            .map(|e| {
                let l = p.block_of(e).expect("ground element has a block");
                let r = q.block_of(e).expect("ground element has a block");
                (l, r)
            })
            .collect();
        Ok(IncidenceGraph {
            left_blocks: p.block_count(),
            right_blocks: q.block_count(),
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.left_blocks + self.right_blocks
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_acyclic(&self) -> bool {
        let mut uf = UnionFind::new(self.vertex_count());
        for &(l, r) in &self.edges {
            if !uf.union(l, self.left_blocks + r) {
                return false;
            }
        }
        true
    }

    pub fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.vertex_count());
        for &(l, r) in &self.edges {
            uf.union(l, self.left_blocks + r);
        }
        uf.component_count() <= 1
    }

    pub fn is_tree(&self) -> bool {
        let mut uf = UnionFind::new(self.vertex_count());
        for &(l, r) in &self.edges {
            if !uf.union(l, self.left_blocks + r) {
                return false;
            }
        }
        uf.component_count() <= 1
    }
}

/// `G(p, q)` is acyclic.
pub fn weakly_orthogonal(p: &Partition, q: &Partition) -> Result<bool, PartitionError> {
    Ok(IncidenceGraph::new(p, q)?.is_acyclic())
}

/// `G(p, q)` is connected and acyclic.
pub fn orthogonal(p: &Partition, q: &Partition) -> Result<bool, PartitionError> {
    Ok(IncidenceGraph::new(p, q)?.is_tree())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrthMode {
    Weak,
    Strong,
}

/// A canonical set of partitions over a shared ground set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PartitionSet {
    ground: Vec<ElemId>,
    members: Vec<Partition>,
}

impl PartitionSet {
    /// Builds a set from members sharing one ground set. The ground of an
    /// empty set must be given explicitly via [`PartitionSet::empty`].
    pub fn new<I: IntoIterator<Item = Partition>>(members: I) -> Result<Self, PartitionError> {
        let mut v: Vec<Partition> = members.into_iter().collect();
        v.sort();
        v.dedup();
        let ground = match v.first() {
            Some(p) => p.ground.clone(),
            None => Vec::new(),
        };
        for p in &v {
            if p.ground != ground {
                return Err(PartitionError::GroundMismatch);
            }
        }
        Ok(PartitionSet { ground, members: v })
    }

    pub fn empty<I: IntoIterator<Item = ElemId>>(ground: I) -> Self {
        let mut g: Vec<ElemId> = ground.into_iter().collect();
        g.sort();
        g.dedup();
        PartitionSet { ground: g, members: Vec::new() }
    }

    pub fn ground(&self) -> &[ElemId] {
        &self.ground
    }

    pub fn members(&self) -> &[Partition] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, p: &Partition) -> bool {
        self.members.binary_search(p).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Partition> {
        self.members.iter()
    }

    /// Member-wise restriction; restrictions that coincide are merged.
    pub fn restrict(&self, subset: &BTreeSet<ElemId>) -> Result<PartitionSet, PartitionError> {
        PartitionSet::new(
            self.members
                .iter()
                .map(|p| p.restrict(subset))
                .collect::<Result<Vec<_>, _>>()?,
        )
    }

    pub fn rename(&self, map: &BTreeMap<ElemId, ElemId>) -> Result<PartitionSet, PartitionError> {
        PartitionSet::new(
            self.members
                .iter()
                .map(|p| p.rename(map))
                .collect::<Result<Vec<_>, _>>()?,
        )
    }

    pub fn union(&self, other: &PartitionSet) -> Result<PartitionSet, PartitionError> {
        if self.ground != other.ground && !self.members.is_empty() && !other.members.is_empty() {
            return Err(PartitionError::GroundMismatch);
        }
        PartitionSet::new(self.members.iter().chain(other.members.iter()).cloned())
    }

    pub fn intersection(&self, other: &PartitionSet) -> Result<PartitionSet, PartitionError> {
        PartitionSet::new(
            self.members
                .iter()
                .filter(|p| other.contains(p))
                .cloned(),
        )
    }
}

impl fmt::Debug for PartitionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members.iter()).finish()
    }
}

/// Pairwise (weak) orthogonality of two sets; vacuously true when either side
/// is empty.
pub fn sets_orthogonal(
    p: &PartitionSet,
    q: &PartitionSet,
    mode: OrthMode,
) -> Result<bool, PartitionError> {
    if !p.is_empty() && !q.is_empty() && p.ground != q.ground {
        return Err(PartitionError::GroundMismatch);
    }
    for a in p.iter() {
        for b in q.iter() {
            let ok = match mode {
                OrthMode::Weak => weakly_orthogonal(a, b)?,
                OrthMode::Strong => orthogonal(a, b)?,
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Streams every partition of `ground` in restricted-growth-string order.
pub fn enumerate_partitions(ground: &[ElemId]) -> Result<PartitionIter, PartitionError> {
    enumerate_partitions_bounded(ground, DEFAULT_ENUM_BOUND)
}

pub fn enumerate_partitions_bounded(
    ground: &[ElemId],
    bound: usize,
) -> Result<PartitionIter, PartitionError> {
    let mut g = ground.to_vec();
    let before = g.len();
    g.sort();
    g.dedup();
    debug_assert_eq!(before, g.len(), "duplicate elements in ground set");
    if g.len() > bound {
        return Err(PartitionError::EnumerationBound(g.len(), bound));
    }
    Ok(PartitionIter { ground: g, rgs: None, done: false })
}

/// Iterator over all partitions of a fixed ground set, in the lexicographic
/// order of their restricted growth strings.
pub struct PartitionIter {
    ground: Vec<ElemId>,
    rgs: Option<Vec<usize>>,
    done: bool,
}

impl PartitionIter {
    fn emit(&self, rgs: &[usize]) -> Partition {
        let nblocks = rgs.iter().copied().max().map_or(0, |m| m + 1);
        let mut blocks: Vec<Vec<ElemId>> = vec![Vec::new(); nblocks];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(self.ground[i].clone());
        }
        Partition::new(blocks).expect("growth string yields disjoint blocks")
    }
}

impl Iterator for PartitionIter {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let n = self.ground.len();
        match &mut self.rgs {
            None => {
                self.rgs = Some(vec![0; n]);
                if n == 0 {
                    self.done = true;
                    return Some(Partition::empty());
                }
                Some(self.emit(self.rgs.as_ref().unwrap()))
            }
            Some(rgs) => {
                // Advance to the next restricted growth string: a[i] may rise
                // to max(a[0..i]) + 1.
                let mut i = n;
                loop {
                    if i == 0 {
                        self.done = true;
                        return None;
                    }
                    i -= 1;
                    if i == 0 {
                        // a[0] is always 0; cannot advance.
                        continue;
                    }
                    let cap = rgs[..i].iter().copied().max().unwrap() + 1;
                    if rgs[i] < cap {
                        rgs[i] += 1;
                        for slot in rgs[i + 1..].iter_mut() {
                            *slot = 0;
                        }
                        break;
                    }
                }
                let rgs = self.rgs.as_ref().unwrap();
                Some(self.emit(rgs))
            }
        }
    }
}

/// `{ q | p ⊥ q for all p ∈ P }`, by brute force over all partitions of the
/// ground set.
pub fn orthogonal_set(p: &PartitionSet) -> Result<PartitionSet, PartitionError> {
    orthogonal_set_bounded(p, DEFAULT_ENUM_BOUND)
}

pub fn orthogonal_set_bounded(
    p: &PartitionSet,
    bound: usize,
) -> Result<PartitionSet, PartitionError> {
    let mut members = Vec::new();
    for q in enumerate_partitions_bounded(p.ground(), bound)? {
        let mut ok = true;
        for m in p.iter() {
            if !orthogonal(m, &q)? {
                ok = false;
                break;
            }
        }
        if ok {
            members.push(q);
        }
    }
    if members.is_empty() {
        Ok(PartitionSet::empty(p.ground().iter().cloned()))
    } else {
        PartitionSet::new(members)
    }
}

/// `P ⫫ Q`: strong orthogonality of the pair and of their orthogonal sets.
pub fn biorthogonal_pair(p: &PartitionSet, q: &PartitionSet) -> Result<bool, PartitionError> {
    biorthogonal_pair_bounded(p, q, DEFAULT_ENUM_BOUND)
}

pub fn biorthogonal_pair_bounded(
    p: &PartitionSet,
    q: &PartitionSet,
    bound: usize,
) -> Result<bool, PartitionError> {
    if !sets_orthogonal(p, q, OrthMode::Strong)? {
        return Ok(false);
    }
    let po = orthogonal_set_bounded(p, bound)?;
    let qo = orthogonal_set_bounded(q, bound)?;
    sets_orthogonal(&po, &qo, OrthMode::Strong)
}

/// Disjoint-set forest with path halving. `union` returns false when both
/// elements were already in one set.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    count: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), count: n }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let rx = self.find(x);
        let ry = self.find(y);
        if rx == ry {
            return false;
        }
        self.parent[rx] = ry;
        self.count -= 1;
        true
    }

    pub fn connected(&mut self, x: usize, y: usize) -> bool {
        self.find(x) == self.find(y)
    }

    pub fn component_count(&self) -> usize {
        self.count
    }
}
