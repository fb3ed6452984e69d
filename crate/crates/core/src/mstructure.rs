//! Multiplicative structures: linear hypergraphs whose links carry
//! partition-set behaviors.
//!
//! A switching picks one behavior partition per link; its test replaces each
//! link by one undirected hyperedge per block, instantiated positionally
//! (formal port `i_k` to the k-th input vertex, `o_k` to the k-th output).
//! The behavior of a structure is the set of border partitions induced by the
//! connected components of its tests.

use std::cell::Cell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::hypergraph::{GraphError, Hypergraph, UndirectedHypergraph, VertexId};
use crate::partitions::{ElemId, Partition, PartitionError, PartitionSet};

/// Default cap on the number of switchings enumerated per structure.
pub const DEFAULT_SWITCH_BOUND: u128 = 1 << 20;

thread_local! {
    static SWITCH_ENUMS: Cell<u64> = const { Cell::new(0) };
}

/// How many switching enumerations this thread has started. Used by tests to
/// confirm that behavior-level checks never enumerate a composite's tests.
pub fn switching_enumeration_count() -> u64 {
    SWITCH_ENUMS.with(|c| c.get())
}

#[derive(Debug, Error)]
pub enum StructureError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("unknown link type {0}")]
    UnknownLinkType(String),
    #[error("link type {0} already defined")]
    DuplicateLinkType(String),
    #[error("edge of type {name} expects {expect_in} inputs and {expect_out} outputs, got {got_in}/{got_out}")]
    ArityMismatch {
        name: String,
        expect_in: usize,
        expect_out: usize,
        got_in: usize,
        got_out: usize,
    },
    #[error("link type {0}: behavior ground does not match the formal border")]
    BadBehaviorGround(String),
    #[error("link type {0}: behavior is empty")]
    EmptyBehavior(String),
    #[error("n-ary link family needs arity of at least one")]
    ZeroArity,
    #[error("switching space of size {space} exceeds the bound {bound}")]
    SwitchBound { space: u128, bound: u128 },
    #[error("structure uses non-MLL link type {0}")]
    NonMllSignature(String),
    #[error("switching does not cover edge {0}")]
    UncoveredEdge(usize),
    #[error("link type {0} is defined differently on the two sides")]
    SignatureClash(String),
}

/// Formal input ports `i1..in` followed by output ports `o1..om`.
pub fn formal_ports(n_in: usize, n_out: usize) -> Vec<ElemId> {
    let mut v = Vec::with_capacity(n_in + n_out);
    for k in 1..=n_in {
        v.push(ElemId::new(format!("i{k}")));
    }
    for k in 1..=n_out {
        v.push(ElemId::new(format!("o{k}")));
    }
    v
}

/// A link type: arities plus a non-empty behavior over the formal border.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkType {
    pub name: String,
    pub n_in: usize,
    pub n_out: usize,
    behavior: PartitionSet,
}

impl LinkType {
    pub fn new(
        name: impl Into<String>,
        n_in: usize,
        n_out: usize,
        behavior: PartitionSet,
    ) -> Result<Self, StructureError> {
        let name = name.into();
        if behavior.is_empty() {
            return Err(StructureError::EmptyBehavior(name));
        }
        let ports: BTreeSet<ElemId> = formal_ports(n_in, n_out).into_iter().collect();
        for p in behavior.iter() {
            let ground: BTreeSet<ElemId> = p.ground().iter().cloned().collect();
            if ground != ports {
                return Err(StructureError::BadBehaviorGround(name));
            }
        }
        Ok(LinkType { name, n_in, n_out, behavior })
    }

    pub fn behavior(&self) -> &PartitionSet {
        &self.behavior
    }

    pub fn ax() -> LinkType {
        let p = Partition::new([["o1", "o2"]]).unwrap();
        LinkType::new("ax", 0, 2, PartitionSet::new([p]).unwrap()).unwrap()
    }

    pub fn tensor() -> LinkType {
        let p = Partition::new([["i1", "i2", "o1"]]).unwrap();
        LinkType::new("tensor", 2, 1, PartitionSet::new([p]).unwrap()).unwrap()
    }

    pub fn par() -> LinkType {
        let l = Partition::new([vec!["i1", "o1"], vec!["i2"]]).unwrap();
        let r = Partition::new([vec!["i1"], vec!["i2", "o1"]]).unwrap();
        LinkType::new("par", 2, 1, PartitionSet::new([l, r]).unwrap()).unwrap()
    }

    /// Two inputs, no outputs, one block: the dead-end pairing of its inputs.
    pub fn cut() -> LinkType {
        let p = Partition::new([["i1", "i2"]]).unwrap();
        LinkType::new("cut", 2, 0, PartitionSet::new([p]).unwrap()).unwrap()
    }

    pub fn tensor_n(n: usize) -> Result<LinkType, StructureError> {
        if n == 0 {
            return Err(StructureError::ZeroArity);
        }
        let mut block: Vec<String> = (1..=n).map(|k| format!("i{k}")).collect();
        block.push("o1".to_string());
        let p = Partition::new([block]).unwrap();
        LinkType::new(format!("tensor_{n}"), n, 1, PartitionSet::new([p]).unwrap())
    }

    pub fn par_n(n: usize) -> Result<LinkType, StructureError> {
        if n == 0 {
            return Err(StructureError::ZeroArity);
        }
        let mut members = Vec::new();
        for k in 1..=n {
            let mut blocks: Vec<Vec<String>> = Vec::new();
            for j in 1..=n {
                if j == k {
                    blocks.push(vec![format!("i{j}"), "o1".to_string()]);
                } else {
                    blocks.push(vec![format!("i{j}")]);
                }
            }
            members.push(Partition::new(blocks).unwrap());
        }
        LinkType::new(format!("par_{n}"), n, 1, PartitionSet::new(members).unwrap())
    }

    /// `n` inputs, no output, all inputs in one block.
    pub fn tensor_bullet(n: usize) -> Result<LinkType, StructureError> {
        if n == 0 {
            return Err(StructureError::ZeroArity);
        }
        let block: Vec<String> = (1..=n).map(|k| format!("i{k}")).collect();
        let p = Partition::new([block]).unwrap();
        LinkType::new(format!("tensor_bullet_{n}"), n, 0, PartitionSet::new([p]).unwrap())
    }

    /// `n` inputs, no output, all singletons.
    pub fn par_bullet(n: usize) -> Result<LinkType, StructureError> {
        if n == 0 {
            return Err(StructureError::ZeroArity);
        }
        let blocks: Vec<Vec<String>> = (1..=n).map(|k| vec![format!("i{k}")]).collect();
        let p = Partition::new(blocks).unwrap();
        LinkType::new(format!("par_bullet_{n}"), n, 0, PartitionSet::new([p]).unwrap())
    }
}

/// Resolves a builtin link-type name: `ax`, `cut`, `tensor`, `par`, or one of
/// the arity families `tensor_N`, `par_N`, `tensor_bullet_N`, `par_bullet_N`.
pub fn builtin_link(name: &str) -> Option<LinkType> {
    match name {
        "ax" => return Some(LinkType::ax()),
        "cut" => return Some(LinkType::cut()),
        "tensor" => return Some(LinkType::tensor()),
        "par" => return Some(LinkType::par()),
        _ => {}
    }
    let family = |prefix: &str, f: fn(usize) -> Result<LinkType, StructureError>| {
        name.strip_prefix(prefix)
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&n| n >= 1)
            .and_then(|n| f(n).ok())
    };
    family("tensor_bullet_", LinkType::tensor_bullet)
        .or_else(|| family("par_bullet_", LinkType::par_bullet))
        .or_else(|| family("tensor_", LinkType::tensor_n))
        .or_else(|| family("par_", LinkType::par_n))
}

/// A named collection of link types.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    types: BTreeMap<String, LinkType>,
}

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    /// The core MLL signature: ax, cut, tensor, par.
    pub fn mll() -> Self {
        let mut s = Signature::new();
        for t in [LinkType::ax(), LinkType::cut(), LinkType::tensor(), LinkType::par()] {
            s.types.insert(t.name.clone(), t);
        }
        s
    }

    /// The core signature extended with the n-ary families at the requested
    /// arities.
    pub fn builtin<I: IntoIterator<Item = usize>>(arities: I) -> Result<Self, StructureError> {
        let mut s = Signature::mll();
        for n in arities {
            for t in [
                LinkType::tensor_n(n)?,
                LinkType::par_n(n)?,
                LinkType::tensor_bullet(n)?,
                LinkType::par_bullet(n)?,
            ] {
                s.types.insert(t.name.clone(), t);
            }
        }
        Ok(s)
    }

    pub fn insert(&mut self, t: LinkType) -> Result<(), StructureError> {
        if self.types.contains_key(&t.name) {
            return Err(StructureError::DuplicateLinkType(t.name));
        }
        self.types.insert(t.name.clone(), t);
        Ok(())
    }

    /// Inserts or replaces.
    pub fn register(&mut self, t: LinkType) {
        self.types.insert(t.name.clone(), t);
    }

    pub fn get(&self, name: &str) -> Option<&LinkType> {
        self.types.get(name)
    }

    /// Declared types plus on-demand builtins.
    pub fn resolve(&self, name: &str) -> Option<LinkType> {
        self.types.get(name).cloned().or_else(|| builtin_link(name))
    }

    pub fn types(&self) -> impl Iterator<Item = &LinkType> {
        self.types.values()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.types.keys().map(String::as_str)
    }
}

/// A switching: one behavior choice per edge, stored as indices into each
/// edge's canonical behavior order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Switching {
    choices: Vec<usize>,
}

impl Switching {
    pub fn choices(&self) -> &[usize] {
        &self.choices
    }
}

/// A behavior-labeled linear hypergraph. The signature is materialized at
/// construction so the value is self-contained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MStructure {
    graph: Hypergraph,
    signature: Signature,
}

impl MStructure {
    pub fn new(graph: Hypergraph, signature: &Signature) -> Result<Self, StructureError> {
        if !graph.is_linear() {
            let bad = graph
                .first_linearity_violation()
                .unwrap_or_else(|| VertexId::new("?"));
            return Err(GraphError::NonLinearInput(bad).into());
        }
        let mut used = Signature::new();
        for e in graph.edges() {
            let t = signature
                .resolve(&e.payload)
                .ok_or_else(|| StructureError::UnknownLinkType(e.payload.clone()))?;
            if t.n_in != e.inputs.len() || t.n_out != e.outputs.len() {
                return Err(StructureError::ArityMismatch {
                    name: e.payload.clone(),
                    expect_in: t.n_in,
                    expect_out: t.n_out,
                    got_in: e.inputs.len(),
                    got_out: e.outputs.len(),
                });
            }
            used.register(t);
        }
        Ok(MStructure { graph, signature: used })
    }

    pub fn builder() -> StructureBuilder {
        StructureBuilder::new()
    }

    /// Glues `other` onto `self` over an interface of vertex pairs, merging
    /// signatures. Returns the composite and the renaming applied to
    /// `other`'s vertices.
    pub fn compose(
        &self,
        other: &MStructure,
        interface: &[(VertexId, VertexId)],
    ) -> Result<(MStructure, BTreeMap<VertexId, VertexId>), StructureError> {
        let mut sig = self.signature.clone();
        for t in other.signature.types() {
            match sig.get(&t.name) {
                None => sig.register(t.clone()),
                Some(existing) if existing == t => {}
                Some(_) => return Err(StructureError::SignatureClash(t.name.clone())),
            }
        }
        let glued = self.graph.compose(&other.graph, interface)?;
        Ok((MStructure::new(glued.graph, &sig)?, glued.right_map))
    }

    pub fn graph(&self) -> &Hypergraph {
        &self.graph
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn link_type(&self, edge: usize) -> &LinkType {
        self.signature
            .get(&self.graph.edges()[edge].payload)
            .expect("validated at construction")
    }

    pub fn inputs(&self) -> BTreeSet<VertexId> {
        self.graph.inputs()
    }

    pub fn outputs(&self) -> BTreeSet<VertexId> {
        self.graph.outputs()
    }

    pub fn border(&self) -> BTreeSet<VertexId> {
        self.graph.border()
    }

    /// Number of switchings: the product of the behavior sizes.
    pub fn switch_space(&self) -> u128 {
        self.graph
            .edges()
            .iter()
            .enumerate()
            .map(|(i, _)| self.link_type(i).behavior.len() as u128)
            .product()
    }

    pub fn switchings(&self) -> Result<SwitchingIter<'_>, StructureError> {
        self.switchings_bounded(DEFAULT_SWITCH_BOUND)
    }

    pub fn switchings_bounded(&self, bound: u128) -> Result<SwitchingIter<'_>, StructureError> {
        let space = self.switch_space();
        if space > bound {
            return Err(StructureError::SwitchBound { space, bound });
        }
        SWITCH_ENUMS.with(|c| c.set(c.get() + 1));
        let radices = self
            .graph
            .edges()
            .iter()
            .enumerate()
            .map(|(i, _)| self.link_type(i).behavior.len())
            .collect();
        Ok(SwitchingIter { radices, current: None, done: false, _s: std::marker::PhantomData })
    }

    /// Instantiates a formal behavior partition onto an edge's actual border.
    fn instantiate(&self, edge: usize, formal: &Partition) -> Partition {
        let e = &self.graph.edges()[edge];
        let map: BTreeMap<ElemId, ElemId> = formal_ports(e.inputs.len(), e.outputs.len())
            .into_iter()
            .zip(e.border().cloned())
            .collect();
        formal.rename(&map).expect("ports cover the formal ground")
    }

    /// The chosen partition of each edge, instantiated to actual vertices.
    pub fn assignments(&self, sw: &Switching) -> Result<Vec<Partition>, StructureError> {
        if sw.choices.len() != self.graph.edges().len() {
            return Err(StructureError::UncoveredEdge(sw.choices.len()));
        }
        Ok(sw
            .choices
            .iter()
            .enumerate()
            .map(|(i, &c)| self.instantiate(i, &self.link_type(i).behavior.members()[c]))
            .collect())
    }

    /// The test of a switching: one undirected hyperedge per block of each
    /// chosen partition.
    pub fn test(&self, sw: &Switching) -> Result<UndirectedHypergraph, StructureError> {
        let parts = self.assignments(sw)?;
        let mut uedges: Vec<BTreeSet<VertexId>> = Vec::new();
        for p in &parts {
            for b in p.blocks() {
                uedges.push(b.iter().cloned().collect());
            }
        }
        Ok(UndirectedHypergraph::new(
            self.graph.vertex_ids().cloned(),
            uedges,
        ))
    }

    /// The border partition induced by the connected components of the test.
    pub fn test_behavior(&self, sw: &Switching) -> Result<Partition, StructureError> {
        let border = self.border();
        if border.is_empty() {
            return Ok(Partition::empty());
        }
        let components = self.test(sw)?.connected_components();
        Ok(components.restrict(&border)?)
    }

    pub fn behavior(&self) -> Result<PartitionSet, StructureError> {
        self.behavior_bounded(DEFAULT_SWITCH_BOUND)
    }

    pub fn behavior_bounded(&self, bound: u128) -> Result<PartitionSet, StructureError> {
        let mut members = BTreeSet::new();
        for sw in self.switchings_bounded(bound)? {
            members.insert(self.test_behavior(&sw)?);
        }
        Ok(PartitionSet::new(members)?)
    }

    /// Every test is a connected, acyclic undirected hypergraph.
    pub fn is_correct(&self) -> Result<bool, StructureError> {
        Ok(self.first_failing_test()?.is_none())
    }

    /// The lexicographically first switching whose test is not a tree.
    pub fn first_failing_test(&self) -> Result<Option<Switching>, StructureError> {
        for sw in self.switchings()? {
            if !self.test(&sw)?.is_tree() {
                return Ok(Some(sw));
            }
        }
        Ok(None)
    }

    /// Correct, no inputs, and at least one output.
    pub fn is_net(&self) -> Result<bool, StructureError> {
        Ok(self.inputs().is_empty() && !self.outputs().is_empty() && self.is_correct()?)
    }

    /// Every test is a forest and, in every test, every vertex is connected
    /// to a border vertex.
    pub fn is_component(&self) -> Result<bool, StructureError> {
        Ok(self.component_failure()?.is_none())
    }

    /// First witness against componenthood, if any.
    pub fn component_failure(&self) -> Result<Option<ComponentFailure>, StructureError> {
        let border = self.border();
        for sw in self.switchings()? {
            let test = self.test(&sw)?;
            if !test.is_forest() {
                return Ok(Some(ComponentFailure { switching: sw, kind: FailureKind::Cyclic }));
            }
            for block in test.connected_components().blocks() {
                if !block.iter().any(|v| border.contains(v)) {
                    return Ok(Some(ComponentFailure {
                        switching: sw,
                        kind: FailureKind::Isolated { vertices: block.clone() },
                    }));
                }
            }
        }
        Ok(None)
    }

    /// A component in which each input admits a test connecting it to an
    /// output.
    pub fn is_transitory(&self) -> Result<bool, StructureError> {
        if !self.is_component()? {
            return Ok(false);
        }
        let inputs = self.inputs();
        if inputs.is_empty() {
            return Ok(true);
        }
        let outputs = self.outputs();
        if outputs.is_empty() {
            return Ok(false);
        }
        let mut pending: BTreeSet<&VertexId> = inputs.iter().collect();
        // An isolated border vertex is its own output.
        pending.retain(|v| !outputs.contains(*v));
        for sw in self.switchings()? {
            if pending.is_empty() {
                break;
            }
            let components = self.test(&sw)?.connected_components();
            pending.retain(|i| {
                let block = &components.blocks()[components.block_of(i).expect("vertex in test")];
                !block.iter().any(|v| outputs.contains(v))
            });
        }
        Ok(pending.is_empty())
    }

    /// Independent Danos-Regnier oracle over the classic `{ax, tensor, par}`
    /// switch-one-premise formulation: for every choice of one premise per
    /// par link, the graph with edges `{a, a'}` per ax, `{A, A(x)B}, {B, A(x)B}`
    /// per tensor, and `{chosen, A(+)B}` per par must be a tree; the structure
    /// must have no inputs. The empty structure represents no derivation.
    pub fn dr_check_mll(&self) -> Result<bool, StructureError> {
        for e in self.graph.edges() {
            match e.payload.as_str() {
                "ax" | "tensor" | "par" => {}
                other => return Err(StructureError::NonMllSignature(other.to_string())),
            }
        }
        if self.graph.is_empty() {
            return Ok(false);
        }
        if !self.graph.inputs().is_empty() {
            return Ok(false);
        }
        let idx: BTreeMap<&VertexId, usize> =
            self.graph.vertex_ids().enumerate().map(|(i, v)| (v, i)).collect();
        let pars: Vec<usize> = self
            .graph
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.payload == "par")
            .map(|(i, _)| i)
            .collect();
        if pars.len() > 30 {
            return Err(StructureError::SwitchBound {
                space: 1u128 << pars.len(),
                bound: DEFAULT_SWITCH_BOUND,
            });
        }
        for mask in 0u64..(1u64 << pars.len()) {
            let mut uf = crate::partitions::UnionFind::new(idx.len());
            let mut acyclic = true;
            'edges: for (i, e) in self.graph.edges().iter().enumerate() {
                let pairs: Vec<(usize, usize)> = match e.payload.as_str() {
                    "ax" => vec![(idx[&e.outputs[0]], idx[&e.outputs[1]])],
                    "tensor" => vec![
                        (idx[&e.inputs[0]], idx[&e.outputs[0]]),
                        (idx[&e.inputs[1]], idx[&e.outputs[0]]),
                    ],
                    "par" => {
                        let which = pars.iter().position(|&p| p == i).unwrap();
                        let chosen = if mask >> which & 1 == 0 { 0 } else { 1 };
                        vec![(idx[&e.inputs[chosen]], idx[&e.outputs[0]])]
                    }
                    _ => unreachable!(),
                };
                for (a, b) in pairs {
                    if !uf.union(a, b) {
                        acyclic = false;
                        break 'edges;
                    }
                }
            }
            if !acyclic || uf.component_count() != 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone)]
pub struct ComponentFailure {
    pub switching: Switching,
    pub kind: FailureKind,
}

#[derive(Debug, Clone)]
pub enum FailureKind {
    Cyclic,
    /// A test component none of whose vertices lies on the border.
    Isolated { vertices: Vec<VertexId> },
}

/// Mixed-radix odometer over behavior choices; the first edge is the most
/// significant digit.
pub struct SwitchingIter<'a> {
    radices: Vec<usize>,
    current: Option<Vec<usize>>,
    done: bool,
    _s: std::marker::PhantomData<&'a ()>,
}

impl Iterator for SwitchingIter<'_> {
    type Item = Switching;

    fn next(&mut self) -> Option<Switching> {
        if self.done {
            return None;
        }
        match &mut self.current {
            None => {
                if self.radices.contains(&0) {
                    self.done = true;
                    return None;
                }
                self.current = Some(vec![0; self.radices.len()]);
            }
            Some(cur) => {
                let mut i = cur.len();
                loop {
                    if i == 0 {
                        self.done = true;
                        return None;
                    }
                    i -= 1;
                    if cur[i] + 1 < self.radices[i] {
                        cur[i] += 1;
                        for slot in cur[i + 1..].iter_mut() {
                            *slot = 0;
                        }
                        break;
                    }
                }
            }
        }
        self.current.as_ref().map(|c| Switching { choices: c.clone() })
    }
}

/// Convenience constructor for structures; vertices and edges are declared in
/// order and validated at `finish`.
#[derive(Default)]
pub struct StructureBuilder {
    graph: Hypergraph,
    signature: Signature,
    error: Option<StructureError>,
}

impl StructureBuilder {
    pub fn new() -> Self {
        StructureBuilder::default()
    }

    pub fn with_signature(signature: Signature) -> Self {
        StructureBuilder { graph: Hypergraph::new(), signature, error: None }
    }

    pub fn custom(mut self, t: LinkType) -> Self {
        self.signature.register(t);
        self
    }

    pub fn vertex(mut self, id: &str) -> Self {
        if self.error.is_none() {
            if let Err(e) = self.graph.add_vertex(id, None) {
                self.error = Some(e.into());
            }
        }
        self
    }

    pub fn labeled(mut self, id: &str, label: &str) -> Self {
        if self.error.is_none() {
            if let Err(e) = self.graph.add_vertex(id, Some(label)) {
                self.error = Some(e.into());
            }
        }
        self
    }

    pub fn edge(mut self, ty: &str, inputs: &[&str], outputs: &[&str]) -> Self {
        if self.error.is_none() {
            let ins = inputs.iter().map(|s| VertexId::from(*s)).collect();
            let outs = outputs.iter().map(|s| VertexId::from(*s)).collect();
            if let Err(e) = self.graph.add_edge(ty, ins, outs) {
                self.error = Some(e.into());
            }
        }
        self
    }

    pub fn finish(self) -> Result<MStructure, StructureError> {
        if let Some(e) = self.error {
            return Err(e);
        }
        MStructure::new(self.graph, &self.signature)
    }
}

impl fmt::Display for MStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices: {:?}", self.graph.vertex_ids().collect::<Vec<_>>())?;
        for e in self.graph.edges() {
            writeln!(f, "  {} {:?} -> {:?}", e.payload, e.inputs, e.outputs)?;
        }
        Ok(())
    }
}
