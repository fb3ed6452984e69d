//! Directed linear hypergraphs and their undirected shadows.
//!
//! A hyperedge is an ordered pair of vertex lists (inputs, outputs). A
//! hypergraph is linear when each vertex occurs at most once as an input of
//! some edge and at most once as an output of some edge; a vertex never
//! occurs on both sides of a single edge. Inputs of the graph are vertices
//! produced by no edge, outputs are vertices consumed by no edge; an isolated
//! vertex is both.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::partitions::{ElemId, Partition, UnionFind};

/// Vertex identifiers share the element type of the partitions module, so a
/// partition of a structure border needs no conversion step.
pub type VertexId = ElemId;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} already exists")]
    DuplicateVertex(VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("vertex {0} occurs twice among the inputs of one edge")]
    DuplicateInput(VertexId),
    #[error("vertex {0} occurs twice among the outputs of one edge")]
    DuplicateOutput(VertexId),
    #[error("vertex {0} occurs as both input and output of one edge")]
    InputOutputOverlap(VertexId),
    #[error("linearity violated: vertex {0} consumed by more than one edge")]
    NonLinearInput(VertexId),
    #[error("linearity violated: vertex {0} produced by more than one edge")]
    NonLinearOutput(VertexId),
    #[error("interface is not injective on {0}")]
    NonInjectiveInterface(&'static str),
    #[error("empty interface")]
    EmptyInterface,
    #[error("composition breaks linearity at vertex {0}")]
    Composition(VertexId),
}

/// A directed hyperedge with an opaque payload (the link-type name, for
/// multiplicative structures).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperedge {
    pub payload: String,
    pub inputs: Vec<VertexId>,
    pub outputs: Vec<VertexId>,
}

impl Hyperedge {
    /// Border of the edge: inputs then outputs.
    pub fn border(&self) -> impl Iterator<Item = &VertexId> {
        self.inputs.iter().chain(self.outputs.iter())
    }
}

/// A directed hypergraph with labeled vertices. Labels are carried for the
/// program layer and ignored by every graph-theoretic operation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Hypergraph {
    vertices: BTreeMap<VertexId, Option<String>>,
    edges: Vec<Hyperedge>,
}

/// Result of a disjoint union or composition: the graph plus the renaming
/// applied to the right-hand operand's vertices.
#[derive(Debug, Clone)]
pub struct Glued {
    pub graph: Hypergraph,
    pub right_map: BTreeMap<VertexId, VertexId>,
}

impl Hypergraph {
    pub fn new() -> Self {
        Hypergraph::default()
    }

    pub fn add_vertex(
        &mut self,
        id: impl Into<VertexId>,
        label: Option<&str>,
    ) -> Result<VertexId, GraphError> {
        let id = id.into();
        if self.vertices.contains_key(&id) {
            return Err(GraphError::DuplicateVertex(id));
        }
        self.vertices.insert(id.clone(), label.map(str::to_string));
        Ok(id)
    }

    /// Adds an edge, keeping the graph linear. Returns the edge index.
    pub fn add_edge(
        &mut self,
        payload: impl Into<String>,
        inputs: Vec<VertexId>,
        outputs: Vec<VertexId>,
    ) -> Result<usize, GraphError> {
        let edge = Hyperedge { payload: payload.into(), inputs, outputs };
        self.check_edge(&edge)?;
        self.edges.push(edge);
        Ok(self.edges.len() - 1)
    }

    fn check_edge(&self, edge: &Hyperedge) -> Result<(), GraphError> {
        let mut ins = BTreeSet::new();
        for v in &edge.inputs {
            if !self.vertices.contains_key(v) {
                return Err(GraphError::UnknownVertex(v.clone()));
            }
            if !ins.insert(v.clone()) {
                return Err(GraphError::DuplicateInput(v.clone()));
            }
        }
        let mut outs = BTreeSet::new();
        for v in &edge.outputs {
            if !self.vertices.contains_key(v) {
                return Err(GraphError::UnknownVertex(v.clone()));
            }
            if !outs.insert(v.clone()) {
                return Err(GraphError::DuplicateOutput(v.clone()));
            }
            if ins.contains(v) {
                return Err(GraphError::InputOutputOverlap(v.clone()));
            }
        }
        for e in &self.edges {
            for v in &e.inputs {
                if ins.contains(v) {
                    return Err(GraphError::NonLinearInput(v.clone()));
                }
            }
            for v in &e.outputs {
                if outs.contains(v) {
                    return Err(GraphError::NonLinearOutput(v.clone()));
                }
            }
        }
        Ok(())
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = &VertexId> {
        self.vertices.keys()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn has_vertex(&self, v: &VertexId) -> bool {
        self.vertices.contains_key(v)
    }

    pub fn label(&self, v: &VertexId) -> Option<&str> {
        self.vertices.get(v).and_then(|l| l.as_deref())
    }

    pub fn labels(&self) -> &BTreeMap<VertexId, Option<String>> {
        &self.vertices
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertices produced by no edge.
    pub fn inputs(&self) -> BTreeSet<VertexId> {
        let produced: BTreeSet<&VertexId> =
            self.edges.iter().flat_map(|e| e.outputs.iter()).collect();
        self.vertices
            .keys()
            .filter(|v| !produced.contains(v))
            .cloned()
            .collect()
    }

    /// Vertices consumed by no edge.
    pub fn outputs(&self) -> BTreeSet<VertexId> {
        let consumed: BTreeSet<&VertexId> =
            self.edges.iter().flat_map(|e| e.inputs.iter()).collect();
        self.vertices
            .keys()
            .filter(|v| !consumed.contains(v))
            .cloned()
            .collect()
    }

    pub fn border(&self) -> BTreeSet<VertexId> {
        let mut b = self.inputs();
        b.extend(self.outputs());
        b
    }

    /// Checks the linearity invariant from scratch (construction through
    /// [`Hypergraph::add_edge`] maintains it incrementally).
    pub fn is_linear(&self) -> bool {
        let mut ins = BTreeSet::new();
        let mut outs = BTreeSet::new();
        for e in &self.edges {
            let mut local_in = BTreeSet::new();
            for v in &e.inputs {
                if !local_in.insert(v) || !ins.insert(v.clone()) {
                    return false;
                }
            }
            for v in &e.outputs {
                if local_in.contains(v) || !outs.insert(v.clone()) {
                    return false;
                }
            }
        }
        self.edges
            .iter()
            .flat_map(|e| e.border())
            .all(|v| self.vertices.contains_key(v))
    }

    /// No elementary directed cycle, reading each edge as arcs from each of
    /// its inputs to each of its outputs.
    pub fn is_dag(&self) -> bool {
        let idx: BTreeMap<&VertexId, usize> =
            self.vertices.keys().enumerate().map(|(i, v)| (v, i)).collect();
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); idx.len()];
        for e in &self.edges {
            for i in &e.inputs {
                for o in &e.outputs {
                    succ[idx[i]].push(idx[o]);
                }
            }
        }
        // Iterative DFS with colors: 0 unseen, 1 on stack, 2 done.
        let mut color = vec![0u8; idx.len()];
        for start in 0..idx.len() {
            if color[start] != 0 {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            color[start] = 1;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if *next < succ[v].len() {
                    let w = succ[v][*next];
                    *next += 1;
                    match color[w] {
                        0 => {
                            color[w] = 1;
                            stack.push((w, 0));
                        }
                        1 => return false,
                        _ => {}
                    }
                } else {
                    color[v] = 2;
                    stack.pop();
                }
            }
        }
        true
    }

    /// Forgets directions: one undirected hyperedge per edge border.
    pub fn undirected_shadow(&self) -> UndirectedHypergraph {
        let uedges = self
            .edges
            .iter()
            .map(|e| e.border().cloned().collect::<BTreeSet<_>>())
            .collect();
        UndirectedHypergraph { vertices: self.vertices.keys().cloned().collect(), uedges }
    }

    /// Rewrites every vertex id through `f`, which must stay injective.
    pub fn renamed(&self, f: impl Fn(&VertexId) -> VertexId) -> Result<Hypergraph, GraphError> {
        let mut g = Hypergraph::new();
        for (v, label) in &self.vertices {
            let w = f(v);
            if g.vertices.contains_key(&w) {
                return Err(GraphError::DuplicateVertex(w));
            }
            g.vertices.insert(w, label.clone());
        }
        for e in &self.edges {
            g.edges.push(Hyperedge {
                payload: e.payload.clone(),
                inputs: e.inputs.iter().map(&f).collect(),
                outputs: e.outputs.iter().map(&f).collect(),
            });
        }
        Ok(g)
    }

    /// Disjoint union; the right operand's vertices are renamed away from
    /// collisions (`v`, `v~1`, `v~2`, ...) and the renaming is returned.
    pub fn disjoint_union(&self, other: &Hypergraph) -> Glued {
        let mut graph = self.clone();
        let mut right_map = BTreeMap::new();
        for (v, label) in &other.vertices {
            let fresh = fresh_name(v, |c| !graph.vertices.contains_key(c));
            graph.vertices.insert(fresh.clone(), label.clone());
            right_map.insert(v.clone(), fresh);
        }
        for e in &other.edges {
            graph.edges.push(Hyperedge {
                payload: e.payload.clone(),
                inputs: e.inputs.iter().map(|v| right_map[v].clone()).collect(),
                outputs: e.outputs.iter().map(|v| right_map[v].clone()).collect(),
            });
        }
        Glued { graph, right_map }
    }

    /// Composition over an interface: pairs `(g, h)` identify vertex `g` of
    /// `self` with vertex `h` of `other`, keeping `g` (and its label, when it
    /// has one). The remaining right-hand vertices are renamed away from
    /// collisions as in [`Hypergraph::disjoint_union`].
    pub fn compose(
        &self,
        other: &Hypergraph,
        interface: &[(VertexId, VertexId)],
    ) -> Result<Glued, GraphError> {
        if interface.is_empty() {
            return Err(GraphError::EmptyInterface);
        }
        let mut left_seen = BTreeSet::new();
        let mut right_seen = BTreeSet::new();
        for (g, h) in interface {
            if !self.vertices.contains_key(g) {
                return Err(GraphError::UnknownVertex(g.clone()));
            }
            if !other.vertices.contains_key(h) {
                return Err(GraphError::UnknownVertex(h.clone()));
            }
            if !left_seen.insert(g.clone()) {
                return Err(GraphError::NonInjectiveInterface("the left side"));
            }
            if !right_seen.insert(h.clone()) {
                return Err(GraphError::NonInjectiveInterface("the right side"));
            }
        }
        let glue: BTreeMap<&VertexId, &VertexId> =
            interface.iter().map(|(g, h)| (h, g)).collect();
        let mut graph = self.clone();
        let mut right_map = BTreeMap::new();
        for (v, label) in &other.vertices {
            if let Some(g) = glue.get(v) {
                if graph.vertices[*g].is_none() {
                    graph.vertices.insert((*g).clone(), label.clone());
                }
                right_map.insert(v.clone(), (*g).clone());
            } else {
                let fresh = fresh_name(v, |c| !graph.vertices.contains_key(c));
                graph.vertices.insert(fresh.clone(), label.clone());
                right_map.insert(v.clone(), fresh);
            }
        }
        for e in &other.edges {
            graph.edges.push(Hyperedge {
                payload: e.payload.clone(),
                inputs: e.inputs.iter().map(|v| right_map[v].clone()).collect(),
                outputs: e.outputs.iter().map(|v| right_map[v].clone()).collect(),
            });
        }
        if !graph.is_linear() {
            let witness = interface[0].0.clone();
            let bad = graph.first_linearity_violation().unwrap_or(witness);
            return Err(GraphError::Composition(bad));
        }
        Ok(Glued { graph, right_map })
    }

    pub(crate) fn first_linearity_violation(&self) -> Option<VertexId> {
        let mut ins: BTreeSet<VertexId> = BTreeSet::new();
        let mut outs: BTreeSet<VertexId> = BTreeSet::new();
        for e in &self.edges {
            for v in &e.inputs {
                if !ins.insert(v.clone()) {
                    return Some(v.clone());
                }
            }
            for v in &e.outputs {
                if !outs.insert(v.clone()) {
                    return Some(v.clone());
                }
            }
        }
        None
    }

    /// Searches for a payload- and label-preserving isomorphism onto `other`,
    /// mapping edge ports positionally. Returns the vertex bijection.
    pub fn isomorphism(&self, other: &Hypergraph) -> Option<BTreeMap<VertexId, VertexId>> {
        if self.vertices.len() != other.vertices.len() || self.edges.len() != other.edges.len() {
            return None;
        }
        let sig = |e: &Hyperedge| (e.payload.clone(), e.inputs.len(), e.outputs.len());
        let mut mine: BTreeMap<_, Vec<usize>> = BTreeMap::new();
        let mut theirs: BTreeMap<_, Vec<usize>> = BTreeMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            mine.entry(sig(e)).or_default().push(i);
        }
        for (i, e) in other.edges.iter().enumerate() {
            theirs.entry(sig(e)).or_default().push(i);
        }
        if mine.keys().collect::<Vec<_>>() != theirs.keys().collect::<Vec<_>>() {
            return None;
        }
        for (k, v) in &mine {
            if theirs[k].len() != v.len() {
                return None;
            }
        }
        let order: Vec<usize> = mine.values().flatten().copied().collect();
        let mut used = vec![false; other.edges.len()];
        let mut map: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        let mut image: BTreeSet<VertexId> = BTreeSet::new();
        if self.match_edges(other, &mine, &theirs, &order, 0, &mut used, &mut map, &mut image) {
            Some(map)
        } else {
            None
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn match_edges(
        &self,
        other: &Hypergraph,
        mine: &BTreeMap<(String, usize, usize), Vec<usize>>,
        theirs: &BTreeMap<(String, usize, usize), Vec<usize>>,
        order: &[usize],
        pos: usize,
        used: &mut Vec<bool>,
        map: &mut BTreeMap<VertexId, VertexId>,
        image: &mut BTreeSet<VertexId>,
    ) -> bool {
        if pos == order.len() {
            return self.extend_to_isolated(other, map, image);
        }
        let e = &self.edges[order[pos]];
        let sig = (e.payload.clone(), e.inputs.len(), e.outputs.len());
        let _ = mine;
        for &cand in &theirs[&sig] {
            if used[cand] {
                continue;
            }
            let f = &other.edges[cand];
            let mut added: Vec<VertexId> = Vec::new();
            let mut ok = true;
            for (v, w) in e.border().zip(f.border()) {
                match map.get(v) {
                    Some(prev) if prev == w => {}
                    Some(_) => {
                        ok = false;
                        break;
                    }
                    None => {
                        if image.contains(w) || self.label(v) != other.label(w) {
                            ok = false;
                            break;
                        }
                        map.insert(v.clone(), w.clone());
                        image.insert(w.clone());
                        added.push(v.clone());
                    }
                }
            }
            if ok {
                used[cand] = true;
                if self.match_edges(other, mine, theirs, order, pos + 1, used, map, image) {
                    return true;
                }
                used[cand] = false;
            }
            for v in added {
                let w = map.remove(&v).unwrap();
                image.remove(&w);
            }
        }
        false
    }

    fn extend_to_isolated(
        &self,
        other: &Hypergraph,
        map: &mut BTreeMap<VertexId, VertexId>,
        image: &mut BTreeSet<VertexId>,
    ) -> bool {
        let mut left: BTreeMap<Option<&str>, Vec<&VertexId>> = BTreeMap::new();
        let mut right: BTreeMap<Option<&str>, Vec<&VertexId>> = BTreeMap::new();
        for v in self.vertices.keys() {
            if !map.contains_key(v) {
                left.entry(self.label(v)).or_default().push(v);
            }
        }
        for w in other.vertices.keys() {
            if !image.contains(w) {
                right.entry(other.label(w)).or_default().push(w);
            }
        }
        if left.len() != right.len() {
            return false;
        }
        for (label, vs) in &left {
            match right.get(label) {
                Some(ws) if ws.len() == vs.len() => {
                    for (v, w) in vs.iter().zip(ws.iter()) {
                        map.insert((*v).clone(), (*w).clone());
                        image.insert((*w).clone());
                    }
                }
                _ => return false,
            }
        }
        true
    }
}

fn fresh_name(base: &VertexId, free: impl Fn(&VertexId) -> bool) -> VertexId {
    if free(base) {
        return base.clone();
    }
    let mut k = 1usize;
    loop {
        let cand = VertexId::new(format!("{}~{}", base, k));
        if free(&cand) {
            return cand;
        }
        k += 1;
    }
}

/// An undirected hypergraph: a vertex set and a multiset of non-empty vertex
/// subsets. Tests of multiplicative structures live here.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UndirectedHypergraph {
    vertices: BTreeSet<VertexId>,
    uedges: Vec<BTreeSet<VertexId>>,
}

impl UndirectedHypergraph {
    pub fn new<V, U>(vertices: V, uedges: U) -> Self
    where
        V: IntoIterator<Item = VertexId>,
        U: IntoIterator<Item = BTreeSet<VertexId>>,
    {
        let g = UndirectedHypergraph {
            vertices: vertices.into_iter().collect(),
            uedges: uedges.into_iter().filter(|e| !e.is_empty()).collect(),
        };
        debug_assert!(g.uedges.iter().all(|e| e.iter().all(|v| g.vertices.contains(v))));
        g
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn uedges(&self) -> &[BTreeSet<VertexId>] {
        &self.uedges
    }

    fn index(&self) -> BTreeMap<&VertexId, usize> {
        self.vertices.iter().enumerate().map(|(i, v)| (v, i)).collect()
    }

    fn components_uf(&self) -> (BTreeMap<&VertexId, usize>, UnionFind) {
        let idx = self.index();
        let mut uf = UnionFind::new(idx.len());
        for e in &self.uedges {
            let mut it = e.iter();
            if let Some(first) = it.next() {
                for v in it {
                    uf.union(idx[first], idx[v]);
                }
            }
        }
        (idx, uf)
    }

    /// The partition of the vertex set into connected components.
    pub fn connected_components(&self) -> Partition {
        let (idx, mut uf) = self.components_uf();
        let mut groups: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
        for (v, &i) in &idx {
            groups.entry(uf.find(i)).or_default().push((*v).clone());
        }
        if groups.is_empty() {
            Partition::empty()
        } else {
            Partition::new(groups.into_values()).expect("components are disjoint")
        }
    }

    pub fn component_count(&self) -> usize {
        let (_, uf) = self.components_uf();
        uf.component_count()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    pub fn connected(&self, x: &VertexId, y: &VertexId) -> bool {
        let (idx, mut uf) = self.components_uf();
        match (idx.get(x), idx.get(y)) {
            (Some(&i), Some(&j)) => uf.connected(i, j),
            _ => false,
        }
    }

    /// Acyclicity via the bipartite incidence expansion: a node per vertex, a
    /// node per hyperedge, an arc per membership. Equivalently, unioning each
    /// hyperedge's vertices must never join two already-connected vertices.
    pub fn is_forest(&self) -> bool {
        let idx = self.index();
        let mut uf = UnionFind::new(idx.len());
        for e in &self.uedges {
            let mut it = e.iter();
            if let Some(first) = it.next() {
                for v in it {
                    if !uf.union(idx[first], idx[v]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_tree(&self) -> bool {
        self.is_forest() && self.is_connected()
    }
}

impl fmt::Debug for UndirectedHypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .uedges
            .iter()
            .map(|e| {
                let vs: Vec<&str> = e.iter().map(|v| v.as_str()).collect();
                format!("{{{}}}", vs.join(","))
            })
            .collect();
        write!(
            f,
            "UndirectedHypergraph {{ vertices: {:?}, uedges: [{}] }}",
            self.vertices,
            edges.join(", ")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> VertexId {
        VertexId::from(s)
    }

    fn graph(vs: &[&str], es: &[(&str, &[&str], &[&str])]) -> Hypergraph {
        let mut g = Hypergraph::new();
        for x in vs {
            g.add_vertex(*x, None).unwrap();
        }
        for (p, i, o) in es {
            g.add_edge(
                *p,
                i.iter().map(|s| v(s)).collect(),
                o.iter().map(|s| v(s)).collect(),
            )
            .unwrap();
        }
        g
    }

    #[test]
    fn isolated_vertex_is_both_input_and_output() {
        let g = graph(&["v"], &[]);
        assert_eq!(g.inputs(), [v("v")].into());
        assert_eq!(g.outputs(), [v("v")].into());
        assert_eq!(g.border(), [v("v")].into());
    }

    #[test]
    fn empty_graph_has_empty_border() {
        let g = Hypergraph::new();
        assert!(g.inputs().is_empty());
        assert!(g.outputs().is_empty());
        assert!(g.border().is_empty());
        assert!(g.is_linear());
        assert!(g.is_dag());
    }

    #[test]
    fn add_edge_rejects_double_consumption() {
        let mut g = graph(&["v", "a", "b"], &[("t", &["v"], &["a"])]);
        let err = g.add_edge("t", vec![v("v")], vec![v("b")]).unwrap_err();
        assert_eq!(err, GraphError::NonLinearInput(v("v")));
    }

    #[test]
    fn dag_detection() {
        // Edge a -> b plus edge b -> a is a directed 2-cycle (and linear).
        let mut g = Hypergraph::new();
        g.add_vertex("a", None).unwrap();
        g.add_vertex("b", None).unwrap();
        g.add_edge("t", vec![v("a")], vec![v("b")]).unwrap();
        g.add_edge("t", vec![v("b")], vec![v("a")]).unwrap();
        assert!(g.is_linear());
        assert!(!g.is_dag());

        let tree = graph(&["a", "b", "c"], &[("par", &["a", "b"], &["c"])]);
        assert!(tree.is_dag());
    }

    #[test]
    fn shadow_has_one_uedge_per_edge() {
        let g = graph(&["a", "b", "c"], &[("tensor", &["a", "b"], &["c"])]);
        let u = g.undirected_shadow();
        assert_eq!(u.uedges().len(), 1);
        assert_eq!(u.uedges()[0], [v("a"), v("b"), v("c")].into());
        assert!(Hypergraph::new().undirected_shadow().uedges().is_empty());
    }

    #[test]
    fn components_and_forests() {
        let two = UndirectedHypergraph::new([v("a"), v("b")], []);
        assert_eq!(two.component_count(), 2);

        let one = UndirectedHypergraph::new(
            [v("a"), v("b"), v("c")],
            [[v("a"), v("b"), v("c")].into()],
        );
        assert_eq!(one.component_count(), 1);
        assert!(one.is_tree(), "a single uedge over k vertices is a tree");

        let cyc = UndirectedHypergraph::new(
            [v("a"), v("b"), v("c"), v("d")],
            [
                [v("a"), v("b"), v("c")].into(),
                [v("a"), v("b"), v("d")].into(),
            ],
        );
        assert!(!cyc.is_forest(), "two uedges sharing two vertices form a cycle");
    }

    #[test]
    fn forest_count_identity() {
        // For a forest: |V| - components == sum over uedges of (|e| - 1).
        let f = UndirectedHypergraph::new(
            [v("a"), v("b"), v("c"), v("d"), v("e")],
            [[v("a"), v("b"), v("c")].into(), [v("d"), v("e")].into()],
        );
        assert!(f.is_forest());
        let sum: usize = f.uedges().iter().map(|e| e.len() - 1).sum();
        assert_eq!(f.vertices().len() - f.component_count(), sum);
    }

    #[test]
    fn disjoint_union_renames_and_preserves_inputs() {
        let g = graph(&["a", "b", "c"], &[("t", &["a", "b"], &["c"])]);
        let h = graph(&["a", "x"], &[("t", &["a"], &["x"])]);
        let un = g.disjoint_union(&h);
        assert_eq!(un.graph.vertex_count(), 5);
        assert!(un.graph.is_linear());
        assert_eq!(un.right_map[&v("a")], v("a~1"));
        // inputs(G || H) is the disjoint union of the inputs.
        let mut expect = g.inputs();
        for x in h.inputs() {
            expect.insert(un.right_map[&x].clone());
        }
        assert_eq!(un.graph.inputs(), expect);

        let empty = Hypergraph::new();
        assert_eq!(g.disjoint_union(&empty).graph, g);
    }

    #[test]
    fn compose_identifies_interface_vertices() {
        // Two wires glued output-to-input: a -> m -> z.
        let g = graph(&["a", "m"], &[("w", &["a"], &["m"])]);
        let h = graph(&["x", "z"], &[("w", &["x"], &["z"])]);
        let c = g.compose(&h, &[(v("m"), v("x"))]).unwrap();
        assert!(c.graph.is_linear());
        assert_eq!(c.graph.vertex_count(), 3);
        assert_eq!(c.graph.inputs(), [v("a")].into());
        assert_eq!(c.graph.outputs(), [v("z")].into());
        assert_eq!(c.right_map[&v("x")], v("m"));
    }

    #[test]
    fn compose_rejects_non_injective_and_broken_linearity() {
        let g = graph(&["a", "b"], &[("w", &["a"], &["b"])]);
        let h = graph(&["x", "y"], &[("w", &["x"], &["y"])]);
        assert!(matches!(
            g.compose(&h, &[(v("b"), v("x")), (v("b"), v("y"))]),
            Err(GraphError::NonInjectiveInterface(_))
        ));
        // Gluing h's output onto a vertex already produced in g breaks
        // linearity: b would be produced twice.
        assert!(matches!(
            g.compose(&h, &[(v("b"), v("y"))]),
            Err(GraphError::Composition(_))
        ));
    }

    #[test]
    fn compose_worked_interface_example() {
        // Left graph: h1 with inputs v1,v2 and outputs v4,x; h2 with inputs
        // x,v3 and outputs v5,v6. Right graph: h3 with input w2, output y;
        // h4 with inputs w1,y,w3 and output w4. Glue v5=w2, v6=w3.
        let g = graph(
            &["v1", "v2", "v3", "v4", "v5", "v6", "x"],
            &[
                ("h1", &["v1", "v2"], &["v4", "x"]),
                ("h2", &["x", "v3"], &["v5", "v6"]),
            ],
        );
        let h = graph(
            &["w1", "w2", "w3", "w4", "y"],
            &[("h3", &["w2"], &["y"]), ("h4", &["w1", "y", "w3"], &["w4"])],
        );
        let c = g
            .compose(&h, &[(v("v5"), v("w2")), (v("v6"), v("w3"))])
            .unwrap();
        assert!(c.graph.is_linear());
        assert!(c.graph.is_dag());
        assert_eq!(
            c.graph.inputs(),
            [v("w1"), v("v1"), v("v2"), v("v3")].into()
        );
        assert_eq!(c.graph.outputs(), [v("v4"), v("w4")].into());
        assert_eq!(c.graph.edges().len(), 4);
        assert_eq!(c.graph.vertex_count(), 10);
    }

    #[test]
    fn compose_is_associative_on_disjoint_interfaces() {
        let wire = |a: &str, b: &str| graph(&[a, b], &[("w", &[a], &[b])]);
        let g = wire("a", "b");
        let h = wire("c", "d");
        let k = wire("e", "f");
        let gh = g.compose(&h, &[(v("b"), v("c"))]).unwrap().graph;
        let ghk = gh.compose(&k, &[(v("d"), v("e"))]).unwrap().graph;
        let hk = h.compose(&k, &[(v("d"), v("e"))]).unwrap().graph;
        let g_hk = g.compose(&hk, &[(v("b"), v("c"))]).unwrap().graph;
        assert!(ghk.isomorphism(&g_hk).is_some());
    }

    #[test]
    fn shadow_commutes_with_disjoint_union() {
        let g = graph(&["a", "b", "c"], &[("t", &["a", "b"], &["c"])]);
        let h = graph(&["x", "y"], &[("w", &["x"], &["y"])]);
        let un = g.disjoint_union(&h);
        let lhs = un.graph.undirected_shadow();
        // Shadow of the union equals union of shadows (under the same
        // renaming, which only touches h's side here).
        let mut expect_edges: Vec<BTreeSet<VertexId>> =
            g.undirected_shadow().uedges().to_vec();
        for e in h.undirected_shadow().uedges() {
            expect_edges.push(e.iter().map(|x| un.right_map[x].clone()).collect());
        }
        assert_eq!(lhs.uedges(), expect_edges.as_slice());
    }

    #[test]
    fn isomorphism_respects_labels_and_payloads() {
        let mut g = Hypergraph::new();
        g.add_vertex("a", Some("in")).unwrap();
        g.add_vertex("b", None).unwrap();
        g.add_edge("w", vec![v("a")], vec![v("b")]).unwrap();

        let mut h = Hypergraph::new();
        h.add_vertex("x", Some("in")).unwrap();
        h.add_vertex("y", None).unwrap();
        h.add_edge("w", vec![v("x")], vec![v("y")]).unwrap();

        let iso = g.isomorphism(&h).unwrap();
        assert_eq!(iso[&v("a")], v("x"));
        assert_eq!(iso[&v("b")], v("y"));

        let mut bad = Hypergraph::new();
        bad.add_vertex("x", Some("other")).unwrap();
        bad.add_vertex("y", None).unwrap();
        bad.add_edge("w", vec![v("x")], vec![v("y")]).unwrap();
        assert!(g.isomorphism(&bad).is_none());
    }

    #[test]
    fn is_dag_invariant_under_edge_reordering() {
        let mut g = Hypergraph::new();
        for x in ["a", "b", "c", "d"] {
            g.add_vertex(x, None).unwrap();
        }
        g.add_edge("t", vec![v("a")], vec![v("b")]).unwrap();
        g.add_edge("t", vec![v("b")], vec![v("c")]).unwrap();
        g.add_edge("t", vec![v("c")], vec![v("d")]).unwrap();

        let mut h = Hypergraph::new();
        for x in ["a", "b", "c", "d"] {
            h.add_vertex(x, None).unwrap();
        }
        h.add_edge("t", vec![v("c")], vec![v("d")]).unwrap();
        h.add_edge("t", vec![v("a")], vec![v("b")]).unwrap();
        h.add_edge("t", vec![v("b")], vec![v("c")]).unwrap();
        assert_eq!(g.is_dag(), h.is_dag());
    }
}
