//! Shared fixtures for the integration suites: exhaustive and random corpora
//! of small MLL structures, and the worked example structures.

use multinet_core::mstructure::{MStructure, Signature};
use multinet_core::partitions::{Partition, PartitionSet};
use multinet_core::Hypergraph;

pub fn part(blocks: &[&[&str]]) -> Partition {
    Partition::new(blocks.iter().map(|b| b.iter().copied())).unwrap()
}

pub fn pset(ps: &[&[&[&str]]]) -> PartitionSet {
    PartitionSet::new(ps.iter().map(|p| part(p))).unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MllLink {
    Ax,
    Tensor,
    Par,
}

impl MllLink {
    pub fn arity(self) -> (usize, usize) {
        match self {
            MllLink::Ax => (0, 2),
            MllLink::Tensor => (2, 1),
            MllLink::Par => (2, 1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MllLink::Ax => "ax",
            MllLink::Tensor => "tensor",
            MllLink::Par => "par",
        }
    }

    pub fn all() -> [MllLink; 3] {
        [MllLink::Ax, MllLink::Tensor, MllLink::Par]
    }
}

/// Builds the structure for a link multiset plus a gluing: `assign[i]` sends
/// input slot `i` to an output slot (shared vertex) or leaves it open.
pub fn build_mll(
    types: &[MllLink],
    inputs: &[(usize, usize)],
    outputs: &[(usize, usize)],
    assign: &[Option<usize>],
) -> MStructure {
    let mut g = Hypergraph::new();
    for (e, p) in outputs {
        g.add_vertex(format!("o{e}_{p}"), None).unwrap();
    }
    for (i, (e, p)) in inputs.iter().enumerate() {
        if assign[i].is_none() {
            g.add_vertex(format!("i{e}_{p}"), None).unwrap();
        }
    }
    let input_name = |i: usize| -> String {
        match assign[i] {
            Some(oi) => {
                let (e, p) = outputs[oi];
                format!("o{e}_{p}")
            }
            None => {
                let (e, p) = inputs[i];
                format!("i{e}_{p}")
            }
        }
    };
    for (e, ty) in types.iter().enumerate() {
        let ins: Vec<_> = inputs
            .iter()
            .enumerate()
            .filter(|(_, (ie, _))| *ie == e)
            .map(|(i, _)| input_name(i).into())
            .collect();
        let outs: Vec<_> = outputs
            .iter()
            .filter(|(oe, _)| *oe == e)
            .map(|(oe, op)| format!("o{oe}_{op}").into())
            .collect();
        g.add_edge(ty.name(), ins, outs).unwrap();
    }
    MStructure::new(g, &Signature::mll()).unwrap()
}

fn slots(types: &[MllLink]) -> (Vec<(usize, usize)>, Vec<(usize, usize)>) {
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    for (e, ty) in types.iter().enumerate() {
        let (n_in, n_out) = ty.arity();
        for p in 0..n_in {
            inputs.push((e, p));
        }
        for p in 0..n_out {
            outputs.push((e, p));
        }
    }
    (inputs, outputs)
}

fn matchings(
    i: usize,
    inputs: &[(usize, usize)],
    outputs: &[(usize, usize)],
    used: &mut Vec<bool>,
    assign: &mut Vec<Option<usize>>,
    emit: &mut dyn FnMut(&[Option<usize>]),
) {
    if i == inputs.len() {
        emit(assign);
        return;
    }
    assign[i] = None;
    matchings(i + 1, inputs, outputs, used, assign, emit);
    for oi in 0..outputs.len() {
        // A slot never glues onto its own edge: that would put a vertex on
        // both sides of one link.
        if used[oi] || outputs[oi].0 == inputs[i].0 {
            continue;
        }
        used[oi] = true;
        assign[i] = Some(oi);
        matchings(i + 1, inputs, outputs, used, assign, emit);
        used[oi] = false;
    }
    assign[i] = None;
}

/// Every MLL structure with `min..=max` links, by construction: all link
/// multisets, all partial injective gluings of output onto input slots.
pub fn mll_corpus(min: usize, max: usize) -> Vec<MStructure> {
    let mut out = Vec::new();
    for k in min..=max {
        let mut pick = vec![0usize; k];
        loop {
            let types: Vec<MllLink> = pick.iter().map(|&t| MllLink::all()[t]).collect();
            let (inputs, outputs) = slots(&types);
            let mut used = vec![false; outputs.len()];
            let mut assign = vec![None; inputs.len()];
            matchings(0, &inputs, &outputs, &mut used, &mut assign, &mut |assign| {
                out.push(build_mll(&types, &inputs, &outputs, assign));
            });
            // Advance the base-3 odometer over link choices.
            let mut advanced = false;
            let mut j = k;
            while j > 0 {
                j -= 1;
                if pick[j] + 1 < 3 {
                    pick[j] += 1;
                    for slot in pick[j + 1..].iter_mut() {
                        *slot = 0;
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }
    out
}

/// The first figure structure: a par and two tensors closed by three axioms.
/// A proof net with outputs A1, A2, A3.
pub fn modex_s1() -> MStructure {
    MStructure::builder()
        .vertex("pl")
        .vertex("pr")
        .vertex("t1l")
        .vertex("t1r")
        .vertex("t2l")
        .vertex("t2r")
        .vertex("A1")
        .vertex("A2")
        .vertex("A3")
        .edge("ax", &[], &["pr", "t1l"])
        .edge("ax", &[], &["t1r", "t2l"])
        .edge("ax", &[], &["pl", "t2r"])
        .edge("par", &["pl", "pr"], &["A1"])
        .edge("tensor", &["t1l", "t1r"], &["A2"])
        .edge("tensor", &["t2l", "t2r"], &["A3"])
        .finish()
        .unwrap()
}

/// The second figure structure, read with its collector discarding the
/// output so that it has none: a par and a tensor over open atoms, joined by
/// a cut. A component that is not transitory.
pub fn modex_s2() -> MStructure {
    MStructure::builder()
        .vertex("a1")
        .vertex("a2")
        .vertex("a3")
        .vertex("a4")
        .vertex("p")
        .vertex("t")
        .edge("par", &["a1", "a2"], &["p"])
        .edge("tensor", &["a3", "a4"], &["t"])
        .edge("cut", &["p", "t"], &[])
        .finish()
        .unwrap()
}

/// The third figure structure: one axiom bridging two pars. Not a component:
/// a test isolates the axiom pair a2, a3.
pub fn modex_s3() -> MStructure {
    MStructure::builder()
        .vertex("a1")
        .vertex("a2")
        .vertex("a3")
        .vertex("a4")
        .vertex("A1")
        .vertex("A2")
        .edge("ax", &[], &["a2", "a3"])
        .edge("par", &["a1", "a2"], &["A1"])
        .edge("par", &["a3", "a4"], &["A2"])
        .finish()
        .unwrap()
}
