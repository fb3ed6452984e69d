//! Generalized multiplicative connectives built from basic partitions.
//!
//! For `n = u·v` with `u, v` prime, the basic partitions are the partitions
//! of `{1..n}` whose blocks are cyclic intervals of length `v`; there are `v`
//! of them. `G(u,v)` is the `n`-ary link whose behavior adds the output port
//! to the non-singleton block of each suitable member of the orthogonal set
//! of the basic partitions; its dual adds the output port to each block of
//! each basic partition in turn. Ports are the formal `i1..in` and `o1`, so
//! these behaviors compare directly against behaviors of formula trees built
//! over the same ports.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::mstructure::{LinkType, MStructure, Signature, StructureBuilder, StructureError};
use crate::partitions::{
    orthogonal_set_bounded, ElemId, Partition, PartitionError, PartitionSet, DEFAULT_ENUM_BOUND,
};

#[derive(Debug, Error)]
pub enum ConnectiveError {
    #[error("{0} is not prime (basic partition parameters must be prime)")]
    NotPrime(usize),
    #[error("parameter must be at least 2, got {0}")]
    TooSmall(usize),
    #[error("{0:?} is not a permutation of 1..={1}")]
    NotAPermutation(Vec<usize>, usize),
    #[error("probe supports at most {max} inputs, got {got}")]
    ProbeTooLarge { max: usize, got: usize },
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Primal,
    Dual,
}

/// A Girard-type generalized connective: the `(u, v)` parameters and the
/// ready-to-use link type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GirardType {
    pub u: usize,
    pub v: usize,
    pub polarity: Polarity,
    pub link: LinkType,
}

impl GirardType {
    pub fn name(&self) -> &str {
        &self.link.name
    }

    pub fn arity(&self) -> usize {
        self.u * self.v
    }
}

/// Canonical link-type name: `G(u,v)` for the primal, `Gd(u,v)` for the dual.
pub fn girard_name(u: usize, v: usize, polarity: Polarity) -> String {
    match polarity {
        Polarity::Primal => format!("G({u},{v})"),
        Polarity::Dual => format!("Gd({u},{v})"),
    }
}

/// Parses a name produced by [`girard_name`].
pub fn parse_girard_name(name: &str) -> Option<(usize, usize, Polarity)> {
    let (polarity, rest) = if let Some(r) = name.strip_prefix("Gd(") {
        (Polarity::Dual, r)
    } else if let Some(r) = name.strip_prefix("G(") {
        (Polarity::Primal, r)
    } else {
        return None;
    };
    let body = rest.strip_suffix(')')?;
    let (u, v) = body.split_once(',')?;
    Some((u.trim().parse().ok()?, v.trim().parse().ok()?, polarity))
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn check_prime(x: usize) -> Result<(), ConnectiveError> {
    if x < 2 {
        return Err(ConnectiveError::TooSmall(x));
    }
    if !is_prime(x) {
        return Err(ConnectiveError::NotPrime(x));
    }
    Ok(())
}

/// The `v` partitions of `{1..uv}` into `u` cyclic intervals of length `v`.
pub fn basic_partitions(u: usize, v: usize) -> Result<PartitionSet, ConnectiveError> {
    check_prime(u)?;
    check_prime(v)?;
    basic_partitions_unchecked(u, v)
}

/// Same construction without the primality requirement; outside the family's
/// theory, for experimentation only.
pub fn basic_partitions_unchecked(u: usize, v: usize) -> Result<PartitionSet, ConnectiveError> {
    let n = u * v;
    let mut members = BTreeSet::new();
    for shift in 0..v {
        let mut blocks = Vec::with_capacity(u);
        for b in 0..u {
            let block: Vec<String> = (0..v)
                .map(|k| (((shift + b * v + k) % n) + 1).to_string())
                .collect();
            blocks.push(block);
        }
        members.insert(Partition::new(blocks)?);
    }
    Ok(PartitionSet::new(members)?)
}

/// The orthogonal set of the basic partitions, by brute force.
pub fn psbp(u: usize, v: usize) -> Result<PartitionSet, ConnectiveError> {
    psbp_bounded(u, v, DEFAULT_ENUM_BOUND)
}

pub fn psbp_bounded(u: usize, v: usize, bound: usize) -> Result<PartitionSet, ConnectiveError> {
    let base = basic_partitions(u, v)?;
    Ok(orthogonal_set_bounded(&base, bound)?)
}

/// Builds `G(u,v)` or its dual as a link type over ports `i1..i(uv), o1`.
pub fn girard_type(u: usize, v: usize, polarity: Polarity) -> Result<GirardType, ConnectiveError> {
    girard_type_bounded(u, v, polarity, DEFAULT_ENUM_BOUND)
}

pub fn girard_type_bounded(
    u: usize,
    v: usize,
    polarity: Polarity,
    bound: usize,
) -> Result<GirardType, ConnectiveError> {
    let n = u * v;
    let to_port = |numeral: &ElemId| ElemId::new(format!("i{numeral}"));
    let members: Vec<Partition> = match polarity {
        Polarity::Primal => {
            // Members of the orthogonal set shaped as one non-singleton block
            // plus singletons; the output joins the non-singleton block.
            let ortho = psbp_bounded(u, v, bound)?;
            let mut out = Vec::new();
            for p in ortho.iter() {
                let fat: Vec<&Vec<ElemId>> = p.blocks().iter().filter(|b| b.len() > 1).collect();
                if fat.len() != 1 || p.block_count() != 1 + (n - u) {
                    continue;
                }
                debug_assert_eq!(fat[0].len(), u);
                let blocks: Vec<Vec<ElemId>> = p
                    .blocks()
                    .iter()
                    .map(|b| {
                        let mut nb: Vec<ElemId> = b.iter().map(&to_port).collect();
                        if b.len() > 1 {
                            nb.push(ElemId::new("o1"));
                        }
                        nb
                    })
                    .collect();
                out.push(Partition::new(blocks)?);
            }
            out
        }
        Polarity::Dual => {
            // Each basic partition, with the output joining each block in turn.
            let base = basic_partitions(u, v)?;
            let mut out = Vec::new();
            for p in base.iter() {
                for j in 0..p.block_count() {
                    let blocks: Vec<Vec<ElemId>> = p
                        .blocks()
                        .iter()
                        .enumerate()
                        .map(|(k, b)| {
                            let mut nb: Vec<ElemId> = b.iter().map(&to_port).collect();
                            if k == j {
                                nb.push(ElemId::new("o1"));
                            }
                            nb
                        })
                        .collect();
                    out.push(Partition::new(blocks)?);
                }
            }
            out
        }
    };
    let behavior = PartitionSet::new(members)?;
    let link = LinkType::new(girard_name(u, v, polarity), n, 1, behavior)?;
    Ok(GirardType { u, v, polarity, link })
}

fn check_permutation(perm: &[usize], n: usize) -> Result<(), ConnectiveError> {
    let mut seen = vec![false; n + 1];
    if perm.len() != n {
        return Err(ConnectiveError::NotAPermutation(perm.to_vec(), n));
    }
    for &x in perm {
        if x == 0 || x > n || seen[x] {
            return Err(ConnectiveError::NotAPermutation(perm.to_vec(), n));
        }
        seen[x] = true;
    }
    Ok(())
}

/// Formula-tree structure of `(a_{t1} par .. par a_{tv}) (x) .. (x) (..)`:
/// `u` par links of arity `v` under one tensor of arity `u`. The input vertex
/// in slot `k` is the port `i{perm[k]}`; the output vertex is `o1`.
pub fn cnf_structure(perm: &[usize], u: usize, v: usize) -> Result<MStructure, ConnectiveError> {
    grid_structure(perm, u, v, true)
}

/// Formula-tree structure of `(a_{t1} (x) .. (x) a_{tv}) par .. par (..)`.
pub fn dnf_structure(perm: &[usize], u: usize, v: usize) -> Result<MStructure, ConnectiveError> {
    grid_structure(perm, u, v, false)
}

fn grid_structure(
    perm: &[usize],
    u: usize,
    v: usize,
    cnf: bool,
) -> Result<MStructure, ConnectiveError> {
    let n = u * v;
    check_permutation(perm, n)?;
    let signature = Signature::builtin([u, v])?;
    let mut b = StructureBuilder::with_signature(signature);
    for &k in perm {
        b = b.vertex(&format!("i{k}"));
    }
    for c in 0..u {
        b = b.vertex(&format!("m{c}"));
    }
    b = b.vertex("o1");
    let (upper, lower) = if cnf {
        (format!("par_{v}"), format!("tensor_{u}"))
    } else {
        (format!("tensor_{v}"), format!("par_{u}"))
    };
    for c in 0..u {
        let slots: Vec<String> = (0..v).map(|k| format!("i{}", perm[c * v + k])).collect();
        let ins: Vec<&str> = slots.iter().map(String::as_str).collect();
        b = b.edge(&upper, &ins, &[&format!("m{c}")]);
    }
    let mids: Vec<String> = (0..u).map(|c| format!("m{c}")).collect();
    let mid_refs: Vec<&str> = mids.iter().map(String::as_str).collect();
    b = b.edge(&lower, &mid_refs, &["o1"]);
    Ok(b.finish()?)
}

/// The `n` rotations of `1..=n`.
pub fn cyclic_permutations(n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|s| (0..n).map(|k| ((k + s) % n) + 1).collect())
        .collect()
}

/// Behavior comparison against the formula-tree grids over every cyclic
/// permutation: the intersection of the CNF-tree behaviors reproduces the
/// primal `G(u,v)` behavior, the union of the DNF-tree behaviors the dual's.
pub fn cyclic_union_intersection(
    u: usize,
    v: usize,
) -> Result<(PartitionSet, PartitionSet), ConnectiveError> {
    let n = u * v;
    let mut inter: Option<PartitionSet> = None;
    let mut union: Option<PartitionSet> = None;
    for perm in cyclic_permutations(n) {
        let cnf_b = cnf_structure(&perm, u, v)?.behavior()?;
        let dnf_b = dnf_structure(&perm, u, v)?.behavior()?;
        inter = Some(match inter {
            None => cnf_b,
            Some(acc) => acc.intersection(&cnf_b)?,
        });
        union = Some(match union {
            None => dnf_b,
            Some(acc) => acc.union(&dnf_b)?,
        });
    }
    Ok((inter.expect("n >= 1"), union.expect("n >= 1")))
}

/// Result of a decomposability probe.
#[derive(Debug, Clone)]
pub struct ProbeOutcome {
    /// A formula tree over `{par, tensor}` whose behavior equals the target,
    /// if one exists.
    pub witness: Option<MStructure>,
    /// Leaf-labeled binary trees inspected (shapes times leaf orderings).
    pub candidates: usize,
}

const PROBE_MAX_INPUTS: usize = 5;

/// Exhaustively searches the formula trees over `{par, tensor}` with
/// `n_inputs` leaves (ports `i1..in`, output `o1`) for one whose behavior
/// equals `target`. Within each leaf-labeled tree every assignment of
/// connectives to internal nodes is tried.
pub fn nondecomposability_probe(
    target: &PartitionSet,
    n_inputs: usize,
) -> Result<ProbeOutcome, ConnectiveError> {
    if n_inputs == 0 || n_inputs > PROBE_MAX_INPUTS {
        return Err(ConnectiveError::ProbeTooLarge { max: PROBE_MAX_INPUTS, got: n_inputs });
    }
    let shapes = tree_shapes(n_inputs);
    let mut candidates = 0;
    let mut perm: Vec<usize> = (1..=n_inputs).collect();
    loop {
        for shape in &shapes {
            candidates += 1;
            let internal = n_inputs - 1;
            for labels in 0u32..(1u32 << internal) {
                let s = build_tree(shape, &perm, labels)?;
                if &s.behavior()? == target {
                    return Ok(ProbeOutcome { witness: Some(s), candidates });
                }
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(ProbeOutcome { witness: None, candidates })
}

#[derive(Debug, Clone)]
enum Shape {
    Leaf,
    Node(Box<Shape>, Box<Shape>),
}

fn tree_shapes(n: usize) -> Vec<Shape> {
    if n == 1 {
        return vec![Shape::Leaf];
    }
    let mut out = Vec::new();
    for k in 1..n {
        for l in tree_shapes(k) {
            for r in tree_shapes(n - k) {
                out.push(Shape::Node(Box::new(l.clone()), Box::new(r)));
            }
        }
    }
    out
}

fn build_tree(shape: &Shape, perm: &[usize], labels: u32) -> Result<MStructure, ConnectiveError> {
    let mut b = StructureBuilder::with_signature(Signature::mll());
    for &k in perm {
        b = b.vertex(&format!("i{k}"));
    }
    if matches!(shape, Shape::Leaf) {
        let b = b
            .custom(LinkType::tensor_n(1)?)
            .vertex("o1")
            .edge("tensor_1", &[&format!("i{}", perm[0])], &["o1"]);
        return Ok(b.finish()?);
    }
    fn go(
        shape: &Shape,
        perm: &[usize],
        labels: u32,
        next_leaf: &mut usize,
        next_node: &mut usize,
        b: StructureBuilder,
        is_root: bool,
    ) -> (StructureBuilder, String) {
        match shape {
            Shape::Leaf => {
                let name = format!("i{}", perm[*next_leaf]);
                *next_leaf += 1;
                (b, name)
            }
            Shape::Node(l, r) => {
                let my_id = *next_node;
                *next_node += 1;
                let (b, lv) = go(l, perm, labels, next_leaf, next_node, b, false);
                let (b, rv) = go(r, perm, labels, next_leaf, next_node, b, false);
                let out = if is_root { "o1".to_string() } else { format!("n{my_id}") };
                let ty = if labels >> my_id & 1 == 0 { "tensor" } else { "par" };
                let b = b.vertex(&out).edge(ty, &[&lv, &rv], &[&out]);
                (b, out)
            }
        }
    }
    let mut next_leaf = 0;
    let mut next_node = 0;
    let (b, _) = go(shape, perm, labels, &mut next_leaf, &mut next_node, b, true);
    Ok(b.finish()?)
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mstructure::formal_ports;
    use crate::partitions::{sets_orthogonal, OrthMode};
    use std::collections::BTreeMap;

    fn part(blocks: &[&[&str]]) -> Partition {
        Partition::new(blocks.iter().map(|b| b.iter().copied())).unwrap()
    }

    fn pset(ps: &[&[&[&str]]]) -> PartitionSet {
        PartitionSet::new(ps.iter().map(|p| part(p))).unwrap()
    }

    #[test]
    fn basic_partitions_2_2() {
        let got = basic_partitions(2, 2).unwrap();
        let expect = pset(&[&[&["1", "2"], &["3", "4"]], &[&["1", "4"], &["2", "3"]]]);
        assert_eq!(got, expect);
    }

    #[test]
    fn basic_partitions_2_3_are_three_cyclic_triples() {
        let got = basic_partitions(2, 3).unwrap();
        assert_eq!(got.len(), 3);
        let expect = pset(&[
            &[&["1", "2", "3"], &["4", "5", "6"]],
            &[&["1", "5", "6"], &["2", "3", "4"]],
            &[&["1", "2", "6"], &["3", "4", "5"]],
        ]);
        assert_eq!(got, expect);
        // Restricting a member to any of its blocks gives that block.
        for p in got.iter() {
            for b in p.blocks() {
                let sub: BTreeSet<ElemId> = b.iter().cloned().collect();
                assert_eq!(p.restrict(&sub).unwrap().block_count(), 1);
            }
        }
    }

    #[test]
    fn primality_is_enforced() {
        assert!(matches!(basic_partitions(4, 2), Err(ConnectiveError::NotPrime(4))));
        assert!(matches!(basic_partitions(1, 2), Err(ConnectiveError::TooSmall(1))));
        assert!(basic_partitions_unchecked(4, 2).is_ok());
    }

    #[test]
    fn psbp_2_2_membership() {
        let got = psbp(2, 2).unwrap();
        let expect = pset(&[
            &[&["1", "3"], &["2"], &["4"]],
            &[&["1"], &["2", "4"], &["3"]],
        ]);
        assert_eq!(got, expect);
        assert!(
            sets_orthogonal(&got, &basic_partitions(2, 2).unwrap(), OrthMode::Strong).unwrap()
        );
    }

    #[test]
    fn girard_2_2_primal_behavior() {
        let g = girard_type(2, 2, Polarity::Primal).unwrap();
        let expect = pset(&[
            &[&["i1", "i3", "o1"], &["i2"], &["i4"]],
            &[&["i1"], &["i2", "i4", "o1"], &["i3"]],
        ]);
        assert_eq!(g.link.behavior(), &expect);
        assert_eq!((g.link.n_in, g.link.n_out), (4, 1));
    }

    #[test]
    fn girard_2_2_dual_behavior() {
        let g = girard_type(2, 2, Polarity::Dual).unwrap();
        let expect = pset(&[
            &[&["i1", "i2", "o1"], &["i3", "i4"]],
            &[&["i1", "i2"], &["i3", "i4", "o1"]],
            &[&["i1", "i4", "o1"], &["i2", "i3"]],
            &[&["i1", "i4"], &["i2", "i3", "o1"]],
        ]);
        assert_eq!(g.link.behavior(), &expect);
        assert_eq!(g.link.behavior().len(), 4);
    }

    #[test]
    fn primal_input_restriction_lies_in_psbp() {
        let g = girard_type(2, 2, Polarity::Primal).unwrap();
        let inputs: BTreeSet<ElemId> = formal_ports(4, 0).into_iter().collect();
        let restricted = g.link.behavior().restrict(&inputs).unwrap();
        let map: BTreeMap<ElemId, ElemId> = (1..=4)
            .map(|k| (ElemId::new(format!("i{k}")), ElemId::new(k.to_string())))
            .collect();
        let renamed = restricted.rename(&map).unwrap();
        let pool = psbp(2, 2).unwrap();
        for p in renamed.iter() {
            assert!(pool.contains(p));
        }
    }

    #[test]
    fn girard_names_round_trip() {
        for (u, v, pol) in [(2, 2, Polarity::Primal), (2, 3, Polarity::Dual)] {
            let name = girard_name(u, v, pol);
            assert_eq!(parse_girard_name(&name), Some((u, v, pol)));
        }
        assert_eq!(parse_girard_name("par_3"), None);
    }

    #[test]
    fn cnf_dnf_structures_for_identity_permutation() {
        let perm = [1, 2, 3, 4];
        let cnf = cnf_structure(&perm, 2, 2).unwrap();
        let expect_cnf = pset(&[
            &[&["i1", "i3", "o1"], &["i2"], &["i4"]],
            &[&["i1", "i4", "o1"], &["i2"], &["i3"]],
            &[&["i2", "i3", "o1"], &["i1"], &["i4"]],
            &[&["i1"], &["i2", "i4", "o1"], &["i3"]],
        ]);
        assert_eq!(cnf.behavior().unwrap(), expect_cnf);

        let dnf = dnf_structure(&perm, 2, 2).unwrap();
        let expect_dnf = pset(&[
            &[&["i1", "i2", "o1"], &["i3", "i4"]],
            &[&["i1", "i2"], &["i3", "i4", "o1"]],
        ]);
        assert_eq!(dnf.behavior().unwrap(), expect_dnf);

        assert!(matches!(
            cnf_structure(&[1, 1, 2, 3], 2, 2),
            Err(ConnectiveError::NotAPermutation(..))
        ));
    }

    #[test]
    fn cnf_behavior_size_matches_switching_collapse() {
        let perm = [1, 2, 3, 4];
        let cnf = cnf_structure(&perm, 2, 2).unwrap();
        assert_eq!(cnf.switch_space(), 4);
        assert_eq!(cnf.behavior().unwrap().len(), 4);
    }

    #[test]
    fn cyclic_union_intersection_2_2_matches_girard() {
        let (inter, union) = cyclic_union_intersection(2, 2).unwrap();
        assert_eq!(cyclic_permutations(4).len(), 4);
        let primal = girard_type(2, 2, Polarity::Primal).unwrap();
        let dual = girard_type(2, 2, Polarity::Dual).unwrap();
        assert_eq!(&inter, primal.link.behavior());
        assert_eq!(&union, dual.link.behavior());
    }

    #[test]
    fn every_2_2_grid_behavior_member_has_three_blocks() {
        for perm in cyclic_permutations(4) {
            let b = cnf_structure(&perm, 2, 2).unwrap().behavior().unwrap();
            for p in b.iter() {
                assert_eq!(p.block_count(), 3);
            }
        }
    }

    #[test]
    fn probe_finds_its_own_tree() {
        // Behavior of i1 (x) (i2 par i3).
        let target = pset(&[
            &[&["i1", "i2", "o1"], &["i3"]],
            &[&["i1", "i3", "o1"], &["i2"]],
        ]);
        let out = nondecomposability_probe(&target, 3).unwrap();
        let w = out.witness.expect("tree exists");
        assert_eq!(w.behavior().unwrap(), target);
    }

    #[test]
    fn probe_rejects_girard_behaviors_on_four_leaves() {
        for pol in [Polarity::Primal, Polarity::Dual] {
            let g = girard_type(2, 2, pol).unwrap();
            let out = nondecomposability_probe(g.link.behavior(), 4).unwrap();
            assert!(out.witness.is_none());
            assert_eq!(out.candidates, 120);
        }
    }

    #[test]
    fn probe_bounds_input_count() {
        let target = pset(&[&[&["i1", "o1"]]]);
        assert!(matches!(
            nondecomposability_probe(&target, 6),
            Err(ConnectiveError::ProbeTooLarge { .. })
        ));
    }

    #[test]
    fn primal_dual_basic_families_are_orthogonal() {
        for (u, v) in [(2, 2), (2, 3)] {
            let base = basic_partitions(u, v).unwrap();
            let ortho = psbp(u, v).unwrap();
            assert!(sets_orthogonal(&ortho, &base, OrthMode::Strong).unwrap());
        }
    }
}
