//! Expansion: gluing a guest component's outputs onto a host component's
//! inputs so that the composite is again a component.
//!
//! Two routes decide expandability. [`expands_direct`] composes and runs the
//! full component check over the composite's switchings. The check behind
//! [`expands_characterized`] works on the two behaviors alone and never
//! enumerates the composite's tests:
//!
//! - (a) the composite border is non-empty;
//! - (b) the behaviors restricted to the glued set are pairwise weakly
//!   orthogonal, which rules out every cycle a composite test could form;
//! - (c) for every pair of behavior members and every glued vertex, the
//!   component of that vertex in the merged border partition reaches the
//!   composite border.
//!
//! Condition (c) deliberately merges the two border partitions instead of
//! asking for a one-sided connection: a glued vertex may reach the border
//! only through a chain that alternates sides across other glued vertices,
//! and such composites are still components.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::hypergraph::VertexId;
use crate::mstructure::{MStructure, StructureError};
use crate::partitions::{weakly_orthogonal, Partition, PartitionError, UnionFind};

#[derive(Debug, Error)]
pub enum ExpansionError {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("expansion site is empty")]
    EmptySite,
    #[error("expansion site repeats vertex {0}")]
    NonInjectiveSite(VertexId),
    #[error("{0} is not an input of the host")]
    NotHostInput(VertexId),
    #[error("{0} is not an output of the guest")]
    NotGuestOutput(VertexId),
    #[error("site does not expand: condition ({}) fails", .0.tag())]
    NotExpandable(ConditionFailure),
}

/// A candidate gluing: pairs of (host input, guest output) to identify.
#[derive(Debug, Clone)]
pub struct ExpansionSite<'a> {
    pub host: &'a MStructure,
    pub guest: &'a MStructure,
    pub pairs: Vec<(VertexId, VertexId)>,
}

impl<'a> ExpansionSite<'a> {
    pub fn new(
        host: &'a MStructure,
        guest: &'a MStructure,
        pairs: Vec<(VertexId, VertexId)>,
    ) -> Self {
        ExpansionSite { host, guest, pairs }
    }

    fn validate(&self) -> Result<(), ExpansionError> {
        if self.pairs.is_empty() {
            return Err(ExpansionError::EmptySite);
        }
        let host_inputs = self.host.inputs();
        let guest_outputs = self.guest.outputs();
        let mut hs = BTreeSet::new();
        let mut gs = BTreeSet::new();
        for (h, g) in &self.pairs {
            if !host_inputs.contains(h) {
                return Err(ExpansionError::NotHostInput(h.clone()));
            }
            if !guest_outputs.contains(g) {
                return Err(ExpansionError::NotGuestOutput(g.clone()));
            }
            if !hs.insert(h.clone()) {
                return Err(ExpansionError::NonInjectiveSite(h.clone()));
            }
            if !gs.insert(g.clone()) {
                return Err(ExpansionError::NonInjectiveSite(g.clone()));
            }
        }
        Ok(())
    }
}

/// Which of the three characterization conditions failed, with its witness.
#[derive(Debug, Clone)]
pub enum ConditionFailure {
    /// (a): gluing would consume the whole border.
    BorderEmpty,
    /// (b): a pair of restricted behavior members with a cyclic incidence
    /// graph.
    RestrictionClash { host: Partition, guest: Partition },
    /// (c): a glued vertex cut off from the composite border under some pair
    /// of behavior members.
    BorderReach { x: VertexId, host: Partition, guest: Partition },
}

impl ConditionFailure {
    pub fn tag(&self) -> &'static str {
        match self {
            ConditionFailure::BorderEmpty => "a",
            ConditionFailure::RestrictionClash { .. } => "b",
            ConditionFailure::BorderReach { .. } => "c",
        }
    }
}

/// Outcome of the behavior-level check, with the instrumentation the
/// complexity bound is stated in.
#[derive(Debug, Clone)]
pub struct ExpandCheck {
    pub expands: bool,
    pub failed: Option<ConditionFailure>,
    /// Pairwise orthogonality tests performed; at most |B(host)|·|B(guest)|.
    pub orthogonality_tests: usize,
}

/// Border elements of the two sides in a shared namespace: glued guest
/// outputs collapse onto their host input.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Port {
    Host(VertexId),
    Guest(VertexId),
}

/// The semantic oracle: compose, then run the component check on the result.
pub fn expands_direct(site: &ExpansionSite) -> Result<bool, ExpansionError> {
    site.validate()?;
    let (composite, _) = site.host.compose(site.guest, &site.pairs)?;
    Ok(composite.is_component()?)
}

/// Behavior-level equivalent of [`expands_direct`] for component operands.
/// Enumerates the switchings of the two sides once each (inside `behavior`)
/// and never those of the composite.
pub fn expands_characterized(site: &ExpansionSite) -> Result<ExpandCheck, ExpansionError> {
    site.validate()?;
    let host_behavior = site.host.behavior()?;
    let guest_behavior = site.guest.behavior()?;

    let host_border = site.host.border();
    let guest_border = site.guest.border();
    let x_host: BTreeSet<VertexId> = site.pairs.iter().map(|(h, _)| h.clone()).collect();
    let x_guest: BTreeSet<VertexId> = site.pairs.iter().map(|(_, g)| g.clone()).collect();
    let guest_to_host: BTreeMap<VertexId, VertexId> =
        site.pairs.iter().map(|(h, g)| (g.clone(), h.clone())).collect();

    let port_of_guest = |g: &VertexId| -> Port {
        match guest_to_host.get(g) {
            Some(h) => Port::Host(h.clone()),
            None => Port::Guest(g.clone()),
        }
    };

    // Composite border: unglued border vertices of either side, plus glued
    // vertices that stay on the border because one side leaves them isolated.
    let isolated = |s: &MStructure, v: &VertexId| {
        s.graph().edges().iter().all(|e| e.border().all(|w| w != v))
    };
    let mut target: BTreeSet<Port> = BTreeSet::new();
    for v in &host_border {
        if !x_host.contains(v) {
            target.insert(Port::Host(v.clone()));
        }
    }
    for v in &guest_border {
        if !x_guest.contains(v) {
            target.insert(Port::Guest(v.clone()));
        }
    }
    for (h, g) in &site.pairs {
        if isolated(site.host, h) || isolated(site.guest, g) {
            target.insert(Port::Host(h.clone()));
        }
    }
    if target.is_empty() {
        return Ok(ExpandCheck {
            expands: false,
            failed: Some(ConditionFailure::BorderEmpty),
            orthogonality_tests: 0,
        });
    }

    // (b): restrictions to the glued set must be pairwise weakly orthogonal.
    let host_restricted = host_behavior.restrict(&x_host)?;
    let guest_restricted = guest_behavior.restrict(&x_guest)?.rename(&guest_to_host)?;
    let mut orthogonality_tests = 0;
    for p in host_restricted.iter() {
        for q in guest_restricted.iter() {
            orthogonality_tests += 1;
            if !weakly_orthogonal(p, q)? {
                return Ok(ExpandCheck {
                    expands: false,
                    failed: Some(ConditionFailure::RestrictionClash {
                        host: p.clone(),
                        guest: q.clone(),
                    }),
                    orthogonality_tests,
                });
            }
        }
    }

    // (c): under every pair of behavior members, every glued vertex must sit
    // in a merged block that reaches the composite border.
    let mut ports: Vec<Port> = host_border.iter().map(|v| Port::Host(v.clone())).collect();
    for v in &guest_border {
        let p = port_of_guest(v);
        if !ports.contains(&p) {
            ports.push(p);
        }
    }
    let index: BTreeMap<&Port, usize> = ports.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let target_idx: BTreeSet<usize> = target.iter().map(|p| index[p]).collect();
    let x_ports: Vec<(VertexId, usize)> = x_host
        .iter()
        .map(|h| (h.clone(), index[&Port::Host(h.clone())]))
        .collect();

    for p in host_behavior.iter() {
        for q in guest_behavior.iter() {
            let mut uf = UnionFind::new(ports.len());
            for block in p.blocks() {
                let first = index[&Port::Host(block[0].clone())];
                for v in &block[1..] {
                    uf.union(first, index[&Port::Host(v.clone())]);
                }
            }
            for block in q.blocks() {
                let first = index[&port_of_guest(&block[0])];
                for v in &block[1..] {
                    uf.union(first, index[&port_of_guest(v)]);
                }
            }
            let mut roots: BTreeSet<usize> = BTreeSet::new();
            for &t in &target_idx {
                roots.insert(uf.find(t));
            }
            for (x, xi) in &x_ports {
                if !roots.contains(&uf.find(*xi)) {
                    return Ok(ExpandCheck {
                        expands: false,
                        failed: Some(ConditionFailure::BorderReach {
                            x: x.clone(),
                            host: p.clone(),
                            guest: q.clone(),
                        }),
                        orthogonality_tests,
                    });
                }
            }
        }
    }

    Ok(ExpandCheck { expands: true, failed: None, orthogonality_tests })
}

/// Composes the site after checking [`expands_characterized`]; the error
/// carries the violated condition.
pub fn expand(site: &ExpansionSite) -> Result<MStructure, ExpansionError> {
    let check = expands_characterized(site)?;
    if let Some(failure) = check.failed {
        return Err(ExpansionError::NotExpandable(failure));
    }
    let (composite, _) = site.host.compose(site.guest, &site.pairs)?;
    debug_assert!(composite.is_component().unwrap_or(false));
    Ok(composite)
}

/// Composes and reports whether the composite is transitory. When both sides
/// are transitory components the verdict is always true.
pub fn transitory_preserved(site: &ExpansionSite) -> Result<bool, ExpansionError> {
    let composite = expand(site)?;
    let verdict = composite.is_transitory()?;
    debug_assert!(
        verdict
            || !(site.host.is_transitory().unwrap_or(false)
                && site.guest.is_transitory().unwrap_or(false))
    );
    Ok(verdict)
}
