//! Methods as bipoles, their compilation to transitory components, and
//! execution by structure expansion.
//!
//! A method's head atoms become the outputs of its compiled structure and
//! glue onto matching inputs of the execution state; its body atoms become
//! the new open inputs. A compiled standard method is a header (one axiom per
//! head atom under a tensor collector), a body (one par per clause under a
//! tensor collector), a tensor joining the two, and a unary par-bullet
//! discarding the joint. Facts omit the body. Generalized methods replace
//! the body or the synchronizer with a `G(u,v)` link.
//!
//! The search bound limits derivation depth: seed goals sit at depth zero and
//! the body goals of an application sit one level below the deepest goal it
//! consumed.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::connectives::{ConnectiveError, GirardType, Polarity};
use crate::expansion::{expand, expands_characterized, ExpansionError, ExpansionSite};
use crate::hypergraph::{GraphError, Hypergraph, VertexId};
use crate::mstructure::{MStructure, Signature, StructureBuilder, StructureError};
use crate::partitions::{ElemId, PartitionError, PartitionSet};

#[derive(Debug, Error)]
pub enum ProgramError {
    #[error("method head contains no atom")]
    EmptyHead,
    #[error("method body contains an empty clause")]
    EmptyClause,
    #[error("atom name is empty")]
    EmptyAtomName,
    #[error("method {0} already defined")]
    DuplicateMethod(String),
    #[error("unknown method {0}")]
    UnknownMethod(String),
    #[error("method {name}: {link} needs {expect} {role} atoms, got {got}")]
    GeneralizedArity {
        name: String,
        link: String,
        role: &'static str,
        expect: usize,
        got: usize,
    },
    #[error("site is not applicable: {0}")]
    NotApplicable(#[from] ExpansionError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Connective(#[from] ConnectiveError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

/// A propositional atom; heads are positive, bodies negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub name: String,
    pub sign: Sign,
}

impl Atom {
    pub fn positive(name: impl Into<String>) -> Result<Atom, ProgramError> {
        Atom::checked(name.into(), Sign::Positive)
    }

    pub fn negative(name: impl Into<String>) -> Result<Atom, ProgramError> {
        Atom::checked(name.into(), Sign::Negative)
    }

    fn checked(name: String, sign: Sign) -> Result<Atom, ProgramError> {
        if name.is_empty() {
            return Err(ProgramError::EmptyAtomName);
        }
        Ok(Atom { name, sign })
    }
}

/// How the header and body of a method are synchronized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Synchro {
    Standard,
    Generalized(GirardType),
}

/// A method: a trigger of head atoms and a CNF body of clauses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Method {
    pub name: String,
    pub head: Vec<Atom>,
    pub body: Vec<Vec<Atom>>,
    pub synchro: Synchro,
}

impl Method {
    pub fn new(
        name: impl Into<String>,
        head: &[&str],
        body: &[&[&str]],
    ) -> Result<Method, ProgramError> {
        Method::with_synchro(name, head, body, Synchro::Standard)
    }

    pub fn fact(name: impl Into<String>, head: &[&str]) -> Result<Method, ProgramError> {
        Method::new(name, head, &[])
    }

    pub fn generalized(
        name: impl Into<String>,
        head: &[&str],
        body: &[&[&str]],
        link: GirardType,
    ) -> Result<Method, ProgramError> {
        Method::with_synchro(name, head, body, Synchro::Generalized(link))
    }

    fn with_synchro(
        name: impl Into<String>,
        head: &[&str],
        body: &[&[&str]],
        synchro: Synchro,
    ) -> Result<Method, ProgramError> {
        let name = name.into();
        if head.is_empty() {
            return Err(ProgramError::EmptyHead);
        }
        let head = head
            .iter()
            .map(|a| Atom::positive(*a))
            .collect::<Result<Vec<_>, _>>()?;
        let mut clauses = Vec::new();
        for clause in body {
            if clause.is_empty() {
                return Err(ProgramError::EmptyClause);
            }
            clauses.push(
                clause
                    .iter()
                    .map(|a| Atom::negative(*a))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        let m = Method { name, head, body: clauses, synchro };
        m.check_arities()?;
        Ok(m)
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    fn body_atoms(&self) -> Vec<&Atom> {
        self.body.iter().flatten().collect()
    }

    fn check_arities(&self) -> Result<(), ProgramError> {
        let Synchro::Generalized(g) = &self.synchro else {
            return Ok(());
        };
        let n = g.arity();
        let fail = |role: &'static str, expect: usize, got: usize| {
            Err(ProgramError::GeneralizedArity {
                name: self.name.clone(),
                link: g.name().to_string(),
                role,
                expect,
                got,
            })
        };
        match g.polarity {
            Polarity::Primal => {
                let got = self.body_atoms().len();
                if got != n {
                    return fail("body", n, got);
                }
            }
            Polarity::Dual => {
                let half = n / 2;
                if self.head.len() != half {
                    return fail("head", half, self.head.len());
                }
                let got = self.body_atoms().len();
                if got != half {
                    return fail("body", half, got);
                }
            }
        }
        Ok(())
    }
}

/// Compiles a method to its structure: outputs labeled by head atoms, inputs
/// by body atoms. The result is always a transitory component.
pub fn compile_method(method: &Method) -> Result<MStructure, ProgramError> {
    let mut arities: BTreeSet<usize> = BTreeSet::new();
    arities.insert(1);
    arities.insert(method.head.len());
    for clause in &method.body {
        arities.insert(clause.len());
    }
    arities.insert(method.body.len().max(1));
    let mut b = StructureBuilder::with_signature(Signature::builtin(arities)?);
    if let Synchro::Generalized(g) = &method.synchro {
        b = b.custom(g.link.clone());
    }

    // Header: one axiom per head atom; the free axiom ends are the outputs,
    // the dual ends feed the collector or the generalized link.
    for (j, atom) in method.head.iter().enumerate() {
        b = b
            .vertex(&format!("d{j}"))
            .labeled(&format!("h{j}"), &atom.name)
            .edge("ax", &[], &[&format!("d{j}"), &format!("h{j}")]);
    }
    let duals: Vec<String> = (0..method.head.len()).map(|j| format!("d{j}")).collect();
    let dual_refs: Vec<&str> = duals.iter().map(String::as_str).collect();

    match &method.synchro {
        Synchro::Standard => {
            b = b
                .vertex("hd")
                .edge(&format!("tensor_{}", method.head.len()), &dual_refs, &["hd"]);
            if method.is_fact() {
                b = b.edge("par_bullet_1", &["hd"], &[]);
                return Ok(b.finish()?);
            }
            for (c, clause) in method.body.iter().enumerate() {
                for (k, atom) in clause.iter().enumerate() {
                    b = b.labeled(&format!("b{c}_{k}"), &atom.name);
                }
                let ins: Vec<String> = (0..clause.len()).map(|k| format!("b{c}_{k}")).collect();
                let in_refs: Vec<&str> = ins.iter().map(String::as_str).collect();
                b = b
                    .vertex(&format!("p{c}"))
                    .edge(&format!("par_{}", clause.len()), &in_refs, &[&format!("p{c}")]);
            }
            let clause_outs: Vec<String> =
                (0..method.body.len()).map(|c| format!("p{c}")).collect();
            let clause_refs: Vec<&str> = clause_outs.iter().map(String::as_str).collect();
            b = b
                .vertex("bd")
                .edge(&format!("tensor_{}", method.body.len()), &clause_refs, &["bd"])
                .vertex("f")
                .edge("tensor", &["bd", "hd"], &["f"])
                .edge("par_bullet_1", &["f"], &[]);
            Ok(b.finish()?)
        }
        Synchro::Generalized(g) => {
            let body_atoms = method.body_atoms();
            for (i, atom) in body_atoms.iter().enumerate() {
                b = b.labeled(&format!("b{i}"), &atom.name);
            }
            match g.polarity {
                Polarity::Primal => {
                    // Body role: the link consumes every body atom; a cut
                    // joins its output with the header.
                    let ports: Vec<String> =
                        (0..body_atoms.len()).map(|i| format!("b{i}")).collect();
                    let port_refs: Vec<&str> = ports.iter().map(String::as_str).collect();
                    b = b.vertex("g").edge(g.name(), &port_refs, &["g"]);
                    if method.head.len() == 1 {
                        b = b.edge("cut", &["g", "d0"], &[]);
                    } else {
                        b = b
                            .vertex("hd")
                            .edge(&format!("tensor_{}", method.head.len()), &dual_refs, &["hd"])
                            .edge("cut", &["g", "hd"], &[]);
                    }
                    Ok(b.finish()?)
                }
                Polarity::Dual => {
                    // Synchronizer role: ports alternate body atom and header
                    // dual; the output is discarded.
                    let mut ports: Vec<String> = Vec::new();
                    for i in 0..body_atoms.len() {
                        ports.push(format!("b{i}"));
                        ports.push(format!("d{i}"));
                    }
                    let port_refs: Vec<&str> = ports.iter().map(String::as_str).collect();
                    b = b
                        .vertex("g")
                        .edge(g.name(), &port_refs, &["g"])
                        .edge("par_bullet_1", &["g"], &[]);
                    Ok(b.finish()?)
                }
            }
        }
    }
}

/// A program: named methods over a shared signature.
#[derive(Debug, Clone, Default)]
pub struct Program {
    methods: BTreeMap<String, Method>,
    signature: Signature,
}

impl Program {
    pub fn new() -> Self {
        Program { methods: BTreeMap::new(), signature: Signature::mll() }
    }

    pub fn add_method(&mut self, method: Method) -> Result<(), ProgramError> {
        if self.methods.contains_key(&method.name) {
            return Err(ProgramError::DuplicateMethod(method.name));
        }
        if let Synchro::Generalized(g) = &method.synchro {
            self.signature.register(g.link.clone());
        }
        self.methods.insert(method.name.clone(), method);
        Ok(())
    }

    pub fn register_link(&mut self, g: &GirardType) {
        self.signature.register(g.link.clone());
    }

    pub fn get(&self, name: &str) -> Option<&Method> {
        self.methods.get(name)
    }

    pub fn methods(&self) -> impl Iterator<Item = &Method> {
        self.methods.values()
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn is_empty(&self) -> bool {
        self.methods.is_empty()
    }
}

/// One applied step: the method and the (state input, guest output) pairs it
/// was glued on.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TraceStep {
    pub method: String,
    pub glued: Vec<(VertexId, VertexId)>,
}

/// An execution state: the current structure, the application trace, and the
/// derivation depth of each open input.
#[derive(Debug, Clone)]
pub struct ExecutionState {
    pub structure: MStructure,
    pub trace: Vec<TraceStep>,
    depths: BTreeMap<VertexId, usize>,
    deepest: usize,
}

impl ExecutionState {
    /// The seed for a goal list: an edgeless structure with one labeled
    /// vertex per goal, each both input and output, at depth zero.
    pub fn seed<S: AsRef<str>>(goals: &[S]) -> Result<ExecutionState, ProgramError> {
        let mut graph = Hypergraph::new();
        let mut depths = BTreeMap::new();
        for goal in goals {
            let name = goal.as_ref();
            if name.is_empty() {
                return Err(ProgramError::EmptyAtomName);
            }
            let mut id = VertexId::new(name);
            let mut k = 1;
            while graph.has_vertex(&id) {
                id = VertexId::new(format!("{name}~{k}"));
                k += 1;
            }
            graph.add_vertex(id.clone(), Some(name))?;
            depths.insert(id, 0);
        }
        let structure = MStructure::new(graph, &Signature::mll())?;
        Ok(ExecutionState { structure, trace: Vec::new(), depths, deepest: 0 })
    }

    /// Wraps an existing structure as a state; its inputs start at depth
    /// zero.
    pub fn from_structure(structure: MStructure) -> ExecutionState {
        let depths = structure.inputs().into_iter().map(|v| (v, 0)).collect();
        ExecutionState { structure, trace: Vec::new(), depths, deepest: 0 }
    }

    pub fn open_goals(&self) -> BTreeSet<VertexId> {
        self.structure.inputs()
    }

    pub fn is_final(&self) -> bool {
        self.structure.inputs().is_empty()
    }

    /// Deepest derivation level among the currently open goals.
    pub fn open_depth(&self) -> usize {
        self.depths.values().copied().max().unwrap_or(0)
    }

    /// Deepest derivation level any goal ever reached along this trace.
    pub fn depth(&self) -> usize {
        self.deepest
    }

    /// Verdicts the engine reports on final states; it does not decide
    /// whether success additionally requires a net.
    pub fn report(&self) -> Result<StateReport, ProgramError> {
        Ok(StateReport {
            component: self.structure.is_component()?,
            transitory: self.structure.is_transitory()?,
            net: self.structure.is_net()?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateReport {
    pub component: bool,
    pub transitory: bool,
    pub net: bool,
}

/// All label-respecting injective matchings of the compiled method's outputs
/// onto the state's inputs that pass the expansion check, in canonical
/// order. Site pairs are (state input, template output).
pub fn applicable_sites(
    state: &ExecutionState,
    compiled: &MStructure,
) -> Result<Vec<Vec<(VertexId, VertexId)>>, ProgramError> {
    let outputs: Vec<VertexId> = compiled.outputs().into_iter().collect();
    let inputs: Vec<VertexId> = state.structure.inputs().into_iter().collect();
    if outputs.is_empty() || outputs.len() > inputs.len() {
        return Ok(Vec::new());
    }
    let mut sites = Vec::new();
    let mut used: Vec<bool> = vec![false; inputs.len()];
    let mut current: Vec<(VertexId, VertexId)> = Vec::new();
    assign_outputs(
        0,
        &outputs,
        &inputs,
        state,
        compiled,
        &mut used,
        &mut current,
        &mut sites,
    );
    sites.sort();
    sites.dedup();
    let mut applicable = Vec::new();
    for site in sites {
        let check =
            expands_characterized(&ExpansionSite::new(&state.structure, compiled, site.clone()))?;
        if check.expands {
            applicable.push(site);
        }
    }
    Ok(applicable)
}

#[allow(clippy::too_many_arguments)]
fn assign_outputs(
    k: usize,
    outputs: &[VertexId],
    inputs: &[VertexId],
    state: &ExecutionState,
    compiled: &MStructure,
    used: &mut Vec<bool>,
    current: &mut Vec<(VertexId, VertexId)>,
    sites: &mut Vec<Vec<(VertexId, VertexId)>>,
) {
    if k == outputs.len() {
        let mut site = current.clone();
        site.sort();
        sites.push(site);
        return;
    }
    let want = compiled.graph().label(&outputs[k]);
    for (i, input) in inputs.iter().enumerate() {
        if used[i] || state.structure.graph().label(input) != want {
            continue;
        }
        used[i] = true;
        current.push((input.clone(), outputs[k].clone()));
        assign_outputs(k + 1, outputs, inputs, state, compiled, used, current, sites);
        current.pop();
        used[i] = false;
    }
}

/// Applies a method at a site (pairs of state input and template output),
/// gluing a freshly renamed copy of the compiled method.
pub fn apply(
    state: &ExecutionState,
    program: &Program,
    method_name: &str,
    site: &[(VertexId, VertexId)],
) -> Result<ExecutionState, ProgramError> {
    let method = program
        .get(method_name)
        .ok_or_else(|| ProgramError::UnknownMethod(method_name.to_string()))?;
    let template = compile_method(method)?;
    let step = state.trace.len() + 1;
    let prefix = format!("{method_name}#{step}.");
    let copy_graph = template
        .graph()
        .renamed(|v| VertexId::new(format!("{prefix}{v}")))?;
    let copy = MStructure::new(copy_graph, template.signature())?;
    let renamed_site: Vec<(VertexId, VertexId)> = site
        .iter()
        .map(|(h, g)| (h.clone(), VertexId::new(format!("{prefix}{g}"))))
        .collect();
    let composite = expand(&ExpansionSite::new(&state.structure, &copy, renamed_site.clone()))?;

    let consumed_depth = site
        .iter()
        .map(|(h, _)| state.depths.get(h).copied().unwrap_or(0))
        .max()
        .unwrap_or(0);
    let mut depths = state.depths.clone();
    let mut deepest = state.deepest;
    for (h, _) in site {
        depths.remove(h);
    }
    for input in composite.inputs() {
        if !depths.contains_key(&input) {
            depths.insert(input, consumed_depth + 1);
            deepest = deepest.max(consumed_depth + 1);
        }
    }
    let mut trace = state.trace.clone();
    trace.push(TraceStep { method: method_name.to_string(), glued: renamed_site });
    let next = ExecutionState { structure: composite, trace, depths, deepest };
    debug_assert!(next.structure.is_component().unwrap_or(false));
    Ok(next)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Depth-first, stop at the first input-free state.
    FirstSolution,
    /// Explore the whole bounded tree; all input-free states, canonically
    /// ordered by trace.
    AllSolutions,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub solutions: Vec<ExecutionState>,
    /// True when the depth bound cut off at least one applicable step, so an
    /// empty result does not mean "no solution".
    pub truncated: bool,
}

/// Bounded search over method applications from `seed`. `bound` limits the
/// derivation depth of created goals; facts close goals at any depth.
pub fn run(
    program: &Program,
    seed: &ExecutionState,
    strategy: Strategy,
    bound: usize,
) -> Result<RunOutcome, ProgramError> {
    let mut compiled: Vec<(String, MStructure, bool)> = Vec::new();
    for method in program.methods() {
        let c = compile_method(method)?;
        debug_assert!(c.is_transitory().unwrap_or(false));
        compiled.push((method.name.clone(), c, method.is_fact()));
    }
    let mut out = RunOutcome { solutions: Vec::new(), truncated: false };
    search(program, seed, &compiled, strategy, bound, &mut out)?;
    out.solutions
        .sort_by(|a, b| (a.trace.len(), &a.trace).cmp(&(b.trace.len(), &b.trace)));
    Ok(out)
}

fn search(
    program: &Program,
    state: &ExecutionState,
    compiled: &[(String, MStructure, bool)],
    strategy: Strategy,
    bound: usize,
    out: &mut RunOutcome,
) -> Result<bool, ProgramError> {
    if state.is_final() {
        out.solutions.push(state.clone());
        return Ok(strategy == Strategy::FirstSolution);
    }
    for (name, template, is_fact) in compiled {
        for site in applicable_sites(state, template)? {
            if !is_fact {
                let consumed = site
                    .iter()
                    .map(|(h, _)| state.depths.get(h).copied().unwrap_or(0))
                    .max()
                    .unwrap_or(0);
                if consumed + 1 > bound {
                    out.truncated = true;
                    continue;
                }
            }
            let next = apply(state, program, name, &site)?;
            if search(program, &next, compiled, strategy, bound, out)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// The behavior of the state's structure with border vertices renamed to
/// their atom labels (uniquified when labels repeat).
pub fn realizable_connections(state: &ExecutionState) -> Result<PartitionSet, ProgramError> {
    let behavior = state.structure.behavior()?;
    let mut map: BTreeMap<ElemId, ElemId> = BTreeMap::new();
    let mut taken: BTreeSet<String> = BTreeSet::new();
    for v in state.structure.border() {
        let base = state
            .structure
            .graph()
            .label(&v)
            .map(str::to_string)
            .unwrap_or_else(|| v.to_string());
        let mut name = base.clone();
        let mut k = 1;
        while taken.contains(&name) {
            name = format!("{base}~{k}");
            k += 1;
        }
        taken.insert(name.clone());
        map.insert(v, ElemId::new(name));
    }
    Ok(behavior.rename(&map)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectives::girard_type;
    use crate::partitions::Partition;

    fn part(blocks: &[&[&str]]) -> Partition {
        Partition::new(blocks.iter().map(|b| b.iter().copied())).unwrap()
    }

    fn pset(ps: &[&[&[&str]]]) -> PartitionSet {
        PartitionSet::new(ps.iter().map(|p| part(p))).unwrap()
    }

    fn concurrent_program() -> Program {
        let mut p = Program::new();
        p.add_method(Method::new("F", &["a"], &[&["b"], &["c"]]).unwrap()).unwrap();
        p.add_method(Method::new("G", &["b"], &[&["b1", "b2"]]).unwrap()).unwrap();
        p.add_method(Method::new("H", &["c"], &[&["c1"]]).unwrap()).unwrap();
        p.add_method(Method::fact("FB", &["b1", "b2"]).unwrap()).unwrap();
        p.add_method(Method::fact("FC", &["c1"]).unwrap()).unwrap();
        p
    }

    #[test]
    fn compiled_methods_are_transitory_components() {
        let program = concurrent_program();
        for m in program.methods() {
            let c = compile_method(m).unwrap();
            assert!(c.is_component().unwrap(), "{} not a component", m.name);
            assert!(c.is_transitory().unwrap(), "{} not transitory", m.name);
        }
    }

    #[test]
    fn compile_wire_like_method() {
        // Head c with body c1 behaves like a wire from c1 to c.
        let m = Method::new("H", &["c"], &[&["c1"]]).unwrap();
        let c = compile_method(&m).unwrap();
        let labels = |vs: BTreeSet<VertexId>| -> Vec<String> {
            vs.iter()
                .map(|v| c.graph().label(v).unwrap().to_string())
                .collect()
        };
        assert_eq!(labels(c.outputs()), vec!["c"]);
        assert_eq!(labels(c.inputs()), vec!["c1"]);
        let state = ExecutionState::from_structure(c);
        assert_eq!(
            realizable_connections(&state).unwrap(),
            pset(&[&[&["c", "c1"]]])
        );
    }

    #[test]
    fn compile_par_bodied_method_behavior() {
        let m = Method::new("G", &["b"], &[&["b1", "b2"]]).unwrap();
        let state = ExecutionState::from_structure(compile_method(&m).unwrap());
        assert_eq!(
            realizable_connections(&state).unwrap(),
            pset(&[&[&["b", "b1"], &["b2"]], &[&["b", "b2"], &["b1"]]])
        );
    }

    #[test]
    fn compile_two_clause_method_connects_everything() {
        let m = Method::new("F", &["a"], &[&["b"], &["c"]]).unwrap();
        let state = ExecutionState::from_structure(compile_method(&m).unwrap());
        assert_eq!(
            realizable_connections(&state).unwrap(),
            pset(&[&[&["a", "b", "c"]]])
        );
    }

    #[test]
    fn empty_head_and_empty_clause_are_rejected() {
        assert!(matches!(Method::new("X", &[], &[&["a"]]), Err(ProgramError::EmptyHead)));
        assert!(matches!(Method::new("X", &["a"], &[&[]]), Err(ProgramError::EmptyClause)));
    }

    #[test]
    fn sites_respect_labels_and_multiplicity() {
        let program = concurrent_program();
        let g = compile_method(program.get("G").unwrap()).unwrap();

        let state = ExecutionState::seed(&["b", "c"]).unwrap();
        assert_eq!(applicable_sites(&state, &g).unwrap().len(), 1);

        let twin = ExecutionState::seed(&["b", "b"]).unwrap();
        assert_eq!(applicable_sites(&twin, &g).unwrap().len(), 2);

        let none = ExecutionState::seed(&["x"]).unwrap();
        assert!(applicable_sites(&none, &g).unwrap().is_empty());
    }

    #[test]
    fn apply_consumes_goal_and_opens_body() {
        let program = concurrent_program();
        let seed = ExecutionState::seed(&["a"]).unwrap();
        let f = compile_method(program.get("F").unwrap()).unwrap();
        let sites = applicable_sites(&seed, &f).unwrap();
        assert_eq!(sites.len(), 1);
        let s1 = apply(&seed, &program, "F", &sites[0]).unwrap();
        let labels: BTreeSet<String> = s1
            .structure
            .inputs()
            .iter()
            .map(|v| s1.structure.graph().label(v).unwrap().to_string())
            .collect();
        assert_eq!(labels, ["b", "c"].map(str::to_string).into());
        assert_eq!(s1.depth(), 1);
        assert!(s1.structure.is_transitory().unwrap());
    }

    #[test]
    fn disjoint_applications_commute_up_to_isomorphism() {
        let program = concurrent_program();
        let seed = ExecutionState::seed(&["a"]).unwrap();
        let f = compile_method(program.get("F").unwrap()).unwrap();
        let s1 = apply(&seed, &program, "F", &applicable_sites(&seed, &f).unwrap()[0]).unwrap();
        let g = compile_method(program.get("G").unwrap()).unwrap();
        let h = compile_method(program.get("H").unwrap()).unwrap();

        let gh = {
            let s2 = apply(&s1, &program, "G", &applicable_sites(&s1, &g).unwrap()[0]).unwrap();
            apply(&s2, &program, "H", &applicable_sites(&s2, &h).unwrap()[0]).unwrap()
        };
        let hg = {
            let s2 = apply(&s1, &program, "H", &applicable_sites(&s1, &h).unwrap()[0]).unwrap();
            apply(&s2, &program, "G", &applicable_sites(&s2, &g).unwrap()[0]).unwrap()
        };
        assert!(gh.structure.graph().isomorphism(hg.structure.graph()).is_some());
    }

    #[test]
    fn run_concurrent_scenario_to_completion() {
        let program = concurrent_program();
        let seed = ExecutionState::seed(&["a"]).unwrap();
        let out = run(&program, &seed, Strategy::AllSolutions, 4).unwrap();
        assert!(!out.solutions.is_empty());
        assert!(!out.truncated);
        for s in &out.solutions {
            assert!(s.is_final());
            assert!(s.structure.is_component().unwrap());
            assert_eq!(s.trace.len(), 5);
            assert!(s.depth() <= 2);
        }
        let first = run(&program, &seed, Strategy::FirstSolution, 4).unwrap();
        assert_eq!(first.solutions.len(), 1);
    }

    #[test]
    fn run_with_empty_program_finds_nothing() {
        let program = Program::new();
        let seed = ExecutionState::seed(&["a"]).unwrap();
        let out = run(&program, &seed, Strategy::AllSolutions, 3).unwrap();
        assert!(out.solutions.is_empty());
        assert!(!out.truncated);
    }

    #[test]
    fn input_free_seed_is_returned_at_depth_zero() {
        let program = concurrent_program();
        let seed = ExecutionState::seed::<&str>(&[]).unwrap();
        let out = run(&program, &seed, Strategy::AllSolutions, 3).unwrap();
        assert_eq!(out.solutions.len(), 1);
        assert!(out.solutions[0].trace.is_empty());
        assert_eq!(out.solutions[0].depth(), 0);
    }

    #[test]
    fn bound_exhaustion_is_flagged() {
        // A looping method can never close the goal; the bound cuts it off.
        let mut program = Program::new();
        program.add_method(Method::new("L", &["a"], &[&["a"]]).unwrap()).unwrap();
        let seed = ExecutionState::seed(&["a"]).unwrap();
        let out = run(&program, &seed, Strategy::AllSolutions, 3).unwrap();
        assert!(out.solutions.is_empty());
        assert!(out.truncated);
    }

    #[test]
    fn generalized_dual_method_compiles_to_union_behavior() {
        let g = girard_type(2, 2, Polarity::Dual).unwrap();
        let m = Method::generalized("alloc", &["c1", "c2"], &[&["r1"], &["r2"]], g).unwrap();
        let c = compile_method(&m).unwrap();
        assert!(c.is_component().unwrap());
        assert!(c.is_transitory().unwrap());
        let state = ExecutionState::from_structure(c);
        assert_eq!(
            realizable_connections(&state).unwrap(),
            pset(&[
                &[&["c1", "r1"], &["c2", "r2"]],
                &[&["c1", "r2"], &["c2", "r1"]],
            ])
        );
    }

    #[test]
    fn generalized_primal_method_compiles_to_intersection_behavior() {
        let g = girard_type(2, 2, Polarity::Primal).unwrap();
        let m =
            Method::generalized("choice", &["c"], &[&["r1"], &["r2"], &["r3"], &["r4"]], g)
                .unwrap();
        let c = compile_method(&m).unwrap();
        assert!(c.is_component().unwrap());
        let state = ExecutionState::from_structure(c);
        assert_eq!(
            realizable_connections(&state).unwrap(),
            pset(&[
                &[&["c", "r1", "r3"], &["r2"], &["r4"]],
                &[&["c", "r2", "r4"], &["r1"], &["r3"]],
            ])
        );
    }

    #[test]
    fn generalized_arity_mismatch_is_a_compile_error() {
        let g = girard_type(2, 2, Polarity::Primal).unwrap();
        assert!(matches!(
            Method::generalized("bad", &["c"], &[&["r1"], &["r2"]], g),
            Err(ProgramError::GeneralizedArity { .. })
        ));
    }
}
