//! Command-line front end: check structures, compute behaviors and tests,
//! expand, run programs, generate connectives, probe decomposability, and
//! export DOT or JSON.
//!
//! Exit codes: 0 on success, 1 when a property check fails (a structure is
//! not correct, a site does not expand, a run finds no solution), 2 on usage
//! or parse errors.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use multinet_core::connectives::{girard_type, nondecomposability_probe, Polarity};
use multinet_core::dsl::{parse_goal, parse_program};
use multinet_core::expansion::{expands_characterized, ExpansionSite};
use multinet_core::hypergraph::VertexId;
use multinet_core::json::{
    dot_export, link_type_to_value, partition_set_from_value, partition_set_to_value,
    partition_to_value, structure_from_str, structure_to_string, structure_to_value,
    switching_to_value,
};
use multinet_core::mstructure::{MStructure, DEFAULT_SWITCH_BOUND};
use multinet_core::program::{run, ExecutionState, Strategy};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "multinet", version, about = "Multiplicative structures toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Cap on enumerated switchings per structure (also via MULTINET_BOUND).
    #[arg(long, global = true)]
    pub bound_switchings: Option<u128>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check correctness, net, component and transitory status.
    Check {
        file: PathBuf,
        /// Include the first failing switching in the verdict.
        #[arg(long)]
        witness: bool,
    },
    /// Compute the behavior of a structure.
    Behavior { file: PathBuf },
    /// List every switching with its test and border behavior.
    Tests { file: PathBuf },
    /// Glue a guest's outputs onto a host's inputs and report the verdict.
    Expand {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        guest: PathBuf,
        /// Comma-separated pairs hostInput=guestOutput.
        #[arg(long)]
        glue: String,
    },
    /// Run a program to input-free states.
    Run {
        file: PathBuf,
        /// Goal atoms, comma separated; overrides the file's goal.
        #[arg(long)]
        goal: Option<String>,
        /// Derivation depth bound.
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Collect every solution instead of stopping at the first.
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Emit a generalized connective as a link type.
    Connective {
        /// Connective family; only `G` is defined.
        family: String,
        u: usize,
        v: usize,
        #[arg(long)]
        dual: bool,
    },
    /// Search formula trees for one matching a target behavior.
    Probe {
        /// JSON file holding a behavior over ports i1..iN and o1.
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        inputs: usize,
    },
    /// Re-emit a structure as DOT or normalized JSON.
    Export {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
}

/// What a dispatch produced; `main` prints and exits with it.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn failed_check(stdout: String) -> Outcome {
        Outcome { code: EXIT_CHECK_FAILED, stdout, stderr: String::new() }
    }

    fn usage(err: impl ToString) -> Outcome {
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: err.to_string() }
    }
}

#[derive(Debug, Args)]
struct Never {}

fn switch_bound(cli_flag: Option<u128>) -> u128 {
    cli_flag
        .or_else(|| {
            std::env::var("MULTINET_BOUND")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(DEFAULT_SWITCH_BOUND)
}

fn load_structure(path: &PathBuf) -> Result<MStructure, Outcome> {
    let text = fs::read_to_string(path)
        .map_err(|e| Outcome::usage(format!("{}: {e}", path.display())))?;
    structure_from_str(&text).map_err(|e| Outcome::usage(format!("{}: {e}", path.display())))
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn dispatch(cli: Cli) -> Outcome {
    let bound = switch_bound(cli.bound_switchings);
    match cli.command {
        Command::Check { file, witness } => {
            let s = match load_structure(&file) {
                Ok(s) => s,
                Err(o) => return o,
            };
            check_command(&s, witness, bound)
        }
        Command::Behavior { file } => {
            let s = match load_structure(&file) {
                Ok(s) => s,
                Err(o) => return o,
            };
            match s.behavior_bounded(bound) {
                Ok(b) => {
                    let border: Vec<String> =
                        s.border().iter().map(|v| v.to_string()).collect();
                    Outcome::ok(pretty(&json!({
                        "border": border,
                        "behavior": partition_set_to_value(&b),
                    })))
                }
                Err(e) => Outcome::usage(e),
            }
        }
        Command::Tests { file } => {
            let s = match load_structure(&file) {
                Ok(s) => s,
                Err(o) => return o,
            };
            tests_command(&s, bound)
        }
        Command::Expand { host, guest, glue } => {
            let h = match load_structure(&host) {
                Ok(s) => s,
                Err(o) => return o,
            };
            let g = match load_structure(&guest) {
                Ok(s) => s,
                Err(o) => return o,
            };
            expand_command(&h, &g, &glue)
        }
        Command::Run { file, goal, depth, all, format } => {
            run_command(&file, goal.as_deref(), depth, all, format)
        }
        Command::Connective { family, u, v, dual } => {
            if family != "G" {
                return Outcome::usage(format!(
                    "unknown connective family `{family}` (only `G` is defined)"
                ));
            }
            let polarity = if dual { Polarity::Dual } else { Polarity::Primal };
            match girard_type(u, v, polarity) {
                Ok(g) => Outcome::ok(pretty(&link_type_to_value(&g.link))),
                Err(e) => Outcome::usage(e),
            }
        }
        Command::Probe { target, inputs } => probe_command(&target, inputs),
        Command::Export { file, format } => {
            let s = match load_structure(&file) {
                Ok(s) => s,
                Err(o) => return o,
            };
            match format {
                Format::Dot => {
                    let name = file
                        .file_stem()
                        .map(|s| s.to_string_lossy().to_string())
                        .unwrap_or_else(|| "structure".to_string());
                    Outcome::ok(dot_export(&s, &name))
                }
                Format::Json => Outcome::ok(pretty(&structure_to_value(&s))),
            }
        }
    }
}

fn check_command(s: &MStructure, witness: bool, bound: u128) -> Outcome {
    if s.switch_space() > bound {
        return Outcome::usage(format!(
            "switching space {} exceeds the bound {bound}",
            s.switch_space()
        ));
    }
    let correct = match s.is_correct() {
        Ok(v) => v,
        Err(e) => return Outcome::usage(e),
    };
    let mut verdict = json!({
        "correct": correct,
        "net": s.is_net().unwrap_or(false),
        "component": s.is_component().unwrap_or(false),
        "transitory": s.is_transitory().unwrap_or(false),
    });
    if witness && !correct {
        if let Ok(Some(w)) = s.first_failing_test() {
            verdict["witness"] = switching_to_value(s, &w);
        }
    }
    let text = pretty(&verdict);
    if correct {
        Outcome::ok(text)
    } else {
        Outcome::failed_check(text)
    }
}

fn tests_command(s: &MStructure, bound: u128) -> Outcome {
    let switchings = match s.switchings_bounded(bound) {
        Ok(it) => it,
        Err(e) => return Outcome::usage(e),
    };
    let mut entries = Vec::new();
    for sw in switchings {
        let test = s.test(&sw).expect("switching covers the structure");
        let uedges: Vec<Vec<String>> = test
            .uedges()
            .iter()
            .map(|e| e.iter().map(|v| v.to_string()).collect())
            .collect();
        entries.push(json!({
            "switching": switching_to_value(s, &sw),
            "uedges": uedges,
            "behavior": partition_to_value(&s.test_behavior(&sw).unwrap()),
            "tree": test.is_tree(),
        }));
    }
    Outcome::ok(pretty(&serde_json::Value::Array(entries)))
}

fn parse_glue(glue: &str) -> Result<Vec<(VertexId, VertexId)>, String> {
    let mut pairs = Vec::new();
    for chunk in glue.split(',') {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            continue;
        }
        let (h, g) = chunk
            .split_once('=')
            .ok_or_else(|| format!("glue pair `{chunk}` is not hostInput=guestOutput"))?;
        pairs.push((VertexId::new(h.trim()), VertexId::new(g.trim())));
    }
    if pairs.is_empty() {
        return Err("empty glue list".to_string());
    }
    Ok(pairs)
}

fn expand_command(host: &MStructure, guest: &MStructure, glue: &str) -> Outcome {
    let pairs = match parse_glue(glue) {
        Ok(p) => p,
        Err(e) => return Outcome::usage(e),
    };
    let site = ExpansionSite::new(host, guest, pairs.clone());
    let check = match expands_characterized(&site) {
        Ok(c) => c,
        Err(e) => return Outcome::usage(e),
    };
    let failed = check.failed.as_ref().map(|f| f.tag());
    if check.expands {
        let (composite, _) = match host.compose(guest, &pairs) {
            Ok(c) => c,
            Err(e) => return Outcome::usage(e),
        };
        Outcome::ok(pretty(&json!({
            "expands": true,
            "failed_condition": serde_json::Value::Null,
            "composite": structure_to_value(&composite),
        })))
    } else {
        Outcome::failed_check(pretty(&json!({
            "expands": false,
            "failed_condition": failed,
        })))
    }
}

fn run_command(
    file: &PathBuf,
    goal: Option<&str>,
    depth: usize,
    all: bool,
    format: Format,
) -> Outcome {
    let text = match fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => return Outcome::usage(format!("{}: {e}", file.display())),
    };
    let parsed = match parse_program(&text) {
        Ok(p) => p,
        Err(e) => return Outcome::usage(format!("{}: {e}", file.display())),
    };
    let goal_atoms = match goal {
        Some(g) => match parse_goal(g) {
            Ok(atoms) => atoms,
            Err(e) => return Outcome::usage(format!("--goal: {e}")),
        },
        None => match parsed.goal {
            Some(g) => g,
            None => return Outcome::usage("no goal: give --goal or a `?- ...` line"),
        },
    };
    let seed = match ExecutionState::seed(&goal_atoms) {
        Ok(s) => s,
        Err(e) => return Outcome::usage(e),
    };
    let strategy = if all { Strategy::AllSolutions } else { Strategy::FirstSolution };
    let outcome = match run(&parsed.program, &seed, strategy, depth) {
        Ok(o) => o,
        Err(e) => return Outcome::usage(e),
    };
    match format {
        Format::Dot => {
            let mut out = String::new();
            for (i, s) in outcome.solutions.iter().enumerate() {
                out.push_str(&dot_export(&s.structure, &format!("solution{i}")));
            }
            if outcome.solutions.is_empty() {
                Outcome::failed_check(out)
            } else {
                Outcome::ok(out)
            }
        }
        Format::Json => {
            let solutions: Vec<serde_json::Value> = outcome
                .solutions
                .iter()
                .map(|s| {
                    let trace: Vec<serde_json::Value> = s
                        .trace
                        .iter()
                        .map(|step| {
                            json!({
                                "method": step.method,
                                "glued": step.glued
                                    .iter()
                                    .map(|(h, g)| vec![h.to_string(), g.to_string()])
                                    .collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    let report = s.report().expect("final state verdicts");
                    json!({
                        "trace": trace,
                        "depth": s.depth(),
                        "component": report.component,
                        "net": report.net,
                        "structure": structure_to_value(&s.structure),
                    })
                })
                .collect();
            let text = pretty(&json!({
                "goal": goal_atoms,
                "solutions": solutions,
                "truncated": outcome.truncated,
            }));
            if outcome.solutions.is_empty() {
                Outcome::failed_check(text)
            } else {
                Outcome::ok(text)
            }
        }
    }
}

fn probe_command(target: &PathBuf, inputs: usize) -> Outcome {
    let text = match fs::read_to_string(target) {
        Ok(t) => t,
        Err(e) => return Outcome::usage(format!("{}: {e}", target.display())),
    };
    let value: serde_json::Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(e) => return Outcome::usage(format!("{}: {e}", target.display())),
    };
    let behavior = match partition_set_from_value(&value) {
        Ok(b) => b,
        Err(e) => return Outcome::usage(format!("{}: {e}", target.display())),
    };
    let ports: BTreeSet<String> = behavior
        .ground()
        .iter()
        .map(|e| e.to_string())
        .collect();
    let expect: BTreeSet<String> = (1..=inputs)
        .map(|k| format!("i{k}"))
        .chain(["o1".to_string()])
        .collect();
    if ports != expect {
        return Outcome::usage(format!(
            "target ground {ports:?} does not match ports i1..i{inputs}, o1"
        ));
    }
    match nondecomposability_probe(&behavior, inputs) {
        Ok(out) => Outcome::ok(pretty(&json!({
            "match": out.witness.is_some(),
            "candidates": out.candidates,
            "witness": out.witness.as_ref().map(structure_to_value),
        }))),
        Err(e) => Outcome::usage(e),
    }
}

/// Byte-stable re-export used by the round-trip test.
pub fn canonical_json(s: &MStructure) -> String {
    structure_to_string(s)
}
