//! Command surface for the kgraph tool.
//!
//! Every command prints a JSON report on stdout and a one-line human summary
//! on stderr. Exit codes: 0 = holds/pass, 1 = fails with witness, 2 =
//! inconclusive (a bounded search or budget gave up), 3 = input error.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use kgraph::dynamics;
use kgraph::generators;
use kgraph::{
    build_theta, relabel_instance, verify_rho, ColouredIsomorphism, ColouredPath, Degree,
    Error, Instance, Limits, Status,
};

#[derive(Parser, Debug)]
#[command(
    name = "kgraph",
    about = "Build and analyze k-graphs presented by coloured graphs with commuting squares",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check structure, completeness, and associativity of an instance.
    Validate {
        instance: PathBuf,
        /// Report every associativity violation instead of the first.
        #[arg(long)]
        all: bool,
    },
    /// Normalize a coloured path to its cube morphism.
    Normalize {
        instance: PathBuf,
        /// Comma-separated edge ids, range first.
        #[arg(long)]
        path: String,
    },
    /// Decide equivalence of two coloured paths.
    Equiv {
        instance: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// Emit the explicit flip chain when equivalent.
        #[arg(long)]
        witness: bool,
    },
    /// Enumerate morphisms of one degree.
    Enumerate {
        instance: PathBuf,
        /// Range vertex; all vertices when omitted.
        #[arg(long)]
        vertex: Option<String>,
        /// Degree, comma-separated, e.g. 2,1.
        #[arg(long)]
        degree: String,
        /// Enumeration budget override.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Extract the skeleton of the presented k-graph as an instance.
    Skeleton { instance: PathBuf },
    /// Verify the skeleton round-trip isomorphism rho, and theta against a
    /// relabelled presentation.
    VerifyRoundtrip {
        instance: PathBuf,
        /// Degree-total bound for the theta verification.
        #[arg(long, default_value_t = 3)]
        theta_bound: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Bounded aperiodicity/cofinality analysis and the simplicity verdict.
    Analyze {
        instance: PathBuf,
        /// Pair bound, comma-separated; default 2 per coordinate.
        #[arg(long)]
        pair_bound: Option<String>,
        /// Path-degree bound; default 4 per coordinate.
        #[arg(long)]
        path_bound: Option<String>,
        /// Cofinality level bound; default 4 per coordinate.
        #[arg(long)]
        n_bound: Option<String>,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Write a generated instance.
    #[command(subcommand)]
    Gen(GenCommand),
}

#[derive(Subcommand, Debug)]
pub enum GenCommand {
    /// The grid E_{k,m} with its unique squares.
    Omega {
        /// Degree m, comma-separated, e.g. 2,2.
        #[arg(long)]
        degree: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Product of 1-graphs; factors like loops:2 or cycle:3.
    Product {
        #[arg(long = "factor", required = true)]
        factors: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Basic-data rank-2 instance on the pattern T = {0, e1, e2}.
    Prw {
        #[arg(long, default_value_t = 2)]
        modulus: u32,
        #[arg(long, default_value_t = 0)]
        target: u32,
        /// Degree cap for the bijectivity verification, e.g. 1,1.
        #[arg(long)]
        degree_cap: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded random instance (k = 2 or 3).
    Random {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 2)]
        max_vertices: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

pub struct Outcome {
    pub exit_code: i32,
    pub report: Value,
    pub summary: String,
}

fn parse_degree(text: &str, k: usize) -> Result<Degree, Error> {
    let coords = text
        .split(',')
        .map(|p| p.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Error::Schema {
            path: "--degree".into(),
            reason: format!("cannot parse {text:?} as comma-separated non-negative integers"),
        })?;
    if coords.len() != k {
        return Err(Error::DegreeLength {
            got: coords.len(),
            expected: k,
        });
    }
    Ok(Degree::from_coords(coords))
}

fn parse_bound(text: Option<&str>, k: usize, default: u32) -> Result<Degree, Error> {
    match text {
        Some(t) => parse_degree(t, k),
        None => Ok(Degree::from_coords(vec![default; k])),
    }
}

fn parse_path<'g>(instance: &'g Instance, text: &str) -> Result<ColouredPath<'g>, Error> {
    let ids: Vec<&str> = text.split(',').map(str::trim).collect();
    ColouredPath::from_edge_ids(&instance.graph, &ids)
}

fn limits_with(budget: Option<usize>) -> Limits {
    let mut limits = Limits::default();
    if let Some(b) = budget {
        limits.max_enumeration = b;
    }
    limits
}

fn status_exit(status: Status) -> i32 {
    match status {
        Status::Holds => 0,
        Status::Fails => 1,
        Status::Inconclusive => 2,
    }
}

pub fn execute(cli: Cli) -> Outcome {
    match run(cli) {
        Ok(outcome) => outcome,
        Err(e) => {
            let (exit_code, status) = match e {
                Error::EnumerationLimit { .. }
                | Error::CellBudget { .. }
                | Error::SearchExhausted { .. }
                | Error::GenerationBudget(_) => (2, "inconclusive"),
                _ => (3, "error"),
            };
            Outcome {
                exit_code,
                report: json!({"status": status, "error": e.to_string()}),
                summary: format!("{status}: {e}"),
            }
        }
    }
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::Validate { instance, all } => {
            let inst = Instance::load(&instance)?;
            let collection = inst.collection()?;
            let completeness = collection.check_complete();
            let assoc = if completeness.complete {
                Some(collection.check_associative(all)?)
            } else {
                None
            };
            let kg_ok = completeness.complete && assoc.as_ref().is_some_and(|a| a.associative);
            let sources = if kg_ok {
                Some(inst.kgraph()?.is_row_finite_no_sources())
            } else {
                None
            };
            let report = json!({
                "status": if kg_ok { "pass" } else { "fail" },
                "instance": inst.name,
                "complete": completeness.complete,
                "completeness_violations": completeness.violations,
                "associative": assoc.as_ref().map(|a| a.associative),
                "associativity_violations": assoc.as_ref().map(|a| &a.violations),
                "row_finite_no_sources": sources,
            });
            Ok(Outcome {
                exit_code: if kg_ok { 0 } else { 1 },
                summary: if kg_ok {
                    format!("pass: {:?} is a valid presentation", inst.name)
                } else {
                    format!("fail: {:?} is not a valid presentation", inst.name)
                },
                report,
            })
        }
        Command::Normalize { instance, path } => {
            let inst = Instance::load(&instance)?;
            let kg = inst.kgraph()?;
            let p = parse_path(&inst, &path)?;
            let cube = kg.collection().normalize(&p)?;
            let report = cube.to_json();
            Ok(Outcome {
                exit_code: 0,
                summary: format!("normalized a path of shape {}", cube.degree()),
                report,
            })
        }
        Command::Equiv {
            instance,
            x,
            y,
            witness,
        } => {
            let inst = Instance::load(&instance)?;
            let kg = inst.kgraph()?;
            let px = parse_path(&inst, &x)?;
            let py = parse_path(&inst, &y)?;
            let eq = kg.equivalent(&px, &py)?;
            let chain = if eq && witness {
                let chain = kg.witness_chain(&px, &py)?;
                Some(json!({
                    "paths": chain.paths().iter().map(|p| p.edge_ids()).collect::<Vec<_>>(),
                    "swaps": chain.swaps(),
                    "verified": chain.verify(kg.collection()),
                }))
            } else {
                None
            };
            Ok(Outcome {
                exit_code: if eq { 0 } else { 1 },
                summary: format!("paths are {}", if eq { "equivalent" } else { "not equivalent" }),
                report: json!({"equivalent": eq, "witness": chain}),
            })
        }
        Command::Enumerate {
            instance,
            vertex,
            degree,
            budget,
        } => {
            let inst = Instance::load(&instance)?;
            let kg = inst.kgraph()?.with_limits(limits_with(budget));
            let m = parse_degree(&degree, inst.graph.k())?;
            let v = vertex
                .as_deref()
                .map(|id| inst.graph.vertex(id))
                .transpose()?;
            let cubes = kg.paths_of_degree(v, &m)?;
            let report = json!({
                "instance": inst.name,
                "degree": m.coords(),
                "vertex": vertex,
                "count": cubes.len(),
                "morphisms": cubes.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            });
            Ok(Outcome {
                exit_code: 0,
                summary: format!("{} morphism(s) of degree {m}", cubes.len()),
                report,
            })
        }
        Command::Skeleton { instance } => {
            let inst = Instance::load(&instance)?;
            let kg = inst.kgraph()?;
            let skeleton = kgraph::extract_skeleton(&kg)?;
            let out = skeleton.into_instance(format!("{}_skeleton", inst.name));
            Ok(Outcome {
                exit_code: 0,
                summary: format!(
                    "skeleton: {} vertices, {} edges, {} squares",
                    out.graph.vertex_count(),
                    out.graph.edge_count(),
                    out.squares.len()
                ),
                report: out.to_json(),
            })
        }
        Command::VerifyRoundtrip {
            instance,
            theta_bound,
            seed,
        } => {
            let inst = Instance::load(&instance)?;
            let kg = inst.kgraph()?;
            let (skeleton, rho) = verify_rho(&kg)?;
            let rho_vertices: BTreeMap<&str, &str> = inst
                .graph
                .vertices()
                .map(|v| {
                    (
                        inst.graph.vertex_id(v),
                        skeleton.graph.vertex_id(rho.map_vertex(v)),
                    )
                })
                .collect();
            // theta against a relabelled presentation of the same instance
            let (relabelled, (vmap, emap)) = relabel_instance(&inst, seed)?;
            let kg2 = relabelled.kgraph()?;
            let psi = ColouredIsomorphism::from_ids(&inst.graph, &relabelled.graph, &vmap, &emap)?;
            let table = build_theta(&kg, &kg2, &psi, theta_bound)?;
            let theta_counts: BTreeMap<String, usize> = table
                .pairs
                .iter()
                .map(|(m, v)| (m.to_string(), v.len()))
                .collect();
            Ok(Outcome {
                exit_code: 0,
                summary: "pass: rho and theta verified".to_string(),
                report: json!({
                    "status": "pass",
                    "instance": inst.name,
                    "rho_vertices": rho_vertices,
                    "theta_degree_counts": theta_counts,
                    "theta_functoriality_checks": table.functoriality_checks,
                }),
            })
        }
        Command::Analyze {
            instance,
            pair_bound,
            path_bound,
            n_bound,
            budget,
        } => {
            let inst = Instance::load(&instance)?;
            let kg = inst.kgraph()?.with_limits(limits_with(budget));
            let k = inst.graph.k();
            let pair = parse_bound(pair_bound.as_deref(), k, 2)?;
            let path = parse_bound(path_bound.as_deref(), k, 4)?;
            let levels = parse_bound(n_bound.as_deref(), k, 4)?;
            let report = dynamics::simplicity_verdict(&kg, &pair, &path, &levels)?;
            let exit = status_exit(report.simplicity.status);
            let summary = match report.simplicity.status {
                Status::Holds => "simple (up to the recorded bounds)",
                Status::Fails => "not simple (certified witness in report)",
                Status::Inconclusive => "inconclusive at the recorded bounds",
            };
            Ok(Outcome {
                exit_code: exit,
                summary: format!("{}: {summary}", inst.name),
                report: json!({
                    "instance": inst.name,
                    "aperiodicity": report.aperiodicity,
                    "cofinality": report.cofinality,
                    "simplicity": report.simplicity,
                }),
            })
        }
        Command::Gen(gen) => run_gen(gen),
    }
}

fn run_gen(gen: GenCommand) -> Result<Outcome, Error> {
    let (instance, extra, out): (Instance, Option<Value>, Option<PathBuf>) = match gen {
        GenCommand::Omega { degree, out } => {
            let coords = degree
                .split(',')
                .map(|p| p.trim().parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| Error::Schema {
                    path: "--degree".into(),
                    reason: "expected comma-separated non-negative integers".into(),
                })?;
            (generators::omega(&Degree::from_coords(coords))?, None, out)
        }
        GenCommand::Product { factors, out } => {
            let parsed = factors
                .iter()
                .map(|f| parse_factor(f))
                .collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&kgraph::ColouredGraph> = parsed.iter().collect();
            (generators::product_of_1graphs(&refs)?, None, out)
        }
        GenCommand::Prw {
            modulus,
            target,
            degree_cap,
            out,
        } => {
            let cap = parse_bound(degree_cap.as_deref(), 2, 1)?;
            let weights: BTreeMap<(u32, u32), u32> =
                [(0, 0), (1, 0), (0, 1)].into_iter().map(|p| (p, 1)).collect();
            let data =
                generators::BasicData::new([(0, 0), (1, 0), (0, 1)], modulus, target, weights)?;
            let outcome = generators::prw_2graph(&data, &cap)?;
            let bij: Vec<Value> = outcome
                .bijectivity
                .iter()
                .map(|(m, count)| json!({"degree": m.coords(), "count": count}))
                .collect();
            (outcome.instance, Some(json!({"bijectivity": bij})), out)
        }
        GenCommand::Random {
            k,
            max_vertices,
            seed,
            out,
        } => (generators::random_instance(k, max_vertices, seed)?, None, out),
    };
    emit(instance, extra, out)
}

fn parse_factor(text: &str) -> Result<kgraph::ColouredGraph, Error> {
    let bad = || Error::Schema {
        path: "--factor".into(),
        reason: format!("expected loops:<n> or cycle:<n>, got {text:?}"),
    };
    let (kind, count) = text.split_once(':').ok_or_else(bad)?;
    let n: usize = count.trim().parse().map_err(|_| bad())?;
    if n == 0 {
        return Err(bad());
    }
    match kind.trim() {
        "loops" => Ok(generators::loops_1graph(&format!("l{n}_"), n)),
        "cycle" => Ok(generators::cycle_1graph(n)),
        _ => Err(bad()),
    }
}

fn emit(instance: Instance, extra: Option<Value>, out: Option<PathBuf>) -> Result<Outcome, Error> {
    if let Some(path) = out {
        instance.save(&path)?;
        let summary = format!("wrote {:?} to {}", instance.name, path.display());
        let mut report = json!({
            "status": "pass",
            "written": path.display().to_string(),
            "instance": instance.name,
        });
        if let (Some(extra), Some(obj)) = (extra, report.as_object_mut()) {
            obj.insert("verification".into(), extra);
        }
        return Ok(Outcome {
            exit_code: 0,
            report,
            summary,
        });
    }
    let mut report = instance.to_json();
    if let (Some(extra), Some(obj)) = (extra, report.as_object_mut()) {
        obj.insert("verification".into(), extra);
    }
    Ok(Outcome {
        exit_code: 0,
        summary: format!(
            "generated {:?}: {} vertices, {} edges, {} squares",
            instance.name,
            instance.graph.vertex_count(),
            instance.graph.edge_count(),
            instance.squares.len()
        ),
        report,
    })
}
