//! Command-line front end. Graph files use 1-based ids; reports and id flags
//! use 0-based ids (file id minus one, after compression for edge lists).
//!
//! Exit codes: 0 on success, 1 when a run fails (invalid input, a violated
//! invariant, a failed verification or an exhausted budget), 2 on usage
//! errors.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::decomposition::treedepth_exact;
use crate::error::{Error, Result};
use crate::fii::{build_representative_table, kernelize, Problem, RepresentativeTable};
use crate::generate::{generate_instance, InstanceKind};
use crate::graph::{degeneracy_order, parse_graph, write_pace, Graph, GraphFormat, VertexSet};
use crate::lp_kernel::{kernel_size_bound, lp_kernelize};
use crate::modulator::{approx_td_modulator, exact_td_modulator};
use crate::oracles::{brute_exact_st_path, brute_longest_path, brute_vertex_cover};
use crate::protrusion::{decompose, ProtrusionDecomposition};
use crate::shallow_minor::{count_cliques, grad_exact, grad_lower_bound, GRAD_EXACT_LIMIT};

pub const REPORT_SCHEMA: u32 = 1;

/// Largest rank used when deriving `t` from a grad estimate.
pub const DEFAULT_T_RANK_CAP: usize = 4;

#[derive(Parser, Debug)]
#[command(name = "kernelforge", version, about = "Kernelization with treedepth modulators")]
pub struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
    /// Report destination (defaults to stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// `.gr` means PACE, anything else an edge list.
    Auto,
    Gr,
    Edges,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProblemArg {
    Vc,
    Lp,
}

impl From<ProblemArg> for Problem {
    fn from(p: ProblemArg) -> Self {
        match p {
            ProblemArg::Vc => Problem::VertexCover,
            ProblemArg::Lp => Problem::LongestPath,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    LongestPath,
    VertexCover,
    Treedepth,
    ExactStPath,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    ApexPendants,
    SubdividedGrid,
    RandomModulated,
}

#[derive(Args, Debug)]
pub struct Input {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
    pub input_format: InputFormat,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Modulator plus protrusion decomposition.
    Decompose {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        d: usize,
        /// Defaults to 2 * ceil(grad estimate) + 1.
        #[arg(long)]
        t: Option<usize>,
        /// Modulator file (1-based ids); computed when absent.
        #[arg(long)]
        modulator: Option<PathBuf>,
    },
    /// Treedepth modulator.
    Modulator {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        d: usize,
        /// Exact search instead of the approximation (small graphs only).
        #[arg(long)]
        exact: bool,
    },
    /// Protrusion replacement against a representative table.
    Kernelize {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        problem: ProblemArg,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        t: Option<usize>,
        /// Table file; built on the fly when absent.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        table_t: usize,
        #[arg(long, default_value_t = 7)]
        table_max_n: usize,
        /// Reduced graph in PACE format.
        #[arg(long)]
        kernel_out: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
    },
    /// Longest Path kernel by repeated component selection.
    KernelizeLp {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        modulator: Option<PathBuf>,
        #[arg(long)]
        kernel_out: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
    },
    /// Enumerates a representative table and writes it as JSON.
    BuildTable {
        #[arg(long, value_enum)]
        problem: ProblemArg,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        max_n: usize,
        /// Table file. Without it, `--out` names the table and the report
        /// goes to stdout.
        #[arg(long)]
        table_out: Option<PathBuf>,
    },
    /// Degeneracy, clique count and shallow-minor density.
    Profile {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        rank: usize,
        /// Derive the default `t` for this treedepth bound.
        #[arg(long)]
        d: Option<usize>,
    },
    /// Brute-force ground truth.
    Oracle {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        kind: OracleKind,
        #[arg(long)]
        source: Option<usize>,
        #[arg(long)]
        target: Option<usize>,
        #[arg(long)]
        length: Option<usize>,
    },
    /// Instance generators with a planted modulator.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 10)]
        copies: usize,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 5)]
        rows: usize,
        #[arg(long, default_value_t = 5)]
        cols: usize,
        #[arg(long, default_value_t = 1)]
        subdiv: usize,
        #[arg(long, default_value_t = 12)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Graph file in PACE format.
        #[arg(long)]
        graph_out: Option<PathBuf>,
        /// Planted modulator, 1-based ids.
        #[arg(long)]
        modulator_out: Option<PathBuf>,
    },
}

fn read_graph(input: &Input) -> Result<Graph> {
    let text = std::fs::read_to_string(&input.input)?;
    let format = match input.input_format {
        InputFormat::Gr => GraphFormat::PaceGr,
        InputFormat::Edges => GraphFormat::EdgeList,
        InputFormat::Auto => {
            if input.input.extension().is_some_and(|e| e == "gr") {
                GraphFormat::PaceGr
            } else {
                GraphFormat::EdgeList
            }
        }
    };
    parse_graph(&text, format)
}

fn read_vertex_set(path: &Path, n: usize) -> Result<VertexSet> {
    let text = std::fs::read_to_string(path)?;
    let mut out = VertexSet::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split_whitespace() {
            let v: usize = tok.parse().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("'{tok}' is not a vertex id"),
            })?;
            if v == 0 || v > n {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("vertex id {v} outside 1..={n}"),
                });
            }
            out.insert(v - 1);
        }
    }
    Ok(out)
}

fn write_vertex_set(path: &Path, s: &VertexSet) -> Result<()> {
    let text: Vec<String> = s.iter().map(|v| (v + 1).to_string()).collect();
    std::fs::write(path, text.join(" ") + "\n")?;
    Ok(())
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

/// `2 * ceil(grad estimate at rank min(2^d, cap)) + 1`.
pub fn default_t(g: &Graph, d: usize) -> (usize, Value) {
    let rank = (1usize << d.min(8)).min(DEFAULT_T_RANK_CAP);
    let est = grad_lower_bound(g, rank);
    let ceil = est.value.ceil().to_integer() as usize;
    let t = 2 * ceil + 1;
    (t, json!({ "rank": rank, "grad_lower_bound": est.value.to_string(), "t": t }))
}

struct Report {
    fields: Map<String, Value>,
}

impl Report {
    fn new(command: &str) -> Self {
        let mut fields = Map::new();
        fields.insert("schema".into(), json!(REPORT_SCHEMA));
        fields.insert("command".into(), json!(command));
        Report { fields }
    }

    fn set(&mut self, key: &str, value: Value) {
        self.fields.insert(key.into(), value);
    }

    fn render(&self, format: ReportFormat) -> Result<String> {
        Ok(match format {
            ReportFormat::Json => serde_json::to_string_pretty(&self.fields)? + "\n",
            ReportFormat::Text => {
                let mut out = String::new();
                for (k, v) in &self.fields {
                    let v = match v {
                        Value::String(s) => s.clone(),
                        other => serde_json::to_string(other)?,
                    };
                    out.push_str(&format!("{k}: {v}\n"));
                }
                out
            }
        })
    }
}

fn graph_summary(g: &Graph) -> Value {
    json!({ "n": g.n(), "m": g.m() })
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Decompose { input, d, t, modulator } => {
            let g = read_graph(input)?;
            let mut r = Report::new("decompose");
            r.set("graph", graph_summary(&g));
            let t = match t {
                Some(t) => *t,
                None => {
                    let (t, info) = default_t(&g, *d);
                    r.set("t_default", info);
                    t
                }
            };
            let s = match modulator {
                Some(p) => read_vertex_set(p, g.n())?,
                None => approx_td_modulator(&g, *d)?.modulator,
            };
            let pd = decompose(&g, &s, *d, t)?;
            pd.validate(&g)?;
            r.set("modulator", to_value(&s)?);
            r.set("boundary_bound", json!(ProtrusionDecomposition::boundary_bound(*d, t)));
            r.set("decomposition", to_value(&pd)?);
            Ok(r)
        }
        Command::Modulator { input, d, exact } => {
            let g = read_graph(input)?;
            let res = if *exact {
                exact_td_modulator(&g, *d)?
            } else {
                approx_td_modulator(&g, *d)?
            };
            res.validate(&g)?;
            let mut r = Report::new("modulator");
            r.set("graph", graph_summary(&g));
            r.set("exact", json!(exact));
            r.set("size", json!(res.modulator.len()));
            r.set("result", to_value(&res)?);
            Ok(r)
        }
        Command::Kernelize {
            input,
            problem,
            d,
            t,
            table,
            table_t,
            table_max_n,
            kernel_out,
            verify,
        } => {
            let g = read_graph(input)?;
            let problem = Problem::from(*problem);
            let mut r = Report::new("kernelize");
            let t = match t {
                Some(t) => *t,
                None => {
                    let (t, info) = default_t(&g, *d);
                    r.set("t_default", info);
                    t
                }
            };
            let table = match table {
                Some(p) => RepresentativeTable::load(p)?,
                None => build_representative_table(problem, *table_t, *d, *table_max_n)?,
            };
            r.set(
                "table",
                json!({ "t": table.t, "d": table.d, "max_n": table.max_n, "entries": table.len(), "stabilized": table.stabilized }),
            );
            let k = kernelize(&g, *d, t, problem, &table)?;
            r.set("report", to_value(&k.report)?);
            if let Some(p) = kernel_out {
                std::fs::write(p, write_pace(&k.graph))?;
            }
            if *verify {
                let (before, after) = match problem {
                    Problem::VertexCover => (brute_vertex_cover(&g)? as i64, brute_vertex_cover(&k.graph)? as i64 + k.delta),
                    Problem::LongestPath => (brute_longest_path(&g)? as i64, brute_longest_path(&k.graph)? as i64),
                };
                if before != after {
                    return Err(Error::Invariant(format!(
                        "{problem} optimum {before} before reduction, {after} after"
                    )));
                }
                r.set("verified", json!(format!("{problem} optimum preserved ({before})")));
            }
            Ok(r)
        }
        Command::KernelizeLp {
            input,
            d,
            modulator,
            kernel_out,
            verify,
        } => {
            let g = read_graph(input)?;
            let s = match modulator {
                Some(p) => read_vertex_set(p, g.n())?,
                None => approx_td_modulator(&g, *d)?.modulator,
            };
            let kernel = lp_kernelize(&g, &s, *d)?;
            let mut r = Report::new("kernelize-lp");
            r.set("graph", graph_summary(&g));
            r.set("modulator", to_value(&s)?);
            r.set("kernel", graph_summary(&kernel.graph));
            r.set(
                "size_bound",
                json!(kernel_size_bound(*d, s.len()).map(|b| b.to_string())),
            );
            r.set("trace", to_value(&kernel)?);
            if let Some(p) = kernel_out {
                std::fs::write(p, write_pace(&kernel.graph))?;
            }
            if *verify {
                let before = brute_longest_path(&g)?;
                let after = brute_longest_path(&kernel.graph)?;
                if before != after {
                    return Err(Error::Invariant(format!(
                        "longest path {before} before reduction, {after} after"
                    )));
                }
                r.set("verified", json!("longest path preserved"));
            }
            Ok(r)
        }
        Command::BuildTable {
            problem,
            t,
            d,
            max_n,
            table_out,
        } => {
            let table = build_representative_table((*problem).into(), *t, *d, *max_n)?;
            if let Some(p) = table_out.as_ref().or(cli.out.as_ref()) {
                table.save(p)?;
            }
            let mut r = Report::new("build-table");
            r.set("problem", to_value(&table.problem)?);
            r.set("t", json!(t));
            r.set("d", json!(d));
            r.set("max_n", json!(max_n));
            r.set("entries", json!(table.len()));
            r.set("max_representative", json!(table.max_representative()));
            r.set("stabilized", json!(table.stabilized));
            r.set("class_counts", to_value(&table.class_counts)?);
            Ok(r)
        }
        Command::Profile { input, rank, d } => {
            let g = read_graph(input)?;
            let mut r = Report::new("profile");
            r.set("graph", graph_summary(&g));
            let (degeneracy, _) = degeneracy_order(&g);
            r.set("degeneracy", json!(degeneracy));
            r.set("cliques", json!(count_cliques(&g)?));
            r.set("grad_lower_bound", to_value(&grad_lower_bound(&g, *rank))?);
            if g.n() <= GRAD_EXACT_LIMIT {
                r.set("grad_exact", to_value(&grad_exact(&g, *rank)?)?);
            }
            if let Some(d) = d {
                r.set("t_default", default_t(&g, *d).1);
            }
            Ok(r)
        }
        Command::Oracle {
            input,
            kind,
            source,
            target,
            length,
        } => {
            let g = read_graph(input)?;
            let mut r = Report::new("oracle");
            r.set("graph", graph_summary(&g));
            let value = match kind {
                OracleKind::LongestPath => json!(brute_longest_path(&g)?),
                OracleKind::VertexCover => json!(brute_vertex_cover(&g)?),
                OracleKind::Treedepth => json!(treedepth_exact(&g)?.height),
                OracleKind::ExactStPath => {
                    let need = |x: &Option<usize>, name: &str| {
                        x.ok_or_else(|| Error::Argument(format!("exact-st-path needs --{name}")))
                    };
                    let (s, t, l) = (need(source, "source")?, need(target, "target")?, need(length, "length")?);
                    if s >= g.n() || t >= g.n() {
                        return Err(Error::Argument("path endpoint out of range".into()));
                    }
                    json!(brute_exact_st_path(&g, s, t, l)?)
                }
            };
            r.set("kind", to_value(&format!("{kind:?}"))?);
            r.set("value", value);
            Ok(r)
        }
        Command::Gen {
            kind,
            k,
            copies,
            d,
            rows,
            cols,
            subdiv,
            n,
            seed,
            graph_out,
            modulator_out,
        } => {
            let kind = match kind {
                GenKind::ApexPendants => InstanceKind::ApexPendants {
                    k: *k,
                    copies: *copies,
                    d: *d,
                },
                GenKind::SubdividedGrid => InstanceKind::SubdividedGrid {
                    rows: *rows,
                    cols: *cols,
                    subdiv: *subdiv,
                },
                GenKind::RandomModulated => InstanceKind::RandomModulated {
                    n: *n,
                    k: *k,
                    d: *d,
                    seed: *seed,
                },
            };
            let inst = generate_instance(&kind)?;
            if let Some(p) = graph_out {
                std::fs::write(p, write_pace(&inst.graph))?;
            }
            if let Some(p) = modulator_out {
                write_vertex_set(p, &inst.modulator)?;
            }
            let mut r = Report::new("gen");
            r.set("instance", to_value(&kind)?);
            r.set("graph", graph_summary(&inst.graph));
            r.set("d", json!(inst.d));
            r.set("modulator", to_value(&inst.modulator)?);
            Ok(r)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Argument(_) => 2,
        _ => 1,
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return 2;
        }
        // Fails only if the pool already exists, e.g. on a second call in one process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let result = run(&cli).and_then(|report| {
        let text = report.render(cli.format)?;
        let out = match &cli.command {
            Command::BuildTable { table_out: None, .. } => &None,
            _ => &cli.out,
        };
        match out {
            Some(p) => std::fs::write(p, text)?,
            None => print!("{text}"),
        }
        if cli.format == ReportFormat::Json || out.is_some() {
            if let Some(Value::String(v)) = report.fields.get("verified") {
                eprintln!("verified: {v}");
            }
        }
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
