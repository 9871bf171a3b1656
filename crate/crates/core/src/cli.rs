//! Command-line front end.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::charts::all_charts;
use crate::emit::{tree_dot, tree_json_string, tree_text, verify_json};
use crate::error::{Error, Result};
use crate::parse::{parse_poly, parse_problem, ProblemSpec};
use crate::poly::Poly;
use crate::reduce::{reduction_pass, Hints};
use crate::resolved::{find_resolved, is_strongly_resolved, unit_series, Point};
use crate::tree::{build_tree, TreeOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "desing",
    about = "Desingularization trees of hypersurface function fields"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct Common {
    /// Problem file (`char:`, `vars:`, `b:` entries).
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The 2^(d+1) affine charts.
    Charts {
        #[command(flatten)]
        common: Common,
    },
    /// Global-parameter reduction trail.
    Reduce {
        #[command(flatten)]
        common: Common,
        /// Comma-separated variables for a hinted pattern.
        #[arg(long)]
        hint_var: Option<String>,
        #[arg(long)]
        hint_k: Option<u64>,
        #[arg(long)]
        hint_g: Option<String>,
        #[arg(long)]
        hint_f1: Option<String>,
        #[arg(long)]
        hint_f2: Option<String>,
    },
    /// The desingularization tree.
    Tree {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_depth: Option<usize>,
        #[arg(long, default_value_t = 12)]
        series_order: u32,
        /// Largest weight entry searched (default: 16 or twice the largest exponent).
        #[arg(long)]
        weight_bound: Option<i64>,
        #[arg(long)]
        jobs: Option<usize>,
        /// Start at the origin instead of the charts.
        #[arg(long)]
        at_origin: bool,
    },
    /// Strongly resolved check and unit series, for `b` itself or a tree node.
    Series {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        node: Option<String>,
        #[arg(long)]
        unit: Option<String>,
        #[arg(long)]
        dist: Option<String>,
        #[arg(long)]
        series_order: Option<u32>,
        #[arg(long)]
        max_depth: Option<usize>,
    },
    /// Re-checks the arc identities of a saved JSON tree.
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
}

/// Exit status and standard output of one command.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Verification(_) => 2,
        _ => 1,
    }
}

fn load(path: &PathBuf) -> Result<ProblemSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    parse_problem(&text)
}

pub fn run(cli: Cli) -> Outcome {
    match execute(cli) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn execute(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Charts { common } => charts(&common),
        Command::Reduce {
            common,
            hint_var,
            hint_k,
            hint_g,
            hint_f1,
            hint_f2,
        } => {
            let spec = load(&common.input)?;
            let b = spec.polynomial();
            let ring = b.ring().clone();
            let vars = match &hint_var {
                Some(s) => s
                    .split(',')
                    .map(|v| {
                        ring.index_of(v.trim())
                            .ok_or_else(|| Error::UnknownVariable(v.trim().into()))
                    })
                    .collect::<Result<Vec<_>>>()?,
                None => Vec::new(),
            };
            let opt = |s: &Option<String>| s.as_deref().map(|t| parse_poly(&ring, t)).transpose();
            let hints = Hints {
                vars,
                g: opt(&hint_g)?,
                k: hint_k,
                f1: opt(&hint_f1)?,
                f2: opt(&hint_f2)?,
            };
            reduce(&b, &hints, common.format)
        }
        Command::Tree {
            common,
            max_depth,
            series_order,
            weight_bound,
            jobs,
            at_origin,
        } => {
            let spec = load(&common.input)?;
            let opts = TreeOptions {
                max_depth: max_depth.or(spec.max_depth).unwrap_or(16),
                series_order,
                weight_bound,
                hints: None,
                at_origin,
            };
            let b = spec.polynomial();
            let tree = with_jobs(jobs, || build_tree(&b, &opts))?;
            tree.verify()?;
            Ok(match common.format {
                Format::Json => tree_json_string(&b, &tree, &opts),
                Format::Dot => tree_dot(&tree),
                Format::Text => tree_text(&tree),
            })
        }
        Command::Series {
            common,
            node,
            unit,
            dist,
            series_order,
            max_depth,
        } => {
            let spec = load(&common.input)?;
            let order = series_order
                .or(spec.series_order.map(|s| s as u32))
                .unwrap_or(12);
            series(&spec, node, unit, dist, order, max_depth)
        }
        Command::Verify { input } => {
            let text = std::fs::read_to_string(&input)
                .map_err(|e| Error::Invalid(format!("{}: {e}", input.display())))?;
            let n = verify_json(&text)?;
            Ok(format!("pass: {n} checks\n"))
        }
    }
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?
            .install(f),
        None => f(),
    }
}

fn charts(common: &Common) -> Result<String> {
    let spec = load(&common.input)?;
    let b = spec.polynomial();
    let charts = all_charts(&b)?;
    if common.format == Format::Json {
        let rows: Vec<_> = charts
            .iter()
            .map(|c| {
                json!({
                    "index": c.index.to_string(),
                    "bits": c.bits.iter().map(|&x| if x { "1" } else { "0" }).collect::<String>(),
                    "b": c.b.to_string(),
                    "factor": c.factor.exps().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    "eq": c.constraints.sorted_eq().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    "empty": c.is_empty(),
                    "empty_witness": c.empty_witness.as_ref().map(|w| w.to_string()),
                })
            })
            .collect();
        return Ok(serde_json::to_string_pretty(&rows).expect("json") + "\n");
    }
    let mut out = String::new();
    for c in &charts {
        let bits: String = c.bits.iter().map(|&x| if x { '1' } else { '0' }).collect();
        let mark = if c.is_empty() {
            format!(
                "EMPTY (constant term {})",
                c.empty_witness
                    .as_ref()
                    .map(|w| w.to_string())
                    .unwrap_or_default()
            )
        } else {
            "open".to_string()
        };
        let _ = writeln!(out, "{}\t{bits}\t{}\t{mark}", c.index, c.b);
    }
    Ok(out)
}

fn reduce(b: &Poly, hints: &Hints, format: Format) -> Result<String> {
    let pass = reduction_pass(b, Some(hints), &|s, j| format!("z{s}_{j}"))?;
    if format == Format::Json {
        let steps: Vec<_> = pass
            .trail
            .iter()
            .map(|r| {
                json!({
                    "kind": r.kind.to_string(),
                    "reduced": r.reduced.to_string(),
                    "factor": r.factor.to_string(),
                    "power": r.power.to_string(),
                    "weights": r.weights.as_ref().map(|w| w.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
                    "global_parameters": r.global_parameters,
                    "phi": r.map.phi_strings().into_iter().collect::<std::collections::BTreeMap<_, _>>(),
                    "psi": r.map.psi_strings().into_iter().collect::<std::collections::BTreeMap<_, _>>(),
                })
            })
            .collect();
        let v = json!({ "input": b.to_string(), "trail": steps, "final": pass.reduced.to_string(), "capped": pass.capped });
        return Ok(serde_json::to_string_pretty(&v).expect("json") + "\n");
    }
    let mut out = String::new();
    if pass.trail.is_empty() {
        out.push_str("no reduction applies\n");
    }
    for (i, r) in pass.trail.iter().enumerate() {
        let _ = write!(out, "{i}\t{}", r.kind);
        if let Some(w) = &r.weights {
            let ws: Vec<String> = w.iter().map(|x| x.to_string()).collect();
            let _ = write!(out, "\tweights {}", ws.join(","));
        }
        if let Some((v, f)) = &r.solved {
            let _ = write!(out, "\t{v} = {f}");
        } else {
            let _ = write!(out, "\t{}", r.reduced);
        }
        let _ = writeln!(out, "\tfactor {}\tpower {}", r.factor, r.power);
    }
    if pass.capped {
        out.push_str("step cap reached\n");
    }
    Ok(out)
}

fn series(
    spec: &ProblemSpec,
    node: Option<String>,
    unit: Option<String>,
    dist: Option<String>,
    order: u32,
    max_depth: Option<usize>,
) -> Result<String> {
    let root = spec.polynomial();
    let tree;
    let (b, at) = match &node {
        Some(id) => {
            let opts = TreeOptions {
                max_depth: max_depth.or(spec.max_depth).unwrap_or(16),
                ..Default::default()
            };
            tree = build_tree(&root, &opts)?;
            let n = tree.node(id)?;
            (n.b.clone(), Some((n.constraints.clone(), n.own.clone())))
        }
        None => (root, None),
    };
    let point = at.as_ref().map(|(c, own)| Point {
        constraints: c,
        own,
    });
    let ring = b.ring().clone();
    let idx = |s: &str| {
        ring.index_of(s)
            .ok_or_else(|| Error::UnknownVariable(s.into()))
    };
    let dec = match &unit {
        Some(u) => {
            let d = dist.as_deref().map(idx).transpose()?;
            is_strongly_resolved(&b, idx(u)?, d, point)
        }
        None => find_resolved(&b, point),
    };
    let Some(dec) = dec else {
        return Ok(format!("{b}\nnot strongly resolved\n"));
    };
    let s = unit_series(&b, &dec, order)?;
    let mut out = String::new();
    let _ = writeln!(out, "{b}");
    let _ = writeln!(
        out,
        "strongly resolved: unit {}, distinguished {}",
        ring.vars()[dec.unit],
        dec.dist
            .map(|t| ring.vars()[t].clone())
            .unwrap_or_else(|| "-".into())
    );
    let _ = writeln!(out, "f0 = {}\nf1 = {}\nD = {}", dec.f0, dec.f1, dec.d);
    let _ = writeln!(
        out,
        "{} = {} + O(deg {})",
        ring.vars()[dec.unit],
        s.poly,
        order + 1
    );
    Ok(out)
}
