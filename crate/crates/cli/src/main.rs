use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use grover_sink::attractor::{attractor_basis, dimension_report, survival_spectral};
use grover_sink::dynamics::{survival_sequence, tail_stationary_state, SinkRun};
use grover_sink::linalg::{c, C64};
use grover_sink::operators::{build_e, build_t, d1_matrix, dirichlet_transition, flip_matrix, grover_matrix};
use grover_sink::oracle::{numeric_spectrum, OracleConfig};
use grover_sink::random::{random_sweep, RandomGraphConfig};
use grover_sink::report::{attractor_json, matrix_rows, real_matrix_rows, AttractorJson, ComplexPair, DimsJson, SurvivalJson, SCHEMA};
use grover_sink::verify::{verify_graph, GraphCheck, Tolerances, VerifyOptions};
use grover_sink::{GraphSpec, InternalGraph};
use serde::Serialize;

mod state;

use state::{build_state, StatePreset};

/// Survival probability and attractor of the Grover walk on graphs with sinks.
#[derive(Parser)]
#[command(name = "grover-sink", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Run the walk and emit `γ_n` and the per-step outflow `τ_n`.
    Simulate,
    /// Attractor basis, blocks and case label.
    Attractor,
    /// Survival probability through the attractor projector, split by block.
    Survival,
    /// Closed-form `±1` multiplicities against constructed and numeric counts.
    Dims,
    /// Stationary state with tails in place of the sinks.
    Tails,
    /// Cross-check every construction against the numeric oracle; exits 1 on any breach.
    Verify,
    /// Operator matrices.
    Dump,
}

#[derive(Args)]
struct Options {
    /// Graph file (text or JSON). `verify` accepts it more than once.
    #[arg(long, global = true)]
    graph: Vec<PathBuf>,
    /// Initial state: delta:<arc>, uniform-cycle:<k> or file:<path>. Arc ids are internal.
    #[arg(long, global = true, default_value = "delta:0")]
    state: StatePreset,
    /// Steps to simulate (also the norm-accounting run in `verify`).
    #[arg(long, global = true, default_value_t = 200)]
    steps: usize,
    /// Tolerance override for `verify`, as key=value.
    #[arg(long, global = true, value_name = "KEY=VALUE")]
    tol: Vec<String>,
    /// Write the document here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Tail inflow as re or re:im, once per tail in sink-arc order (default: 1 on every tail).
    #[arg(long, global = true, allow_hyphen_values = true)]
    inflow: Vec<String>,
    /// Random graphs for `verify` (default 20 when no --graph is given).
    #[arg(long, global = true)]
    random: Option<usize>,
    /// Seed for the random graphs in `verify`.
    #[arg(long, global = true, env = "GROVER_SINK_SEED", default_value_t = 0)]
    seed: u64,
    /// Include the attractor projector in `attractor` output.
    #[arg(long, global = true)]
    projector: bool,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum Format {
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command, &cli.opts) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, opts: &Options) -> Result<ExitCode> {
    let format = opts.format.unwrap_or(if command == Command::Simulate { Format::Csv } else { Format::Json });
    if format == Format::Csv && command != Command::Simulate {
        bail!("csv output is only available for simulate");
    }
    if command == Command::Verify {
        return verify(opts);
    }
    let (path, spec) = single_graph(opts)?;
    let g0 = spec.internal().with_context(|| format!("graph {}", path.display()))?;
    match command {
        Command::Simulate => {
            let phi0 = build_state(&g0, &opts.state)?;
            let run = survival_sequence(&g0, &phi0, opts.steps)?;
            match format {
                Format::Csv => emit_text(opts, &run.to_csv())?,
                Format::Json => emit_json(
                    opts,
                    &SimulateJson {
                        schema: SCHEMA,
                        state: opts.state.to_string(),
                        run: &run,
                    },
                )?,
            }
        }
        Command::Attractor => {
            let basis = attractor_basis(&g0)?;
            emit_json(
                opts,
                &ArcTabled {
                    arc_table: arc_table(&g0),
                    attractor: attractor_json(&basis, opts.projector),
                },
            )?;
        }
        Command::Survival => {
            let basis = attractor_basis(&g0)?;
            let phi0 = build_state(&g0, &opts.state)?;
            let survival = survival_spectral(&basis, &phi0)?;
            let b = survival.breakdown;
            println!("gamma={}", fmt_num(survival.gamma));
            println!(
                "plus={} minus={} lifted={} persistent={}",
                fmt_num(b.plus),
                fmt_num(b.minus),
                fmt_num(b.lifted),
                fmt_num(b.persistent)
            );
            if opts.out.is_some() {
                emit_json(
                    opts,
                    &SurvivalJson {
                        schema: SCHEMA,
                        case: basis.case,
                        state: opts.state.to_string(),
                        survival,
                    },
                )?;
            }
        }
        Command::Dims => {
            let basis = attractor_basis(&g0)?;
            let spectrum = numeric_spectrum(&build_e(&g0), &OracleConfig::default())?;
            let dims = DimsJson::from(dimension_report(&g0, &basis, &spectrum));
            let r = &dims.report;
            println!("case {}: betti {} loops {}", r.case, r.edges + 1 - r.vertices, r.loops);
            println!(
                "+1: predicted {} constructed {} numeric {}/{}",
                dims.expected_plus, r.constructed_plus, r.numeric_plus_algebraic, r.numeric_plus_geometric
            );
            println!(
                "-1: predicted {} constructed {} numeric {}/{}",
                dims.expected_minus, r.constructed_minus, r.numeric_minus_algebraic, r.numeric_minus_geometric
            );
            println!("lifted pairs {}  attractor dim {}", basis.t_part.len(), basis.dim());
            println!("matches={}", dims.matches);
            if opts.out.is_some() {
                emit_json(opts, &dims)?;
            }
        }
        Command::Tails => {
            let tails = g0.sink_arcs().len();
            let alphas = if opts.inflow.is_empty() {
                vec![c(1.0, 0.0); tails]
            } else {
                opts.inflow.iter().map(|s| parse_complex(s)).collect::<Result<Vec<_>>>()?
            };
            emit_json(opts, &tail_stationary_state(&g0, &alphas)?.to_json())?;
        }
        Command::Dump => emit_json(opts, &dump(&g0))?,
        Command::Verify => unreachable!("handled above"),
    }
    Ok(ExitCode::SUCCESS)
}

fn single_graph(opts: &Options) -> Result<(PathBuf, GraphSpec)> {
    match opts.graph.as_slice() {
        [path] => Ok((path.clone(), read_graph(path)?)),
        [] => bail!("--graph is required"),
        _ => bail!("this command takes a single --graph"),
    }
}

fn read_graph(path: &Path) -> Result<GraphSpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    GraphSpec::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

/// `re` or `re:im`.
fn parse_complex(s: &str) -> Result<C64> {
    let (re, im) = s.split_once(':').unwrap_or((s, "0"));
    let num = |t: &str| t.trim().parse::<f64>().with_context(|| format!("inflow `{s}`"));
    Ok(c(num(re)?, num(im)?))
}

/// Twelve decimals with trailing zeros dropped.
fn fmt_num(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn emit_text(opts: &Options, text: &str) -> Result<()> {
    match &opts.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(opts: &Options, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit_text(opts, &text)
}

#[derive(Serialize)]
struct SimulateJson<'a> {
    schema: u32,
    state: String,
    #[serde(flatten)]
    run: &'a SinkRun,
}

#[derive(Serialize)]
struct ArcJson {
    id: usize,
    /// Endpoints in the vertex numbering of the graph file.
    origin: usize,
    terminus: usize,
    is_loop: bool,
}

fn arc_table(g0: &InternalGraph) -> Vec<ArcJson> {
    let graph = g0.graph();
    graph
        .arcs()
        .map(|a| ArcJson {
            id: a.0,
            origin: g0.ambient_vertex(graph.origin(a)).0,
            terminus: g0.ambient_vertex(graph.terminus(a)).0,
            is_loop: graph.is_loop(a),
        })
        .collect()
}

#[derive(Serialize)]
struct ArcTabled {
    arc_table: Vec<ArcJson>,
    #[serde(flatten)]
    attractor: AttractorJson,
}

#[derive(Serialize)]
struct DumpJson {
    schema: u32,
    arcs: Vec<ArcJson>,
    /// Ambient vertex id of each internal vertex.
    vertices: Vec<usize>,
    ambient_degrees: Vec<usize>,
    grover: Vec<Vec<ComplexPair>>,
    flip: Vec<Vec<ComplexPair>>,
    truncated: Vec<Vec<ComplexPair>>,
    d1: Vec<Vec<ComplexPair>>,
    t: Vec<Vec<f64>>,
    transition: Vec<Vec<f64>>,
}

fn dump(g0: &InternalGraph) -> DumpJson {
    let graph = g0.graph();
    DumpJson {
        schema: SCHEMA,
        arcs: arc_table(g0),
        vertices: graph.vertices().map(|v| g0.ambient_vertex(v).0).collect(),
        ambient_degrees: graph.vertices().map(|v| g0.ambient_degree(v)).collect(),
        grover: matrix_rows(&grover_matrix(g0.ambient())),
        flip: matrix_rows(&flip_matrix(graph)),
        truncated: matrix_rows(&build_e(g0)),
        d1: matrix_rows(&d1_matrix(g0)),
        t: real_matrix_rows(&build_t(g0)),
        transition: real_matrix_rows(&dirichlet_transition(g0)),
    }
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    schema: u32,
    seed: u64,
    tolerances: Tolerances,
    passed: usize,
    failed: usize,
    graphs: &'a [GraphCheck],
}

fn verify(opts: &Options) -> Result<ExitCode> {
    let mut tol = Tolerances::default();
    for entry in &opts.tol {
        let (key, value) = entry
            .split_once('=')
            .ok_or_else(|| anyhow!("--tol `{entry}` is not key=value"))?;
        let value: f64 = value.parse().with_context(|| format!("--tol `{entry}`"))?;
        tol.set(key.trim(), value)?;
    }
    let mut jobs: Vec<(String, GraphSpec)> = Vec::new();
    for path in &opts.graph {
        jobs.push((path.display().to_string(), read_graph(path)?));
    }
    let random = opts.random.unwrap_or(if opts.graph.is_empty() { 20 } else { 0 });
    for (i, (case, spec)) in random_sweep(opts.seed, random, &RandomGraphConfig::default())
        .into_iter()
        .enumerate()
    {
        jobs.push((format!("random-{i}-{case}"), spec));
    }
    if jobs.is_empty() {
        bail!("nothing to verify");
    }

    let options = VerifyOptions {
        steps: opts.steps,
        seed: opts.seed,
    };
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(jobs.len());
    let chunk = jobs.len().div_ceil(workers);
    let results: Vec<Result<GraphCheck>> = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .chunks(chunk)
            .map(|part| {
                scope.spawn(|| {
                    part.iter()
                        .map(|(name, spec)| {
                            verify_graph(name, spec, &tol, &options).with_context(|| format!("verifying {name}"))
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("verify worker panicked"))
            .collect()
    });
    let checks = results.into_iter().collect::<Result<Vec<_>>>()?;

    let failed = checks.iter().filter(|c| !c.passed()).count();
    for check in &checks {
        if check.passed() {
            println!(
                "PASS {} case {} arcs {} dims +1:{} -1:{} max delta survival {}",
                check.name,
                check.case,
                check.internal_arcs,
                check.dims.constructed_plus,
                check.dims.constructed_minus,
                fmt_num(check.max_delta_survival)
            );
        } else {
            println!("FAIL {}: {}", check.name, check.failures.join("; "));
        }
    }
    println!("verified {} graphs, {failed} failed", checks.len());
    if opts.out.is_some() {
        emit_json(
            opts,
            &VerifyJson {
                schema: SCHEMA,
                seed: opts.seed,
                tolerances: tol,
                passed: checks.len() - failed,
                failed,
                graphs: &checks,
            },
        )?;
    }
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
