//! `qprank` — quantum PageRank on directed graphs from the command line.
//!
//! Subcommands: `generate` (seeded scale-free graphs), `rank` (single-point
//! classical or quantum ranking), `sweep` (full phase grids), `cluster`
//! (label sweep cells into phases), `report` (plot-ready tables from a
//! stored sweep). Every run echoes its parameters, so output headers are
//! enough to reproduce it.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};

use qprank::sweep::{csv_header, csv_row, fmt_float};
use qprank::{
    classical_pagerank, cluster_distributions, evolve, metrics, read_sweep, representative_cells,
    run_sweep, write_sweep, CellRecord, DirectedGraph, GoogleMatrix, GridSpec, PhaseSchedule,
    Scheme, SweepResult,
};

#[derive(Parser)]
#[command(
    name = "qprank",
    version,
    about = "Szegedy-walk quantum PageRank: ranking, phase sweeps, clustering"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded scale-free directed graph as an edge list.
    Generate(GenerateArgs),
    /// Rank a graph: classical PageRank or a time-averaged quantum walk.
    Rank(RankArgs),
    /// Evolve every cell of a (theta1, theta2) grid and store the results.
    Sweep(SweepArgs),
    /// Label the cells of a stored sweep into cluster phases.
    Cluster(ClusterArgs),
    /// Emit plot-ready per-metric grid tables from a stored sweep.
    Report(ReportArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of nodes.
    #[arg(long)]
    n: usize,
    /// Directed edges added per new node.
    #[arg(long)]
    m: usize,
    /// Generator seed.
    #[arg(long)]
    seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Reverse all edges before writing (trackback graph).
    #[arg(long)]
    trackback: bool,
}

#[derive(Args)]
struct RankArgs {
    /// Edge-list file to rank.
    #[arg(long)]
    graph: PathBuf,
    /// Compute the classical PageRank eigenvector instead of a walk.
    #[arg(long)]
    classical: bool,
    /// Evolution scheme.
    #[arg(long, default_value = "standard", value_parser = parse_scheme)]
    scheme: Scheme,
    /// First rotation phase in radians.
    #[arg(long, conflicts_with = "theta1_pi")]
    theta1: Option<f64>,
    /// First rotation phase as a multiple of pi.
    #[arg(long)]
    theta1_pi: Option<f64>,
    /// Second rotation phase in radians.
    #[arg(long, conflicts_with = "theta2_pi")]
    theta2: Option<f64>,
    /// Second rotation phase as a multiple of pi.
    #[arg(long)]
    theta2_pi: Option<f64>,
    /// First primed phase in radians (general-four only).
    #[arg(long, conflicts_with = "theta1p_pi")]
    theta1p: Option<f64>,
    /// First primed phase as a multiple of pi (general-four only).
    #[arg(long)]
    theta1p_pi: Option<f64>,
    /// Second primed phase in radians (general-four only).
    #[arg(long, conflicts_with = "theta2p_pi")]
    theta2p: Option<f64>,
    /// Second primed phase as a multiple of pi (general-four only).
    #[arg(long)]
    theta2p_pi: Option<f64>,
    /// Damping factor.
    #[arg(long, default_value_t = 0.85, value_parser = parse_alpha)]
    alpha: f64,
    /// Total schedule steps.
    #[arg(long, default_value_t = 5000)]
    steps: usize,
    /// Averaging window (final steps).
    #[arg(long, default_value_t = 500)]
    window: usize,
    /// Rank the edge-reversed (trackback) graph.
    #[arg(long)]
    trackback: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Edge-list file to sweep.
    #[arg(long)]
    graph: PathBuf,
    /// Two-parameter evolution scheme.
    #[arg(long, default_value = "standard", value_parser = parse_scheme)]
    scheme: Scheme,
    /// Grid resolution per axis.
    #[arg(long, default_value_t = 32, value_parser = parse_grid)]
    grid: usize,
    /// Damping factor.
    #[arg(long, default_value_t = 0.85, value_parser = parse_alpha)]
    alpha: f64,
    /// Total schedule steps per cell.
    #[arg(long, default_value_t = 5000)]
    steps: usize,
    /// Averaging window per cell.
    #[arg(long, default_value_t = 500)]
    window: usize,
    /// Worker threads for the cell grid; all cores when omitted.
    #[arg(long)]
    threads: Option<usize>,
    /// Sweep the edge-reversed (trackback) graph.
    #[arg(long)]
    trackback: bool,
    /// Output CSV path (metadata sidecar is written next to it).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ClusterArgs {
    /// Sweep CSV produced by `qprank sweep`.
    #[arg(long)]
    sweep: PathBuf,
    /// Number of clusters.
    #[arg(long, default_value_t = 7)]
    k: usize,
    /// Clustering seed (restarts use seed .. seed+9).
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output path for the theta1,theta2,label map.
    #[arg(long)]
    out: PathBuf,
    /// Optional output path for the k centroid distributions.
    #[arg(long)]
    centroids_out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// Sweep CSV produced by `qprank sweep`.
    #[arg(long)]
    sweep: PathBuf,
    /// Directory for the emitted tables (created if missing).
    #[arg(long)]
    outdir: PathBuf,
    /// Also emit the sorted log-log ranking table for this cell index
    /// (repeatable).
    #[arg(long = "loglog-cell")]
    loglog_cells: Vec<usize>,
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("damping factor must lie in [0, 1], got {v}"))
    }
}

fn parse_grid(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
    if v >= 2 {
        Ok(v)
    } else {
        Err(format!("grid resolution must be at least 2, got {v}"))
    }
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse().map_err(|e: qprank::Error| e.to_string())
}

/// Usage-level error: message to stderr, exit code 2.
fn usage_error(msg: &str) -> ! {
    Cli::command().error(ErrorKind::ValueValidation, msg).exit()
}

fn main() -> ExitCode {
    // Die quietly when a pager closes the pipe.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Generate(args) => generate(args),
        Command::Rank(args) => rank(args),
        Command::Sweep(args) => sweep(args),
        Command::Cluster(args) => cluster(args),
        Command::Report(args) => report(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn load_graph(path: &Path, trackback: bool) -> Result<DirectedGraph, qprank::Error> {
    let text = fs::read_to_string(path)?;
    let graph = DirectedGraph::from_edge_list(&text)?;
    Ok(if trackback { graph.reverse() } else { graph })
}

fn generate(args: GenerateArgs) -> Result<(), qprank::Error> {
    let graph = match DirectedGraph::generate_scale_free(args.n, args.m, args.seed) {
        Ok(g) => g,
        Err(qprank::Error::Parameter(msg)) => usage_error(&msg),
        Err(e) => return Err(e),
    };
    let graph = if args.trackback { graph.reverse() } else { graph };
    match &args.out {
        Some(path) => {
            fs::write(path, graph.to_edge_list())?;
            println!(
                "# qprank generate n: {} m: {} seed: {} trackback: {}",
                args.n, args.m, args.seed, args.trackback
            );
            println!("# edges: {} edge_hash: {}", graph.edge_count(), graph.edge_hash());
            println!("wrote {}", path.display());
        }
        None => {
            println!(
                "# qprank generate n: {} m: {} seed: {} trackback: {}",
                args.n, args.m, args.seed, args.trackback
            );
            print!("{}", graph.to_edge_list());
        }
    }
    Ok(())
}

fn resolve_phase(radians: Option<f64>, pi_multiple: Option<f64>) -> f64 {
    radians.or(pi_multiple.map(|m| m * PI)).unwrap_or(0.0)
}

fn rank(args: RankArgs) -> Result<(), qprank::Error> {
    let graph = load_graph(&args.graph, args.trackback)?;
    let matrix = GoogleMatrix::new(&graph, args.alpha)?;
    let classical = classical_pagerank(&matrix, 1e-12, 100_000)?;

    println!("# qprank rank");
    println!(
        "# graph: {} n: {} edges: {} edge_hash: {}",
        args.graph.display(),
        graph.n(),
        graph.edge_count(),
        graph.edge_hash()
    );
    println!("# trackback: {} alpha: {}", args.trackback, fmt_float(args.alpha));

    if args.classical {
        println!("# mode: classical");
        println!("classical rank:");
        for (i, &p) in classical.probs().iter().enumerate() {
            println!("  node {i}: {}", fmt_float(p));
        }
        println!("sum: {}", fmt_float(classical.probs().iter().sum()));
        return Ok(());
    }

    let theta1 = resolve_phase(args.theta1, args.theta1_pi);
    let theta2 = resolve_phase(args.theta2, args.theta2_pi);
    let primed_given = args.theta1p.is_some()
        || args.theta1p_pi.is_some()
        || args.theta2p.is_some()
        || args.theta2p_pi.is_some();
    let sched = if args.scheme == Scheme::GeneralFour {
        if !primed_given {
            usage_error("scheme general-four needs --theta1p and --theta2p");
        }
        PhaseSchedule::general_four(
            theta1,
            theta2,
            resolve_phase(args.theta1p, args.theta1p_pi),
            resolve_phase(args.theta2p, args.theta2p_pi),
        )?
    } else {
        if primed_given {
            usage_error("primed phases are only meaningful with --scheme general-four");
        }
        PhaseSchedule::for_scheme(args.scheme, theta1, theta2)?
    };
    if args.window == 0 || args.steps < args.window {
        usage_error(&format!(
            "need --steps >= --window >= 1 (got steps={}, window={})",
            args.steps, args.window
        ));
    }

    print!(
        "# scheme: {} theta1: {} theta2: {}",
        sched.scheme(),
        fmt_float(sched.theta1()),
        fmt_float(sched.theta2())
    );
    if sched.scheme() == Scheme::GeneralFour {
        print!(
            " theta1p: {} theta2p: {}",
            fmt_float(sched.theta1p()),
            fmt_float(sched.theta2p())
        );
    }
    println!();
    println!("# steps: {} window: {}", args.steps, args.window);

    let run = evolve(&matrix, &sched, args.steps, args.window)?;
    let fit = metrics::beta_fit(&run.rank)?;
    let cell = CellRecord {
        theta1: sched.theta1(),
        theta2: sched.theta2(),
        fidelity_vs_classical: metrics::fidelity(&run.rank, &classical)?,
        variance: metrics::variance(&run.rank),
        coherence: run.coherence,
        entanglement: run.entanglement,
        beta: fit.beta,
        r2: fit.r2,
        rank: run.rank,
    };

    println!("rank (time-averaged):");
    for (i, &p) in cell.rank.probs().iter().enumerate() {
        println!("  node {i}: {}", fmt_float(p));
    }
    println!("sum: {}", fmt_float(cell.rank.probs().iter().sum()));
    println!("fidelity_vs_classical: {}", fmt_float(cell.fidelity_vs_classical));
    println!("variance: {}", fmt_float(cell.variance));
    println!("coherence: {}", fmt_float(cell.coherence));
    println!("entanglement: {}", fmt_float(cell.entanglement));
    println!("beta: {}", fmt_float(cell.beta));
    println!("r2: {}", fmt_float(cell.r2));
    println!();
    println!("{}", csv_header(graph.n()));
    println!("{}", csv_row(&cell));
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<(), qprank::Error> {
    if args.scheme == Scheme::GeneralFour {
        usage_error("sweep grids cover two-parameter schemes; general-four is rank-only");
    }
    if args.window == 0 || args.steps < args.window {
        usage_error(&format!(
            "need --steps >= --window >= 1 (got steps={}, window={})",
            args.steps, args.window
        ));
    }
    if args.threads == Some(0) {
        usage_error("--threads must be at least 1");
    }
    let graph = load_graph(&args.graph, args.trackback)?;
    let grid = GridSpec::new(args.grid)?;

    println!("# qprank sweep");
    println!(
        "# graph: {} n: {} edges: {} edge_hash: {}",
        args.graph.display(),
        graph.n(),
        graph.edge_count(),
        graph.edge_hash()
    );
    println!(
        "# trackback: {} scheme: {} grid: {} alpha: {} steps: {} window: {} threads: {}",
        args.trackback,
        args.scheme,
        args.grid,
        fmt_float(args.alpha),
        args.steps,
        args.window,
        args.threads.map_or("all".into(), |t| t.to_string()),
    );

    let result = match args.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| qprank::Error::Parameter(e.to_string()))?
            .install(|| run_sweep(&graph, args.scheme, grid, args.steps, args.window, args.alpha)),
        None => run_sweep(&graph, args.scheme, grid, args.steps, args.window, args.alpha),
    }?;
    write_sweep(&result, &args.out)?;
    println!(
        "wrote {} ({} cells) and {}",
        args.out.display(),
        result.cells.len(),
        qprank::sweep::metadata_path(&args.out).display()
    );
    Ok(())
}

fn cluster(args: ClusterArgs) -> Result<(), qprank::Error> {
    let result = read_sweep(&args.sweep)?;
    if args.k < 1 || args.k > result.cells.len() {
        usage_error(&format!(
            "--k must lie in [1, {}], got {}",
            result.cells.len(),
            args.k
        ));
    }
    println!("# qprank cluster");
    println!(
        "# sweep: {} n: {} scheme: {} grid: {} edge_hash: {}",
        args.sweep.display(),
        result.n,
        result.scheme,
        result.grid.resolution(),
        result.edge_hash
    );
    println!("# k: {} seed: {}", args.k, args.seed);

    let labeling = cluster_distributions(&result, args.k, args.seed)?;
    qprank::cluster::write_labels(&result, &labeling, &args.out)?;
    println!("inertia: {}", fmt_float(labeling.inertia()));
    println!("cluster sizes: {:?}", labeling.cluster_sizes());
    println!("representatives:");
    for (c, &cell_idx) in representative_cells(&result, &labeling).iter().enumerate() {
        let cell = &result.cells[cell_idx];
        println!(
            "  cluster {c}: cell {cell_idx} theta1: {} theta2: {}",
            fmt_float(cell.theta1),
            fmt_float(cell.theta2)
        );
    }
    println!("wrote {}", args.out.display());
    if let Some(path) = &args.centroids_out {
        qprank::cluster::write_centroids(&labeling, path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn report(args: ReportArgs) -> Result<(), qprank::Error> {
    let result = read_sweep(&args.sweep)?;
    fs::create_dir_all(&args.outdir)?;
    println!("# qprank report");
    println!(
        "# sweep: {} n: {} scheme: {} grid: {} edge_hash: {}",
        args.sweep.display(),
        result.n,
        result.scheme,
        result.grid.resolution(),
        result.edge_hash
    );

    let tables: [(&str, fn(&CellRecord) -> f64); 6] = [
        ("fidelity", |c| c.fidelity_vs_classical),
        ("variance", |c| c.variance),
        ("coherence", |c| c.coherence),
        ("entanglement", |c| c.entanglement),
        ("beta", |c| c.beta),
        ("r2", |c| c.r2),
    ];
    for (name, extract) in tables {
        let path = args.outdir.join(format!("{name}.csv"));
        let mut text = String::from("theta1,theta2,value\n");
        for cell in &result.cells {
            text.push_str(&format!(
                "{},{},{}\n",
                fmt_float(cell.theta1),
                fmt_float(cell.theta2),
                fmt_float(extract(cell))
            ));
        }
        fs::write(&path, text)?;
        println!("wrote {}", path.display());
    }

    for &idx in &args.loglog_cells {
        if idx >= result.cells.len() {
            usage_error(&format!(
                "--loglog-cell {idx} out of range (sweep has {} cells)",
                result.cells.len()
            ));
        }
        let path = args.outdir.join(format!("loglog_cell_{idx}.csv"));
        fs::write(&path, loglog_table(&result, idx))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

/// Sorted ranking of one cell with natural-log columns; probabilities at or
/// below 1e-12 are dropped, matching the power-law fit.
fn loglog_table(result: &SweepResult, idx: usize) -> String {
    let cell = &result.cells[idx];
    let mut sorted: Vec<f64> = cell
        .rank
        .probs()
        .iter()
        .copied()
        .filter(|&p| p > 1e-12)
        .collect();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut text = String::from("index,prob,log_index,log_prob\n");
    for (i, &p) in sorted.iter().enumerate() {
        let index = (i + 1) as f64;
        text.push_str(&format!(
            "{},{},{},{}\n",
            i + 1,
            fmt_float(p),
            fmt_float(index.ln()),
            fmt_float(p.ln())
        ));
    }
    text
}
