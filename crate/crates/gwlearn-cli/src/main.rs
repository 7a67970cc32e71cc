//! Command-line experiments for Gromov-Wasserstein graph learning:
//! synthetic generation, partitioning, matching, multi-graph matching and
//! benchmark suites, each emitting deterministic output files plus a JSON
//! run manifest.

mod bench;
mod formats;
mod manifest;

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gwlearn::metrics::{adjusted_mutual_information, nc_multi, node_correctness};
use gwlearn::synthetic::{add_noise, generate, GeneratorSpec};
use gwlearn::tasks::{match_two, multi_match, partition_one, s_gwl_with_threads};
use gwlearn::{DirectedPolicy, Preset, SolverConfig};
use manifest::RunManifest;
use serde::Deserialize;

#[derive(Parser)]
#[command(name = "gwlearn", version, about = "Gromov-Wasserstein graph matching and partitioning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic graph or a noisy copy of an existing one.
    Generate(GenerateArgs),
    /// K-way partitioning of one graph.
    Partition(PartitionArgs),
    /// Match two graphs.
    Match(MatchArgs),
    /// Match three or more graphs through a barycenter.
    Multimatch(MultimatchArgs),
    /// Reproducible benchmark suites.
    Bench(bench::BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Gaussian,
    Ba,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Gwl,
    SGwl,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectedArg {
    Symmetrize,
    Keep,
}

impl From<DirectedArg> for DirectedPolicy {
    fn from(d: DirectedArg) -> Self {
        match d {
            DirectedArg::Symmetrize => DirectedPolicy::Symmetrize,
            DirectedArg::Keep => DirectedPolicy::Keep,
        }
    }
}

/// Solver hyperparameters; precedence is preset < config file < flag.
#[derive(Args, Clone)]
pub struct SolverArgs {
    /// Named preset (synthetic-partition, yeast-match, ...).
    #[arg(long)]
    preset: Option<String>,
    /// TOML file with configuration keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    /// Node-distribution shift (mu ∝ (degree + a)^b).
    #[arg(long)]
    a: Option<f64>,
    /// Node-distribution exponent.
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    outer_iters: Option<usize>,
    #[arg(long)]
    inner_iters: Option<usize>,
    #[arg(long)]
    bary_iters: Option<usize>,
    #[arg(long)]
    bary_solver_iters: Option<usize>,
    #[arg(long)]
    bary_tol: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigPatch {
    gamma: Option<f64>,
    tau: Option<f64>,
    a: Option<f64>,
    b: Option<f64>,
    k: Option<usize>,
    r: Option<usize>,
    omega: Option<Vec<f64>>,
    outer_iters: Option<usize>,
    inner_sinkhorn_iters: Option<usize>,
    bary_iters: Option<usize>,
    bary_solver_iters: Option<usize>,
    bary_tol: Option<f64>,
    tol: Option<f64>,
    seed: Option<u64>,
}

impl SolverArgs {
    pub fn resolve(&self) -> Result<SolverConfig> {
        let mut cfg = match &self.preset {
            Some(name) => Preset::from_name(name)
                .with_context(|| {
                    let names: Vec<&str> = Preset::ALL.iter().map(|p| p.name()).collect();
                    format!("unknown preset {name:?}; available: {}", names.join(", "))
                })?
                .config(),
            None => SolverConfig::default(),
        };
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config file {}", path.display()))?;
            let patch: ConfigPatch = toml::from_str(&text)
                .with_context(|| format!("parsing config file {}", path.display()))?;
            apply_patch(&mut cfg, patch);
        }
        let flag_patch = ConfigPatch {
            gamma: self.gamma,
            tau: self.tau,
            a: self.a,
            b: self.b,
            k: None,
            r: None,
            omega: None,
            outer_iters: self.outer_iters,
            inner_sinkhorn_iters: self.inner_iters,
            bary_iters: self.bary_iters,
            bary_solver_iters: self.bary_solver_iters,
            bary_tol: self.bary_tol,
            tol: self.tol,
            seed: self.seed,
        };
        apply_patch(&mut cfg, flag_patch);
        cfg.validate().map_err(anyhow::Error::new)?;
        Ok(cfg)
    }
}

fn apply_patch(cfg: &mut SolverConfig, patch: ConfigPatch) {
    macro_rules! set {
        ($($field:ident),*) => {
            $(if let Some(v) = patch.$field { cfg.$field = v; })*
        };
    }
    set!(gamma, tau, a, b, k, r, outer_iters, inner_sinkhorn_iters, bary_iters, bary_tol, tol, seed);
    if let Some(v) = patch.bary_solver_iters {
        cfg.bary_solver_iters = Some(v);
    }
    if patch.omega.is_some() {
        cfg.omega = patch.omega;
    }
}

/// Relative output paths resolve under `GWLEARN_OUT_DIR` when it is set.
pub fn resolve_out(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os("GWLEARN_OUT_DIR") {
        Some(dir) => Path::new(&dir).join(path),
        None => path.to_path_buf(),
    }
}

pub(crate) fn write_output(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

#[derive(Args)]
struct GenerateArgs {
    /// Output prefix; writes `<prefix>.edges` and, when ground truth exists,
    /// `<prefix>.truth`.
    #[arg(default_value = "graph")]
    out_prefix: PathBuf,
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0.2)]
    p_in: f64,
    #[arg(long, default_value_t = 0.05)]
    p_out: f64,
    /// Fixed cluster count (equal sizes); overrides --cluster-mean/std.
    #[arg(long)]
    clusters: Option<usize>,
    #[arg(long, default_value_t = 200.0)]
    cluster_mean: f64,
    #[arg(long, default_value_t = 10.0)]
    cluster_std: f64,
    /// Attachment count for the preferential-attachment model.
    #[arg(long, default_value_t = 3)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Node-distribution shape of the generated graph.
    #[arg(long, default_value_t = 0.0)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    /// Instead of generating, add noise to this edge list.
    #[arg(long)]
    noise_from: Option<PathBuf>,
    /// Noise percentage for --noise-from.
    #[arg(long, default_value_t = 5.0)]
    q: f64,
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let started = Instant::now();
    let prefix = resolve_out(&args.out_prefix);
    let edges_path = prefix.with_extension("edges");
    let truth_path = prefix.with_extension("truth");
    let mut manifest = RunManifest::new("generate", SolverConfig::default());
    manifest.seed = args.seed;

    let (graph, truth_text, instance) = if let Some(src) = &args.noise_from {
        manifest.add_input(src)?;
        let g = formats::load_graph(src, DirectedPolicy::Symmetrize, args.a, args.b)?;
        let (noisy, pairing) = add_noise(&g, args.q, args.seed)?;
        let instance = format!("noise q={} of {}", args.q, src.display());
        (noisy, Some(formats::correspondence_text(&pairing)), instance)
    } else {
        let kind = args.kind.context("--kind is required unless --noise-from is given")?;
        let n = args.n.context("--n is required")?;
        let spec = match kind {
            KindArg::Gaussian => {
                let mut spec = GeneratorSpec::gaussian(n, args.p_in, args.p_out, args.seed);
                if let Some(c) = args.clusters {
                    if c == 0 {
                        bail!("--clusters must be at least 1");
                    }
                    spec.cluster_mean = (n as f64 / c as f64).ceil().max(1.0);
                    spec.cluster_std = 0.0;
                } else {
                    spec.cluster_mean = args.cluster_mean;
                    spec.cluster_std = args.cluster_std;
                }
                spec.dist_a = args.a;
                spec.dist_b = args.b;
                spec
            }
            KindArg::Ba => {
                let mut spec = GeneratorSpec::barabasi_albert(n, args.m, args.seed);
                spec.dist_a = args.a;
                spec.dist_b = args.b;
                spec
            }
        };
        let (g, truth) = generate(&spec)?;
        let truth_text = truth.map(|t| formats::partition_text(&t));
        let instance = format!("{:?} n={n} seed={}", spec.kind, args.seed);
        (g, truth_text, instance)
    };

    write_output(&edges_path, &formats::edge_list_text(&graph))?;
    manifest.record_output(&edges_path);
    if let Some(text) = truth_text {
        write_output(&truth_path, &text)?;
        manifest.record_output(&truth_path);
    }
    manifest.report.instance = instance;
    manifest.report.wall_time_seconds = Some(started.elapsed().as_secs_f64());
    manifest.wall_time_seconds = started.elapsed().as_secs_f64();
    manifest.write_next_to(&edges_path)?;
    println!(
        "wrote {} ({} nodes, {} edges)",
        edges_path.display(),
        graph.num_nodes(),
        graph.num_undirected_edges()
    );
    Ok(())
}

#[derive(Args)]
struct PartitionArgs {
    edges: PathBuf,
    #[arg(long)]
    k: usize,
    /// Ground-truth partition file for AMI.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "symmetrize")]
    directed: DirectedArg,
    #[command(flatten)]
    solver: SolverArgs,
}

fn cmd_partition(args: PartitionArgs) -> Result<()> {
    let cfg = args.solver.resolve()?;
    let out = resolve_out(&args.out);
    let mut manifest = RunManifest::new("partition", cfg.clone());
    manifest.add_input(&args.edges)?;
    let g = formats::load_graph(&args.edges, args.directed.into(), cfg.a, cfg.b)?;

    let started = Instant::now();
    let partition = partition_one(&g, &cfg, args.k)?;
    let elapsed = started.elapsed().as_secs_f64();

    write_output(&out, &formats::partition_text(&partition))?;
    manifest.record_output(&out);
    manifest.report.instance = format!("partition k={} of {}", args.k, args.edges.display());
    manifest.report.wall_time_seconds = Some(elapsed);
    manifest.wall_time_seconds = elapsed;
    if let Some(truth_path) = &args.truth {
        manifest.add_input(truth_path)?;
        let map = formats::read_partition_assignment(truth_path)?;
        let truth = formats::partition_from_map(&g, &map)?;
        let ami = adjusted_mutual_information(&partition, &truth)?;
        manifest.report.ami = Some(ami);
        println!("ami {ami:.4}");
    }
    manifest.write_next_to(&out)?;
    println!("wrote {} ({:.2}s)", out.display(), elapsed);
    Ok(())
}

#[derive(Args)]
struct MatchArgs {
    src: PathBuf,
    tgt: PathBuf,
    #[arg(long, value_enum, default_value = "gwl")]
    mode: ModeArg,
    /// Recursive fan-out (s-gwl mode).
    #[arg(long)]
    k: Option<usize>,
    /// Recursion depth (s-gwl mode).
    #[arg(long)]
    r: Option<usize>,
    /// Ground-truth pairing file (`src tgt` per line) for node correctness.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "symmetrize")]
    directed: DirectedArg,
    /// Worker threads for recursive branches.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[command(flatten)]
    solver: SolverArgs,
}

fn cmd_match(args: MatchArgs) -> Result<()> {
    let mut cfg = args.solver.resolve()?;
    if let Some(k) = args.k {
        cfg.k = k;
    }
    if let Some(r) = args.r {
        cfg.r = r;
    }
    cfg.validate().map_err(anyhow::Error::new)?;
    let out = resolve_out(&args.out);
    let mut manifest = RunManifest::new("match", cfg.clone());
    manifest.add_input(&args.src)?;
    manifest.add_input(&args.tgt)?;
    let gs = formats::load_graph(&args.src, args.directed.into(), cfg.a, cfg.b)?;
    let gt = formats::load_graph(&args.tgt, args.directed.into(), cfg.a, cfg.b)?;

    let started = Instant::now();
    let pairs = match args.mode {
        ModeArg::Gwl => match_two(&gs, &gt, &cfg)?,
        ModeArg::SGwl => {
            let (pairs, trace) = s_gwl_with_threads(&[gs.clone(), gt.clone()], &cfg, args.threads)?;
            for w in &trace.warnings {
                eprintln!("warning: {w}");
            }
            pairs
        }
    };
    let elapsed = started.elapsed().as_secs_f64();

    write_output(&out, &formats::correspondence_text(&pairs))?;
    manifest.record_output(&out);
    manifest.report.instance = format!(
        "match mode={} {} -> {}",
        match args.mode {
            ModeArg::Gwl => "gwl",
            ModeArg::SGwl => "s-gwl",
        },
        args.src.display(),
        args.tgt.display()
    );
    manifest.report.wall_time_seconds = Some(elapsed);
    manifest.wall_time_seconds = elapsed;
    if let Some(truth_path) = &args.truth {
        manifest.add_input(truth_path)?;
        let truth = formats::read_correspondences(truth_path)?;
        let nc = node_correctness(&pairs, &truth)?;
        manifest.report.nc = Some(nc);
        println!("nc {nc:.2}");
    }
    manifest.write_next_to(&out)?;
    println!("wrote {} ({:.2}s, {} pairs)", out.display(), elapsed, pairs.len());
    Ok(())
}

#[derive(Args)]
struct MultimatchArgs {
    /// Edge-list files of the graphs to match (at least two).
    #[arg(required = true, num_args = 2..)]
    edges: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "gwl")]
    mode: ModeArg,
    /// Recursive fan-out (s-gwl mode).
    #[arg(long)]
    k: Option<usize>,
    /// Recursion depth (s-gwl mode).
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "symmetrize")]
    directed: DirectedArg,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[command(flatten)]
    solver: SolverArgs,
}

fn cmd_multimatch(args: MultimatchArgs) -> Result<()> {
    let mut cfg = args.solver.resolve()?;
    if let Some(k) = args.k {
        cfg.k = k;
    }
    if let Some(r) = args.r {
        cfg.r = r;
    }
    cfg.validate().map_err(anyhow::Error::new)?;
    let out = resolve_out(&args.out);
    let mut manifest = RunManifest::new("multimatch", cfg.clone());
    let mut graphs = Vec::new();
    for path in &args.edges {
        manifest.add_input(path)?;
        graphs.push(formats::load_graph(path, args.directed.into(), cfg.a, cfg.b)?);
    }

    let started = Instant::now();
    let tuples = match args.mode {
        ModeArg::Gwl => multi_match(&graphs, &cfg)?,
        ModeArg::SGwl => {
            let (tuples, trace) = s_gwl_with_threads(&graphs, &cfg, args.threads)?;
            for w in &trace.warnings {
                eprintln!("warning: {w}");
            }
            tuples
        }
    };
    let elapsed = started.elapsed().as_secs_f64();

    write_output(&out, &formats::correspondence_text(&tuples))?;
    manifest.record_output(&out);
    manifest.report.instance = format!("multimatch of {} graphs", graphs.len());
    manifest.report.wall_time_seconds = Some(elapsed);
    manifest.wall_time_seconds = elapsed;
    // Label identity is the ground truth of the noisy-copy protocol; the
    // scores are meaningless when the inputs use unrelated label sets.
    match nc_multi(&tuples) {
        Ok((nc1, ncall)) => {
            manifest.report.nc_at_1 = Some(nc1);
            manifest.report.nc_at_all = Some(ncall);
            println!("nc@1 {nc1:.2}  nc@all {ncall:.2}");
        }
        Err(e) => eprintln!("note: identity NC not computed: {e}"),
    }
    manifest.write_next_to(&out)?;
    println!("wrote {} ({:.2}s, {} tuples)", out.display(), elapsed, tuples.len());
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Generate(args) => cmd_generate(args),
        Command::Partition(args) => cmd_partition(args),
        Command::Match(args) => cmd_match(args),
        Command::Multimatch(args) => cmd_multimatch(args),
        Command::Bench(args) => bench::run(args),
    }
}
