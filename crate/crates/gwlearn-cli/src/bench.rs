//! Benchmark suites: seeded end-to-end experiments with aggregate tables.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::Args;
use gwlearn::metrics::{adjusted_mutual_information, node_correctness};
use gwlearn::synthetic::{add_noise, generate, GeneratorSpec};
use gwlearn::tasks::{match_two, partition_one, s_gwl_with_threads};
use gwlearn::{Preset, SolverConfig};

use crate::{resolve_out, write_output, SolverArgs};

#[derive(Args)]
pub struct BenchArgs {
    /// Suite name: partition-synthetic, match-synthetic or speedup.
    suite: String,
    #[arg(long, default_value = "bench-out")]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    /// Node count of the generated graphs.
    #[arg(long)]
    n: Option<usize>,
    /// Noise percentage for the matching suites.
    #[arg(long, default_value_t = 5.0)]
    q: f64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Recursive fan-out (matching suites).
    #[arg(long)]
    k: Option<usize>,
    /// Recursion depth (matching suites).
    #[arg(long)]
    r: Option<usize>,
    #[command(flatten)]
    solver: SolverArgs,
}

/// Cluster sizes follow the benchmark protocol at full scale and shrink
/// proportionally for smaller smoke runs.
fn cluster_mean_for(n: usize) -> f64 {
    if n >= 2000 {
        200.0
    } else {
        (n as f64 / 10.0).max(2.0)
    }
}

pub fn run(args: BenchArgs) -> Result<()> {
    match args.suite.as_str() {
        "partition-synthetic" => partition_synthetic(args),
        "match-synthetic" => match_synthetic(args),
        "speedup" => speedup(args),
        "" => bail!("suite name is empty"),
        other => bail!(
            "unknown suite {other:?}; available: partition-synthetic, match-synthetic, speedup"
        ),
    }
}

fn base_config(args: &BenchArgs, preset: Preset) -> Result<SolverConfig> {
    let mut solver = args.solver.clone();
    if solver.preset.is_none() {
        solver.preset = Some(preset.name().into());
    }
    let mut cfg = solver.resolve()?;
    if let Some(k) = args.k {
        cfg.k = k;
    }
    if let Some(r) = args.r {
        cfg.r = r;
    }
    cfg.validate().map_err(anyhow::Error::new)?;
    Ok(cfg)
}

/// Mean AMI of the partitioning preset over Gaussian partition graphs at
/// the three inter-cluster densities.
fn partition_synthetic(args: BenchArgs) -> Result<()> {
    let dir = resolve_out(&args.out_dir);
    let cfg = base_config(&args, Preset::SyntheticPartition)?;
    let n = args.n.unwrap_or(4000);
    let mut table = String::from("n\tp_in\tp_out\tseeds\tmean_ami\tmean_seconds\n");
    for p_out in [0.05, 0.1, 0.15] {
        let mut amis = Vec::new();
        let mut times = Vec::new();
        for seed in 0..args.seeds {
            let mut spec = GeneratorSpec::gaussian(n, 0.2, p_out, seed);
            spec.cluster_mean = cluster_mean_for(n);
            spec.cluster_std = spec.cluster_mean / 20.0;
            let (graph, truth) = generate(&spec)?;
            let truth = truth.context("gaussian generator returns ground truth")?;
            let mut run_cfg = cfg.clone();
            run_cfg.seed = seed;
            let started = Instant::now();
            let partition = partition_one(&graph, &run_cfg, truth.num_clusters())?;
            times.push(started.elapsed().as_secs_f64());
            amis.push(adjusted_mutual_information(&partition, &truth)?);
        }
        let mean_ami = amis.iter().sum::<f64>() / amis.len() as f64;
        let mean_time = times.iter().sum::<f64>() / times.len() as f64;
        println!("(n={n}, 0.2, {p_out}): mean AMI {mean_ami:.3} over {} seeds", args.seeds);
        let _ = writeln!(table, "{n}\t0.2\t{p_out}\t{}\t{mean_ami:.4}\t{mean_time:.2}", args.seeds);
    }
    let out = dir.join("partition-synthetic.tsv");
    write_output(&out, &table)?;
    println!("wrote {}", out.display());
    Ok(())
}

fn noisy_pair(n: usize, q: f64, seed: u64) -> Result<(gwlearn::MeasureGraph, gwlearn::MeasureGraph, gwlearn::CorrespondenceSet)> {
    let mut spec = GeneratorSpec::gaussian(n, 0.2, 0.05, seed);
    spec.cluster_mean = cluster_mean_for(n);
    spec.cluster_std = spec.cluster_mean / 20.0;
    let (gs, _) = generate(&spec)?;
    let (gt, truth) = add_noise(&gs, q, seed + 1000)?;
    Ok((gs, gt, truth))
}

/// Node correctness and runtime of both matching modes on noisy copies.
fn match_synthetic(args: BenchArgs) -> Result<()> {
    let dir = resolve_out(&args.out_dir);
    let cfg = base_config(&args, Preset::SyntheticMatch)?;
    let n = args.n.unwrap_or(2000);
    let mut table = String::from("seed\tmode\tnc\tseconds\n");
    for seed in 0..args.seeds {
        let (gs, gt, truth) = noisy_pair(n, args.q, seed)?;
        let mut run_cfg = cfg.clone();
        run_cfg.seed = seed;

        let started = Instant::now();
        let (pairs, _) = s_gwl_with_threads(&[gs.clone(), gt.clone()], &run_cfg, args.threads)?;
        let t_sgwl = started.elapsed().as_secs_f64();
        let nc_sgwl = node_correctness(&pairs, &truth)?;
        let _ = writeln!(table, "{seed}\ts-gwl\t{nc_sgwl:.2}\t{t_sgwl:.2}");

        let started = Instant::now();
        let pairs = match_two(&gs, &gt, &run_cfg)?;
        let t_gwl = started.elapsed().as_secs_f64();
        let nc_gwl = node_correctness(&pairs, &truth)?;
        let _ = writeln!(table, "{seed}\tgwl\t{nc_gwl:.2}\t{t_gwl:.2}");
        println!(
            "seed {seed}: s-gwl NC {nc_sgwl:.1}% ({t_sgwl:.1}s), gwl NC {nc_gwl:.1}% ({t_gwl:.1}s)"
        );
    }
    let out = dir.join("match-synthetic.tsv");
    write_output(&out, &table)?;
    println!("wrote {}", out.display());
    Ok(())
}

/// Wall-time ratio of direct matching to the recursive decomposition.
fn speedup(args: BenchArgs) -> Result<()> {
    let dir = resolve_out(&args.out_dir);
    let cfg = base_config(&args, Preset::SyntheticMatch)?;
    let n = args.n.unwrap_or(2000);
    let mut table = String::from("seed\tgwl_seconds\tsgwl_seconds\tratio\n");
    for seed in 0..args.seeds {
        let (gs, gt, _) = noisy_pair(n, args.q, seed)?;
        let mut run_cfg = cfg.clone();
        run_cfg.seed = seed;

        let started = Instant::now();
        let _ = s_gwl_with_threads(&[gs.clone(), gt.clone()], &run_cfg, args.threads)?;
        let t_sgwl = started.elapsed().as_secs_f64();
        let started = Instant::now();
        let _ = match_two(&gs, &gt, &run_cfg)?;
        let t_gwl = started.elapsed().as_secs_f64();
        let ratio = t_gwl / t_sgwl;
        println!("seed {seed}: gwl {t_gwl:.1}s / s-gwl {t_sgwl:.1}s = {ratio:.1}x");
        let _ = writeln!(table, "{seed}\t{t_gwl:.2}\t{t_sgwl:.2}\t{ratio:.2}");
    }
    let out = dir.join("speedup.tsv");
    write_output(&out, &table)?;
    println!("wrote {}", out.display());
    Ok(())
}
