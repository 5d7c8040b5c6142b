//! The experiment sweep: construct a SAG for every cell of a
//! (utilization x ht-ratio x algorithm x seed) grid and emit one CSV row per
//! cell. Cells run concurrently; row order is deterministic regardless of
//! scheduling.

use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use rayon::prelude::*;

use sag_core::analysis::report_from_stats;
use sag_core::constructor::{construct_stats, ConstructOptions};
use sag_core::generator::{c_u, generate, GenParams};
use sag_core::model::PriorityPolicy;
use sag_core::Variant;

use crate::{AlgoArg, Failure, PolicyArg, EXIT_OK};

#[derive(Args)]
pub struct SweepArgs {
    /// Utilization percentages, comma separated
    #[arg(long, value_delimiter = ',', default_value = "45,50,55,60,65,70,75")]
    utilizations: Vec<u32>,
    /// HT ratios in percent, comma separated
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0,10,20,30,40,50,60,70,80,90,100"
    )]
    ht_ratios: Vec<u32>,
    #[arg(long, default_value_t = 1000)]
    jobs_per_set: u32,
    /// Generator seeds; the full grid runs once per seed
    #[arg(long, visible_alias = "seed", value_delimiter = ',', default_value = "1")]
    seeds: Vec<u64>,
    /// Construction algorithms to run on every job set
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "original,extended,hybrid"
    )]
    algos: Vec<AlgoArg>,
    #[arg(long, value_enum, default_value = "fp")]
    policy: PolicyArg,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 10_000_000)]
    state_cap: usize,
}

struct CellOutcome {
    vertices: usize,
    edges: usize,
    max_width: usize,
    schedulable: bool,
    time_s: f64,
    scenario_log10: f64,
}

struct Row {
    utilization: u32,
    ht_ratio: u32,
    algorithm: Variant,
    seed: u64,
    outcome: Result<CellOutcome, String>,
}

fn run_cell(
    utilization: u32,
    ht_ratio: u32,
    algorithm: Variant,
    seed: u64,
    jobs_per_set: u32,
    policy: PriorityPolicy,
    state_cap: usize,
) -> Row {
    let outcome = (|| {
        let js = generate(GenParams::new(jobs_per_set, utilization, ht_ratio, seed))
            .map_err(|e| e.to_string())?;
        let started = Instant::now();
        let stats = construct_stats(&js, policy, algorithm, ConstructOptions { state_cap })
            .map_err(|e| e.to_string())?;
        let time_s = started.elapsed().as_secs_f64();
        let report = report_from_stats(&js, &stats, time_s).map_err(|e| e.to_string())?;
        Ok(CellOutcome {
            vertices: report.vertex_count,
            edges: report.edge_count,
            max_width: report.max_width,
            schedulable: report.schedulable,
            time_s,
            scenario_log10: report.scenario_log10,
        })
    })();
    Row {
        utilization,
        ht_ratio,
        algorithm,
        seed,
        outcome,
    }
}

pub fn cmd_sweep(args: SweepArgs) -> Result<u8, Failure> {
    if args.jobs_per_set == 0 {
        return Err(Failure::Input(anyhow::anyhow!("--jobs-per-set must be >= 1")));
    }
    for &u in &args.utilizations {
        if c_u(u) < 2 {
            return Err(Failure::Input(anyhow::anyhow!(
                "utilization {u}% gives an empty execution range (C_U < 2)"
            )));
        }
    }
    for &h in &args.ht_ratios {
        if h > 100 {
            return Err(Failure::Input(anyhow::anyhow!("ht ratio {h}% is above 100")));
        }
    }

    // Build cells in output order: by utilization, ht ratio, algorithm,
    // seed. The parallel map preserves this order in the collected rows.
    let mut cells: Vec<(u32, u32, Variant, u64)> = Vec::new();
    for &u in &args.utilizations {
        for &h in &args.ht_ratios {
            for &algo in &args.algos {
                for &seed in &args.seeds {
                    cells.push((u, h, Variant::from(algo), seed));
                }
            }
        }
    }

    let policy = PriorityPolicy::from(args.policy);
    let rows: Vec<Row> = cells
        .par_iter()
        .map(|&(u, h, algo, seed)| {
            run_cell(u, h, algo, seed, args.jobs_per_set, policy, args.state_cap)
        })
        .collect();

    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record([
            "utilization",
            "ht_ratio",
            "algorithm",
            "seed",
            "vertices",
            "edges",
            "max_width",
            "schedulable",
            "time_s",
            "scenario_log10",
            "error",
        ])
        .expect("csv header");
    for row in &rows {
        let record: Vec<String> = match &row.outcome {
            Ok(cell) => vec![
                row.utilization.to_string(),
                row.ht_ratio.to_string(),
                row.algorithm.to_string(),
                row.seed.to_string(),
                cell.vertices.to_string(),
                cell.edges.to_string(),
                cell.max_width.to_string(),
                cell.schedulable.to_string(),
                format!("{:.6}", cell.time_s),
                format!("{:.6}", cell.scenario_log10),
                String::new(),
            ],
            Err(message) => vec![
                row.utilization.to_string(),
                row.ht_ratio.to_string(),
                row.algorithm.to_string(),
                row.seed.to_string(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                message.clone(),
            ],
        };
        writer.write_record(&record).expect("csv row");
    }
    let bytes = writer.into_inner().expect("csv flush");
    let text = String::from_utf8(bytes).expect("csv is utf-8");
    crate::write_file(&args.out, &text)?;

    let failed = rows.iter().filter(|r| r.outcome.is_err()).count();
    println!(
        "cells={} failed={} out={}",
        rows.len(),
        failed,
        args.out.display()
    );
    Ok(EXIT_OK)
}
