//! Config-driven parameter sweeps.
//!
//! A sweep runs `trials` planted instances for every cell of a parameter
//! grid, in a work pool, and writes one CSV row and one JSON record per cell
//! in deterministic grid order. Outputs contain no timing, so identical
//! config and seed give byte-identical files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use latrec_core::instruments::{gen_instance, solve_generated, verify_planted, GenParams, InstanceKind};
use latrec_core::rng::derive_seed;

/// Grid knobs, in the frozen CSV column order.
const KNOBS: [&str; 9] =
    ["n", "p", "n_bits", "precision_bits", "q", "r", "support_size", "rational_count", "sigma_log2"];

pub struct SweepConfig {
    pub kind: InstanceKind,
    pub grid: BTreeMap<String, Vec<i64>>,
    pub trials: u64,
    pub master_seed: u64,
    pub out_csv: PathBuf,
    pub out_json: PathBuf,
}

pub fn parse_config(v: &Value) -> Result<SweepConfig> {
    let obj = v.as_object().ok_or_else(|| anyhow!("config must be a JSON object"))?;
    let kind_str = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| anyhow!("config field 'kind' missing or not a string"))?;
    let kind = InstanceKind::parse(kind_str)
        .ok_or_else(|| anyhow!("config field 'kind': unknown kind {:?}", kind_str))?;
    let grid_obj = obj
        .get("grid")
        .and_then(Value::as_object)
        .ok_or_else(|| anyhow!("config field 'grid' missing or not an object"))?;
    let mut grid = BTreeMap::new();
    for (k, vals) in grid_obj {
        if !KNOBS.contains(&k.as_str()) {
            bail!("config field 'grid.{}': unknown parameter", k);
        }
        let arr = vals
            .as_array()
            .ok_or_else(|| anyhow!("config field 'grid.{}' must be a list", k))?;
        if arr.is_empty() {
            bail!("config field 'grid.{}' must be nonempty", k);
        }
        let parsed: Vec<i64> = arr
            .iter()
            .map(|x| x.as_i64().ok_or_else(|| anyhow!("config field 'grid.{}': non-integer entry", k)))
            .collect::<Result<_>>()?;
        grid.insert(k.clone(), parsed);
    }
    if !grid.contains_key("p") {
        bail!("config field 'grid.p' is required");
    }
    let trials = obj
        .get("trials")
        .and_then(Value::as_u64)
        .ok_or_else(|| anyhow!("config field 'trials' missing or not a positive integer"))?;
    if trials == 0 {
        bail!("config field 'trials' must be >= 1");
    }
    let master_seed = obj.get("master_seed").and_then(Value::as_u64).unwrap_or(0);
    let out_csv = obj
        .get("out_csv")
        .and_then(Value::as_str)
        .ok_or_else(|| anyhow!("config field 'out_csv' missing"))?;
    let out_json = obj
        .get("out_json")
        .and_then(Value::as_str)
        .ok_or_else(|| anyhow!("config field 'out_json' missing"))?;
    Ok(SweepConfig {
        kind,
        grid,
        trials,
        master_seed,
        out_csv: PathBuf::from(out_csv),
        out_json: PathBuf::from(out_json),
    })
}

/// Cells in deterministic order: knobs iterate in `KNOBS` order, last knob
/// fastest.
fn cells(config: &SweepConfig) -> Vec<BTreeMap<String, i64>> {
    let active: Vec<(&str, &Vec<i64>)> = KNOBS
        .iter()
        .filter_map(|&k| config.grid.get(k).map(|v| (k, v)))
        .collect();
    let mut out: Vec<BTreeMap<String, i64>> = vec![BTreeMap::new()];
    for (k, vals) in active {
        let mut next = Vec::with_capacity(out.len() * vals.len());
        for cell in &out {
            for v in vals {
                let mut c = cell.clone();
                c.insert(k.to_string(), *v);
                next.push(c);
            }
        }
        out = next;
    }
    out
}

fn params_of_cell(cell: &BTreeMap<String, i64>) -> Result<GenParams> {
    let get_usize = |k: &str| -> Option<usize> { cell.get(k).map(|&v| v as usize) };
    let mut p = GenParams::new(get_usize("n").unwrap_or(1), get_usize("p").unwrap_or(1));
    p.n_bits = cell.get("n_bits").map(|&v| u32::try_from(v)).transpose()?;
    p.precision = cell.get("precision_bits").map(|&v| u32::try_from(v)).transpose()?;
    p.q = cell.get("q").map(|&v| u64::try_from(v)).transpose()?;
    p.r = cell.get("r").map(|&v| u64::try_from(v)).transpose()?;
    p.support_size = get_usize("support_size");
    p.rational_count = get_usize("rational_count");
    p.sigma_log2 = cell.get("sigma_log2").copied();
    Ok(p)
}

pub(crate) struct TrialOutcome {
    pub exact: bool,
    fail_reason: Option<String>,
    lll: u64,
    pslq: u64,
}

pub(crate) struct CellSummary {
    pub cell: BTreeMap<String, i64>,
    pub trials: u64,
    pub exact: u64,
    pub failures: BTreeMap<String, u64>,
    pub lll: u64,
    pub pslq: u64,
}

pub fn cmd_sweep(
    config_path: &Path,
    trials_override: Option<u64>,
    seed_override: Option<u64>,
    format: &str,
) -> Result<ExitCode> {
    let raw = std::fs::read_to_string(config_path)
        .with_context(|| format!("reading {}", config_path.display()))?;
    let v: Value = serde_json::from_str(&raw).context("config is not valid JSON")?;
    let mut config = parse_config(&v)?;
    if let Some(t) = trials_override {
        if t == 0 {
            bail!("--trials must be >= 1");
        }
        config.trials = t;
    }
    if let Some(s) = seed_override {
        config.master_seed = s;
    }
    let summaries = run_sweep(&config)?;
    write_outputs(&config, &v, &summaries, format)?;
    eprintln!(
        "sweep complete: {} cells x {} trials -> {}, {}",
        summaries.len(),
        config.trials,
        config.out_csv.display(),
        config.out_json.display()
    );
    Ok(ExitCode::SUCCESS)
}

pub fn run_sweep(config: &SweepConfig) -> Result<Vec<CellSummary>> {
    let cell_list = cells(config);
    // validate every cell's parameters before doing any work
    for cell in &cell_list {
        params_of_cell(cell)?;
    }
    let trials = config.trials;
    let jobs: Vec<(usize, u64)> = (0..cell_list.len())
        .flat_map(|c| (0..trials).map(move |t| (c, t)))
        .collect();

    let outcomes: Vec<TrialOutcome> = jobs
        .par_iter()
        .map(|&(cell_idx, trial)| {
            let params = params_of_cell(&cell_list[cell_idx]).expect("validated");
            let seed = derive_seed(config.master_seed, cell_idx as u64, trial);
            let run = || -> std::result::Result<TrialOutcome, String> {
                let inst = gen_instance(config.kind, &params, seed)?;
                verify_planted(&inst)?;
                let out = solve_generated(&inst)?;
                let (exact, fail_reason) = if out.ok {
                    match out.exact {
                        Some(true) => (true, None),
                        Some(false) => (false, Some("wrong_estimate".to_string())),
                        None => (false, None),
                    }
                } else {
                    let reason = out
                        .json
                        .pointer("/estimate/failure")
                        .map(failure_label)
                        .unwrap_or_else(|| "failure".to_string());
                    (false, Some(reason))
                };
                let lll = out.json.pointer("/counters/lll_invocations").and_then(Value::as_u64).unwrap_or(0);
                let pslq = out.json.pointer("/counters/pslq_iterations").and_then(Value::as_u64).unwrap_or(0);
                Ok(TrialOutcome { exact, fail_reason, lll, pslq })
            };
            run().unwrap_or_else(|e| TrialOutcome {
                exact: false,
                fail_reason: Some(format!("error: {}", e)),
                lll: 0,
                pslq: 0,
            })
        })
        .collect();

    // aggregate in deterministic grid order
    let mut summaries = Vec::with_capacity(cell_list.len());
    for (cell_idx, cell) in cell_list.into_iter().enumerate() {
        let mut summary = CellSummary {
            cell,
            trials,
            exact: 0,
            failures: BTreeMap::new(),
            lll: 0,
            pslq: 0,
        };
        for t in 0..trials as usize {
            let o = &outcomes[cell_idx * trials as usize + t];
            if o.exact {
                summary.exact += 1;
            }
            if let Some(r) = &o.fail_reason {
                *summary.failures.entry(r.clone()).or_insert(0) += 1;
            }
            summary.lll += o.lll;
            summary.pslq += o.pslq;
        }
        summaries.push(summary);
    }
    Ok(summaries)
}

fn failure_label(v: &Value) -> String {
    match (v.pointer("/stage").and_then(Value::as_str), v.pointer("/reason").and_then(Value::as_str)) {
        (Some(s), Some(r)) => format!("{}:{}", s, r),
        _ => v.as_str().map(|s| s.to_string()).unwrap_or_else(|| "failure".to_string()),
    }
}

fn write_outputs(
    config: &SweepConfig,
    config_echo: &Value,
    summaries: &[CellSummary],
    format: &str,
) -> Result<()> {
    // CSV: frozen column order, no timing (outputs must be byte-identical
    // across reruns)
    let mut csv = String::new();
    csv.push_str("cell");
    for k in KNOBS {
        csv.push(',');
        csv.push_str(k);
    }
    csv.push_str(",trials,exact,failed,failure_reasons,lll_invocations,pslq_iterations\n");
    for (i, s) in summaries.iter().enumerate() {
        csv.push_str(&i.to_string());
        for k in KNOBS {
            csv.push(',');
            if let Some(v) = s.cell.get(k) {
                csv.push_str(&v.to_string());
            }
        }
        let failed: u64 = s.failures.values().sum();
        let reasons: Vec<String> = s.failures.iter().map(|(k, v)| format!("{}={}", k, v)).collect();
        csv.push_str(&format!(
            ",{},{},{},{},{},{}\n",
            s.trials,
            s.exact,
            failed,
            reasons.join(";"),
            s.lll,
            s.pslq
        ));
    }
    if format != "json" {
        std::fs::write(&config.out_csv, csv)
            .with_context(|| format!("writing {}", config.out_csv.display()))?;
    }

    let rows: Vec<Value> = summaries
        .iter()
        .map(|s| {
            json!({
                "params": s.cell,
                "trials": s.trials,
                "exact_recoveries": s.exact,
                "failures": s.failures,
                "lll_invocations": s.lll,
                "pslq_iterations": s.pslq,
            })
        })
        .collect();
    if format != "csv" {
        let doc = json!({ "config": config_echo, "cells": rows });
        std::fs::write(&config.out_json, serde_json::to_string_pretty(&doc)? + "\n")
            .with_context(|| format!("writing {}", config.out_json.display()))?;
    }
    Ok(())
}
