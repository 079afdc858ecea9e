//! `latrec`: batch experiment harness for the lattice-recovery toolkit.
//!
//! Exit codes: 0 on success, 1 on usage errors (bad arguments, malformed
//! files), 2 when a solver reports a structured failure.

mod sweep;
mod values;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use latrec_core::arith::{rational_from_string, PrecReal};
use latrec_core::instruments::{
    self, coprime_fraction_experiment, gen_instance, generated_from_json, generated_to_json,
    solve_generated, verify_planted, GenParams, GeneratedInstance, InstanceKind,
};
use latrec_core::lattice::{basis_from_json, basis_to_json, lll_reduce, Delta, LatticeBasis};
use latrec_core::relation::{
    pslq_find_relation, screen_rational_independence, PrecisionPolicy, PslqOutcome, ScreenOutcome,
};

#[derive(Parser)]
#[command(name = "latrec", version, about = "lattice-based exact recovery toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// LLL-reduce an integer basis from a JSON file.
    Lll(LllArgs),
    /// Find an integer relation for a vector of values.
    Pslq(PslqArgs),
    /// Screen a set of values for rational independence.
    ScreenSupport(ScreenArgs),
    /// Solve a single-equation subset-sum instance.
    SubsetSum(InstanceArgs),
    /// Solve a dependent-product subset-sum instance.
    SubsetSumDep(InstanceArgs),
    /// Run the ELO solver on an instance file.
    SolveElo(InstanceArgs),
    /// Run the LBR solver on an instance file.
    SolveLbr(InstanceArgs),
    /// Run the JIRSS solver on an instance file.
    SolveJirss(InstanceArgs),
    /// Run the IHDR solver on an instance file.
    SolveIhdr(InstanceArgs),
    /// Run the MIRR solver on an instance file.
    SolveMirr(InstanceArgs),
    /// Run the MIRR-C solver on an instance file.
    SolveMirrc(InstanceArgs),
    /// Run the single-relation mixed solver on an instance file.
    SolveMixedIra(InstanceArgs),
    /// Run discrete phase retrieval on an instance file.
    SolvePhaseD(InstanceArgs),
    /// Run continuous phase retrieval on an instance file.
    SolvePhaseC(InstanceArgs),
    /// Evaluate every applicable threshold calculator.
    Bounds(BoundsArgs),
    /// Generate a planted instance.
    Gen(GenArgs),
    /// Run a config-driven parameter sweep.
    Sweep(SweepArgs),
    /// Estimate the uniform-pair coprimality fraction.
    CoprimeExperiment(CoprimeArgs),
}

#[derive(Args)]
struct LllArgs {
    /// Basis file: JSON {"d": int, "columns": [[decimal strings]]}.
    #[arg(long)]
    basis: PathBuf,
    /// Lovasz parameter as "num/den" in (1/4, 1).
    #[arg(long, default_value = "3/4")]
    delta: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PslqArgs {
    /// Values: decimal integers, decimal fractions, "sqrt:K", "rat:N/D", or
    /// canonical hex literals; comma-separated or one per --value.
    #[arg(long, value_delimiter = ',')]
    values: Vec<String>,
    #[arg(long, default_value_t = 256)]
    precision_bits: u32,
    /// Expected coefficient size (bits) the policy is budgeted for.
    #[arg(long, default_value_t = 32)]
    coeff_bits: u32,
}

#[derive(Args)]
struct ScreenArgs {
    #[arg(long, value_delimiter = ',')]
    values: Vec<String>,
    #[arg(long, default_value_t = 256)]
    precision_bits: u32,
    /// Screen the set together with 1 adjoined.
    #[arg(long, default_value_t = false)]
    include_one: bool,
}

#[derive(Args)]
struct InstanceArgs {
    /// Instance file produced by `latrec gen`.
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: usize,
    #[arg(long, default_value = "1")]
    r: String,
    #[arg(long, default_value = "1")]
    q: String,
    #[arg(long)]
    r_hat: Option<String>,
    #[arg(long)]
    q_hat: Option<String>,
    /// Noise level as log2 (sigma = 2^k); omit for zero noise.
    #[arg(long)]
    sigma_log2: Option<i64>,
    #[arg(long, default_value = "1/10")]
    epsilon: String,
    /// Density bound of the X distribution.
    #[arg(long, default_value = "1")]
    c: String,
    #[arg(long, default_value = "0")]
    w_inf: String,
}

#[derive(Args)]
struct GenArgs {
    /// One of: elo, lbr, jirss, ihdr, mirr, mirrc, phase_d, phase_c,
    /// subsetsum, dep_subsetsum.
    #[arg(long)]
    kind: String,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    n_bits: Option<u32>,
    #[arg(long)]
    precision_bits: Option<u32>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    support_size: Option<usize>,
    #[arg(long)]
    rational_count: Option<usize>,
    #[arg(long)]
    sigma_log2: Option<i64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep configuration (JSON document; see README for the schema).
    #[arg(long)]
    config: PathBuf,
    /// Override the config's trials-per-cell.
    #[arg(long)]
    trials: Option<u64>,
    /// Override the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Restrict which artifacts are written (default: both).
    #[arg(long, value_parser = ["csv", "json", "both"], default_value = "both")]
    format: String,
}

#[derive(Args)]
struct CoprimeArgs {
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 1_000_000)]
    range: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Lll(args) => cmd_lll(args),
        Command::Pslq(args) => cmd_pslq(args),
        Command::ScreenSupport(args) => cmd_screen(args),
        Command::SubsetSum(args) => cmd_solve(args, "subsetsum"),
        Command::SubsetSumDep(args) => cmd_solve(args, "dep_subsetsum"),
        Command::SolveElo(args) => cmd_solve(args, "elo"),
        Command::SolveLbr(args) => cmd_solve(args, "lbr"),
        Command::SolveJirss(args) => cmd_solve(args, "jirss"),
        Command::SolveIhdr(args) => cmd_solve(args, "ihdr"),
        Command::SolveMirr(args) => cmd_solve(args, "mirr"),
        Command::SolveMirrc(args) => cmd_solve(args, "mirrc"),
        Command::SolveMixedIra(args) => cmd_solve(args, "mixed_ira"),
        Command::SolvePhaseD(args) => cmd_solve(args, "phase_d"),
        Command::SolvePhaseC(args) => cmd_solve(args, "phase_c"),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Sweep(args) => sweep::cmd_sweep(&args.config, args.trials, args.seed, &args.format),
        Command::CoprimeExperiment(args) => cmd_coprime(args),
    }
}

fn emit(value: &Value, out: Option<&PathBuf>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(path) => std::fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => println!("{}", text),
    }
    Ok(())
}

fn cmd_lll(args: LllArgs) -> Result<ExitCode> {
    let raw = std::fs::read_to_string(&args.basis)
        .with_context(|| format!("reading {}", args.basis.display()))?;
    let v: Value = serde_json::from_str(&raw).context("basis file is not valid JSON")?;
    let basis = basis_from_json(&v).map_err(|e| anyhow!(e))?;
    let delta = parse_delta(&args.delta)?;
    let reduced = lll_reduce(&basis, delta).map_err(|e| anyhow!(e.to_string()))?;
    let first_norm_sq = LatticeBasis::norm_sq(reduced.column(0));
    let report = json!({
        "reduced": basis_to_json(&reduced),
        "first_vector_norm_sq": first_norm_sq.to_string(),
        "determinant": reduced.determinant().to_string(),
    });
    emit(&report, args.out.as_ref())?;
    Ok(ExitCode::SUCCESS)
}

fn parse_delta(s: &str) -> Result<Delta> {
    let (n, d) = s.split_once('/').ok_or_else(|| anyhow!("delta must be num/den"))?;
    Ok(Delta { num: n.trim().parse()?, den: d.trim().parse()? })
}

fn cmd_pslq(args: PslqArgs) -> Result<ExitCode> {
    if args.values.len() < 2 {
        bail!("need at least two values");
    }
    let vals: Vec<PrecReal> = args
        .values
        .iter()
        .map(|s| values::parse_value(s, args.precision_bits))
        .collect::<Result<_>>()?;
    let policy = PrecisionPolicy::for_relation_with_data(vals.len(), args.coeff_bits, args.precision_bits);
    let res = pslq_find_relation(&vals, &policy).map_err(|e| anyhow!(e.to_string()))?;
    let report = match &res.outcome {
        PslqOutcome::Found(rel) => json!({
            "input": args.values,
            "relation": rel.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "residual": rel.residual.to_string(),
            "iterations": res.iterations,
            "policy": policy,
        }),
        PslqOutcome::NotFound { certified_norm_bound } => json!({
            "input": args.values,
            "relation": Value::Null,
            "certified_norm_bound": certified_norm_bound.to_string(),
            "iterations": res.iterations,
            "policy": policy,
        }),
    };
    emit(&report, None)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_screen(args: ScreenArgs) -> Result<ExitCode> {
    let mut vals: Vec<PrecReal> = args
        .values
        .iter()
        .map(|s| values::parse_value(s, args.precision_bits))
        .collect::<Result<_>>()?;
    if args.include_one {
        vals.push(PrecReal::one(args.precision_bits));
    }
    let policy = PrecisionPolicy::for_relation(vals.len().max(2), 64);
    let outcome = screen_rational_independence(&vals, &policy).map_err(|e| anyhow!(e.to_string()))?;
    let report = match outcome {
        ScreenOutcome::IndependentUpToBound { bound } => json!({
            "outcome": "independent_up_to_bound",
            "bound": bound.to_string(),
        }),
        ScreenOutcome::DependentWithRelation(rel) => json!({
            "outcome": "dependent",
            "relation": rel.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "residual": rel.residual.to_string(),
        }),
    };
    emit(&report, None)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(args: InstanceArgs, expect_kind: &str) -> Result<ExitCode> {
    let raw = std::fs::read_to_string(&args.instance)
        .with_context(|| format!("reading {}", args.instance.display()))?;
    let v: Value = serde_json::from_str(&raw).context("instance file is not valid JSON")?;
    let inst = generated_from_json(&v).map_err(|e| anyhow!(e))?;
    let kind = match &inst {
        GeneratedInstance::Regression(r) => r.kind.clone(),
        GeneratedInstance::Phase(p) => {
            if matches!(p.x, instruments::PhaseX::Int(_)) { "phase_d".into() } else { "phase_c".into() }
        }
        GeneratedInstance::SubsetSum(s) => match s.kind {
            instruments::SubsetKind::Single => "subsetsum".to_string(),
            instruments::SubsetKind::Dependent => "dep_subsetsum".to_string(),
        },
    };
    // the single-relation mixed solver runs on n = 1 continuous mixed
    // instances, which `gen` emits under the mirrc kind
    let inst = if expect_kind == "mixed_ira" {
        instruments::as_mixed_ira(&inst).map_err(|e| anyhow!(e))?
    } else {
        if kind != expect_kind {
            bail!("instance kind is {:?} but this subcommand expects {:?}", kind, expect_kind);
        }
        inst
    };
    let outcome = solve_generated(&inst).map_err(|e| anyhow!(e))?;
    emit(&outcome.json, args.out.as_ref())?;
    Ok(if outcome.ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn cmd_bounds(args: BoundsArgs) -> Result<ExitCode> {
    let parse_int = |s: &str, what: &str| -> Result<BigInt> {
        s.parse::<BigInt>().map_err(|e| anyhow!("{}: {}", what, e))
    };
    let r = parse_int(&args.r, "r")?;
    let q = parse_int(&args.q, "q")?;
    let r_hat = args.r_hat.as_deref().map(|s| parse_int(s, "r_hat")).transpose()?.unwrap_or_else(|| r.clone());
    let q_hat = args.q_hat.as_deref().map(|s| parse_int(s, "q_hat")).transpose()?.unwrap_or_else(|| q.clone());
    let sigma = match args.sigma_log2 {
        Some(k) => PrecReal::exact_dyadic(BigInt::from(1), k),
        None => PrecReal::zero(64),
    };
    let query = instruments::BoundsQuery {
        n: args.n,
        p: args.p,
        r,
        q,
        r_hat,
        q_hat,
        sigma,
        epsilon: rational_from_string(&args.epsilon).map_err(|e| anyhow!(e.to_string()))?,
        c: rational_from_string(&args.c).map_err(|e| anyhow!(e.to_string()))?,
        w_inf: rational_from_string(&args.w_inf).map_err(|e| anyhow!(e.to_string()))?,
    };
    let report = bounds_report(&query).map_err(|e| anyhow!(e.to_string()))?;
    emit(&report, None)?;
    Ok(ExitCode::SUCCESS)
}

/// All calculators on one query, with exact intermediates for audit.
fn bounds_report(q: &instruments::BoundsQuery) -> std::result::Result<Value, instruments::BoundsError> {
    let elo = instruments::n_threshold_elo(q)?;
    let lbr_adv = instruments::n_threshold_lbr(q, false)?;
    let lbr_iid = instruments::n_threshold_lbr(q, true)?;
    let window = instruments::n_window_cor2(q)?;
    let mirr = instruments::n_threshold_mirr(q)?;
    let sigma_info = instruments::sigma_info_bound(q.n, q.p, &q.q, &q.r, 96);
    let sigma0 = instruments::sigma0_optimal(q.p, q.n, &q.r, &q.q, 96);
    let jirss_n = q.p * q.p; // diagnostic point: N ~ p^2 regime
    let jcv = instruments::jirss_condition_value(q.n, q.p, jirss_n as u32, &q.c, 96);
    Ok(json!({
        "n_threshold_elo": elo,
        "n_threshold_lbr_adversarial": lbr_json(&lbr_adv),
        "n_threshold_lbr_iid": lbr_json(&lbr_iid),
        "n_window_cor2": {
            "lower": window.lower,
            "upper": window.upper,
            "premise_ok": window.premise_ok,
            "window_nonempty": window.window_nonempty,
        },
        "n_threshold_mirr": mirr,
        "sigma_info_bound": { "value": sigma_info.to_string(), "approx": sigma_info.to_f64() },
        "sigma0_optimal": { "value": sigma0.to_string(), "approx": sigma0.to_f64() },
        "jirss_condition_value_at_n_bits_p_squared": {
            "n_bits": jirss_n,
            "value": jcv.to_string(),
            "approx": jcv.to_f64(),
        },
    }))
}

fn lbr_json(t: &instruments::LbrThreshold) -> Value {
    match t {
        instruments::LbrThreshold::Feasible(n) => json!(n),
        instruments::LbrThreshold::Infeasible => json!("infeasible"),
    }
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode> {
    let kind = InstanceKind::parse(&args.kind)
        .ok_or_else(|| anyhow!("unknown kind {:?}", args.kind))?;
    let mut params = GenParams::new(args.n, args.p);
    params.n_bits = args.n_bits;
    params.precision = args.precision_bits;
    params.q = args.q;
    params.r = args.r;
    params.support_size = args.support_size;
    params.rational_count = args.rational_count;
    params.sigma_log2 = args.sigma_log2;
    let inst = gen_instance(kind, &params, args.seed).map_err(|e| anyhow!(e))?;
    verify_planted(&inst).map_err(|e| anyhow!(e))?;
    emit(&generated_to_json(&inst), args.out.as_ref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_coprime(args: CoprimeArgs) -> Result<ExitCode> {
    if args.samples == 0 || args.range == 0 {
        bail!("samples and range must be positive");
    }
    let fraction = coprime_fraction_experiment(args.samples, args.range, args.seed);
    let limit = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
    let report = json!({
        "samples": args.samples,
        "range": args.range,
        "seed": args.seed,
        "fraction": fraction,
        "six_over_pi_squared": limit,
        "abs_deviation": (fraction - limit).abs(),
    });
    emit(&report, None)?;
    Ok(ExitCode::SUCCESS)
}

