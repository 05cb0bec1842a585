//! Command-line surface: load distributions from JSON, run frontier /
//! optimization / simulation / game analyses, emit CSV (sweeps) or JSON
//! (single analyses).
//!
//! Exit codes: 0 success, 1 validation error (single-line diagnostic on
//! stderr), 2 resource-cap refusal. Randomized commands require an explicit
//! --seed; there is no wall-clock default.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::dist::{CondStrategy, Dist};
use crate::error::{Error, Result};
use crate::kelly::{risk_reward_bound, solve_payoff_constrained, solve_risk_constrained};
use crate::resource::{
    conditional_negentropy_e_alpha, is_free_state, lengths_from_strategy, monotone_e_alpha,
    payout_bits, CodeMode,
};
use crate::sideinfo::{asymptotic_value, equilibrium_strategies, TripartiteDist};
use crate::sim::run_betting;
use crate::types::{
    enumerate_types_with_cap, log2_type_class_probability, type_class_probability_ld,
    type_class_size, DEFAULT_TYPE_CAP,
};
use crate::utility::{
    crra_optimal_strategy, eta_from_beta, expected_log_wealth_closed_form,
    expected_log_wealth_direct,
};

/// Parsed invocation: global knobs plus one subcommand.
#[derive(Debug, Parser)]
#[command(name = "kellylab", version, about = "Finite-horizon Kelly gambling toolkit")]
pub struct RunConfig {
    /// Worker threads for simulation and sweeps (default: machine parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep the risk-reward frontier over a grid of success floors.
    Frontier(FrontierArgs),
    /// Solve one constrained bet (risk budget or payoff floor).
    Optimize(OptimizeArgs),
    /// CRRA strategy and growth rates for a risk-aversion parameter.
    Utility(UtilityArgs),
    /// Seeded Monte Carlo of repeated betting.
    Simulate(SimulateArgs),
    /// Tripartite side-information game analysis.
    Sideinfo(SideinfoArgs),
    /// Resource monotones of a tripartite state.
    Monotones(MonotonesArgs),
    /// Code tables and payouts for the communication realization.
    Kraft(KraftArgs),
    /// Enumerate empirical types with sizes and probabilities.
    Types(TypesArgs),
}

#[derive(Debug, Args)]
pub struct FrontierArgs {
    /// JSON file with the race distribution P.
    #[arg(long)]
    pub p: PathBuf,
    /// JSON file with Bob's odds distribution Q_B.
    #[arg(long)]
    pub qb: PathBuf,
    /// Betting horizon.
    #[arg(long)]
    pub n: u64,
    /// Epsilon grid start:stop:step, e.g. 0.05:0.95:0.05.
    #[arg(long, value_name = "START:STOP:STEP")]
    pub eps_grid: String,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub p: PathBuf,
    #[arg(long)]
    pub qb: PathBuf,
    /// Success floor epsilon (risk-constrained solve; needs --n).
    #[arg(long, conflicts_with = "k_bits")]
    pub eps: Option<f64>,
    /// Horizon for the risk-constrained solve.
    #[arg(long)]
    pub n: Option<u64>,
    /// Reward floor in bits (payoff-constrained solve).
    #[arg(long)]
    pub k_bits: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct UtilityArgs {
    #[arg(long)]
    pub p: PathBuf,
    #[arg(long)]
    pub qb: PathBuf,
    /// Relative risk aversion (beta != 1; beta = 1 is the Kelly bet itself).
    #[arg(long)]
    pub beta: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub p: PathBuf,
    #[arg(long)]
    pub qa: PathBuf,
    #[arg(long)]
    pub qb: PathBuf,
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub trials: u64,
    /// Master seed (required: reproducibility is part of the contract).
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SideinfoArgs {
    /// JSON tensor file for P_XYZ.
    #[arg(long)]
    pub pxyz: PathBuf,
    /// Comma-separated report sections: value, equilibrium, free.
    #[arg(long, default_value = "value,equilibrium")]
    pub report: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MonotonesArgs {
    #[arg(long)]
    pub pxyz: PathBuf,
    /// Divergence order.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KraftArgs {
    /// Alice's strategy file.
    #[arg(long)]
    pub qa: PathBuf,
    /// Bob's odds file (enables the payout report).
    #[arg(long)]
    pub qb: Option<PathBuf>,
    /// Length mode: real or integer.
    #[arg(long, default_value = "real")]
    pub mode: String,
    /// Comma-separated outcome sequence for the payout, e.g. 0,1,0.
    #[arg(long)]
    pub outcome: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TypesArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub k: usize,
    /// Optional source distribution: adds exact and LD probabilities.
    #[arg(long)]
    pub p: Option<PathBuf>,
    /// Enumeration cap override.
    #[arg(long, default_value_t = DEFAULT_TYPE_CAP)]
    pub cap: u128,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

// ---------------------------------------------------------------------------
// file formats

#[derive(Debug, Serialize, Deserialize)]
struct DistFile {
    alphabet: usize,
    probs: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TensorFile {
    sizes: [usize; 3],
    probs: Vec<f64>,
}

fn load_dist(path: &Path) -> Result<Dist> {
    let text = fs::read_to_string(path)?;
    let file: DistFile = serde_json::from_str(&text)
        .map_err(|e| Error::MalformedInput(format!("{}: {e}", path.display())))?;
    if file.probs.len() != file.alphabet {
        return Err(Error::MalformedInput(format!(
            "{}: alphabet {} but {} probabilities",
            path.display(),
            file.alphabet,
            file.probs.len()
        )));
    }
    Dist::new(file.probs)
}

fn load_tensor(path: &Path) -> Result<TripartiteDist> {
    let text = fs::read_to_string(path)?;
    let file: TensorFile = serde_json::from_str(&text)
        .map_err(|e| Error::MalformedInput(format!("{}: {e}", path.display())))?;
    TripartiteDist::new(file.sizes[0], file.sizes[1], file.sizes[2], file.probs)
}

/// Serializes a Dist back into the interchange format.
fn dist_json(d: &Dist) -> serde_json::Value {
    serde_json::json!({ "alphabet": d.alphabet_size(), "probs": d.probs() })
}

fn strategy_json(s: &CondStrategy) -> serde_json::Value {
    serde_json::json!(s
        .rows()
        .iter()
        .map(|r| r.probs().to_vec())
        .collect::<Vec<_>>())
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

/// Fixed decimal format shared by all CSV output, so golden files are stable.
fn fmt_f(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.12}")
    } else {
        format!("{v}")
    }
}

// ---------------------------------------------------------------------------
// dispatch

/// Parses argv and runs the command, mapping errors onto exit codes.
pub fn parse_and_dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap handles --help/--version itself with exit code 0
            if e.use_stderr() {
                let first = e.to_string();
                let line = first.lines().next().unwrap_or("invalid arguments");
                eprintln!("error: {}", line.trim_start_matches("error: "));
                return 1;
            }
            print!("{e}");
            return 0;
        }
    };
    match run(config) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::TypeCapExceeded { .. } | Error::GridTooLarge(_) => 2,
                _ => 1,
            }
        }
    }
}

fn run(config: RunConfig) -> Result<()> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(config.command))
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Frontier(a) => cmd_frontier(a),
        Command::Optimize(a) => cmd_optimize(a),
        Command::Utility(a) => cmd_utility(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Sideinfo(a) => cmd_sideinfo(a),
        Command::Monotones(a) => cmd_monotones(a),
        Command::Kraft(a) => cmd_kraft(a),
        Command::Types(a) => cmd_types(a),
    }
}

fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidParameter(format!(
            "grid must be start:stop:step, got {spec}"
        )));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("bad grid number {s}")))
        })
        .collect::<Result<_>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if step <= 0.0 || stop < start {
        return Err(Error::InvalidParameter(format!("empty grid {spec}")));
    }
    let mut grid = Vec::new();
    let mut i = 0u64;
    loop {
        let v = start + step * i as f64;
        if v > stop + 1e-12 {
            break;
        }
        grid.push(v);
        i += 1;
    }
    Ok(grid)
}

fn cmd_frontier(a: FrontierArgs) -> Result<()> {
    let p = load_dist(&a.p)?;
    let qb = load_dist(&a.qb)?;
    let grid = parse_grid(&a.eps_grid)?;
    for &eps in &grid {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon grid leaves (0, 1]: {eps}"
            )));
        }
    }
    // grid points are independent; collect in order so output stays stable
    let rows: Vec<Result<String>> = {
        use rayon::prelude::*;
        grid.par_iter()
            .map(|&eps| {
                let point = solve_risk_constrained(&p, &qb, eps, a.n)?;
                let bound = if point.constraint_slack {
                    // beyond the family range the identity bound is evaluated
                    // at the achieved exponent, where it meets the reward
                    point.reward_bits_per_round
                } else {
                    risk_reward_bound(&p, &qb, eps, a.n)?
                };
                Ok(format!(
                    "{},{},{},{},{}",
                    fmt_f(eps),
                    fmt_f(point.eta),
                    fmt_f(point.reward_bits_per_round),
                    fmt_f(point.risk_exponent),
                    fmt_f(bound)
                ))
            })
            .collect()
    };
    let mut csv = String::from("epsilon,eta,reward_bits,risk_exponent,bound_bits\n");
    for row in rows {
        let _ = writeln!(csv, "{}", row?);
    }
    emit(&a.out, &csv)
}

fn cmd_optimize(a: OptimizeArgs) -> Result<()> {
    let p = load_dist(&a.p)?;
    let qb = load_dist(&a.qb)?;
    let point = match (a.eps, a.k_bits) {
        (Some(eps), None) => {
            let n = a.n.ok_or_else(|| {
                Error::InvalidParameter("--eps needs a horizon --n".into())
            })?;
            solve_risk_constrained(&p, &qb, eps, n)?
        }
        (None, Some(k)) => solve_payoff_constrained(&p, &qb, k)?,
        _ => {
            return Err(Error::InvalidParameter(
                "pass exactly one of --eps (with --n) or --k-bits".into(),
            ))
        }
    };
    let json = serde_json::json!({
        "epsilon": point.epsilon,
        "eta": point.eta,
        "multiplier_eta": point.multiplier_eta(),
        "strategy": dist_json(&point.strategy),
        "reward_bits_per_round": point.reward_bits_per_round,
        "risk_exponent": point.risk_exponent,
        "constraint_slack": point.constraint_slack,
    });
    emit(&a.out, &format!("{}\n", serde_json::to_string_pretty(&json).unwrap()))
}

fn cmd_utility(a: UtilityArgs) -> Result<()> {
    let p = load_dist(&a.p)?;
    let qb = load_dist(&a.qb)?;
    let eta = eta_from_beta(a.beta)?;
    let strategy = crra_optimal_strategy(&p, &qb, a.beta)?;
    let closed = expected_log_wealth_closed_form(&p, &qb, eta)?;
    let direct = expected_log_wealth_direct(&p, &strategy, &qb)?;
    let json = serde_json::json!({
        "beta": a.beta,
        "eta": eta,
        "strategy": dist_json(&strategy),
        "growth_rate_closed_form_bits": closed,
        "growth_rate_direct_bits": direct,
    });
    emit(&a.out, &format!("{}\n", serde_json::to_string_pretty(&json).unwrap()))
}

fn cmd_simulate(a: SimulateArgs) -> Result<()> {
    let p = load_dist(&a.p)?;
    let qa = load_dist(&a.qa)?;
    let qb = load_dist(&a.qb)?;
    let stats = run_betting(&p, &qa, &qb, a.n, a.trials, a.seed)?;
    let json = serde_json::json!({
        "n": stats.n_rounds,
        "trials": stats.trials,
        "seed": a.seed,
        "mean_rate_bits": stats.mean_rate,
        "rate_std_bits": stats.rate_variance.sqrt(),
        "ruin_count": stats.ruin_count,
    });
    emit(&a.out, &format!("{}\n", serde_json::to_string_pretty(&json).unwrap()))
}

fn cmd_sideinfo(a: SideinfoArgs) -> Result<()> {
    let t = load_tensor(&a.pxyz)?;
    let mut json = serde_json::Map::new();
    for section in a.report.split(',') {
        match section.trim() {
            "value" => {
                json.insert(
                    "value_bits_per_round".into(),
                    serde_json::json!(asymptotic_value(&t)),
                );
            }
            "equilibrium" => {
                let (alice, bob) = equilibrium_strategies(&t);
                json.insert(
                    "equilibrium".into(),
                    serde_json::json!({
                        "alice_z_given_x": strategy_json(&alice),
                        "bob_z_given_y": strategy_json(&bob),
                    }),
                );
            }
            "free" => {
                json.insert(
                    "is_free_state".into(),
                    serde_json::json!(is_free_state(&t, 1e-9)),
                );
            }
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown report section {other} (expected value, equilibrium, free)"
                )))
            }
        }
    }
    let json = serde_json::Value::Object(json);
    emit(&a.out, &format!("{}\n", serde_json::to_string_pretty(&json).unwrap()))
}

fn cmd_monotones(a: MonotonesArgs) -> Result<()> {
    let t = load_tensor(&a.pxyz)?;
    let exz = monotone_e_alpha(t.marginal_xz(), a.alpha)?;
    let eyz = monotone_e_alpha(t.marginal_yz(), a.alpha)?;
    let nzx = conditional_negentropy_e_alpha(t.marginal_xz(), a.alpha)?;
    let nzy = conditional_negentropy_e_alpha(t.marginal_yz(), a.alpha)?;
    let entry = |r: &crate::resource::InfimumResult| {
        serde_json::json!({
            "value_bits": r.value,
            "certificate_gap": r.certificate_gap,
            "closed_form": r.closed_form,
        })
    };
    let json = serde_json::json!({
        "alpha": a.alpha,
        "e_x_z": entry(&exz),
        "e_y_z": entry(&eyz),
        "negentropy_z_given_x": entry(&nzx),
        "negentropy_z_given_y": entry(&nzy),
        "is_free_state": is_free_state(&t, 1e-9),
    });
    emit(&a.out, &format!("{}\n", serde_json::to_string_pretty(&json).unwrap()))
}

fn cmd_kraft(a: KraftArgs) -> Result<()> {
    let qa = load_dist(&a.qa)?;
    let mode = match a.mode.as_str() {
        "real" => CodeMode::Real,
        "integer" => CodeMode::Integer,
        other => {
            return Err(Error::InvalidParameter(format!(
                "mode must be real or integer, got {other}"
            )))
        }
    };
    let table_a = lengths_from_strategy(&qa, mode)?;
    let mut json = serde_json::Map::new();
    json.insert("mode".into(), serde_json::json!(a.mode));
    json.insert("alice_lengths".into(), serde_json::json!(table_a.lengths()));
    json.insert(
        "alice_kraft_sum".into(),
        serde_json::json!(table_a.kraft_sum()),
    );
    if let Some(qb_path) = &a.qb {
        let qb = load_dist(qb_path)?;
        let table_b = lengths_from_strategy(&qb, mode)?;
        json.insert("bob_lengths".into(), serde_json::json!(table_b.lengths()));
        json.insert(
            "bob_kraft_sum".into(),
            serde_json::json!(table_b.kraft_sum()),
        );
        if let Some(outcome) = &a.outcome {
            let seq: Vec<usize> = outcome
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidParameter(format!("bad outcome symbol {s}")))
                })
                .collect::<Result<_>>()?;
            let k = payout_bits(&table_b, &table_a, &seq)?;
            json.insert("outcome".into(), serde_json::json!(seq));
            json.insert("payout_bits".into(), serde_json::json!(k));
        }
    }
    let json = serde_json::Value::Object(json);
    emit(&a.out, &format!("{}\n", serde_json::to_string_pretty(&json).unwrap()))
}

fn cmd_types(a: TypesArgs) -> Result<()> {
    let p = a.p.as_ref().map(|path| load_dist(path)).transpose()?;
    if let Some(p) = &p {
        if p.alphabet_size() != a.k {
            return Err(Error::AlphabetMismatch {
                left: p.alphabet_size(),
                right: a.k,
            });
        }
    }
    let types = enumerate_types_with_cap(a.n, a.k, a.cap)?;
    let mut csv = String::from(if p.is_some() {
        "counts,class_size,log2_class_size,exact_prob,ld_exponent\n"
    } else {
        "counts,class_size,log2_class_size\n"
    });
    for ty in &types {
        let size = type_class_size(ty);
        let log2_size = crate::types::log2_type_class_size(ty);
        let counts = ty
            .counts()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join("-");
        match &p {
            Some(p) => {
                let exact = log2_type_class_probability(p, ty)?.exp2();
                let ld = type_class_probability_ld(p, ty)?;
                let _ = writeln!(
                    csv,
                    "{counts},{size},{},{},{}",
                    fmt_f(log2_size),
                    fmt_f(exact),
                    fmt_f(ld)
                );
            }
            None => {
                let _ = writeln!(csv, "{counts},{size},{}", fmt_f(log2_size));
            }
        }
    }
    emit(&a.out, &csv)
}
