//! Seeded Monte Carlo validation of success probabilities, wealth
//! trajectories and asymptotic rates.
//!
//! The generator is ChaCha8 (rand_chacha, pinned in the manifest): trial i
//! draws from the stream (master seed, i), so results are bit-identical
//! across runs and across worker counts. Trials fan out over rayon and are
//! reduced in trial order.
//!
//! Ruin (a bet of zero on a realized outcome) records a log-wealth of -inf
//! and is surfaced as a count; it never aborts a run.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::sideinfo::TripartiteDist;
use crate::types::EmpiricalType;

/// One simulated betting run: the cumulative log2-wealth path (initial
/// wealth 1), the realized type and the stream seed that produced it.
#[derive(Debug, Clone)]
pub struct WealthLedger {
    pub n_rounds: u64,
    pub log2_wealth_trajectory: Vec<f64>,
    pub realized_type: EmpiricalType,
    pub seed: u64,
}

/// Summary statistics over independent betting trials.
#[derive(Debug, Clone, Copy)]
pub struct BettingStats {
    pub trials: u64,
    pub n_rounds: u64,
    /// Mean of (1/n) log2 W_F over non-ruined trials.
    pub mean_rate: f64,
    /// Sample variance of the per-trial rate over non-ruined trials.
    pub rate_variance: f64,
    /// Trials that bet zero on a realized outcome.
    pub ruin_count: u64,
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn draw(rng: &mut ChaCha8Rng, cdf: &[f64]) -> usize {
    let u: f64 = rng.random();
    match cdf.iter().position(|&c| u < c) {
        Some(i) => i,
        None => cdf.len() - 1, // u landed on the rounding slack at the top
    }
}

fn cdf_of(p: &Dist) -> Vec<f64> {
    let mut cum = 0.0;
    p.probs()
        .iter()
        .map(|&x| {
            cum += x;
            cum
        })
        .collect()
}

/// n i.i.d. draws from p on stream 0 of the seed. Deterministic.
pub fn sample_iid(p: &Dist, n: u64, seed: u64) -> Vec<usize> {
    let mut rng = stream_rng(seed, 0);
    let cdf = cdf_of(p);
    (0..n).map(|_| draw(&mut rng, &cdf)).collect()
}

/// n i.i.d. joint draws from P_XYZ on stream 0 of the seed.
pub fn sample_tripartite(
    p: &TripartiteDist,
    n: u64,
    seed: u64,
) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let mut rng = stream_rng(seed, 0);
    let (kx, ky, kz) = p.sizes();
    let flat = Dist::new(p.probs().to_vec()).expect("tensor is a valid pmf");
    let cdf = cdf_of(&flat);
    let mut xs = Vec::with_capacity(n as usize);
    let mut ys = Vec::with_capacity(n as usize);
    let mut zs = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let flat_idx = draw(&mut rng, &cdf);
        let z = flat_idx % kz;
        let y = (flat_idx / kz) % ky;
        let x = flat_idx / (ky * kz);
        debug_assert!(x < kx);
        xs.push(x);
        ys.push(y);
        zs.push(z);
    }
    (xs, ys, zs)
}

fn one_trial(
    p: &Dist,
    q_a: &Dist,
    q_b: &Dist,
    n: u64,
    seed: u64,
    trial: u64,
    keep_trajectory: bool,
) -> (f64, Option<WealthLedger>) {
    let mut rng = stream_rng(seed, trial + 1); // stream 0 is sample_iid's
    let cdf = cdf_of(p);
    let mut log_w = 0.0;
    let mut trajectory = keep_trajectory.then(|| Vec::with_capacity(n as usize));
    let mut seq = keep_trajectory.then(|| Vec::with_capacity(n as usize));
    let mut counts = vec![0u64; p.alphabet_size()];
    for _ in 0..n {
        let x = draw(&mut rng, &cdf);
        counts[x] += 1;
        let (a, b) = (q_a.prob(x), q_b.prob(x));
        log_w += if a == 0.0 {
            f64::NEG_INFINITY
        } else {
            (a / b).log2()
        };
        if let Some(t) = trajectory.as_mut() {
            t.push(log_w);
        }
        if let Some(s) = seq.as_mut() {
            s.push(x);
        }
    }
    let rate = log_w / n as f64;
    let ledger = keep_trajectory.then(|| WealthLedger {
        n_rounds: n,
        log2_wealth_trajectory: trajectory.unwrap(),
        realized_type: EmpiricalType::new(counts).expect("n >= 1 rounds"),
        seed,
    });
    (rate, ledger)
}

fn betting_inputs_ok(p: &Dist, q_a: &Dist, q_b: &Dist, n: u64, trials: u64) -> Result<()> {
    p.check_same_alphabet(q_a)?;
    p.check_same_alphabet(q_b)?;
    if n == 0 || trials == 0 {
        return Err(Error::InvalidParameter(
            "need at least one round and one trial".into(),
        ));
    }
    if !p.support_subset_of(q_b) {
        // infinite odds on a charged outcome break the wealth accounting
        return Err(Error::InvalidDist(
            "the odds must cover every outcome the source can produce".into(),
        ));
    }
    Ok(())
}

/// Repeated-betting simulation: per round, log2-wealth moves by
/// log2(q_a(x)/q_b(x)). Statistics are over the per-trial rates.
pub fn run_betting(
    p: &Dist,
    q_a: &Dist,
    q_b: &Dist,
    n: u64,
    trials: u64,
    seed: u64,
) -> Result<BettingStats> {
    betting_inputs_ok(p, q_a, q_b, n, trials)?;
    let rates: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| one_trial(p, q_a, q_b, n, seed, t, false).0)
        .collect();
    Ok(summarize(&rates, n))
}

/// As [`run_betting`], additionally returning the per-trial ledgers.
pub fn run_betting_with_ledgers(
    p: &Dist,
    q_a: &Dist,
    q_b: &Dist,
    n: u64,
    trials: u64,
    seed: u64,
) -> Result<(BettingStats, Vec<WealthLedger>)> {
    betting_inputs_ok(p, q_a, q_b, n, trials)?;
    let runs: Vec<(f64, Option<WealthLedger>)> = (0..trials)
        .into_par_iter()
        .map(|t| one_trial(p, q_a, q_b, n, seed, t, true))
        .collect();
    let rates: Vec<f64> = runs.iter().map(|(r, _)| *r).collect();
    let ledgers = runs.into_iter().map(|(_, l)| l.unwrap()).collect();
    Ok((summarize(&rates, n), ledgers))
}

fn summarize(rates: &[f64], n: u64) -> BettingStats {
    let finite: Vec<f64> = rates.iter().copied().filter(|r| r.is_finite()).collect();
    let ruin_count = (rates.len() - finite.len()) as u64;
    let mean = if finite.is_empty() {
        f64::NAN
    } else {
        finite.iter().sum::<f64>() / finite.len() as f64
    };
    let var = if finite.len() < 2 {
        0.0
    } else {
        finite.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (finite.len() - 1) as f64
    };
    BettingStats {
        trials: rates.len() as u64,
        n_rounds: n,
        mean_rate: mean,
        rate_variance: var,
        ruin_count,
    }
}

/// Fraction of trials whose rate (1/n) log2 W_F reaches `target_rate`.
/// Ruined trials only count when the target is -inf.
pub fn empirical_success_rate(
    p: &Dist,
    q_a: &Dist,
    q_b: &Dist,
    n: u64,
    target_rate: f64,
    trials: u64,
    seed: u64,
) -> Result<f64> {
    betting_inputs_ok(p, q_a, q_b, n, trials)?;
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let (rate, _) = one_trial(p, q_a, q_b, n, seed, t, false);
            u64::from(rate >= target_rate)
        })
        .sum();
    Ok(hits as f64 / trials as f64)
}
