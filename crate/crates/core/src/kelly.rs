//! Single-shot and finite-n Kelly analysis.
//!
//! Alice bets a letter-wise distribution Q^A against Bob's odds Q^B while the
//! races follow P. When the realized sequence has type t, her wealth moves by
//! n (D(t||Q^B) - D(t||Q^A)) bits. The constrained optimizers over bets live
//! on the one-parameter geometric family
//!
//!   Q_eta(x) = p(x)^eta q_b(x)^{1-eta} / Z,
//!
//! with eta the exponent on p (eta = 1 is the Kelly bet p, eta = 0 mimics the
//! odds q_b). Solving against a risk budget moves along eta >= 1, away from
//! the odds beyond p; equivalently 1 - eta <= 0 in the
//! multiplier convention of the constrained-optimization lemmas. The geodesic
//! identity
//!
//!   (1-l) D(R||p) + l D(R||q_b) = (1-l) D_l(q_b||p),  R = Q_{1-l},
//!
//! ties the achieved reward to a Renyi divergence of the solved order and
//! yields the frontier bound D_eta(p||q_b) + eta/(1-eta) * log2(eps)/n.

use crate::dist::Dist;
use crate::divergence::{kl_divergence, kl_slice, renyi_divergence};
use crate::error::{Error, Result};
use crate::types::{enumerate_types, log2_type_class_probability, EmpiricalType};

/// Tolerance on the solved constraint value |D(Q*||p) - d|.
const CONSTRAINT_TOL: f64 = 1e-9;

/// One point on the risk-reward frontier.
///
/// `eta` is the canonical tilt (exponent on p) of the optimal bet. The
/// risk-constrained solver reports eta >= 1; the payoff-constrained solver's
/// multiplier convention is recovered by [`RiskRewardPoint::multiplier_eta`],
/// which is <= 0 on both solved branches.
#[derive(Debug, Clone)]
pub struct RiskRewardPoint {
    /// Success-probability floor this point was solved for (risk solver only).
    pub epsilon: Option<f64>,
    /// Canonical tilt of the strategy: exponent on p, with 1 - eta on q_b.
    pub eta: f64,
    /// The optimal bet Q^{A*}.
    pub strategy: Dist,
    /// D(Q*||q_b): the per-round reward when the bet-on type occurs.
    pub reward_bits_per_round: f64,
    /// D(Q*||p): the per-round exponent of the success probability.
    pub risk_exponent: f64,
    /// True when the budget exceeded what the tilted family can spend.
    pub constraint_slack: bool,
}

impl RiskRewardPoint {
    /// The multiplier-convention exponent 1 - eta (on q_b, with 1 - of it on
    /// p); <= 0 on both solved branches.
    pub fn multiplier_eta(&self) -> f64 {
        1.0 - self.eta
    }
}

/// Wealth change in bits over a horizon whose realized type is `t`:
/// n (D(t||q_b) - D(t||q_a)). +inf / -inf on one-sided support escape.
pub fn wealth_log_ratio(q_a: &Dist, q_b: &Dist, t: &EmpiricalType) -> Result<f64> {
    q_a.check_same_alphabet(q_b)?;
    if q_a.alphabet_size() != t.alphabet_size() {
        return Err(Error::AlphabetMismatch {
            left: q_a.alphabet_size(),
            right: t.alphabet_size(),
        });
    }
    let freq = t.freq();
    let d_b = kl_slice(freq.probs(), q_b.probs());
    let d_a = kl_slice(freq.probs(), q_a.probs());
    if d_b.is_infinite() && d_a.is_infinite() {
        return Err(Error::Infeasible(
            "realized type escapes the supports of both the bet and the odds".into(),
        ));
    }
    Ok(t.n() as f64 * (d_b - d_a))
}

/// The classical asymptotic growth rate D(p||q_b) - D(p||q_a) in bits/round;
/// maximized over bets exactly at q_a = p.
pub fn asymptotic_kelly_rate(p: &Dist, q_a: &Dist, q_b: &Dist) -> Result<f64> {
    let d_b = kl_divergence(p, q_b)?;
    let d_a = kl_divergence(p, q_a)?;
    if d_a == f64::INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(d_b - d_a)
}

/// The geometric mixture Q_eta ~ p^eta q_b^{1-eta}, normalized in the log
/// domain over the intersection support of p and q_b.
pub fn tilted_bet(p: &Dist, q_b: &Dist, eta: f64) -> Result<Dist> {
    p.check_same_alphabet(q_b)?;
    if !eta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "tilt must be finite, got {eta}"
        )));
    }
    let k = p.alphabet_size();
    let mut log_w = vec![f64::NEG_INFINITY; k];
    let mut max_lw = f64::NEG_INFINITY;
    for x in 0..k {
        if p.prob(x) > 0.0 && q_b.prob(x) > 0.0 {
            let lw = eta * p.prob(x).log2() + (1.0 - eta) * q_b.prob(x).log2();
            log_w[x] = lw;
            if lw > max_lw {
                max_lw = lw;
            }
        }
    }
    if max_lw == f64::NEG_INFINITY {
        return Err(Error::DegenerateTilt(
            "p and q_b have disjoint supports".into(),
        ));
    }
    let weights: Vec<f64> = log_w.iter().map(|&lw| (lw - max_lw).exp2()).collect();
    Dist::from_weights(&weights)
        .map_err(|e| Error::DegenerateTilt(format!("normalizer underflow: {e}")))
}

/// The closure point of the tilted family as eta -> +inf: p restricted to the
/// symbols maximizing p/q_b and renormalized. Its divergence from p is the
/// largest risk exponent the family can spend.
fn family_limit(p: &Dist, q_b: &Dist) -> Result<Dist> {
    let mut best = f64::NEG_INFINITY;
    let mut log_ratio = vec![f64::NEG_INFINITY; p.alphabet_size()];
    for x in 0..p.alphabet_size() {
        if p.prob(x) > 0.0 && q_b.prob(x) > 0.0 {
            log_ratio[x] = p.prob(x).log2() - q_b.prob(x).log2();
            best = best.max(log_ratio[x]);
        }
    }
    if best == f64::NEG_INFINITY {
        return Err(Error::DegenerateTilt(
            "p and q_b have disjoint supports".into(),
        ));
    }
    let weights: Vec<f64> = log_ratio
        .iter()
        .enumerate()
        .map(|(x, &lr)| if lr >= best - 1e-12 { p.prob(x) } else { 0.0 })
        .collect();
    Dist::from_weights(&weights).map_err(|e| Error::DegenerateTilt(e.to_string()))
}

/// Solves for the eta >= 1 with objective(tilted(eta)) = target, given that
/// the objective is `lo` at eta = 1 and climbs toward the family limit.
/// Pre-scans 33 points on each bracket before bisecting, since monotonicity
/// along the family is not assumed.
fn solve_on_family(
    p: &Dist,
    q_b: &Dist,
    target: f64,
    objective: impl Fn(&Dist) -> f64,
) -> Result<(f64, Dist)> {
    let eval = |eta: f64| -> Result<f64> { Ok(objective(&tilted_bet(p, q_b, eta)?)) };
    let at_one = eval(1.0)?;
    if (at_one - target).abs() <= CONSTRAINT_TOL {
        return Ok((1.0, tilted_bet(p, q_b, 1.0)?));
    }
    if at_one > target {
        return Err(Error::Infeasible(format!(
            "target {target} below the family value {at_one} at eta = 1"
        )));
    }
    // expand the bracket away from eta = 1
    let mut hi = 2.0;
    let mut hi_val = eval(hi)?;
    while hi_val < target {
        hi *= 2.0;
        if hi > 1e9 {
            return Err(Error::Infeasible(format!(
                "target {target} not reached within the tilted family (value {hi_val} at eta = {hi})"
            )));
        }
        hi_val = eval(hi)?;
    }
    // 33-point pre-scan to find the first crossing interval
    let mut lo = 1.0;
    let steps = 33;
    for i in 1..=steps {
        let eta = 1.0 + (hi - 1.0) * i as f64 / steps as f64;
        if eval(eta)? >= target {
            hi = eta;
            break;
        }
        lo = eta;
    }
    // Bisection on the bracketing interval, tolerance on the constraint
    // value. The returned endpoint always sits on the >= target side, so a
    // budget is spent fully (never undershot) and the frontier identity
    // bound cannot creep above the achieved reward.
    hi_val = eval(hi)?;
    for _ in 0..200 {
        if hi_val - target <= CONSTRAINT_TOL {
            return Ok((hi, tilted_bet(p, q_b, hi)?));
        }
        let mid = 0.5 * (lo + hi);
        let v = eval(mid)?;
        if v < target {
            lo = mid;
        } else {
            hi = mid;
            hi_val = v;
        }
    }
    if hi_val - target <= 1e-6 {
        // flat region near the family limit: accept with reduced precision
        return Ok((hi, tilted_bet(p, q_b, hi)?));
    }
    Err(Error::NumericalCheckFailed(format!(
        "bisection stalled at eta = {hi} with constraint value {hi_val}, target {target}"
    )))
}

/// Maximizes the reward D(Q||q_b) over bets whose success probability stays
/// above epsilon, i.e. subject to D(Q||p) <= d with d = -log2(eps)/n.
///
/// The optimum lies on the tilted family at eta >= 1 with the budget spent
/// exactly (D(Q*||p) = d) whenever d is within the family's range. A budget
/// beyond the family range returns the family's limit point flagged with
/// `constraint_slack` (the remaining optimum would sit on a simplex face,
/// outside the interior solution family).
pub fn solve_risk_constrained(
    p: &Dist,
    q_b: &Dist,
    epsilon: f64,
    n: u64,
) -> Result<RiskRewardPoint> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1], got {epsilon}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("need n >= 1".into()));
    }
    p.check_same_alphabet(q_b)?;
    let d = -(epsilon.log2()) / n as f64;

    let limit = family_limit(p, q_b)?;
    let limit_risk = kl_divergence(&limit, p)?;
    let objective = |q: &Dist| kl_slice(q.probs(), p.probs());

    if d >= limit_risk - CONSTRAINT_TOL {
        // budget exceeds what the family can spend
        let reward = kl_divergence(&limit, q_b)?;
        return Ok(RiskRewardPoint {
            epsilon: Some(epsilon),
            eta: f64::INFINITY,
            strategy: limit,
            reward_bits_per_round: reward,
            risk_exponent: limit_risk,
            constraint_slack: true,
        });
    }

    let (eta, strategy) = solve_on_family(p, q_b, d, objective)?;
    let reward = kl_divergence(&strategy, q_b)?;
    let risk = kl_divergence(&strategy, p)?;
    Ok(RiskRewardPoint {
        epsilon: Some(epsilon),
        eta,
        strategy,
        reward_bits_per_round: reward,
        risk_exponent: risk,
        constraint_slack: false,
    })
}

/// Minimizes the risk exponent D(Q||p) over bets guaranteeing a reward of at
/// least `k_bits` when they hit, i.e. subject to D(Q||q_b) >= k_bits.
///
/// The constraint is slack at Q = p whenever k_bits <= D(p||q_b) (multiplier
/// zero); otherwise the optimum spends it exactly on the eta >= 1 branch of
/// the tilted family (multiplier convention: exponent 1 - eta <= 0 on q_b).
pub fn solve_payoff_constrained(p: &Dist, q_b: &Dist, k_bits: f64) -> Result<RiskRewardPoint> {
    if !(k_bits >= 0.0 && k_bits.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "reward floor must be finite and >= 0, got {k_bits}"
        )));
    }
    p.check_same_alphabet(q_b)?;
    let base = kl_divergence(p, q_b)?;
    if k_bits <= base + CONSTRAINT_TOL {
        return Ok(RiskRewardPoint {
            epsilon: None,
            eta: 1.0,
            strategy: p.clone(),
            reward_bits_per_round: base,
            risk_exponent: 0.0,
            constraint_slack: true,
        });
    }

    // suprema: over the whole simplex (restricted to supp(p), so the risk
    // stays finite) and over the tilted family
    let simplex_sup = p
        .support()
        .map(|x| {
            if q_b.prob(x) > 0.0 {
                -q_b.prob(x).log2()
            } else {
                f64::INFINITY
            }
        })
        .fold(f64::NEG_INFINITY, f64::max);
    if k_bits > simplex_sup {
        return Err(Error::Infeasible(format!(
            "reward floor {k_bits} exceeds the simplex supremum {simplex_sup} of D(Q||q_b)"
        )));
    }
    let limit = family_limit(p, q_b)?;
    let family_sup = kl_divergence(&limit, q_b)?;
    if k_bits > family_sup + CONSTRAINT_TOL {
        return Err(Error::Infeasible(format!(
            "reward floor {k_bits} is beyond the tilted family's range {family_sup}; \
             the optimum would sit on a simplex face outside the interior solution family"
        )));
    }

    let objective = |q: &Dist| kl_slice(q.probs(), q_b.probs());
    let (eta, strategy) = solve_on_family(p, q_b, k_bits, objective)?;
    let reward = kl_divergence(&strategy, q_b)?;
    let risk = kl_divergence(&strategy, p)?;
    Ok(RiskRewardPoint {
        epsilon: None,
        eta,
        strategy,
        reward_bits_per_round: reward,
        risk_exponent: risk,
        constraint_slack: false,
    })
}

/// The exact discrete optimum at horizon n: among enumerated types whose
/// exact class probability is at least epsilon, the one maximizing
/// D(t||q_b). Ties break to the lexicographically smallest counts.
pub fn best_type_under_risk(
    p: &Dist,
    q_b: &Dist,
    n: u64,
    epsilon: f64,
) -> Result<(EmpiricalType, f64)> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1], got {epsilon}"
        )));
    }
    p.check_same_alphabet(q_b)?;
    let log2_eps = epsilon.log2();
    let mut best: Option<(EmpiricalType, f64)> = None;
    for ty in enumerate_types(n, p.alphabet_size())? {
        if log2_type_class_probability(p, &ty)? < log2_eps {
            continue;
        }
        let reward = kl_slice(ty.freq().probs(), q_b.probs());
        // lexicographic enumeration order: strict improvement keeps the
        // lexicographically smallest winner
        match &best {
            Some((_, r)) if reward <= *r => {}
            _ => best = Some((ty, reward)),
        }
    }
    best.ok_or_else(|| {
        Error::EmptyFeasibleSet(format!(
            "no single type class reaches probability {epsilon} at n = {n}"
        ))
    })
}

/// Both sides of the geodesic identity and of its risk-reward rearrangement,
/// evaluated at the geodesic point R ~ p^{1-lam} q_b^{lam}.
#[derive(Debug, Clone, Copy)]
pub struct RewardIdentity {
    /// (1-lam) D(R||p) + lam D(R||q_b)
    pub geodesic_lhs: f64,
    /// (1-lam) D_lam(q_b||p)
    pub geodesic_rhs: f64,
    /// D(R||q_b)
    pub reward_lhs: f64,
    /// D_{1-lam}(p||q_b) - ((1-lam)/lam) D(R||p)
    pub reward_rhs: f64,
}

/// Verifies the geodesic identity at parameter `lam` in (0,1).
///
/// Both formulations are computed independently from the divergence module
/// and must agree to 1e-10; a violation is reported as an error.
pub fn reward_identity_check(p: &Dist, q_b: &Dist, lam: f64) -> Result<RewardIdentity> {
    if !(lam > 0.0 && lam < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "geodesic parameter must lie in (0, 1), got {lam}"
        )));
    }
    let r = tilted_bet(p, q_b, 1.0 - lam)?;
    let d_rp = kl_divergence(&r, p)?;
    let d_rq = kl_divergence(&r, q_b)?;
    let out = RewardIdentity {
        geodesic_lhs: (1.0 - lam) * d_rp + lam * d_rq,
        geodesic_rhs: (1.0 - lam) * renyi_divergence(lam, q_b, p)?,
        reward_lhs: d_rq,
        reward_rhs: renyi_divergence(1.0 - lam, p, q_b)? - ((1.0 - lam) / lam) * d_rp,
    };
    if (out.geodesic_lhs - out.geodesic_rhs).abs() > 1e-10
        || (out.reward_lhs - out.reward_rhs).abs() > 1e-10
    {
        return Err(Error::NumericalCheckFailed(format!(
            "geodesic identity violated: {out:?}"
        )));
    }
    Ok(out)
}

/// The frontier bound D_eta(p||q_b) + (eta/(1-eta)) log2(eps)/n at the
/// multiplier eta solved by [`solve_risk_constrained`].
///
/// With the budget spent exactly, the bound meets the achieved reward; it is
/// verified to never exceed the reward by more than 1e-10 before returning.
/// At epsilon = 1 the penalty term is zero by convention (log2 1 = 0).
/// Requires an active constraint (no slack).
pub fn risk_reward_bound(p: &Dist, q_b: &Dist, epsilon: f64, n: u64) -> Result<f64> {
    let point = solve_risk_constrained(p, q_b, epsilon, n)?;
    if point.constraint_slack {
        return Err(Error::Infeasible(
            "risk budget exceeds the tilted-family range; the bound needs an active constraint"
                .into(),
        ));
    }
    let eta = point.eta;
    let penalty = if epsilon == 1.0 {
        0.0
    } else {
        eta / (1.0 - eta) * epsilon.log2() / n as f64
    };
    let bound = renyi_divergence(eta, p, q_b)? + penalty;
    if bound > point.reward_bits_per_round + 1e-10 {
        return Err(Error::NumericalCheckFailed(format!(
            "bound {bound} exceeds achieved reward {}",
            point.reward_bits_per_round
        )));
    }
    Ok(bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::type_of_sequence;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn d(v: &[f64]) -> Dist {
        Dist::new(v.to_vec()).unwrap()
    }

    fn random_full_dist(rng: &mut ChaCha8Rng, k: usize, floor: f64) -> Dist {
        let w: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + floor).collect();
        Dist::from_weights(&w).unwrap()
    }

    // simplex grids for the oracle checks
    fn binary_grid(step_inv: usize) -> Vec<Dist> {
        (0..=step_inv)
            .map(|i| {
                let a = i as f64 / step_inv as f64;
                d(&[a, 1.0 - a])
            })
            .collect()
    }

    fn ternary_grid(step_inv: usize) -> Vec<Dist> {
        let mut out = Vec::new();
        for i in 0..=step_inv {
            for j in 0..=(step_inv - i) {
                let a = i as f64 / step_inv as f64;
                let b = j as f64 / step_inv as f64;
                out.push(d(&[a, b, (1.0 - a - b).max(0.0)]));
            }
        }
        out
    }

    #[test]
    fn wealth_log_ratio_examples() {
        let q = d(&[0.6, 0.4]);
        for ty in enumerate_types(6, 2).unwrap() {
            assert_eq!(wealth_log_ratio(&q, &q, &ty).unwrap(), 0.0);
        }
        // allocation matches the type: n D(t||q_b)
        let ty = type_of_sequence(&[0, 0, 0, 1, 1, 0, 0, 0, 1, 0], 2).unwrap();
        let qa = d(&[0.7, 0.3]);
        let qb = Dist::uniform(2);
        let got = wealth_log_ratio(&qa, &qb, &ty).unwrap();
        let oracle = 10.0 * kl_divergence(&ty.freq(), &qb).unwrap();
        assert!((got - oracle).abs() < 1e-12);
        assert!((got - 1.187_091_007_693_073_8).abs() < 1e-12);
    }

    #[test]
    fn wealth_log_ratio_support_conventions() {
        let ty = type_of_sequence(&[0, 1], 2).unwrap();
        let full = Dist::uniform(2);
        let half = d(&[1.0, 0.0]);
        assert_eq!(
            wealth_log_ratio(&half, &full, &ty).unwrap(),
            f64::NEG_INFINITY
        );
        assert_eq!(
            wealth_log_ratio(&full, &half, &ty).unwrap(),
            f64::INFINITY
        );
        assert!(wealth_log_ratio(&half, &half, &ty).is_err());
    }

    #[test]
    fn asymptotic_rate_examples() {
        let p = d(&[0.7, 0.3]);
        let u = Dist::uniform(2);
        let kelly = asymptotic_kelly_rate(&p, &p, &u).unwrap();
        assert!((kelly - kl_divergence(&p, &u).unwrap()).abs() < 1e-15);
        assert!((kelly - 0.118_709_100_769_307_38).abs() < 1e-12);
        assert_eq!(asymptotic_kelly_rate(&p, &u, &u).unwrap(), 0.0);
    }

    #[test]
    fn tilted_bet_endpoints_and_example() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let k = rng.random_range(2..=4);
            let p = random_full_dist(&mut rng, k, 0.01);
            let q = random_full_dist(&mut rng, k, 0.01);
            let at_one = tilted_bet(&p, &q, 1.0).unwrap();
            let at_zero = tilted_bet(&p, &q, 0.0).unwrap();
            for x in 0..k {
                assert!((at_one.prob(x) - p.prob(x)).abs() < 1e-12);
                assert!((at_zero.prob(x) - q.prob(x)).abs() < 1e-12);
            }
        }
        // frozen from the defining sum at eta = 1/2
        let q = tilted_bet(&d(&[0.7, 0.3]), &Dist::uniform(2), 0.5).unwrap();
        assert!((q.prob(0) - 0.604_356_076_261_04).abs() < 1e-12);
        assert!((q.prob(1) - 0.395_643_923_738_96).abs() < 1e-12);
    }

    #[test]
    fn tilted_bet_degenerate_support() {
        let a = d(&[1.0, 0.0]);
        let b = d(&[0.0, 1.0]);
        assert!(matches!(
            tilted_bet(&a, &b, 0.5),
            Err(Error::DegenerateTilt(_))
        ));
    }

    #[test]
    fn risk_solver_epsilon_one_is_kelly() {
        let p = d(&[0.7, 0.3]);
        let u = Dist::uniform(2);
        let pt = solve_risk_constrained(&p, &u, 1.0, 20).unwrap();
        assert!(!pt.constraint_slack);
        assert!((pt.eta - 1.0).abs() < 1e-9);
        assert!(pt.risk_exponent.abs() < 1e-9);
        assert!((pt.reward_bits_per_round - kl_divergence(&p, &u).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn risk_solver_spends_the_budget_and_beats_the_grid() {
        // desk instance: d = -log2(0.25)/20 = 0.1
        let p = d(&[0.7, 0.3]);
        let u = Dist::uniform(2);
        let pt = solve_risk_constrained(&p, &u, 0.25, 20).unwrap();
        assert!((pt.risk_exponent - 0.1).abs() < 1e-8);
        assert!(pt.eta >= 1.0);
        // grid oracle: no feasible point on a 1e-3 grid may beat the reward
        for g in binary_grid(1000) {
            if kl_divergence(&g, &p).unwrap() <= 0.1 {
                let reward = kl_divergence(&g, &u).unwrap();
                assert!(
                    pt.reward_bits_per_round >= reward - 1e-4,
                    "grid point {:?} with reward {reward} beats solver {}",
                    g.probs(),
                    pt.reward_bits_per_round
                );
            }
        }
    }

    #[test]
    fn risk_solver_slack_budget_returns_family_limit() {
        let p = d(&[0.7, 0.3]);
        let u = Dist::uniform(2);
        // family range: D(limit||p) = -log2(0.7); pick eps far below 2^{-n * that}
        let n = 10;
        let eps = 1e-6;
        let d_budget = -(eps as f64).log2() / n as f64;
        assert!(d_budget > -(0.7f64.log2()));
        let pt = solve_risk_constrained(&p, &u, eps, n).unwrap();
        assert!(pt.constraint_slack);
        assert_eq!(pt.strategy.probs(), &[1.0, 0.0]);
        assert!((pt.reward_bits_per_round - 1.0).abs() < 1e-12); // D(point||uniform) = 1
    }

    #[test]
    fn risk_solver_oracle_binary_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..200 {
            let p = random_full_dist(&mut rng, 2, 0.05);
            let q = random_full_dist(&mut rng, 2, 0.05);
            let limit_risk = kl_divergence(&family_limit(&p, &q).unwrap(), &p).unwrap();
            if limit_risk < 1e-3 {
                continue; // p ~ q: no room for a budget
            }
            let dtarget = limit_risk * rng.random_range(0.05..0.9);
            let n = 20u64;
            let eps = (-(dtarget * n as f64)).exp2();
            let pt = solve_risk_constrained(&p, &q, eps, n).unwrap();
            assert!((pt.risk_exponent - dtarget).abs() < 1e-8);
            for g in binary_grid(1000) {
                if kl_divergence(&g, &p).unwrap() <= dtarget {
                    let reward = kl_divergence(&g, &q).unwrap();
                    assert!(
                        pt.reward_bits_per_round >= reward - 1e-4,
                        "feasible grid reward {reward} beats {}",
                        pt.reward_bits_per_round
                    );
                }
            }
        }
    }

    #[test]
    fn risk_solver_oracle_ternary_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..200 {
            let p = random_full_dist(&mut rng, 3, 0.08);
            let q = random_full_dist(&mut rng, 3, 0.08);
            let limit_risk = kl_divergence(&family_limit(&p, &q).unwrap(), &p).unwrap();
            // keep the budget ball interior: below the family range and below
            // the nearest simplex face
            let face_dist = (0..3)
                .map(|x| -( (1.0 - p.prob(x)).log2() ))
                .fold(f64::INFINITY, f64::min);
            let cap = limit_risk.min(face_dist) * 0.8;
            if cap < 1e-3 {
                continue;
            }
            let dtarget = cap * rng.random_range(0.05..1.0);
            let n = 20u64;
            let eps = (-(dtarget * n as f64)).exp2();
            let pt = solve_risk_constrained(&p, &q, eps, n).unwrap();
            assert!((pt.risk_exponent - dtarget).abs() < 1e-8);
            for g in ternary_grid(100) {
                if kl_divergence(&g, &p).unwrap() <= dtarget {
                    let reward = kl_divergence(&g, &q).unwrap();
                    assert!(
                        pt.reward_bits_per_round >= reward - 1e-4,
                        "feasible grid reward {reward} beats {}",
                        pt.reward_bits_per_round
                    );
                }
            }
        }
    }

    #[test]
    fn payoff_solver_examples_and_oracle() {
        let p = d(&[0.7, 0.3]);
        let u = Dist::uniform(2);
        // inactive constraint
        let pt = solve_payoff_constrained(&p, &u, 0.0).unwrap();
        assert!(pt.constraint_slack);
        assert_eq!(pt.strategy.probs(), p.probs());
        assert!(pt.risk_exponent.abs() < 1e-12);
        assert!((pt.multiplier_eta() - 0.0).abs() < 1e-12);
        // activation threshold
        let base = kl_divergence(&p, &u).unwrap();
        let pt = solve_payoff_constrained(&p, &u, base).unwrap();
        assert_eq!(pt.strategy.probs(), p.probs());
        // active: k = 0.5 bits
        let pt = solve_payoff_constrained(&p, &u, 0.5).unwrap();
        assert!(!pt.constraint_slack);
        assert!((pt.reward_bits_per_round - 0.5).abs() < 1e-8);
        assert!(pt.multiplier_eta() <= 0.0);
        // grid oracle: no grid point with reward >= 0.5 has smaller risk
        for g in binary_grid(1000) {
            if kl_divergence(&g, &u).unwrap() >= 0.5 {
                let risk = kl_divergence(&g, &p).unwrap();
                assert!(
                    pt.risk_exponent <= risk + 1e-4,
                    "grid point {:?} with risk {risk} beats solver {}",
                    g.probs(),
                    pt.risk_exponent
                );
            }
        }
    }

    #[test]
    fn payoff_solver_infeasible() {
        let p = d(&[0.7, 0.3]);
        let u = Dist::uniform(2);
        // simplex supremum of D(Q||u) over supp(p) is 1 bit
        assert!(matches!(
            solve_payoff_constrained(&p, &u, 1.5),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn kkt_sign_conventions() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for _ in 0..100 {
            let p = random_full_dist(&mut rng, 2, 0.05);
            let q = random_full_dist(&mut rng, 2, 0.05);
            let limit_risk = kl_divergence(&family_limit(&p, &q).unwrap(), &p).unwrap();
            if limit_risk < 1e-3 {
                continue;
            }
            let eps = (-(limit_risk * 0.5 * 20.0)).exp2();
            let pt = solve_risk_constrained(&p, &q, eps, 20).unwrap();
            assert!(pt.eta >= 1.0 - 1e-12);
            assert!(pt.multiplier_eta() <= 1e-12);

            let base = kl_divergence(&p, &q).unwrap();
            let family_sup = kl_divergence(&family_limit(&p, &q).unwrap(), &q).unwrap();
            if family_sup > base + 1e-3 {
                let k = base + 0.5 * (family_sup - base);
                let pt = solve_payoff_constrained(&p, &q, k).unwrap();
                assert!(pt.multiplier_eta() <= 1e-12);
            }
        }
    }

    #[test]
    fn best_type_examples() {
        let p = d(&[0.7, 0.3]);
        let u = Dist::uniform(2);
        // n = 1: feasible outcomes are single symbols with prob >= eps
        let (ty, _) = best_type_under_risk(&p, &u, 1, 0.5).unwrap();
        assert_eq!(ty.counts(), &[1, 0]);
        // brute force over the 11 types at n = 10
        let (ty, reward) = best_type_under_risk(&p, &u, 10, 0.1).unwrap();
        let mut oracle_best: Option<(Vec<u64>, f64)> = None;
        for cand in enumerate_types(10, 2).unwrap() {
            let prob = crate::types::type_class_probability_exact(&p, &cand).unwrap();
            if prob >= 0.1 {
                let r = kl_divergence(&cand.freq(), &u).unwrap();
                if oracle_best.as_ref().map_or(true, |(_, br)| r > *br) {
                    oracle_best = Some((cand.counts().to_vec(), r));
                }
            }
        }
        let (oracle_counts, oracle_reward) = oracle_best.unwrap();
        assert_eq!(ty.counts(), &oracle_counts[..]);
        assert!((reward - oracle_reward).abs() < 1e-12);
        // impossible epsilon
        assert!(matches!(
            best_type_under_risk(&p, &u, 10, 0.9),
            Err(Error::EmptyFeasibleSet(_))
        ));
    }

    #[test]
    fn best_type_converges_to_continuous_solver() {
        let p = d(&[0.7, 0.3]);
        let u = Dist::uniform(2);
        let eps = 0.01;
        let mut gaps = Vec::new();
        for n in [10u64, 100, 1000] {
            let (_, discrete) = best_type_under_risk(&p, &u, n, eps).unwrap();
            let cont = solve_risk_constrained(&p, &u, eps, n).unwrap();
            // exact class probabilities never exceed the LD estimate, so the
            // discrete feasible set sits inside the continuous budget ball
            assert!(discrete <= cont.reward_bits_per_round + 1e-9);
            // and the sandwich guarantees feasibility of every type whose
            // divergence clears the budget minus k log2(n+1)/n
            let d_budget = -(eps.log2()) / n as f64;
            let shrunk = d_budget - 2.0 * ((n + 1) as f64).log2() / n as f64;
            if shrunk > 0.0 {
                let eps_shrunk = (-(shrunk * n as f64)).exp2();
                let lower = solve_risk_constrained(&p, &u, eps_shrunk, n)
                    .unwrap()
                    .reward_bits_per_round
                    - 1.0 / n as f64; // type-grid resolution
                assert!(discrete >= lower - 1e-9, "n = {n}: {discrete} < {lower}");
            }
            gaps.push((discrete - cont.reward_bits_per_round).abs());
        }
        // tail convergence toward the continuous frontier
        assert!(gaps[2] <= gaps[1] + 1e-9, "gap grew from n = 100 to n = 1000");
        assert!(gaps[2] < 0.05, "rewards still {0} apart at n = 1000", gaps[2]);
    }

    #[test]
    fn reward_identity_examples() {
        // p = q_b: everything is zero
        let u = Dist::uniform(2);
        let id = reward_identity_check(&u, &u, 0.3).unwrap();
        assert!(id.geodesic_lhs.abs() < 1e-12 && id.reward_lhs.abs() < 1e-12);
        // frozen desk instance
        let id = reward_identity_check(&d(&[0.7, 0.3]), &d(&[0.4, 0.6]), 0.3).unwrap();
        assert!((id.geodesic_lhs - id.geodesic_rhs).abs() < 1e-10);
        assert!((id.reward_lhs - id.reward_rhs).abs() < 1e-10);
        // lam -> 1 continuity: both sides vanish together
        let id = reward_identity_check(&d(&[0.7, 0.3]), &d(&[0.4, 0.6]), 1.0 - 1e-9).unwrap();
        assert!((id.geodesic_lhs - id.geodesic_rhs).abs() < 1e-10);
    }

    #[test]
    fn reward_identity_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for _ in 0..1000 {
            let k = rng.random_range(2..=4);
            let p = random_full_dist(&mut rng, k, 0.01);
            let q = random_full_dist(&mut rng, k, 0.01);
            let lam = rng.random_range(0.01..0.99);
            reward_identity_check(&p, &q, lam).unwrap();
        }
    }

    #[test]
    fn bound_examples() {
        let p = d(&[0.7, 0.3]);
        let u = Dist::uniform(2);
        // eps = 1: bound is the Kelly rate with zero penalty
        let b = risk_reward_bound(&p, &u, 1.0, 20).unwrap();
        assert!((b - kl_divergence(&p, &u).unwrap()).abs() < 1e-9);
        // random instances: bound never exceeds the achieved reward
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        for _ in 0..100 {
            let p = random_full_dist(&mut rng, 2, 0.05);
            let q = random_full_dist(&mut rng, 2, 0.05);
            let limit_risk = kl_divergence(&family_limit(&p, &q).unwrap(), &p).unwrap();
            if limit_risk < 1e-3 {
                continue;
            }
            let n = rng.random_range(5..=50);
            let dtarget = limit_risk * rng.random_range(0.05..0.9);
            let eps = (-(dtarget * n as f64)).exp2();
            let bound = risk_reward_bound(&p, &q, eps, n).unwrap();
            let reward = solve_risk_constrained(&p, &q, eps, n)
                .unwrap()
                .reward_bits_per_round;
            assert!(bound <= reward + 1e-10);
            // with the budget spent exactly the two coincide
            assert!((bound - reward).abs() < 1e-6);
        }
    }

    #[test]
    fn bound_monotone_in_epsilon() {
        // reward shrinks as the success floor rises: scanning eps upward at
        // fixed n, the bound (= achieved reward) is non-increasing
        let p = d(&[0.7, 0.3]);
        let u = Dist::uniform(2);
        let n = 20;
        let mut prev = f64::INFINITY;
        for i in 1..=19 {
            let eps = i as f64 * 0.05;
            let b = risk_reward_bound(&p, &u, eps, n).unwrap();
            assert!(b <= prev + 1e-9, "bound rose at eps = {eps}");
            prev = b;
        }
    }

    #[test]
    fn string_level_consistency() {
        // wealth_log_ratio equals log2 of the string-allocation ratio
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..200 {
            let k = rng.random_range(2..=3);
            let qa = random_full_dist(&mut rng, k, 0.02);
            let qb = random_full_dist(&mut rng, k, 0.02);
            let n = rng.random_range(1..=10);
            let seq: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
            let ty = type_of_sequence(&seq, k).unwrap();
            let via_alloc = crate::types::log2_sequence_probability(&qa, &ty).unwrap()
                - crate::types::log2_sequence_probability(&qb, &ty).unwrap();
            let direct = wealth_log_ratio(&qa, &qb, &ty).unwrap();
            assert!((via_alloc - direct).abs() < 1e-10);
        }
    }
}
