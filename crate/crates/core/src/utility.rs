//! CRRA expected-utility layer.
//!
//! The constant-relative-risk-aversion family
//!
//!   u_b(w) = (w^{1-b} - 1) / (1-b)   (b != 1),    u_1(w) = log2 w
//!
//! selects, with the odds convention O = 1/q_b, the optimal strategy
//! Q ~ p^{1/(1-b)} q_b^{-b/(1-b)} -- exactly the tilted family at
//! eta = 1/(1-b). Substituting that strategy back into the growth rate gives
//! the closed form alpha D(p||q_b) + (1-alpha) D_alpha(p||q_b) with
//! alpha = 1/(1-b): the payoff of a rational bettor is parametrized by Renyi
//! divergences. The log-utility member (b = 1) is the Kelly bet itself and is
//! handled as an explicit special case since the closed forms divide by 1-b.
//!
//! Utilities evaluate the wealth relative W_F/W_i with W_i = 1 (the growth
//! factor is scale-free); the b = 1 member uses base-2 logs like every other
//! rate in the crate, an affine rescaling that leaves argmaxes untouched.

use crate::dist::Dist;
use crate::divergence::{kl_divergence, renyi_divergence};
use crate::error::{Error, Result};
use crate::kelly::{tilted_bet, wealth_log_ratio};
use crate::types::{enumerate_types_with_cap, type_class_probability_exact, DEFAULT_TYPE_CAP};

/// Relative risk aversion parameter with its derived tilt alpha = 1/(1-beta).
///
/// The family is usually stated for beta >= 0; the constructor accepts any
/// finite beta because the tilt map and the equivalence tests range over
/// negative values as well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityParams {
    beta: f64,
}

impl UtilityParams {
    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "risk aversion must be finite, got {beta}"
            )));
        }
        Ok(Self { beta })
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The tilt alpha = 1/(1-beta); undefined at beta = 1.
    pub fn alpha(&self) -> Result<f64> {
        eta_from_beta(self.beta)
    }

    pub fn is_log_utility(&self) -> bool {
        self.beta == 1.0
    }
}

/// u_beta(w) for a wealth relative w > 0.
pub fn crra_utility(w: f64, params: UtilityParams) -> Result<f64> {
    if !(w > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "wealth relative must be positive, got {w}"
        )));
    }
    if params.is_log_utility() {
        return Ok(w.log2());
    }
    let b = params.beta();
    Ok((w.powf(1.0 - b) - 1.0) / (1.0 - b))
}

/// The tilt eta = 1/(1-beta) matching the CRRA optimizer to the
/// constrained-divergence family; beta = 1 (log utility) has no finite tilt.
pub fn eta_from_beta(beta: f64) -> Result<f64> {
    if beta == 1.0 {
        return Err(Error::InvalidParameter(
            "beta = 1 is log utility: the optimal bet is q_a = p (Kelly)".into(),
        ));
    }
    if !beta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "risk aversion must be finite, got {beta}"
        )));
    }
    Ok(1.0 / (1.0 - beta))
}

/// The CRRA-optimal strategy Q ~ p^{1/(1-b)} O^{b/(1-b)} with
/// O = 1/q_b: elementwise equal to `tilted_bet(p, q_b, 1/(1-b))`.
pub fn crra_optimal_strategy(p: &Dist, q_b: &Dist, beta: f64) -> Result<Dist> {
    let eta = eta_from_beta(beta)?;
    tilted_bet(p, q_b, eta)
}

/// The closed-form growth rate of the tilted strategy at tilt `alpha`:
/// alpha D(p||q_b) + (1-alpha) D_alpha(p||q_b), in bits/round.
pub fn expected_log_wealth_closed_form(p: &Dist, q_b: &Dist, alpha: f64) -> Result<f64> {
    let kl = kl_divergence(p, q_b)?;
    if alpha == 1.0 {
        return Ok(kl);
    }
    let renyi = renyi_divergence(alpha, p, q_b)?;
    let value = alpha * kl + (1.0 - alpha) * renyi;
    if !value.is_finite() {
        return Err(Error::Infeasible(format!(
            "Renyi sum diverges at alpha = {alpha} (D = {kl}, D_alpha = {renyi})"
        )));
    }
    Ok(value)
}

/// The growth rate D(p||q_b) - D(p||q_a) of an arbitrary strategy, in
/// bits/round; -inf when the bet q_a misses part of p's support.
pub fn expected_log_wealth_direct(p: &Dist, q_a: &Dist, q_b: &Dist) -> Result<f64> {
    crate::kelly::asymptotic_kelly_rate(p, q_a, q_b)
}

/// Exact expected utility of the n-round wealth relative, summed over all
/// type classes: sum_t P(t) u_beta(2^{n(D(t||q_b) - D(t||q_a))}).
///
/// A verification oracle at desk scale; the enumeration cap guards the
/// horizon. Ruin branches (the bet misses a realized type) evaluate u at
/// w = 0+: finite for beta < 1, -inf otherwise.
pub fn expected_utility_estimate(
    p: &Dist,
    q_a: &Dist,
    q_b: &Dist,
    beta: f64,
    n: u64,
) -> Result<f64> {
    expected_utility_estimate_with_cap(p, q_a, q_b, beta, n, DEFAULT_TYPE_CAP)
}

pub fn expected_utility_estimate_with_cap(
    p: &Dist,
    q_a: &Dist,
    q_b: &Dist,
    beta: f64,
    n: u64,
    cap: u128,
) -> Result<f64> {
    let params = UtilityParams::new(beta)?;
    p.check_same_alphabet(q_a)?;
    p.check_same_alphabet(q_b)?;
    let mut total = 0.0;
    for ty in enumerate_types_with_cap(n, p.alphabet_size(), cap)? {
        let prob = type_class_probability_exact(p, &ty)?;
        if prob == 0.0 {
            continue;
        }
        let log_w = wealth_log_ratio(q_a, q_b, &ty)?;
        let u = if log_w == f64::NEG_INFINITY {
            // ruined branch: w = 0
            if params.is_log_utility() {
                f64::NEG_INFINITY
            } else if beta < 1.0 {
                -1.0 / (1.0 - beta)
            } else {
                f64::NEG_INFINITY
            }
        } else {
            crra_utility(log_w.exp2(), params)?
        };
        if u == f64::NEG_INFINITY {
            return Ok(f64::NEG_INFINITY);
        }
        total += prob * u;
    }
    Ok(total)
}
