//! The tripartite gambling game: Alice observes X, Bob observes Y, both bet
//! on Z, all three jointly distributed as P_XYZ.
//!
//! Alice's payoff when the realized triple sequence has joint type t is
//!
//!   n ( D(t_yz || W_YZ) - D(t_xz || W_XZ) + H_t(Z|Y) - H_t(Z|X) )
//!
//! with W_XZ(x,z) = t_x(x) Q^A(z|x) and W_YZ(y,z) = t_y(y) Q^B(z|y); the
//! empirical conditional entropies are strategy-independent. An equivalent
//! global form compares the full joint type against t_xy(x,y) Q(z|.) for
//! each player. Asymptotically all types collapse onto P_XYZ, the
//! conditionals P(z|x), P(z|y) become mutually best responses, and the game
//! value is H(Z|Y) - H(Z|X) = I(X:Z) - I(Y:Z).

use crate::dist::{CondStrategy, Dist, JointDist};
use crate::divergence::{entropy_slice, kl_slice};
use crate::error::{Error, Result};
use crate::math::kahan_sum;
use crate::types::JointEmpiricalType;

/// A joint pmf over X x Y x Z with cached marginals and conditionals.
///
/// Conditional rows with zero conditioning mass default to uniform (any
/// convention works; uniform is symmetric). The caches are derived once at
/// construction; `validate` re-derives them for consistency checks.
#[derive(Debug, Clone)]
pub struct TripartiteDist {
    kx: usize,
    ky: usize,
    kz: usize,
    probs: Vec<f64>,
    px: Dist,
    py: Dist,
    pz: Dist,
    pxy: JointDist,
    pxz: JointDist,
    pyz: JointDist,
    z_given_x: CondStrategy,
    z_given_y: CondStrategy,
}

impl TripartiteDist {
    pub fn new(kx: usize, ky: usize, kz: usize, probs: Vec<f64>) -> Result<Self> {
        if kx == 0 || ky == 0 || kz == 0 {
            return Err(Error::InvalidDist("empty alphabet".into()));
        }
        if probs.len() != kx * ky * kz {
            return Err(Error::InvalidDist(format!(
                "expected {} entries for sizes ({kx}, {ky}, {kz}), got {}",
                kx * ky * kz,
                probs.len()
            )));
        }
        // normalization and sign checks ride on Dist
        let flat = Dist::new(probs)?;
        let probs = flat.probs().to_vec();

        let at = |x: usize, y: usize, z: usize| probs[(x * ky + y) * kz + z];
        let sum_over = |f: &dyn Fn(usize, usize, usize) -> bool| -> f64 {
            let mut terms = Vec::new();
            for x in 0..kx {
                for y in 0..ky {
                    for z in 0..kz {
                        if f(x, y, z) {
                            terms.push(at(x, y, z));
                        }
                    }
                }
            }
            kahan_sum(terms)
        };

        let px = Dist::from_weights(
            &(0..kx)
                .map(|x| sum_over(&|a, _, _| a == x))
                .collect::<Vec<_>>(),
        )?;
        let py = Dist::from_weights(
            &(0..ky)
                .map(|y| sum_over(&|_, b, _| b == y))
                .collect::<Vec<_>>(),
        )?;
        let pz = Dist::from_weights(
            &(0..kz)
                .map(|z| sum_over(&|_, _, c| c == z))
                .collect::<Vec<_>>(),
        )?;

        let mut pxy = vec![0.0; kx * ky];
        let mut pxz = vec![0.0; kx * kz];
        let mut pyz = vec![0.0; ky * kz];
        for x in 0..kx {
            for y in 0..ky {
                for z in 0..kz {
                    let p = at(x, y, z);
                    pxy[x * ky + y] += p;
                    pxz[x * kz + z] += p;
                    pyz[y * kz + z] += p;
                }
            }
        }
        let pxy = JointDist::new(kx, ky, renormalize(pxy))?;
        let pxz = JointDist::new(kx, kz, renormalize(pxz))?;
        let pyz = JointDist::new(ky, kz, renormalize(pyz))?;
        let z_given_x = pxz.conditional_cols_given_rows();
        let z_given_y = pyz.conditional_cols_given_rows();

        Ok(Self {
            kx,
            ky,
            kz,
            probs,
            px,
            py,
            pz,
            pxy,
            pxz,
            pyz,
            z_given_x,
            z_given_y,
        })
    }

    /// Product tensor p_x(x) p_y(y) p_z(z): the free states of the game.
    pub fn product(px: &Dist, py: &Dist, pz: &Dist) -> Self {
        let (kx, ky, kz) = (px.alphabet_size(), py.alphabet_size(), pz.alphabet_size());
        let mut probs = Vec::with_capacity(kx * ky * kz);
        for x in 0..kx {
            for y in 0..ky {
                for z in 0..kz {
                    probs.push(px.prob(x) * py.prob(y) * pz.prob(z));
                }
            }
        }
        Self::new(kx, ky, kz, probs).expect("product of valid marginals")
    }

    #[inline]
    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.kx, self.ky, self.kz)
    }

    #[inline]
    pub fn prob(&self, x: usize, y: usize, z: usize) -> f64 {
        self.probs[(x * self.ky + y) * self.kz + z]
    }

    #[inline]
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn marginal_x(&self) -> &Dist {
        &self.px
    }

    pub fn marginal_y(&self) -> &Dist {
        &self.py
    }

    pub fn marginal_z(&self) -> &Dist {
        &self.pz
    }

    pub fn marginal_xy(&self) -> &JointDist {
        &self.pxy
    }

    pub fn marginal_xz(&self) -> &JointDist {
        &self.pxz
    }

    pub fn marginal_yz(&self) -> &JointDist {
        &self.pyz
    }

    pub fn z_given_x(&self) -> &CondStrategy {
        &self.z_given_x
    }

    pub fn z_given_y(&self) -> &CondStrategy {
        &self.z_given_y
    }

    /// Re-derives every cached marginal and conditional from the tensor and
    /// checks it against the cache.
    pub fn validate(&self) -> Result<()> {
        let fresh = Self::new(self.kx, self.ky, self.kz, self.probs.clone())?;
        let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(u, v)| (u - v).abs() < 1e-12);
        let ok = close(fresh.px.probs(), self.px.probs())
            && close(fresh.py.probs(), self.py.probs())
            && close(fresh.pz.probs(), self.pz.probs())
            && close(fresh.pxy.probs(), self.pxy.probs())
            && close(fresh.pxz.probs(), self.pxz.probs())
            && close(fresh.pyz.probs(), self.pyz.probs());
        if !ok {
            return Err(Error::NumericalCheckFailed(
                "cached marginals diverged from the tensor".into(),
            ));
        }
        Ok(())
    }
}

fn renormalize(mut v: Vec<f64>) -> Vec<f64> {
    let total = kahan_sum(v.iter().copied());
    if total > 0.0 {
        for e in &mut v {
            *e /= total;
        }
    }
    v
}

/// Conditional-form payoff of Alice in bits over the whole horizon:
/// n ( D(t_yz||W_YZ) - D(t_xz||W_XZ) + H_t(Z|Y) - H_t(Z|X) ).
///
/// +inf / -inf on one-sided support escape (a player staked nothing on a
/// realized transition); an escape on both sides is an error.
pub fn payoff_conditional_form(
    q_a: &CondStrategy,
    q_b: &CondStrategy,
    jt: &JointEmpiricalType,
) -> Result<f64> {
    let (kx, ky, kz) = check_game_shapes(q_a, q_b, jt)?;
    let n = jt.n() as f64;

    let txz = jt.pair_marginal(0, 2).freq();
    let tyz = jt.pair_marginal(1, 2).freq();
    let tx = jt.marginal(0).freq();
    let ty = jt.marginal(1).freq();

    let mut w_xz = vec![0.0; kx * kz];
    for x in 0..kx {
        for z in 0..kz {
            w_xz[x * kz + z] = tx.prob(x) * q_a.row(x).prob(z);
        }
    }
    let mut w_yz = vec![0.0; ky * kz];
    for y in 0..ky {
        for z in 0..kz {
            w_yz[y * kz + z] = ty.prob(y) * q_b.row(y).prob(z);
        }
    }

    let h_z_given_y = entropy_slice(&tyz) - entropy_slice(ty.probs());
    let h_z_given_x = entropy_slice(&txz) - entropy_slice(tx.probs());
    let d_b = kl_slice(&tyz, &w_yz);
    let d_a = kl_slice(&txz, &w_xz);
    if d_a.is_infinite() && d_b.is_infinite() {
        return Err(Error::Infeasible(
            "realized joint type escapes both strategies' supports".into(),
        ));
    }
    Ok(n * (d_b - d_a + h_z_given_y - h_z_given_x))
}

/// Global-form payoff: n ( D(t_xyz||W_B) - D(t_xyz||W_A) ) with
/// W_A(x,y,z) = t_xy(x,y) Q^A(z|x) and W_B(x,y,z) = t_xy(x,y) Q^B(z|y).
/// Equal to the conditional form on every joint type.
pub fn payoff_global_form(
    q_a: &CondStrategy,
    q_b: &CondStrategy,
    jt: &JointEmpiricalType,
) -> Result<f64> {
    let (kx, ky, kz) = check_game_shapes(q_a, q_b, jt)?;
    let n = jt.n() as f64;

    let txyz = jt.freq();
    let txy = jt.pair_marginal(0, 1).freq();
    let mut w_a = vec![0.0; kx * ky * kz];
    let mut w_b = vec![0.0; kx * ky * kz];
    for x in 0..kx {
        for y in 0..ky {
            for z in 0..kz {
                let m = txy[x * ky + y];
                w_a[(x * ky + y) * kz + z] = m * q_a.row(x).prob(z);
                w_b[(x * ky + y) * kz + z] = m * q_b.row(y).prob(z);
            }
        }
    }
    let d_b = kl_slice(&txyz, &w_b);
    let d_a = kl_slice(&txyz, &w_a);
    if d_a.is_infinite() && d_b.is_infinite() {
        return Err(Error::Infeasible(
            "realized joint type escapes both strategies' supports".into(),
        ));
    }
    Ok(n * (d_b - d_a))
}

fn check_game_shapes(
    q_a: &CondStrategy,
    q_b: &CondStrategy,
    jt: &JointEmpiricalType,
) -> Result<(usize, usize, usize)> {
    if jt.dims().len() != 3 {
        return Err(Error::InvalidType(
            "payoffs need a three-axis (X, Y, Z) joint type".into(),
        ));
    }
    let (kx, ky, kz) = (jt.dims()[0], jt.dims()[1], jt.dims()[2]);
    if q_a.given_size() != kx || q_a.out_size() != kz {
        return Err(Error::AlphabetMismatch {
            left: q_a.given_size() * q_a.out_size(),
            right: kx * kz,
        });
    }
    if q_b.given_size() != ky || q_b.out_size() != kz {
        return Err(Error::AlphabetMismatch {
            left: q_b.given_size() * q_b.out_size(),
            right: ky * kz,
        });
    }
    Ok((kx, ky, kz))
}

/// The asymptotic per-round value of the game, H(Z|Y) - H(Z|X) in bits:
/// the information asymmetry between the players. Equals I(X:Z) - I(Y:Z).
pub fn asymptotic_value(p: &TripartiteDist) -> f64 {
    let h_z_given_y = entropy_slice(p.marginal_yz().probs()) - entropy_slice(p.marginal_y().probs());
    let h_z_given_x = entropy_slice(p.marginal_xz().probs()) - entropy_slice(p.marginal_x().probs());
    h_z_given_y - h_z_given_x
}

/// The mutually best-response pair (P_{Z|X}, P_{Z|Y}) read off the tensor.
pub fn equilibrium_strategies(p: &TripartiteDist) -> (CondStrategy, CondStrategy) {
    (p.z_given_x().clone(), p.z_given_y().clone())
}

/// Alice's asymptotic rate loss for playing q_a instead of P_{Z|X} while Bob
/// stays at equilibrium: sum_x P(x) D(P_{Z|X=x} || q_a(.|x)) >= 0, zero only
/// at the conditional itself (on positive-mass rows). +inf on support escape.
pub fn deviation_penalty(p: &TripartiteDist, q_a: &CondStrategy) -> Result<f64> {
    let (kx, _, kz) = p.sizes();
    if q_a.given_size() != kx || q_a.out_size() != kz {
        return Err(Error::AlphabetMismatch {
            left: q_a.given_size() * q_a.out_size(),
            right: kx * kz,
        });
    }
    let px = p.marginal_x();
    let mut total = 0.0;
    for x in 0..kx {
        if px.prob(x) == 0.0 {
            continue; // never-observed rows carry no penalty
        }
        let d = kl_slice(p.z_given_x().row(x).probs(), q_a.row(x).probs());
        if d.is_infinite() {
            return Ok(f64::INFINITY);
        }
        total += px.prob(x) * d;
    }
    Ok(total)
}

/// Risk and reward of backing a target (Y, Z) joint type against Bob's odds.
#[derive(Debug, Clone, Copy)]
pub struct SideinfoRiskReward {
    /// n D(t_yz || P_YZ): the success probability is ~ 2^{-risk_exponent}.
    pub risk_exponent: f64,
    /// Total reward in bits when the target type occurs.
    pub reward_bits: f64,
    /// n D(t_yz || 1_Y q_b), the all-ones-weight divergence term.
    pub divergence_term: f64,
    /// n H(t_yz), the joint empirical entropy term.
    pub h_yz: f64,
    /// n H_t(Z|X), the side-information entropy subtracted from the reward.
    pub h_z_given_x: f64,
}

/// Appendix-style risk-reward pair for betting on a joint (Y, Z) type class:
///
///   risk   = n D(t_yz || P_YZ)
///   reward = n ( D(t_yz || 1_Y q_b) + H(t_yz) - H_t(Z|X) )
///
/// where D(. || 1_Y q_b) = D(. || u_Y q_b) - log2|Y| uses the all-ones
/// weight convention. The target may be a full (X, Y, Z) type, from which
/// H_t(Z|X) is read off, or a plain (Y, Z) type, which is treated as having
/// trivial side information for Alice (|X| = 1, H_t(Z|X) = H(t_z)); the
/// latter reduces the pair exactly to the single-party risk-reward case.
pub fn sideinfo_risk_reward(
    p: &TripartiteDist,
    target: &JointEmpiricalType,
    q_b: &CondStrategy,
) -> Result<SideinfoRiskReward> {
    let (_, ky, kz) = p.sizes();
    if q_b.given_size() != ky || q_b.out_size() != kz {
        return Err(Error::AlphabetMismatch {
            left: q_b.given_size() * q_b.out_size(),
            right: ky * kz,
        });
    }
    let n = target.n() as f64;
    let (tyz, h_z_given_x) = match target.dims() {
        [a, b] => {
            if *a != ky || *b != kz {
                return Err(Error::AlphabetMismatch {
                    left: a * b,
                    right: ky * kz,
                });
            }
            // no side information for Alice: H_t(Z|X) degenerates to H(t_z)
            let h_z = entropy_slice(target.marginal(1).freq().probs());
            (target.clone(), h_z)
        }
        [a, b, c] => {
            if *a != p.sizes().0 || *b != ky || *c != kz {
                return Err(Error::AlphabetMismatch {
                    left: a * b * c,
                    right: p.sizes().0 * ky * kz,
                });
            }
            let txz = target.pair_marginal(0, 2).freq();
            let tx = target.marginal(0).freq();
            let h = entropy_slice(&txz) - entropy_slice(tx.probs());
            (target.pair_marginal(1, 2), h)
        }
        _ => {
            return Err(Error::InvalidType(
                "target must be a (Y, Z) or (X, Y, Z) joint type".into(),
            ))
        }
    };

    let tyz_freq = tyz.freq();
    let risk = n * kl_slice(&tyz_freq, p.marginal_yz().probs());

    // u_Y q_b as a joint weight over (Y, Z)
    let mut uq = vec![0.0; ky * kz];
    for y in 0..ky {
        for z in 0..kz {
            uq[y * kz + z] = q_b.row(y).prob(z) / ky as f64;
        }
    }
    let divergence_term = n * (kl_slice(&tyz_freq, &uq) - (ky as f64).log2());
    let h_yz = n * entropy_slice(&tyz_freq);
    let h_zx = n * h_z_given_x;
    let reward = divergence_term + h_yz - h_zx;
    Ok(SideinfoRiskReward {
        risk_exponent: risk,
        reward_bits: reward,
        divergence_term,
        h_yz,
        h_z_given_x: h_zx,
    })
}
