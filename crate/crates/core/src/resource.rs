//! The resource-theory layer: free states, divergence monotones over
//! product marginals, the adversarial payoff functional, and the Kraft-code
//! realization of betting as communication.
//!
//! Free states are full product tensors P_X P_Y P_Z (preparable with no
//! referee-to-player communication). The monotones
//!
//!   E_a(A:Z)  = inf_{Q_A} D_a(P_AZ || Q_A x P_Z)
//!   E_a(Z|A)  = inf_{Q_A} D_a(P_AZ || Q_A x u_Z)    (conditional negentropy)
//!
//! are solved numerically: deterministic multi-start mirror descent with an
//! exact Frank-Wolfe gap as the optimality certificate, plus a simplex-grid
//! sweep for |A| <= 3. At a = 1 they collapse to I(A:Z) and
//! log2|Z| - H(Z|A), which the solver reports alongside as a cross-check.
//!
//! Betting becomes communication through variable-length codes: committing
//! odds is committing code lengths with sum_z 2^{-l(z)} = 1 (real-valued
//! idealization) or <= 1 (integer Shannon lengths), and the payout is the
//! leftover channel capacity l_B(z^n) - l_A(z^n).

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::dist::{Dist, JointDist};
use crate::divergence::{mutual_information, renyi_slice};
use crate::error::{Error, Result};
use crate::math::kahan_sum;
use crate::sideinfo::TripartiteDist;

/// Whether code lengths are ideal reals or integer Shannon lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeMode {
    /// l(z) = -log2 q(z); Kraft sum exactly 1.
    Real,
    /// l(z) = ceil(-log2 q(z)); Kraft sum <= 1, lengths integral.
    Integer,
}

/// A per-symbol variable-length code commitment, extended to sequences
/// additively. Kraft-McMillan is re-verified on every construction.
#[derive(Debug, Clone)]
pub struct CodeTable {
    mode: CodeMode,
    lengths: Vec<f64>,
}

impl CodeTable {
    pub fn new(mode: CodeMode, lengths: Vec<f64>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::InvalidCodeTable("no outcomes".into()));
        }
        for (z, &l) in lengths.iter().enumerate() {
            let ok = match mode {
                CodeMode::Real => l.is_finite() && l >= 0.0,
                // integer mode may leave zero-probability outcomes uncovered
                CodeMode::Integer => (l >= 0.0 && l.fract() == 0.0) || l == f64::INFINITY,
            };
            if !ok {
                return Err(Error::InvalidCodeTable(format!(
                    "length {l} for outcome {z} violates {mode:?} mode"
                )));
            }
        }
        let kraft = kahan_sum(lengths.iter().map(|&l| (-l).exp2()));
        match mode {
            CodeMode::Real => {
                if (kraft - 1.0).abs() > 1e-10 {
                    return Err(Error::InvalidCodeTable(format!(
                        "Kraft sum {kraft} misses the real-mode equality"
                    )));
                }
            }
            CodeMode::Integer => {
                if kraft > 1.0 + 1e-12 {
                    return Err(Error::InvalidCodeTable(format!(
                        "Kraft sum {kraft} exceeds 1"
                    )));
                }
            }
        }
        Ok(Self { mode, lengths })
    }

    #[inline]
    pub fn mode(&self) -> CodeMode {
        self.mode
    }

    #[inline]
    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn kraft_sum(&self) -> f64 {
        kahan_sum(self.lengths.iter().map(|&l| (-l).exp2()))
    }

    /// Length of the codeword for a whole sequence: per-symbol lengths
    /// summed (the i.i.d. product-code convention).
    pub fn sequence_length(&self, outcome: &[usize]) -> Result<f64> {
        let mut total = 0.0;
        for &z in outcome {
            if z >= self.lengths.len() {
                return Err(Error::SymbolOutOfRange {
                    symbol: z,
                    alphabet: self.lengths.len(),
                });
            }
            total += self.lengths[z];
        }
        Ok(total)
    }
}

/// Builds the code table realizing strategy q: l(z) = -log2 q(z) in real
/// mode (errors on zero-probability outcomes), Shannon lengths
/// ceil(-log2 q(z)) in integer mode (zero-probability outcomes stay
/// uncovered at infinite length).
pub fn lengths_from_strategy(q: &Dist, mode: CodeMode) -> Result<CodeTable> {
    let lengths: Vec<f64> = match mode {
        CodeMode::Real => {
            if !q.is_full_support() {
                return Err(Error::InvalidCodeTable(
                    "real-mode codes need full support (a zero-probability outcome has no finite length)"
                        .into(),
                ));
            }
            q.probs().iter().map(|&p| -p.log2()).collect()
        }
        CodeMode::Integer => q
            .probs()
            .iter()
            .map(|&p| {
                if p > 0.0 {
                    (-p.log2()).ceil()
                } else {
                    f64::INFINITY
                }
            })
            .collect(),
    };
    CodeTable::new(mode, lengths)
}

/// The payout k = l_B(z^n) - l_A(z^n) in bits: the leftover channel capacity
/// after Alice decodes. Negative k is her cost. In real mode this equals
/// log2(Q_A(z^n)/Q_B(z^n)) exactly (checked in the log domain before
/// returning). Errors when the outcome is uncovered by both tables.
pub fn payout_bits(table_b: &CodeTable, table_a: &CodeTable, outcome: &[usize]) -> Result<f64> {
    let lb = table_b.sequence_length(outcome)?;
    let la = table_a.sequence_length(outcome)?;
    if lb.is_infinite() && la.is_infinite() {
        return Err(Error::Infeasible(
            "outcome uncovered by both code tables".into(),
        ));
    }
    let k = lb - la;
    if table_b.mode() == CodeMode::Real && table_a.mode() == CodeMode::Real {
        // 2^k = Q_A / Q_B: verify the wealth-code identity in the log domain
        let log_qa = -la;
        let log_qb = -lb;
        if (k - (log_qa - log_qb)).abs() > 1e-10 {
            return Err(Error::NumericalCheckFailed(format!(
                "payout {k} deviates from the wealth log-ratio {}",
                log_qa - log_qb
            )));
        }
    }
    Ok(k)
}

/// True iff the tensor is within `tol` (max-norm) of the product of its own
/// marginals, i.e. preparable without communication.
pub fn is_free_state(p: &TripartiteDist, tol: f64) -> bool {
    let prod = TripartiteDist::product(p.marginal_x(), p.marginal_y(), p.marginal_z());
    p.probs()
        .iter()
        .zip(prod.probs())
        .all(|(a, b)| (a - b).abs() <= tol)
}

/// Result of a numerical infimum: the incumbent, a Frank-Wolfe optimality
/// certificate (an upper bound on the objective gap at the incumbent), and
/// the closed form when one exists at this order.
#[derive(Debug, Clone)]
pub struct InfimumResult {
    pub value: f64,
    pub minimizer: Dist,
    pub certificate_gap: f64,
    pub closed_form: Option<f64>,
}

/// E_a(A:Z) = inf over Q_A of D_a(P_AZ || Q_A x P_Z), in bits.
///
/// Multi-start mirror descent with a deterministic seed plus a simplex-grid
/// sweep for |A| <= 3; at a = 1 the closed form I(A:Z) is attached and the
/// numeric value must agree with it (the caller's tests hold the tolerance).
pub fn monotone_e_alpha(p_pair: &JointDist, alpha: f64) -> Result<InfimumResult> {
    if !(alpha >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "order must be >= 0, got {alpha}"
        )));
    }
    let pz = p_pair.marginal_cols();
    let closed = (alpha == 1.0).then(|| mutual_information(p_pair));
    infimum_over_rows(p_pair, alpha, pz.probs(), closed)
}

/// E_a(Z|A) = inf over Q_A of D_a(P_AZ || Q_A x u_Z): the conditional
/// negentropy, 0 when Z is uniform (even conditioned on A) and log2|Z| when
/// Z is a deterministic function of A. At a = 1 the closed form is
/// log2|Z| - H(Z|A).
pub fn conditional_negentropy_e_alpha(p_pair: &JointDist, alpha: f64) -> Result<InfimumResult> {
    if !(alpha >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "order must be >= 0, got {alpha}"
        )));
    }
    let kz = p_pair.cols();
    let uz = vec![1.0 / kz as f64; kz];
    let closed = (alpha == 1.0).then(|| {
        let h_az = crate::divergence::entropy_slice(p_pair.probs());
        let h_a = crate::divergence::entropy_slice(p_pair.marginal_rows().probs());
        (kz as f64).log2() - (h_az - h_a)
    });
    infimum_over_rows(p_pair, alpha, &uz, closed)
}

/// Shared optimizer: inf over q on the |A|-simplex of
/// D_a(P_AZ || q x weight_z). The objective is convex in q for every a >= 0.
fn infimum_over_rows(
    p_pair: &JointDist,
    alpha: f64,
    weight_z: &[f64],
    closed_form: Option<f64>,
) -> Result<InfimumResult> {
    let ka = p_pair.rows();
    let kz = p_pair.cols();
    let evaluate = |q: &[f64]| -> f64 {
        let mut prod = vec![0.0; ka * kz];
        for a in 0..ka {
            for z in 0..kz {
                prod[a * kz + z] = q[a] * weight_z[z];
            }
        }
        renyi_slice(alpha, p_pair.probs(), &prod)
    };

    let mut best_q: Vec<f64> = p_pair.marginal_rows().probs().to_vec();
    let mut best_v = evaluate(&best_q);

    // grid sweep for tiny row alphabets
    if ka <= 3 {
        let step_inv = if ka == 2 { 1000 } else { 100 };
        let mut consider = |q: Vec<f64>| {
            let v = evaluate(&q);
            if v < best_v {
                best_v = v;
                best_q = q;
            }
        };
        if ka == 1 {
            consider(vec![1.0]);
        } else if ka == 2 {
            for i in 0..=step_inv {
                let a = i as f64 / step_inv as f64;
                consider(vec![a, 1.0 - a]);
            }
        } else {
            for i in 0..=step_inv {
                for j in 0..=(step_inv - i) {
                    let a = i as f64 / step_inv as f64;
                    let b = j as f64 / step_inv as f64;
                    consider(vec![a, b, (1.0 - a - b).max(0.0)]);
                }
            }
        }
    }

    // deterministic multi-start mirror descent; starts run independently in
    // parallel and the reduction breaks value ties by lowest start index
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut starts: Vec<Vec<f64>> = vec![
        p_pair.marginal_rows().probs().to_vec(),
        vec![1.0 / ka as f64; ka],
        best_q.clone(),
    ];
    for _ in 0..5 {
        let w: Vec<f64> = (0..ka).map(|_| rng.random::<f64>() + 1e-3).collect();
        let total: f64 = w.iter().sum();
        starts.push(w.iter().map(|x| x / total).collect());
    }
    let outcomes: Vec<Option<(Vec<f64>, f64)>> = {
        use rayon::prelude::*;
        starts
            .into_par_iter()
            .map(|start| mirror_descent(&evaluate, start, 400))
            .collect()
    };
    for outcome in outcomes.into_iter().flatten() {
        let (q, v) = outcome;
        if v < best_v {
            best_v = v;
            best_q = q;
        }
    }

    let gap = frank_wolfe_gap(&evaluate, &best_q);
    Ok(InfimumResult {
        value: best_v,
        minimizer: Dist::from_weights(&best_q)
            .map_err(|e| Error::NumericalCheckFailed(e.to_string()))?,
        certificate_gap: gap,
        closed_form,
    })
}

/// Multiplicative-weights descent on the simplex with numeric gradients and
/// a halving step size. Returns the final iterate and value.
fn mirror_descent(
    evaluate: &impl Fn(&[f64]) -> f64,
    mut q: Vec<f64>,
    iters: usize,
) -> Option<(Vec<f64>, f64)> {
    // keep iterates interior so gradients stay finite
    let floor = 1e-12;
    let renorm = |q: &mut Vec<f64>| {
        let mut total = 0.0;
        for e in q.iter_mut() {
            *e = e.max(floor);
            total += *e;
        }
        for e in q.iter_mut() {
            *e /= total;
        }
    };
    renorm(&mut q);
    let mut value = evaluate(&q);
    if !value.is_finite() {
        return None;
    }
    let mut step = 1.0;
    for _ in 0..iters {
        let grad = numeric_gradient(evaluate, &q);
        // multiplicative update: q <- q exp(-step * grad), renormalized
        let mut improved = false;
        for _ in 0..20 {
            let m = grad.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mut cand: Vec<f64> = q
                .iter()
                .zip(grad.iter())
                .map(|(&qi, &gi)| qi * (-step * (gi - m)).exp())
                .collect();
            renorm(&mut cand);
            let v = evaluate(&cand);
            if v < value - 1e-15 {
                q = cand;
                value = v;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved || step < 1e-14 {
            break;
        }
        step = (step * 2.0).min(4.0);
    }
    Some((q, value))
}

fn numeric_gradient(evaluate: &impl Fn(&[f64]) -> f64, q: &[f64]) -> Vec<f64> {
    let h = 1e-7;
    let mut grad = vec![0.0; q.len()];
    let mut probe = q.to_vec();
    for i in 0..q.len() {
        let orig = probe[i];
        probe[i] = orig + h;
        let up = evaluate(&probe);
        probe[i] = (orig - h).max(1e-14);
        let down = evaluate(&probe);
        grad[i] = (up - down) / (probe[i] + h - orig + (orig - probe[i]));
        probe[i] = orig;
    }
    grad
}

/// Frank-Wolfe certificate for a convex objective on the simplex:
/// f(q) - f* <= <grad, q> - min_i grad_i.
fn frank_wolfe_gap(evaluate: &impl Fn(&[f64]) -> f64, q: &[f64]) -> f64 {
    let grad = numeric_gradient(evaluate, q);
    let inner: f64 = q.iter().zip(grad.iter()).map(|(a, b)| a * b).sum();
    let min_coord = grad.iter().cloned().fold(f64::INFINITY, f64::min);
    (inner - min_coord).max(0.0)
}

/// M_a(P_XYZ) = inf over full product tensors Q_X x Q_Y x Q_Z of
/// D_a(P_XYZ || Q). Grid search, exposed for binary alphabets only; larger
/// instances are out of desk scale. Returns (value, grid step).
pub fn monotone_m_alpha(p: &TripartiteDist, alpha: f64, step_inv: usize) -> Result<(f64, f64)> {
    let (kx, ky, kz) = p.sizes();
    if kx > 2 || ky > 2 || kz > 2 {
        return Err(Error::GridTooLarge(
            "the full product-state infimum is exposed only for binary alphabets".into(),
        ));
    }
    if step_inv < 2 {
        return Err(Error::InvalidParameter("need at least 2 grid steps".into()));
    }
    let axis = |k: usize| -> Vec<Vec<f64>> {
        if k == 1 {
            vec![vec![1.0]]
        } else {
            (0..=step_inv)
                .map(|i| {
                    let a = i as f64 / step_inv as f64;
                    vec![a, 1.0 - a]
                })
                .collect()
        }
    };
    let mut best = f64::INFINITY;
    let mut prod = vec![0.0; kx * ky * kz];
    for qx in axis(kx) {
        for qy in axis(ky) {
            for qz in axis(kz) {
                for x in 0..kx {
                    for y in 0..ky {
                        for z in 0..kz {
                            prod[(x * ky + y) * kz + z] = qx[x] * qy[y] * qz[z];
                        }
                    }
                }
                let v = renyi_slice(alpha, p.probs(), &prod);
                if v < best {
                    best = v;
                }
            }
        }
    }
    Ok((best, 1.0 / step_inv as f64))
}

/// The saddle value of the log-scored adversarial payoff
/// sup_QA inf_QB E[log2(Q_A(z|x)/Q_B(z|y))]: exactly H(Z|Y) - H(Z|X).
pub fn arq_log_value(p: &TripartiteDist) -> f64 {
    crate::sideinfo::asymptotic_value(p)
}

/// Grid sup-inf and inf-sup of the payoff functional E[f(Q_A/Q_B)].
#[derive(Debug, Clone, Copy)]
pub struct MinimaxValues {
    pub sup_inf: f64,
    pub inf_sup: f64,
}

/// Evaluates the adversarial payoff functional over per-row simplex grids of
/// the given resolution (a single-round expectation over P_XYZ).
///
/// sup_inf <= inf_sup always holds up to grid slack; for f = log both
/// bracket the closed-form saddle value. Alphabets above 3 or grids whose
/// strategy count explodes are refused.
pub fn arq_numeric(
    p: &TripartiteDist,
    f: impl Fn(f64) -> f64,
    step_inv: usize,
) -> Result<MinimaxValues> {
    let (kx, ky, kz) = p.sizes();
    if kx > 3 || ky > 3 || kz > 3 {
        return Err(Error::GridTooLarge(
            "adversarial grids are exposed for alphabets up to 3".into(),
        ));
    }
    let rows = simplex_grid(kz, step_inv);
    let n_rows = rows.len() as u128;
    let combos_a = n_rows.pow(kx as u32);
    let combos_b = n_rows.pow(ky as u32);
    if combos_a > 200_000 || combos_b > 200_000 {
        return Err(Error::GridTooLarge(format!(
            "{combos_a} x {combos_b} strategy profiles exceed the grid budget"
        )));
    }

    // Payoff decomposes across the opponent's conditioning symbol, so the
    // inner optimization runs row-by-row instead of over full profiles.
    // A zero stake pays a zero wealth relative regardless of the odds; a
    // positive stake against zero odds pays infinitely.
    let term = |qa_row: &[f64], qb_row: &[f64], x: usize, y: usize| -> f64 {
        let mut e = 0.0;
        for z in 0..kz {
            let w = p.prob(x, y, z);
            if w > 0.0 {
                let ratio = if qa_row[z] == 0.0 {
                    0.0
                } else if qb_row[z] == 0.0 {
                    f64::INFINITY
                } else {
                    qa_row[z] / qb_row[z]
                };
                e += w * f(ratio);
            }
        }
        e
    };

    // sup over Alice profiles of (inf over Bob rows, independently per y)
    let mut sup_inf = f64::NEG_INFINITY;
    for qa in profiles(&rows, kx) {
        let mut total = 0.0;
        for y in 0..ky {
            let mut best_b = f64::INFINITY;
            for qb_row in &rows {
                let mut e = 0.0;
                for x in 0..kx {
                    e += term(qa[x], qb_row, x, y);
                }
                if e < best_b {
                    best_b = e;
                }
            }
            total += best_b;
        }
        if total > sup_inf {
            sup_inf = total;
        }
    }

    // inf over Bob profiles of (sup over Alice rows, independently per x)
    let mut inf_sup = f64::INFINITY;
    for qb in profiles(&rows, ky) {
        let mut total = 0.0;
        for x in 0..kx {
            let mut best_a = f64::NEG_INFINITY;
            for qa_row in &rows {
                let mut e = 0.0;
                for y in 0..ky {
                    e += term(qa_row, qb[y], x, y);
                }
                if e > best_a {
                    best_a = e;
                }
            }
            total += best_a;
        }
        if total < inf_sup {
            inf_sup = total;
        }
    }

    Ok(MinimaxValues { sup_inf, inf_sup })
}

fn simplex_grid(k: usize, step_inv: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    match k {
        1 => out.push(vec![1.0]),
        2 => {
            for i in 0..=step_inv {
                let a = i as f64 / step_inv as f64;
                out.push(vec![a, 1.0 - a]);
            }
        }
        3 => {
            for i in 0..=step_inv {
                for j in 0..=(step_inv - i) {
                    let a = i as f64 / step_inv as f64;
                    let b = j as f64 / step_inv as f64;
                    out.push(vec![a, b, (1.0 - a - b).max(0.0)]);
                }
            }
        }
        _ => unreachable!("grids are capped at 3 outcomes"),
    }
    out
}

/// Cartesian power of the row grid: all strategy profiles with `rows` rows.
fn profiles<'a>(grid: &'a [Vec<f64>], rows: usize) -> Vec<Vec<&'a [f64]>> {
    let mut out: Vec<Vec<&[f64]>> = vec![Vec::new()];
    for _ in 0..rows {
        let mut next = Vec::with_capacity(out.len() * grid.len());
        for partial in &out {
            for row in grid {
                let mut with = partial.clone();
                with.push(row.as_slice());
                next.push(with);
            }
        }
        out = next;
    }
    out
}
