//! Method-of-types machinery.
//!
//! An empirical type is the frequency distribution of a finite sequence;
//! its type class is the set of all sequences sharing it. Type-class sizes
//! are exact big-integer multinomials (n! overflows u64 at n = 21 and the
//! sandwich bounds need exactness); probabilities are carried in the log
//! domain. Enumeration is lexicographic on count vectors and guarded by a
//! configurable cap, because C(n+k-1, k-1) explodes.

use num_bigint::BigUint;

use crate::dist::{CondStrategy, Dist};
use crate::divergence::{entropy_slice, kl_slice};
use crate::error::{Error, Result};
use crate::math::log2_biguint;

/// Default guard on the number of types an enumeration may produce.
pub const DEFAULT_TYPE_CAP: u128 = 10_000_000;

/// An integer count vector with denominator n: the type of a length-n
/// sequence over a k-letter alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EmpiricalType {
    counts: Vec<u64>,
    n: u64,
}

impl EmpiricalType {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidType("empty alphabet".into()));
        }
        let n: u64 = counts.iter().sum();
        if n == 0 {
            return Err(Error::InvalidType("counts sum to zero".into()));
        }
        Ok(Self { counts, n })
    }

    #[inline]
    pub fn n(&self) -> u64 {
        self.n
    }

    #[inline]
    pub fn alphabet_size(&self) -> usize {
        self.counts.len()
    }

    #[inline]
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// The frequency distribution counts/n, a valid `Dist` with rational
    /// entries of denominator n.
    pub fn freq(&self) -> Dist {
        let n = self.n as f64;
        Dist::from_weights(&self.counts.iter().map(|&c| c as f64 / n).collect::<Vec<_>>())
            .expect("counts/n is a valid distribution")
    }
}

/// Number of types C(n+k-1, k-1), saturating at u128::MAX.
pub fn count_types(n: u64, k: usize) -> u128 {
    if k == 0 {
        return 0;
    }
    let b = binomial(n + k as u64 - 1, k as u64 - 1);
    let digits = b.to_u64_digits();
    match digits.len() {
        0 => 0,
        1 => digits[0] as u128,
        2 => (digits[1] as u128) << 64 | digits[0] as u128,
        _ => u128::MAX,
    }
}

/// All compositions of n into k non-negative parts, in lexicographic order
/// of count vectors, under the default cap.
pub fn enumerate_types(n: u64, k: usize) -> Result<Vec<EmpiricalType>> {
    enumerate_types_with_cap(n, k, DEFAULT_TYPE_CAP)
}

pub fn enumerate_types_with_cap(n: u64, k: usize, cap: u128) -> Result<Vec<EmpiricalType>> {
    if n < 1 || k < 1 {
        return Err(Error::InvalidParameter(
            "need n >= 1 and k >= 1 to enumerate types".into(),
        ));
    }
    let total = count_types(n, k);
    if total > cap {
        return Err(Error::TypeCapExceeded { count: total, cap });
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut counts = vec![0u64; k];
    fill_types(n, 0, &mut counts, &mut out);
    Ok(out)
}

fn fill_types(remaining: u64, pos: usize, counts: &mut Vec<u64>, out: &mut Vec<EmpiricalType>) {
    if pos == counts.len() - 1 {
        counts[pos] = remaining;
        out.push(EmpiricalType {
            counts: counts.clone(),
            n: counts.iter().sum(),
        });
        return;
    }
    for c in 0..=remaining {
        counts[pos] = c;
        fill_types(remaining - c, pos + 1, counts, out);
    }
    counts[pos] = 0;
}

/// The type of a concrete symbol sequence.
pub fn type_of_sequence(seq: &[usize], k: usize) -> Result<EmpiricalType> {
    if seq.is_empty() {
        return Err(Error::InvalidType("empty sequence has no type".into()));
    }
    let mut counts = vec![0u64; k];
    for &s in seq {
        if s >= k {
            return Err(Error::SymbolOutOfRange {
                symbol: s,
                alphabet: k,
            });
        }
        counts[s] += 1;
    }
    EmpiricalType::new(counts)
}

/// Exact size of the type class: the multinomial n! / prod_x counts[x]!.
pub fn type_class_size(t: &EmpiricalType) -> BigUint {
    let mut size = BigUint::from(1u8);
    let mut remaining = t.n;
    for &c in t.counts() {
        size *= binomial(remaining, c);
        remaining -= c;
    }
    size
}

/// log2 of the exact type-class size, full f64 precision at any magnitude.
pub fn log2_type_class_size(t: &EmpiricalType) -> f64 {
    log2_biguint(&type_class_size(t))
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u8);
    }
    let k = k.min(n - k);
    let mut b = BigUint::from(1u8);
    for i in 0..k {
        b *= n - i;
        b /= i + 1; // divides exactly: b is always a binomial prefix
    }
    b
}

/// The classical sandwich (n+1)^{-k} 2^{nH} <= |type class| <= 2^{nH}.
///
/// Returns (lower, size, upper); the bounds are verified in the log domain
/// before returning.
pub fn type_size_bounds_check(t: &EmpiricalType) -> Result<(f64, BigUint, f64)> {
    let size = type_class_size(t);
    let n = t.n as f64;
    let k = t.alphabet_size() as f64;
    let h = entropy_slice(t.freq().probs());
    let log2_upper = n * h;
    let log2_lower = log2_upper - k * (n + 1.0).log2();
    let log2_size = log2_biguint(&size);
    if log2_size > log2_upper + 1e-9 || log2_size < log2_lower - 1e-9 {
        return Err(Error::NumericalCheckFailed(format!(
            "type-class size 2^{log2_size} escapes sandwich [2^{log2_lower}, 2^{log2_upper}]"
        )));
    }
    Ok((log2_lower.exp2(), size, log2_upper.exp2()))
}

/// log2 of the probability that an i.i.d. source p emits one given sequence
/// of type t: -n (H(t) + D(t||p)). -inf when t puts mass outside supp(p).
pub fn log2_sequence_probability(p: &Dist, t: &EmpiricalType) -> Result<f64> {
    check_type_alphabet(p, t)?;
    let freq = t.freq();
    let h = entropy_slice(freq.probs());
    let d = kl_slice(freq.probs(), p.probs());
    Ok(-(t.n as f64) * (h + d))
}

/// Probability of one given sequence of type t under p, as a plain real.
pub fn sequence_probability(p: &Dist, t: &EmpiricalType) -> Result<f64> {
    Ok(log2_sequence_probability(p, t)?.exp2())
}

/// The fraction of wealth a bettor with letter-wise strategy q stakes on
/// each individual string of type t: 2^{-n(H(t) + D(t||q))}. Summed over
/// all strings this is 1.
pub fn string_allocation(q: &Dist, t: &EmpiricalType) -> Result<f64> {
    sequence_probability(q, t)
}

/// log2 of the total probability of the type class: log2 |class| + log2 P(seq).
pub fn log2_type_class_probability(p: &Dist, t: &EmpiricalType) -> Result<f64> {
    let per_seq = log2_sequence_probability(p, t)?;
    if per_seq == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(log2_biguint(&type_class_size(t)) + per_seq)
}

/// Exact probability that the realized sequence lands in t's type class:
/// |class| * P(one sequence). Sums to 1 over all types of fixed (n, k).
pub fn type_class_probability_exact(p: &Dist, t: &EmpiricalType) -> Result<f64> {
    Ok(log2_type_class_probability(p, t)?.exp2())
}

/// The large-deviation exponent of the type-class probability: -n D(t||p).
///
/// This is the estimate P(class) ~ 2^{exponent} up to sub-exponential terms,
/// not the exact value; the gap is at most k log2(n+1) bits.
pub fn type_class_probability_ld(p: &Dist, t: &EmpiricalType) -> Result<f64> {
    check_type_alphabet(p, t)?;
    let d = kl_slice(t.freq().probs(), p.probs());
    Ok(-(t.n as f64) * d)
}

fn check_type_alphabet(p: &Dist, t: &EmpiricalType) -> Result<()> {
    if p.alphabet_size() != t.alphabet_size() {
        return Err(Error::AlphabetMismatch {
            left: p.alphabet_size(),
            right: t.alphabet_size(),
        });
    }
    Ok(())
}

/// A joint count tensor over a product alphabet (two or three axes),
/// summing to n. Marginalizing any subset of axes keeps the same n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointEmpiricalType {
    dims: Vec<usize>,
    counts: Vec<u64>,
    n: u64,
}

impl JointEmpiricalType {
    pub fn new(dims: Vec<usize>, counts: Vec<u64>) -> Result<Self> {
        if dims.len() < 2 || dims.len() > 3 {
            return Err(Error::InvalidType(
                "joint types support two or three axes".into(),
            ));
        }
        let cells: usize = dims.iter().product();
        if cells == 0 || counts.len() != cells {
            return Err(Error::InvalidType(format!(
                "expected {} cells for dims {:?}, got {}",
                cells,
                dims,
                counts.len()
            )));
        }
        let n: u64 = counts.iter().sum();
        if n == 0 {
            return Err(Error::InvalidType("counts sum to zero".into()));
        }
        Ok(Self { dims, counts, n })
    }

    pub fn from_pair_sequences(
        xs: &[usize],
        zs: &[usize],
        kx: usize,
        kz: usize,
    ) -> Result<Self> {
        if xs.is_empty() || xs.len() != zs.len() {
            return Err(Error::InvalidType(
                "need equal-length non-empty sequences".into(),
            ));
        }
        let mut counts = vec![0u64; kx * kz];
        for (&x, &z) in xs.iter().zip(zs.iter()) {
            if x >= kx {
                return Err(Error::SymbolOutOfRange { symbol: x, alphabet: kx });
            }
            if z >= kz {
                return Err(Error::SymbolOutOfRange { symbol: z, alphabet: kz });
            }
            counts[x * kz + z] += 1;
        }
        Self::new(vec![kx, kz], counts)
    }

    pub fn from_triple_sequences(
        xs: &[usize],
        ys: &[usize],
        zs: &[usize],
        kx: usize,
        ky: usize,
        kz: usize,
    ) -> Result<Self> {
        if xs.is_empty() || xs.len() != ys.len() || xs.len() != zs.len() {
            return Err(Error::InvalidType(
                "need equal-length non-empty sequences".into(),
            ));
        }
        let mut counts = vec![0u64; kx * ky * kz];
        for i in 0..xs.len() {
            let (x, y, z) = (xs[i], ys[i], zs[i]);
            if x >= kx {
                return Err(Error::SymbolOutOfRange { symbol: x, alphabet: kx });
            }
            if y >= ky {
                return Err(Error::SymbolOutOfRange { symbol: y, alphabet: ky });
            }
            if z >= kz {
                return Err(Error::SymbolOutOfRange { symbol: z, alphabet: kz });
            }
            counts[(x * ky + y) * kz + z] += 1;
        }
        Self::new(vec![kx, ky, kz], counts)
    }

    #[inline]
    pub fn n(&self) -> u64 {
        self.n
    }

    #[inline]
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    #[inline]
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Joint frequencies counts/n, flattened row-major.
    pub fn freq(&self) -> Vec<f64> {
        let n = self.n as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1usize; self.dims.len()];
        for i in (0..self.dims.len() - 1).rev() {
            s[i] = s[i + 1] * self.dims[i + 1];
        }
        s
    }

    fn index_of(&self, flat: usize, axis: usize) -> usize {
        let strides = self.strides();
        (flat / strides[axis]) % self.dims[axis]
    }

    /// Marginal counts along one axis, as a plain empirical type.
    pub fn marginal(&self, axis: usize) -> EmpiricalType {
        assert!(axis < self.dims.len(), "axis out of range");
        let mut counts = vec![0u64; self.dims[axis]];
        for flat in 0..self.counts.len() {
            counts[self.index_of(flat, axis)] += self.counts[flat];
        }
        EmpiricalType { counts, n: self.n }
    }

    /// Two-axis marginal onto (a, b) with a < b, preserving axis order.
    pub fn pair_marginal(&self, a: usize, b: usize) -> JointEmpiricalType {
        assert!(a < b && b < self.dims.len(), "invalid axis pair");
        let (ka, kb) = (self.dims[a], self.dims[b]);
        let mut counts = vec![0u64; ka * kb];
        for flat in 0..self.counts.len() {
            let ia = self.index_of(flat, a);
            let ib = self.index_of(flat, b);
            counts[ia * kb + ib] += self.counts[flat];
        }
        JointEmpiricalType {
            dims: vec![ka, kb],
            counts,
            n: self.n,
        }
    }

    /// The same counts viewed as a type over the flattened product alphabet.
    pub fn flattened(&self) -> EmpiricalType {
        EmpiricalType {
            counts: self.counts.clone(),
            n: self.n,
        }
    }
}

/// log2 P(z^n | x^n) for an i.i.d. channel P(z|x) and the joint (X, Z) type
/// of the realized pair sequence:
///
///   -n ( H(t_xz) - H(t_x) + D(t_xz || W) ),   W(x,z) = t_x(x) P(z|x).
///
/// Equals the per-round product sum_i log2 P(z_i|x_i); -inf when the type
/// uses a transition outside the channel's support.
pub fn log2_conditional_sequence_probability(
    p_cond: &CondStrategy,
    jt: &JointEmpiricalType,
) -> Result<f64> {
    if jt.dims().len() != 2 {
        return Err(Error::InvalidType(
            "conditional sequence probability needs a two-axis (X, Z) type".into(),
        ));
    }
    let (kx, kz) = (jt.dims()[0], jt.dims()[1]);
    if p_cond.given_size() != kx || p_cond.out_size() != kz {
        return Err(Error::AlphabetMismatch {
            left: p_cond.given_size() * p_cond.out_size(),
            right: kx * kz,
        });
    }
    let joint_freq = jt.freq();
    let x_freq = jt.marginal(0).freq();
    let mut w = vec![0.0; kx * kz];
    for x in 0..kx {
        for z in 0..kz {
            w[x * kz + z] = x_freq.prob(x) * p_cond.row(x).prob(z);
        }
    }
    let h_xz = entropy_slice(&joint_freq);
    let h_x = entropy_slice(x_freq.probs());
    let d = kl_slice(&joint_freq, &w);
    Ok(-(jt.n() as f64) * (h_xz - h_x + d))
}

/// P(z^n | x^n) as a plain real in [0, 1]; 0 on support violation.
pub fn conditional_sequence_probability(
    p_cond: &CondStrategy,
    jt: &JointEmpiricalType,
) -> Result<f64> {
    Ok(log2_conditional_sequence_probability(p_cond, jt)?.exp2())
}
