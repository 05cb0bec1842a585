//! Probability distributions over finite alphabets.
//!
//! `Dist` is the base currency of the whole crate: the race distribution
//! P_X, Alice's bet Q_X^A and Bob's odds Q_X^B (odds O(x) = 1/Q_X^B(x))
//! are all `Dist` values. `CondStrategy` holds one `Dist` per observed
//! symbol and doubles as a stake vector / odds vector; `JointDist` is a
//! two-axis pmf used by the resource-monotone layer.

use crate::error::{Error, Result};
use crate::math::kahan_sum;

/// Absolute tolerance on probability normalization.
pub const PROB_TOL: f64 = 1e-12;

/// A probability mass function over a finite alphabet {0, .., k-1}.
///
/// Invariants (checked at construction): all entries are finite and >= 0,
/// and they sum to 1 within [`PROB_TOL`]. The support is exactly the set of
/// indices with strictly positive probability.
#[derive(Debug, Clone, PartialEq)]
pub struct Dist {
    probs: Vec<f64>,
}

impl Dist {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDist("empty alphabet".into()));
        }
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() || p < 0.0 {
                return Err(Error::InvalidDist(format!(
                    "entry {i} is {p}, expected a finite value >= 0"
                )));
            }
        }
        let total = kahan_sum(probs.iter().copied());
        if (total - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidDist(format!(
                "entries sum to {total}, expected 1 within {PROB_TOL}"
            )));
        }
        Ok(Self { probs })
    }

    /// Normalizes a vector of non-negative weights into a distribution.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidDist("empty alphabet".into()));
        }
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidDist(format!(
                    "weight {i} is {w}, expected a finite value >= 0"
                )));
            }
        }
        let total = kahan_sum(weights.iter().copied());
        if total <= 0.0 {
            return Err(Error::InvalidDist("weights sum to zero".into()));
        }
        Self::new(weights.iter().map(|w| w / total).collect())
    }

    pub fn uniform(k: usize) -> Self {
        assert!(k >= 1, "alphabet must be non-empty");
        Self {
            probs: vec![1.0 / k as f64; k],
        }
    }

    pub fn point_mass(k: usize, x: usize) -> Result<Self> {
        if x >= k {
            return Err(Error::SymbolOutOfRange {
                symbol: x,
                alphabet: k,
            });
        }
        let mut probs = vec![0.0; k];
        probs[x] = 1.0;
        Ok(Self { probs })
    }

    #[inline]
    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }

    #[inline]
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    #[inline]
    pub fn prob(&self, x: usize) -> f64 {
        self.probs[x]
    }

    /// Indices with strictly positive probability.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(i, _)| i)
    }

    /// True iff every symbol in this support also lies in `other`'s support.
    pub fn support_subset_of(&self, other: &Dist) -> bool {
        self.probs
            .iter()
            .zip(other.probs.iter())
            .all(|(&p, &q)| p == 0.0 || q > 0.0)
    }

    pub fn is_full_support(&self) -> bool {
        self.probs.iter().all(|&p| p > 0.0)
    }

    pub(crate) fn check_same_alphabet(&self, other: &Dist) -> Result<()> {
        if self.alphabet_size() != other.alphabet_size() {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet_size(),
                right: other.alphabet_size(),
            });
        }
        Ok(())
    }
}

/// A per-observed-symbol strategy: one outcome distribution per conditioning
/// symbol. Houses Q^A(z|x), Q^B(z|y) and, equivalently, stake/odds vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct CondStrategy {
    rows: Vec<Dist>,
}

impl CondStrategy {
    pub fn new(rows: Vec<Dist>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidDist("strategy needs at least one row".into()));
        }
        let out = rows[0].alphabet_size();
        for (i, r) in rows.iter().enumerate() {
            if r.alphabet_size() != out {
                return Err(Error::InvalidDist(format!(
                    "row {i} has {} outcomes, expected {out}",
                    r.alphabet_size()
                )));
            }
        }
        Ok(Self { rows })
    }

    /// Strategy that plays the same marginal regardless of the observation.
    pub fn constant(given_size: usize, row: Dist) -> Result<Self> {
        Self::new(vec![row; given_size.max(1)])
    }

    #[inline]
    pub fn given_size(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn out_size(&self) -> usize {
        self.rows[0].alphabet_size()
    }

    #[inline]
    pub fn row(&self, x: usize) -> &Dist {
        &self.rows[x]
    }

    #[inline]
    pub fn rows(&self) -> &[Dist] {
        &self.rows
    }

    /// Q(z|x) as a flat (given, out) row-major matrix.
    pub fn matrix(&self) -> Vec<f64> {
        let mut m = Vec::with_capacity(self.given_size() * self.out_size());
        for r in &self.rows {
            m.extend_from_slice(r.probs());
        }
        m
    }
}

/// A joint pmf over a product alphabet A x Z, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDist {
    rows: usize,
    cols: usize,
    probs: Vec<f64>,
}

impl JointDist {
    pub fn new(rows: usize, cols: usize, probs: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDist("empty alphabet".into()));
        }
        if probs.len() != rows * cols {
            return Err(Error::InvalidDist(format!(
                "expected {} entries, got {}",
                rows * cols,
                probs.len()
            )));
        }
        // reuse Dist validation (non-negativity + normalization)
        let flat = Dist::new(probs)?;
        Ok(Self {
            rows,
            cols,
            probs: flat.probs,
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn prob(&self, a: usize, z: usize) -> f64 {
        self.probs[a * self.cols + z]
    }

    #[inline]
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn marginal_rows(&self) -> Dist {
        let mut m = vec![0.0; self.rows];
        for a in 0..self.rows {
            m[a] = kahan_sum((0..self.cols).map(|z| self.prob(a, z)));
        }
        Dist::from_weights(&m).expect("marginal of a valid joint pmf")
    }

    pub fn marginal_cols(&self) -> Dist {
        let mut m = vec![0.0; self.cols];
        for z in 0..self.cols {
            m[z] = kahan_sum((0..self.rows).map(|a| self.prob(a, z)));
        }
        Dist::from_weights(&m).expect("marginal of a valid joint pmf")
    }

    /// Conditional distributions of the column variable given each row value.
    /// Rows with zero marginal mass default to uniform.
    pub fn conditional_cols_given_rows(&self) -> CondStrategy {
        let pa = self.marginal_rows();
        let rows = (0..self.rows)
            .map(|a| {
                if pa.prob(a) > 0.0 {
                    let w: Vec<f64> = (0..self.cols).map(|z| self.prob(a, z)).collect();
                    Dist::from_weights(&w).expect("conditional of a valid joint pmf")
                } else {
                    Dist::uniform(self.cols)
                }
            })
            .collect();
        CondStrategy::new(rows).expect("conditional rows share the column alphabet")
    }

    /// Product distribution q_a (x) p_z as a joint pmf.
    pub fn product(row_dist: &Dist, col_dist: &Dist) -> Self {
        let rows = row_dist.alphabet_size();
        let cols = col_dist.alphabet_size();
        let mut probs = Vec::with_capacity(rows * cols);
        for a in 0..rows {
            for z in 0..cols {
                probs.push(row_dist.prob(a) * col_dist.prob(z));
            }
        }
        Self { rows, cols, probs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative_entries() {
        assert!(Dist::new(vec![1.1, -0.1]).is_err());
    }

    #[test]
    fn rejects_bad_normalization() {
        assert!(Dist::new(vec![0.5, 0.6]).is_err());
        assert!(Dist::new(vec![0.5, 0.5 - 1e-9]).is_err());
        // within tolerance is fine
        assert!(Dist::new(vec![0.5, 0.5 - 1e-14]).is_ok());
    }

    #[test]
    fn support_is_positive_indices() {
        let d = Dist::new(vec![0.5, 0.0, 0.5]).unwrap();
        assert_eq!(d.support().collect::<Vec<_>>(), vec![0, 2]);
        assert!(!d.is_full_support());
    }

    #[test]
    fn point_mass_and_uniform() {
        let pm = Dist::point_mass(3, 1).unwrap();
        assert_eq!(pm.probs(), &[0.0, 1.0, 0.0]);
        assert!(Dist::point_mass(3, 3).is_err());
        let u = Dist::uniform(4);
        assert!(u.probs().iter().all(|&p| (p - 0.25).abs() < 1e-15));
    }

    #[test]
    fn joint_marginals_and_conditionals() {
        // P(a,z) with rows (0.6, 0.4) and a deterministic column given a
        let j = JointDist::new(2, 2, vec![0.6, 0.0, 0.0, 0.4]).unwrap();
        assert!((j.marginal_rows().prob(0) - 0.6).abs() < 1e-15);
        assert!((j.marginal_cols().prob(1) - 0.4).abs() < 1e-15);
        let c = j.conditional_cols_given_rows();
        assert!((c.row(0).prob(0) - 1.0).abs() < 1e-15);
        assert!((c.row(1).prob(1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_mass_conditional_row_defaults_to_uniform() {
        let j = JointDist::new(2, 2, vec![0.5, 0.5, 0.0, 0.0]).unwrap();
        let c = j.conditional_cols_given_rows();
        assert_eq!(c.row(1).probs(), &[0.5, 0.5]);
    }
}
