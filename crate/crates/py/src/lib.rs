//! Python bindings for the kellylab core: the main types (distributions,
//! empirical types, tripartite states, strategies) plus the betting,
//! utility, game and resource operations. Errors surface as ValueError.

use num_bigint::BigUint;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use kellylab::resource::CodeMode;

fn err(e: kellylab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Dist", skip_from_py_object)]
#[derive(Clone)]
struct PyDist {
    inner: kellylab::Dist,
}

#[pymethods]
impl PyDist {
    #[new]
    fn new(probs: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: kellylab::Dist::new(probs).map_err(err)?,
        })
    }

    #[staticmethod]
    fn uniform(k: usize) -> Self {
        Self {
            inner: kellylab::Dist::uniform(k),
        }
    }

    #[staticmethod]
    fn point_mass(k: usize, x: usize) -> PyResult<Self> {
        Ok(Self {
            inner: kellylab::Dist::point_mass(k, x).map_err(err)?,
        })
    }

    #[getter]
    fn probs(&self) -> Vec<f64> {
        self.inner.probs().to_vec()
    }

    #[getter]
    fn alphabet_size(&self) -> usize {
        self.inner.alphabet_size()
    }

    fn __len__(&self) -> usize {
        self.inner.alphabet_size()
    }

    fn __repr__(&self) -> String {
        format!("Dist({:?})", self.inner.probs())
    }
}

#[pyclass(name = "EmpiricalType", skip_from_py_object)]
#[derive(Clone)]
struct PyEmpiricalType {
    inner: kellylab::EmpiricalType,
}

#[pymethods]
impl PyEmpiricalType {
    #[new]
    fn new(counts: Vec<u64>) -> PyResult<Self> {
        Ok(Self {
            inner: kellylab::EmpiricalType::new(counts).map_err(err)?,
        })
    }

    #[staticmethod]
    fn of_sequence(seq: Vec<usize>, k: usize) -> PyResult<Self> {
        Ok(Self {
            inner: kellylab::types::type_of_sequence(&seq, k).map_err(err)?,
        })
    }

    #[getter]
    fn counts(&self) -> Vec<u64> {
        self.inner.counts().to_vec()
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.n()
    }

    fn freq(&self) -> PyDist {
        PyDist {
            inner: self.inner.freq(),
        }
    }

    fn __repr__(&self) -> String {
        format!("EmpiricalType({:?})", self.inner.counts())
    }
}

#[pyclass(name = "CondStrategy", skip_from_py_object)]
#[derive(Clone)]
struct PyCondStrategy {
    inner: kellylab::CondStrategy,
}

#[pymethods]
impl PyCondStrategy {
    #[new]
    fn new(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        let dists = rows
            .into_iter()
            .map(kellylab::Dist::new)
            .collect::<kellylab::Result<Vec<_>>>()
            .map_err(err)?;
        Ok(Self {
            inner: kellylab::CondStrategy::new(dists).map_err(err)?,
        })
    }

    #[getter]
    fn rows(&self) -> Vec<Vec<f64>> {
        self.inner
            .rows()
            .iter()
            .map(|r| r.probs().to_vec())
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("CondStrategy({:?})", self.rows())
    }
}

#[pyclass(name = "JointEmpiricalType", skip_from_py_object)]
#[derive(Clone)]
struct PyJointEmpiricalType {
    inner: kellylab::JointEmpiricalType,
}

#[pymethods]
impl PyJointEmpiricalType {
    #[new]
    fn new(dims: Vec<usize>, counts: Vec<u64>) -> PyResult<Self> {
        Ok(Self {
            inner: kellylab::JointEmpiricalType::new(dims, counts).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_pair_sequences(xs: Vec<usize>, zs: Vec<usize>, kx: usize, kz: usize) -> PyResult<Self> {
        Ok(Self {
            inner: kellylab::JointEmpiricalType::from_pair_sequences(&xs, &zs, kx, kz)
                .map_err(err)?,
        })
    }

    #[staticmethod]
    #[allow(clippy::too_many_arguments)]
    fn from_triple_sequences(
        xs: Vec<usize>,
        ys: Vec<usize>,
        zs: Vec<usize>,
        kx: usize,
        ky: usize,
        kz: usize,
    ) -> PyResult<Self> {
        Ok(Self {
            inner: kellylab::JointEmpiricalType::from_triple_sequences(&xs, &ys, &zs, kx, ky, kz)
                .map_err(err)?,
        })
    }

    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.dims().to_vec()
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.n()
    }

    fn marginal(&self, axis: usize) -> PyEmpiricalType {
        PyEmpiricalType {
            inner: self.inner.marginal(axis),
        }
    }
}

#[pyclass(name = "TripartiteDist", skip_from_py_object)]
#[derive(Clone)]
struct PyTripartiteDist {
    inner: kellylab::TripartiteDist,
}

#[pymethods]
impl PyTripartiteDist {
    #[new]
    fn new(sizes: (usize, usize, usize), probs: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: kellylab::TripartiteDist::new(sizes.0, sizes.1, sizes.2, probs).map_err(err)?,
        })
    }

    #[getter]
    fn sizes(&self) -> (usize, usize, usize) {
        self.inner.sizes()
    }

    #[getter]
    fn probs(&self) -> Vec<f64> {
        self.inner.probs().to_vec()
    }

    fn marginal_x(&self) -> PyDist {
        PyDist {
            inner: self.inner.marginal_x().clone(),
        }
    }

    fn marginal_y(&self) -> PyDist {
        PyDist {
            inner: self.inner.marginal_y().clone(),
        }
    }

    fn marginal_z(&self) -> PyDist {
        PyDist {
            inner: self.inner.marginal_z().clone(),
        }
    }
}

#[pyclass(name = "RiskRewardPoint", skip_from_py_object)]
#[derive(Clone)]
struct PyRiskRewardPoint {
    inner: kellylab::RiskRewardPoint,
}

#[pymethods]
impl PyRiskRewardPoint {
    #[getter]
    fn epsilon(&self) -> Option<f64> {
        self.inner.epsilon
    }

    #[getter]
    fn eta(&self) -> f64 {
        self.inner.eta
    }

    #[getter]
    fn multiplier_eta(&self) -> f64 {
        self.inner.multiplier_eta()
    }

    #[getter]
    fn strategy(&self) -> PyDist {
        PyDist {
            inner: self.inner.strategy.clone(),
        }
    }

    #[getter]
    fn reward_bits_per_round(&self) -> f64 {
        self.inner.reward_bits_per_round
    }

    #[getter]
    fn risk_exponent(&self) -> f64 {
        self.inner.risk_exponent
    }

    #[getter]
    fn constraint_slack(&self) -> bool {
        self.inner.constraint_slack
    }

    fn __repr__(&self) -> String {
        format!(
            "RiskRewardPoint(eta={}, reward={}, risk={})",
            self.inner.eta, self.inner.reward_bits_per_round, self.inner.risk_exponent
        )
    }
}

// --------------------------------------------------------------------------
// divergences

#[pyfunction]
fn shannon_entropy(p: &PyDist) -> f64 {
    kellylab::divergence::shannon_entropy(&p.inner)
}

#[pyfunction]
fn kl_divergence(p: &PyDist, q: &PyDist) -> PyResult<f64> {
    kellylab::divergence::kl_divergence(&p.inner, &q.inner).map_err(err)
}

#[pyfunction]
fn renyi_divergence(alpha: f64, p: &PyDist, q: &PyDist) -> PyResult<f64> {
    kellylab::divergence::renyi_divergence(alpha, &p.inner, &q.inner).map_err(err)
}

// --------------------------------------------------------------------------
// method of types

#[pyfunction]
fn enumerate_types(n: u64, k: usize) -> PyResult<Vec<PyEmpiricalType>> {
    Ok(kellylab::types::enumerate_types(n, k)
        .map_err(err)?
        .into_iter()
        .map(|inner| PyEmpiricalType { inner })
        .collect())
}

#[pyfunction]
fn type_class_size(t: &PyEmpiricalType) -> BigUint {
    kellylab::types::type_class_size(&t.inner)
}

#[pyfunction]
fn sequence_probability(p: &PyDist, t: &PyEmpiricalType) -> PyResult<f64> {
    kellylab::types::sequence_probability(&p.inner, &t.inner).map_err(err)
}

#[pyfunction]
fn type_class_probability_exact(p: &PyDist, t: &PyEmpiricalType) -> PyResult<f64> {
    kellylab::types::type_class_probability_exact(&p.inner, &t.inner).map_err(err)
}

#[pyfunction]
fn type_class_probability_ld(p: &PyDist, t: &PyEmpiricalType) -> PyResult<f64> {
    kellylab::types::type_class_probability_ld(&p.inner, &t.inner).map_err(err)
}

#[pyfunction]
fn string_allocation(q: &PyDist, t: &PyEmpiricalType) -> PyResult<f64> {
    kellylab::types::string_allocation(&q.inner, &t.inner).map_err(err)
}

// --------------------------------------------------------------------------
// kelly betting

#[pyfunction]
fn wealth_log_ratio(q_a: &PyDist, q_b: &PyDist, t: &PyEmpiricalType) -> PyResult<f64> {
    kellylab::kelly::wealth_log_ratio(&q_a.inner, &q_b.inner, &t.inner).map_err(err)
}

#[pyfunction]
fn asymptotic_kelly_rate(p: &PyDist, q_a: &PyDist, q_b: &PyDist) -> PyResult<f64> {
    kellylab::kelly::asymptotic_kelly_rate(&p.inner, &q_a.inner, &q_b.inner).map_err(err)
}

#[pyfunction]
fn tilted_bet(p: &PyDist, q_b: &PyDist, eta: f64) -> PyResult<PyDist> {
    Ok(PyDist {
        inner: kellylab::kelly::tilted_bet(&p.inner, &q_b.inner, eta).map_err(err)?,
    })
}

#[pyfunction]
fn solve_risk_constrained(
    p: &PyDist,
    q_b: &PyDist,
    epsilon: f64,
    n: u64,
) -> PyResult<PyRiskRewardPoint> {
    Ok(PyRiskRewardPoint {
        inner: kellylab::kelly::solve_risk_constrained(&p.inner, &q_b.inner, epsilon, n)
            .map_err(err)?,
    })
}

#[pyfunction]
fn solve_payoff_constrained(p: &PyDist, q_b: &PyDist, k_bits: f64) -> PyResult<PyRiskRewardPoint> {
    Ok(PyRiskRewardPoint {
        inner: kellylab::kelly::solve_payoff_constrained(&p.inner, &q_b.inner, k_bits)
            .map_err(err)?,
    })
}

#[pyfunction]
fn best_type_under_risk(
    p: &PyDist,
    q_b: &PyDist,
    n: u64,
    epsilon: f64,
) -> PyResult<(PyEmpiricalType, f64)> {
    let (ty, reward) =
        kellylab::kelly::best_type_under_risk(&p.inner, &q_b.inner, n, epsilon).map_err(err)?;
    Ok((PyEmpiricalType { inner: ty }, reward))
}

#[pyfunction]
fn reward_identity_check<'py>(
    py: Python<'py>,
    p: &PyDist,
    q_b: &PyDist,
    lam: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let id = kellylab::kelly::reward_identity_check(&p.inner, &q_b.inner, lam).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("geodesic_lhs", id.geodesic_lhs)?;
    d.set_item("geodesic_rhs", id.geodesic_rhs)?;
    d.set_item("reward_lhs", id.reward_lhs)?;
    d.set_item("reward_rhs", id.reward_rhs)?;
    Ok(d)
}

#[pyfunction]
fn risk_reward_bound(p: &PyDist, q_b: &PyDist, epsilon: f64, n: u64) -> PyResult<f64> {
    kellylab::kelly::risk_reward_bound(&p.inner, &q_b.inner, epsilon, n).map_err(err)
}

// --------------------------------------------------------------------------
// CRRA utility

#[pyfunction]
fn crra_utility(w: f64, beta: f64) -> PyResult<f64> {
    let params = kellylab::utility::UtilityParams::new(beta).map_err(err)?;
    kellylab::utility::crra_utility(w, params).map_err(err)
}

#[pyfunction]
fn eta_from_beta(beta: f64) -> PyResult<f64> {
    kellylab::utility::eta_from_beta(beta).map_err(err)
}

#[pyfunction]
fn crra_optimal_strategy(p: &PyDist, q_b: &PyDist, beta: f64) -> PyResult<PyDist> {
    Ok(PyDist {
        inner: kellylab::utility::crra_optimal_strategy(&p.inner, &q_b.inner, beta).map_err(err)?,
    })
}

#[pyfunction]
fn expected_log_wealth_closed_form(p: &PyDist, q_b: &PyDist, alpha: f64) -> PyResult<f64> {
    kellylab::utility::expected_log_wealth_closed_form(&p.inner, &q_b.inner, alpha).map_err(err)
}

#[pyfunction]
fn expected_log_wealth_direct(p: &PyDist, q_a: &PyDist, q_b: &PyDist) -> PyResult<f64> {
    kellylab::utility::expected_log_wealth_direct(&p.inner, &q_a.inner, &q_b.inner).map_err(err)
}

#[pyfunction]
fn expected_utility_estimate(
    p: &PyDist,
    q_a: &PyDist,
    q_b: &PyDist,
    beta: f64,
    n: u64,
) -> PyResult<f64> {
    kellylab::utility::expected_utility_estimate(&p.inner, &q_a.inner, &q_b.inner, beta, n)
        .map_err(err)
}

// --------------------------------------------------------------------------
// side-information game

#[pyfunction]
fn payoff_conditional_form(
    q_a: &PyCondStrategy,
    q_b: &PyCondStrategy,
    jt: &PyJointEmpiricalType,
) -> PyResult<f64> {
    kellylab::sideinfo::payoff_conditional_form(&q_a.inner, &q_b.inner, &jt.inner).map_err(err)
}

#[pyfunction]
fn payoff_global_form(
    q_a: &PyCondStrategy,
    q_b: &PyCondStrategy,
    jt: &PyJointEmpiricalType,
) -> PyResult<f64> {
    kellylab::sideinfo::payoff_global_form(&q_a.inner, &q_b.inner, &jt.inner).map_err(err)
}

#[pyfunction]
fn asymptotic_value(p: &PyTripartiteDist) -> f64 {
    kellylab::sideinfo::asymptotic_value(&p.inner)
}

#[pyfunction]
fn equilibrium_strategies(p: &PyTripartiteDist) -> (PyCondStrategy, PyCondStrategy) {
    let (a, b) = kellylab::sideinfo::equilibrium_strategies(&p.inner);
    (PyCondStrategy { inner: a }, PyCondStrategy { inner: b })
}

#[pyfunction]
fn deviation_penalty(p: &PyTripartiteDist, q_a: &PyCondStrategy) -> PyResult<f64> {
    kellylab::sideinfo::deviation_penalty(&p.inner, &q_a.inner).map_err(err)
}

#[pyfunction]
fn sideinfo_risk_reward<'py>(
    py: Python<'py>,
    p: &PyTripartiteDist,
    target: &PyJointEmpiricalType,
    q_b: &PyCondStrategy,
) -> PyResult<Bound<'py, PyDict>> {
    let rr = kellylab::sideinfo::sideinfo_risk_reward(&p.inner, &target.inner, &q_b.inner)
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("risk_exponent", rr.risk_exponent)?;
    d.set_item("reward_bits", rr.reward_bits)?;
    d.set_item("divergence_term", rr.divergence_term)?;
    d.set_item("h_yz", rr.h_yz)?;
    d.set_item("h_z_given_x", rr.h_z_given_x)?;
    Ok(d)
}

// --------------------------------------------------------------------------
// resource theory

#[pyfunction]
fn is_free_state(p: &PyTripartiteDist, tol: f64) -> bool {
    kellylab::resource::is_free_state(&p.inner, tol)
}

fn joint_from_rows(rows: Vec<Vec<f64>>) -> PyResult<kellylab::JointDist> {
    if rows.is_empty() {
        return Err(PyValueError::new_err("empty joint distribution"));
    }
    let cols = rows[0].len();
    let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
    kellylab::JointDist::new(rows.len(), cols, flat).map_err(err)
}

fn infimum_dict<'py>(
    py: Python<'py>,
    r: kellylab::resource::InfimumResult,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("value", r.value)?;
    d.set_item("minimizer", r.minimizer.probs().to_vec())?;
    d.set_item("certificate_gap", r.certificate_gap)?;
    d.set_item("closed_form", r.closed_form)?;
    Ok(d)
}

/// E_alpha(A:Z) over a joint pmf given as a list of rows.
#[pyfunction]
fn monotone_e_alpha<'py>(
    py: Python<'py>,
    joint_rows: Vec<Vec<f64>>,
    alpha: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let j = joint_from_rows(joint_rows)?;
    infimum_dict(
        py,
        kellylab::resource::monotone_e_alpha(&j, alpha).map_err(err)?,
    )
}

/// E_alpha(Z|A) over a joint pmf given as a list of rows.
#[pyfunction]
fn conditional_negentropy_e_alpha<'py>(
    py: Python<'py>,
    joint_rows: Vec<Vec<f64>>,
    alpha: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let j = joint_from_rows(joint_rows)?;
    infimum_dict(
        py,
        kellylab::resource::conditional_negentropy_e_alpha(&j, alpha).map_err(err)?,
    )
}

#[pyfunction]
fn arq_log_value(p: &PyTripartiteDist) -> f64 {
    kellylab::resource::arq_log_value(&p.inner)
}

#[pyfunction]
fn code_lengths(q: &PyDist, mode: &str) -> PyResult<Vec<f64>> {
    let mode = parse_mode(mode)?;
    Ok(kellylab::resource::lengths_from_strategy(&q.inner, mode)
        .map_err(err)?
        .lengths()
        .to_vec())
}

#[pyfunction]
fn payout_bits(q_b: &PyDist, q_a: &PyDist, outcome: Vec<usize>, mode: &str) -> PyResult<f64> {
    let mode = parse_mode(mode)?;
    let tb = kellylab::resource::lengths_from_strategy(&q_b.inner, mode).map_err(err)?;
    let ta = kellylab::resource::lengths_from_strategy(&q_a.inner, mode).map_err(err)?;
    kellylab::resource::payout_bits(&tb, &ta, &outcome).map_err(err)
}

fn parse_mode(mode: &str) -> PyResult<CodeMode> {
    match mode {
        "real" => Ok(CodeMode::Real),
        "integer" => Ok(CodeMode::Integer),
        other => Err(PyValueError::new_err(format!(
            "mode must be 'real' or 'integer', got {other}"
        ))),
    }
}

// --------------------------------------------------------------------------
// simulation

#[pyfunction]
fn sample_iid(p: &PyDist, n: u64, seed: u64) -> Vec<usize> {
    kellylab::sim::sample_iid(&p.inner, n, seed)
}

#[pyfunction]
fn sample_tripartite(
    p: &PyTripartiteDist,
    n: u64,
    seed: u64,
) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    kellylab::sim::sample_tripartite(&p.inner, n, seed)
}

#[pyfunction]
fn run_betting<'py>(
    py: Python<'py>,
    p: &PyDist,
    q_a: &PyDist,
    q_b: &PyDist,
    n: u64,
    trials: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let stats =
        kellylab::sim::run_betting(&p.inner, &q_a.inner, &q_b.inner, n, trials, seed).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("trials", stats.trials)?;
    d.set_item("n_rounds", stats.n_rounds)?;
    d.set_item("mean_rate", stats.mean_rate)?;
    d.set_item("rate_variance", stats.rate_variance)?;
    d.set_item("ruin_count", stats.ruin_count)?;
    Ok(d)
}

#[pyfunction]
fn empirical_success_rate(
    p: &PyDist,
    q_a: &PyDist,
    q_b: &PyDist,
    n: u64,
    target_rate: f64,
    trials: u64,
    seed: u64,
) -> PyResult<f64> {
    kellylab::sim::empirical_success_rate(
        &p.inner, &q_a.inner, &q_b.inner, n, target_rate, trials, seed,
    )
    .map_err(err)
}

#[pymodule]
fn kellylab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDist>()?;
    m.add_class::<PyEmpiricalType>()?;
    m.add_class::<PyJointEmpiricalType>()?;
    m.add_class::<PyCondStrategy>()?;
    m.add_class::<PyTripartiteDist>()?;
    m.add_class::<PyRiskRewardPoint>()?;

    m.add_function(wrap_pyfunction!(shannon_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(kl_divergence, m)?)?;
    m.add_function(wrap_pyfunction!(renyi_divergence, m)?)?;

    m.add_function(wrap_pyfunction!(enumerate_types, m)?)?;
    m.add_function(wrap_pyfunction!(type_class_size, m)?)?;
    m.add_function(wrap_pyfunction!(sequence_probability, m)?)?;
    m.add_function(wrap_pyfunction!(type_class_probability_exact, m)?)?;
    m.add_function(wrap_pyfunction!(type_class_probability_ld, m)?)?;
    m.add_function(wrap_pyfunction!(string_allocation, m)?)?;

    m.add_function(wrap_pyfunction!(wealth_log_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_kelly_rate, m)?)?;
    m.add_function(wrap_pyfunction!(tilted_bet, m)?)?;
    m.add_function(wrap_pyfunction!(solve_risk_constrained, m)?)?;
    m.add_function(wrap_pyfunction!(solve_payoff_constrained, m)?)?;
    m.add_function(wrap_pyfunction!(best_type_under_risk, m)?)?;
    m.add_function(wrap_pyfunction!(reward_identity_check, m)?)?;
    m.add_function(wrap_pyfunction!(risk_reward_bound, m)?)?;

    m.add_function(wrap_pyfunction!(crra_utility, m)?)?;
    m.add_function(wrap_pyfunction!(eta_from_beta, m)?)?;
    m.add_function(wrap_pyfunction!(crra_optimal_strategy, m)?)?;
    m.add_function(wrap_pyfunction!(expected_log_wealth_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(expected_log_wealth_direct, m)?)?;
    m.add_function(wrap_pyfunction!(expected_utility_estimate, m)?)?;

    m.add_function(wrap_pyfunction!(payoff_conditional_form, m)?)?;
    m.add_function(wrap_pyfunction!(payoff_global_form, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_value, m)?)?;
    m.add_function(wrap_pyfunction!(equilibrium_strategies, m)?)?;
    m.add_function(wrap_pyfunction!(deviation_penalty, m)?)?;
    m.add_function(wrap_pyfunction!(sideinfo_risk_reward, m)?)?;

    m.add_function(wrap_pyfunction!(is_free_state, m)?)?;
    m.add_function(wrap_pyfunction!(monotone_e_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(conditional_negentropy_e_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(arq_log_value, m)?)?;
    m.add_function(wrap_pyfunction!(code_lengths, m)?)?;
    m.add_function(wrap_pyfunction!(payout_bits, m)?)?;

    m.add_function(wrap_pyfunction!(sample_iid, m)?)?;
    m.add_function(wrap_pyfunction!(sample_tripartite, m)?)?;
    m.add_function(wrap_pyfunction!(run_betting, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_success_rate, m)?)?;
    Ok(())
}
