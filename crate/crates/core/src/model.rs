use crate::error::{Error, Result};
use crate::phenomenon::{check_table, marginal_of, Marginal, Phenomenon};
use crate::scalar::{Rational, Scalar, DEFAULT_TOL};
use crate::scenario::{Cell, Scenario, Side};

/// Hidden-variable model over a finite support: a prior `P(λ)` and, for
/// each `λ`, a joint response table `P(x, y | a, b, λ)` laid out like a
/// [`Phenomenon`] table.
#[derive(Debug, Clone, PartialEq)]
pub struct HvModel<T> {
    scenario: Scenario,
    labels: Vec<String>,
    prior: Vec<T>,
    responses: Vec<Vec<T>>,
}

pub type ExactModel = HvModel<Rational>;
pub type FloatModel = HvModel<f64>;

impl<T: Scalar> HvModel<T> {
    pub fn new(scenario: Scenario, labels: Vec<String>, prior: Vec<T>, responses: Vec<Vec<T>>) -> Result<Self> {
        scenario.validate()?;
        if prior.is_empty() {
            return Err(Error::NonNormalized("empty hidden-variable support".into()));
        }
        if labels.len() != prior.len() || responses.len() != prior.len() {
            return Err(Error::InvalidScenario(format!(
                "{} labels, {} prior weights, {} response tables",
                labels.len(),
                prior.len(),
                responses.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::InvalidScenario(format!("duplicate hidden-variable label `{l}`")));
            }
        }
        for (l, w) in labels.iter().zip(&prior) {
            if !w.in_unit_interval(DEFAULT_TOL) {
                return Err(Error::InvalidProbability(format!("prior weight of `{l}` = {w:?}")));
            }
        }
        let total = prior.iter().fold(T::zero(), |acc, w| acc + w.clone());
        if !total.approx_eq(&T::one(), DEFAULT_TOL) {
            return Err(Error::NonNormalized(format!(
                "prior sums to {}",
                total.to_probability()
            )));
        }
        for (l, r) in labels.iter().zip(&responses) {
            if r.len() != scenario.n_cells() {
                return Err(Error::InvalidScenario(format!(
                    "response for `{l}` has {} cells, expected {}",
                    r.len(),
                    scenario.n_cells()
                )));
            }
            check_table(&scenario, r, &format!("response for λ = {l}"))?;
        }
        Ok(HvModel {
            scenario,
            labels,
            prior,
            responses,
        })
    }

    /// Labels `λ0, λ1, …`.
    pub fn with_default_labels(scenario: Scenario, prior: Vec<T>, responses: Vec<Vec<T>>) -> Result<Self> {
        let labels = (0..prior.len()).map(|i| format!("λ{i}")).collect();
        Self::new(scenario, labels, prior, responses)
    }

    /// One-point support whose response is the phenomenon itself.
    pub fn single_lambda(phenomenon: &Phenomenon<T>) -> Self {
        HvModel {
            scenario: phenomenon.scenario().clone(),
            labels: vec!["λ0".into()],
            prior: vec![T::one()],
            responses: vec![phenomenon.table().to_vec()],
        }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn prior(&self) -> &[T] {
        &self.prior
    }

    pub fn support_size(&self) -> usize {
        self.prior.len()
    }

    pub fn response(&self, lambda: usize) -> &[T] {
        &self.responses[lambda]
    }

    pub fn responses(&self) -> &[Vec<T>] {
        &self.responses
    }

    pub fn response_prob(&self, lambda: usize, cell: Cell) -> &T {
        &self.responses[lambda][self.scenario.index(cell)]
    }

    /// Per-λ single-party table `P(x | a, b, λ)` or `P(y | a, b, λ)`.
    pub fn response_marginal(&self, lambda: usize, side: Side) -> Marginal<T> {
        marginal_of(&self.scenario, &self.responses[lambda], side)
    }

    /// `f(x, y | a, b) = Σ_λ P(x, y | a, b, λ) P(λ)`.
    pub fn predicted_phenomenon(&self) -> Result<Phenomenon<T>> {
        let mut table = vec![T::zero(); self.scenario.n_cells()];
        for (w, r) in self.prior.iter().zip(&self.responses) {
            if w.is_zero() {
                continue;
            }
            for (acc, v) in table.iter_mut().zip(r) {
                *acc = acc.clone() + w.clone() * v.clone();
            }
        }
        // Invariants were checked on construction; a failure here means the
        // floating sum drifted beyond tolerance.
        check_table(&self.scenario, &table, "predicted phenomenon").map_err(|e| match e {
            Error::NonNormalized(m) => Error::NonNormalized(format!("model: {m}")),
            other => other,
        })?;
        Ok(Phenomenon::from_parts_unchecked(self.scenario.clone(), table))
    }

    /// True iff the predicted table is within `tol` of `phenomenon` in every
    /// cell. Exact models require `tol == 0`.
    pub fn reproduces(&self, phenomenon: &Phenomenon<T>, tol: f64) -> Result<bool> {
        if T::EXACT && tol != 0.0 {
            return Err(Error::ExactTolerance(tol));
        }
        if !self.scenario.same_shape(phenomenon.scenario()) {
            return Err(Error::ScenarioMismatch(format!(
                "model {} vs phenomenon {}",
                self.scenario,
                phenomenon.scenario()
            )));
        }
        let predicted = self.predicted_phenomenon()?;
        Ok(predicted
            .table()
            .iter()
            .zip(phenomenon.table())
            .all(|(p, q)| p.approx_eq(q, tol)))
    }

    /// Prior-weighted union of several models' supports.
    pub fn mixture(parts: &[(T, &HvModel<T>)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Domain("empty mixture".into()))?
            .1;
        let mut labels = Vec::new();
        let mut prior = Vec::new();
        let mut responses = Vec::new();
        for (i, (w, m)) in parts.iter().enumerate() {
            first.scenario.check_same(&m.scenario)?;
            for (l, (p, r)) in m.labels.iter().zip(m.prior.iter().zip(&m.responses)) {
                labels.push(format!("{i}:{l}"));
                prior.push(w.clone() * p.clone());
                responses.push(r.clone());
            }
        }
        Self::new(first.scenario.clone(), labels, prior, responses)
    }

    pub fn to_float(&self) -> FloatModel {
        HvModel {
            scenario: self.scenario.clone(),
            labels: self.labels.clone(),
            prior: self.prior.iter().map(Scalar::to_f64).collect(),
            responses: self
                .responses
                .iter()
                .map(|r| r.iter().map(Scalar::to_f64).collect())
                .collect(),
        }
    }
}
