//! The local polytope: deterministic strategies, exact membership with
//! weights or a separating functional, and the two constructive directions
//! of the deterministic/locally-causal equivalence.

mod simplex;
mod strategy;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

pub use simplex::{phase_one, Feasibility};
pub use strategy::{
    enumerate_strategies, enumerate_strategies_with_cap, local_bound, local_bound_with_cap, strategy_count,
    strategy_phenomenon, DeterministicStrategy, DEFAULT_STRATEGY_CAP,
};

use crate::error::{Error, Result};
use crate::model::{ExactModel, HvModel};
use crate::phenomenon::{ExactPhenomenon, FloatPhenomenon};
use crate::properties::{is_locally_causal, is_signal_local};
use crate::scalar::{Rational, Scalar};
use crate::scenario::{Cell, Scenario, Side};

/// Denominator cap used when floating tables are rationalized for the LP.
pub const RATIONALIZE_DENOM: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipResult {
    pub member: bool,
    /// Nonzero weights keyed by index into [`enumerate_strategies`].
    pub weights: Option<Vec<(usize, Rational)>>,
    pub certificate: Option<Certificate>,
}

/// Linear functional `g` over table cells with `g · v <= bound` on every
/// vertex `v` and `g · f = value > bound` on the separated table `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub coefficients: Vec<Rational>,
    pub bound: Rational,
    pub value: Rational,
}

/// A functional on a binary-outcome scenario written in correlators:
/// `Σ_a alice[a]·⟨A_a⟩ + Σ_b bob[b]·⟨B_b⟩ + Σ_ab joint[a][b]·E(a,b)`,
/// outcome 0 read as +1.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorForm {
    pub constant: Rational,
    pub alice: Vec<Rational>,
    pub bob: Vec<Rational>,
    pub joint: Vec<Vec<Rational>>,
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn dot(g: &[Rational], f: &[Rational]) -> Rational {
    g.iter().zip(f).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

fn sign(outcome: usize) -> i64 {
    if outcome == 0 {
        1
    } else {
        -1
    }
}

impl Certificate {
    /// Re-derives the claim by brute force over every vertex, independent
    /// of the solver: the bound is attained and respected, and the table
    /// value exceeds it.
    pub fn verify(&self, phenomenon: &ExactPhenomenon) -> Result<bool> {
        let s = phenomenon.scenario();
        if self.coefficients.len() != s.n_cells() {
            return Ok(false);
        }
        let strategies = enumerate_strategies(s)?;
        let max = strategies
            .par_iter()
            .map(|st| st.evaluate(s, &self.coefficients))
            .max()
            .expect("nonempty strategy set");
        let value = dot(&self.coefficients, phenomenon.table());
        Ok(max == self.bound && value == self.value && value > max)
    }

    /// Correlator coordinates of the functional, for binary outcomes.
    pub fn correlator_form(&self, scenario: &Scenario) -> Result<CorrelatorForm> {
        correlator_form(scenario, &self.coefficients)
    }
}

fn require_binary(s: &Scenario) -> Result<()> {
    if s.n_outcomes_alice != 2 || s.n_outcomes_bob != 2 {
        return Err(Error::OutcomeArity {
            alice: s.n_outcomes_alice,
            bob: s.n_outcomes_bob,
        });
    }
    Ok(())
}

/// Per-block Fourier coefficients `(G0, GA, GB, GAB)` of a cell functional.
fn block_coefficients(s: &Scenario, g: &[Rational], a: usize, b: usize) -> [Rational; 4] {
    let mut out = [Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()];
    for x in 0..2 {
        for y in 0..2 {
            let v = &g[s.index(Cell { a, b, x, y })] / q(4, 1);
            let (sx, sy) = (q(sign(x), 1), q(sign(y), 1));
            out[0] += &v;
            out[1] += &v * &sx;
            out[2] += &v * &sy;
            out[3] += &v * sx * sy;
        }
    }
    out
}

pub fn correlator_form(scenario: &Scenario, g: &[Rational]) -> Result<CorrelatorForm> {
    require_binary(scenario)?;
    let (na, nb) = (scenario.n_settings_alice, scenario.n_settings_bob);
    let mut form = CorrelatorForm {
        constant: Rational::zero(),
        alice: vec![Rational::zero(); na],
        bob: vec![Rational::zero(); nb],
        joint: vec![vec![Rational::zero(); nb]; na],
    };
    for (a, b) in scenario.setting_pairs() {
        let [c0, ca, cb, cab] = block_coefficients(scenario, g, a, b);
        form.constant += c0 * q(4, 1);
        form.alice[a] += ca * q(4, 1);
        form.bob[b] += cb * q(4, 1);
        form.joint[a][b] = cab * q(4, 1);
    }
    Ok(form)
}

/// Rewrites `g` so each block sums to zero and, on binary-outcome
/// scenarios, the single-party terms are spread evenly over the remote
/// settings. Values on signal-local tables (all vertices included) shift
/// by a common constant only.
fn canonicalize(s: &Scenario, g: &[Rational], project: bool) -> Vec<Rational> {
    let mut out = g.to_vec();
    if project && s.n_outcomes_alice == 2 && s.n_outcomes_bob == 2 {
        let (na, nb) = (s.n_settings_alice, s.n_settings_bob);
        let coeffs: Vec<Vec<[Rational; 4]>> = (0..na)
            .map(|a| (0..nb).map(|b| block_coefficients(s, g, a, b)).collect())
            .collect();
        let alpha: Vec<Rational> = (0..na)
            .map(|a| coeffs[a].iter().fold(Rational::zero(), |acc, c| acc + &c[1]))
            .collect();
        let beta: Vec<Rational> = (0..nb)
            .map(|b| coeffs.iter().fold(Rational::zero(), |acc, row| acc + &row[b][2]))
            .collect();
        for c in s.cells() {
            let (sx, sy) = (q(sign(c.x), 1), q(sign(c.y), 1));
            out[s.index(c)] = &sx * &alpha[c.a] / q(nb as i64, 1)
                + &sy * &beta[c.b] / q(na as i64, 1)
                + sx * sy * &coeffs[c.a][c.b][3];
        }
        return out;
    }
    for (a, b) in s.setting_pairs() {
        let range = s.block(a, b);
        let mean = out[range.clone()].iter().fold(Rational::zero(), |acc, v| acc + v) / q(range.len() as i64, 1);
        for v in &mut out[range] {
            *v -= &mean;
        }
    }
    out
}

fn build_certificate(phenomenon: &ExactPhenomenon, farkas: &[Rational]) -> Result<Certificate> {
    let s = phenomenon.scenario();
    let raw = &farkas[..s.n_cells()];
    let signal_local = is_signal_local(phenomenon, 0.0).holds;
    let mut g = canonicalize(s, raw, signal_local);
    let mut bound = local_bound(s, &g)?;
    let mut value = dot(&g, phenomenon.table());
    if value <= bound {
        // Projection is value-preserving only on signal-local tables; fall
        // back to the plain gauge-fixed functional.
        g = canonicalize(s, raw, false);
        bound = local_bound(s, &g)?;
        value = dot(&g, phenomenon.table());
    }
    debug_assert!(value > bound, "Farkas vector must separate");
    let two = q(2, 1);
    if bound.is_positive() {
        let k = &two / &bound;
        g.iter_mut().for_each(|v| *v *= &k);
        value *= k;
    } else {
        // Shift every cell so each vertex gains the same amount.
        let shift = (&two - &bound) / q(s.n_blocks() as i64, 1);
        g.iter_mut().for_each(|v| *v += &shift);
        value += shift * q(s.n_blocks() as i64, 1);
    }
    Ok(Certificate {
        coefficients: g,
        bound: two,
        value,
    })
}

/// Decides whether an exact table lies in the convex hull of the
/// deterministic strategy vertices.
pub fn membership(phenomenon: &ExactPhenomenon) -> Result<MembershipResult> {
    membership_with_cap(phenomenon, DEFAULT_STRATEGY_CAP)
}

pub fn membership_with_cap(phenomenon: &ExactPhenomenon, cap: u128) -> Result<MembershipResult> {
    let s = phenomenon.scenario();
    let strategies = enumerate_strategies_with_cap(s, cap)?;
    let mut rows: Vec<Vec<Rational>> = s
        .cells()
        .map(|c| {
            strategies
                .iter()
                .map(|st| if st.deterministic_entry(c) { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect();
    rows.push(vec![Rational::one(); strategies.len()]);
    let mut rhs: Vec<Rational> = phenomenon.table().to_vec();
    rhs.push(Rational::one());

    match phase_one(&rows, &rhs) {
        Feasibility::Feasible(w) => Ok(MembershipResult {
            member: true,
            weights: Some(w.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect()),
            certificate: None,
        }),
        Feasibility::Infeasible(y) => Ok(MembershipResult {
            member: false,
            weights: None,
            certificate: Some(build_certificate(phenomenon, &y)?),
        }),
    }
}

/// Rationalizes a floating table (denominator cap 10⁶, renormalized per
/// block) and decides membership of the result. The verdict applies to the
/// returned rational table.
pub fn membership_float(phenomenon: &FloatPhenomenon) -> Result<(ExactPhenomenon, MembershipResult)> {
    let exact = ExactPhenomenon::rationalized(phenomenon, RATIONALIZE_DENOM)?;
    let result = membership(&exact)?;
    Ok((exact, result))
}

fn digits(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

/// Deterministic model whose support is the strategies of nonzero weight.
pub fn model_from_weights(result: &MembershipResult, scenario: &Scenario) -> Result<ExactModel> {
    let weights = match (&result.member, &result.weights) {
        (true, Some(w)) => w,
        _ => return Err(Error::NotMember),
    };
    let strategies = enumerate_strategies(scenario)?;
    let mut labels = Vec::with_capacity(weights.len());
    let mut prior = Vec::with_capacity(weights.len());
    let mut responses = Vec::with_capacity(weights.len());
    for (i, w) in weights {
        let st = strategies
            .get(*i)
            .ok_or_else(|| Error::InvalidScenario(format!("strategy index {i} out of range")))?;
        labels.push(format!("s{i}"));
        prior.push(w.clone());
        responses.push(strategy_phenomenon(st, scenario)?.table().to_vec());
    }
    HvModel::new(scenario.clone(), labels, prior, responses)
}

/// Splits each `λ` of a locally causal model into `(λ, r_A, r_B)` with
/// deterministic responses, weighting by the product of the per-setting
/// marginals. Zero-weight points are dropped.
pub fn determinize<T: Scalar>(model: &HvModel<T>, tol: f64) -> Result<HvModel<T>> {
    let verdict = is_locally_causal(model, tol);
    if !verdict.holds {
        let detail = verdict
            .witness
            .map(|w| format!("{:?}: {} vs {}", w.at, w.lhs, w.rhs))
            .unwrap_or_default();
        return Err(Error::NotLocallyCausal(detail));
    }
    let s = model.scenario();
    let strategies = enumerate_strategies(s)?;
    let vertices: Vec<Vec<T>> = strategies
        .iter()
        .map(|st| {
            s.cells()
                .map(|c| if st.deterministic_entry(c) { T::one() } else { T::zero() })
                .collect()
        })
        .collect();

    let mut labels = Vec::new();
    let mut prior = Vec::new();
    let mut responses = Vec::new();
    for (l, w) in model.prior().iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        let ma = model.response_marginal(l, Side::Alice);
        let mb = model.response_marginal(l, Side::Bob);
        for (st, vertex) in strategies.iter().zip(&vertices) {
            let mut p = w.clone();
            for (a, &x) in st.alice.iter().enumerate() {
                p = p * ma.get(x, a, 0).clone();
            }
            for (b, &y) in st.bob.iter().enumerate() {
                p = p * mb.get(y, b, 0).clone();
            }
            if p.is_zero() {
                continue;
            }
            labels.push(format!("{}|A{}|B{}", model.labels()[l], digits(&st.alice), digits(&st.bob)));
            prior.push(p);
            responses.push(vertex.clone());
        }
    }
    HvModel::new(s.clone(), labels, prior, responses)
}
