//! Seeded random instances for fuzzing implication claims.
//!
//! Each trial gets its own generator derived from `(seed, trial)`, so a batch
//! of trials gives identical results whether it runs serially or in parallel.

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::model::{ExactModel, HvModel};
use crate::scalar::{round_to_denominator, Rational, Scalar};
use crate::scenario::Scenario;

/// Denominator used when rounding sampled probabilities to rationals.
pub const RATIONAL_DENOM: u32 = 64;

/// Generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Symmetric Dirichlet(1) sample of length `n` (normalized exponentials).
pub fn dirichlet<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|d| d / total).collect()
}

/// Dirichlet(1) sample rounded to multiples of `1/64`, summing to one exactly.
pub fn exact_dirichlet<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Rational> {
    round_to_denominator(&dirichlet(rng, n), RATIONAL_DENOM)
}

/// Structural family a random model is drawn from. Sampling a joint
/// response uniformly almost never lands on the measure-zero sets where
/// locality or predetermination hold, so the fuzzers mix families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelFamily {
    /// Independent Dirichlet joint response per (a, b, λ).
    Generic,
    /// Product of per-party responses; locally causal.
    Factorized,
    /// One deterministic local strategy per λ.
    Deterministic,
    /// Deterministic responses that may depend on both settings.
    DeterministicSignaling,
    /// Remote-independent marginals with correlated joint: local, generally
    /// not locally causal.
    ParameterIndependent,
}

impl ModelFamily {
    pub const ALL: [ModelFamily; 5] = [
        ModelFamily::Generic,
        ModelFamily::Factorized,
        ModelFamily::Deterministic,
        ModelFamily::DeterministicSignaling,
        ModelFamily::ParameterIndependent,
    ];
}

/// Random exact model: support size uniform in 1..=4, family uniform.
pub fn random_model<R: Rng + ?Sized>(rng: &mut R, scenario: &Scenario) -> ExactModel {
    let family = ModelFamily::ALL[rng.random_range(0..ModelFamily::ALL.len())];
    random_model_of(rng, scenario, family)
}

/// Random model guaranteed to be locally causal (factorized or deterministic).
pub fn random_locally_causal_model<R: Rng + ?Sized>(rng: &mut R, scenario: &Scenario) -> ExactModel {
    let family = if rng.random_bool(0.5) {
        ModelFamily::Factorized
    } else {
        ModelFamily::Deterministic
    };
    random_model_of(rng, scenario, family)
}

pub fn random_model_of<R: Rng + ?Sized>(rng: &mut R, scenario: &Scenario, family: ModelFamily) -> ExactModel {
    let support = rng.random_range(1..=4usize);
    let prior = exact_dirichlet(rng, support);
    let responses = (0..support)
        .map(|_| random_response(rng, scenario, family))
        .collect();
    HvModel::with_default_labels(scenario.clone(), prior, responses).expect("sampled model is normalized")
}

fn point_mass(n: usize, at: usize) -> Vec<Rational> {
    (0..n)
        .map(|i| if i == at { Rational::one() } else { Rational::zero() })
        .collect()
}

fn random_response<R: Rng + ?Sized>(rng: &mut R, s: &Scenario, family: ModelFamily) -> Vec<Rational> {
    let (na, nb, ox, oy) = (s.n_settings_alice, s.n_settings_bob, s.n_outcomes_alice, s.n_outcomes_bob);
    let mut table = Vec::with_capacity(s.n_cells());
    match family {
        ModelFamily::Generic => {
            for _ in 0..na * nb {
                table.extend(exact_dirichlet(rng, ox * oy));
            }
        }
        ModelFamily::DeterministicSignaling => {
            for _ in 0..na * nb {
                table.extend(point_mass(ox * oy, rng.random_range(0..ox * oy)));
            }
        }
        ModelFamily::Factorized | ModelFamily::Deterministic | ModelFamily::ParameterIndependent => {
            let (alice, bob): (Vec<Vec<Rational>>, Vec<Vec<Rational>>) = if family == ModelFamily::Deterministic {
                (
                    (0..na).map(|_| point_mass(ox, rng.random_range(0..ox))).collect(),
                    (0..nb).map(|_| point_mass(oy, rng.random_range(0..oy))).collect(),
                )
            } else {
                (
                    (0..na).map(|_| exact_dirichlet(rng, ox)).collect(),
                    (0..nb).map(|_| exact_dirichlet(rng, oy)).collect(),
                )
            };
            for pa in &alice {
                for pb in &bob {
                    let product = product_coupling(pa, pb);
                    if family == ModelFamily::ParameterIndependent {
                        let t = Rational::from_ratio(rng.random_range(0..=RATIONAL_DENOM) as i64, RATIONAL_DENOM as i64);
                        let corner = northwest_coupling(pa, pb);
                        table.extend(
                            product
                                .into_iter()
                                .zip(corner)
                                .map(|(p, c)| (Rational::one() - t.clone()) * p + t.clone() * c),
                        );
                    } else {
                        table.extend(product);
                    }
                }
            }
        }
    }
    table
}

fn product_coupling(pa: &[Rational], pb: &[Rational]) -> Vec<Rational> {
    pa.iter()
        .flat_map(|x| pb.iter().map(move |y| x.clone() * y.clone()))
        .collect()
}

/// Joint distribution with the given marginals built by the north-west
/// corner rule (maximally correlated in index order).
fn northwest_coupling(pa: &[Rational], pb: &[Rational]) -> Vec<Rational> {
    let mut joint = vec![Rational::zero(); pa.len() * pb.len()];
    let mut ra = pa.to_vec();
    let mut rb = pb.to_vec();
    let (mut i, mut j) = (0, 0);
    while i < ra.len() && j < rb.len() {
        let m = if ra[i] < rb[j] { ra[i].clone() } else { rb[j].clone() };
        joint[i * pb.len() + j] = m.clone();
        ra[i] = ra[i].clone() - m.clone();
        rb[j] = rb[j].clone() - m;
        if ra[i].is_zero() {
            i += 1;
        } else {
            j += 1;
        }
    }
    joint
}

/// Floating Dirichlet rows, used for causal-model CPTs.
pub fn dirichlet_rows<R: Rng + ?Sized>(rng: &mut R, rows: usize, width: usize) -> Vec<Vec<f64>> {
    (0..rows).map(|_| dirichlet(rng, width)).collect()
}
