use serde::Serialize;

use crate::error::{Error, Result};
use crate::phenomenon::ExactPhenomenon;
use crate::scalar::{Rational, Scalar};
use crate::scenario::{Cell, Scenario};

/// Default upper bound on the number of deterministic strategies enumerated.
pub const DEFAULT_STRATEGY_CAP: u128 = 1_000_000;

/// A pair of response functions: Alice's outcome for each of her settings
/// and Bob's outcome for each of his.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DeterministicStrategy {
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
}

impl DeterministicStrategy {
    pub fn new(scenario: &Scenario, alice: Vec<usize>, bob: Vec<usize>) -> Result<Self> {
        if alice.len() != scenario.n_settings_alice || bob.len() != scenario.n_settings_bob {
            return Err(Error::InvalidScenario(format!(
                "strategy maps have lengths ({}, {}), scenario {scenario}",
                alice.len(),
                bob.len()
            )));
        }
        if alice.iter().any(|&x| x >= scenario.n_outcomes_alice) || bob.iter().any(|&y| y >= scenario.n_outcomes_bob) {
            return Err(Error::InvalidScenario("strategy outcome out of range".into()));
        }
        Ok(DeterministicStrategy { alice, bob })
    }

    /// Entry of the vertex table: 1 iff both outcomes match the maps.
    pub fn deterministic_entry(&self, cell: Cell) -> bool {
        self.alice[cell.a] == cell.x && self.bob[cell.b] == cell.y
    }

    /// `Σ_{a,b} g(α(a), β(b) | a, b)` for a functional `g` in canonical cell order.
    pub fn evaluate(&self, scenario: &Scenario, functional: &[Rational]) -> Rational {
        scenario
            .setting_pairs()
            .map(|(a, b)| {
                &functional[scenario.index(Cell {
                    a,
                    b,
                    x: self.alice[a],
                    y: self.bob[b],
                })]
            })
            .fold(Rational::from_ratio(0, 1), |acc, v| acc + v)
    }
}

/// `|X|^{Na} · |Y|^{Nb}`, saturating.
pub fn strategy_count(scenario: &Scenario) -> u128 {
    let pow = |base: usize, exp: usize| (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX);
    pow(scenario.n_outcomes_alice, scenario.n_settings_alice)
        .saturating_mul(pow(scenario.n_outcomes_bob, scenario.n_settings_bob))
}

fn check_cap(scenario: &Scenario, cap: u128) -> Result<()> {
    let count = strategy_count(scenario);
    if count > cap {
        return Err(Error::CapExceeded { count, cap });
    }
    Ok(())
}

/// All response functions `0..n_settings → 0..n_outcomes`, lexicographic
/// with setting 0 most significant.
fn response_functions(n_settings: usize, n_outcomes: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n_settings {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n_outcomes).map(move |o| {
                    let mut v = prefix.clone();
                    v.push(o);
                    v
                })
            })
            .collect();
    }
    out
}

/// Every deterministic strategy, Alice's map varying slowest.
pub fn enumerate_strategies(scenario: &Scenario) -> Result<Vec<DeterministicStrategy>> {
    enumerate_strategies_with_cap(scenario, DEFAULT_STRATEGY_CAP)
}

pub fn enumerate_strategies_with_cap(scenario: &Scenario, cap: u128) -> Result<Vec<DeterministicStrategy>> {
    check_cap(scenario, cap)?;
    let alice = response_functions(scenario.n_settings_alice, scenario.n_outcomes_alice);
    let bob = response_functions(scenario.n_settings_bob, scenario.n_outcomes_bob);
    Ok(alice
        .iter()
        .flat_map(|fa| {
            bob.iter().map(move |fb| DeterministicStrategy {
                alice: fa.clone(),
                bob: fb.clone(),
            })
        })
        .collect())
}

/// Vertex of the local polytope for one strategy.
pub fn strategy_phenomenon(strategy: &DeterministicStrategy, scenario: &Scenario) -> Result<ExactPhenomenon> {
    let s = DeterministicStrategy::new(scenario, strategy.alice.clone(), strategy.bob.clone())?;
    ExactPhenomenon::from_fn(scenario.clone(), |c| {
        Rational::from_ratio(s.deterministic_entry(c) as i64, 1)
    })
}

/// Maximum of a linear functional over all deterministic strategies.
///
/// For each Alice map, Bob's best reply decouples per setting, so the
/// search is over Alice's maps only.
pub fn local_bound(scenario: &Scenario, functional: &[Rational]) -> Result<Rational> {
    local_bound_with_cap(scenario, functional, DEFAULT_STRATEGY_CAP)
}

pub fn local_bound_with_cap(scenario: &Scenario, functional: &[Rational], cap: u128) -> Result<Rational> {
    check_cap(scenario, cap)?;
    if functional.len() != scenario.n_cells() {
        return Err(Error::InvalidScenario(format!(
            "functional has {} coefficients, expected {}",
            functional.len(),
            scenario.n_cells()
        )));
    }
    let mut best: Option<Rational> = None;
    for fa in response_functions(scenario.n_settings_alice, scenario.n_outcomes_alice) {
        let mut total = Rational::from_ratio(0, 1);
        for b in 0..scenario.n_settings_bob {
            let reply = (0..scenario.n_outcomes_bob)
                .map(|y| {
                    (0..scenario.n_settings_alice)
                        .map(|a| &functional[scenario.index(Cell { a, b, x: fa[a], y })])
                        .fold(Rational::from_ratio(0, 1), |acc, v| acc + v)
                })
                .max()
                .expect("at least one outcome");
            total += reply;
        }
        if best.as_ref().is_none_or(|b| total > *b) {
            best = Some(total);
        }
    }
    Ok(best.expect("at least one strategy"))
}
