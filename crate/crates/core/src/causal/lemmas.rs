//! Randomized verification of the seven lemmas relating the causal
//! postulates and principles.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampling::{dirichlet_rows, trial_rng};
use crate::scalar::DEFAULT_TOL;

use super::model::{in_past_lightcone, CausalModel, EventKind, SpacetimeEvent};
use super::principles::{Analysis, PrincipleName};

use PrincipleName::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Lemma {
    pub id: u8,
    pub antecedents: &'static [PrincipleName],
    pub consequent: PrincipleName,
}

impl Lemma {
    /// Sample graphs only along future light cones.
    pub fn assumes_relativistic_causality(&self) -> bool {
        self.antecedents.contains(&RelativisticCausality)
    }
}

pub const LEMMAS: [Lemma; 7] = [
    Lemma {
        id: 1,
        antecedents: &[CommonCauses, DecorrelatingExplanation],
        consequent: Reichenbach,
    },
    Lemma {
        id: 2,
        antecedents: &[Reichenbach, RelativisticCausality],
        consequent: LocalCausality,
    },
    Lemma {
        id: 3,
        antecedents: &[RelativisticCausality, CommonCauses, FreeChoice],
        consequent: LocalAgency,
    },
    Lemma {
        id: 4,
        antecedents: &[AgentCausation, RelativisticCausality],
        consequent: LocalityPrinciple,
    },
    Lemma {
        id: 5,
        antecedents: &[AgentCausation, RelativisticCausality],
        consequent: LocalAgency,
    },
    Lemma {
        id: 6,
        antecedents: &[AgentCausation, RelativisticCausality],
        consequent: NoSuperdeterminism,
    },
    Lemma {
        id: 7,
        antecedents: &[FreeChoice, CommonCauses],
        consequent: AgentCausation,
    },
];

pub fn lemma(id: u8) -> Result<Lemma> {
    LEMMAS
        .iter()
        .find(|l| l.id == id)
        .copied()
        .ok_or_else(|| Error::Usage(format!("lemma id must be 1..=7, got {id}")))
}

const KINDS: [EventKind; 4] = [
    EventKind::FreeChoice,
    EventKind::Outcome,
    EventKind::Latent,
    EventKind::Preparation,
];

/// Four to six binary events with random kinds, `t ∈ [0, 4)` and
/// `x ∈ [−3, 3]`. Each time-ordered pair gets an edge with probability 1/2,
/// restricted to light-like or time-like pairs when `within_light_cones`.
/// Free choices lose all their parents half of the time. Tables are
/// Dirichlet(1).
pub fn random_causal_model<R: Rng + ?Sized>(rng: &mut R, within_light_cones: bool) -> CausalModel {
    let n = rng.random_range(4..=6);
    let mut events: Vec<SpacetimeEvent> = (0..n)
        .map(|_| {
            let kind = KINDS[rng.random_range(0..KINDS.len())];
            SpacetimeEvent::new("", rng.random_range(0.0..4.0), rng.random_range(-3.0..=3.0), kind)
        })
        .collect();
    events.sort_by(|p, q| p.t.total_cmp(&q.t));
    for (i, e) in events.iter_mut().enumerate() {
        e.label = format!("v{i}");
    }
    let mut edges = Vec::new();
    for j in 0..n {
        let mut parents = Vec::new();
        for i in 0..j {
            let allowed = if within_light_cones {
                in_past_lightcone(&events[i], &events[j])
            } else {
                events[i].t < events[j].t
            };
            if allowed && rng.random_bool(0.5) {
                parents.push(i);
            }
        }
        if events[j].kind == EventKind::FreeChoice && rng.random_bool(0.5) {
            parents.clear();
        }
        edges.extend(parents.into_iter().map(|i| (i, j)));
    }
    let mut m = CausalModel::from_indices(events, vec![2; n], &edges).expect("time-ordered edges");
    for i in 0..n {
        let rows = dirichlet_rows(rng, m.cpt_rows(i), 2);
        m.set_cpt_at(i, rows).expect("Dirichlet rows are normalized");
    }
    m
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub lemma: Lemma,
    pub seed: u64,
    pub trials: u64,
    /// Models satisfying every antecedent.
    pub tested: u64,
    pub counterexamples: u64,
    pub first_counterexample_trial: Option<u64>,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.counterexamples == 0
    }
}

/// Draws `trials` models (trial `k` from `trial_rng(seed, k)`), keeps those
/// meeting every antecedent and counts the ones failing the consequent.
pub fn verify_lemma(id: u8, trials: u64, seed: u64) -> Result<LemmaReport> {
    let lemma = lemma(id)?;
    if trials == 0 {
        return Err(Error::Usage("trials must be positive".into()));
    }
    let cones = lemma.assumes_relativistic_causality();
    let outcomes: Vec<Option<bool>> = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<Option<bool>> {
            let model = random_causal_model(&mut trial_rng(seed, trial), cones);
            let a = Analysis::new(&model, DEFAULT_TOL);
            for &p in lemma.antecedents {
                if !a.check(p)?.holds {
                    return Ok(None);
                }
            }
            Ok(Some(a.check(lemma.consequent)?.holds))
        })
        .collect::<Result<_>>()?;
    let tested = outcomes.iter().flatten().count() as u64;
    if tested == 0 {
        return Err(Error::InsufficientSamples(trials as usize));
    }
    let first = outcomes.iter().position(|o| *o == Some(false)).map(|t| t as u64);
    Ok(LemmaReport {
        lemma,
        seed,
        trials,
        tested,
        counterexamples: outcomes.iter().filter(|o| **o == Some(false)).count() as u64,
        first_counterexample_trial: first,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_models_respect_cones_when_asked() {
        for trial in 0..50 {
            let m = random_causal_model(&mut trial_rng(3, trial), true);
            assert!(Analysis::new(&m, 1e-9).check(RelativisticCausality).unwrap().holds);
            assert!((4..=6).contains(&m.len()));
            assert!((m.joint_distribution().unwrap().total() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unknown_lemma_is_usage_error() {
        assert!(matches!(verify_lemma(8, 10, 0), Err(Error::Usage(_))));
        assert!(matches!(verify_lemma(1, 0, 0), Err(Error::Usage(_))));
    }

    #[test]
    fn small_runs_hold() {
        for id in 1..=7 {
            let r = verify_lemma(id, 60, 1).unwrap();
            assert!(r.holds(), "lemma {id}: {r:?}");
            assert!(r.tested > 0);
        }
    }
}
