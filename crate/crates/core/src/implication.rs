//! Randomized search for counterexamples to implications between model
//! properties.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ExactModel;
use crate::polytope::membership;
use crate::properties::{
    is_factorizable, is_local, is_locally_causal, is_predetermined, is_predictable, is_signal_local, PropertyName,
};
use crate::sampling::{random_model, trial_rng};
use crate::scenario::Scenario;

/// Decides `property` for an exact model. Phenomenon-level properties are
/// read on the predicted table; `bell_local` asks for local-polytope
/// membership of that table.
pub fn model_has(model: &ExactModel, property: PropertyName) -> Result<bool> {
    Ok(match property {
        PropertyName::Predetermination => is_predetermined(model, 0.0).holds,
        PropertyName::Locality => is_local(model, 0.0).holds,
        PropertyName::LocalCausality => is_locally_causal(model, 0.0).holds,
        PropertyName::Factorizability => is_factorizable(model, 0.0).holds,
        PropertyName::Predictability => is_predictable(&model.predicted_phenomenon()?, 0.0).holds,
        PropertyName::SignalLocality => is_signal_local(&model.predicted_phenomenon()?, 0.0).holds,
        PropertyName::BellLocal => membership(&model.predicted_phenomenon()?)?.member,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub trial: u64,
    pub model: ExactModel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImplicationReport {
    pub antecedents: Vec<PropertyName>,
    pub consequent: PropertyName,
    pub seed: u64,
    pub trials: u64,
    /// Models that satisfied every antecedent.
    pub tested: u64,
    pub counterexamples: u64,
    /// Lowest-numbered failing trial.
    pub first_counterexample: Option<Counterexample>,
}

impl ImplicationReport {
    pub fn holds(&self) -> bool {
        self.counterexamples == 0
    }

    pub fn summary(&self) -> ImplicationSummary {
        ImplicationSummary {
            antecedents: self.antecedents.clone(),
            consequent: self.consequent,
            seed: self.seed,
            trials: self.trials,
            tested: self.tested,
            counterexamples: self.counterexamples,
            first_counterexample_trial: self.first_counterexample.as_ref().map(|c| c.trial),
        }
    }
}

/// Serializable view of an [`ImplicationReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImplicationSummary {
    pub antecedents: Vec<PropertyName>,
    pub consequent: PropertyName,
    pub seed: u64,
    pub trials: u64,
    pub tested: u64,
    pub counterexamples: u64,
    pub first_counterexample_trial: Option<u64>,
}

/// Samples `trials` random models on the 2-2-2-2 scenario.
pub fn check_implication(
    antecedents: &[PropertyName],
    consequent: PropertyName,
    trials: u64,
    seed: u64,
) -> Result<ImplicationReport> {
    check_implication_in(&Scenario::chsh(), antecedents, consequent, trials, seed)
}

pub fn check_implication_in(
    scenario: &Scenario,
    antecedents: &[PropertyName],
    consequent: PropertyName,
    trials: u64,
    seed: u64,
) -> Result<ImplicationReport> {
    if trials == 0 {
        return Err(Error::Usage("trials must be positive".into()));
    }
    let outcomes: Vec<Option<bool>> = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<Option<bool>> {
            let mut rng = trial_rng(seed, trial);
            let model = random_model(&mut rng, scenario);
            for &p in antecedents {
                if !model_has(&model, p)? {
                    return Ok(None);
                }
            }
            Ok(Some(model_has(&model, consequent)?))
        })
        .collect::<Result<_>>()?;

    let tested = outcomes.iter().filter(|o| o.is_some()).count() as u64;
    if tested == 0 {
        return Err(Error::InsufficientSamples(trials as usize));
    }
    let failing: Vec<u64> = outcomes
        .iter()
        .enumerate()
        .filter(|(_, o)| **o == Some(false))
        .map(|(t, _)| t as u64)
        .collect();
    let first_counterexample = failing.first().map(|&trial| Counterexample {
        trial,
        model: random_model(&mut trial_rng(seed, trial), scenario),
    });
    Ok(ImplicationReport {
        antecedents: antecedents.to_vec(),
        consequent,
        seed,
        trials,
        tested,
        counterexamples: failing.len() as u64,
        first_counterexample,
    })
}
