//! Causal models on 1+1 dimensional spacetime and the principles relating
//! their graphs to their statistics.

pub mod dsep;
pub mod model;
pub mod bell;
pub mod enumerate;
pub mod lemmas;
pub mod principles;

pub use dsep::{d_separated, d_separated_idx};
pub use model::{in_past_lightcone, spacelike, CausalModel, EventKind, Joint, Layout, SpacetimeEvent, DEFAULT_STATE_CAP};
pub use principles::*;
pub use enumerate::{dags_up_to_isomorphism, markov_soundness, SoundnessReport};
pub use lemmas::{lemma, random_causal_model, verify_lemma, Lemma, LemmaReport, LEMMAS};
pub use bell::{
    bell_dag, calibrate_to_singlet, classical_bell_model, induced_phenomenon, operational_model, operational_singlet_model,
    reconcile, tuned_pr_box_model, BellVariant, CalibrationReport, ReconcileReport,
};

use crate::error::Result;

/// `X ⊥ Y | Z` in the model's joint distribution, up to `tol`.
pub fn conditionally_independent(model: &CausalModel, x: &[&str], y: &[&str], z: &[&str], tol: f64) -> Result<bool> {
    let joint = model.joint_distribution()?;
    Ok(joint.independent(&model.indices_of(x)?, &model.indices_of(y)?, &model.indices_of(z)?, tol))
}
