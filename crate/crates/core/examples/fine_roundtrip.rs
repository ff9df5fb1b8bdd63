//! Both directions between locally causal and deterministic local models:
//! determinize a model with stochastic responses, then rebuild a
//! deterministic model from LP weights. Everything stays exact.
//!
//!     cargo run --example fine_roundtrip -- [seed]

use bellkit::polytope::{determinize, membership, model_from_weights};
use bellkit::properties::{is_local, is_locally_causal, is_predetermined};
use bellkit::sampling::{random_model_of, trial_rng, ModelFamily};
use bellkit::scalar::format_rational;
use bellkit::scenario::Scenario;

fn main() -> bellkit::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let s = Scenario::chsh();
    let m = random_model_of(&mut trial_rng(seed, 0), &s, ModelFamily::Factorized);
    let f = m.predicted_phenomenon()?;
    println!("model: |λ| = {}, locally causal {}, predetermined {}", m.support_size(),
        is_locally_causal(&m, 0.0).holds, is_predetermined(&m, 0.0).holds);

    let d = determinize(&m, 0.0)?;
    println!("determinized: |λ'| = {}, predetermined {}, local {}, reproduces {}",
        d.support_size(), is_predetermined(&d, 0.0).holds, is_local(&d, 0.0).holds, d.reproduces(&f, 0.0)?);

    let r = membership(&f)?;
    let w = model_from_weights(&r, &s)?;
    println!("from LP weights: |λ| = {}, reproduces {}", w.support_size(), w.reproduces(&f, 0.0)?);
    for (label, p) in w.labels().iter().zip(w.prior()) {
        println!("  {label:>4}  {}", format_rational(p));
    }
    Ok(())
}
