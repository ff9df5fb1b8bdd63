//! A Werner state split into Bell states as a hidden-variable model: local,
//! but not locally causal, and its predictions match the mixed state.
//!
//!     cargo run --example pure_ensemble -- [visibility]

use bellkit::properties::{is_local, is_locally_causal, is_predetermined};
use bellkit::quantum::{angles, born_phenomenon, pure_ensemble_model, werner, PureEnsemble};

fn main() -> bellkit::Result<()> {
    let v = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.5);
    let dirs = angles(&[0.0, 0.9]);
    let ensemble = PureEnsemble::werner(v)?;
    for (w, _) in ensemble.members() {
        println!("member weight {w:.4}");
    }
    let m = pure_ensemble_model(&ensemble, &dirs, &dirs)?;
    let gap = m.predicted_phenomenon()?.max_abs_diff(&born_phenomenon(&werner(v)?, &dirs, &dirs)?)?;
    println!("max deviation from the mixed-state table: {gap:.2e}");
    for v in [is_predetermined(&m, 1e-9), is_local(&m, 1e-9), is_locally_causal(&m, 1e-9)] {
        println!("{:<18} {}", v.property.as_str(), v.holds);
        if let Some(w) = v.witness {
            println!("  at {:?}: {} vs {}", w.at, w.lhs, w.rhs);
        }
    }
    Ok(())
}
