//! Which of free choice, relativistic causality, common causes and
//! decorrelating explanation give way, for a classical model and for the
//! singlet read operationally.
//!
//!     cargo run --example reconcile

use bellkit::causal::{classical_bell_model, operational_singlet_model, reconcile, BellVariant};

fn main() -> bellkit::Result<()> {
    let cases = [
        ("classical, local causal", classical_bell_model(BellVariant::LocalCausal)),
        ("classical, superluminal", classical_bell_model(BellVariant::Superluminal)),
        ("classical, superdeterministic", classical_bell_model(BellVariant::Superdeterministic)),
        ("singlet, no source", operational_singlet_model(false)),
        ("singlet, common source", operational_singlet_model(true)),
    ];
    for (name, m) in cases {
        let r = reconcile(&m, 1e-9)?;
        let failing: Vec<&str> = r.failing.iter().map(|p| p.as_str()).collect();
        println!("{name:<30} failing [{}]  bell_local {:?}  max|CHSH| {}", failing.join(", "), r.bell_local,
            r.max_abs_chsh.map_or("-".into(), |v| format!("{v:.4}")));
    }
    Ok(())
}
