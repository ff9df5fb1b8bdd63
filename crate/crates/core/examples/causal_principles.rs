//! Every principle on the Bell DAG variants, the tuned PR box and the
//! operational singlet model.
//!
//!     cargo run --example causal_principles

use bellkit::causal::{
    check_all, classical_bell_model, operational_singlet_model, tuned_pr_box_model, BellVariant, CausalModel,
};

fn report(name: &str, m: &CausalModel) -> bellkit::Result<()> {
    println!("{name}");
    for v in check_all(m, 1e-9)? {
        let w = v.witness.as_ref().map(|w| {
            let given = if w.given.is_empty() { String::new() } else { format!(" | {}", w.given.join(",")) };
            format!("{:?} {} / {}{given}  gap {:.3e}", w.kind, w.left.join(","), w.right.join(","), w.gap)
        });
        let line = format!("  {:<28} {:<5} {}", v.principle.as_str(), v.holds, w.unwrap_or_default());
        println!("{}", line.trim_end());
    }
    Ok(())
}

fn main() -> bellkit::Result<()> {
    for variant in BellVariant::ALL {
        report(&format!("bell DAG, {} variant", variant.as_str()), &classical_bell_model(variant))?;
    }
    report("tuned PR box", &tuned_pr_box_model())?;
    report("operational singlet, with source", &operational_singlet_model(true))?;
    Ok(())
}
