//! Randomized search for counterexamples among the model properties.
//!
//!     cargo run --example implication_fuzz -- [trials] [seed]

use bellkit::implication::check_implication;
use bellkit::properties::{is_locally_causal, is_predetermined, PropertyName::*};

fn main() -> bellkit::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials = args.next().and_then(|s| s.parse().ok()).unwrap_or(1000);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);

    let claims = [
        (vec![Locality, Predetermination], LocalCausality),
        (vec![LocalCausality], Locality),
        (vec![LocalCausality], BellLocal),
        (vec![Locality], SignalLocality),
        (vec![LocalCausality], Predetermination),
        (vec![Locality], LocalCausality),
    ];
    for (ante, cons) in claims {
        let r = check_implication(&ante, cons, trials, seed)?;
        let names: Vec<&str> = ante.iter().map(|p| p.as_str()).collect();
        println!("{:<40} => {:<18} {:>4} tested, {:>4} counterexamples",
            names.join(" + "), cons.as_str(), r.tested, r.counterexamples);
        if let Some(cx) = &r.first_counterexample {
            println!("    first at trial {}: |λ| = {}, locally causal {}, predetermined {}", cx.trial,
                cx.model.support_size(), is_locally_causal(&cx.model, 0.0).holds, is_predetermined(&cx.model, 0.0).holds);
        }
    }
    Ok(())
}
