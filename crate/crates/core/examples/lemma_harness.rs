//! Randomized check of the seven lemmas on embedded causal models.
//!
//!     cargo run --release --example lemma_harness -- [trials] [seed]

use bellkit::causal::{verify_lemma, LEMMAS};

fn main() -> bellkit::Result<()> {
    let mut args = std::env::args().skip(1);
    let trials = args.next().and_then(|s| s.parse().ok()).unwrap_or(500);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);
    for l in LEMMAS {
        let r = verify_lemma(l.id, trials, seed)?;
        let ante: Vec<&str> = l.antecedents.iter().map(|p| p.as_str()).collect();
        println!("lemma {}: {} => {}: {} counterexamples / {} tested",
            l.id, ante.join(" + "), l.consequent.as_str(), r.counterexamples, r.tested);
    }
    Ok(())
}
