//! Tries to fit the locally causal Bell DAG to the singlet table by random
//! search plus hill climbing. The best fit stays above the distance any
//! local table must keep; the LP verdict is the actual proof.
//!
//!     cargo run --release --example calibration -- [attempts] [refinements] [seed]

use bellkit::causal::{calibrate_to_singlet, induced_phenomenon};
use bellkit::quantum::max_abs_chsh;

fn main() -> bellkit::Result<()> {
    let mut args = std::env::args().skip(1);
    let attempts = args.next().and_then(|s| s.parse().ok()).unwrap_or(10_000);
    let refinements = args.next().and_then(|s| s.parse().ok()).unwrap_or(1_000);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let r = calibrate_to_singlet(attempts, refinements, seed);
    println!("λ arity {}, {} draws + {} refinements", r.lambda_arity, r.attempts, r.refinements);
    println!("best block TV distance {:.4} (floor for local tables {:.4})", r.best_distance, r.bound);
    let f = induced_phenomenon(&r.model)?;
    println!("best fit |CHSH| = {:.4}", max_abs_chsh(&f)?.map_or(0.0, |e| e.value.abs()));
    Ok(())
}
