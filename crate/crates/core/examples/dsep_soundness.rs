//! Every DAG on up to five nodes, random tables, every d-separation checked
//! numerically.
//!
//!     cargo run --release --example dsep_soundness -- [max_nodes] [draws]

use bellkit::causal::{dags_up_to_isomorphism, markov_soundness};

fn main() -> bellkit::Result<()> {
    let mut args = std::env::args().skip(1);
    let n = args.next().and_then(|s| s.parse().ok()).unwrap_or(5);
    let draws = args.next().and_then(|s| s.parse().ok()).unwrap_or(50);
    for k in 1..=n {
        println!("{k} nodes: {} DAGs up to isomorphism", dags_up_to_isomorphism(k).len());
    }
    let start = std::time::Instant::now();
    let r = markov_soundness(n, draws, 0, 1e-9)?;
    println!("{} separations over {} DAGs x {} draws, {} violations ({:.2?})",
        r.separations_checked, r.dags, r.draws_per_dag, r.violations, start.elapsed());
    Ok(())
}
