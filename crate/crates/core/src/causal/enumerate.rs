//! Small DAGs up to isomorphism, and an exhaustive check that graphical
//! separation implies conditional independence on them.

use std::collections::BTreeSet;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::sampling::{dirichlet_rows, trial_rng};

use super::dsep::d_separated_idx;
use super::model::{CausalModel, EventKind, SpacetimeEvent};

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(p.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, p, out);
            let j = if k % 2 == 0 { i } else { 0 };
            p.swap(j, k - 1);
        }
    }
    heap(n, &mut p, &mut out);
    out
}

/// One representative edge list per isomorphism class of DAGs on `n`
/// nodes. Every DAG has a topological labelling, so it suffices to scan
/// edge sets along `0 < 1 < … < n−1` and keep the minimal adjacency word
/// over relabellings.
pub fn dags_up_to_isomorphism(n: usize) -> Vec<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &e)| e)
            .collect();
        let word = perms
            .iter()
            .map(|p| edges.iter().fold(0u64, |w, &(u, v)| w | 1 << (p[u] * n + p[v])))
            .min()
            .unwrap_or(0);
        if seen.insert(word) {
            out.push(edges);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SoundnessViolation {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub draw: usize,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub z: Vec<usize>,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SoundnessReport {
    pub dags: usize,
    pub draws_per_dag: usize,
    /// Separation statements tested numerically.
    pub separations_checked: u64,
    pub violations: u64,
    pub first_violation: Option<SoundnessViolation>,
}

/// All ways to split the nodes into disjoint `X`, `Y` (both nonempty, `X`
/// holding the smallest node of `X ∪ Y`) and `Z`.
fn partitions(n: usize) -> Vec<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for code in 0..4usize.pow(n as u32) {
        let (mut x, mut y, mut z) = (Vec::new(), Vec::new(), Vec::new());
        let mut c = code;
        for v in 0..n {
            match c % 4 {
                1 => x.push(v),
                2 => y.push(v),
                3 => z.push(v),
                _ => {}
            }
            c /= 4;
        }
        if !x.is_empty() && !y.is_empty() && x[0] < y[0] {
            out.push((x, y, z));
        }
    }
    out
}

/// For every DAG on at most `max_nodes` nodes and `draws` random table
/// sets (arity 2 or 3 per node), every d-separation statement is checked
/// against the joint distribution at `tol`.
pub fn markov_soundness(max_nodes: usize, draws: usize, seed: u64, tol: f64) -> Result<SoundnessReport> {
    let graphs: Vec<(usize, Vec<(usize, usize)>)> = (1..=max_nodes)
        .flat_map(|n| dags_up_to_isomorphism(n).into_iter().map(move |e| (n, e)))
        .collect();
    let results: Vec<(u64, Vec<SoundnessViolation>)> = graphs
        .par_iter()
        .enumerate()
        .map(|(g, (n, edges))| -> Result<(u64, Vec<SoundnessViolation>)> {
            let events: Vec<SpacetimeEvent> = (0..*n)
                .map(|i| SpacetimeEvent::new(format!("v{i}"), i as f64, 0.0, EventKind::Latent))
                .collect();
            let splits: Vec<_> = {
                let base = CausalModel::from_indices(events.clone(), vec![2; *n], edges)?;
                partitions(*n)
                    .into_iter()
                    .filter(|(x, y, z)| d_separated_idx(&base, x, y, z).unwrap_or(false))
                    .collect()
            };
            let mut checked = 0;
            let mut bad = Vec::new();
            for draw in 0..draws {
                let mut rng = trial_rng(seed, (g * draws + draw) as u64);
                let arity: Vec<usize> = (0..*n).map(|_| rng.random_range(2..=3)).collect();
                let mut m = CausalModel::from_indices(events.clone(), arity.clone(), edges)?;
                for i in 0..*n {
                    let rows = dirichlet_rows(&mut rng, m.cpt_rows(i), arity[i]);
                    m.set_cpt_at(i, rows)?;
                }
                let joint = m.joint_distribution()?;
                for (x, y, z) in &splits {
                    checked += 1;
                    let gap = joint.dependence_gap(x, y, z);
                    if gap > tol {
                        bad.push(SoundnessViolation {
                            nodes: *n,
                            edges: edges.clone(),
                            draw,
                            x: x.clone(),
                            y: y.clone(),
                            z: z.clone(),
                            gap,
                        });
                    }
                }
            }
            Ok((checked, bad))
        })
        .collect::<Result<_>>()?;
    let separations_checked = results.iter().map(|r| r.0).sum();
    let violations = results.iter().map(|r| r.1.len() as u64).sum();
    let first_violation = results.into_iter().flat_map(|r| r.1).next();
    Ok(SoundnessReport {
        dags: graphs.len(),
        draws_per_dag: draws,
        separations_checked,
        violations,
        first_violation,
    })
}
