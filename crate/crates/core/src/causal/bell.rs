//! The Bell experiment as a causal model: canonical DAG variants, classical
//! and operational parameterizations, a search for classical models of the
//! singlet, and the postulate report for a given model.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phenomenon::FloatPhenomenon;
use crate::polytope::membership_float;
use crate::quantum::{angles, born_phenomenon, max_abs_chsh, singlet};
use crate::sampling::dirichlet;
use crate::scenario::Scenario;

use super::model::{CausalModel, EventKind, SpacetimeEvent};
use super::principles::{Analysis, PrincipleName, PrincipleVerdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BellVariant {
    LocalCausal,
    Superluminal,
    Superdeterministic,
}

impl BellVariant {
    pub const ALL: [BellVariant; 3] = [
        BellVariant::LocalCausal,
        BellVariant::Superluminal,
        BellVariant::Superdeterministic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BellVariant::LocalCausal => "local_causal",
            BellVariant::Superluminal => "superluminal",
            BellVariant::Superdeterministic => "superdeterministic",
        }
    }
}

impl std::str::FromStr for BellVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BellVariant::ALL
            .into_iter()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown variant `{s}`")))
    }
}

fn bell_events() -> Vec<SpacetimeEvent> {
    vec![
        SpacetimeEvent::new("c", 0.0, 0.0, EventKind::Preparation),
        SpacetimeEvent::new("λ", 1.0, 0.0, EventKind::Latent),
        SpacetimeEvent::new("a", 2.0, -2.0, EventKind::FreeChoice),
        SpacetimeEvent::new("b", 2.0, 2.0, EventKind::FreeChoice),
        SpacetimeEvent::new("A", 3.0, -2.0, EventKind::Outcome),
        SpacetimeEvent::new("B", 3.0, 2.0, EventKind::Outcome),
    ]
}

/// The six-event Bell DAG, binary except for the single-valued
/// preparation `c`. Tables are left unset.
pub fn bell_dag(variant: BellVariant) -> CausalModel {
    bell_dag_with_lambda(variant, 2)
}

pub fn bell_dag_with_lambda(variant: BellVariant, lambda_arity: usize) -> CausalModel {
    let mut edges = vec![("c", "λ"), ("λ", "A"), ("λ", "B"), ("a", "A"), ("b", "B")];
    match variant {
        BellVariant::LocalCausal => {}
        BellVariant::Superluminal => edges.push(("a", "B")),
        BellVariant::Superdeterministic => edges.extend([("λ", "a"), ("λ", "b")]),
    }
    CausalModel::new(bell_events(), vec![1, lambda_arity, 2, 2, 2, 2], &edges).expect("fixed DAG is valid")
}

/// Binary rows: outcome `f(parents)` with probability `p`, one row per
/// parent assignment (last parent fastest).
pub fn noisy_function(parent_arity: &[usize], p: f64, f: impl Fn(&[usize]) -> usize) -> Vec<Vec<f64>> {
    let rows: usize = parent_arity.iter().product();
    (0..rows)
        .map(|r| {
            let mut vals = vec![0; parent_arity.len()];
            let mut rest = r;
            for (k, &n) in parent_arity.iter().enumerate().rev() {
                vals[k] = rest % n;
                rest /= n;
            }
            if f(&vals) == 0 {
                vec![p, 1.0 - p]
            } else {
                vec![1.0 - p, p]
            }
        })
        .collect()
}

fn fair() -> Vec<Vec<f64>> {
    vec![vec![0.5, 0.5]]
}

/// Classically correlated tables on each variant: biased `λ` and settings,
/// `A = λ ⊕ a` with probability 0.9 and `B = λ ⊕ b` with probability 0.8.
/// The superluminal variant uses `B = λ ⊕ (a ∧ b)` with probability 0.9;
/// the superdeterministic one copies `λ` into both settings with
/// probability 0.9.
pub fn classical_bell_model(variant: BellVariant) -> CausalModel {
    let mut m = bell_dag(variant);
    let xor = |v: &[usize]| v[0] ^ v[1];
    m.set_cpt("c", vec![vec![1.0]]).unwrap();
    m.set_cpt("λ", vec![vec![0.7, 0.3]]).unwrap();
    m.set_cpt("A", noisy_function(&[2, 2], 0.9, xor)).unwrap();
    match variant {
        BellVariant::LocalCausal => {
            m.set_cpt("a", vec![vec![0.6, 0.4]]).unwrap();
            m.set_cpt("b", vec![vec![0.3, 0.7]]).unwrap();
            m.set_cpt("B", noisy_function(&[2, 2], 0.8, xor)).unwrap();
        }
        BellVariant::Superluminal => {
            m.set_cpt("a", vec![vec![0.6, 0.4]]).unwrap();
            m.set_cpt("b", vec![vec![0.3, 0.7]]).unwrap();
            m.set_cpt("B", noisy_function(&[2, 2, 2], 0.9, |v| v[0] ^ (v[1] & v[2])))
                .unwrap();
        }
        BellVariant::Superdeterministic => {
            m.set_cpt("a", noisy_function(&[2], 0.9, |v| v[0])).unwrap();
            m.set_cpt("b", noisy_function(&[2], 0.9, |v| v[0])).unwrap();
            m.set_cpt("B", noisy_function(&[2, 2], 0.8, xor)).unwrap();
        }
    }
    m
}

/// A Popescu–Rohrlich box from a signaling mechanism: `A = λ` and
/// `B = λ ⊕ (a ∧ b)`. The edge `a → B` carries no visible signal because
/// `λ` is uniform.
pub fn tuned_pr_box_model() -> CausalModel {
    let edges = [("c", "λ"), ("λ", "A"), ("λ", "B"), ("a", "B"), ("b", "B")];
    CausalModel::new(bell_events(), vec![1, 2, 2, 2, 2, 2], &edges)
        .and_then(|m| m.with_cpt("c", vec![vec![1.0]]))
        .and_then(|m| m.with_cpt("λ", fair()))
        .and_then(|m| m.with_cpt("a", fair()))
        .and_then(|m| m.with_cpt("b", fair()))
        .and_then(|m| m.with_cpt("A", noisy_function(&[2], 1.0, |v| v[0])))
        .and_then(|m| m.with_cpt("B", noisy_function(&[2, 2, 2], 1.0, |v| v[0] ^ (v[1] & v[2]))))
        .expect("fixed tables are valid")
}

/// A phenomenon taken at face value: settings chosen uniformly, outcomes
/// caused by the local setting only, and the joint distribution given
/// directly rather than by tables. With `with_source` a single-valued
/// preparation `c` in the common past feeds both outcomes.
pub fn operational_model(phenomenon: &FloatPhenomenon, with_source: bool) -> Result<CausalModel> {
    let s = phenomenon.scenario();
    let mut events = Vec::new();
    let mut arity = Vec::new();
    let mut edges = vec![("a", "A"), ("b", "B")];
    if with_source {
        events.push(SpacetimeEvent::new("c", 0.0, 0.0, EventKind::Preparation));
        arity.push(1);
        edges.extend([("c", "A"), ("c", "B")]);
    }
    let mut rest = bell_events().split_off(2);
    events.append(&mut rest);
    arity.extend([s.n_settings_alice, s.n_settings_bob, s.n_outcomes_alice, s.n_outcomes_bob]);
    let mut m = CausalModel::new(events, arity, &edges)?;
    let w = 1.0 / (s.n_settings_alice * s.n_settings_bob) as f64;
    // The canonical cell order coincides with the joint layout over (a, b, A, B).
    m.set_observed_joint(phenomenon.table().iter().map(|p| p * w).collect())?;
    Ok(m)
}

/// Settings {0, π/2} and {π/4, 3π/4} in the x–z plane.
pub fn tsirelson_singlet() -> FloatPhenomenon {
    born_phenomenon(&singlet(), &angles(&[0.0, FRAC_PI_2]), &angles(&[FRAC_PI_4, 3.0 * FRAC_PI_4]))
        .expect("valid settings")
}

pub fn operational_singlet_model(with_source: bool) -> CausalModel {
    operational_model(&tsirelson_singlet(), with_source).expect("singlet table is valid")
}

/// `f(A, B | a, b)` read off a model with events labelled `a`, `b`, `A`, `B`.
pub fn induced_phenomenon(model: &CausalModel) -> Result<FloatPhenomenon> {
    let vars = model.indices_of(&["a", "b", "A", "B"])?;
    let k: Vec<usize> = vars.iter().map(|&v| model.arity()[v]).collect();
    let scenario = Scenario::new(k[0], k[1], k[2], k[3])?;
    let joint = model.joint_distribution()?.marginal(&vars);
    let block = k[2] * k[3];
    let mut table = Vec::with_capacity(joint.len());
    for chunk in joint.chunks(block) {
        let p: f64 = chunk.iter().sum();
        if p <= 0.0 {
            return Err(Error::Domain("a setting pair has probability zero".into()));
        }
        table.extend(chunk.iter().map(|q| q / p));
    }
    FloatPhenomenon::new(scenario, table)
}

/// Largest total-variation distance over setting blocks.
pub fn block_tv_distance(f: &FloatPhenomenon, g: &FloatPhenomenon) -> Result<f64> {
    if !f.scenario().same_shape(g.scenario()) {
        return Err(Error::ScenarioMismatch(format!("{} vs {}", f.scenario(), g.scenario())));
    }
    let n = f.scenario().block_len();
    Ok(f.table()
        .chunks(n)
        .zip(g.table().chunks(n))
        .map(|(x, y)| 0.5 * x.iter().zip(y).map(|(p, q)| (p - q).abs()).sum::<f64>())
        .fold(0.0, f64::max))
}

/// No table within this block distance of the Tsirelson singlet has
/// `|CHSH| ≤ 2`: each correlator moves by at most twice the distance.
pub fn singlet_distance_bound() -> f64 {
    (2.0 * SQRT_2 - 2.0) / 8.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationReport {
    pub attempts: usize,
    pub refinements: usize,
    pub lambda_arity: usize,
    /// Best block distance to the singlet table found.
    pub best_distance: f64,
    pub bound: f64,
    pub best_chsh: f64,
    pub model: CausalModel,
}

struct Params {
    prior: Vec<f64>,
    /// `P(A = 0 | λ, a)` at index `λ * 2 + a`, likewise for `B`.
    alice: Vec<f64>,
    bob: Vec<f64>,
}

impl Params {
    fn random(rng: &mut ChaCha8Rng, k: usize) -> Self {
        Params {
            prior: dirichlet(rng, k),
            alice: (0..2 * k).map(|_| rng.random()).collect(),
            bob: (0..2 * k).map(|_| rng.random()).collect(),
        }
    }

    fn perturbed(&self, rng: &mut ChaCha8Rng, step: f64) -> Self {
        let mut jitter = |v: &[f64]| -> Vec<f64> {
            v.iter()
                .map(|p| (p + step * (rng.random::<f64>() - 0.5)).clamp(0.0, 1.0))
                .collect()
        };
        let mut prior = jitter(&self.prior);
        let total: f64 = prior.iter().sum();
        if total <= 0.0 {
            prior = self.prior.clone();
        } else {
            prior.iter_mut().for_each(|p| *p /= total);
        }
        Params {
            prior,
            alice: jitter(&self.alice),
            bob: jitter(&self.bob),
        }
    }

    fn table(&self) -> Vec<f64> {
        let mut t = vec![0.0; 16];
        for (l, &w) in self.prior.iter().enumerate() {
            for a in 0..2 {
                for b in 0..2 {
                    let pa = self.alice[l * 2 + a];
                    let pb = self.bob[l * 2 + b];
                    let base = (a * 2 + b) * 4;
                    t[base] += w * pa * pb;
                    t[base + 1] += w * pa * (1.0 - pb);
                    t[base + 2] += w * (1.0 - pa) * pb;
                    t[base + 3] += w * (1.0 - pa) * (1.0 - pb);
                }
            }
        }
        t
    }

    fn distance(&self, target: &[f64]) -> f64 {
        self.table()
            .chunks(4)
            .zip(target.chunks(4))
            .map(|(x, y)| 0.5 * x.iter().zip(y).map(|(p, q)| (p - q).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    fn into_model(self, k: usize) -> CausalModel {
        let mut m = bell_dag_with_lambda(BellVariant::LocalCausal, k);
        let rows = |v: &[f64]| v.iter().map(|&p| vec![p, 1.0 - p]).collect::<Vec<_>>();
        m.set_cpt("c", vec![vec![1.0]]).unwrap();
        m.set_cpt("λ", vec![self.prior.clone()]).unwrap();
        m.set_cpt("a", fair()).unwrap();
        m.set_cpt("b", fair()).unwrap();
        m.set_cpt("A", rows(&self.alice)).unwrap();
        m.set_cpt("B", rows(&self.bob)).unwrap();
        m
    }
}

/// Random search plus hill climbing for tables on the local DAG that come
/// close to the Tsirelson singlet. The search can only ever get down to
/// [`singlet_distance_bound`]; membership in the local polytope is what
/// settles the question.
pub fn calibrate_to_singlet(attempts: usize, refinements: usize, seed: u64) -> CalibrationReport {
    const K: usize = 8;
    let target = tsirelson_singlet();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = Params::random(&mut rng, K);
    let mut best_d = best.distance(target.table());
    for _ in 1..attempts {
        let p = Params::random(&mut rng, K);
        let d = p.distance(target.table());
        if d < best_d {
            best = p;
            best_d = d;
        }
    }
    let mut step = 0.2;
    for _ in 0..refinements {
        let p = best.perturbed(&mut rng, step);
        let d = p.distance(target.table());
        if d < best_d {
            best = p;
            best_d = d;
        } else {
            step = (step * 0.995).max(1e-4);
        }
    }
    let model = best.into_model(K);
    let ph = induced_phenomenon(&model).expect("uniform settings");
    let best_chsh = max_abs_chsh(&ph)
        .expect("binary scenario")
        .map_or(0.0, |e| e.value.abs());
    CalibrationReport {
        attempts,
        refinements,
        lambda_arity: K,
        best_distance: block_tv_distance(&ph, &target).expect("same shape"),
        bound: singlet_distance_bound(),
        best_chsh,
        model,
    }
}

/// Which of free choice, relativistic causality, common causes and
/// decorrelating explanation a model satisfies, alongside the statistics
/// it induces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconcileReport {
    pub postulates: Vec<PrincipleVerdict>,
    pub failing: Vec<PrincipleName>,
    pub bell_local: Option<bool>,
    pub max_abs_chsh: Option<f64>,
}

impl ReconcileReport {
    pub fn all_hold(&self) -> bool {
        self.failing.is_empty()
    }
}

pub const RECONCILE_POSTULATES: [PrincipleName; 4] = [
    PrincipleName::FreeChoice,
    PrincipleName::RelativisticCausality,
    PrincipleName::CommonCauses,
    PrincipleName::DecorrelatingExplanation,
];

pub fn reconcile(model: &CausalModel, tol: f64) -> Result<ReconcileReport> {
    let analysis = Analysis::new(model, tol);
    let postulates = RECONCILE_POSTULATES
        .iter()
        .map(|&p| analysis.check(p))
        .collect::<Result<Vec<_>>>()?;
    let failing = postulates.iter().filter(|v| !v.holds).map(|v| v.principle).collect();
    let (bell_local, max_abs) = match induced_phenomenon(model) {
        Ok(ph) => {
            let chsh = max_abs_chsh(&ph).ok().flatten().map(|e| e.value.abs());
            (Some(membership_float(&ph)?.1.member), chsh)
        }
        Err(Error::UnknownLabel(_)) => (None, None),
        Err(e) => return Err(e),
    };
    Ok(ReconcileReport {
        postulates,
        failing,
        bell_local,
        max_abs_chsh: max_abs,
    })
}
