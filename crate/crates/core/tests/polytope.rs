use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_traits::{One, Zero};

use bellkit::error::Error;
use bellkit::model::HvModel;
use bellkit::phenomenon::ExactPhenomenon;
use bellkit::polytope::{
    determinize, enumerate_strategies, enumerate_strategies_with_cap, local_bound, membership, membership_float,
    model_from_weights, strategy_phenomenon, DeterministicStrategy,
};
use bellkit::properties::{is_local, is_locally_causal, is_predetermined, is_predictable, is_signal_local};
use bellkit::quantum::{angles, born_phenomenon, chsh_table, singlet};
use bellkit::sampling::{random_model, trial_rng};
use bellkit::scalar::Rational;
use bellkit::scenario::{Cell, Scenario};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn sign(o: usize) -> i64 {
    if o == 0 {
        1
    } else {
        -1
    }
}

/// CHSH functional in cell coefficients.
fn chsh_functional(s: &Scenario) -> Vec<Rational> {
    s.cells()
        .map(|c| {
            let k = if c.a == 1 && c.b == 1 { -1 } else { 1 };
            q(k * sign(c.x) * sign(c.y), 1)
        })
        .collect()
}

#[test]
fn strategy_counts() {
    assert_eq!(enumerate_strategies(&Scenario::chsh()).unwrap().len(), 16);
    assert_eq!(enumerate_strategies(&Scenario::new(1, 1, 2, 2).unwrap()).unwrap().len(), 4);
    assert_eq!(enumerate_strategies(&Scenario::new(3, 3, 2, 2).unwrap()).unwrap().len(), 64);
    let big = Scenario::new(10, 10, 3, 3).unwrap();
    assert!(matches!(enumerate_strategies_with_cap(&big, 1000), Err(Error::CapExceeded { .. })));
}

#[test]
fn strategies_are_ordered_alice_slowest() {
    let s = Scenario::chsh();
    let all = enumerate_strategies(&s).unwrap();
    assert_eq!(all[0], DeterministicStrategy::new(&s, vec![0, 0], vec![0, 0]).unwrap());
    assert_eq!(all[1], DeterministicStrategy::new(&s, vec![0, 0], vec![0, 1]).unwrap());
    assert_eq!(all[4], DeterministicStrategy::new(&s, vec![0, 1], vec![0, 0]).unwrap());
}

#[test]
fn strategy_tables() {
    let s = Scenario::chsh();
    let constant = strategy_phenomenon(&DeterministicStrategy::new(&s, vec![0, 0], vec![0, 0]).unwrap(), &s).unwrap();
    for (a, b) in s.setting_pairs() {
        assert_eq!(constant.prob(a, b, 0, 0), &q(1, 1));
    }
    let id = strategy_phenomenon(&DeterministicStrategy::new(&s, vec![0, 1], vec![0, 1]).unwrap(), &s).unwrap();
    assert_eq!(id.prob(1, 0, 1, 0), &q(1, 1));
    for st in enumerate_strategies(&s).unwrap() {
        let f = strategy_phenomenon(&st, &s).unwrap();
        assert!(is_predictable(&f, 0.0).holds);
        assert!(is_signal_local(&f, 0.0).holds);
    }
}

#[test]
fn local_bounds() {
    let s = Scenario::chsh();
    let g = chsh_functional(&s);
    assert_eq!(local_bound(&s, &g).unwrap(), q(2, 1));
    let neg: Vec<Rational> = g.iter().map(|x| -x).collect();
    assert_eq!(local_bound(&s, &neg).unwrap(), q(2, 1));
    assert_eq!(local_bound(&s, &vec![Rational::one(); s.n_cells()]).unwrap(), q(4, 1));
}

#[test]
fn uniform_table_is_a_member() {
    let s = Scenario::chsh();
    let f = ExactPhenomenon::uniform(s.clone());
    let r = membership(&f).unwrap();
    assert!(r.member);
    // The uniform 1/16 mixture is one valid decomposition.
    let all = enumerate_strategies(&s).unwrap();
    let mix = ExactPhenomenon::from_fn(s.clone(), |c| {
        all.iter().filter(|st| st.deterministic_entry(c)).fold(Rational::zero(), |acc, _| acc + q(1, 16))
    })
    .unwrap();
    assert_eq!(mix, f);
    let m = model_from_weights(&r, &s).unwrap();
    assert!(is_predetermined(&m, 0.0).holds && is_local(&m, 0.0).holds && is_locally_causal(&m, 0.0).holds);
    assert!(m.reproduces(&f, 0.0).unwrap());
}

#[test]
fn two_vertex_mixture_round_trips() {
    let s = Scenario::chsh();
    let all = enumerate_strategies(&s).unwrap();
    let v3 = strategy_phenomenon(&all[3], &s).unwrap();
    let v10 = strategy_phenomenon(&all[10], &s).unwrap();
    let f = ExactPhenomenon::mixture(&[(q(3, 10), &v3), (q(7, 10), &v10)]).unwrap();
    let r = membership(&f).unwrap();
    let w = r.weights.clone().unwrap();
    assert!(w.iter().all(|(_, x)| *x > Rational::zero()));
    assert_eq!(w.iter().fold(Rational::zero(), |acc, (_, x)| acc + x), Rational::one());
    assert!(model_from_weights(&r, &s).unwrap().reproduces(&f, 0.0).unwrap());
}

#[test]
fn singlet_is_separated_by_a_chsh_form() {
    let f = born_phenomenon(&singlet(), &angles(&[0.0, FRAC_PI_2]), &angles(&[FRAC_PI_4, 3.0 * FRAC_PI_4])).unwrap();
    let (exact, r) = membership_float(&f).unwrap();
    assert!(!r.member);
    assert!(matches!(model_from_weights(&r, exact.scenario()), Err(Error::NotMember)));
    let cert = r.certificate.unwrap();
    assert!(cert.verify(&exact).unwrap());
    assert_eq!(cert.bound, q(2, 1));
    // Only full correlators, no marginal terms.
    let form = cert.correlator_form(exact.scenario()).unwrap();
    assert!(form.alice.iter().chain(&form.bob).all(Zero::is_zero));
    let nonzero = form.joint.iter().flatten().filter(|x| !x.is_zero()).count();
    assert_eq!(nonzero, 4);
}

#[test]
fn pr_box_is_not_a_member() {
    let s = Scenario::chsh();
    let f = ExactPhenomenon::from_fn(s, |c: Cell| if (c.x ^ c.y) == (c.a & c.b) { q(1, 2) } else { q(0, 1) }).unwrap();
    let r = membership(&f).unwrap();
    assert!(!r.member);
    assert!(r.certificate.unwrap().verify(&f).unwrap());
}

#[test]
fn determinize_examples() {
    let s = Scenario::chsh();
    let coins = HvModel::single_lambda(&ExactPhenomenon::uniform(s.clone()));
    let d = determinize(&coins, 0.0).unwrap();
    assert_eq!(d.support_size(), 16);
    assert!(d.prior().iter().all(|p| *p == q(1, 16)));
    assert!(d.reproduces(&coins.predicted_phenomenon().unwrap(), 0.0).unwrap());

    let all = enumerate_strategies(&s).unwrap();
    let det = HvModel::single_lambda(&strategy_phenomenon(&all[6], &s).unwrap());
    let d = determinize(&det, 0.0).unwrap();
    assert_eq!(d.support_size(), 1);
    assert_eq!(d.prior(), &[Rational::one()]);

    let pr = ExactPhenomenon::from_fn(s, |c: Cell| if (c.x ^ c.y) == (c.a & c.b) { q(1, 2) } else { q(0, 1) }).unwrap();
    assert!(matches!(determinize(&HvModel::single_lambda(&pr), 0.0), Err(Error::NotLocallyCausal(_))));
}

/// For 2-2-2-2, the eight CHSH inequalities are the only nontrivial facets:
/// membership agrees with "every CHSH value within [−2, 2]".
#[test]
fn chsh_facets_decide_membership() {
    let s = Scenario::chsh();
    for trial in 0..300 {
        let f = random_model(&mut trial_rng(40, trial), &s).predicted_phenomenon().unwrap();
        if !is_signal_local(&f, 0.0).holds {
            continue;
        }
        let within = chsh_table(&f).unwrap().iter().all(|e| e.value <= q(2, 1) && e.value >= q(-2, 1));
        assert_eq!(membership(&f).unwrap().member, within, "trial {trial}");
    }
}

/// Non-member tables admit no locally causal model: random factorized
/// models never come close, and the LP certificate is the proof.
#[test]
fn non_members_resist_local_models() {
    use bellkit::sampling::dirichlet;
    use rand::Rng;
    use rayon::prelude::*;

    let s = Scenario::chsh();
    let mut targets = Vec::new();
    let mut trial = 0;
    while targets.len() < 200 {
        let mut rng = trial_rng(50, trial);
        trial += 1;
        let table: Vec<Rational> = s
            .setting_pairs()
            .flat_map(|_| bellkit::sampling::exact_dirichlet(&mut rng, 4))
            .collect();
        let f = ExactPhenomenon::new(s.clone(), table).unwrap();
        let r = membership(&f).unwrap();
        if !r.member {
            assert!(r.certificate.unwrap().verify(&f).unwrap());
            targets.push(f.to_float());
        }
    }
    let closest = targets
        .par_iter()
        .enumerate()
        .map(|(k, f)| {
            let mut rng = trial_rng(51, k as u64);
            let mut best = f64::INFINITY;
            for _ in 0..10_000 {
                let k = rng.random_range(1..=4usize);
                let prior = dirichlet(&mut rng, k);
                let sides: Vec<[[f64; 2]; 4]> = (0..k)
                    .map(|_| {
                        let mut p = [[0.0; 2]; 4];
                        for row in p.iter_mut() {
                            let d = dirichlet(&mut rng, 2);
                            *row = [d[0], d[1]];
                        }
                        p
                    })
                    .collect();
                let mut gap: f64 = 0.0;
                for c in s.cells() {
                    let v: f64 = (0..k).map(|l| prior[l] * sides[l][c.a][c.x] * sides[l][2 + c.b][c.y]).sum();
                    gap = gap.max((v - f.get(c)).abs());
                }
                best = best.min(gap);
            }
            best
        })
        .reduce(|| f64::INFINITY, f64::min);
    assert!(closest > 1e-6, "a local model came within {closest}");
}
