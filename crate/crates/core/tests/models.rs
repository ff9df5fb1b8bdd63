//! Tables, hidden-variable models and the single-model properties.

use bellkit::error::Error;
use bellkit::implication::check_implication;
use bellkit::model::{ExactModel, HvModel};
use bellkit::phenomenon::ExactPhenomenon;
use bellkit::properties::{
    is_local, is_locally_causal, is_predetermined, is_predictable, is_signal_local, PropertyName, WitnessCell,
};
use bellkit::quantum::{angles, born_phenomenon, pure_ensemble_model, singlet, PureEnsemble};
use bellkit::scalar::Rational;
use bellkit::scenario::{Cell, Scenario, Side};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn table(s: &Scenario, f: impl Fn(Cell) -> Rational) -> ExactPhenomenon {
    ExactPhenomenon::from_fn(s.clone(), f).unwrap()
}

fn pr_box() -> ExactPhenomenon {
    table(&Scenario::chsh(), |c| if (c.x ^ c.y) == (c.a & c.b) { q(1, 2) } else { q(0, 1) })
}

/// B = a, A uniform.
fn b_copies_a() -> ExactPhenomenon {
    table(&Scenario::chsh(), |c| if c.y == c.a { q(1, 2) } else { q(0, 1) })
}

fn perfectly_correlated_model() -> ExactModel {
    let s = Scenario::chsh();
    let plus = table(&s, |c| if c.x == 0 && c.y == 0 { q(1, 1) } else { q(0, 1) });
    let minus = table(&s, |c| if c.x == 1 && c.y == 1 { q(1, 1) } else { q(0, 1) });
    HvModel::with_default_labels(s, vec![q(1, 2), q(1, 2)], vec![plus.table().to_vec(), minus.table().to_vec()])
        .unwrap()
}

#[test]
fn predicted_phenomenon_of_two_point_model() {
    let f = perfectly_correlated_model().predicted_phenomenon().unwrap();
    for c in Scenario::chsh().cells() {
        let want = if c.x == c.y { q(1, 2) } else { q(0, 1) };
        assert_eq!(f.get(c), &want, "{c:?}");
    }
}

#[test]
fn one_point_model_reproduces_its_table() {
    let f = pr_box();
    let m = HvModel::single_lambda(&f);
    assert_eq!(m.predicted_phenomenon().unwrap(), f);
    assert!(m.reproduces(&f, 0.0).unwrap());
    let uniform = ExactPhenomenon::uniform(Scenario::chsh());
    assert!(!perfectly_correlated_model().reproduces(&uniform, 0.0).unwrap());
}

#[test]
fn reproduces_rejects_other_scenarios() {
    let m = perfectly_correlated_model();
    let other = ExactPhenomenon::uniform(Scenario::new(3, 2, 2, 2).unwrap());
    assert!(matches!(m.reproduces(&other, 0.0), Err(Error::ScenarioMismatch(_))));
}

#[test]
fn non_normalized_model_is_rejected() {
    let s = Scenario::chsh();
    let r = ExactPhenomenon::uniform(s.clone()).table().to_vec();
    let bad = HvModel::with_default_labels(s, vec![q(1, 2), q(1, 3)], vec![r.clone(), r]);
    assert!(matches!(bad, Err(Error::NonNormalized(_))));
}

#[test]
fn marginals() {
    for f in [ExactPhenomenon::uniform(Scenario::chsh()), pr_box()] {
        for side in [Side::Alice, Side::Bob] {
            let m = f.marginal(side);
            for o in 0..2 {
                for l in 0..2 {
                    for r in 0..2 {
                        assert_eq!(m.get(o, l, r), &q(1, 2));
                    }
                }
            }
        }
    }
    let m = b_copies_a().marginal(Side::Bob);
    // Bob's outcome 1 at his setting 0, Alice's setting 1 versus 0.
    assert_eq!(m.get(1, 0, 1), &q(1, 1));
    assert_eq!(m.get(1, 0, 0), &q(0, 1));
}

#[test]
fn mixture_is_linear() {
    let s = Scenario::chsh();
    let m1 = perfectly_correlated_model();
    let m2 = HvModel::single_lambda(&pr_box());
    let mixed = HvModel::mixture(&[(q(1, 3), &m1), (q(2, 3), &m2)]).unwrap();
    let f1 = m1.predicted_phenomenon().unwrap();
    let f2 = m2.predicted_phenomenon().unwrap();
    let got = mixed.predicted_phenomenon().unwrap();
    for c in s.cells() {
        assert_eq!(got.get(c), &(q(1, 3) * f1.get(c) + q(2, 3) * f2.get(c)));
    }
}

#[test]
fn predetermination_and_predictability() {
    assert!(is_predetermined(&perfectly_correlated_model(), 0.0).holds);
    let coins = HvModel::single_lambda(&ExactPhenomenon::uniform(Scenario::chsh()));
    let v = is_predetermined(&coins, 0.0);
    assert!(!v.holds);
    assert!(matches!(v.witness.unwrap().at, WitnessCell::Entry { lambda: Some(0), .. }));
    assert!(!is_predictable(&ExactPhenomenon::uniform(Scenario::chsh()), 0.0).holds);

    let (al, bo) = (angles(&[0.0, std::f64::consts::FRAC_PI_2]), angles(&[std::f64::consts::FRAC_PI_4, 0.3]));
    assert!(!is_predictable(&born_phenomenon(&singlet(), &al, &bo).unwrap(), 1e-9).holds);

    let one = pure_ensemble_model(&PureEnsemble::pure(bellkit::quantum::singlet_vector()).unwrap(), &angles(&[0.0]), &angles(&[std::f64::consts::FRAC_PI_4])).unwrap();
    assert!(!is_predetermined(&one, 1e-9).holds);
}

#[test]
fn locality_verdicts() {
    let copies = HvModel::single_lambda(&b_copies_a());
    let v = is_local(&copies, 0.0);
    assert!(!v.holds);
    assert!(matches!(v.witness.unwrap().at, WitnessCell::Marginal { side: Side::Bob, .. }));
    assert!(!is_signal_local(&b_copies_a(), 0.0).holds);
    assert!(is_signal_local(&pr_box(), 0.0).holds);
    assert!(is_local(&HvModel::single_lambda(&pr_box()), 0.0).holds);
}

#[test]
fn singlet_single_lambda_model() {
    let dirs = angles(&[0.0, 1.1]);
    let m = pure_ensemble_model(&PureEnsemble::pure(bellkit::quantum::singlet_vector()).unwrap(), &dirs, &dirs).unwrap();
    assert!(is_local(&m, 1e-9).holds);
    let v = is_locally_causal(&m, 1e-9);
    assert!(!v.holds);
    let w = v.witness.unwrap();
    // P(+,+) = 0 at equal angles while the product of marginals is 1/4.
    let (lhs, rhs) = w.recompute_factorization(&m).unwrap();
    assert_ne!(lhs.to_f64(), rhs.to_f64());
}

#[test]
fn independent_coins_factorize() {
    let coins = HvModel::single_lambda(&ExactPhenomenon::uniform(Scenario::chsh()));
    assert!(is_locally_causal(&coins, 0.0).holds);
    assert!(is_local(&coins, 0.0).holds);
}

#[test]
fn implication_examples() {
    use PropertyName::*;
    assert!(check_implication(&[Locality, Predetermination], LocalCausality, 300, 1).unwrap().holds());
    assert!(check_implication(&[LocalCausality], Locality, 300, 2).unwrap().holds());
    let r = check_implication(&[LocalCausality], Predetermination, 300, 3).unwrap();
    let cx = r.first_counterexample.expect("a counterexample");
    assert!(is_locally_causal(&cx.model, 0.0).holds);
    assert!(!is_predetermined(&cx.model, 0.0).holds);
}

#[test]
fn witnesses_recompute_to_unequal_sides() {
    let copies = HvModel::single_lambda(&b_copies_a());
    let w = is_local(&copies, 0.0).witness.unwrap();
    let (l, r) = w.recompute_on_model(&copies).unwrap();
    assert_eq!((l, r), (w.lhs.clone(), w.rhs.clone()));
    assert_ne!(w.lhs, w.rhs);
}
