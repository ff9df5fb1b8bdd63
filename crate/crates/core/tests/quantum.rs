use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

use bellkit::error::Error;
use bellkit::phenomenon::{ExactPhenomenon, FloatPhenomenon};
use bellkit::properties::{is_local, is_locally_causal, is_signal_local};
use bellkit::quantum::{
    angles, basis_vector, born_phenomenon, chsh_value, correlator, maximally_mixed, max_abs_chsh,
    pure_ensemble_model, singlet, werner, BlochSetting, PureEnsemble, TwoQubitState,
};
use bellkit::sampling::trial_rng;
use bellkit::scenario::Scenario;
use nalgebra::{Complex, Matrix4};

#[test]
fn singlet_basics() {
    let s = singlet();
    assert!((s.trace() - 1.0).abs() < 1e-12);
    assert!((s.purity() - 1.0).abs() < 1e-12);
    let z = angles(&[0.0]);
    let f = born_phenomenon(&s, &z, &z).unwrap();
    assert!((correlator(&f, 0, 0).unwrap() + 1.0).abs() < 1e-12);
    assert!(f.prob(0, 0, 0, 0).abs() < 1e-12 && f.prob(0, 0, 1, 1).abs() < 1e-12);
    assert!((f.prob(0, 0, 0, 1) - 0.5).abs() < 1e-12);
}

#[test]
fn werner_family() {
    assert_eq!(werner(1.0).unwrap().rho(), singlet().rho());
    let z = angles(&[0.0, 0.4]);
    let f0 = born_phenomenon(&werner(0.0).unwrap(), &z, &z).unwrap();
    for (a, b) in [(0, 0), (0, 1), (1, 1)] {
        assert!(correlator(&f0, a, b).unwrap().abs() < 1e-12);
    }
    let half = born_phenomenon(&werner(0.5).unwrap(), &z, &z).unwrap();
    assert!((correlator(&half, 0, 0).unwrap() + 0.5).abs() < 1e-12);
    assert!(matches!(werner(1.2), Err(Error::Domain(_))));
    for k in 0..=100 {
        let rho = werner(k as f64 / 100.0).unwrap();
        let m = rho.rho();
        assert!((m - m.adjoint()).norm() < 1e-12);
        assert!((rho.trace() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn maximally_mixed_gives_uniform_table() {
    let f = born_phenomenon(&maximally_mixed(), &angles(&[0.3, 2.0]), &angles(&[1.0])).unwrap();
    assert!(f.table().iter().all(|p| (p - 0.25).abs() < 1e-12));
}

#[test]
fn singlet_correlator_is_minus_cosine() {
    let mut rng = trial_rng(4, 0);
    for _ in 0..200 {
        let (a, b) = (BlochSetting::random(&mut rng), BlochSetting::random(&mut rng));
        let f = born_phenomenon(&singlet(), &[a], &[b]).unwrap();
        let cos: f64 = a.vector().iter().zip(b.vector()).map(|(x, y)| x * y).sum();
        assert!((correlator(&f, 0, 0).unwrap() + cos).abs() < 1e-12);
    }
    let f = born_phenomenon(&singlet(), &angles(&[0.0]), &angles(&[FRAC_PI_4])).unwrap();
    assert!((correlator(&f, 0, 0).unwrap() + SQRT_2 / 2.0).abs() < 1e-12);
}

#[test]
fn correlator_needs_binary_outcomes() {
    let f = ExactPhenomenon::uniform(Scenario::new(1, 1, 3, 2).unwrap());
    assert!(matches!(correlator(&f, 0, 0), Err(Error::OutcomeArity { .. })));
}

#[test]
fn chsh_examples() {
    let f = born_phenomenon(&singlet(), &angles(&[0.0, FRAC_PI_2]), &angles(&[FRAC_PI_4, 3.0 * FRAC_PI_4])).unwrap();
    let best = max_abs_chsh(&f).unwrap().unwrap();
    assert!((best.value.abs() - 2.0 * SQRT_2).abs() < 1e-12);
    // The literal (0, 1, 0, 1) quadruple at these angles cancels out.
    assert!(chsh_value(&f, 0, 1, 0, 1).unwrap().abs() < 1e-12);

    let pr = FloatPhenomenon::from_fn(Scenario::chsh(), |c| if (c.x ^ c.y) == (c.a & c.b) { 0.5 } else { 0.0 }).unwrap();
    assert!((chsh_value(&pr, 0, 1, 0, 1).unwrap() - 4.0).abs() < 1e-12);
}

#[test]
fn tsirelson_ceiling_on_random_directions() {
    let mut rng = trial_rng(9, 0);
    for _ in 0..10_000 {
        let al = [BlochSetting::random(&mut rng), BlochSetting::random(&mut rng)];
        let bo = [BlochSetting::random(&mut rng), BlochSetting::random(&mut rng)];
        let f = born_phenomenon(&singlet(), &al, &bo).unwrap();
        assert!(chsh_value(&f, 0, 1, 0, 1).unwrap().abs() <= 2.0 * SQRT_2 + 1e-9);
    }
}

#[test]
fn invalid_state_is_rejected() {
    let mut m = Matrix4::zeros();
    m[(0, 0)] = Complex::new(2.0, 0.0);
    m[(1, 1)] = Complex::new(-1.0, 0.0);
    assert!(matches!(TwoQubitState::new(m), Err(Error::InvalidState(_))));
}

#[test]
fn werner_ensemble_matches_mixture() {
    let (al, bo) = (angles(&[0.0, 0.7]), angles(&[0.0, PI / 3.0]));
    for v in [0.0, 0.5, 0.9] {
        let m = pure_ensemble_model(&PureEnsemble::werner(v).unwrap(), &al, &bo).unwrap();
        let direct = born_phenomenon(&werner(v).unwrap(), &al, &bo).unwrap();
        assert!(m.predicted_phenomenon().unwrap().max_abs_diff(&direct).unwrap() < 1e-9);
    }
    let half = pure_ensemble_model(&PureEnsemble::werner(0.5).unwrap(), &al, &bo).unwrap();
    assert!(is_local(&half, 1e-9).holds);
    assert!(!is_locally_causal(&half, 1e-9).holds);
}

#[test]
fn product_state_ensemble_is_locally_causal() {
    let target = {
        let rho = (basis_vector(0, 1) * basis_vector(0, 1).adjoint() + basis_vector(1, 0) * basis_vector(1, 0).adjoint())
            * Complex::new(0.5, 0.0);
        TwoQubitState::new(rho).unwrap()
    };
    let e = PureEnsemble::new(vec![(0.5, basis_vector(0, 1)), (0.5, basis_vector(1, 0))], target).unwrap();
    let m = pure_ensemble_model(&e, &angles(&[0.0, 1.0]), &angles(&[0.5, 2.0])).unwrap();
    assert!(is_locally_causal(&m, 1e-9).holds);
}

#[test]
fn mismatched_ensemble_is_rejected() {
    let e = PureEnsemble::new(vec![(1.0, basis_vector(0, 0))], singlet());
    assert!(matches!(e, Err(Error::EnsembleMismatch(_))));
}

#[test]
fn born_tables_never_signal() {
    let mut rng = trial_rng(10, 0);
    for k in 0..200 {
        let state = bellkit::quantum::random_state(&mut rng);
        let al: Vec<_> = (0..1 + k % 3).map(|_| BlochSetting::random(&mut rng)).collect();
        let bo: Vec<_> = (0..2).map(|_| BlochSetting::random(&mut rng)).collect();
        assert!(is_signal_local(&born_phenomenon(&state, &al, &bo).unwrap(), 1e-12).holds);
    }
}
