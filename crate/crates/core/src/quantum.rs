//! Two-qubit states, spin measurements along real Bloch directions, the
//! Born rule, and correlator functionals.
//!
//! Outcome index 0 stands for spin +1 and index 1 for −1. Basis order is
//! |00⟩, |01⟩, |10⟩, |11⟩ with |0⟩ the +z eigenstate.

use nalgebra::{Matrix2, Matrix4, Vector3, Vector4};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{FloatModel, HvModel};
use crate::phenomenon::{FloatPhenomenon, Phenomenon};
use crate::scalar::Scalar;
use crate::scenario::Scenario;

const STATE_TOL: f64 = 1e-12;
const EIGEN_FLOOR: f64 = -1e-10;
const ENSEMBLE_TOL: f64 = 1e-10;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Density operator of two qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    rho: Matrix4<Complex64>,
}

impl TwoQubitState {
    pub fn new(rho: Matrix4<Complex64>) -> Result<Self> {
        if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let herm = (rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > STATE_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = rho.trace();
        if (tr - c(1.0)).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} ≠ 1")));
        }
        let hermitian = (rho + rho.adjoint()) * c(0.5);
        let min = hermitian.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
        if min < EIGEN_FLOOR {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(TwoQubitState { rho })
    }

    pub fn pure(psi: &Vector4<Complex64>) -> Result<Self> {
        let norm = psi.norm();
        if (norm - 1.0).abs() > STATE_TOL.sqrt() {
            return Err(Error::InvalidState(format!("state vector has norm {norm}")));
        }
        let psi = psi / c(norm);
        Self::new(psi * psi.adjoint())
    }

    pub fn rho(&self) -> &Matrix4<Complex64> {
        &self.rho
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    pub fn purity(&self) -> f64 {
        (self.rho * self.rho).trace().re
    }

    /// Expectation of `op` in this state.
    pub fn expectation(&self, op: &Matrix4<Complex64>) -> f64 {
        (self.rho * op).trace().re
    }
}

/// (|01⟩ − |10⟩)/√2.
pub fn singlet_vector() -> Vector4<Complex64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Vector4::new(c(0.0), c(h), c(-h), c(0.0))
}

/// The four Bell states Φ+, Φ−, Ψ+, Ψ− (the last is the singlet).
pub fn bell_states() -> [Vector4<Complex64>; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [
        Vector4::new(c(h), c(0.0), c(0.0), c(h)),
        Vector4::new(c(h), c(0.0), c(0.0), c(-h)),
        Vector4::new(c(0.0), c(h), c(h), c(0.0)),
        singlet_vector(),
    ]
}

/// Computational-basis product state |x y⟩.
pub fn basis_vector(x: usize, y: usize) -> Vector4<Complex64> {
    let mut v = Vector4::zeros();
    v[2 * x + y] = c(1.0);
    v
}

pub fn singlet() -> TwoQubitState {
    TwoQubitState::pure(&singlet_vector()).expect("singlet is a valid state")
}

pub fn maximally_mixed() -> TwoQubitState {
    TwoQubitState {
        rho: Matrix4::identity() * c(0.25),
    }
}

/// `v · singlet + (1 − v) · I/4`.
pub fn werner(visibility: f64) -> Result<TwoQubitState> {
    if !(0.0..=1.0).contains(&visibility) {
        return Err(Error::Domain(format!("visibility {visibility} outside [0, 1]")));
    }
    let rho = singlet().rho * c(visibility) + Matrix4::identity() * c((1.0 - visibility) / 4.0);
    TwoQubitState::new(rho)
}

/// Unit measurement direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochSetting {
    n: [f64; 3],
}

impl BlochSetting {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidSetting(format!("direction ({x}, {y}, {z}) has norm {norm}")));
        }
        Ok(BlochSetting { n: [x, y, z] })
    }

    /// Direction in the x–z plane at polar angle `theta` from +z.
    pub fn from_angle(theta: f64) -> Self {
        BlochSetting {
            n: [theta.sin(), 0.0, theta.cos()],
        }
    }

    pub fn from_spherical(theta: f64, phi: f64) -> Self {
        BlochSetting {
            n: [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()],
        }
    }

    /// Uniform on the sphere.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let v = Vector3::new(
                StandardNormal.sample(rng),
                StandardNormal.sample(rng),
                StandardNormal.sample(rng),
            );
            let norm: f64 = v.norm();
            if norm > 1e-6 {
                let u = v / norm;
                return BlochSetting { n: [u.x, u.y, u.z] };
            }
        }
    }

    pub fn vector(&self) -> [f64; 3] {
        self.n
    }

    /// `(I + s n·σ)/2` for outcome index 0 (s = +1) or 1 (s = −1).
    pub fn projector(&self, outcome: usize) -> Matrix2<Complex64> {
        let s = if outcome == 0 { 1.0 } else { -1.0 };
        let [x, y, z] = self.n;
        let i = Complex64::i();
        let n_sigma = Matrix2::new(c(z), c(x) - i * y, c(x) + i * y, c(-z));
        (Matrix2::identity() + n_sigma * c(s)) * c(0.5)
    }
}

pub fn angles(thetas: &[f64]) -> Vec<BlochSetting> {
    thetas.iter().map(|&t| BlochSetting::from_angle(t)).collect()
}

fn kron(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> Matrix4<Complex64> {
    Matrix4::from_fn(|r, col| a[(r / 2, col / 2)] * b[(r % 2, col % 2)])
}

fn born_table(rho: &Matrix4<Complex64>, alice: &[BlochSetting], bob: &[BlochSetting]) -> Vec<f64> {
    let mut table = Vec::with_capacity(alice.len() * bob.len() * 4);
    for da in alice {
        for db in bob {
            for x in 0..2 {
                for y in 0..2 {
                    let op = kron(&da.projector(x), &db.projector(y));
                    table.push((rho * op).trace().re);
                }
            }
        }
    }
    table
}

fn check_directions(alice: &[BlochSetting], bob: &[BlochSetting]) -> Result<Scenario> {
    if alice.is_empty() || bob.is_empty() {
        return Err(Error::InvalidSetting("direction lists must be nonempty".into()));
    }
    Scenario::new(alice.len(), bob.len(), 2, 2)
}

/// `f(x, y | a, b) = tr[ρ (Π_x^a ⊗ Π_y^b)]`.
pub fn born_phenomenon(state: &TwoQubitState, alice: &[BlochSetting], bob: &[BlochSetting]) -> Result<FloatPhenomenon> {
    let scenario = check_directions(alice, bob)?;
    Phenomenon::new(scenario, born_table(&state.rho, alice, bob))
}

fn binary_scenario<T: Scalar>(ph: &Phenomenon<T>) -> Result<&Scenario> {
    let s = ph.scenario();
    if s.n_outcomes_alice != 2 || s.n_outcomes_bob != 2 {
        return Err(Error::OutcomeArity {
            alice: s.n_outcomes_alice,
            bob: s.n_outcomes_bob,
        });
    }
    Ok(s)
}

/// `E(a, b) = Σ x·y·f(x, y | a, b)` with outcomes read as ±1.
pub fn correlator<T: Scalar>(ph: &Phenomenon<T>, a: usize, b: usize) -> Result<T> {
    let s = binary_scenario(ph)?;
    if a >= s.n_settings_alice || b >= s.n_settings_bob {
        return Err(Error::SettingIndex(format!("({a}, {b}) in scenario {s}")));
    }
    let same = ph.prob(a, b, 0, 0).clone() + ph.prob(a, b, 1, 1).clone();
    let diff = ph.prob(a, b, 0, 1).clone() + ph.prob(a, b, 1, 0).clone();
    Ok(same - diff)
}

/// `E(a1,b1) + E(a1,b2) + E(a2,b1) − E(a2,b2)`.
pub fn chsh_value<T: Scalar>(ph: &Phenomenon<T>, a1: usize, a2: usize, b1: usize, b2: usize) -> Result<T> {
    Ok(correlator(ph, a1, b1)? + correlator(ph, a1, b2)? + correlator(ph, a2, b1)? - correlator(ph, a2, b2)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChshEntry<T> {
    pub a1: usize,
    pub a2: usize,
    pub b1: usize,
    pub b2: usize,
    pub value: T,
}

/// CHSH value for every ordered quadruple with `a1 ≠ a2`, `b1 ≠ b2`.
pub fn chsh_table<T: Scalar>(ph: &Phenomenon<T>) -> Result<Vec<ChshEntry<T>>> {
    let s = binary_scenario(ph)?;
    let mut out = Vec::new();
    for a1 in 0..s.n_settings_alice {
        for a2 in (0..s.n_settings_alice).filter(|&a2| a2 != a1) {
            for b1 in 0..s.n_settings_bob {
                for b2 in (0..s.n_settings_bob).filter(|&b2| b2 != b1) {
                    out.push(ChshEntry {
                        a1,
                        a2,
                        b1,
                        b2,
                        value: chsh_value(ph, a1, a2, b1, b2)?,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// The quadruple of largest `|CHSH|` (first in table order on ties), or
/// `None` when either party has a single setting.
pub fn max_abs_chsh<T: Scalar>(ph: &Phenomenon<T>) -> Result<Option<ChshEntry<T>>> {
    let mut best: Option<ChshEntry<T>> = None;
    for e in chsh_table(ph)? {
        let better = match &best {
            None => true,
            Some(b) => e.value.abs_diff(&T::zero()) > b.value.abs_diff(&T::zero()),
        };
        if better {
            best = Some(e);
        }
    }
    Ok(best)
}

/// Mixture of pure two-qubit states stated to equal `target`.
#[derive(Debug, Clone)]
pub struct PureEnsemble {
    members: Vec<(f64, Vector4<Complex64>)>,
    target: TwoQubitState,
}

impl PureEnsemble {
    pub fn new(members: Vec<(f64, Vector4<Complex64>)>, target: TwoQubitState) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EnsembleMismatch("empty ensemble".into()));
        }
        let total: f64 = members.iter().map(|(w, _)| w).sum();
        if members.iter().any(|(w, _)| !(0.0..=1.0).contains(w)) || (total - 1.0).abs() > ENSEMBLE_TOL {
            return Err(Error::EnsembleMismatch(format!("weights sum to {total}")));
        }
        let mut mix = Matrix4::zeros();
        for (i, (w, psi)) in members.iter().enumerate() {
            let norm = psi.norm();
            if (norm - 1.0).abs() > ENSEMBLE_TOL {
                return Err(Error::EnsembleMismatch(format!("member {i} has norm {norm}")));
            }
            mix += psi * psi.adjoint() * c(*w);
        }
        let gap = (mix - target.rho).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if gap > ENSEMBLE_TOL {
            return Err(Error::EnsembleMismatch(format!("max entry deviation {gap:e}")));
        }
        Ok(PureEnsemble { members, target })
    }

    /// A single pure state.
    pub fn pure(psi: Vector4<Complex64>) -> Result<Self> {
        let target = TwoQubitState::pure(&psi)?;
        Self::new(vec![(1.0, psi)], target)
    }

    /// Werner state written over the Bell basis: the singlet at weight
    /// `(1 + 3v)/4` and each other Bell state at `(1 − v)/4`.
    pub fn werner(visibility: f64) -> Result<Self> {
        let target = werner(visibility)?;
        let rest = (1.0 - visibility) / 4.0;
        let [phi_p, phi_m, psi_p, psi_m] = bell_states();
        Self::new(
            vec![(visibility + rest, psi_m), (rest, phi_p), (rest, phi_m), (rest, psi_p)],
            target,
        )
    }

    pub fn members(&self) -> &[(f64, Vector4<Complex64>)] {
        &self.members
    }

    pub fn target(&self) -> &TwoQubitState {
        &self.target
    }
}

/// Hidden-variable model whose `λ` are the ensemble members and whose
/// responses are their Born tables.
pub fn pure_ensemble_model(ensemble: &PureEnsemble, alice: &[BlochSetting], bob: &[BlochSetting]) -> Result<FloatModel> {
    let scenario = check_directions(alice, bob)?;
    let labels = (0..ensemble.members.len()).map(|i| format!("ψ{i}")).collect();
    let prior = ensemble.members.iter().map(|(w, _)| *w).collect();
    let responses = ensemble
        .members
        .iter()
        .map(|(_, psi)| born_table(&(psi * psi.adjoint()), alice, bob))
        .collect();
    HvModel::new(scenario, labels, prior, responses)
}

/// Random mixed state `G G† / tr(G G†)` with `G` complex Gaussian.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitState {
    let mut normal = || -> f64 { StandardNormal.sample(rng) };
    let g = Matrix4::from_fn(|_, _| Complex64::new(normal(), normal()));
    let m = g * g.adjoint();
    let rho = m / m.trace();
    // Restore exact Hermiticity lost to rounding.
    let rho = (rho + rho.adjoint()) * c(0.5);
    TwoQubitState::new(rho).expect("Wishart sample is a state")
}

/// Random pure state, Haar-distributed.
pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitState {
    let mut normal = || -> f64 { StandardNormal.sample(rng) };
    let v = Vector4::from_fn(|_, _| Complex64::new(normal(), normal()));
    TwoQubitState::pure(&(v / c(v.norm()))).expect("normalized vector")
}
