//! Deciders for predetermination, predictability, locality,
//! signal-locality and local causality.
//!
//! Model-level properties read the per-λ joint response tables; single-party
//! conditionals are obtained by marginalizing the joint. Every failing
//! verdict carries a [`Witness`]: the offending indices and the two
//! probabilities that should have been equal.

use serde::{Deserialize, Serialize};

use crate::model::HvModel;
use crate::phenomenon::{Marginal, Phenomenon};
use crate::scalar::{Probability, Scalar};
use crate::scenario::{Cell, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PropertyName {
    Predetermination,
    Predictability,
    Locality,
    SignalLocality,
    LocalCausality,
    Factorizability,
    /// Predicted phenomenon lies in the local polytope.
    BellLocal,
}

impl PropertyName {
    pub const ALL: [PropertyName; 7] = [
        PropertyName::Predetermination,
        PropertyName::Predictability,
        PropertyName::Locality,
        PropertyName::SignalLocality,
        PropertyName::LocalCausality,
        PropertyName::Factorizability,
        PropertyName::BellLocal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PropertyName::Predetermination => "predetermination",
            PropertyName::Predictability => "predictability",
            PropertyName::Locality => "locality",
            PropertyName::SignalLocality => "signal_locality",
            PropertyName::LocalCausality => "local_causality",
            PropertyName::Factorizability => "factorizability",
            PropertyName::BellLocal => "bell_local",
        }
    }
}

impl std::fmt::Display for PropertyName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for PropertyName {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        PropertyName::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| crate::Error::Usage(format!("unknown property `{s}`")))
    }
}

/// Where a property failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessCell {
    /// A single table entry.
    Entry { lambda: Option<usize>, cell: Cell },
    /// A single-party conditional compared across two remote settings.
    Marginal {
        lambda: Option<usize>,
        side: Side,
        outcome: usize,
        local_setting: usize,
        remote_settings: (usize, usize),
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub at: WitnessCell,
    pub lhs: Probability,
    pub rhs: Probability,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyVerdict {
    pub property: PropertyName,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl PropertyVerdict {
    pub fn pass(property: PropertyName) -> Self {
        PropertyVerdict {
            property,
            holds: true,
            witness: None,
        }
    }

    pub fn fail(property: PropertyName, witness: Witness) -> Self {
        PropertyVerdict {
            property,
            holds: false,
            witness: Some(witness),
        }
    }

    fn from_witness(property: PropertyName, witness: Option<Witness>) -> Self {
        match witness {
            Some(w) => Self::fail(property, w),
            None => Self::pass(property),
        }
    }

    fn relabel(mut self, property: PropertyName) -> Self {
        self.property = property;
        self
    }
}

fn nearest_boolean<T: Scalar>(v: &T) -> T {
    if v.to_f64() < 0.5 {
        T::zero()
    } else {
        T::one()
    }
}

/// Every response entry is 0 or 1.
pub fn is_predetermined<T: Scalar>(model: &HvModel<T>, tol: f64) -> PropertyVerdict {
    let s = model.scenario();
    let witness = model.responses().iter().enumerate().find_map(|(lambda, r)| {
        r.iter().enumerate().find(|(_, v)| !v.is_boolean(tol)).map(|(i, v)| Witness {
            at: WitnessCell::Entry {
                lambda: Some(lambda),
                cell: s.cell(i),
            },
            lhs: v.to_probability(),
            rhs: nearest_boolean(v).to_probability(),
        })
    });
    PropertyVerdict::from_witness(PropertyName::Predetermination, witness)
}

/// Every observable frequency is 0 or 1.
pub fn is_predictable<T: Scalar>(phenomenon: &Phenomenon<T>, tol: f64) -> PropertyVerdict {
    let s = phenomenon.scenario();
    let witness = phenomenon
        .table()
        .iter()
        .enumerate()
        .find(|(_, v)| !v.is_boolean(tol))
        .map(|(i, v)| Witness {
            at: WitnessCell::Entry {
                lambda: None,
                cell: s.cell(i),
            },
            lhs: v.to_probability(),
            rhs: nearest_boolean(v).to_probability(),
        });
    PropertyVerdict::from_witness(PropertyName::Predictability, witness)
}

/// First place where a single-party conditional changes with the remote
/// setting, compared against remote setting 0.
fn remote_dependence<T: Scalar>(m: &Marginal<T>, lambda: Option<usize>, tol: f64) -> Option<Witness> {
    for local in 0..m.n_local() {
        for outcome in 0..m.n_outcomes() {
            let base = m.get(outcome, local, 0);
            for remote in 1..m.n_remote() {
                let other = m.get(outcome, local, remote);
                if !base.approx_eq(other, tol) {
                    return Some(Witness {
                        at: WitnessCell::Marginal {
                            lambda,
                            side: m.side,
                            outcome,
                            local_setting: local,
                            remote_settings: (0, remote),
                        },
                        lhs: base.to_probability(),
                        rhs: other.to_probability(),
                    });
                }
            }
        }
    }
    None
}

fn locality_witness<T: Scalar>(model: &HvModel<T>, tol: f64) -> Option<Witness> {
    (0..model.support_size()).find_map(|lambda| {
        // Bob first: the stated form of the condition; Alice by symmetry.
        remote_dependence(&model.response_marginal(lambda, Side::Bob), Some(lambda), tol)
            .or_else(|| remote_dependence(&model.response_marginal(lambda, Side::Alice), Some(lambda), tol))
    })
}

/// Each party's per-λ outcome distribution is independent of the remote
/// setting (checked for both parties).
pub fn is_local<T: Scalar>(model: &HvModel<T>, tol: f64) -> PropertyVerdict {
    PropertyVerdict::from_witness(PropertyName::Locality, locality_witness(model, tol))
}

/// Observable marginals are independent of the remote setting.
pub fn is_signal_local<T: Scalar>(phenomenon: &Phenomenon<T>, tol: f64) -> PropertyVerdict {
    let witness = remote_dependence(&phenomenon.marginal(Side::Bob), None, tol)
        .or_else(|| remote_dependence(&phenomenon.marginal(Side::Alice), None, tol));
    PropertyVerdict::from_witness(PropertyName::SignalLocality, witness)
}

/// For every λ the joint response is `P(x | a, λ) P(y | b, λ)` with
/// remote-setting-independent factors. Entries whose factor is zero are
/// satisfied automatically, which is the vacuous-conditioning convention.
pub fn is_factorizable<T: Scalar>(model: &HvModel<T>, tol: f64) -> PropertyVerdict {
    if let Some(w) = locality_witness(model, tol) {
        return PropertyVerdict::fail(PropertyName::Factorizability, w);
    }
    let s = model.scenario();
    for lambda in 0..model.support_size() {
        let alice = model.response_marginal(lambda, Side::Alice);
        let bob = model.response_marginal(lambda, Side::Bob);
        for (i, v) in model.response(lambda).iter().enumerate() {
            let c = s.cell(i);
            let product = alice.get(c.x, c.a, c.b).clone() * bob.get(c.y, c.b, c.a).clone();
            if !v.approx_eq(&product, tol) {
                return PropertyVerdict::fail(
                    PropertyName::Factorizability,
                    Witness {
                        at: WitnessCell::Entry {
                            lambda: Some(lambda),
                            cell: c,
                        },
                        lhs: v.to_probability(),
                        rhs: product.to_probability(),
                    },
                );
            }
        }
    }
    PropertyVerdict::pass(PropertyName::Factorizability)
}

/// Bob's outcome is independent of Alice's outcome and setting given λ and
/// his own setting, and symmetrically for Alice. Decided through the
/// equivalent factorized form.
pub fn is_locally_causal<T: Scalar>(model: &HvModel<T>, tol: f64) -> PropertyVerdict {
    is_factorizable(model, tol).relabel(PropertyName::LocalCausality)
}

impl Witness {
    /// Recomputes both sides from a model's raw response tables by direct
    /// summation. Entry witnesses from predetermination return the entry and
    /// its rounded value; entry witnesses from factorization are recomputed
    /// with [`Witness::recompute_factorization`].
    pub fn recompute_on_model<T: Scalar>(&self, model: &HvModel<T>) -> Option<(Probability, Probability)> {
        match &self.at {
            WitnessCell::Entry { lambda, cell } => {
                let v = model.response_prob((*lambda)?, *cell);
                Some((v.to_probability(), nearest_boolean(v).to_probability()))
            }
            WitnessCell::Marginal {
                lambda,
                side,
                outcome,
                local_setting,
                remote_settings,
            } => {
                let table = model.response((*lambda)?);
                let s = model.scenario();
                let sum_at = |remote: usize| {
                    s.cells()
                        .filter(|c| match side {
                            Side::Alice => c.a == *local_setting && c.b == remote && c.x == *outcome,
                            Side::Bob => c.b == *local_setting && c.a == remote && c.y == *outcome,
                        })
                        .fold(T::zero(), |acc, c| acc + table[s.index(c)].clone())
                };
                Some((
                    sum_at(remote_settings.0).to_probability(),
                    sum_at(remote_settings.1).to_probability(),
                ))
            }
        }
    }

    /// `(P(x, y | a, b, λ), P(x | a, b, λ) P(y | a, b, λ))` at an entry witness.
    pub fn recompute_factorization<T: Scalar>(&self, model: &HvModel<T>) -> Option<(Probability, Probability)> {
        let WitnessCell::Entry { lambda, cell } = &self.at else {
            return None;
        };
        let table = model.response((*lambda)?);
        let s = model.scenario();
        let block: Vec<Cell> = s.cells().filter(|c| c.a == cell.a && c.b == cell.b).collect();
        let pa = block
            .iter()
            .filter(|c| c.x == cell.x)
            .fold(T::zero(), |acc, c| acc + table[s.index(*c)].clone());
        let pb = block
            .iter()
            .filter(|c| c.y == cell.y)
            .fold(T::zero(), |acc, c| acc + table[s.index(*c)].clone());
        Some((table[s.index(*cell)].to_probability(), (pa * pb).to_probability()))
    }

    /// Recomputes both sides on a phenomenon.
    pub fn recompute_on_phenomenon<T: Scalar>(&self, phenomenon: &Phenomenon<T>) -> Option<(Probability, Probability)> {
        let model = HvModel::single_lambda(phenomenon);
        let shifted = match &self.at {
            WitnessCell::Entry { cell, .. } => WitnessCell::Entry {
                lambda: Some(0),
                cell: *cell,
            },
            WitnessCell::Marginal {
                side,
                outcome,
                local_setting,
                remote_settings,
                ..
            } => WitnessCell::Marginal {
                lambda: Some(0),
                side: *side,
                outcome: *outcome,
                local_setting: *local_setting,
                remote_settings: *remote_settings,
            },
        };
        Witness {
            at: shifted,
            lhs: self.lhs.clone(),
            rhs: self.rhs.clone(),
        }
        .recompute_on_model(&model)
    }
}
