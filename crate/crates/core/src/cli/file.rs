//! The TOML input format.
//!
//! ```toml
//! format = 1
//!
//! [scenario]                 # optional; defaults to 2 settings, 2 outcomes
//! settings = [2, 2]
//! outcomes = [2, 2]
//! preparation = "c"
//!
//! [phenomenon]               # exactly one of phenomenon, hv_model,
//! table = ["1/4", "1/4", …]  # quantum, causal
//!
//! [analysis]                 # optional
//! tol = 1e-9
//! properties = ["locality"]
//! principles = ["local_causality"]
//! ```
//!
//! Tables list cells in the canonical order (Alice setting, Bob setting,
//! Alice outcome, Bob outcome). Probabilities written as strings (`"1/3"`,
//! `"0.25"`) are exact; bare numbers are floating point. A table, or a
//! model's prior and responses together, must not mix the two.
//!
//! `[hv_model]` has `prior = […]` and one `[[hv_model.response]]` per point,
//! each with `table = […]` and an optional `label`.
//!
//! `[quantum]` has `state` (`"singlet"`, `"werner:<v>"` or sixteen
//! `[re, im]` density-matrix entries, row major) and angle lists `alice`
//! and `bob` for directions in the x–z plane.
//!
//! `[causal]` has `events = [{ label, t, x, kind, arity }]` (arity defaults
//! to 2), `edges = [["cause", "effect"], …]`, optional tables
//! `[causal.cpt.<label>]` mapping parent assignments (`"0,1"`, parents in
//! event order; `"*"` for roots) to rows, and an optional `joint` over all
//! events that replaces the tables.

use std::collections::BTreeMap;

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::causal::{CausalModel, EventKind, PrincipleName, SpacetimeEvent};
use crate::error::{Error, Result};
use crate::model::{ExactModel, FloatModel, HvModel};
use crate::phenomenon::{ExactPhenomenon, FloatPhenomenon, Phenomenon};
use crate::properties::PropertyName;
use crate::quantum::{angles, born_phenomenon, singlet, werner, TwoQubitState};
use crate::scalar::{Probability, Rational, Scalar};
use crate::scenario::Scenario;

pub const FORMAT_VERSION: i64 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    format: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scenario: Option<RawScenario>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phenomenon: Option<RawPhenomenon>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hv_model: Option<RawHvModel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quantum: Option<RawQuantum>,
    #[serde(skip_serializing_if = "Option::is_none")]
    causal: Option<RawCausal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    analysis: Option<AnalysisBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    settings: [usize; 2],
    outcomes: [usize; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    preparation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhenomenon {
    table: Vec<Probability>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHvModel {
    prior: Vec<Probability>,
    response: Vec<RawResponse>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawResponse {
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    table: Vec<Probability>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum RawState {
    Name(String),
    Density(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuantum {
    state: RawState,
    alice: Vec<f64>,
    bob: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEvent {
    label: String,
    t: f64,
    x: f64,
    kind: EventKind,
    #[serde(default = "two")]
    arity: usize,
}

fn two() -> usize {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCausal {
    events: Vec<RawEvent>,
    #[serde(default)]
    edges: Vec<[String; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    joint: Option<Vec<Probability>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    cpt: BTreeMap<String, BTreeMap<String, Vec<Probability>>>,
}

/// Optional directives.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub properties: Option<Vec<PropertyName>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub principles: Option<Vec<PrincipleName>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Table {
    Exact(ExactPhenomenon),
    Float(FloatPhenomenon),
}

impl Table {
    pub fn scenario(&self) -> &Scenario {
        match self {
            Table::Exact(p) => p.scenario(),
            Table::Float(p) => p.scenario(),
        }
    }

    pub fn to_float(&self) -> FloatPhenomenon {
        match self {
            Table::Exact(p) => p.to_float(),
            Table::Float(p) => p.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum HvBlock {
    Exact(ExactModel),
    Float(FloatModel),
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Singlet,
    Werner(f64),
    /// Row-major density matrix.
    Density(Vec<[f64; 2]>),
}

impl StateSpec {
    pub fn state(&self) -> Result<TwoQubitState> {
        match self {
            StateSpec::Singlet => Ok(singlet()),
            StateSpec::Werner(v) => werner(*v),
            StateSpec::Density(entries) => {
                if entries.len() != 16 {
                    return Err(Error::InvalidState(format!("{} density entries, expected 16", entries.len())));
                }
                TwoQubitState::new(Matrix4::from_fn(|r, c| {
                    let [re, im] = entries[r * 4 + c];
                    Complex64::new(re, im)
                }))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumBlock {
    pub state: StateSpec,
    pub alice: Vec<f64>,
    pub bob: Vec<f64>,
}

impl QuantumBlock {
    pub fn phenomenon(&self) -> Result<FloatPhenomenon> {
        born_phenomenon(&self.state.state()?, &angles(&self.alice), &angles(&self.bob))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Phenomenon(Table),
    HvModel(HvBlock),
    Quantum(QuantumBlock),
    Causal(CausalModel),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioFile {
    pub body: Body,
    pub analysis: AnalysisBlock,
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Parses and validates a scenario file.
pub fn parse(text: &str) -> Result<ScenarioFile> {
    let raw: RawFile = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| position(text, s.start));
        Error::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    match raw.format {
        Some(FORMAT_VERSION) => {}
        Some(v) => return Err(Error::UnknownVersion(v)),
        None => {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "missing `format` key".into(),
            })
        }
    }
    let primary = [
        raw.phenomenon.is_some(),
        raw.hv_model.is_some(),
        raw.quantum.is_some(),
        raw.causal.is_some(),
    ];
    if primary.iter().filter(|&&b| b).count() != 1 {
        return Err(Error::InvalidScenario(
            "expected exactly one of [phenomenon], [hv_model], [quantum], [causal]".into(),
        ));
    }
    let scenario = match &raw.scenario {
        Some(s) => Scenario::with_preparation(
            s.settings[0],
            s.settings[1],
            s.outcomes[0],
            s.outcomes[1],
            s.preparation.clone().unwrap_or_else(|| "c".into()),
        )?,
        None => Scenario::chsh(),
    };
    let body = if let Some(p) = raw.phenomenon {
        Body::Phenomenon(table(scenario, p.table)?)
    } else if let Some(m) = raw.hv_model {
        Body::HvModel(hv_model(scenario, m)?)
    } else if let Some(q) = raw.quantum {
        Body::Quantum(quantum(q)?)
    } else {
        Body::Causal(causal(raw.causal.expect("one block present"))?)
    };
    Ok(ScenarioFile {
        body,
        analysis: raw.analysis.unwrap_or_default(),
    })
}

fn all_exact(values: &[&Probability]) -> Result<bool> {
    let exact = values.iter().filter(|p| p.is_exact()).count();
    if exact != 0 && exact != values.len() {
        return Err(Error::InvalidProbability("table mixes exact (string) and floating entries".into()));
    }
    Ok(exact == values.len())
}

fn exact(values: Vec<Probability>) -> Vec<Rational> {
    values
        .into_iter()
        .map(|p| match p {
            Probability::Exact(r) => r,
            Probability::Float(_) => unreachable!("checked by all_exact"),
        })
        .collect()
}

fn floats(values: Vec<Probability>) -> Vec<f64> {
    values.iter().map(Probability::to_f64).collect()
}

fn table(scenario: Scenario, values: Vec<Probability>) -> Result<Table> {
    if all_exact(&values.iter().collect::<Vec<_>>())? {
        Ok(Table::Exact(Phenomenon::new(scenario, exact(values))?))
    } else {
        Ok(Table::Float(Phenomenon::new(scenario, floats(values))?))
    }
}

fn hv_model(scenario: Scenario, raw: RawHvModel) -> Result<HvBlock> {
    let every: Vec<&Probability> = raw.prior.iter().chain(raw.response.iter().flat_map(|r| &r.table)).collect();
    let is_exact = all_exact(&every)?;
    let labels: Vec<String> = raw
        .response
        .iter()
        .enumerate()
        .map(|(i, r)| r.label.clone().unwrap_or_else(|| format!("λ{i}")))
        .collect();
    let tables: Vec<Vec<Probability>> = raw.response.into_iter().map(|r| r.table).collect();
    Ok(if is_exact {
        HvBlock::Exact(HvModel::new(
            scenario,
            labels,
            exact(raw.prior),
            tables.into_iter().map(exact).collect(),
        )?)
    } else {
        HvBlock::Float(HvModel::new(
            scenario,
            labels,
            floats(raw.prior),
            tables.into_iter().map(floats).collect(),
        )?)
    })
}

fn quantum(raw: RawQuantum) -> Result<QuantumBlock> {
    let state = match raw.state {
        RawState::Name(s) if s == "singlet" => StateSpec::Singlet,
        RawState::Name(s) => match s.strip_prefix("werner:") {
            Some(v) => StateSpec::Werner(
                v.trim()
                    .parse()
                    .map_err(|_| Error::InvalidState(format!("bad visibility in `{s}`")))?,
            ),
            None => return Err(Error::InvalidState(format!("unknown state `{s}`"))),
        },
        RawState::Density(d) => StateSpec::Density(d),
    };
    let block = QuantumBlock {
        state,
        alice: raw.alice,
        bob: raw.bob,
    };
    block.phenomenon()?;
    Ok(block)
}

fn causal(raw: RawCausal) -> Result<CausalModel> {
    let arity: Vec<usize> = raw.events.iter().map(|e| e.arity).collect();
    let events: Vec<SpacetimeEvent> = raw
        .events
        .into_iter()
        .map(|e| SpacetimeEvent::new(e.label, e.t, e.x, e.kind))
        .collect();
    let edges: Vec<(&str, &str)> = raw.edges.iter().map(|[u, v]| (u.as_str(), v.as_str())).collect();
    let mut model = CausalModel::new(events, arity, &edges)?;
    for (label, rows) in raw.cpt {
        let i = model.index_of(&label)?;
        let parents = model.parents(i).to_vec();
        let mut table = vec![None; model.cpt_rows(i)];
        for (key, row) in rows {
            let values: Vec<usize> = if key.trim() == "*" {
                Vec::new()
            } else {
                key.split(',')
                    .map(|v| v.trim().parse::<usize>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::InvalidCausalModel(format!("bad row key `{key}` for `{label}`")))?
            };
            if values.len() != parents.len() || values.iter().zip(&parents).any(|(&v, &p)| v >= model.arity()[p]) {
                return Err(Error::InvalidCausalModel(format!(
                    "row key `{key}` does not match the parents of `{label}`"
                )));
            }
            let r = values.iter().zip(&parents).fold(0, |acc, (&v, &p)| acc * model.arity()[p] + v);
            table[r] = Some(floats(row));
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(r, row)| row.ok_or_else(|| Error::InvalidCausalModel(format!("table for `{label}` lacks row {r}"))))
            .collect::<Result<Vec<_>>>()?;
        model.set_cpt_at(i, table)?;
    }
    if let Some(joint) = raw.joint {
        model.set_observed_joint(floats(joint))?;
    }
    Ok(model)
}

fn probs<T: Scalar>(values: &[T]) -> Vec<Probability> {
    values.iter().map(Scalar::to_probability).collect()
}

fn raw_scenario(s: &Scenario) -> RawScenario {
    RawScenario {
        settings: [s.n_settings_alice, s.n_settings_bob],
        outcomes: [s.n_outcomes_alice, s.n_outcomes_bob],
        preparation: Some(s.preparation.clone()),
    }
}

fn raw_hv<T: Scalar>(m: &HvModel<T>) -> RawHvModel {
    RawHvModel {
        prior: probs(m.prior()),
        response: m
            .labels()
            .iter()
            .zip(m.responses())
            .map(|(l, r)| RawResponse {
                label: Some(l.clone()),
                table: probs(r),
            })
            .collect(),
    }
}

fn row_key(model: &CausalModel, i: usize, row: usize) -> String {
    let parents = model.parents(i);
    if parents.is_empty() {
        return "*".into();
    }
    let mut vals = vec![0; parents.len()];
    let mut rest = row;
    for (k, &p) in parents.iter().enumerate().rev() {
        vals[k] = rest % model.arity()[p];
        rest /= model.arity()[p];
    }
    vals.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn raw_causal(m: &CausalModel) -> RawCausal {
    let events = m
        .events()
        .iter()
        .zip(m.arity())
        .map(|(e, &arity)| RawEvent {
            label: e.label.clone(),
            t: e.t,
            x: e.x,
            kind: e.kind,
            arity,
        })
        .collect();
    let edges = m
        .edges()
        .into_iter()
        .map(|(u, v)| [m.label(u).to_string(), m.label(v).to_string()])
        .collect();
    let cpt = (0..m.len())
        .filter_map(|i| {
            m.cpt(i).map(|rows| {
                let table = rows
                    .iter()
                    .enumerate()
                    .map(|(r, row)| (row_key(m, i, r), probs(row)))
                    .collect();
                (m.label(i).to_string(), table)
            })
        })
        .collect();
    RawCausal {
        events,
        edges,
        joint: m.observed_joint().map(probs),
        cpt,
    }
}

impl ScenarioFile {
    /// Canonical text: every default spelled out, labels and tables in
    /// normal form. Parsing the output gives back an equal file.
    pub fn to_toml(&self) -> String {
        let mut raw = RawFile {
            format: Some(FORMAT_VERSION),
            scenario: None,
            phenomenon: None,
            hv_model: None,
            quantum: None,
            causal: None,
            analysis: (self.analysis != AnalysisBlock::default()).then(|| self.analysis.clone()),
        };
        match &self.body {
            Body::Phenomenon(t) => {
                raw.scenario = Some(raw_scenario(t.scenario()));
                raw.phenomenon = Some(RawPhenomenon {
                    table: match t {
                        Table::Exact(p) => probs(p.table()),
                        Table::Float(p) => probs(p.table()),
                    },
                });
            }
            Body::HvModel(m) => {
                let (s, hv) = match m {
                    HvBlock::Exact(m) => (m.scenario(), raw_hv(m)),
                    HvBlock::Float(m) => (m.scenario(), raw_hv(m)),
                };
                raw.scenario = Some(raw_scenario(s));
                raw.hv_model = Some(hv);
            }
            Body::Quantum(q) => {
                raw.quantum = Some(RawQuantum {
                    state: match &q.state {
                        StateSpec::Singlet => RawState::Name("singlet".into()),
                        StateSpec::Werner(v) => RawState::Name(format!("werner:{v:?}")),
                        StateSpec::Density(d) => RawState::Density(d.clone()),
                    },
                    alice: q.alice.clone(),
                    bob: q.bob.clone(),
                });
            }
            Body::Causal(m) => raw.causal = Some(raw_causal(m)),
        }
        toml::to_string(&raw).expect("file schema serializes")
    }
}
