//! Checks of the causal postulates and principles on a finite model.
//!
//! "Correlated" means a dependence gap above `tol`. Pairs are singletons,
//! and nodes with a single value are ignored as members of a pair since
//! they can correlate with nothing. Candidate screening sets have at most
//! four members.

use std::cell::OnceCell;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::dsep::d_separated_idx;
use super::model::{in_past_lightcone, spacelike, CausalModel, EventKind, Joint};

/// Largest screening set tried.
pub const MAX_SCREEN: usize = 4;
/// Largest model the faithfulness check accepts.
pub const MAX_FAITHFULNESS_NODES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrincipleName {
    CausalArrow,
    RelativisticCausality,
    FreeChoice,
    CommonCauses,
    DecorrelatingExplanation,
    Reichenbach,
    LocalCausality,
    LocalAgency,
    AgentCausation,
    NoSuperdeterminism,
    LocalityPrinciple,
    PredeterminationPrinciple,
    NoFineTuning,
}

impl PrincipleName {
    pub const ALL: [PrincipleName; 13] = [
        PrincipleName::CausalArrow,
        PrincipleName::RelativisticCausality,
        PrincipleName::FreeChoice,
        PrincipleName::CommonCauses,
        PrincipleName::DecorrelatingExplanation,
        PrincipleName::Reichenbach,
        PrincipleName::LocalCausality,
        PrincipleName::LocalAgency,
        PrincipleName::AgentCausation,
        PrincipleName::NoSuperdeterminism,
        PrincipleName::LocalityPrinciple,
        PrincipleName::PredeterminationPrinciple,
        PrincipleName::NoFineTuning,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PrincipleName::CausalArrow => "causal_arrow",
            PrincipleName::RelativisticCausality => "relativistic_causality",
            PrincipleName::FreeChoice => "free_choice",
            PrincipleName::CommonCauses => "common_causes",
            PrincipleName::DecorrelatingExplanation => "decorrelating_explanation",
            PrincipleName::Reichenbach => "reichenbach",
            PrincipleName::LocalCausality => "local_causality",
            PrincipleName::LocalAgency => "local_agency",
            PrincipleName::AgentCausation => "agent_causation",
            PrincipleName::NoSuperdeterminism => "no_superdeterminism",
            PrincipleName::LocalityPrinciple => "locality_principle",
            PrincipleName::PredeterminationPrinciple => "predetermination_principle",
            PrincipleName::NoFineTuning => "no_fine_tuning",
        }
    }

    /// Decided from the graph and coordinates alone.
    pub fn is_structural(self) -> bool {
        matches!(
            self,
            PrincipleName::CausalArrow | PrincipleName::RelativisticCausality | PrincipleName::FreeChoice
        )
    }
}

impl std::fmt::Display for PrincipleName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for PrincipleName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PrincipleName::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::Usage(format!("unknown principle `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// An edge `left → right`; `gap` measures the violation.
    Edge,
    /// `left` and `right` stay dependent given `given`.
    Dependence,
    /// `left ⊥ right | given` holds numerically but not graphically.
    Independence,
    /// `left` is not a function of `given`.
    Indeterminism,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrincipleWitness {
    pub kind: WitnessKind,
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub given: Vec<String>,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrincipleVerdict {
    pub principle: PrincipleName,
    pub holds: bool,
    pub witness: Option<PrincipleWitness>,
}

impl PrincipleVerdict {
    fn pass(principle: PrincipleName) -> Self {
        PrincipleVerdict {
            principle,
            holds: true,
            witness: None,
        }
    }

    fn fail(principle: PrincipleName, witness: PrincipleWitness) -> Self {
        PrincipleVerdict {
            principle,
            holds: false,
            witness: Some(witness),
        }
    }

    /// Re-evaluates the witness from the model alone: the edge exists and
    /// violates the constraint, or the recomputed gap matches and sits on
    /// the failing side of `tol`.
    pub fn recheck(&self, model: &CausalModel, tol: f64) -> Result<bool> {
        let Some(w) = &self.witness else {
            return Ok(self.holds);
        };
        let idx = |ls: &[String]| ls.iter().map(|l| model.index_of(l)).collect::<Result<Vec<_>>>();
        let (left, right, given) = (idx(&w.left)?, idx(&w.right)?, idx(&w.given)?);
        let same = |g: f64| (g - w.gap).abs() <= 1e-12;
        Ok(match w.kind {
            WitnessKind::Edge => {
                let (u, v) = (left[0], right[0]);
                let (eu, ev) = (model.event(u), model.event(v));
                model.has_edge(u, v)
                    && match self.principle {
                        PrincipleName::RelativisticCausality => {
                            !in_past_lightcone(eu, ev) && same((ev.x - eu.x).abs() - (ev.t - eu.t))
                        }
                        PrincipleName::CausalArrow => eu.t >= ev.t && same(eu.t - ev.t),
                        PrincipleName::FreeChoice => ev.kind == EventKind::FreeChoice,
                        _ => false,
                    }
            }
            WitnessKind::Dependence => {
                let g = model.joint_distribution()?.dependence_gap(&left, &right, &given);
                g > tol && same(g)
            }
            WitnessKind::Independence => {
                let g = model.joint_distribution()?.dependence_gap(&left, &right, &given);
                g <= tol && same(g) && !d_separated_idx(model, &left, &right, &given)?
            }
            WitnessKind::Indeterminism => {
                let g = model.joint_distribution()?.indeterminacy(left[0], &given);
                g > tol && same(g)
            }
        })
    }
}

/// All `k`-subsets of `items`, lexicographic in position.
pub fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

/// Shared state for checking several principles on one model: the joint
/// distribution is computed at most once, and only when needed.
pub struct Analysis<'a> {
    model: &'a CausalModel,
    tol: f64,
    anc: Vec<Vec<bool>>,
    joint: OnceCell<Joint>,
}

struct Screening {
    found: bool,
    best: Vec<usize>,
    gap: f64,
}

impl<'a> Analysis<'a> {
    pub fn new(model: &'a CausalModel, tol: f64) -> Self {
        Analysis {
            model,
            tol,
            anc: model.ancestor_matrix(),
            joint: OnceCell::new(),
        }
    }

    pub fn joint(&self) -> Result<&Joint> {
        if let Some(j) = self.joint.get() {
            return Ok(j);
        }
        let j = self.model.joint_distribution()?;
        Ok(self.joint.get_or_init(|| j))
    }

    fn gap(&self, x: &[usize], y: &[usize], z: &[usize]) -> Result<f64> {
        Ok(self.joint()?.dependence_gap(x, y, z))
    }

    fn relevant(&self, i: usize) -> bool {
        self.model.arity()[i] > 1
    }

    fn kind(&self, i: usize) -> EventKind {
        self.model.event(i).kind
    }

    fn nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.model.len()).filter(|&i| self.relevant(i))
    }

    fn choices(&self) -> Vec<usize> {
        self.nodes().filter(|&i| self.kind(i) == EventKind::FreeChoice).collect()
    }

    fn labels(&self, set: &[usize]) -> Vec<String> {
        self.model.labels(set)
    }

    fn dependence(&self, left: &[usize], right: &[usize], given: &[usize], gap: f64) -> PrincipleWitness {
        PrincipleWitness {
            kind: WitnessKind::Dependence,
            left: self.labels(left),
            right: self.labels(right),
            given: self.labels(given),
            gap,
        }
    }

    /// Correlated pairs `i < j` accepted by `keep`, with their gaps.
    fn correlated_pairs(&self, keep: impl Fn(usize, usize) -> bool) -> Result<Vec<(usize, usize, f64)>> {
        let nodes: Vec<usize> = self.nodes().collect();
        let mut out = Vec::new();
        for (k, &i) in nodes.iter().enumerate() {
            for &j in &nodes[k + 1..] {
                if !keep(i, j) {
                    continue;
                }
                let g = self.gap(&[i], &[j], &[])?;
                if g > self.tol {
                    out.push((i, j, g));
                }
            }
        }
        Ok(out)
    }

    fn unrelated(&self, i: usize, j: usize) -> bool {
        !self.anc[i][j] && !self.anc[j][i]
    }

    fn common_ancestors(&self, i: usize, j: usize) -> Vec<usize> {
        (0..self.model.len()).filter(|&k| self.anc[k][i] && self.anc[k][j]).collect()
    }

    /// Nonempty subsets of `candidates` (size ≤ 4, smallest first) tried as
    /// screening sets for `i`, `j`.
    fn screen(&self, i: usize, j: usize, candidates: &[usize], unconditional: f64) -> Result<Screening> {
        let mut best = Screening {
            found: false,
            best: Vec::new(),
            gap: unconditional,
        };
        for k in 1..=MAX_SCREEN.min(candidates.len()) {
            for c in combinations(candidates, k) {
                let g = self.gap(&[i], &[j], &c)?;
                if g <= self.tol {
                    return Ok(Screening {
                        found: true,
                        best: c,
                        gap: g,
                    });
                }
                if g < best.gap {
                    best.best = c;
                    best.gap = g;
                }
            }
        }
        Ok(best)
    }

    pub fn check(&self, principle: PrincipleName) -> Result<PrincipleVerdict> {
        use PrincipleName::*;
        let witness = match principle {
            CausalArrow => self.causal_arrow(),
            RelativisticCausality => self.relativistic_causality(),
            FreeChoice => self.free_choice(),
            CommonCauses => self.common_causes()?,
            DecorrelatingExplanation => self.screening_off(false)?,
            Reichenbach => self.screening_off(true)?,
            LocalCausality => self.local_causality()?,
            LocalAgency => self.choice_independence(|c, v| !in_past_lightcone(self.model.event(c), self.model.event(v)))?,
            AgentCausation => self.choice_independence(|c, v| !self.anc[c][v])?,
            NoSuperdeterminism => self.no_superdeterminism()?,
            LocalityPrinciple => self.locality_principle()?,
            PredeterminationPrinciple => self.predetermination()?,
            NoFineTuning => self.no_fine_tuning()?,
        };
        Ok(match witness {
            Some(w) => PrincipleVerdict::fail(principle, w),
            None => PrincipleVerdict::pass(principle),
        })
    }

    fn edge_witness(&self, u: usize, v: usize, gap: f64) -> PrincipleWitness {
        PrincipleWitness {
            kind: WitnessKind::Edge,
            left: self.labels(&[u]),
            right: self.labels(&[v]),
            given: Vec::new(),
            gap,
        }
    }

    fn causal_arrow(&self) -> Option<PrincipleWitness> {
        self.model.edges().into_iter().find_map(|(u, v)| {
            let (eu, ev) = (self.model.event(u), self.model.event(v));
            (eu.t >= ev.t).then(|| self.edge_witness(u, v, eu.t - ev.t))
        })
    }

    fn relativistic_causality(&self) -> Option<PrincipleWitness> {
        self.model.edges().into_iter().find_map(|(u, v)| {
            let (eu, ev) = (self.model.event(u), self.model.event(v));
            (!in_past_lightcone(eu, ev)).then(|| self.edge_witness(u, v, (ev.x - eu.x).abs() - (ev.t - eu.t)))
        })
    }

    fn free_choice(&self) -> Option<PrincipleWitness> {
        (0..self.model.len())
            .filter(|&i| self.kind(i) == EventKind::FreeChoice)
            .find_map(|i| self.model.parents(i).first().map(|&p| self.edge_witness(p, i, 0.0)))
    }

    fn common_causes(&self) -> Result<Option<PrincipleWitness>> {
        for (i, j, g) in self.correlated_pairs(|i, j| self.unrelated(i, j))? {
            if self.common_ancestors(i, j).is_empty() {
                return Ok(Some(self.dependence(&[i], &[j], &[], g)));
            }
        }
        Ok(None)
    }

    /// With `require_causes`, a pair without common ancestors fails
    /// (Reichenbach); without it such pairs are skipped, leaving only the
    /// demand that available common causes screen off.
    fn screening_off(&self, require_causes: bool) -> Result<Option<PrincipleWitness>> {
        for (i, j, g) in self.correlated_pairs(|i, j| self.unrelated(i, j))? {
            let common = self.common_ancestors(i, j);
            if common.is_empty() && !require_causes {
                continue;
            }
            let s = self.screen(i, j, &common, g)?;
            if !s.found {
                return Ok(Some(self.dependence(&[i], &[j], &s.best, s.gap)));
            }
        }
        Ok(None)
    }

    fn local_causality(&self) -> Result<Option<PrincipleWitness>> {
        let m = self.model;
        for (i, j, g) in self.correlated_pairs(|i, j| spacelike(m.event(i), m.event(j)))? {
            let past: Vec<usize> = (0..m.len())
                .filter(|&k| in_past_lightcone(m.event(k), m.event(i)) && in_past_lightcone(m.event(k), m.event(j)))
                .collect();
            let s = self.screen(i, j, &past, g)?;
            if !s.found {
                return Ok(Some(self.dependence(&[i], &[j], &s.best, s.gap)));
            }
        }
        Ok(None)
    }

    /// Each choice independent of every node in `region`, one at a time and
    /// jointly.
    fn choice_independence(&self, region: impl Fn(usize, usize) -> bool) -> Result<Option<PrincipleWitness>> {
        for c in self.choices() {
            let outside: Vec<usize> = self.nodes().filter(|&v| v != c && region(c, v)).collect();
            for &v in &outside {
                let g = self.gap(&[c], &[v], &[])?;
                if g > self.tol {
                    return Ok(Some(self.dependence(&[c], &[v], &[], g)));
                }
            }
            if outside.len() > 1 {
                let g = self.gap(&[c], &outside, &[])?;
                if g > self.tol {
                    return Ok(Some(self.dependence(&[c], &outside, &[], g)));
                }
            }
        }
        Ok(None)
    }

    fn first_choice_time(&self) -> Option<f64> {
        (0..self.model.len())
            .filter(|&i| self.kind(i) == EventKind::FreeChoice)
            .map(|i| self.model.event(i).t)
            .min_by(f64::total_cmp)
    }

    fn no_superdeterminism(&self) -> Result<Option<PrincipleWitness>> {
        let Some(t0) = self.first_choice_time() else {
            return Ok(None);
        };
        let choices = self.choices();
        let before: Vec<usize> = self
            .nodes()
            .filter(|&v| self.model.event(v).t < t0 && self.kind(v) != EventKind::FreeChoice)
            .collect();
        if choices.is_empty() || before.is_empty() {
            return Ok(None);
        }
        let g = self.gap(&before, &choices, &[])?;
        Ok((g > self.tol).then(|| self.dependence(&before, &choices, &[], g)))
    }

    fn locality_principle(&self) -> Result<Option<PrincipleWitness>> {
        let m = self.model;
        for b in self.choices() {
            let observable: Vec<usize> = self
                .nodes()
                .filter(|&v| v != b && self.kind(v) != EventKind::Latent && spacelike(m.event(v), m.event(b)))
                .collect();
            for a in observable {
                let others: Vec<usize> = self
                    .nodes()
                    .filter(|&v| v != a && v != b && !in_past_lightcone(m.event(b), m.event(v)))
                    .collect();
                let mut sets: Vec<Vec<usize>> = (0..=MAX_SCREEN.min(others.len()))
                    .flat_map(|k| combinations(&others, k))
                    .collect();
                if others.len() > MAX_SCREEN {
                    sets.push(others.clone());
                }
                for s in sets {
                    let g = self.gap(&[a], &[b], &s)?;
                    if g > self.tol {
                        return Ok(Some(self.dependence(&[a], &[b], &s, g)));
                    }
                }
            }
        }
        Ok(None)
    }

    fn predetermination(&self) -> Result<Option<PrincipleWitness>> {
        let m = self.model;
        let t0 = self.first_choice_time();
        for o in self.nodes().filter(|&v| self.kind(v) == EventKind::Outcome) {
            let cut = t0.map_or(m.event(o).t, |t| t.min(m.event(o).t));
            let given: Vec<usize> = self
                .nodes()
                .filter(|&v| v != o && (m.event(v).t < cut || self.kind(v) == EventKind::FreeChoice))
                .collect();
            let g = self.joint()?.indeterminacy(o, &given);
            if g > self.tol {
                return Ok(Some(PrincipleWitness {
                    kind: WitnessKind::Indeterminism,
                    left: self.labels(&[o]),
                    right: Vec::new(),
                    given: self.labels(&given),
                    gap: g,
                }));
            }
        }
        Ok(None)
    }

    fn no_fine_tuning(&self) -> Result<Option<PrincipleWitness>> {
        let n = self.model.len();
        if n > MAX_FAITHFULNESS_NODES {
            return Err(Error::CapExceeded {
                count: n as u128,
                cap: MAX_FAITHFULNESS_NODES as u128,
            });
        }
        let nodes: Vec<usize> = self.nodes().collect();
        for k in 0..nodes.len().saturating_sub(1) {
            for (p, &i) in nodes.iter().enumerate() {
                for &j in &nodes[p + 1..] {
                    let rest: Vec<usize> = nodes.iter().copied().filter(|&v| v != i && v != j).collect();
                    for z in combinations(&rest, k) {
                        let g = self.gap(&[i], &[j], &z)?;
                        if g <= self.tol && !d_separated_idx(self.model, &[i], &[j], &z)? {
                            return Ok(Some(PrincipleWitness {
                                kind: WitnessKind::Independence,
                                left: self.labels(&[i]),
                                right: self.labels(&[j]),
                                given: self.labels(&z),
                                gap: g,
                            }));
                        }
                    }
                }
            }
        }
        Ok(None)
    }
}

pub fn check_principle(model: &CausalModel, principle: PrincipleName, tol: f64) -> Result<PrincipleVerdict> {
    Analysis::new(model, tol).check(principle)
}

/// Every principle in [`PrincipleName::ALL`] order.
pub fn check_all(model: &CausalModel, tol: f64) -> Result<Vec<PrincipleVerdict>> {
    let a = Analysis::new(model, tol);
    PrincipleName::ALL.iter().map(|&p| a.check(p)).collect()
}

pub fn check_causal_arrow(model: &CausalModel) -> PrincipleVerdict {
    check_principle(model, PrincipleName::CausalArrow, 0.0).expect("structural check")
}

/// Every edge points into the future light cone of its cause.
pub fn check_relativistic_embedding(model: &CausalModel) -> PrincipleVerdict {
    check_principle(model, PrincipleName::RelativisticCausality, 0.0).expect("structural check")
}

pub fn check_free_choice(model: &CausalModel) -> PrincipleVerdict {
    check_principle(model, PrincipleName::FreeChoice, 0.0).expect("structural check")
}

pub fn check_common_causes(model: &CausalModel, tol: f64) -> Result<PrincipleVerdict> {
    check_principle(model, PrincipleName::CommonCauses, tol)
}

pub fn check_decorrelating_explanation(model: &CausalModel, tol: f64) -> Result<PrincipleVerdict> {
    check_principle(model, PrincipleName::DecorrelatingExplanation, tol)
}

pub fn check_reichenbach(model: &CausalModel, tol: f64) -> Result<PrincipleVerdict> {
    check_principle(model, PrincipleName::Reichenbach, tol)
}

pub fn check_local_causality(model: &CausalModel, tol: f64) -> Result<PrincipleVerdict> {
    check_principle(model, PrincipleName::LocalCausality, tol)
}

pub fn check_local_agency(model: &CausalModel, tol: f64) -> Result<PrincipleVerdict> {
    check_principle(model, PrincipleName::LocalAgency, tol)
}

pub fn check_agent_causation(model: &CausalModel, tol: f64) -> Result<PrincipleVerdict> {
    check_principle(model, PrincipleName::AgentCausation, tol)
}

pub fn check_no_superdeterminism(model: &CausalModel, tol: f64) -> Result<PrincipleVerdict> {
    check_principle(model, PrincipleName::NoSuperdeterminism, tol)
}

pub fn check_locality_principle(model: &CausalModel, tol: f64) -> Result<PrincipleVerdict> {
    check_principle(model, PrincipleName::LocalityPrinciple, tol)
}

pub fn check_predetermination_principle(model: &CausalModel, tol: f64) -> Result<PrincipleVerdict> {
    check_principle(model, PrincipleName::PredeterminationPrinciple, tol)
}

pub fn check_no_fine_tuning(model: &CausalModel, tol: f64) -> Result<PrincipleVerdict> {
    check_principle(model, PrincipleName::NoFineTuning, tol)
}
