use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the number of joint assignments enumerated.
pub const DEFAULT_STATE_CAP: u128 = 10_000_000;

const CPT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    FreeChoice,
    Outcome,
    Latent,
    Preparation,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::FreeChoice => "free_choice",
            EventKind::Outcome => "outcome",
            EventKind::Latent => "latent",
            EventKind::Preparation => "preparation",
        }
    }
}

impl std::str::FromStr for EventKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [EventKind::FreeChoice, EventKind::Outcome, EventKind::Latent, EventKind::Preparation]
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidCausalModel(format!("unknown event kind `{s}`")))
    }
}

/// A labeled point of 1+1 Minkowski space (light speed 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacetimeEvent {
    pub label: String,
    pub t: f64,
    pub x: f64,
    pub kind: EventKind,
}

impl SpacetimeEvent {
    pub fn new(label: impl Into<String>, t: f64, x: f64, kind: EventKind) -> Self {
        SpacetimeEvent {
            label: label.into(),
            t,
            x,
            kind,
        }
    }
}

/// `e1` lies in the past light cone of `e2`, boundary included.
pub fn in_past_lightcone(e1: &SpacetimeEvent, e2: &SpacetimeEvent) -> bool {
    e1.t < e2.t && (e2.x - e1.x).abs() <= e2.t - e1.t
}

/// Neither event is in the other's past light cone and they are distinct points.
pub fn spacelike(e1: &SpacetimeEvent, e2: &SpacetimeEvent) -> bool {
    !in_past_lightcone(e1, e2) && !in_past_lightcone(e2, e1) && (e1.t != e2.t || e1.x != e2.x)
}

/// DAG over spacetime events with finite-valued variables.
///
/// A conditional table lists one row per assignment of the parents (parents
/// in event order, the last one varying fastest); each row is a distribution
/// over the node's values. Alternatively a full joint distribution can be
/// supplied, which then takes precedence over the tables. That is how
/// phenomena with no underlying Markov model are represented.
#[derive(Debug, Clone, PartialEq)]
pub struct CausalModel {
    events: Vec<SpacetimeEvent>,
    arity: Vec<usize>,
    parents: Vec<Vec<usize>>,
    cpts: Vec<Option<Vec<Vec<f64>>>>,
    observed: Option<Vec<f64>>,
}

impl CausalModel {
    pub fn new(events: Vec<SpacetimeEvent>, arity: Vec<usize>, edges: &[(&str, &str)]) -> Result<Self> {
        let index = |l: &str| {
            events
                .iter()
                .position(|e| e.label == l)
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))
        };
        let edges = edges
            .iter()
            .map(|(u, v)| Ok((index(u)?, index(v)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(events, arity, &edges)
    }

    pub fn from_indices(events: Vec<SpacetimeEvent>, arity: Vec<usize>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = events.len();
        if arity.len() != n {
            return Err(Error::InvalidCausalModel(format!("{} arities for {n} events", arity.len())));
        }
        let mut seen = std::collections::HashSet::new();
        for e in &events {
            if !seen.insert(e.label.as_str()) {
                return Err(Error::InvalidCausalModel(format!("duplicate label `{}`", e.label)));
            }
            if !e.t.is_finite() || !e.x.is_finite() {
                return Err(Error::InvalidCausalModel(format!("non-finite coordinates for `{}`", e.label)));
            }
        }
        if let Some(i) = arity.iter().position(|&k| k == 0) {
            return Err(Error::InvalidCausalModel(format!("`{}` has arity 0", events[i].label)));
        }
        let mut parents = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidCausalModel(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::InvalidCausalModel(format!("self-loop on `{}`", events[u].label)));
            }
            if !parents[v].contains(&u) {
                parents[v].push(u);
            }
        }
        parents.iter_mut().for_each(|p| p.sort_unstable());
        let model = CausalModel {
            events,
            arity,
            parents,
            cpts: vec![None; n],
            observed: None,
        };
        if let Some(cycle_at) = model.find_cycle() {
            return Err(Error::InvalidCausalModel(format!(
                "edge set has a cycle through `{}`",
                model.events[cycle_at].label
            )));
        }
        Ok(model)
    }

    fn find_cycle(&self) -> Option<usize> {
        let n = self.len();
        let mut indegree: Vec<usize> = self.parents.iter().map(Vec::len).collect();
        let children = self.children();
        let mut stack: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut visited = 0;
        while let Some(u) = stack.pop() {
            visited += 1;
            for &c in &children[u] {
                indegree[c] -= 1;
                if indegree[c] == 0 {
                    stack.push(c);
                }
            }
        }
        (visited < n).then(|| (0..n).find(|&i| indegree[i] > 0).expect("cycle node"))
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> &[SpacetimeEvent] {
        &self.events
    }

    pub fn event(&self, i: usize) -> &SpacetimeEvent {
        &self.events[i]
    }

    pub fn arity(&self) -> &[usize] {
        &self.arity
    }

    pub fn label(&self, i: usize) -> &str {
        &self.events[i].label
    }

    pub fn labels(&self, set: &[usize]) -> Vec<String> {
        set.iter().map(|&i| self.events[i].label.clone()).collect()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.events
            .iter()
            .position(|e| e.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn indices_of(&self, labels: &[&str]) -> Result<Vec<usize>> {
        labels.iter().map(|l| self.index_of(l)).collect()
    }

    pub fn parents(&self, i: usize) -> &[usize] {
        &self.parents[i]
    }

    pub fn children(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.len()];
        for (v, ps) in self.parents.iter().enumerate() {
            for &u in ps {
                out[u].push(v);
            }
        }
        out
    }

    /// Edges `(cause, effect)` sorted by cause, then effect.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .parents
            .iter()
            .enumerate()
            .flat_map(|(v, ps)| ps.iter().map(move |&u| (u, v)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.parents[v].contains(&u)
    }

    /// `anc[i][j]` is true iff `i` is a proper ancestor of `j`.
    pub fn ancestor_matrix(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        let mut anc = vec![vec![false; n]; n];
        for j in 0..n {
            let mut stack: Vec<usize> = self.parents[j].clone();
            while let Some(u) = stack.pop() {
                if !anc[u][j] {
                    anc[u][j] = true;
                    stack.extend(self.parents[u].iter().copied());
                }
            }
        }
        anc
    }

    /// Some free choice has parents.
    pub fn superdeterministic_candidate(&self) -> bool {
        (0..self.len()).any(|i| self.events[i].kind == EventKind::FreeChoice && !self.parents[i].is_empty())
    }

    pub fn cpt(&self, i: usize) -> Option<&[Vec<f64>]> {
        self.cpts[i].as_deref()
    }

    pub fn observed_joint(&self) -> Option<&[f64]> {
        self.observed.as_deref()
    }

    /// Number of parent assignments of node `i`.
    pub fn cpt_rows(&self, i: usize) -> usize {
        self.parents[i].iter().map(|&p| self.arity[p]).product()
    }

    pub fn set_cpt(&mut self, label: &str, rows: Vec<Vec<f64>>) -> Result<()> {
        let i = self.index_of(label)?;
        self.set_cpt_at(i, rows)
    }

    pub fn set_cpt_at(&mut self, i: usize, rows: Vec<Vec<f64>>) -> Result<()> {
        let label = &self.events[i].label;
        if rows.len() != self.cpt_rows(i) {
            return Err(Error::InvalidCausalModel(format!(
                "table for `{label}` has {} rows, expected {}",
                rows.len(),
                self.cpt_rows(i)
            )));
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != self.arity[i] {
                return Err(Error::InvalidCausalModel(format!(
                    "row {r} of `{label}` has {} entries, expected {}",
                    row.len(),
                    self.arity[i]
                )));
            }
            if row.iter().any(|p| !p.is_finite() || *p < -CPT_TOL || *p > 1.0 + CPT_TOL) {
                return Err(Error::InvalidProbability(format!("row {r} of `{label}`: {row:?}")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > CPT_TOL {
                return Err(Error::NonNormalized(format!("row {r} of `{label}` sums to {sum}")));
            }
        }
        self.cpts[i] = Some(rows);
        Ok(())
    }

    pub fn with_cpt(mut self, label: &str, rows: Vec<Vec<f64>>) -> Result<Self> {
        self.set_cpt(label, rows)?;
        Ok(self)
    }

    /// Replaces the Markov factorization by an explicit joint distribution
    /// over all events (first event most significant).
    pub fn set_observed_joint(&mut self, probs: Vec<f64>) -> Result<()> {
        let size = self.state_count();
        if probs.len() as u128 != size {
            return Err(Error::InvalidCausalModel(format!(
                "joint has {} entries, expected {size}",
                probs.len()
            )));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < -CPT_TOL) {
            return Err(Error::InvalidProbability("negative or non-finite joint entry".into()));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > CPT_TOL {
            return Err(Error::NonNormalized(format!("joint sums to {sum}")));
        }
        self.observed = Some(probs);
        Ok(())
    }

    pub fn state_count(&self) -> u128 {
        self.arity
            .iter()
            .try_fold(1u128, |acc, &k| acc.checked_mul(k as u128))
            .unwrap_or(u128::MAX)
    }

    pub fn joint_distribution(&self) -> Result<Joint> {
        self.joint_distribution_with_cap(DEFAULT_STATE_CAP)
    }

    /// Markov product of the conditional tables over every assignment.
    pub fn joint_distribution_with_cap(&self, cap: u128) -> Result<Joint> {
        let count = self.state_count();
        if count > cap {
            return Err(Error::CapExceeded { count, cap });
        }
        let layout = Layout::new(self.arity.clone());
        if let Some(p) = &self.observed {
            return Ok(Joint {
                layout,
                probs: p.clone(),
            });
        }
        let tables: Vec<&Vec<Vec<f64>>> = (0..self.len())
            .map(|i| self.cpts[i].as_ref().ok_or_else(|| Error::MissingCpt(self.events[i].label.clone())))
            .collect::<Result<_>>()?;
        let mut probs = vec![0.0; count as usize];
        for (s, slot) in probs.iter_mut().enumerate() {
            let mut p = 1.0;
            for (i, table) in tables.iter().enumerate() {
                let mut row = 0;
                for &q in &self.parents[i] {
                    row = row * self.arity[q] + layout.value(s, q);
                }
                p *= table[row][layout.value(s, i)];
                if p == 0.0 {
                    break;
                }
            }
            *slot = p;
        }
        Ok(Joint { layout, probs })
    }
}

/// Mixed-radix indexing of full assignments, first variable most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    arity: Vec<usize>,
    strides: Vec<usize>,
}

impl Layout {
    pub fn new(arity: Vec<usize>) -> Self {
        let mut strides = vec![1; arity.len()];
        for i in (0..arity.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * arity[i + 1];
        }
        Layout { arity, strides }
    }

    pub fn value(&self, state: usize, var: usize) -> usize {
        (state / self.strides[var]) % self.arity[var]
    }

    pub fn arity(&self) -> &[usize] {
        &self.arity
    }
}

/// A joint distribution over every variable of a model.
#[derive(Debug, Clone, PartialEq)]
pub struct Joint {
    layout: Layout,
    probs: Vec<f64>,
}

impl Joint {
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Distribution of `vars` (first listed most significant).
    pub fn marginal(&self, vars: &[usize]) -> Vec<f64> {
        let size: usize = vars.iter().map(|&v| self.layout.arity[v]).product();
        let mut out = vec![0.0; size];
        for (s, &p) in self.probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let mut k = 0;
            for &v in vars {
                k = k * self.layout.arity[v] + self.layout.value(s, v);
            }
            out[k] += p;
        }
        out
    }

    fn size(&self, vars: &[usize]) -> usize {
        vars.iter().map(|&v| self.layout.arity[v]).product()
    }

    /// `max |P(x,y|z) − P(x|z)·P(y|z)|` over assignments with `P(z) > 0`.
    pub fn dependence_gap(&self, x: &[usize], y: &[usize], z: &[usize]) -> f64 {
        let (nx, ny, nz) = (self.size(x), self.size(y), self.size(z));
        let vars: Vec<usize> = z.iter().chain(x).chain(y).copied().collect();
        let m = self.marginal(&vars);
        let mut gap: f64 = 0.0;
        for zi in 0..nz {
            let block = &m[zi * nx * ny..(zi + 1) * nx * ny];
            let pz: f64 = block.iter().sum();
            if pz <= 0.0 {
                continue;
            }
            let px: Vec<f64> = (0..nx).map(|i| block[i * ny..(i + 1) * ny].iter().sum::<f64>() / pz).collect();
            let py: Vec<f64> = (0..ny).map(|j| (0..nx).map(|i| block[i * ny + j]).sum::<f64>() / pz).collect();
            for i in 0..nx {
                for j in 0..ny {
                    gap = gap.max((block[i * ny + j] / pz - px[i] * py[j]).abs());
                }
            }
        }
        gap
    }

    pub fn independent(&self, x: &[usize], y: &[usize], z: &[usize], tol: f64) -> bool {
        self.dependence_gap(x, y, z) <= tol
    }

    /// `1 − min_s max_o P(o | s)` over assignments `s` of `given` with
    /// positive probability: zero iff `target` is a function of `given`.
    pub fn indeterminacy(&self, target: usize, given: &[usize]) -> f64 {
        let nt = self.layout.arity[target];
        let ns = self.size(given);
        let vars: Vec<usize> = given.iter().copied().chain([target]).collect();
        let m = self.marginal(&vars);
        let mut worst: f64 = 0.0;
        for s in 0..ns {
            let block = &m[s * nt..(s + 1) * nt];
            let ps: f64 = block.iter().sum();
            if ps <= 0.0 {
                continue;
            }
            let top = block.iter().cloned().fold(0.0, f64::max) / ps;
            worst = worst.max(1.0 - top);
        }
        worst
    }
}
