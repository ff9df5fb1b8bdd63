use serde::Serialize;

use crate::causal::{LemmaReport, PrincipleVerdict, ReconcileReport};
use crate::properties::{PropertyVerdict, WitnessCell};
use crate::scalar::Probability;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightEntry {
    /// Outcome per setting, Alice then Bob.
    pub strategy: String,
    pub weight: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateEntry {
    pub coefficients: Vec<String>,
    pub bound: String,
    pub value: String,
    /// Re-derived by brute force over every vertex.
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipEntry {
    pub member: bool,
    /// The input was floating point and was rationalized before solving.
    pub rationalized: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub weights: Vec<WeightEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_abs_chsh: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChshRow {
    pub a1: usize,
    pub a2: usize,
    pub b1: usize,
    pub b2: usize,
    pub value: Probability,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FineCheck {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub support: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    pub holds: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub properties: Vec<PropertyVerdict>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub principles: Vec<PrincipleVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub membership: Option<MembershipEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub chsh: Vec<ChshRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub fine: Vec<FineCheck>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub lemmas: Vec<LemmaReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reconcile: Option<ReconcileReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            input_digest: None,
            seed: None,
            scenario: None,
            holds: true,
            properties: Vec::new(),
            principles: Vec::new(),
            membership: None,
            chsh: Vec::new(),
            fine: Vec::new(),
            lemmas: Vec::new(),
            reconcile: None,
            timing_ms: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.holds {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Aligned plain-text rendering for a terminal.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut head = vec![vec!["command".to_string(), self.command.clone()]];
        if let Some(d) = &self.input_digest {
            head.push(vec!["input sha256".into(), d.clone()]);
        }
        if let Some(s) = &self.scenario {
            head.push(vec!["scenario".into(), s.clone()]);
        }
        if let Some(s) = self.seed {
            head.push(vec!["seed".into(), s.to_string()]);
        }
        out += &columns(&head);

        if !self.properties.is_empty() {
            let rows: Vec<Vec<String>> = self
                .properties
                .iter()
                .map(|v| {
                    let w = v
                        .witness
                        .as_ref()
                        .map(|w| format!("{}: {} vs {}", location(&w.at), w.lhs, w.rhs))
                        .unwrap_or_default();
                    vec![v.property.to_string(), verdict(v.holds), w]
                })
                .collect();
            section(&mut out, "properties", &rows);
        }
        if !self.principles.is_empty() {
            let rows: Vec<Vec<String>> = self.principles.iter().map(principle_row).collect();
            section(&mut out, "principles", &rows);
        }
        if let Some(m) = &self.membership {
            let mut rows = vec![vec!["member".to_string(), m.member.to_string()]];
            if m.rationalized {
                rows.push(vec!["rationalized".into(), "true".into()]);
            }
            for w in &m.weights {
                rows.push(vec![format!("weight {}", w.strategy), w.weight.clone()]);
            }
            if let Some(c) = &m.certificate {
                rows.push(vec!["certificate".into(), format!("[{}]", c.coefficients.join(", "))]);
                rows.push(vec!["vertex bound".into(), c.bound.clone()]);
                rows.push(vec!["value on table".into(), c.value.clone()]);
                rows.push(vec!["verified".into(), c.verified.to_string()]);
            }
            if let Some(v) = m.max_abs_chsh {
                rows.push(vec!["max |CHSH|".into(), format!("{v:.10}")]);
            }
            section(&mut out, "membership", &rows);
        }
        if !self.chsh.is_empty() {
            let rows: Vec<Vec<String>> = self
                .chsh
                .iter()
                .map(|r| {
                    vec![
                        format!("a=({},{}) b=({},{})", r.a1, r.a2, r.b1, r.b2),
                        match &r.value {
                            Probability::Float(v) => format!("{v:.10}"),
                            p => p.to_string(),
                        },
                    ]
                })
                .collect();
            section(&mut out, "chsh", &rows);
        }
        if !self.fine.is_empty() {
            let rows: Vec<Vec<String>> = self
                .fine
                .iter()
                .map(|c| {
                    vec![
                        c.name.clone(),
                        verdict(c.holds),
                        c.support.map(|s| format!("support {s}")).unwrap_or_default(),
                    ]
                })
                .collect();
            section(&mut out, "fine", &rows);
        }
        if !self.lemmas.is_empty() {
            let rows: Vec<Vec<String>> = self
                .lemmas
                .iter()
                .map(|l| {
                    let ante: Vec<&str> = l.lemma.antecedents.iter().map(|p| p.as_str()).collect();
                    vec![
                        format!("lemma {}", l.lemma.id),
                        format!("{} => {}", ante.join(" + "), l.lemma.consequent),
                        format!("{} counterexamples / {} tested", l.counterexamples, l.tested),
                        format!("({} trials)", l.trials),
                    ]
                })
                .collect();
            section(&mut out, "lemmas", &rows);
        }
        if let Some(r) = &self.reconcile {
            let mut rows: Vec<Vec<String>> = r.postulates.iter().map(principle_row).collect();
            if let Some(b) = r.bell_local {
                rows.push(vec!["bell_local".into(), b.to_string(), String::new()]);
            }
            if let Some(v) = r.max_abs_chsh {
                rows.push(vec!["max |CHSH|".into(), format!("{v:.10}"), String::new()]);
            }
            section(&mut out, "reconcile", &rows);
        }
        if let Some(t) = self.timing_ms {
            out += &format!("\ntime {t:.1} ms\n");
        }
        out += &format!("\nresult {}\n", if self.holds { "HOLDS" } else { "FAILS" });
        out
    }
}

fn location(at: &WitnessCell) -> String {
    let lam = |l: &Option<usize>| l.map(|l| format!("λ#{l} ")).unwrap_or_default();
    match at {
        WitnessCell::Entry { lambda, cell } => {
            format!("{}a={} b={} x={} y={}", lam(lambda), cell.a, cell.b, cell.x, cell.y)
        }
        WitnessCell::Marginal {
            lambda,
            side,
            outcome,
            local_setting,
            remote_settings,
        } => format!(
            "{}{side:?} outcome {outcome} at setting {local_setting}, remote {} vs {}",
            lam(lambda),
            remote_settings.0,
            remote_settings.1
        ),
    }
}

fn verdict(holds: bool) -> String {
    if holds { "holds" } else { "FAILS" }.to_string()
}

fn principle_row(v: &PrincipleVerdict) -> Vec<String> {
    let w = v
        .witness
        .as_ref()
        .map(|w| {
            let mut s = format!("{} / {}", w.left.join(","), w.right.join(","));
            if !w.given.is_empty() {
                s += &format!(" | {}", w.given.join(","));
            }
            format!("{s}  gap {:.3e}", w.gap)
        })
        .unwrap_or_default();
    vec![v.principle.to_string(), verdict(v.holds), w]
}

fn section(out: &mut String, title: &str, rows: &[Vec<String>]) {
    out.push('\n');
    out.push_str(title);
    out.push('\n');
    for line in columns(rows).lines() {
        out.push_str("  ");
        out.push_str(line);
        out.push('\n');
    }
}

fn columns(rows: &[Vec<String>]) -> String {
    let n = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..n)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let mut line = String::new();
        for (c, cell) in r.iter().enumerate() {
            line += cell;
            if c + 1 < r.len() {
                line += &" ".repeat(widths[c] - cell.chars().count() + 2);
            }
        }
        out += line.trim_end();
        out.push('\n');
    }
    out
}
