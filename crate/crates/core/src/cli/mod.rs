//! The `bellkit` command line: read a scenario file, run one command,
//! print a text report and optionally write a JSON one.
//!
//! Exit status is 0 when everything requested holds, 1 when something
//! fails and 2 on any error.

pub mod file;
pub mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use crate::causal::{
    operational_model, reconcile, verify_lemma, Analysis, CausalModel, PrincipleName, LEMMAS,
    MAX_FAITHFULNESS_NODES,
};
use crate::error::{Error, Result};
use crate::model::HvModel;
use crate::phenomenon::{ExactPhenomenon, Phenomenon};
use crate::polytope::{
    determinize, enumerate_strategies, membership, model_from_weights, MembershipResult, RATIONALIZE_DENOM,
};
use crate::properties::{
    is_factorizable, is_local, is_locally_causal, is_predetermined, is_predictable, is_signal_local, PropertyName,
    PropertyVerdict,
};
use crate::quantum::{chsh_table, max_abs_chsh};
use crate::scalar::{format_rational, Scalar, DEFAULT_TOL};
use crate::scenario::Scenario;

pub use file::{parse, AnalysisBlock, Body, HvBlock, QuantumBlock, ScenarioFile, StateSpec, Table};
pub use report::Report;

#[derive(Debug, Parser)]
#[command(name = "bellkit", version, about = "Bell-locality, hidden-variable and causal-model checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Refuse to run randomized commands without --seed.
    #[arg(long, global = true)]
    pub deterministic: bool,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    /// Tolerance for floating-point comparisons (exact tables ignore it).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Every applicable property of a table or model.
    Check { file: PathBuf },
    /// Local-polytope membership with weights or a separating certificate.
    Membership { file: PathBuf },
    /// CHSH value of every setting quadruple.
    Chsh { file: PathBuf },
    /// Deterministic and locally causal models converted into each other.
    Fine { file: PathBuf },
    /// Causal postulates and principles of a causal model.
    Causal { file: PathBuf },
    /// Randomized verification of the lemmas.
    Lemmas {
        #[arg(long)]
        id: Option<u8>,
        #[arg(long, default_value_t = 500)]
        trials: u64,
    },
    /// Which of free choice, relativistic causality, common causes and
    /// decorrelating explanation fail.
    Reconcile { file: PathBuf },
}

/// Parses `args` (program name first), runs, prints, and returns the exit
/// status.
pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            print!("{}", report.to_text());
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, report.to_json()) {
                    eprintln!("error[E_IO]: cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            2
        }
    }
}

struct Input {
    file: ScenarioFile,
    digest: String,
}

fn load(path: &Path) -> Result<Input> {
    let bytes = std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Error::Parse {
        line: 1,
        column: 1,
        message: "input is not UTF-8".into(),
    })?;
    Ok(Input {
        file: parse(&text)?,
        digest: hex::encode(Sha256::digest(&bytes)),
    })
}

/// Runs the command without printing anything.
pub fn execute(cli: &Cli) -> Result<Report> {
    let start = Instant::now();
    let mut report = match &cli.command {
        Command::Lemmas { id, trials } => lemmas(cli, *id, *trials)?,
        Command::Check { file }
        | Command::Membership { file }
        | Command::Chsh { file }
        | Command::Fine { file }
        | Command::Causal { file }
        | Command::Reconcile { file } => {
            let input = load(file)?;
            let tol = cli.tol.or(input.file.analysis.tol).unwrap_or(DEFAULT_TOL);
            let mut r = match &cli.command {
                Command::Check { .. } => check(&input.file, tol)?,
                Command::Membership { .. } => membership_report(&input.file)?,
                Command::Chsh { .. } => chsh(&input.file, tol)?,
                Command::Fine { .. } => fine(&input.file, tol)?,
                Command::Causal { .. } => causal(&input.file, tol)?,
                _ => reconcile_report(&input.file, tol)?,
            };
            r.input_digest = Some(input.digest);
            r
        }
    };
    if cli.timing {
        report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(report)
}

fn table_of(body: &Body) -> Result<Table> {
    Ok(match body {
        Body::Phenomenon(t) => t.clone(),
        Body::HvModel(HvBlock::Exact(m)) => Table::Exact(m.predicted_phenomenon()?),
        Body::HvModel(HvBlock::Float(m)) => Table::Float(m.predicted_phenomenon()?),
        Body::Quantum(q) => Table::Float(q.phenomenon()?),
        Body::Causal(m) => Table::Float(crate::causal::induced_phenomenon(m)?),
    })
}

fn exact_table(t: &Table) -> Result<ExactPhenomenon> {
    match t {
        Table::Exact(p) => Ok(p.clone()),
        Table::Float(p) => ExactPhenomenon::rationalized(p, RATIONALIZE_DENOM),
    }
}

fn bell_local_verdict(t: &Table) -> Result<PropertyVerdict> {
    let member = membership(&exact_table(t)?)?.member;
    Ok(PropertyVerdict {
        property: PropertyName::BellLocal,
        holds: member,
        witness: None,
    })
}

fn phenomenon_verdicts<T: Scalar>(p: &Phenomenon<T>, tol: f64) -> Vec<PropertyVerdict> {
    vec![is_predictable(p, tol), is_signal_local(p, tol)]
}

fn model_verdicts<T: Scalar>(m: &HvModel<T>, tol: f64) -> Vec<PropertyVerdict> {
    vec![
        is_predetermined(m, tol),
        is_local(m, tol),
        is_locally_causal(m, tol),
        is_factorizable(m, tol),
    ]
}

/// Predictability is reported but only decides the exit status when
/// asked for explicitly; most interesting tables are not predictable.
fn check(file: &ScenarioFile, tol: f64) -> Result<Report> {
    let mut r = Report::new("check");
    let t = table_of(&file.body)?;
    r.scenario = Some(t.scenario().to_string());
    let mut verdicts = match &file.body {
        Body::HvModel(HvBlock::Exact(m)) => model_verdicts(m, tol),
        Body::HvModel(HvBlock::Float(m)) => model_verdicts(m, tol),
        _ => Vec::new(),
    };
    verdicts.extend(match &t {
        Table::Exact(p) => phenomenon_verdicts(p, tol),
        Table::Float(p) => phenomenon_verdicts(p, tol),
    });
    verdicts.push(bell_local_verdict(&t)?);
    let requested: Vec<PropertyName> = match &file.analysis.properties {
        Some(ps) => {
            if let Some(p) = ps.iter().find(|p| !verdicts.iter().any(|v| v.property == **p)) {
                return Err(Error::Usage(format!("property `{p}` does not apply to this input")));
            }
            ps.clone()
        }
        None => verdicts
            .iter()
            .map(|v| v.property)
            .filter(|&p| p != PropertyName::Predictability)
            .collect(),
    };
    r.holds = verdicts.iter().filter(|v| requested.contains(&v.property)).all(|v| v.holds);
    r.properties = verdicts;
    Ok(r)
}

fn strategy_names(scenario: &Scenario) -> Result<Vec<String>> {
    let digits = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
    Ok(enumerate_strategies(scenario)?
        .iter()
        .map(|s| format!("A{}|B{}", digits(&s.alice), digits(&s.bob)))
        .collect())
}

fn membership_entry(t: &Table, exact: &ExactPhenomenon, result: &MembershipResult) -> Result<report::MembershipEntry> {
    let weights = match &result.weights {
        Some(w) => {
            let names = strategy_names(exact.scenario())?;
            w.iter()
                .map(|(i, v)| report::WeightEntry {
                    strategy: names[*i].clone(),
                    weight: format_rational(v),
                })
                .collect()
        }
        None => Vec::new(),
    };
    let certificate = match &result.certificate {
        Some(c) => Some(report::CertificateEntry {
            coefficients: c.coefficients.iter().map(format_rational).collect(),
            bound: format_rational(&c.bound),
            value: format_rational(&c.value),
            verified: c.verify(exact)?,
        }),
        None => None,
    };
    let chsh = match t {
        Table::Exact(p) => max_abs_chsh(p).ok().flatten().map(|e| e.value.to_f64().abs()),
        Table::Float(p) => max_abs_chsh(p).ok().flatten().map(|e| e.value.abs()),
    };
    Ok(report::MembershipEntry {
        member: result.member,
        rationalized: matches!(t, Table::Float(_)),
        weights,
        certificate,
        max_abs_chsh: chsh,
    })
}

fn membership_report(file: &ScenarioFile) -> Result<Report> {
    let mut r = Report::new("membership");
    let t = table_of(&file.body)?;
    r.scenario = Some(t.scenario().to_string());
    let exact = exact_table(&t)?;
    let result = membership(&exact)?;
    r.holds = result.member;
    r.membership = Some(membership_entry(&t, &exact, &result)?);
    Ok(r)
}

fn chsh_rows<T: Scalar>(p: &Phenomenon<T>, tol: f64) -> Result<(Vec<report::ChshRow>, bool)> {
    let two = T::from_ratio(2, 1);
    let mut holds = true;
    let rows = chsh_table(p)?
        .into_iter()
        .map(|e| {
            let abs = e.value.abs_diff(&T::zero());
            holds &= abs <= two || (!T::EXACT && abs.to_f64() <= 2.0 + tol);
            report::ChshRow {
                a1: e.a1,
                a2: e.a2,
                b1: e.b1,
                b2: e.b2,
                value: e.value.to_probability(),
            }
        })
        .collect();
    Ok((rows, holds))
}

/// Holds when no quadruple exceeds 2 in absolute value.
fn chsh(file: &ScenarioFile, tol: f64) -> Result<Report> {
    let mut r = Report::new("chsh");
    let t = table_of(&file.body)?;
    r.scenario = Some(t.scenario().to_string());
    (r.chsh, r.holds) = match &t {
        Table::Exact(p) => chsh_rows(p, tol)?,
        Table::Float(p) => chsh_rows(p, tol)?,
    };
    Ok(r)
}

fn fine_model<T: Scalar>(m: &HvModel<T>, tol: f64, checks: &mut Vec<report::FineCheck>) -> Result<()> {
    let tol = if T::EXACT { 0.0 } else { tol };
    let d = determinize(m, tol)?;
    let target = m.predicted_phenomenon()?;
    let check = |name: &str, holds: bool, support: Option<usize>| report::FineCheck {
        name: name.into(),
        holds,
        support,
    };
    checks.push(check("determinized predetermined", is_predetermined(&d, tol).holds, Some(d.support_size())));
    checks.push(check("determinized local", is_local(&d, tol).holds, None));
    checks.push(check("determinized reproduces", d.reproduces(&target, tol)?, None));
    Ok(())
}

fn fine(file: &ScenarioFile, tol: f64) -> Result<Report> {
    let mut r = Report::new("fine");
    let mut checks = Vec::new();
    match &file.body {
        Body::HvModel(HvBlock::Exact(m)) => fine_model(m, tol, &mut checks)?,
        Body::HvModel(HvBlock::Float(m)) => fine_model(m, tol, &mut checks)?,
        _ => {}
    }
    let t = table_of(&file.body)?;
    r.scenario = Some(t.scenario().to_string());
    let exact = exact_table(&t)?;
    let result = membership(&exact)?;
    checks.push(report::FineCheck {
        name: "phenomenon in local polytope".into(),
        holds: result.member,
        support: result.weights.as_ref().map(Vec::len),
    });
    if result.member {
        let model = model_from_weights(&result, exact.scenario())?;
        checks.push(report::FineCheck {
            name: "strategy mixture reproduces".into(),
            holds: model.reproduces(&exact, 0.0)? && is_locally_causal(&model, 0.0).holds,
            support: Some(model.support_size()),
        });
    }
    r.holds = checks.iter().all(|c| c.holds);
    r.fine = checks;
    Ok(r)
}

fn causal_model(file: &ScenarioFile) -> Result<&CausalModel> {
    match &file.body {
        Body::Causal(m) => Ok(m),
        _ => Err(Error::Usage("this command needs a [causal] block".into())),
    }
}

/// Without tables or a joint only the structural principles can be
/// decided; the faithfulness check is skipped above its size cap.
fn default_principles(m: &CausalModel) -> Vec<PrincipleName> {
    let statistical = m.joint_distribution().is_ok();
    PrincipleName::ALL
        .into_iter()
        .filter(|p| statistical || p.is_structural())
        .filter(|p| *p != PrincipleName::NoFineTuning || m.len() <= MAX_FAITHFULNESS_NODES)
        .collect()
}

fn causal(file: &ScenarioFile, tol: f64) -> Result<Report> {
    let mut r = Report::new("causal");
    let m = causal_model(file)?;
    let principles = file.analysis.principles.clone().unwrap_or_else(|| default_principles(m));
    let a = Analysis::new(m, tol);
    r.principles = principles.iter().map(|&p| a.check(p)).collect::<Result<_>>()?;
    r.holds = r.principles.iter().all(|v| v.holds);
    Ok(r)
}

fn lemmas(cli: &Cli, id: Option<u8>, trials: u64) -> Result<Report> {
    let seed = match (cli.seed, cli.deterministic) {
        (Some(s), _) => s,
        (None, false) => 0,
        (None, true) => return Err(Error::Usage("--deterministic requires --seed".into())),
    };
    let mut r = Report::new("lemmas");
    r.seed = Some(seed);
    let ids: Vec<u8> = match id {
        Some(i) => vec![i],
        None => LEMMAS.iter().map(|l| l.id).collect(),
    };
    r.lemmas = ids
        .into_iter()
        .map(|i| verify_lemma(i, trials, seed))
        .collect::<Result<_>>()?;
    r.holds = r.lemmas.iter().all(|l| l.holds());
    Ok(r)
}

/// Non-causal inputs are read operationally: the table with uniform
/// settings and a preparation event in the common past.
fn reconcile_report(file: &ScenarioFile, tol: f64) -> Result<Report> {
    let mut r = Report::new("reconcile");
    let owned;
    let m = match &file.body {
        Body::Causal(m) => m,
        body => {
            owned = operational_model(&table_of(body)?.to_float(), true)?;
            &owned
        }
    };
    let rep = reconcile(m, tol)?;
    r.holds = rep.all_hold();
    r.reconcile = Some(rep);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn deterministic_needs_seed() {
        let cli = Cli::try_parse_from(["bellkit", "lemmas", "--deterministic", "--id", "1", "--trials", "5"]).unwrap();
        assert!(matches!(execute(&cli), Err(Error::Usage(_))));
    }
}
