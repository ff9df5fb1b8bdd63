//! The nine acceptance criteria, each timed against its budget. Prints one
//! PASS/FAIL line per criterion and exits nonzero if any fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};

use bellkit::causal::{
    bell_dag, check_free_choice, check_local_agency, check_local_causality, check_no_fine_tuning,
    check_no_superdeterminism, check_relativistic_embedding, classical_bell_model, markov_soundness,
    tuned_pr_box_model, verify_lemma, BellVariant, WitnessKind,
};
use bellkit::implication::check_implication;
use bellkit::model::HvModel;
use bellkit::phenomenon::ExactPhenomenon;
use bellkit::polytope::{
    determinize, enumerate_strategies, membership, membership_float, model_from_weights, strategy_phenomenon,
};
use bellkit::properties::{is_local, is_locally_causal, is_predetermined, is_signal_local, PropertyName};
use bellkit::quantum::{
    angles, born_phenomenon, max_abs_chsh, random_pure_state, random_state, singlet, werner, BlochSetting,
};
use bellkit::sampling::{random_locally_causal_model, trial_rng};
use bellkit::scalar::Rational;
use bellkit::scenario::Scenario;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn tsirelson_dirs() -> (Vec<BlochSetting>, Vec<BlochSetting>) {
    (angles(&[0.0, FRAC_PI_2]), angles(&[FRAC_PI_4, 3.0 * FRAC_PI_4]))
}

/// CHSH in ±1 arithmetic straight from the response maps.
fn chsh_of_maps(alice: &[usize], bob: &[usize], a1: usize, a2: usize, b1: usize, b2: usize) -> i64 {
    let s = |o: usize| if o == 0 { 1 } else { -1 };
    let e = |a: usize, b: usize| s(alice[a]) * s(bob[b]);
    e(a1, b1) + e(a1, b2) + e(a2, b1) - e(a2, b2)
}

fn tsirelson() -> Outcome {
    let (al, bo) = tsirelson_dirs();
    let ph = born_phenomenon(&singlet(), &al, &bo).map_err(|e| e.to_string())?;
    let best = max_abs_chsh(&ph).map_err(|e| e.to_string())?.ok_or("no quadruple")?;
    let chsh = best.value.abs();
    ensure((chsh - 2.0 * SQRT_2).abs() <= 1e-9, format!("|CHSH| = {chsh}"))?;

    let (exact, result) = membership_float(&ph).map_err(|e| e.to_string())?;
    ensure(!result.member, "singlet table reported as member")?;
    let cert = result.certificate.ok_or("no certificate")?;
    ensure(cert.bound == Rational::from_integer(2.into()), format!("bound {}", cert.bound))?;

    // Independent replay of the certificate over all 16 vertices.
    let s = exact.scenario().clone();
    let mut vertex_max: Option<Rational> = None;
    for st in enumerate_strategies(&s).map_err(|e| e.to_string())? {
        let v = strategy_phenomenon(&st, &s).map_err(|e| e.to_string())?;
        let val: Rational = v.table().iter().zip(&cert.coefficients).map(|(p, g)| p * g).sum();
        vertex_max = Some(match vertex_max {
            Some(m) if m >= val => m,
            _ => val,
        });
    }
    let on_table: Rational = exact.table().iter().zip(&cert.coefficients).map(|(p, g)| p * g).sum();
    ensure(vertex_max == Some(cert.bound.clone()), "bound is not the vertex maximum")?;
    ensure(on_table > cert.bound, "certificate does not separate the table")?;
    Ok(format!("|CHSH| = {chsh:.12}, certificate bound {}", cert.bound))
}

fn local_bound() -> Outcome {
    let s = Scenario::chsh();
    let strategies = enumerate_strategies(&s).map_err(|e| e.to_string())?;
    ensure(strategies.len() == 16, format!("{} strategies", strategies.len()))?;
    let mut best = Rational::zero();
    let mut oracle = 0i64;
    for st in &strategies {
        let ph = strategy_phenomenon(st, &s).map_err(|e| e.to_string())?;
        for e in bellkit::quantum::chsh_table(&ph).map_err(|e| e.to_string())? {
            let v = e.value.abs();
            let direct = chsh_of_maps(&st.alice, &st.bob, e.a1, e.a2, e.b1, e.b2);
            ensure(e.value == Rational::from_integer(direct.into()), "CHSH disagrees with ±1 arithmetic")?;
            oracle = oracle.max(direct.abs());
            if v > best {
                best = v;
            }
        }
    }
    ensure(best == Rational::from_integer(2.into()), format!("max |CHSH| = {best}"))?;
    ensure(oracle == 2, format!("oracle max {oracle}"))?;
    Ok(format!("max |CHSH| over 16 strategies = {best}"))
}

fn fine_round_trip() -> Outcome {
    let s = Scenario::chsh();
    for trial in 0..200 {
        let m = random_locally_causal_model(&mut trial_rng(3, trial), &s);
        let f = m.predicted_phenomenon().map_err(|e| e.to_string())?;
        let d = determinize(&m, 0.0).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(is_predetermined(&d, 0.0).holds, format!("trial {trial}: not predetermined"))?;
        ensure(is_local(&d, 0.0).holds, format!("trial {trial}: not local"))?;
        ensure(d.reproduces(&f, 0.0).map_err(|e| e.to_string())?, format!("trial {trial}: determinize drifted"))?;
        let r = membership(&f).map_err(|e| e.to_string())?;
        ensure(r.member, format!("trial {trial}: not a member"))?;
        let w = model_from_weights(&r, &s).map_err(|e| e.to_string())?;
        ensure(w.reproduces(&f, 0.0).map_err(|e| e.to_string())?, format!("trial {trial}: weights drifted"))?;
    }
    Ok("200 models: determinize and LP weights both reproduce exactly".into())
}

fn implication_suite() -> Outcome {
    use PropertyName::*;
    let a = check_implication(&[Locality, Predetermination], LocalCausality, 1000, 11).map_err(|e| e.to_string())?;
    ensure(a.holds(), format!("{} counterexamples to locality+predetermination", a.counterexamples))?;
    let b = check_implication(&[LocalCausality], BellLocal, 1000, 12).map_err(|e| e.to_string())?;
    ensure(b.holds(), format!("{} counterexamples to local causality => bell_local", b.counterexamples))?;
    let c = check_implication(&[LocalCausality], Predetermination, 1000, 13).map_err(|e| e.to_string())?;
    ensure(!c.holds(), "no counterexample to local causality => predetermination")?;

    let coins = HvModel::single_lambda(&ExactPhenomenon::uniform(Scenario::chsh()));
    ensure(is_locally_causal(&coins, 0.0).holds, "independent coins not locally causal")?;
    ensure(!is_predetermined(&coins, 0.0).holds, "independent coins predetermined")?;
    Ok(format!(
        "0/{} and 0/{} counterexamples; converse refuted ({} found) incl. independent coins",
        a.tested, b.tested, c.counterexamples
    ))
}

fn werner_threshold() -> Outcome {
    let (al, bo) = tsirelson_dirs();
    let member = |v: f64| -> Result<(bool, f64), String> {
        let ph = born_phenomenon(&werner(v).map_err(|e| e.to_string())?, &al, &bo).map_err(|e| e.to_string())?;
        let chsh = max_abs_chsh(&ph).map_err(|e| e.to_string())?.ok_or("no quadruple")?.value.abs();
        Ok((membership_float(&ph).map_err(|e| e.to_string())?.1.member, chsh))
    };
    ensure(member(0.0)?.0 && !member(1.0)?.0, "endpoints do not bracket")?;
    for k in 0..=20 {
        let v = k as f64 / 20.0;
        let (m, chsh) = member(v)?;
        ensure(m == (chsh <= 2.0), format!("v = {v}: member {m} but |CHSH| = {chsh}"))?;
        ensure((chsh - 2.0 * SQRT_2 * v).abs() < 1e-9, format!("v = {v}: CHSH not linear"))?;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-4 {
        let mid = 0.5 * (lo + hi);
        if member(mid)?.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let v = 0.5 * (lo + hi);
    ensure((v - 1.0 / SQRT_2).abs() <= 0.01, format!("v* = {v}"))?;
    Ok(format!("v* = {v:.6}, 1/sqrt2 = {:.6}", 1.0 / SQRT_2))
}

fn born_no_signaling() -> Outcome {
    for trial in 0..1000u64 {
        let mut rng = trial_rng(21, trial);
        let state = if trial % 2 == 0 {
            random_state(&mut rng)
        } else {
            random_pure_state(&mut rng)
        };
        let na = 1 + (trial as usize % 3);
        let nb = 1 + (trial as usize / 3 % 3);
        let al: Vec<_> = (0..na).map(|_| BlochSetting::random(&mut rng)).collect();
        let bo: Vec<_> = (0..nb).map(|_| BlochSetting::random(&mut rng)).collect();
        let ph = born_phenomenon(&state, &al, &bo).map_err(|e| e.to_string())?;
        let v = is_signal_local(&ph, 1e-12);
        ensure(v.holds, format!("trial {trial}: {:?}", v.witness))?;
    }
    Ok("1000 configurations signal-local at 1e-12".into())
}

fn causal_suite() -> Outcome {
    let tol = 1e-9;
    let lc = classical_bell_model(BellVariant::LocalCausal);
    ensure(check_free_choice(&lc).holds, "local_causal: free_choice")?;
    ensure(check_relativistic_embedding(&lc).holds, "local_causal: relativistic embedding")?;
    for (name, v) in [
        ("local_causality", check_local_causality(&lc, tol)),
        ("local_agency", check_local_agency(&lc, tol)),
        ("no_superdeterminism", check_no_superdeterminism(&lc, tol)),
    ] {
        ensure(v.map_err(|e| e.to_string())?.holds, format!("local_causal: {name}"))?;
    }

    let sl = check_relativistic_embedding(&bell_dag(BellVariant::Superluminal));
    let w = sl.witness.ok_or("superluminal variant passes relativistic embedding")?;
    ensure(w.left == ["a"] && w.right == ["B"], format!("superluminal witness {w:?}"))?;

    let sd = classical_bell_model(BellVariant::Superdeterministic);
    ensure(!check_free_choice(&sd).holds, "superdeterministic passes free_choice")?;
    ensure(
        !check_no_superdeterminism(&sd, tol).map_err(|e| e.to_string())?.holds,
        "superdeterministic passes no_superdeterminism",
    )?;

    let pr = tuned_pr_box_model();
    let v = check_no_fine_tuning(&pr, tol).map_err(|e| e.to_string())?;
    let w = v.witness.clone().ok_or("tuned PR box passes no_fine_tuning")?;
    ensure(
        w.kind == WitnessKind::Independence && w.left == ["a"] && w.right == ["B"] && w.given.is_empty(),
        format!("PR witness {w:?}"),
    )?;
    ensure(v.recheck(&pr, tol).map_err(|e| e.to_string())?, "PR witness does not recheck")?;
    Ok("verdicts as expected; PR witness a ⊥ B | ∅".into())
}

fn dsep_soundness() -> Outcome {
    let r = markov_soundness(5, 50, 5, 1e-9).map_err(|e| e.to_string())?;
    ensure(r.dags == 1 + 2 + 6 + 31 + 302, format!("{} DAG classes", r.dags))?;
    ensure(r.violations == 0, format!("{} violations, first {:?}", r.violations, r.first_violation))?;
    Ok(format!("{} DAGs, {} separations, 0 violations", r.dags, r.separations_checked))
}

fn lemma_harness() -> Outcome {
    let mut parts = Vec::new();
    for id in 1..=7 {
        let r = verify_lemma(id, 500, 7).map_err(|e| e.to_string())?;
        ensure(r.holds(), format!("lemma {id}: {} counterexamples", r.counterexamples))?;
        parts.push(format!("L{id} 0/{}", r.tested));
    }
    Ok(parts.join(", "))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 9] = [
        ("1 tsirelson violation", Duration::from_secs(1), tsirelson),
        ("2 local bound", Duration::from_millis(100), local_bound),
        ("3 fine round-trip", Duration::from_secs(30), fine_round_trip),
        ("4 implication suite", Duration::from_secs(60), implication_suite),
        ("5 werner threshold", Duration::from_secs(30), werner_threshold),
        ("6 born no-signaling", Duration::from_secs(10), born_no_signaling),
        ("7 causal principle suite", Duration::from_secs(10), causal_suite),
        ("8 d-separation soundness", Duration::from_secs(300), dsep_soundness),
        ("9 lemma harness", Duration::from_secs(300), lemma_harness),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {detail} [{:.3} s / {:.1} s]",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            budget.as_secs_f64()
        );
    }
    println!("{}/9 criteria passed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
