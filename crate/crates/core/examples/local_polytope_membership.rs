//! Exact membership in the local polytope: a mixture of two strategies gets
//! weights back, the singlet and the PR box get a separating functional.
//!
//!     cargo run --example local_polytope_membership

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use bellkit::phenomenon::ExactPhenomenon;
use bellkit::polytope::{enumerate_strategies, membership, membership_float, strategy_phenomenon, MembershipResult};
use bellkit::quantum::{angles, born_phenomenon, singlet};
use bellkit::scalar::{format_rational, Rational};
use bellkit::scenario::Scenario;

fn show(name: &str, f: &ExactPhenomenon, r: &MembershipResult) -> bellkit::Result<()> {
    println!("{name}: member = {}", r.member);
    if let Some(w) = &r.weights {
        for (i, x) in w {
            println!("  strategy #{i:<2} weight {}", format_rational(x));
        }
    }
    if let Some(c) = &r.certificate {
        let form = c.correlator_form(f.scenario())?;
        let joint: Vec<String> = form.joint.iter().flatten().map(format_rational).collect();
        println!("  correlator coefficients [{}] + constant {}", joint.join(", "), format_rational(&form.constant));
        println!("  bound {} on vertices, {} on the table, verified {}", c.bound, c.value, c.verify(f)?);
    }
    Ok(())
}

fn main() -> bellkit::Result<()> {
    let s = Scenario::chsh();
    let v = enumerate_strategies(&s)?;
    let mix = ExactPhenomenon::mixture(&[
        (Rational::new(3.into(), 10.into()), &strategy_phenomenon(&v[3], &s)?),
        (Rational::new(7.into(), 10.into()), &strategy_phenomenon(&v[10], &s)?),
    ])?;
    show("0.3·s3 + 0.7·s10", &mix, &membership(&mix)?)?;

    let half = Rational::new(1.into(), 2.into());
    let pr = ExactPhenomenon::from_fn(s.clone(), |c| {
        if (c.x ^ c.y) == (c.a & c.b) { half.clone() } else { Rational::from_integer(0.into()) }
    })?;
    show("PR box", &pr, &membership(&pr)?)?;

    let singlet = born_phenomenon(&singlet(), &angles(&[0.0, FRAC_PI_2]), &angles(&[FRAC_PI_4, 3.0 * FRAC_PI_4]))?;
    let (exact, r) = membership_float(&singlet)?;
    show("singlet (rationalized)", &exact, &r)?;
    Ok(())
}
