//! Born-rule table of the singlet at the CHSH-optimal angles and every
//! CHSH value it yields.
//!
//!     cargo run --example chsh_tsirelson

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

use bellkit::quantum::{angles, born_phenomenon, chsh_table, correlator, max_abs_chsh, singlet};

fn main() -> bellkit::Result<()> {
    let alice = angles(&[0.0, FRAC_PI_2]);
    let bob = angles(&[FRAC_PI_4, 3.0 * FRAC_PI_4]);
    let f = born_phenomenon(&singlet(), &alice, &bob)?;

    for a in 0..2 {
        for b in 0..2 {
            println!("E({a},{b}) = {:+.6}", correlator(&f, a, b)?);
        }
    }
    for e in chsh_table(&f)? {
        println!("CHSH a=({},{}) b=({},{}) = {:+.6}", e.a1, e.a2, e.b1, e.b2, e.value);
    }
    let best = max_abs_chsh(&f)?.expect("two settings per side");
    println!("max |CHSH| = {:.12}  (2√2 = {:.12})", best.value.abs(), 2.0 * SQRT_2);
    Ok(())
}
