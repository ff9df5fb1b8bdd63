//! Bisects the Werner visibility at which the Born table leaves the local
//! polytope, and compares with the CHSH crossing 2√2·v = 2.
//!
//!     cargo run --example werner_threshold

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

use bellkit::polytope::membership_float;
use bellkit::quantum::{angles, born_phenomenon, max_abs_chsh, werner};

fn main() -> bellkit::Result<()> {
    let (alice, bob) = (angles(&[0.0, FRAC_PI_2]), angles(&[FRAC_PI_4, 3.0 * FRAC_PI_4]));
    let member = |v: f64| -> bellkit::Result<bool> {
        Ok(membership_float(&born_phenomenon(&werner(v)?, &alice, &bob)?)?.1.member)
    };

    for k in 0..=10 {
        let v = k as f64 / 10.0;
        let f = born_phenomenon(&werner(v)?, &alice, &bob)?;
        let chsh = max_abs_chsh(&f)?.map_or(0.0, |e| e.value.abs());
        println!("v = {v:.1}  |CHSH| = {chsh:.4}  member = {}", member(v)?);
    }

    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if member(mid)? { lo = mid } else { hi = mid }
    }
    println!("v* = {:.6}   1/√2 = {:.6}", 0.5 * (lo + hi), 1.0 / SQRT_2);
    Ok(())
}
