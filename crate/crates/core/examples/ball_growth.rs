//! Ball area `πr² − G_r(x)` against Monte Carlo, next to the universal lower
//! bound, for a basepoint at distance 0.3 from the cone point.
//!
//! `cargo run --release --example ball_growth`

use std::f64::consts::FRAC_PI_4;

use cone_systole::bounds::prop_end_ball_bound;
use cone_systole::functionals::ball_area_formula;
use cone_systole::surface::make_staircase_surface;
use cone_systole::unfold::{ball_area_mc, point_near_cone};

fn main() -> cone_systole::Result<()> {
    let s = make_staircase_surface(2)?;
    let x = point_near_cone(&s, 0, 0.3, FRAC_PI_4)?.base;
    println!(
        "{:>5} {:>11} {:>11} {:>9} {:>11}",
        "r", "formula", "mc", "stderr", "bound"
    );
    for k in 1..=9 {
        let r = 0.05 * k as f64;
        let formula = ball_area_formula(&s, &x, r)?;
        let mc = ball_area_mc(&s, &x, r, 200_000, 11)?;
        let bound = prop_end_ball_bound(s.euler_characteristic(), s.area(), r)?;
        println!(
            "{r:>5.2} {:>11.7} {:>11.7} {:>9.2e} {:>11.7}",
            formula.area, mc.estimate, mc.stderr, bound
        );
    }
    Ok(())
}
