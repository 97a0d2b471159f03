//! Searches for a basepoint whose `G_r` is at most the surface mean of `F_r`
//! and compares its ball with the lower bound that such a point guarantees.
//!
//! `cargo run --release --example rich_disk`

use cone_systole::bounds::prop_end_ball_bound;
use cone_systole::functionals::{ball_area_formula, find_rich_disk};
use cone_systole::surface::make_staircase_surface;

fn main() -> cone_systole::Result<()> {
    let s = make_staircase_surface(2)?;
    let r = 0.45;
    let rep = find_rich_disk(&s, r, 1000, 3)?;
    let bound = prop_end_ball_bound(s.euler_characteristic(), s.area(), r)?;
    let area = ball_area_formula(&s, &rep.basepoint, r)?.area;
    println!(
        "basepoint {:?} after {} samples",
        rep.basepoint, rep.sample_count
    );
    println!("G_r = {:.7} <= mean F_r = {:.7}", rep.g, rep.average_bound);
    println!("ball area {area:.7} >= bound {bound:.7}");
    Ok(())
}
