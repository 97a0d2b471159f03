//! Monte Carlo integral of `F_r` over staircase surfaces against
//! `2πχ · πr⁴/12`.
//!
//! `cargo run --release --example liouville_identity`

use cone_systole::functionals::average_f_identity_check;
use cone_systole::surface::make_staircase_surface;

fn main() -> cone_systole::Result<()> {
    for g in [2, 3] {
        let s = make_staircase_surface(g)?;
        for r in [0.2, 0.3, 0.4] {
            let c = average_f_identity_check(&s, r, 100_000, 7)?;
            println!(
                "g={g} r={r}: estimate {:+.7} ± {:.7}, exact {:+.7}, z = {:+.2}",
                c.estimate,
                c.stderr,
                c.exact,
                c.z_score()
            );
        }
    }
    Ok(())
}
