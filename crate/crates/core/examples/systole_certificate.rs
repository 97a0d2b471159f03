//! Systoles: lattice reduction for tori, enumeration with a cutoff for
//! everything else, and an independent check of each witness.
//!
//! `cargo run --release --example systole_certificate`

use cone_systole::geometry::Vec2;
use cone_systole::surface::{
    hexagonal_torus, make_square_klein_bottle, make_staircase_surface, make_two_cone_decagon,
};
use cone_systole::systole::{enumerate_systole, systole, torus_systole, validate_witness};

fn main() -> cone_systole::Result<()> {
    let lat = torus_systole(Vec2::new(3.0, 1.0), Vec2::new(5.0, 2.0))?;
    println!(
        "lattice (3,1),(5,2): systole {} ({:?})",
        lat.value, lat.witness
    );

    let cases = [
        ("torus-hex", hexagonal_torus()),
        ("klein 2x3", make_square_klein_bottle(2.0, 3.0)?),
        ("staircase g=2", make_staircase_surface(2)?),
        ("staircase g=3", make_staircase_surface(3)?),
        ("two-cone decagon", make_two_cone_decagon()?),
    ];
    for (name, s) in &cases {
        let rep = systole(s)?;
        let err = validate_witness(s, &rep)?;
        println!(
            "{name:<17} systole {:.6} [{}] cutoff {:?}, {} candidates, witness error {err:.1e}",
            rep.value, rep.status, rep.cutoff, rep.enumeration_count
        );
    }

    let s = make_staircase_surface(2)?;
    println!(
        "cutoff 0.9 on staircase g=2: {}",
        enumerate_systole(&s, 0.9).unwrap_err()
    );
    Ok(())
}
