//! Builds the bundled surfaces and prints their combinatorics and curvature.
//!
//! `cargo run --example validate_surfaces`

use std::f64::consts::PI;

use cone_systole::surface::{
    hexagonal_torus, make_square_klein_bottle, make_staircase_surface, make_two_cone_decagon,
    square_torus, ConeSurface,
};

fn show(name: &str, s: &ConeSurface) {
    println!(
        "{name:<16} chi={:>3} area={:<8.4} orientable={:<5} residual={:.1e}",
        s.euler_characteristic(),
        s.area(),
        s.is_orientable(),
        s.gauss_bonnet_residual()
    );
    for v in s.cone_points() {
        println!(
            "    cone point {}: angle {:.4}pi, defect {:.4}pi",
            v.id,
            v.angle / PI,
            v.defect / PI
        );
    }
}

fn main() -> cone_systole::Result<()> {
    show("torus-square", &square_torus());
    show("torus-hex", &hexagonal_torus());
    show("klein-square", &make_square_klein_bottle(1.0, 1.0)?);
    for g in 2..=6 {
        show(&format!("staircase g={g}"), &make_staircase_surface(g)?);
    }
    show("two-cone-decagon", &make_two_cone_decagon()?);
    Ok(())
}
