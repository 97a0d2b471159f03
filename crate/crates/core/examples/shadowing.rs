//! A cone point hidden behind another one. On the two-cone decagon the cone
//! points `p` and `q` are joined by a saddle connection of length 1/5; from a
//! point just behind `p` the geodesic to `q` bends at `p`, so `q` counts in
//! `G_r` but not in `F_r`.
//!
//! `cargo run --release --example shadowing`

use std::f64::consts::TAU;

use cone_systole::functionals::{f_r, g_r};
use cone_systole::surface::make_two_cone_decagon;
use cone_systole::systole::saddle_connections;
use cone_systole::unfold::{point_near_cone, UnfoldOptions};

fn main() -> cone_systole::Result<()> {
    let s = make_two_cone_decagon()?;
    let link = saddle_connections(&s, 0.25, &UnfoldOptions::default())?
        .into_iter()
        .find(|c| c.from != c.to)
        .expect("short saddle connection");
    let p = s.vertex_class(link.from);
    println!("p = {}, q = {}, |pq| = {}", link.from, link.to, link.length);

    let r = 0.45;
    for (label, angle) in [
        ("beside p", link.departure + 1.0),
        ("behind p", link.departure + TAU),
    ] {
        let x = point_near_cone(&s, link.from, 0.1, angle.rem_euclid(p.angle))?.base;
        let f = f_r(&s, &x, r)?;
        let g = g_r(&s, &x, r)?;
        println!(
            "{label}: F = {:.6}, G = {:.6}, F - G = {:.6}",
            f.value,
            g.value,
            f.value - g.value
        );
        for c in &g.decomposition {
            println!(
                "    cone point {} at {:.4}, visible {}",
                c.cone_point, c.distance, c.visible
            );
        }
    }
    Ok(())
}
