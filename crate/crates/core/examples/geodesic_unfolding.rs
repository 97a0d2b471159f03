//! Unfolding on the genus-2 staircase surface: the development of a ball,
//! cone-point visibility, distances, saddle connections and a traced geodesic.
//!
//! `cargo run --example geodesic_unfolding`

use cone_systole::surface::{make_staircase_surface, SurfacePoint, UnitTangent};
use cone_systole::systole::saddle_connections;
use cone_systole::unfold::{
    develop_ball, distance, reach_cone_points, trace_geodesic, UnfoldOptions,
};

fn main() -> cone_systole::Result<()> {
    let s = make_staircase_surface(2)?;
    let x = SurfacePoint::new(0, 0.3, 0.4);

    let dev = develop_ball(&s, &x, 0.45)?;
    println!(
        "ball of radius 0.45 at {:?}: {} polygon copies",
        x.coords,
        dev.nodes.len()
    );

    for c in reach_cone_points(&s, &x, 0.9)? {
        println!(
            "cone point {} at distance {:.6} (visible: {})",
            c.cone_point, c.distance, c.visible
        );
    }

    let y = SurfacePoint::new(0, 2.5, 0.5);
    println!("d(x, y) = {:?}", distance(&s, &x, &y, 3.0)?);

    let conns = saddle_connections(&s, 1.5, &UnfoldOptions::default())?;
    let shortest = conns.iter().map(|c| c.length).fold(f64::INFINITY, f64::min);
    println!(
        "{} saddle connections up to length 1.5, shortest {shortest}",
        conns.len()
    );

    let u = UnitTangent::from_angle(x, 0.3);
    let t = trace_geodesic(&s, &u, 10.0)?;
    println!(
        "geodesic of length 10 from x: {} edge crossings, ends at {:?} ({:?})",
        t.crossings,
        t.endpoint().coords,
        t.end
    );
    Ok(())
}
