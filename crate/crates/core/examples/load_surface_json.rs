//! Reads a surface description from JSON, validates it and writes it back.
//!
//! `cargo run --example load_surface_json -- [PATH]`

use cone_systole::surface::{build_surface, SurfaceDescription};

fn main() {
    let default = concat!(env!("CARGO_MANIFEST_DIR"), "/data/two-cone-decagon.json");
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| default.to_string());
    let text = std::fs::read_to_string(&path).expect("readable file");
    let desc = match SurfaceDescription::from_json(&text) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("{path}: {e}");
            std::process::exit(2);
        }
    };
    println!(
        "{path}: {} polygon(s), exact coordinates: {}",
        desc.polygons.len(),
        desc.is_exact()
    );
    match build_surface(desc) {
        Ok(s) => {
            println!("chi = {}, area = {}", s.euler_characteristic(), s.area());
            println!("{}", s.description().to_json());
        }
        Err(e) => {
            eprintln!("rejected ({}): {e}", e.kind());
            std::process::exit(2);
        }
    }

    let bad = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/edge-length-mismatch.json"
    );
    let desc = SurfaceDescription::from_json(&std::fs::read_to_string(bad).expect("bundled file"))
        .unwrap();
    println!(
        "edge-length-mismatch.json -> {:?}",
        build_surface(desc).unwrap_err()
    );
}
