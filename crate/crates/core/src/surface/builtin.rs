//! Built-in example surfaces.

use super::{
    build_surface, ConeSurface, EdgeRef, GlueMap, Gluing, Scalar, SurfaceDescription,
    SystoleProvenance,
};
use crate::error::{Error, Result};
use crate::geometry::Vec2;

fn pt(x: Scalar, y: Scalar) -> [Scalar; 2] {
    [x, y]
}

fn glue(a: (usize, usize), b: (usize, usize), map: GlueMap) -> Gluing {
    Gluing {
        a: EdgeRef(a.0, a.1),
        b: EdgeRef(b.0, b.1),
        map,
    }
}

/// The torus `R² / (Z v1 + Z v2)` as one parallelogram.
///
/// The systole hint is the shortest lattice vector.
pub fn make_flat_torus(v1: Vec2, v2: Vec2) -> Result<ConeSurface> {
    let report = crate::systole::torus_systole(v1, v2)?;
    let (a, b) = if v1.cross(v2) > 0.0 {
        (v1, v2)
    } else {
        (v2, v1)
    };
    let s = |v: Vec2| pt(Scalar::from_f64(v.x), Scalar::from_f64(v.y));
    let desc = SurfaceDescription {
        polygons: vec![vec![s(Vec2::ZERO), s(a), s(a + b), s(b)]],
        gluings: vec![
            glue((0, 0), (0, 2), GlueMap::Translation),
            glue((0, 1), (0, 3), GlueMap::Translation),
        ],
    };
    Ok(build_surface(desc)?.with_systole_hint(report.value, SystoleProvenance::Lattice))
}

/// Unit square torus.
pub fn square_torus() -> ConeSurface {
    make_flat_torus(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)).expect("square lattice")
}

/// Torus of the hexagonal lattice with unit systole.
pub fn hexagonal_torus() -> ConeSurface {
    make_flat_torus(Vec2::new(1.0, 0.0), Vec2::new(0.5, 3f64.sqrt() / 2.0)).expect("hex lattice")
}

/// Flat Klein bottle from an `a × b` rectangle: the horizontal sides are
/// glued by translation, the vertical sides by a glide reflection.
pub fn make_square_klein_bottle(a: f64, b: f64) -> Result<ConeSurface> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "rectangle sides must be positive (got {a}, {b})"
        )));
    }
    let (x, y) = (Scalar::from_f64(a), Scalar::from_f64(b));
    let zero = || Scalar::int(0);
    let desc = SurfaceDescription {
        polygons: vec![vec![
            pt(zero(), zero()),
            pt(x.clone(), zero()),
            pt(x, y.clone()),
            pt(zero(), y),
        ]],
        gluings: vec![
            glue((0, 0), (0, 2), GlueMap::Translation),
            glue((0, 1), (0, 3), GlueMap::Flip),
        ],
    };
    Ok(build_surface(desc)?.with_systole_hint(a.min(b), SystoleProvenance::Construction))
}

/// Genus-`g` translation surface from the rectangle `[0, 2g−1] × [0, 1]` cut
/// into `4g` unit sides, side `i` glued by translation to side `2g + i`.
pub fn make_staircase_surface(g: i64) -> Result<ConeSurface> {
    if g < 2 {
        return Err(Error::InvalidGenus(g));
    }
    Ok(build_surface(staircase_description(g as usize))?
        .with_systole_hint(1.0, SystoleProvenance::Construction))
}

fn staircase_description(g: usize) -> SurfaceDescription {
    let w = 2 * g - 1;
    let mut poly = Vec::with_capacity(4 * g);
    for k in 0..=w {
        poly.push(pt(Scalar::int(k as i64), Scalar::int(0)));
    }
    for k in (0..=w).rev() {
        poly.push(pt(Scalar::int(k as i64), Scalar::int(1)));
    }
    let gluings = (0..2 * g)
        .map(|i| glue((0, i), (0, 2 * g + i), GlueMap::Translation))
        .collect();
    SurfaceDescription {
        polygons: vec![poly],
        gluings,
    }
}

/// Centrally symmetric decagon with opposite sides glued by translation: a
/// genus-2 surface with two cone points of angle 4π joined by a short edge
/// of length 1/5. The systole hint is certified by enumeration.
pub fn make_two_cone_decagon() -> Result<ConeSurface> {
    let half = [(-1, -15), (1, -15), (11, -10), (16, 0), (11, 10)];
    let mut poly: Vec<[Scalar; 2]> = half
        .iter()
        .map(|&(x, y)| pt(Scalar::ratio(x, 10), Scalar::ratio(y, 10)))
        .collect();
    poly.extend(
        half.iter()
            .map(|&(x, y)| pt(Scalar::ratio(-x, 10), Scalar::ratio(-y, 10))),
    );
    let desc = SurfaceDescription {
        polygons: vec![poly],
        gluings: (0..5)
            .map(|i| glue((0, i), (0, i + 5), GlueMap::Translation))
            .collect(),
    };
    let surface = build_surface(desc)?;
    let report = crate::systole::enumerate_systole(&surface, 3.0)?;
    Ok(surface.with_systole_hint(report.value, SystoleProvenance::Certified))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn staircase_data() {
        for g in 2..=6 {
            let s = make_staircase_surface(g).unwrap();
            assert_eq!(s.euler_characteristic(), 2 - 2 * g);
            assert_eq!(s.area(), (2 * g - 1) as f64);
            let cones: Vec<_> = s.cone_points().collect();
            assert_eq!(cones.len(), 1);
            assert_eq!(cones[0].quarter_turns, Some(4 * (2 * g - 1)));
            assert_eq!(cones[0].defect, -4.0 * PI * (g - 1) as f64);
            assert_eq!(s.gauss_bonnet_residual(), 0.0);
            assert!(s.is_orientable() && s.is_nonpositively_curved());
        }
        assert_eq!(
            make_staircase_surface(1).unwrap_err(),
            Error::InvalidGenus(1)
        );
    }

    #[test]
    fn tori() {
        let t = hexagonal_torus();
        assert!((t.area() - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(!t.is_exact());
        assert!(t.gauss_bonnet_residual().abs() < 1e-9);
        assert_eq!(t.systole_hint().unwrap().value, 1.0);
        let swapped =
            make_flat_torus(Vec2::new(0.5, 3f64.sqrt() / 2.0), Vec2::new(1.0, 0.0)).unwrap();
        assert_eq!(swapped.area(), t.area());
        assert_eq!(swapped.systole_hint(), t.systole_hint());
        let big = make_flat_torus(Vec2::new(2.0, 0.0), Vec2::new(0.0, 2.0)).unwrap();
        assert_eq!(big.area(), 4.0);
        assert_eq!(big.systole_hint().unwrap().value, 2.0);
        assert_eq!(
            make_flat_torus(Vec2::new(1.0, 1.0), Vec2::new(2.0, 2.0)).unwrap_err(),
            Error::DegenerateLattice
        );
    }

    #[test]
    fn klein_bottle() {
        let k = make_square_klein_bottle(1.0, 2.0).unwrap();
        assert_eq!(k.area(), 2.0);
        assert_eq!(k.euler_characteristic(), 0);
        assert!(!k.is_orientable());
        assert_eq!(k.cone_points().count(), 0);
    }

    #[test]
    fn decagon_cone_points() {
        let s = make_two_cone_decagon().unwrap();
        assert_eq!(s.euler_characteristic(), -2);
        let cones: Vec<_> = s.cone_points().collect();
        assert_eq!(cones.len(), 2);
        for c in cones {
            assert!((c.angle - 4.0 * PI).abs() < 1e-12);
        }
        assert!(s.gauss_bonnet_residual().abs() < 1e-9);
        assert!(s.systole_hint().unwrap().value > 0.9);
    }
}
