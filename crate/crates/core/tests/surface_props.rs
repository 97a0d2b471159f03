//! Structural invariants of built surfaces.

use std::f64::consts::TAU;

use cone_systole::functionals::g_r;
use cone_systole::geometry::Vec2;
use cone_systole::surface::{
    build_surface, hexagonal_torus, make_flat_torus, make_square_klein_bottle,
    make_staircase_surface, make_two_cone_decagon, square_torus, ConeSurface, GlueMap, Scalar,
    SurfacePoint,
};
use cone_systole::systole::systole;
use proptest::prelude::*;

fn builtins() -> Vec<ConeSurface> {
    let mut v = vec![
        square_torus(),
        hexagonal_torus(),
        make_square_klein_bottle(1.0, 1.0).unwrap(),
        make_square_klein_bottle(2.0, 0.5).unwrap(),
        make_two_cone_decagon().unwrap(),
    ];
    v.extend((2..=5).map(|g| make_staircase_surface(g).unwrap()));
    v
}

fn check_gluing_involution(s: &ConeSurface) {
    for (p, poly) in s.polygons().iter().enumerate() {
        for e in 0..poly.len() {
            let l = s.link(p, e);
            let back = s.link(l.poly, l.edge);
            assert_eq!((back.poly, back.edge), (p, e));
            assert_eq!(back.map, l.map);
            // the two transition maps are mutually inverse
            assert!(l
                .to_here
                .compose(&back.to_here)
                .approx_eq(&cone_systole::geometry::Isometry::IDENTITY, 1e-9));
            // and the partner edge lands on this edge, reversed unless flipped
            let (a, b) = poly.edge(e);
            let (pa, pb) = s.polygon(l.poly).edge(l.edge);
            let (qa, qb) = (l.to_here.apply(pa), l.to_here.apply(pb));
            let (ea, eb) = if l.map == GlueMap::Flip {
                (a, b)
            } else {
                (b, a)
            };
            assert!(qa.distance(ea) < 1e-9 && qb.distance(eb) < 1e-9, "{p}:{e}");
            assert_eq!(l.to_here.preserves_orientation(), l.map != GlueMap::Flip);
        }
    }
}

#[test]
fn gluings_are_involutions() {
    for s in builtins() {
        check_gluing_involution(&s);
    }
}

#[test]
fn gauss_bonnet_and_corner_sums() {
    for s in builtins() {
        assert!(s.gauss_bonnet_residual().abs() < 1e-9);
        let corners: f64 = s
            .polygons()
            .iter()
            .flat_map(|p| p.corner_angles.iter())
            .sum();
        let classes: f64 = s.vertex_classes().iter().map(|v| v.angle).sum();
        assert!((corners - classes).abs() < 1e-9);
        assert!((s.total_defect() - TAU * s.euler_characteristic() as f64).abs() < 1e-9);
        if s.is_exact() {
            assert_eq!(s.gauss_bonnet_residual(), 0.0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_tori_glue_consistently(
        ax in 0.3f64..3.0, bx in -2.0f64..2.0, by in 0.3f64..3.0,
    ) {
        let s = make_flat_torus(Vec2::new(ax, 0.0), Vec2::new(bx, by)).unwrap();
        check_gluing_involution(&s);
        prop_assert_eq!(s.euler_characteristic(), 0);
        prop_assert!(s.gauss_bonnet_residual().abs() < 1e-9);
        prop_assert!((s.area() - ax * by).abs() < 1e-9 * s.area().max(1.0));
        prop_assert_eq!(s.cone_points().count(), 0);
    }

    #[test]
    fn klein_bottles_glue_consistently(a in 0.2f64..4.0, b in 0.2f64..4.0) {
        let s = make_square_klein_bottle(a, b).unwrap();
        check_gluing_involution(&s);
        prop_assert!(!s.is_orientable());
        prop_assert_eq!(s.euler_characteristic(), 0);
    }

    #[test]
    fn scaling_covariance(num in 1i64..9, den in 1i64..9, g in 2i64..4, px in 0.05f64..0.95, py in 0.05f64..0.95) {
        let base = make_staircase_surface(g).unwrap();
        let factor = Scalar::ratio(num, den);
        let k = num as f64 / den as f64;
        let scaled = build_surface(base.description().scaled(&factor)).unwrap();
        prop_assert!(scaled.is_exact());
        prop_assert!((scaled.area() - k * k * base.area()).abs() < 1e-12 * scaled.area());
        prop_assert_eq!(scaled.gauss_bonnet_residual(), 0.0);
        for (a, b) in base.vertex_classes().iter().zip(scaled.vertex_classes()) {
            prop_assert_eq!(a.defect, b.defect);
        }
        let sys = systole(&scaled).unwrap().value;
        prop_assert!((sys - k).abs() < 1e-9 * k);
        // G scales like an area
        let x = SurfacePoint::new(0, px, py);
        let xs = SurfacePoint::new(0, k * px, k * py);
        let r = 0.45;
        let g0 = g_r(&base, &x, r).unwrap().value;
        let g1 = g_r(&scaled, &xs, k * r).unwrap().value;
        prop_assert!((g1 - k * k * g0).abs() < 1e-9 * (1.0 + g1.abs()));
    }
}
