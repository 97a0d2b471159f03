//! Systoles: exact lattice reduction for flat tori, and certified enumeration
//! below a cutoff for general nonpositively curved cone surfaces.
//!
//! On a surface with cone points every closed geodesic either runs through
//! cone points, turning by at least π on both sides at each, or is the core
//! of a flat cylinder whose boundary is such a chain of the same length. Both
//! kinds are therefore found among closed chains of saddle connections. On a
//! cone-free surface the closed geodesics are the axes of deck
//! transformations, read off from the copies of one polygon in a development.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Isometry, Vec2};
use crate::surface::{ConeSurface, SurfacePoint, UnitTangent};
use crate::unfold::{
    develop_ball_with, develop_from_vertex_with, trace_geodesic, TraceEnd, UnfoldOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystoleStatus {
    Exact,
    CertifiedBelowCutoff,
    HintOnly,
}

impl std::fmt::Display for SystoleStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SystoleStatus::Exact => "exact",
            SystoleStatus::CertifiedBelowCutoff => "certified-below-cutoff",
            SystoleStatus::HintOnly => "hint-only",
        })
    }
}

/// A saddle connection leaving a cone point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SaddleConnection {
    pub from: usize,
    pub to: usize,
    pub length: f64,
    /// Cone-angle coordinate of the departing direction at `from`.
    pub departure: f64,
    /// Cone-angle coordinate of the reversed direction at `to`.
    pub arrival: f64,
}

/// A closed geodesic realizing the reported value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Witness {
    /// Shortest vector of a lattice.
    LatticeVector(Vec2),
    /// A closed geodesic avoiding cone points, starting at `start`.
    Loop {
        start: UnitTangent,
        length: f64,
        orientation_reversing: bool,
    },
    /// A closed chain of saddle connections.
    SaddleCycle(Vec<SaddleConnection>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystoleReport {
    pub value: f64,
    pub status: SystoleStatus,
    pub cutoff: Option<f64>,
    pub witness: Witness,
    /// Saddle connections or deck transformations examined.
    pub enumeration_count: usize,
}

/// Shortest nonzero vector of `Z v1 + Z v2` by Lagrange–Gauss reduction.
pub fn torus_systole(v1: Vec2, v2: Vec2) -> Result<SystoleReport> {
    let (a, _) = reduce_lattice(v1, v2)?;
    Ok(SystoleReport {
        value: a.norm(),
        status: SystoleStatus::Exact,
        cutoff: None,
        witness: Witness::LatticeVector(a),
        enumeration_count: 0,
    })
}

/// Reduced basis `(a, b)` with `|a| ≤ |b| ≤ |b ± a|`.
pub fn reduce_lattice(v1: Vec2, v2: Vec2) -> Result<(Vec2, Vec2)> {
    let scale = v1.norm() * v2.norm();
    if !(scale > 0.0) || !scale.is_finite() || v1.cross(v2).abs() <= 1e-12 * scale {
        return Err(Error::DegenerateLattice);
    }
    let (mut a, mut b) = if v1.norm_sq() <= v2.norm_sq() {
        (v1, v2)
    } else {
        (v2, v1)
    };
    loop {
        let m = (a.dot(b) / a.norm_sq()).round();
        b = b - a * m;
        if b.norm_sq() >= a.norm_sq() {
            return Ok((a, b));
        }
        std::mem::swap(&mut a, &mut b);
    }
}

/// A loop length that certainly bounds the systole from above, doubled: the
/// shortest edge whose endpoints are glued together.
pub fn default_cutoff(surface: &ConeSurface) -> Option<f64> {
    let mut best = f64::INFINITY;
    for (p, pg) in surface.polygons().iter().enumerate() {
        for e in 0..pg.len() {
            if surface.corner_class(p, e) == surface.corner_class(p, (e + 1) % pg.len()) {
                let (a, b) = pg.edge(e);
                best = best.min(a.distance(b));
            }
        }
    }
    best.is_finite().then_some(2.0 * best)
}

/// Shortest closed geodesic of length at most `cutoff`.
pub fn enumerate_systole(surface: &ConeSurface, cutoff: f64) -> Result<SystoleReport> {
    enumerate_systole_with(surface, cutoff, &UnfoldOptions::default())
}

pub fn enumerate_systole_with(
    surface: &ConeSurface,
    cutoff: f64,
    opts: &UnfoldOptions,
) -> Result<SystoleReport> {
    if !(cutoff > 0.0) || !cutoff.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "cutoff must be positive (got {cutoff})"
        )));
    }
    if !surface.is_nonpositively_curved() {
        return Err(Error::NotNonpositivelyCurved);
    }
    if surface.cone_points().next().is_some() {
        saddle_systole(surface, cutoff, opts)
    } else {
        deck_systole(surface, cutoff, opts)
    }
}

/// Systole with the cutoff chosen automatically: the default cutoff, or
/// doubling from the shortest edge until a loop is found.
pub fn systole(surface: &ConeSurface) -> Result<SystoleReport> {
    if let Some(c) = default_cutoff(surface) {
        return enumerate_systole(surface, c);
    }
    let shortest = surface
        .polygons()
        .iter()
        .flat_map(|pg| (0..pg.len()).map(move |e| pg.edge(e)))
        .map(|(a, b)| a.distance(b))
        .fold(f64::INFINITY, f64::min);
    let mut cutoff = 2.0 * shortest;
    let limit = 64.0 * surface.diameter() * surface.polygons().len() as f64;
    loop {
        match enumerate_systole(surface, cutoff) {
            Err(Error::NoLoopWithinCutoff(_)) if cutoff < limit => cutoff *= 2.0,
            other => return other,
        }
    }
}

/// All saddle connections of length at most `cutoff`, from every cone point.
pub fn saddle_connections(
    surface: &ConeSurface,
    cutoff: f64,
    opts: &UnfoldOptions,
) -> Result<Vec<SaddleConnection>> {
    let mut out = Vec::new();
    for c in surface.cone_points() {
        let dev = develop_from_vertex_with(surface, c.id, cutoff, opts)?;
        for s in dev.cone_segments(surface) {
            out.push(SaddleConnection {
                from: c.id,
                to: s.class,
                length: s.length,
                departure: s.departure.rem_euclid(c.angle),
                arrival: s.arrival,
            });
        }
    }
    Ok(out)
}

/// Whether a geodesic arriving along `arrival` may continue along
/// `departure` at a cone point of angle `theta`.
fn turn_allowed(arrival: f64, departure: f64, theta: f64) -> bool {
    let delta = (departure - arrival).rem_euclid(theta);
    let slack = 1e-9;
    delta >= PI - slack && theta - delta >= PI - slack
}

fn saddle_systole(
    surface: &ConeSurface,
    cutoff: f64,
    opts: &UnfoldOptions,
) -> Result<SystoleReport> {
    let segs = saddle_connections(surface, cutoff, opts)?;
    let n = segs.len();
    // line graph: s -> t when s ends where t starts and the turn is geodesic
    let succ: Vec<Vec<usize>> = segs
        .iter()
        .map(|s| {
            let theta = surface.vertex_class(s.to).angle;
            (0..n)
                .filter(|&t| {
                    segs[t].from == s.to && turn_allowed(s.arrival, segs[t].departure, theta)
                })
                .collect()
        })
        .collect();

    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| segs[a].length.total_cmp(&segs[b].length));
    for &s0 in &order {
        let bound = best.as_ref().map_or(cutoff, |b| b.0);
        if segs[s0].length > bound {
            break;
        }
        if let Some((len, cycle)) = shortest_cycle_through(&segs, &succ, s0, bound) {
            if best.as_ref().is_none_or(|b| len < b.0 - 1e-12) {
                best = Some((len, cycle));
            }
        }
    }
    let Some((value, cycle)) = best else {
        return Err(Error::NoLoopWithinCutoff(cutoff));
    };
    // cylinder cores on a nonorientable surface may close up after half the
    // boundary length, which chains of saddle connections do not see
    let status = if surface.is_orientable() {
        SystoleStatus::CertifiedBelowCutoff
    } else {
        SystoleStatus::HintOnly
    };
    Ok(SystoleReport {
        value,
        status,
        cutoff: Some(cutoff),
        witness: Witness::SaddleCycle(cycle.iter().map(|&i| segs[i]).collect()),
        enumeration_count: n,
    })
}

/// Dijkstra over the line graph starting with segment `s0`; the cycle closes
/// when an edge leads back to `s0`.
fn shortest_cycle_through(
    segs: &[SaddleConnection],
    succ: &[Vec<usize>],
    s0: usize,
    bound: f64,
) -> Option<(f64, Vec<usize>)> {
    let n = segs.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut prev = vec![usize::MAX; n];
    let mut done = vec![false; n];
    dist[s0] = segs[s0].length;
    let mut best: Option<(f64, usize)> = None;
    loop {
        let next = (0..n)
            .filter(|&i| !done[i] && dist[i] <= bound)
            .min_by(|&a, &b| dist[a].total_cmp(&dist[b]));
        let Some(u) = next else { break };
        if best.is_some_and(|b| dist[u] >= b.0) {
            break;
        }
        done[u] = true;
        for &v in &succ[u] {
            if v == s0 {
                if best.is_none_or(|b| dist[u] < b.0) {
                    best = Some((dist[u], u));
                }
                continue;
            }
            let d = dist[u] + segs[v].length;
            if d < dist[v] && d <= bound {
                dist[v] = d;
                prev[v] = u;
            }
        }
    }
    let (len, last) = best?;
    let mut cycle = vec![last];
    while *cycle.last().unwrap() != s0 {
        cycle.push(prev[*cycle.last().unwrap()]);
    }
    cycle.reverse();
    Some((len, cycle))
}

/// Cone-free surfaces: closed geodesics are axes of deck transformations.
fn deck_systole(surface: &ConeSurface, cutoff: f64, opts: &UnfoldOptions) -> Result<SystoleReport> {
    let x0 = SurfacePoint {
        chart: 0,
        coords: surface.polygon(0).centroid(),
    };
    let reach = fundamental_radius(surface, &x0, opts)?;
    let dev = develop_ball_with(surface, &x0, cutoff + 2.0 * reach, opts)?;
    let mut decks: Vec<Isometry> = Vec::new();
    for &i in dev.nodes_of(0) {
        let h = dev.nodes[i].iso;
        if h.approx_eq(&Isometry::IDENTITY, 1e-9) || decks.iter().any(|d| d.approx_eq(&h, 1e-9)) {
            continue;
        }
        decks.push(h);
    }
    let mut best: Option<(f64, Isometry)> = None;
    for h in &decks {
        if let Some(len) = displacement(h) {
            if len <= cutoff + 1e-12 && best.is_none_or(|b| len < b.0 - 1e-12) {
                best = Some((len, *h));
            }
        }
    }
    let Some((value, h)) = best else {
        return Err(Error::NoLoopWithinCutoff(cutoff));
    };
    let (point, dir) = axis(&h, x0.coords);
    let start = locate_developed(surface, &dev, point, dir)?;
    Ok(SystoleReport {
        value,
        status: SystoleStatus::CertifiedBelowCutoff,
        cutoff: Some(cutoff),
        witness: Witness::Loop {
            start,
            length: value,
            orientation_reversing: !h.preserves_orientation(),
        },
        enumeration_count: decks.len(),
    })
}

/// Largest distance from `x0` to a point of a connected fundamental domain
/// assembled from one copy of every polygon.
fn fundamental_radius(
    surface: &ConeSurface,
    x0: &SurfacePoint,
    opts: &UnfoldOptions,
) -> Result<f64> {
    let polys = surface.polygons().len();
    let mut r = surface.polygon(0).diameter.max(1e-9);
    loop {
        let dev = develop_ball_with(surface, x0, r, opts)?;
        if (0..polys).all(|p| !dev.nodes_of(p).is_empty()) {
            let mut far: f64 = 0.0;
            for p in 0..polys {
                let node = &dev.nodes[dev.nodes_of(p)[0]];
                for v in &surface.polygon(p).vertices {
                    far = far.max(node.iso.apply(*v).distance(dev.origin));
                }
            }
            return Ok(far);
        }
        r *= 2.0;
    }
}

/// Translation length along the invariant axis; `None` for rotations.
fn displacement(h: &Isometry) -> Option<f64> {
    if h.preserves_orientation() {
        h.is_translation(1e-9).then(|| h.translation.norm())
    } else {
        let (a, _) = reflection_axis(h);
        Some(h.translation.dot(a).abs())
    }
}

/// Unit direction fixed by the linear part of a reflection, and its normal.
fn reflection_axis(h: &Isometry) -> (Vec2, Vec2) {
    let m = &h.linear;
    // L = [[cos 2φ, sin 2φ], [sin 2φ, −cos 2φ]] reflects across angle φ
    let phi = m[1][0].atan2(m[0][0]) / 2.0;
    let a = Vec2::from_angle(phi);
    (a, a.perp())
}

/// A point on the axis of `h` near `x`, and the direction of travel.
fn axis(h: &Isometry, x: Vec2) -> (Vec2, Vec2) {
    let t = h.translation;
    if h.preserves_orientation() {
        return (x, t.normalized());
    }
    let (a, n) = reflection_axis(h);
    // the axis is {y : y·n = t·n / 2}
    let y = x + n * (t.dot(n) / 2.0 - x.dot(n));
    let dir = if t.dot(a) >= 0.0 { a } else { -a };
    (y, dir)
}

/// Pulls a developed point and direction back to a chart.
fn locate_developed(
    surface: &ConeSurface,
    dev: &crate::unfold::Development,
    point: Vec2,
    dir: Vec2,
) -> Result<UnitTangent> {
    let tol = 1e-9 * surface.diameter().max(1.0);
    for node in &dev.nodes {
        let inv = node.iso.inverse();
        let local = SurfacePoint {
            chart: node.poly,
            coords: inv.apply(point),
        };
        let pg = surface.polygon(node.poly);
        let inside = (0..pg.len()).all(|e| {
            let (a, b) = pg.edge(e);
            (b - a).cross(local.coords - a) / (b - a).norm() >= -tol
        });
        if inside {
            return UnitTangent::new(local, inv.apply_linear(dir));
        }
    }
    Err(Error::InvalidArgument(
        "witness axis lies outside the development".into(),
    ))
}

/// Re-traces a witness. Returns the largest endpoint or length mismatch.
pub fn validate_witness(surface: &ConeSurface, report: &SystoleReport) -> Result<f64> {
    match &report.witness {
        Witness::LatticeVector(v) => Ok((v.norm() - report.value).abs()),
        Witness::Loop { start, length, .. } => {
            let trace = trace_geodesic(surface, start, *length)?;
            if trace.end != TraceEnd::Completed {
                return Ok(f64::INFINITY);
            }
            let end = trace.final_tangent();
            let mut err = f64::INFINITY;
            for rep in surface.representations(&end.base)? {
                if rep.chart != start.base.chart {
                    continue;
                }
                // carry the direction into the start chart when the endpoint
                // sits on a glued edge
                let dir = if rep.chart == end.base.chart && rep.coords == end.base.coords {
                    end.direction
                } else {
                    transfer_direction(surface, &end, &rep)
                };
                let e = rep
                    .coords
                    .distance(start.base.coords)
                    .max(dir.distance(start.direction));
                err = err.min(e);
            }
            Ok(err.max((length - report.value).abs()))
        }
        Witness::SaddleCycle(cycle) => {
            let mut err: f64 = 0.0;
            let total: f64 = cycle.iter().map(|s| s.length).sum();
            for s in cycle {
                let (poly, vertex, dir) = surface.corner_direction(s.from, s.departure);
                let u = UnitTangent {
                    base: SurfacePoint {
                        chart: poly,
                        coords: surface.polygon(poly).vertices[vertex],
                    },
                    direction: dir,
                };
                let trace = trace_geodesic(surface, &u, s.length * (1.0 + 1e-6) + 1e-9)?;
                match trace.end {
                    TraceEnd::ConePointHit { class, at } if class == s.to => {
                        err = err.max((at - s.length).abs());
                    }
                    _ => return Ok(f64::INFINITY),
                }
            }
            for w in 0..cycle.len() {
                let (a, b) = (&cycle[w], &cycle[(w + 1) % cycle.len()]);
                if a.to != b.from {
                    return Ok(f64::INFINITY);
                }
            }
            Ok(err.max((total - report.value).abs()))
        }
    }
}

fn transfer_direction(surface: &ConeSurface, end: &UnitTangent, rep: &SurfacePoint) -> Vec2 {
    let pg = surface.polygon(end.base.chart);
    for e in 0..pg.len() {
        let link = surface.link(end.base.chart, e);
        if link.poly == rep.chart {
            let back = link.to_here.inverse();
            if back.apply(end.base.coords).distance(rep.coords) < 1e-9 * surface.diameter().max(1.0)
            {
                return back.apply_linear(end.direction);
            }
        }
    }
    end.direction
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{make_square_klein_bottle, make_staircase_surface, square_torus};

    #[test]
    fn reduction_examples() {
        let r = torus_systole(Vec2::new(2.0, 0.0), Vec2::new(0.1, 3.0)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        let hex = torus_systole(Vec2::new(1.0, 0.0), Vec2::new(0.5, 3f64.sqrt() / 2.0)).unwrap();
        assert!((hex.value - 1.0).abs() < 1e-12);
        assert_eq!(
            torus_systole(Vec2::new(1.0, 2.0), Vec2::new(-2.0, -4.0)).unwrap_err(),
            Error::DegenerateLattice
        );
    }

    #[test]
    fn staircase_systole_is_one() {
        let s = make_staircase_surface(2).unwrap();
        let r = enumerate_systole(&s, 1.5).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert_eq!(r.status, SystoleStatus::CertifiedBelowCutoff);
        assert!(validate_witness(&s, &r).unwrap() < 1e-9);
        assert_eq!(default_cutoff(&s), Some(2.0));
    }

    #[test]
    fn klein_and_torus_by_deck_transformations() {
        let k = make_square_klein_bottle(1.0, 1.0).unwrap();
        let r = enumerate_systole(&k, 1.5).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!(validate_witness(&k, &r).unwrap() < 1e-9);

        let thin = make_square_klein_bottle(2.0, 3.0).unwrap();
        let r = enumerate_systole(&thin, 5.0).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12, "{}", r.value);
        assert!(matches!(
            r.witness,
            Witness::Loop {
                orientation_reversing: true,
                ..
            }
        ));

        let t = square_torus();
        let r = enumerate_systole(&t, 3.0).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!(validate_witness(&t, &r).unwrap() < 1e-9);
    }

    #[test]
    fn small_cutoff_finds_nothing() {
        let s = make_staircase_surface(2).unwrap();
        assert_eq!(
            enumerate_systole(&s, 0.5).unwrap_err(),
            Error::NoLoopWithinCutoff(0.5)
        );
    }
}
