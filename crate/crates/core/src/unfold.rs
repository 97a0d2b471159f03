//! Developments (unfoldings) of a surface around a point, and everything
//! built on them: cone-point distances, point-to-point distances, a
//! Monte Carlo ball-area estimator and straight-line geodesic tracing.
//!
//! A development is a tree of polygon copies laid out in the plane. Each node
//! carries the wedge of directions from the developed basepoint whose rays
//! reach it, so sibling nodes partition the directions and no deduplication
//! by placement is needed. Rays that meet a cone vertex stop there: wedge
//! boundaries through cone vertices are open on the far side.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{point_segment_distance, Isometry, Vec2, Wedge};
use crate::sampling::{run_chunks, AreaSampler};
use crate::surface::{ConeSurface, Location, SurfacePoint, UnitTangent};

/// Default cap on the number of polygon copies in one development.
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

/// A polygon copy in a development.
#[derive(Debug, Clone, Copy)]
pub struct DevNode {
    pub poly: usize,
    /// Sends polygon coordinates to developed coordinates.
    pub iso: Isometry,
    /// Directions from the developed basepoint whose rays reach this copy.
    pub wedge: Wedge,
    /// Parent node and the parent's edge that was crossed.
    pub parent: Option<(usize, usize)>,
    /// Edge of this polygon glued to the parent edge.
    pub entry: Option<usize>,
    /// Index of the root piece this node descends from.
    pub root: usize,
}

/// Cone-angle bookkeeping for a root piece of a vertex-rooted development.
#[derive(Debug, Clone, Copy)]
pub struct RootPiece {
    pub cone_start: f64,
    pub wedge: Wedge,
}

#[derive(Debug, Clone)]
pub struct Development {
    pub basepoint: SurfacePoint,
    /// Developed position of the basepoint.
    pub origin: Vec2,
    pub radius: f64,
    pub nodes: Vec<DevNode>,
    pub roots: Vec<RootPiece>,
    /// Vertex class the development is rooted at, if any.
    pub vertex: Option<usize>,
    /// The radius is known to lie below half the systole on a nonpositively
    /// curved surface, so the ball is covered with multiplicity one.
    pub guaranteed: bool,
    by_poly: Vec<Vec<usize>>,
}

/// A straight segment from the basepoint to a cone point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeSegment {
    pub class: usize,
    pub length: f64,
    /// Departure angle: developed direction, or a cone-angle coordinate when
    /// the development is rooted at a vertex.
    pub departure: f64,
    /// Cone-angle coordinate of the incoming direction at the target.
    pub arrival: f64,
    pub node: usize,
}

/// Distance and visibility of one cone point from a basepoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConePointReach {
    pub cone_point: usize,
    pub defect: f64,
    pub angle: f64,
    pub distance: f64,
    /// The distance is realized by a straight segment avoiding cone points.
    pub visible: bool,
}

/// Outcome of a distance query.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Distance {
    /// `upper_bound` is set when positively curved cone points make the
    /// visibility-graph metric an over-estimate.
    Reached {
        value: f64,
        upper_bound: bool,
    },
    Unreachable(f64),
}

impl Distance {
    pub fn value(self) -> Option<f64> {
        match self {
            Distance::Reached { value, .. } => Some(value),
            Distance::Unreachable(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct UnfoldOptions {
    pub node_budget: usize,
}

impl Default for UnfoldOptions {
    fn default() -> Self {
        UnfoldOptions {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

fn radius_ok(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "radius must be positive (got {r})"
        )))
    }
}

/// Develops the surface around `x` out to radius `r`.
pub fn develop_ball(surface: &ConeSurface, x: &SurfacePoint, r: f64) -> Result<Development> {
    develop_ball_with(surface, x, r, &UnfoldOptions::default())
}

pub fn develop_ball_with(
    surface: &ConeSurface,
    x: &SurfacePoint,
    r: f64,
    opts: &UnfoldOptions,
) -> Result<Development> {
    radius_ok(r)?;
    let location = surface.locate(x)?;
    let mut roots = Vec::new();
    let mut nodes = Vec::new();
    let mut vertex = None;
    match location {
        Location::Interior => {
            roots.push(RootPiece {
                cone_start: 0.0,
                wedge: Wedge::FULL,
            });
            nodes.push(root_node(x.chart, Isometry::IDENTITY, Wedge::FULL, 0));
        }
        Location::Edge(e) => {
            let (a, b) = surface.polygon(x.chart).edge(e);
            let inside = Wedge::closed((b - a).angle(), std::f64::consts::PI);
            let link = surface.link(x.chart, e);
            let across = Wedge {
                lo: (a - b).angle(),
                width: std::f64::consts::PI,
                lo_open: true,
                hi_open: true,
            };
            roots.push(RootPiece {
                cone_start: 0.0,
                wedge: inside,
            });
            roots.push(RootPiece {
                cone_start: 0.0,
                wedge: across,
            });
            nodes.push(root_node(x.chart, Isometry::IDENTITY, inside, 0));
            nodes.push(root_node(link.poly, link.to_here, across, 1));
        }
        Location::Vertex(v) => {
            let class = surface.corner_class(x.chart, v);
            if surface.vertex_class(class).is_cone() {
                return Err(Error::BasepointOnConePoint(class));
            }
            vertex = Some(class);
            vertex_roots(surface, class, Some((x.chart, v)), &mut roots, &mut nodes);
        }
    }
    let origin = x.coords;
    let mut dev = Development {
        basepoint: *x,
        origin,
        radius: r,
        nodes,
        roots,
        vertex,
        guaranteed: false,
        by_poly: Vec::new(),
    };
    dev.guaranteed =
        surface.is_nonpositively_curved() && surface.half_systole().is_some_and(|h| r < h);
    expand(surface, &mut dev, opts.node_budget)?;
    Ok(dev)
}

/// Develops the surface around the vertex class `class` out to radius `r`.
/// Directions are measured by the cone-angle coordinate of the class.
pub fn develop_from_vertex(surface: &ConeSurface, class: usize, r: f64) -> Result<Development> {
    develop_from_vertex_with(surface, class, r, &UnfoldOptions::default())
}

pub fn develop_from_vertex_with(
    surface: &ConeSurface,
    class: usize,
    r: f64,
    opts: &UnfoldOptions,
) -> Result<Development> {
    radius_ok(r)?;
    let mut roots = Vec::new();
    let mut nodes = Vec::new();
    vertex_roots(surface, class, None, &mut roots, &mut nodes);
    let rc = &surface.vertex_class(class).ring[0];
    let origin = surface.polygon(rc.poly).vertices[rc.vertex];
    let mut dev = Development {
        basepoint: SurfacePoint {
            chart: rc.poly,
            coords: origin,
        },
        origin,
        radius: r,
        nodes,
        roots,
        vertex: Some(class),
        guaranteed: false,
        by_poly: Vec::new(),
    };
    expand(surface, &mut dev, opts.node_budget)?;
    Ok(dev)
}

fn root_node(poly: usize, iso: Isometry, wedge: Wedge, root: usize) -> DevNode {
    DevNode {
        poly,
        iso,
        wedge,
        parent: None,
        entry: None,
        root,
    }
}

/// One root piece per corner around a vertex, in the frame of `frame_corner`
/// (or of the first ring corner).
fn vertex_roots(
    surface: &ConeSurface,
    class: usize,
    frame_corner: Option<(usize, usize)>,
    roots: &mut Vec<RootPiece>,
    nodes: &mut Vec<DevNode>,
) {
    let ring = &surface.vertex_class(class).ring;
    let frame = frame_corner
        .and_then(|(p, v)| ring.iter().find(|rc| rc.poly == p && rc.vertex == v))
        .map_or(Isometry::IDENTITY, |rc| rc.placement.inverse());
    for (k, rc) in ring.iter().enumerate() {
        let iso = frame.compose(&rc.placement);
        let pg = surface.polygon(rc.poly);
        let n = pg.len();
        let v = pg.vertices[rc.vertex];
        let start = if rc.reversed {
            pg.vertices[(rc.vertex + n - 1) % n] - v
        } else {
            pg.vertices[(rc.vertex + 1) % n] - v
        };
        let wedge = Wedge {
            lo: iso.apply_linear(start).angle(),
            width: rc.width,
            lo_open: false,
            hi_open: true,
        };
        roots.push(RootPiece {
            cone_start: rc.cone_start,
            wedge,
        });
        nodes.push(root_node(rc.poly, iso, wedge, k));
    }
}

/// Breadth-first growth of the wedge tree.
fn expand(surface: &ConeSurface, dev: &mut Development, budget: usize) -> Result<()> {
    let o = dev.origin;
    let r = dev.radius;
    let side_eps = 1e-12 * surface.diameter().max(1.0);
    let mut head = 0;
    while head < dev.nodes.len() {
        let node = dev.nodes[head];
        let pg = surface.polygon(node.poly);
        let orient = if node.iso.preserves_orientation() {
            1.0
        } else {
            -1.0
        };
        for e in 0..pg.len() {
            let (a, b) = pg.edge(e);
            let (a2, b2) = (node.iso.apply(a), node.iso.apply(b));
            let edge = b2 - a2;
            let side = orient * edge.cross(o - a2) / edge.norm();
            if side <= side_eps {
                continue;
            }
            let (da, db) = (a2 - o, b2 - o);
            let cone_a = surface.is_cone_corner(node.poly, e);
            let cone_b = surface.is_cone_corner(node.poly, (e + 1) % pg.len());
            let (lo_v, hi_v, lo_open, hi_open) = if da.cross(db) > 0.0 {
                (da, db, cone_a, cone_b)
            } else {
                (db, da, cone_b, cone_a)
            };
            let lo = lo_v.angle();
            let width = lo_v.cross(hi_v).atan2(lo_v.dot(hi_v));
            let subtended = Wedge {
                lo,
                width,
                lo_open,
                hi_open,
            };
            let Some(wedge) = node.wedge.intersect(&subtended) else {
                continue;
            };
            let p_lo = ray_hit(o, wedge.lo, a2, b2);
            let p_hi = ray_hit(o, wedge.lo + wedge.width, a2, b2);
            if point_segment_distance(o, p_lo, p_hi) >= r {
                continue;
            }
            if dev.nodes.len() >= budget {
                return Err(Error::BudgetExceeded(budget));
            }
            let link = surface.link(node.poly, e);
            dev.nodes.push(DevNode {
                poly: link.poly,
                iso: node.iso.compose(&link.to_here),
                wedge,
                parent: Some((head, e)),
                entry: Some(link.edge),
                root: node.root,
            });
        }
        head += 1;
    }
    let mut by_poly = vec![Vec::new(); surface.polygons().len()];
    for (i, n) in dev.nodes.iter().enumerate() {
        by_poly[n.poly].push(i);
    }
    dev.by_poly = by_poly;
    Ok(())
}

/// Point where the ray from `o` at angle `angle` meets the line through `a`, `b`.
fn ray_hit(o: Vec2, angle: f64, a: Vec2, b: Vec2) -> Vec2 {
    let d = Vec2::from_angle(angle);
    let ab = b - a;
    let denom = d.cross(ab);
    if denom.abs() < 1e-300 {
        return if a.distance(o) < b.distance(o) { a } else { b };
    }
    let t = (a - o).cross(ab) / denom;
    o + d * t
}

impl Development {
    /// Nodes that are copies of polygon `poly`.
    pub fn nodes_of(&self, poly: usize) -> &[usize] {
        &self.by_poly[poly]
    }

    /// Departure coordinate of developed direction `angle` in node `node`.
    pub fn departure(&self, node: usize, angle: f64) -> f64 {
        match self.vertex {
            Some(_) => {
                let root = &self.roots[self.nodes[node].root];
                root.cone_start + root.wedge.offset(angle)
            }
            None => angle,
        }
    }

    /// Straight segments from the basepoint to cone points, of length at most
    /// the development radius, each reported once.
    pub fn cone_segments(&self, surface: &ConeSurface) -> Vec<ConeSegment> {
        let tol = 1e-9 * surface.diameter().max(self.radius).max(1.0);
        let mut found = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            let pg = surface.polygon(node.poly);
            for j in 0..pg.len() {
                if !surface.is_cone_corner(node.poly, j) {
                    continue;
                }
                let image = node.iso.apply(pg.vertices[j]);
                let delta = image - self.origin;
                let length = delta.norm();
                if length <= tol || length > self.radius + tol {
                    continue;
                }
                let angle = delta.angle();
                if !node.wedge.contains_angle(angle) {
                    continue;
                }
                if self.blocked(surface, node, j, image, length, tol) {
                    continue;
                }
                let back = node.iso.inverse().apply_linear(-delta);
                found.push(ConeSegment {
                    class: surface.corner_class(node.poly, j),
                    length,
                    departure: self.departure(i, angle),
                    arrival: surface.cone_coordinate(node.poly, j, back),
                    node: i,
                });
            }
        }
        dedupe_segments(surface, found, tol)
    }

    /// Whether a cone vertex of the node's polygon sits strictly inside the
    /// segment from the origin to vertex `j`.
    fn blocked(
        &self,
        surface: &ConeSurface,
        node: &DevNode,
        j: usize,
        image: Vec2,
        length: f64,
        tol: f64,
    ) -> bool {
        let pg = surface.polygon(node.poly);
        let dir = (image - self.origin) * (1.0 / length);
        (0..pg.len()).any(|k| {
            if k == j || !surface.is_cone_corner(node.poly, k) {
                return false;
            }
            let rel = node.iso.apply(pg.vertices[k]) - self.origin;
            let along = rel.dot(dir);
            along > tol && along < length - tol && dir.cross(rel).abs() <= tol
        })
    }

    /// Whether the developed copy of `y` in some node lies within the radius
    /// along a straight ray; returns the shortest such length.
    pub fn straight_distance(&self, y: &SurfacePoint, limit: f64) -> Option<f64> {
        let mut best: Option<f64> = None;
        for &i in self.nodes_of(y.chart) {
            let node = &self.nodes[i];
            let delta = node.iso.apply(y.coords) - self.origin;
            let d = delta.norm();
            if d > limit || best.is_some_and(|b| d >= b) {
                continue;
            }
            if d == 0.0 || node.wedge.contains_angle(delta.angle()) {
                best = Some(d);
            }
        }
        best
    }

    /// Number of developed copies of `y` inside the open ball; at most one
    /// off a null set when the development is guaranteed.
    pub fn multiplicity(&self, y: &SurfacePoint) -> usize {
        self.nodes_of(y.chart)
            .iter()
            .filter(|&&i| {
                let node = &self.nodes[i];
                let delta = node.iso.apply(y.coords) - self.origin;
                delta.norm() < self.radius && node.wedge.contains_angle(delta.angle())
            })
            .count()
    }
}

fn dedupe_segments(
    surface: &ConeSurface,
    mut found: Vec<ConeSegment>,
    tol: f64,
) -> Vec<ConeSegment> {
    found.sort_by(|a, b| a.class.cmp(&b.class).then(a.length.total_cmp(&b.length)));
    let mut out: Vec<ConeSegment> = Vec::with_capacity(found.len());
    for s in found {
        let theta = surface.vertex_class(s.class).angle;
        let duplicate = out
            .iter()
            .rev()
            .take_while(|o| o.class == s.class && s.length - o.length <= tol)
            .any(|o| {
                let da = (o.arrival - s.arrival).rem_euclid(theta);
                da.min(theta - da) <= 1e-7
            });
        if !duplicate {
            out.push(s);
        }
    }
    out
}

/// Saddle connections from every cone point up to a fixed length, computed
/// once and shared by many distance queries.
#[derive(Debug, Clone)]
pub struct SaddleCache {
    radius: f64,
    segments: Vec<Vec<ConeSegment>>,
}

impl SaddleCache {
    pub fn new(surface: &ConeSurface, radius: f64, opts: &UnfoldOptions) -> Result<Self> {
        let mut segments = vec![Vec::new(); surface.vertex_classes().len()];
        for c in surface.cone_points() {
            segments[c.id] =
                develop_from_vertex_with(surface, c.id, radius, opts)?.cone_segments(surface);
        }
        Ok(SaddleCache { radius, segments })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Saddle connections leaving `class`, sorted by target and length.
    pub fn from_cone(&self, class: usize) -> &[ConeSegment] {
        &self.segments[class]
    }
}

/// Shortest distances from a source to every cone point, given the straight
/// segments leaving the source; paths may bend only at cone points.
fn cone_dijkstra(
    surface: &ConeSurface,
    initial: &[ConeSegment],
    cutoff: f64,
    cache: Option<&SaddleCache>,
    opts: &UnfoldOptions,
) -> Result<Vec<f64>> {
    let n = surface.vertex_classes().len();
    let mut dist = vec![f64::INFINITY; n];
    for s in initial {
        dist[s.class] = dist[s.class].min(s.length);
    }
    let mut done = vec![false; n];
    loop {
        let next = (0..n)
            .filter(|&c| !done[c] && dist[c] < cutoff)
            .min_by(|&a, &b| dist[a].total_cmp(&dist[b]));
        let Some(p) = next else { break };
        done[p] = true;
        let budget = cutoff - dist[p];
        let fresh;
        let segments = match cache {
            Some(c) if c.radius >= budget => c.from_cone(p),
            _ => {
                fresh = develop_from_vertex_with(surface, p, budget, opts)?.cone_segments(surface);
                &fresh[..]
            }
        };
        for s in segments {
            let d = dist[p] + s.length;
            if d < dist[s.class] {
                dist[s.class] = d;
            }
        }
    }
    Ok(dist)
}

/// Distances from `x` to the cone points within `r`.
pub fn reach_cone_points(
    surface: &ConeSurface,
    x: &SurfacePoint,
    r: f64,
) -> Result<Vec<ConePointReach>> {
    reach_cone_points_with(surface, x, r, &UnfoldOptions::default())
}

pub fn reach_cone_points_with(
    surface: &ConeSurface,
    x: &SurfacePoint,
    r: f64,
    opts: &UnfoldOptions,
) -> Result<Vec<ConePointReach>> {
    reach_cone_points_cached(surface, x, r, None, opts)
}

/// As [`reach_cone_points`], reusing precomputed saddle connections.
pub fn reach_cone_points_cached(
    surface: &ConeSurface,
    x: &SurfacePoint,
    r: f64,
    cache: Option<&SaddleCache>,
    opts: &UnfoldOptions,
) -> Result<Vec<ConePointReach>> {
    let dev = develop_ball_with(surface, x, r, opts)?;
    reach_from_development(surface, &dev, cache, opts)
}

fn reach_from_development(
    surface: &ConeSurface,
    dev: &Development,
    cache: Option<&SaddleCache>,
    opts: &UnfoldOptions,
) -> Result<Vec<ConePointReach>> {
    let r = dev.radius;
    let segments = dev.cone_segments(surface);
    if dev.guaranteed {
        // geodesics in a ball below half the systole are unique
        for w in segments.windows(2) {
            if w[0].class == w[1].class {
                return Err(Error::VisibilityNotUnique(w[0].class));
            }
        }
    }
    let dist = cone_dijkstra(surface, &segments, r, cache, opts)?;
    let tol = 1e-9 * r.max(1.0);
    let mut out = Vec::new();
    for c in surface.cone_points() {
        let d = dist[c.id];
        if d > r {
            continue;
        }
        let straight = segments
            .iter()
            .filter(|s| s.class == c.id)
            .map(|s| s.length)
            .fold(f64::INFINITY, f64::min);
        out.push(ConePointReach {
            cone_point: c.id,
            defect: c.defect,
            angle: c.angle,
            distance: d,
            visible: straight <= d + tol,
        });
    }
    Ok(out)
}

/// Geodesic distance between two points, searched up to `cutoff`.
pub fn distance(
    surface: &ConeSurface,
    x: &SurfacePoint,
    y: &SurfacePoint,
    cutoff: f64,
) -> Result<Distance> {
    distance_with(surface, x, y, cutoff, &UnfoldOptions::default())
}

pub fn distance_with(
    surface: &ConeSurface,
    x: &SurfacePoint,
    y: &SurfacePoint,
    cutoff: f64,
    opts: &UnfoldOptions,
) -> Result<Distance> {
    radius_ok(cutoff)?;
    let upper_bound = !surface.is_nonpositively_curved();
    if surface.same_point(x, y, surface.hit_tolerance())? {
        return Ok(Distance::Reached {
            value: 0.0,
            upper_bound: false,
        });
    }
    let from_x = point_cone_distances(surface, x, cutoff, opts)?;
    let from_y = point_cone_distances(surface, y, cutoff, opts)?;
    let mut best = f64::INFINITY;
    if let Some(dev) = &from_x.0 {
        for rep in surface.representations(y)? {
            if let Some(d) = dev.straight_distance(&rep, cutoff) {
                best = best.min(d);
            }
        }
    } else if let Some(dev) = &from_y.0 {
        for rep in surface.representations(x)? {
            if let Some(d) = dev.straight_distance(&rep, cutoff) {
                best = best.min(d);
            }
        }
    }
    for (a, b) in from_x.1.iter().zip(&from_y.1) {
        best = best.min(a + b);
    }
    Ok(if best <= cutoff {
        Distance::Reached {
            value: best,
            upper_bound,
        }
    } else {
        Distance::Unreachable(cutoff)
    })
}

/// The point's development (absent when the point is a cone point) and its
/// cone-point distances.
fn point_cone_distances(
    surface: &ConeSurface,
    p: &SurfacePoint,
    cutoff: f64,
    opts: &UnfoldOptions,
) -> Result<(Option<Development>, Vec<f64>)> {
    if let Some(class) = surface.vertex_at(p)? {
        if surface.vertex_class(class).is_cone() {
            let dev = develop_from_vertex_with(surface, class, cutoff, opts)?;
            let mut dist = cone_dijkstra(surface, &dev.cone_segments(surface), cutoff, None, opts)?;
            dist[class] = 0.0;
            return Ok((None, dist));
        }
    }
    let dev = develop_ball_with(surface, p, cutoff, opts)?;
    let dist = cone_dijkstra(surface, &dev.cone_segments(surface), cutoff, None, opts)?;
    Ok((Some(dev), dist))
}

/// Membership oracle for the closed ball `B_x(r)`.
#[derive(Debug, Clone)]
pub struct BallIndicator {
    radius: f64,
    /// Developments with the length already spent reaching their origin.
    pieces: Vec<(f64, Development)>,
    reach: Vec<ConePointReach>,
}

impl BallIndicator {
    pub fn new(surface: &ConeSurface, x: &SurfacePoint, r: f64) -> Result<Self> {
        Self::with_options(surface, x, r, &UnfoldOptions::default())
    }

    pub fn with_options(
        surface: &ConeSurface,
        x: &SurfacePoint,
        r: f64,
        opts: &UnfoldOptions,
    ) -> Result<Self> {
        let dev = develop_ball_with(surface, x, r, opts)?;
        let reach = reach_from_development(surface, &dev, None, opts)?;
        let mut pieces = vec![(0.0, dev)];
        for c in &reach {
            if c.distance < r {
                pieces.push((
                    c.distance,
                    develop_from_vertex_with(surface, c.cone_point, r - c.distance, opts)?,
                ));
            }
        }
        Ok(BallIndicator {
            radius: r,
            pieces,
            reach,
        })
    }

    pub fn contains(&self, y: &SurfacePoint) -> bool {
        self.pieces
            .iter()
            .any(|(spent, dev)| dev.straight_distance(y, self.radius - spent).is_some())
    }

    pub fn reach(&self) -> &[ConePointReach] {
        &self.reach
    }

    pub fn node_count(&self) -> usize {
        self.pieces.iter().map(|(_, d)| d.nodes.len()).sum()
    }
}

/// Monte Carlo estimate of the area of `B_x(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AreaEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Minimum sample count accepted by [`ball_area_mc`].
pub const MIN_MC_SAMPLES: usize = 1000;

/// Area of `B_x(r)` by uniform sampling; requires `r` below half the systole.
pub fn ball_area_mc(
    surface: &ConeSurface,
    x: &SurfacePoint,
    r: f64,
    n: usize,
    seed: u64,
) -> Result<AreaEstimate> {
    surface.check_radius(r, false)?;
    ball_area_mc_unchecked(surface, x, r, n, seed)
}

/// As [`ball_area_mc`] without the radius policy.
pub fn ball_area_mc_unchecked(
    surface: &ConeSurface,
    x: &SurfacePoint,
    r: f64,
    n: usize,
    seed: u64,
) -> Result<AreaEstimate> {
    if n < MIN_MC_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "at least {MIN_MC_SAMPLES} samples required (got {n})"
        )));
    }
    let ball = BallIndicator::new(surface, x, r)?;
    let sampler = AreaSampler::new(surface);
    let hits: usize = run_chunks(n, seed, |rng, count| {
        (0..count)
            .filter(|_| ball.contains(&sampler.point(rng)))
            .count()
    })
    .into_iter()
    .sum();
    let p = hits as f64 / n as f64;
    let area = surface.area();
    Ok(AreaEstimate {
        estimate: p * area,
        stderr: area * (p * (1.0 - p) / n as f64).sqrt(),
        samples: n,
        seed,
    })
}

/// How a traced geodesic ended.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TraceEnd {
    Completed,
    ConePointHit { class: usize, at: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trace {
    /// Start, every edge crossing (in the chart being entered), and the end.
    pub points: Vec<SurfacePoint>,
    pub end: TraceEnd,
    /// Direction at the last point, in its chart.
    pub direction: Vec2,
    pub length: f64,
    pub crossings: usize,
}

impl Trace {
    pub fn endpoint(&self) -> SurfacePoint {
        *self.points.last().expect("trace has a start")
    }

    pub fn final_tangent(&self) -> UnitTangent {
        UnitTangent {
            base: self.endpoint(),
            direction: self.direction,
        }
    }
}

/// Default cap on edge crossings per unit of traced length, relative to the
/// surface's smallest polygon.
const CROSSINGS_PER_LENGTH: f64 = 1e4;

/// Follows the straight geodesic from `u` for length `length`, stopping at
/// the first cone point within the hit tolerance.
pub fn trace_geodesic(surface: &ConeSurface, u: &UnitTangent, length: f64) -> Result<Trace> {
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "length must be positive (got {length})"
        )));
    }
    surface.locate(&u.base)?;
    let eps = surface.hit_tolerance();
    let min_size = surface
        .polygons()
        .iter()
        .map(|p| p.area / p.diameter)
        .fold(f64::INFINITY, f64::min);
    let cap = ((length / min_size + 1.0) * CROSSINGS_PER_LENGTH).min(1e8) as usize;

    let mut chart = u.base.chart;
    let mut p = u.base.coords;
    let mut d = u.direction.normalized();
    let mut travelled = 0.0;
    let mut points = vec![u.base];
    let mut crossings = 0;
    loop {
        let pg = surface.polygon(chart);
        let remaining = length - travelled;
        // Collinear edges share a supporting line, so among equally near
        // lines prefer the edge whose segment contains the exit point.
        let mut exit = (f64::INFINITY, usize::MAX);
        let mut exit_off = f64::INFINITY;
        for e in 0..pg.len() {
            let (a, b) = pg.edge(e);
            let outward = Vec2::new((b - a).y, -(b - a).x).normalized();
            let speed = d.dot(outward);
            if speed <= 1e-15 {
                continue;
            }
            let t = ((a - p).dot(outward) / speed).max(0.0);
            let q = p + d * t;
            let off = q.distance(clamp_to_segment(q, a, b));
            let better = if (t - exit.0).abs() <= eps {
                off < exit_off
            } else {
                t < exit.0
            };
            if better {
                exit = (t, e);
                exit_off = off;
            }
        }
        let horizon = exit.0.min(remaining);
        let mut hit: Option<(f64, usize)> = None;
        for (j, &v) in pg.vertices.iter().enumerate() {
            if !surface.is_cone_corner(chart, j) {
                continue;
            }
            let rel = v - p;
            let tau = rel.dot(d);
            if tau > eps
                && tau <= horizon + eps
                && d.cross(rel).abs() <= eps
                && hit.is_none_or(|h| tau < h.0)
            {
                hit = Some((tau, j));
            }
        }
        if let Some((tau, j)) = hit {
            let at = travelled + tau;
            points.push(SurfacePoint {
                chart,
                coords: pg.vertices[j],
            });
            return Ok(Trace {
                points,
                end: TraceEnd::ConePointHit {
                    class: surface.corner_class(chart, j),
                    at,
                },
                direction: d,
                length: at,
                crossings,
            });
        }
        if remaining <= exit.0 {
            points.push(SurfacePoint {
                chart,
                coords: p + d * remaining,
            });
            return Ok(Trace {
                points,
                end: TraceEnd::Completed,
                direction: d,
                length,
                crossings,
            });
        }
        let (t, e) = exit;
        if e == usize::MAX {
            return Err(Error::InvalidArgument("geodesic left its chart".into()));
        }
        let q = p + d * t;
        travelled += t;
        let link = surface.link(chart, e);
        let back = link.to_here.inverse();
        let (qa, qb) = surface.polygon(link.poly).edge(link.edge);
        chart = link.poly;
        p = clamp_to_segment(back.apply(q), qa, qb);
        d = back.apply_linear(d).normalized();
        points.push(SurfacePoint { chart, coords: p });
        crossings += 1;
        if crossings > cap {
            return Err(Error::BudgetExceeded(cap));
        }
    }
}

fn clamp_to_segment(p: Vec2, a: Vec2, b: Vec2) -> Vec2 {
    let ab = b - a;
    let t = ((p - a).dot(ab) / ab.norm_sq()).clamp(0.0, 1.0);
    a + ab * t
}

/// The point at distance `dist` from cone point `class` along the direction
/// with cone-angle coordinate `angle`, and the unit direction there pointing
/// away from the cone point.
pub fn point_near_cone(
    surface: &ConeSurface,
    class: usize,
    dist: f64,
    angle: f64,
) -> Result<UnitTangent> {
    let (poly, vertex, dir) = surface.corner_direction(class, angle);
    let start = UnitTangent {
        base: SurfacePoint {
            chart: poly,
            coords: surface.polygon(poly).vertices[vertex],
        },
        direction: dir,
    };
    let trace = trace_geodesic(surface, &start, dist)?;
    match trace.end {
        TraceEnd::Completed => Ok(trace.final_tangent()),
        TraceEnd::ConePointHit { class, .. } => Err(Error::InvalidArgument(format!(
            "the segment meets cone point {class} before length {dist}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{make_staircase_surface, square_torus};

    #[test]
    fn torus_ball_uses_at_most_nine_copies() {
        let t = square_torus();
        for (x, y) in [(0.5, 0.5), (0.1, 0.2), (0.45, 0.9)] {
            let dev = develop_ball(&t, &SurfacePoint::new(0, x, y), 0.4).unwrap();
            assert!(dev.nodes.len() <= 9, "{} nodes", dev.nodes.len());
            let mut seen: Vec<Vec2> = dev.nodes.iter().map(|n| n.iso.translation).collect();
            seen.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
            seen.dedup_by(|a, b| a.distance(*b) < 1e-9);
            // a copy straddling two parent wedges is split, not duplicated in area
            assert!(seen.len() <= dev.nodes.len());
        }
    }

    #[test]
    fn child_copies_share_their_entry_edge() {
        let s = make_staircase_surface(3).unwrap();
        let dev = develop_ball(&s, &SurfacePoint::new(0, 2.3, 0.4), 1.3).unwrap();
        for node in &dev.nodes {
            let (Some((parent, pe)), Some(ce)) = (node.parent, node.entry) else {
                continue;
            };
            let pn = &dev.nodes[parent];
            let (a, b) = s.polygon(pn.poly).edge(pe);
            let (c, d) = s.polygon(node.poly).edge(ce);
            assert!(pn.iso.apply(a).distance(node.iso.apply(d)) < 1e-9);
            assert!(pn.iso.apply(b).distance(node.iso.apply(c)) < 1e-9);
        }
    }

    #[test]
    fn zero_radius_is_rejected() {
        let t = square_torus();
        assert!(develop_ball(&t, &SurfacePoint::new(0, 0.5, 0.5), 0.0).is_err());
    }

    #[test]
    fn cone_basepoint_is_rejected() {
        let s = make_staircase_surface(2).unwrap();
        assert_eq!(
            develop_ball(&s, &SurfacePoint::new(0, 1.0, 0.0), 0.3).unwrap_err(),
            Error::BasepointOnConePoint(0)
        );
    }

    #[test]
    fn staircase_saddle_connections_from_the_cone_point() {
        // unit-length saddle connections: each unit side, and each vertical
        // segment between consecutive lattice points
        let s = make_staircase_surface(2).unwrap();
        let dev = develop_from_vertex(&s, 0, 1.0 + 1e-9).unwrap();
        let segs = dev.cone_segments(&s);
        let unit = segs
            .iter()
            .filter(|s| (s.length - 1.0).abs() < 1e-9)
            .count();
        assert!(segs.iter().all(|s| s.length > 1.0 - 1e-9));
        // 2g distinct sides and 2g−2 interior verticals, each seen from both ends
        assert_eq!(unit, 2 * (4 + 2));
    }

    #[test]
    fn torus_distance_wraps() {
        let t = square_torus();
        let d = distance(
            &t,
            &SurfacePoint::new(0, 0.1, 0.1),
            &SurfacePoint::new(0, 0.9, 0.1),
            1.0,
        )
        .unwrap();
        assert!((d.value().unwrap() - 0.2).abs() < 1e-12);
        let same = distance(
            &t,
            &SurfacePoint::new(0, 0.3, 0.3),
            &SurfacePoint::new(0, 0.3, 0.3),
            1.0,
        )
        .unwrap();
        assert_eq!(same.value(), Some(0.0));
    }

    #[test]
    fn torus_translation_flow() {
        let t = square_torus();
        let u = UnitTangent::new(SurfacePoint::new(0, 0.5, 0.5), Vec2::new(1.0, 0.0)).unwrap();
        let tr = trace_geodesic(&t, &u, 2.5).unwrap();
        let end = tr.endpoint();
        assert!(t
            .same_point(&end, &SurfacePoint::new(0, 0.0, 0.5), 1e-12)
            .unwrap());
        // the endpoint sits on the third edge, which is not crossed
        assert_eq!(tr.crossings, 2);
    }

    #[test]
    fn place_and_hit_cone_point() {
        let s = make_staircase_surface(2).unwrap();
        let x = point_near_cone(&s, 0, 0.3, 0.7).unwrap();
        let reach = reach_cone_points(&s, &x.base, 0.45).unwrap();
        assert_eq!(reach.len(), 1);
        assert!((reach[0].distance - 0.3).abs() < 1e-12);
        assert!(reach[0].visible);
        let back = UnitTangent {
            base: x.base,
            direction: -x.direction,
        };
        let tr = trace_geodesic(&s, &back, 1.0).unwrap();
        match tr.end {
            TraceEnd::ConePointHit { class, at } => {
                assert_eq!(class, 0);
                assert!((at - 0.3).abs() < 1e-12);
            }
            TraceEnd::Completed => panic!("missed the cone point"),
        }
        assert!(reach_cone_points(&s, &x.base, 0.25).unwrap().is_empty());
    }
}
