//! Piecewise-flat surfaces: convex polygons glued isometrically along edges.
//!
//! [`build_surface`] validates a [`SurfaceDescription`] and derives everything
//! the rest of the crate consumes: vertex classes with their cone angles and
//! curvature defects, the Euler characteristic, orientability, and the edge
//! transition maps used by the unfolding code.

mod builtin;
mod description;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

pub use builtin::{
    hexagonal_torus, make_flat_torus, make_square_klein_bottle, make_staircase_surface,
    make_two_cone_decagon, square_torus,
};
pub use description::{point_f64, EdgeRef, GlueMap, Gluing, Point, Scalar, SurfaceDescription};

use description::exact;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{point_segment_distance, Isometry, Vec2};

/// Relative tolerance for float edge-length matching.
pub const EPS_LEN: f64 = 1e-9;

/// A point of the surface, given in the coordinates of one polygon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub chart: usize,
    pub coords: Vec2,
}

impl SurfacePoint {
    pub fn new(chart: usize, x: f64, y: f64) -> Self {
        SurfacePoint {
            chart,
            coords: Vec2::new(x, y),
        }
    }
}

/// A point together with a unit direction in its chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitTangent {
    pub base: SurfacePoint,
    pub direction: Vec2,
}

impl UnitTangent {
    pub fn new(base: SurfacePoint, direction: Vec2) -> Result<Self> {
        let n = direction.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidArgument("zero direction".into()));
        }
        Ok(UnitTangent {
            base,
            direction: direction * (1.0 / n),
        })
    }

    pub fn from_angle(base: SurfacePoint, angle: f64) -> Self {
        UnitTangent {
            base,
            direction: Vec2::from_angle(angle),
        }
    }
}

/// Where a point sits inside its polygon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Interior,
    Edge(usize),
    Vertex(usize),
}

#[derive(Debug, Clone)]
pub struct Polygon {
    pub vertices: Vec<Vec2>,
    pub area: f64,
    /// Interior angle at each vertex, in `(0, π]`.
    pub corner_angles: Vec<f64>,
    pub diameter: f64,
}

impl Polygon {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge(&self, i: usize) -> (Vec2, Vec2) {
        (self.vertices[i], self.vertices[(i + 1) % self.len()])
    }

    pub fn centroid(&self) -> Vec2 {
        // area centroid of a convex polygon via a vertex fan
        let v0 = self.vertices[0];
        let mut acc = Vec2::ZERO;
        let mut total = 0.0;
        for i in 1..self.len() - 1 {
            let (a, b) = (self.vertices[i], self.vertices[i + 1]);
            let w = (a - v0).cross(b - v0) / 2.0;
            acc = acc + (v0 + a + b) * (w / 3.0);
            total += w;
        }
        acc * (1.0 / total)
    }
}

/// The partner of a polygon edge.
#[derive(Debug, Clone, Copy)]
pub struct EdgeLink {
    pub poly: usize,
    pub edge: usize,
    pub map: GlueMap,
    /// Sends the partner polygon's coordinates into this polygon's frame so
    /// that the two copies share the edge.
    pub to_here: Isometry,
}

/// One polygon corner in the cyclic order around its vertex.
#[derive(Debug, Clone, Copy)]
pub struct RingCorner {
    pub poly: usize,
    pub vertex: usize,
    pub width: f64,
    /// Cone-angle coordinate where this corner starts.
    pub cone_start: f64,
    /// The corner is swept clockwise in its polygon's own frame.
    pub reversed: bool,
    /// Placement of the polygon in the developed neighbourhood of the vertex;
    /// consecutive corners are adjacent and swept counterclockwise.
    pub placement: Isometry,
}

#[derive(Debug, Clone)]
pub struct VertexClass {
    pub id: usize,
    pub ring: Vec<RingCorner>,
    /// Total angle θ.
    pub angle: f64,
    /// Curvature defect κ = 2π − θ.
    pub defect: f64,
    /// θ as an exact count of right angles, when every corner is a right or straight angle
    /// of a rational polygon.
    pub quarter_turns: Option<i64>,
    pub position: Vec2,
}

impl VertexClass {
    pub fn is_cone(&self) -> bool {
        match self.quarter_turns {
            Some(k) => k != 4,
            None => (self.angle - TAU).abs() > 1e-9,
        }
    }
}

/// Where a systole value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SystoleProvenance {
    /// Exact lattice reduction of a flat torus.
    Lattice,
    /// Known from the construction.
    Construction,
    /// Certified by exhaustive enumeration below a cutoff.
    Certified,
    /// Supplied by the user.
    User,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystoleHint {
    pub value: f64,
    pub provenance: SystoleProvenance,
}

/// A validated surface. Immutable after construction.
#[derive(Debug, Clone)]
pub struct ConeSurface {
    description: SurfaceDescription,
    polygons: Vec<Polygon>,
    links: Vec<Vec<EdgeLink>>,
    corner_class: Vec<Vec<usize>>,
    corner_ring: Vec<Vec<usize>>,
    classes: Vec<VertexClass>,
    area: f64,
    euler: i64,
    orientable: bool,
    gauss_bonnet_residual: f64,
    exact: bool,
    diameter: f64,
    systole_hint: Option<SystoleHint>,
}

/// Validates a description and derives the cone data.
pub fn build_surface(desc: SurfaceDescription) -> Result<ConeSurface> {
    let exact_input = desc.is_exact();
    let polygons = desc
        .polygons
        .iter()
        .enumerate()
        .map(|(i, p)| validate_polygon(i, p))
        .collect::<Result<Vec<_>>>()?;

    // edge pairing
    let mut links: Vec<Vec<Option<EdgeLink>>> =
        polygons.iter().map(|p| vec![None; p.len()]).collect();
    for g in &desc.gluings {
        for e in [g.a, g.b] {
            if e.0 >= polygons.len() || e.1 >= polygons[e.0].len() {
                return Err(Error::InvalidArgument(format!(
                    "gluing refers to missing edge {}:{}",
                    e.0, e.1
                )));
            }
        }
        if g.a == g.b {
            return Err(Error::UnmatchedEdge {
                poly: g.a.0,
                edge: g.a.1,
            });
        }
        for e in [g.a, g.b] {
            if links[e.0][e.1].is_some() {
                return Err(Error::UnmatchedEdge {
                    poly: e.0,
                    edge: e.1,
                });
            }
        }
        check_edge_pair(&desc, &polygons, g)?;
        for (here, there) in [(g.a, g.b), (g.b, g.a)] {
            links[here.0][here.1] = Some(EdgeLink {
                poly: there.0,
                edge: there.1,
                map: g.map,
                to_here: edge_transition(&polygons, here, there, g.map),
            });
        }
    }
    let links: Vec<Vec<EdgeLink>> = links
        .into_iter()
        .enumerate()
        .map(|(p, row)| {
            row.into_iter()
                .enumerate()
                .map(|(e, l)| l.ok_or(Error::UnmatchedEdge { poly: p, edge: e }))
                .collect()
        })
        .collect::<Result<_>>()?;

    // connectivity and orientability by a signed traversal of the dual graph
    let mut sign = vec![0i8; polygons.len()];
    let mut orientable = true;
    if !polygons.is_empty() {
        sign[0] = 1;
        let mut stack = vec![0usize];
        while let Some(p) = stack.pop() {
            for link in &links[p] {
                let s = if link.map.preserves_orientation() {
                    sign[p]
                } else {
                    -sign[p]
                };
                if sign[link.poly] == 0 {
                    sign[link.poly] = s;
                    stack.push(link.poly);
                } else if sign[link.poly] != s {
                    orientable = false;
                }
            }
        }
    }
    if polygons.is_empty() || sign.contains(&0) {
        return Err(Error::Disconnected);
    }

    // vertex classes: union corners identified by each glued edge
    let offsets: Vec<usize> = polygons
        .iter()
        .scan(0, |acc, p| {
            let o = *acc;
            *acc += p.len();
            Some(o)
        })
        .collect();
    let n_corners: usize = polygons.iter().map(Polygon::len).sum();
    let mut uf = UnionFind::new(n_corners);
    for (p, row) in links.iter().enumerate() {
        let n = polygons[p].len();
        for (e, link) in row.iter().enumerate() {
            let m = polygons[link.poly].len();
            let (s, t) = (e, (e + 1) % n);
            let (s2, t2) = (link.edge, (link.edge + 1) % m);
            let (img_s, img_t) = if link.map.preserves_orientation() {
                (t2, s2)
            } else {
                (s2, t2)
            };
            uf.union(offsets[p] + s, offsets[link.poly] + img_s);
            uf.union(offsets[p] + t, offsets[link.poly] + img_t);
        }
    }
    let mut root_to_class = std::collections::HashMap::new();
    let mut corner_class: Vec<Vec<usize>> = polygons.iter().map(|p| vec![0; p.len()]).collect();
    for (p, poly) in polygons.iter().enumerate() {
        for (v, class) in corner_class[p].iter_mut().enumerate().take(poly.len()) {
            let root = uf.find(offsets[p] + v);
            let next = root_to_class.len();
            *class = *root_to_class.entry(root).or_insert(next);
        }
    }
    let n_classes = root_to_class.len();

    let quarter = corner_quarter_turns(&desc, &polygons);
    let mut classes = Vec::with_capacity(n_classes);
    let mut corner_ring: Vec<Vec<usize>> = polygons.iter().map(|p| vec![0; p.len()]).collect();
    for c in 0..n_classes {
        let (p0, v0) = (0..polygons.len())
            .flat_map(|p| (0..polygons[p].len()).map(move |v| (p, v)))
            .find(|&(p, v)| corner_class[p][v] == c)
            .expect("class has a corner");
        let ring = walk_ring(&polygons, &links, p0, v0);
        let members = corner_class.iter().flatten().filter(|&&k| k == c).count();
        if ring.len() != members {
            return Err(Error::NonManifoldVertex(c));
        }
        for (k, rc) in ring.iter().enumerate() {
            corner_ring[rc.poly][rc.vertex] = k;
        }
        let angle: f64 = ring.iter().map(|r| r.width).sum();
        let quarter_turns = ring
            .iter()
            .map(|r| quarter[r.poly][r.vertex])
            .sum::<Option<i64>>();
        let (angle, defect) = match quarter_turns {
            Some(k) => (k as f64 * FRAC_PI_2, (4 - k) as f64 * FRAC_PI_2),
            None => (angle, TAU - angle),
        };
        classes.push(VertexClass {
            id: c,
            position: polygons[p0].vertices[v0],
            ring,
            angle,
            defect,
            quarter_turns,
        });
    }

    let area: f64 = polygons.iter().map(|p| p.area).sum();
    let euler = n_classes as i64 - desc.gluings.len() as i64 + polygons.len() as i64;
    let exact_gb = classes.iter().all(|c| c.quarter_turns.is_some());
    let gauss_bonnet_residual = if exact_gb {
        let sum: i64 = classes.iter().map(|c| 4 - c.quarter_turns.unwrap()).sum();
        (sum - 4 * euler) as f64 * FRAC_PI_2
    } else {
        classes.iter().map(|c| c.defect).sum::<f64>() - TAU * euler as f64
    };
    let diameter = polygons.iter().map(|p| p.diameter).fold(0.0, f64::max);

    Ok(ConeSurface {
        description: desc,
        polygons,
        links,
        corner_class,
        corner_ring,
        classes,
        area,
        euler,
        orientable,
        gauss_bonnet_residual,
        exact: exact_input && exact_gb,
        diameter,
        systole_hint: None,
    })
}

fn validate_polygon(index: usize, points: &[Point]) -> Result<Polygon> {
    if points.len() < 3 {
        return Err(Error::DegeneratePolygon(index));
    }
    let n = points.len();
    let exact: Option<Vec<_>> = points.iter().map(exact::point).collect();
    if let Some(pts) = &exact {
        let mut twice_area = num::BigRational::from_integer(0.into());
        for i in 0..n {
            let (a, b, c) = (&pts[i], &pts[(i + 1) % n], &pts[(i + 2) % n]);
            let (ab, bc) = (exact::sub(b, a), exact::sub(c, b));
            if exact::sign(&exact::dot(&ab, &ab)) == 0 {
                return Err(Error::DegeneratePolygon(index));
            }
            let turn = exact::cross(&ab, &bc);
            if exact::sign(&turn) < 0
                || (exact::sign(&turn) == 0 && exact::sign(&exact::dot(&ab, &bc)) < 0)
            {
                return Err(Error::NonConvexPolygon(index));
            }
            twice_area += exact::cross(a, b);
        }
        if exact::sign(&twice_area) <= 0 {
            return Err(Error::DegeneratePolygon(index));
        }
    }
    let vertices: Vec<Vec2> = points.iter().map(point_f64).collect();
    let scale = vertices
        .iter()
        .map(|v| v.x.abs().max(v.y.abs()))
        .fold(1.0, f64::max);
    let mut twice_area = 0.0;
    let mut corner_angles = Vec::with_capacity(n);
    for i in 0..n {
        let (prev, v, next) = (
            vertices[(i + n - 1) % n],
            vertices[i],
            vertices[(i + 1) % n],
        );
        let (out, back) = (next - v, prev - v);
        if out.norm() <= EPS_LEN * scale {
            return Err(Error::DegeneratePolygon(index));
        }
        if exact.is_none() {
            let turn = (v - prev).cross(next - v);
            if turn < -1e-12 * scale * scale
                || (turn.abs() <= 1e-12 * scale * scale && (v - prev).dot(next - v) < 0.0)
            {
                return Err(Error::NonConvexPolygon(index));
            }
        }
        corner_angles.push(ccw_angle(out, back).clamp(0.0, PI));
        twice_area += v.cross(next);
    }
    if !(twice_area > 0.0) {
        return Err(Error::DegeneratePolygon(index));
    }
    let mut diameter: f64 = 0.0;
    for a in &vertices {
        for b in &vertices {
            diameter = diameter.max(a.distance(*b));
        }
    }
    Ok(Polygon {
        vertices,
        area: twice_area / 2.0,
        corner_angles,
        diameter,
    })
}

fn check_edge_pair(desc: &SurfaceDescription, polygons: &[Polygon], g: &Gluing) -> Result<()> {
    let ends = |e: EdgeRef| {
        let pts = &desc.polygons[e.0];
        (&pts[e.1], &pts[(e.1 + 1) % pts.len()])
    };
    let (a0, a1) = ends(g.a);
    let (b0, b1) = ends(g.b);
    let unmatched = Error::UnmatchedEdge {
        poly: g.a.0,
        edge: g.a.1,
    };
    let exact_pts = [a0, a1, b0, b1]
        .into_iter()
        .map(exact::point)
        .collect::<Option<Vec<_>>>();
    if let Some(p) = exact_pts {
        let (va, vb) = (exact::sub(&p[1], &p[0]), exact::sub(&p[3], &p[2]));
        if exact::dot(&va, &va) != exact::dot(&vb, &vb) {
            return Err(unmatched);
        }
        if g.map == GlueMap::Translation && (va[0] != -vb[0].clone() || va[1] != -vb[1].clone()) {
            return Err(Error::InvalidGluing {
                poly: g.a.0,
                edge: g.a.1,
                reason: "edge vectors are not antiparallel".into(),
            });
        }
        return Ok(());
    }
    let (pa, pb) = (polygons[g.a.0].edge(g.a.1), polygons[g.b.0].edge(g.b.1));
    let (va, vb) = (pa.1 - pa.0, pb.1 - pb.0);
    let scale = va.norm().max(1.0);
    if (va.norm() - vb.norm()).abs() > EPS_LEN * scale {
        return Err(unmatched);
    }
    if g.map == GlueMap::Translation && (va + vb).norm() > EPS_LEN * scale {
        return Err(Error::InvalidGluing {
            poly: g.a.0,
            edge: g.a.1,
            reason: "edge vectors are not antiparallel".into(),
        });
    }
    Ok(())
}

/// Isometry sending polygon `there` into the frame of `here` across the glued edge.
fn edge_transition(polygons: &[Polygon], here: EdgeRef, there: EdgeRef, map: GlueMap) -> Isometry {
    let (p0, p1) = polygons[here.0].edge(here.1);
    let (q0, q1) = polygons[there.0].edge(there.1);
    if map.preserves_orientation() {
        if map == GlueMap::Translation {
            // keep pure translations free of rounding in the linear part
            return Isometry::translation(p0 - q1);
        }
        Isometry::segment_map(q1, q0, p0, p1, true)
    } else {
        Isometry::segment_map(q0, q1, p0, p1, false)
    }
}

fn corner_quarter_turns(desc: &SurfaceDescription, polygons: &[Polygon]) -> Vec<Vec<Option<i64>>> {
    desc.polygons
        .iter()
        .zip(polygons)
        .map(|(pts, _)| {
            let n = pts.len();
            (0..n)
                .map(|i| {
                    let prev = exact::point(&pts[(i + n - 1) % n])?;
                    let v = exact::point(&pts[i])?;
                    let next = exact::point(&pts[(i + 1) % n])?;
                    let (out, back) = (exact::sub(&next, &v), exact::sub(&prev, &v));
                    if exact::sign(&exact::dot(&out, &back)) == 0 {
                        Some(1)
                    } else if exact::sign(&exact::cross(&out, &back)) == 0 {
                        Some(2)
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect()
}

/// Cyclic order of corners around the vertex of corner `(p0, v0)`.
fn walk_ring(
    polygons: &[Polygon],
    links: &[Vec<EdgeLink>],
    p0: usize,
    v0: usize,
) -> Vec<RingCorner> {
    let mut ring = Vec::new();
    let (mut p, mut v, mut entered) = (p0, v0, v0);
    let mut placement = Isometry::IDENTITY;
    let mut cone_start = 0.0;
    let limit: usize = polygons.iter().map(Polygon::len).sum();
    loop {
        let n = polygons[p].len();
        let reversed = entered != v;
        let width = polygons[p].corner_angles[v];
        ring.push(RingCorner {
            poly: p,
            vertex: v,
            width,
            cone_start,
            reversed,
            placement,
        });
        cone_start += width;
        let exit = if entered == v { (v + n - 1) % n } else { v };
        let link = links[p][exit];
        placement = placement.compose(&link.to_here);
        // the shared vertex is the start or the end of `exit`
        let at_start = exit == v;
        let m = polygons[link.poly].len();
        let (s2, t2) = (link.edge, (link.edge + 1) % m);
        let next_v = match (link.map.preserves_orientation(), at_start) {
            (true, true) => t2,
            (true, false) => s2,
            (false, true) => s2,
            (false, false) => t2,
        };
        p = link.poly;
        v = next_v;
        entered = link.edge;
        if (p == p0 && v == v0 && entered == v0) || ring.len() > limit {
            break;
        }
    }
    ring
}

/// Counterclockwise angle from `a` to `b`, in `[-π/2, 3π/2)`.
fn ccw_angle(a: Vec2, b: Vec2) -> f64 {
    let phi = a.cross(b).atan2(a.dot(b));
    if phi < -FRAC_PI_2 {
        phi + TAU
    } else {
        phi
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl ConeSurface {
    pub fn description(&self) -> &SurfaceDescription {
        &self.description
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    pub fn polygon(&self, i: usize) -> &Polygon {
        &self.polygons[i]
    }

    pub fn link(&self, poly: usize, edge: usize) -> &EdgeLink {
        &self.links[poly][edge]
    }

    pub fn vertex_classes(&self) -> &[VertexClass] {
        &self.classes
    }

    pub fn vertex_class(&self, id: usize) -> &VertexClass {
        &self.classes[id]
    }

    pub fn corner_class(&self, poly: usize, vertex: usize) -> usize {
        self.corner_class[poly][vertex]
    }

    pub fn is_cone_corner(&self, poly: usize, vertex: usize) -> bool {
        self.classes[self.corner_class[poly][vertex]].is_cone()
    }

    /// Vertex classes whose angle differs from 2π.
    pub fn cone_points(&self) -> impl Iterator<Item = &VertexClass> {
        self.classes.iter().filter(|c| c.is_cone())
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.euler
    }

    pub fn is_orientable(&self) -> bool {
        self.orientable
    }

    /// Σκ_v − 2πχ; exactly zero when every corner angle is known exactly.
    pub fn gauss_bonnet_residual(&self) -> f64 {
        self.gauss_bonnet_residual
    }

    /// Rational input with exactly known cone angles.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn total_defect(&self) -> f64 {
        self.classes.iter().map(|c| c.defect).sum()
    }

    /// Every cone angle is at least 2π.
    pub fn is_nonpositively_curved(&self) -> bool {
        self.classes.iter().all(|c| match c.quarter_turns {
            Some(k) => k >= 4,
            None => c.defect <= 1e-9,
        })
    }

    /// Largest polygon diameter, used as a length scale for tolerances.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn hit_tolerance(&self) -> f64 {
        1e-9 * self.diameter.max(1e-300)
    }

    pub fn systole_hint(&self) -> Option<SystoleHint> {
        self.systole_hint
    }

    pub fn with_systole_hint(mut self, value: f64, provenance: SystoleProvenance) -> Self {
        self.systole_hint = Some(SystoleHint { value, provenance });
        self
    }

    /// Half the known systole, if any.
    pub fn half_systole(&self) -> Option<f64> {
        self.systole_hint.map(|h| h.value / 2.0)
    }

    /// Rejects `r ≥ sys/2` unless forced. Returns whether the radius is
    /// known to lie below half the systole.
    pub fn check_radius(&self, r: f64, force: bool) -> Result<bool> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "radius must be positive (got {r})"
            )));
        }
        match self.half_systole() {
            Some(h) if r < h => Ok(true),
            Some(h) if !force => Err(Error::RadiusTooLarge {
                radius: r,
                half_systole: h,
            }),
            _ => Ok(false),
        }
    }

    fn locate_eps(&self) -> f64 {
        1e-10 * self.diameter.max(1.0)
    }

    /// Classifies a point against its polygon.
    pub fn locate(&self, p: &SurfacePoint) -> Result<Location> {
        let poly = self
            .polygons
            .get(p.chart)
            .ok_or(Error::PointOutsideChart(p.chart))?;
        let eps = self.locate_eps();
        if let Some(v) = poly
            .vertices
            .iter()
            .position(|v| v.distance(p.coords) <= eps)
        {
            return Ok(Location::Vertex(v));
        }
        let mut on_edge = None;
        for i in 0..poly.len() {
            let (a, b) = poly.edge(i);
            let side = (b - a).cross(p.coords - a) / (b - a).norm();
            if side < -eps {
                return Err(Error::PointOutsideChart(p.chart));
            }
            if side <= eps && point_segment_distance(p.coords, a, b) <= eps {
                on_edge = Some(i);
            }
        }
        Ok(on_edge.map_or(Location::Interior, Location::Edge))
    }

    /// Vertex class of `p` when it sits on a polygon corner.
    pub fn vertex_at(&self, p: &SurfacePoint) -> Result<Option<usize>> {
        Ok(match self.locate(p)? {
            Location::Vertex(v) => Some(self.corner_class(p.chart, v)),
            _ => None,
        })
    }

    /// Every `(chart, coords)` pair that names the same surface point.
    pub fn representations(&self, p: &SurfacePoint) -> Result<Vec<SurfacePoint>> {
        Ok(match self.locate(p)? {
            Location::Interior => vec![*p],
            Location::Edge(e) => {
                let link = self.link(p.chart, e);
                let back = link.to_here.inverse();
                vec![
                    *p,
                    SurfacePoint {
                        chart: link.poly,
                        coords: back.apply(p.coords),
                    },
                ]
            }
            Location::Vertex(v) => {
                let class = &self.classes[self.corner_class(p.chart, v)];
                class
                    .ring
                    .iter()
                    .map(|rc| SurfacePoint {
                        chart: rc.poly,
                        coords: self.polygons[rc.poly].vertices[rc.vertex],
                    })
                    .collect()
            }
        })
    }

    /// Whether two chart points name the same surface point, within `tol`.
    pub fn same_point(&self, a: &SurfacePoint, b: &SurfacePoint, tol: f64) -> Result<bool> {
        let reps = self.representations(a)?;
        Ok(reps
            .iter()
            .any(|r| r.chart == b.chart && r.coords.distance(b.coords) <= tol))
    }

    /// Maps a point on edge `edge` of `poly` to the partner polygon's frame.
    pub fn glue_point(&self, poly: usize, edge: usize, coords: Vec2) -> SurfacePoint {
        let link = self.link(poly, edge);
        SurfacePoint {
            chart: link.poly,
            coords: link.to_here.inverse().apply(coords),
        }
    }

    /// Cone-angle coordinate, in `[0, θ)`, of a direction leaving the corner
    /// `(poly, vertex)` given in that polygon's frame.
    pub fn cone_coordinate(&self, poly: usize, vertex: usize, direction: Vec2) -> f64 {
        let class = &self.classes[self.corner_class[poly][vertex]];
        let rc = &class.ring[self.corner_ring[poly][vertex]];
        let pg = &self.polygons[poly];
        let start = pg.vertices[(vertex + 1) % pg.len()] - pg.vertices[vertex];
        let phi = ccw_angle(start, direction).clamp(0.0, rc.width);
        let local = if rc.reversed { rc.width - phi } else { phi };
        (rc.cone_start + local).rem_euclid(class.angle)
    }

    /// The corner and local direction at cone-angle coordinate `angle` of a vertex class.
    pub fn corner_direction(&self, class: usize, angle: f64) -> (usize, usize, Vec2) {
        let c = &self.classes[class];
        let a = angle.rem_euclid(c.angle);
        let rc = c
            .ring
            .iter()
            .rev()
            .find(|rc| rc.cone_start <= a)
            .unwrap_or(&c.ring[0]);
        let local = (a - rc.cone_start).clamp(0.0, rc.width);
        let phi = if rc.reversed { rc.width - local } else { local };
        let pg = &self.polygons[rc.poly];
        let start = (pg.vertices[(rc.vertex + 1) % pg.len()] - pg.vertices[rc.vertex]).normalized();
        let (s, co) = phi.sin_cos();
        let dir = Vec2::new(start.x * co - start.y * s, start.x * s + start.y * co);
        (rc.poly, rc.vertex, dir)
    }
}
