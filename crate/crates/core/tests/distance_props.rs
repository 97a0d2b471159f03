//! Distances and balls against an independent graph oracle.
//!
//! The oracle samples every polygon edge densely, identifies samples across
//! each gluing straight from the surface description, and runs Dijkstra on
//! the complete graph of samples inside each convex polygon. Every graph path
//! is a real path on the surface, so the oracle is an upper bound that
//! converges as the sampling is refined.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use cone_systole::geometry::Vec2;
use cone_systole::sampling::{chunk_rng, AreaSampler};
use cone_systole::surface::{
    make_square_klein_bottle, make_staircase_surface, make_two_cone_decagon, point_f64,
    ConeSurface, GlueMap, SurfacePoint,
};
use cone_systole::unfold::{develop_ball, distance, BallIndicator};
use proptest::prelude::*;

struct Oracle {
    /// (polygon, position) of each node.
    nodes: Vec<(usize, Vec2)>,
    /// Node ids lying on each polygon's boundary.
    on_poly: Vec<Vec<usize>>,
    adj: Vec<Vec<(usize, f64)>>,
}

impl Oracle {
    fn new(s: &ConeSurface, per_edge: usize) -> Self {
        let desc = s.description();
        let mut nodes = Vec::new();
        let mut on_poly = vec![Vec::new(); desc.polygons.len()];
        // node ids of the samples of each edge, by parameter t = k / per_edge
        let mut edge_nodes: Vec<Vec<Vec<usize>>> = Vec::new();
        for (p, poly) in desc.polygons.iter().enumerate() {
            let mut per_poly = Vec::new();
            for e in 0..poly.len() {
                let a = point_f64(&poly[e]);
                let b = point_f64(&poly[(e + 1) % poly.len()]);
                let ids: Vec<usize> = (0..=per_edge)
                    .map(|k| {
                        nodes.push((p, a + (b - a) * (k as f64 / per_edge as f64)));
                        on_poly[p].push(nodes.len() - 1);
                        nodes.len() - 1
                    })
                    .collect();
                per_poly.push(ids);
            }
            edge_nodes.push(per_poly);
        }
        let mut adj = vec![Vec::new(); nodes.len()];
        for list in &on_poly {
            for (i, &u) in list.iter().enumerate() {
                for &v in &list[i + 1..] {
                    let d = nodes[u].1.distance(nodes[v].1);
                    adj[u].push((v, d));
                    adj[v].push((u, d));
                }
            }
        }
        for g in &desc.gluings {
            let a = &edge_nodes[g.a.0][g.a.1];
            let b = &edge_nodes[g.b.0][g.b.1];
            for k in 0..=per_edge {
                let j = if g.map == GlueMap::Flip {
                    k
                } else {
                    per_edge - k
                };
                adj[a[k]].push((b[j], 0.0));
                adj[b[j]].push((a[k], 0.0));
            }
        }
        Oracle {
            nodes,
            on_poly,
            adj,
        }
    }

    fn distance(&self, x: &SurfacePoint, y: &SurfacePoint) -> f64 {
        let n = self.nodes.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut heap = BinaryHeap::new();
        for &u in &self.on_poly[x.chart] {
            dist[u] = x.coords.distance(self.nodes[u].1);
            heap.push(Item(dist[u], u));
        }
        let mut best = if x.chart == y.chart {
            x.coords.distance(y.coords)
        } else {
            f64::INFINITY
        };
        while let Some(Item(d, u)) = heap.pop() {
            if d > dist[u] || d >= best {
                continue;
            }
            if self.nodes[u].0 == y.chart {
                best = best.min(d + self.nodes[u].1.distance(y.coords));
            }
            for &(v, w) in &self.adj[u] {
                if d + w < dist[v] {
                    dist[v] = d + w;
                    heap.push(Item(d + w, v));
                }
            }
        }
        best
    }
}

struct Item(f64, usize);

impl PartialEq for Item {
    fn eq(&self, o: &Self) -> bool {
        self.0 == o.0
    }
}
impl Eq for Item {}
impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Item {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0)
    }
}

fn compare_with_oracle(s: &ConeSurface, per_edge: usize, pairs: usize, seed: u64) {
    let oracle = Oracle::new(s, per_edge);
    let sampler = AreaSampler::new(s);
    let mut rng = chunk_rng(seed, 0);
    for _ in 0..pairs {
        let x = sampler.point(&mut rng);
        let y = sampler.point(&mut rng);
        let d = distance(s, &x, &y, 4.0)
            .unwrap()
            .value()
            .expect("within cutoff");
        let o = oracle.distance(&x, &y);
        assert!(o >= d - 1e-9, "oracle {o} below computed {d}");
        assert!(
            o <= d * 1.01 + 1e-9,
            "oracle {o} vs computed {d} at {x:?} {y:?}"
        );
    }
}

#[test]
fn staircase_distances_match_graph_oracle() {
    compare_with_oracle(&make_staircase_surface(2).unwrap(), 160, 60, 1);
}

#[test]
fn decagon_distances_match_graph_oracle() {
    compare_with_oracle(&make_two_cone_decagon().unwrap(), 120, 60, 2);
}

#[test]
fn klein_distances_match_graph_oracle() {
    compare_with_oracle(&make_square_klein_bottle(1.0, 1.5).unwrap(), 200, 60, 3);
}

#[test]
fn embedded_ball_has_multiplicity_one() {
    let s = make_staircase_surface(2).unwrap();
    let sampler = AreaSampler::new(&s);
    let mut rng = chunk_rng(4, 0);
    let r = 0.45;
    for _ in 0..5 {
        let x = sampler.point(&mut rng);
        let dev = develop_ball(&s, &x, r).unwrap();
        assert!(dev.guaranteed);
        let ball = BallIndicator::new(&s, &x, r).unwrap();
        for _ in 0..2000 {
            let y = sampler.point(&mut rng);
            let m = dev.multiplicity(&y);
            assert!(m <= 1, "y covered {m} times");
            let d = distance(&s, &x, &y, 1.0)
                .unwrap()
                .value()
                .unwrap_or(f64::INFINITY);
            if (d - r).abs() > 1e-9 {
                assert_eq!(ball.contains(&y), d < r, "d = {d}");
            }
        }
    }
}

fn staircase_point() -> impl Strategy<Value = SurfacePoint> {
    (0.001f64..2.999, 0.001f64..0.999).prop_map(|(x, y)| SurfacePoint::new(0, x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn symmetric_and_triangle(x in staircase_point(), y in staircase_point(), z in staircase_point()) {
        let s = make_staircase_surface(2).unwrap();
        let d = |a: &SurfacePoint, b: &SurfacePoint| distance(&s, a, b, 6.0).unwrap().value().unwrap();
        let (xy, yx, yz, xz) = (d(&x, &y), d(&y, &x), d(&y, &z), d(&x, &z));
        prop_assert!((xy - yx).abs() < 1e-9, "{xy} vs {yx}");
        prop_assert!(xz <= xy + yz + 1e-9);
        prop_assert!(xy <= x.coords.distance(y.coords) + 1e-12);
    }
}
