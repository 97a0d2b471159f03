//! Area-uniform sampling and reproducible parallel Monte Carlo.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::geometry::Vec2;
use crate::surface::{ConeSurface, SurfacePoint, UnitTangent};

/// Number of independent streams a Monte Carlo run is split into. Fixed so
/// results do not depend on the size of the thread pool.
pub const MC_CHUNKS: u64 = 64;

/// Generator for chunk `chunk` of a run seeded with `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Splits `n` draws into [`MC_CHUNKS`] streams, runs them in parallel and
/// returns the per-chunk results in chunk order.
pub fn run_chunks<T, F>(n: usize, seed: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> T + Sync,
{
    run_chunks_from(n, seed, 0, f)
}

/// As [`run_chunks`], using streams `first_stream..first_stream + MC_CHUNKS`.
pub fn run_chunks_from<T, F>(n: usize, seed: u64, first_stream: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, usize) -> T + Sync,
{
    let chunks = MC_CHUNKS as usize;
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let count = n / chunks + usize::from(c < n % chunks);
            let mut rng = chunk_rng(seed, first_stream + c as u64);
            f(&mut rng, count)
        })
        .collect()
}

/// Draws points uniformly with respect to area.
#[derive(Debug, Clone)]
pub struct AreaSampler<'a> {
    surface: &'a ConeSurface,
    polygons: WeightedIndex<f64>,
    triangles: Vec<WeightedIndex<f64>>,
}

impl<'a> AreaSampler<'a> {
    pub fn new(surface: &'a ConeSurface) -> Self {
        let polygons = WeightedIndex::new(surface.polygons().iter().map(|p| p.area))
            .expect("polygons have positive area");
        let triangles =
            surface
                .polygons()
                .iter()
                .map(|p| {
                    let v0 = p.vertices[0];
                    WeightedIndex::new((1..p.len() - 1).map(|i| {
                        ((p.vertices[i] - v0).cross(p.vertices[i + 1] - v0) / 2.0).max(0.0)
                    }))
                    .expect("fan has positive area")
                })
                .collect();
        AreaSampler {
            surface,
            polygons,
            triangles,
        }
    }

    pub fn point<R: Rng + ?Sized>(&self, rng: &mut R) -> SurfacePoint {
        let chart = self.polygons.sample(rng);
        let poly = self.surface.polygon(chart);
        let t = self.triangles[chart].sample(rng) + 1;
        let (a, b, c) = (poly.vertices[0], poly.vertices[t], poly.vertices[t + 1]);
        let (u, v): (f64, f64) = (rng.gen(), rng.gen());
        let s = u.sqrt();
        let coords = a * (1.0 - s) + b * (s * (1.0 - v)) + c * (s * v);
        SurfacePoint { chart, coords }
    }

    /// A point with a direction uniform on the circle: a Liouville sample.
    pub fn tangent<R: Rng + ?Sized>(&self, rng: &mut R) -> UnitTangent {
        let base = self.point(rng);
        let angle = rng.gen_range(0.0..std::f64::consts::TAU);
        UnitTangent {
            base,
            direction: Vec2::from_angle(angle),
        }
    }
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(sum: f64, sum_sq: f64, n: usize) -> (f64, f64) {
    let n_f = n as f64;
    let mean = sum / n_f;
    if n < 2 {
        return (mean, f64::INFINITY);
    }
    let var = ((sum_sq - n_f * mean * mean) / (n_f - 1.0)).max(0.0);
    (mean, (var / n_f).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::make_staircase_surface;

    #[test]
    fn samples_land_in_their_chart() {
        let s = make_staircase_surface(2).unwrap();
        let sampler = AreaSampler::new(&s);
        let mut rng = chunk_rng(1, 0);
        for _ in 0..1000 {
            let p = sampler.point(&mut rng);
            assert!(s.locate(&p).is_ok());
        }
    }

    #[test]
    fn chunks_are_reproducible_and_cover_n() {
        let draw =
            |rng: &mut ChaCha8Rng, k: usize| (0..k).map(|_| rng.gen::<u64>()).collect::<Vec<_>>();
        let a = run_chunks(1001, 9, draw);
        let b = run_chunks(1001, 9, draw);
        assert_eq!(a, b);
        assert_eq!(a.iter().map(Vec::len).sum::<usize>(), 1001);
        assert_ne!(a[0].first(), a[1].first());
    }

    #[test]
    fn uniform_in_a_rectangle() {
        // the staircase is a single 3 × 1 rectangle; the mean x-coordinate is 1.5
        let s = make_staircase_surface(2).unwrap();
        let sampler = AreaSampler::new(&s);
        let mut rng = chunk_rng(3, 0);
        let n = 20_000;
        let (mut sum, mut sq) = (0.0, 0.0);
        for _ in 0..n {
            let x = sampler.point(&mut rng).coords.x;
            sum += x;
            sq += x * x;
        }
        let (mean, se) = mean_stderr(sum, sq, n);
        assert!((mean - 1.5).abs() < 4.0 * se, "{mean} ± {se}");
    }
}
