//! Curvature functionals of metric disks on cone surfaces.
//!
//! Curvature is atomic, `κ_p` at each cone point, so the disk integrals
//! collapse to finite sums. With `d_p = d(x, p)`:
//!
//! * `G_r(x) = Σ_{d_p ≤ r} κ_p (r − d_p)² / 2`
//! * `F_r(x) = Σ_{p visible, d_p ≤ r} (2π/θ_p) κ_p (r − d_p)² / 2`
//!
//! The weight `2π/θ_p` in `F_r` is the share of the unit circle at `x`
//! that one geodesic segment to `p` receives once the curvature of `p` is
//! spread over its `θ_p` worth of directions; with it the Liouville identity
//! `∫_M F_r = 2πχ · πr⁴/12` holds exactly.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampling::{mean_stderr, run_chunks_from, AreaSampler, MC_CHUNKS};
use crate::surface::{ConeSurface, SurfacePoint};
use crate::unfold::{reach_cone_points_cached, ConePointReach, SaddleCache, UnfoldOptions};

#[derive(Debug, Clone, Copy, Default)]
pub struct FunctionalOptions {
    pub unfold: UnfoldOptions,
    /// Accept radii at or above half the systole; results become advisory.
    pub allow_large_radius: bool,
}

/// One cone point's share of a functional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Contribution {
    pub cone_point: usize,
    pub defect: f64,
    pub distance: f64,
    pub visible: bool,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalValue {
    pub value: f64,
    pub r: f64,
    pub basepoint: SurfacePoint,
    pub decomposition: Vec<Contribution>,
    /// The radius is not known to lie below half the systole.
    pub advisory: bool,
}

/// Checks the radius policy; returns whether results are advisory.
fn radius_policy(surface: &ConeSurface, r: f64, opts: &FunctionalOptions) -> Result<bool> {
    Ok(!surface.check_radius(r, opts.allow_large_radius)?)
}

fn g_term(c: &ConePointReach, r: f64) -> f64 {
    c.defect * (r - c.distance).powi(2) / 2.0
}

fn f_term(c: &ConePointReach, r: f64) -> f64 {
    if c.visible {
        TAU / c.angle * g_term(c, r)
    } else {
        0.0
    }
}

fn assemble(
    x: &SurfacePoint,
    r: f64,
    reach: &[ConePointReach],
    advisory: bool,
    term: fn(&ConePointReach, f64) -> f64,
) -> FunctionalValue {
    let decomposition: Vec<Contribution> = reach
        .iter()
        .map(|c| Contribution {
            cone_point: c.cone_point,
            defect: c.defect,
            distance: c.distance,
            visible: c.visible,
            value: term(c, r),
        })
        .collect();
    FunctionalValue {
        value: decomposition.iter().map(|c| c.value).sum(),
        r,
        basepoint: *x,
        decomposition,
        advisory,
    }
}

/// `G_r(x)`: curvature of the disks `B_x(ρ)` weighted by `r − ρ`.
pub fn g_r(surface: &ConeSurface, x: &SurfacePoint, r: f64) -> Result<FunctionalValue> {
    g_r_with(surface, x, r, &FunctionalOptions::default())
}

pub fn g_r_with(
    surface: &ConeSurface,
    x: &SurfacePoint,
    r: f64,
    opts: &FunctionalOptions,
) -> Result<FunctionalValue> {
    let advisory = radius_policy(surface, r, opts)?;
    let reach = reach_cone_points_cached(surface, x, r, None, &opts.unfold)?;
    Ok(assemble(x, r, &reach, advisory, g_term))
}

/// `F_r(x)`: curvature met by geodesics leaving `x`, weighted by arc length.
pub fn f_r(surface: &ConeSurface, x: &SurfacePoint, r: f64) -> Result<FunctionalValue> {
    f_r_with(surface, x, r, &FunctionalOptions::default())
}

pub fn f_r_with(
    surface: &ConeSurface,
    x: &SurfacePoint,
    r: f64,
    opts: &FunctionalOptions,
) -> Result<FunctionalValue> {
    if !surface.is_nonpositively_curved() {
        return Err(Error::NotNonpositivelyCurved);
    }
    let advisory = radius_policy(surface, r, opts)?;
    let reach = reach_cone_points_cached(surface, x, r, None, &opts.unfold)?;
    Ok(assemble(x, r, &reach, advisory, f_term))
}

/// Both functionals from one development.
pub fn f_and_g(
    surface: &ConeSurface,
    x: &SurfacePoint,
    r: f64,
    cache: Option<&SaddleCache>,
    opts: &FunctionalOptions,
) -> Result<(FunctionalValue, FunctionalValue)> {
    if !surface.is_nonpositively_curved() {
        return Err(Error::NotNonpositivelyCurved);
    }
    let advisory = radius_policy(surface, r, opts)?;
    let reach = reach_cone_points_cached(surface, x, r, cache, &opts.unfold)?;
    Ok((
        assemble(x, r, &reach, advisory, f_term),
        assemble(x, r, &reach, advisory, g_term),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallArea {
    pub area: f64,
    pub g: FunctionalValue,
    /// Positive curvature or an advisory radius: the value only bounds the
    /// true area from below.
    pub lower_bound_only: bool,
}

/// `πr² − G_r(x)`, the exact ball area on nonpositively curved surfaces.
pub fn ball_area_formula(surface: &ConeSurface, x: &SurfacePoint, r: f64) -> Result<BallArea> {
    ball_area_formula_with(surface, x, r, &FunctionalOptions::default())
}

pub fn ball_area_formula_with(
    surface: &ConeSurface,
    x: &SurfacePoint,
    r: f64,
    opts: &FunctionalOptions,
) -> Result<BallArea> {
    let g = g_r_with(surface, x, r, opts)?;
    Ok(BallArea {
        area: PI * r * r - g.value,
        lower_bound_only: g.advisory || !surface.is_nonpositively_curved(),
        g,
    })
}

/// `2πχ · πr⁴/12`.
pub fn liouville_rhs(chi: i64, r: f64) -> f64 {
    TAU * chi as f64 * PI * r.powi(4) / 12.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiouvilleCheck {
    /// Monte Carlo estimate of `∫_M F_r`.
    pub estimate: f64,
    pub stderr: f64,
    pub exact: f64,
    pub samples: usize,
    pub seed: u64,
}

impl LiouvilleCheck {
    /// Deviation in units of the standard error.
    pub fn z_score(&self) -> f64 {
        if self.stderr > 0.0 {
            (self.estimate - self.exact) / self.stderr
        } else if self.estimate == self.exact {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Area-uniform Monte Carlo estimate of `∫_M F_r` against its exact value.
pub fn average_f_identity_check(
    surface: &ConeSurface,
    r: f64,
    n: usize,
    seed: u64,
) -> Result<LiouvilleCheck> {
    average_f_identity_check_with(surface, r, n, seed, &FunctionalOptions::default())
}

pub fn average_f_identity_check_with(
    surface: &ConeSurface,
    r: f64,
    n: usize,
    seed: u64,
    opts: &FunctionalOptions,
) -> Result<LiouvilleCheck> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "at least two sample points required".into(),
        ));
    }
    if !surface.is_nonpositively_curved() {
        return Err(Error::NotNonpositivelyCurved);
    }
    radius_policy(surface, r, opts)?;
    let cache = SaddleCache::new(surface, r, &opts.unfold)?;
    let sampler = AreaSampler::new(surface);
    let parts = run_chunks_from(n, seed, 0, |rng, count| -> Result<(f64, f64)> {
        let (mut s, mut sq) = (0.0, 0.0);
        for _ in 0..count {
            let x = sampler.point(rng);
            let reach = reach_cone_points_cached(surface, &x, r, Some(&cache), &opts.unfold)?;
            let f: f64 = reach.iter().map(|c| f_term(c, r)).sum();
            s += f;
            sq += f * f;
        }
        Ok((s, sq))
    });
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for p in parts {
        let (s, sq) = p?;
        sum += s;
        sum_sq += sq;
    }
    let (mean, se) = mean_stderr(sum, sum_sq, n);
    let area = surface.area();
    Ok(LiouvilleCheck {
        estimate: mean * area,
        stderr: se * area,
        exact: liouville_rhs(surface.euler_characteristic(), r),
        samples: n,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RichDiskReport {
    pub basepoint: SurfacePoint,
    pub r: f64,
    pub g: f64,
    /// `(2πχ/area) · πr⁴/12`, the mean of `F_r` over the surface.
    pub average_bound: f64,
    /// Area of the ball at the returned basepoint.
    pub ball_area: f64,
    pub sample_count: usize,
    pub seed: u64,
}

/// Sampling rounds attempted by [`find_rich_disk`] before giving up; each
/// round doubles the number of points.
pub const RICH_DISK_ROUNDS: u32 = 6;

/// A basepoint whose `G_r` is at most the surface average of `F_r`.
pub fn find_rich_disk(
    surface: &ConeSurface,
    r: f64,
    n: usize,
    seed: u64,
) -> Result<RichDiskReport> {
    find_rich_disk_with(surface, r, n, seed, &FunctionalOptions::default())
}

pub fn find_rich_disk_with(
    surface: &ConeSurface,
    r: f64,
    n: usize,
    seed: u64,
    opts: &FunctionalOptions,
) -> Result<RichDiskReport> {
    if n < 100 {
        return Err(Error::InvalidArgument(format!(
            "at least 100 sample points required (got {n})"
        )));
    }
    if !surface.is_nonpositively_curved() {
        return Err(Error::NotNonpositivelyCurved);
    }
    radius_policy(surface, r, opts)?;
    let bound = liouville_rhs(surface.euler_characteristic(), r) / surface.area();
    let cache = SaddleCache::new(surface, r, &opts.unfold)?;
    let sampler = AreaSampler::new(surface);
    let mut best: Option<(f64, SurfacePoint)> = None;
    let mut drawn = 0;
    let mut batch = n;
    for round in 0..RICH_DISK_ROUNDS {
        let first_stream = u64::from(round) * MC_CHUNKS;
        let parts = run_chunks_from(
            batch,
            seed,
            first_stream,
            |rng, count| -> Result<Option<(f64, SurfacePoint)>> {
                let mut local: Option<(f64, SurfacePoint)> = None;
                for _ in 0..count {
                    let x = sampler.point(rng);
                    let reach =
                        reach_cone_points_cached(surface, &x, r, Some(&cache), &opts.unfold)?;
                    let g: f64 = reach.iter().map(|c| g_term(c, r)).sum();
                    if local.is_none_or(|l| g < l.0) {
                        local = Some((g, x));
                    }
                }
                Ok(local)
            },
        );
        for p in parts {
            if let Some((g, x)) = p? {
                if best.is_none_or(|b| g < b.0) {
                    best = Some((g, x));
                }
            }
        }
        drawn += batch;
        if let Some((g, x)) = best {
            if g <= bound {
                return Ok(RichDiskReport {
                    basepoint: x,
                    r,
                    g,
                    average_bound: bound,
                    ball_area: PI * r * r - g,
                    sample_count: drawn,
                    seed,
                });
            }
        }
        batch *= 2;
    }
    Err(Error::SamplingCapExceeded)
}

fn check_curvature(k: f64) -> Result<()> {
    if k > 0.0 || !k.is_finite() {
        Err(Error::PositiveCurvatureUnsupported(k))
    } else {
        Ok(())
    }
}

/// `(cosh(a r) − 1) / a²`, accurate for small `a r`.
fn cosh_m1_over_sq(a: f64, r: f64) -> f64 {
    let h = (a * r / 2.0).sinh();
    2.0 * h * h / (a * a)
}

/// Area of a disk of radius `r` in the plane of constant curvature `k ≤ 0`.
pub fn model_ball_area(k: f64, r: f64) -> Result<f64> {
    check_curvature(k)?;
    if k == 0.0 {
        return Ok(PI * r * r);
    }
    Ok(TAU * cosh_m1_over_sq((-k).sqrt(), r))
}

/// `G_r` in the plane of constant curvature `k ≤ 0`:
/// `∫_0^r (r − ρ) · k · area(ρ) dρ`.
pub fn model_g(k: f64, r: f64) -> Result<f64> {
    check_curvature(k)?;
    if k == 0.0 {
        return Ok(0.0);
    }
    // k/a² = −1 and ∫_0^r (r − ρ)(cosh aρ − 1) dρ = (cosh ar − 1)/a² − r²/2
    let a = (-k).sqrt();
    Ok(-TAU * (cosh_m1_over_sq(a, r) - r * r / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{make_staircase_surface, square_torus};
    use crate::unfold::point_near_cone;

    #[test]
    fn flat_torus_is_zero() {
        let t = square_torus();
        let x = SurfacePoint::new(0, 0.3, 0.6);
        assert_eq!(g_r(&t, &x, 0.4).unwrap().value, 0.0);
        assert_eq!(f_r(&t, &x, 0.4).unwrap().value, 0.0);
        assert_eq!(ball_area_formula(&t, &x, 0.4).unwrap().area, PI * 0.16);
    }

    #[test]
    fn staircase_closed_forms() {
        let s = make_staircase_surface(2).unwrap();
        let x = point_near_cone(&s, 0, 0.3, 2.0).unwrap().base;
        let g = g_r(&s, &x, 0.45).unwrap();
        assert!((g.value - (-4.0 * PI * 0.15f64.powi(2) / 2.0)).abs() < 1e-12);
        let f = f_r(&s, &x, 0.45).unwrap();
        assert!((f.value - g.value / 3.0).abs() < 1e-12);
        let area = ball_area_formula(&s, &x, 0.45).unwrap();
        assert!((area.area - 0.777_544_181_8).abs() < 1e-9);
        assert!(!area.lower_bound_only);
        // at r = d the support vanishes
        let at_d = ball_area_formula(&s, &x, 0.3).unwrap();
        assert_eq!(at_d.g.value, 0.0);
        assert_eq!(at_d.area, PI * 0.09);
        let far = point_near_cone(&s, 0, 0.5, 2.0).unwrap().base;
        assert_eq!(g_r(&s, &far, 0.45).unwrap().value, 0.0);
    }

    #[test]
    fn radius_guard() {
        let s = make_staircase_surface(2).unwrap();
        let x = SurfacePoint::new(0, 1.5, 0.5);
        assert!(matches!(
            g_r(&s, &x, 0.6),
            Err(Error::RadiusTooLarge { .. })
        ));
        let forced = FunctionalOptions {
            allow_large_radius: true,
            ..Default::default()
        };
        assert!(g_r_with(&s, &x, 0.6, &forced).unwrap().advisory);
    }

    #[test]
    fn model_identities() {
        assert_eq!(model_ball_area(0.0, 1.0).unwrap(), PI);
        assert!((model_ball_area(-1.0, 1.0).unwrap() - 3.412_276_265_3).abs() < 1e-9);
        assert!((model_g(-1.0, 1.0).unwrap() + 0.270_683_611_7).abs() < 1e-9);
        let small = model_ball_area(-1.0, 1e-4).unwrap() / (PI * 1e-8);
        assert!((small - 1.0).abs() < 1e-8);
        assert!(model_g(0.5, 1.0).is_err());
    }
}
