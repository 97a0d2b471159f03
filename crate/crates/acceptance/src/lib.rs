//! The acceptance criteria of `cone-systole`, each a function returning a
//! verdict and a one-line summary of the numbers behind it.

use std::f64::consts::{FRAC_PI_4, PI, TAU};
use std::time::{Duration, Instant};

use cone_systole::bounds::{
    loewner_disk_constant, prop_end_ball_bound, reference_table, sigma_lower_bound,
};
use cone_systole::cli::run_with;
use cone_systole::functionals::{
    average_f_identity_check, ball_area_formula, f_r, find_rich_disk, g_r, liouville_rhs,
    model_ball_area, model_g,
};
use cone_systole::geometry::Vec2;
use cone_systole::sampling::{chunk_rng, AreaSampler};
use cone_systole::surface::{
    hexagonal_torus, make_square_klein_bottle, make_staircase_surface, make_two_cone_decagon,
    square_torus, ConeSurface,
};
use cone_systole::systole::{enumerate_systole, torus_systole, SystoleStatus};
use cone_systole::unfold::{ball_area_mc, point_near_cone};

/// Verdict of one criterion.
pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, secs: f64) -> bool {
    elapsed.as_secs_f64() < secs
}

pub fn gauss_bonnet() -> Outcome {
    let t = Instant::now();
    let mut surfaces: Vec<(String, ConeSurface)> = vec![
        ("torus-square".into(), square_torus()),
        ("torus-hex".into(), hexagonal_torus()),
        (
            "klein-square".into(),
            make_square_klein_bottle(1.0, 1.0).unwrap(),
        ),
    ];
    for g in 2..=6 {
        surfaces.push((
            format!("staircase g={g}"),
            make_staircase_surface(g).unwrap(),
        ));
    }
    let mut worst: f64 = 0.0;
    let mut exact_ok = true;
    for (_, s) in &surfaces {
        let residual = (s.total_defect() - TAU * s.euler_characteristic() as f64).abs();
        worst = worst.max(residual);
        if s.is_exact() && s.gauss_bonnet_residual() != 0.0 {
            exact_ok = false;
        }
    }
    let el = t.elapsed();
    outcome(
        worst < 1e-9 && exact_ok && within(el, 1.0),
        format!(
            "{} surfaces, max residual {worst:.1e}, exact builds zero: {exact_ok}, {el:.2?}",
            surfaces.len()
        ),
    )
}

pub fn liouville() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (g, quoted) in [(2, -0.0842172), (3, -0.1684344)] {
        let t = Instant::now();
        let s = make_staircase_surface(g).unwrap();
        let c = average_f_identity_check(&s, 0.4, 100_000, 7).unwrap();
        let el = t.elapsed();
        let exact = liouville_rhs(s.euler_characteristic(), 0.4);
        let ok = (c.estimate - exact).abs() <= 3.0 * c.stderr
            && (c.estimate - quoted).abs() <= 3.0 * c.stderr
            && within(el, 60.0);
        pass &= ok;
        parts.push(format!(
            "g={g}: {:.7} ± {:.7} vs {exact:.7} (z {:+.2}), {el:.2?}",
            c.estimate,
            c.stderr,
            c.z_score()
        ));
    }
    outcome(pass, parts.join("; "))
}

pub fn f_dominates_g() -> Outcome {
    let surfaces = [
        ("staircase g=2", make_staircase_surface(2).unwrap()),
        ("staircase g=3", make_staircase_surface(3).unwrap()),
        ("klein-square", make_square_klein_bottle(1.0, 1.0).unwrap()),
    ];
    let mut violations = 0;
    let mut checked = 0;
    for (i, (_, s)) in surfaces.iter().enumerate() {
        let sampler = AreaSampler::new(s);
        let mut rng = chunk_rng(31, i as u64);
        for _ in 0..1000 {
            let x = sampler.point(&mut rng);
            for r in [0.2, 0.3, 0.45] {
                let f = f_r(s, &x, r).unwrap().value;
                let g = g_r(s, &x, r).unwrap().value;
                checked += 1;
                if f < g - 1e-12 {
                    violations += 1;
                }
            }
        }
    }
    // strict inequality, with a cone point hidden behind the other
    let s = make_two_cone_decagon().unwrap();
    let sampler = AreaSampler::new(&s);
    let mut rng = chunk_rng(32, 0);
    let (mut strict, mut shadowed, mut max_gap) = (0, 0, 0.0f64);
    for _ in 0..1000 {
        let x = sampler.point(&mut rng);
        let f = f_r(&s, &x, 0.45).unwrap();
        let g = g_r(&s, &x, 0.45).unwrap().value;
        if f.value - g > 1e-3 {
            strict += 1;
            max_gap = max_gap.max(f.value - g);
        }
        if f.decomposition.iter().any(|c| !c.visible) {
            shadowed += 1;
        }
    }
    outcome(
        violations == 0 && strict > 0 && shadowed > 0,
        format!(
            "{checked} checks, {violations} violations; decagon: {strict}/1000 with F-G > 1e-3 \
             (max {max_gap:.4}), {shadowed} with a shadowed cone point"
        ),
    )
}

pub fn ball_area_equality() -> Outcome {
    let t = Instant::now();
    let s = make_staircase_surface(2).unwrap();
    let sampler = AreaSampler::new(&s);
    let mut rng = chunk_rng(41, 0);
    let mut worst_z: f64 = 0.0;
    let mut failures = 0;
    for i in 0..20 {
        let x = sampler.point(&mut rng);
        let formula = ball_area_formula(&s, &x, 0.45).unwrap().area;
        let mc = ball_area_mc(&s, &x, 0.45, 1_000_000, 100 + i).unwrap();
        let z = (formula - mc.estimate) / mc.stderr;
        worst_z = worst_z.max(z.abs());
        if z.abs() > 3.0 {
            failures += 1;
        }
    }
    let x = point_near_cone(&s, 0, 0.3, FRAC_PI_4).unwrap().base;
    let d03 = ball_area_formula(&s, &x, 0.45).unwrap().area;
    let closed = PI * 0.2025 + 4.0 * PI * 0.15f64.powi(2) / 2.0;
    let el = t.elapsed();
    outcome(
        failures == 0
            && (d03 - closed).abs() < 1e-12
            && (d03 - 0.7775450).abs() < 1e-6
            && within(el, 300.0),
        format!(
            "20 points, max |z| {worst_z:.2}, {failures} beyond 3 stderr; d=0.3 area {d03:.7} \
             (closed form {closed:.7}), {el:.2?}"
        ),
    )
}

pub fn rich_disk() -> Outcome {
    let s = make_staircase_surface(2).unwrap();
    let rep = find_rich_disk(&s, 0.45, 1000, 5).unwrap();
    let area = ball_area_formula(&s, &rep.basepoint, 0.45).unwrap().area;
    let bound = prop_end_ball_bound(s.euler_characteristic(), s.area(), 0.45).unwrap();
    outcome(
        rep.g <= -0.0449654 && rep.g <= rep.average_bound && 0.6811627 <= area && bound <= area,
        format!(
            "G = {:.6} (mean F {:.7}), ball area {area:.6} >= bound {bound:.7}",
            rep.g, rep.average_bound
        ),
    )
}

pub fn systole_certification() -> Outcome {
    let t = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for g in [2, 3] {
        let rep = enumerate_systole(&make_staircase_surface(g).unwrap(), 1.5).unwrap();
        pass &=
            (rep.value - 1.0).abs() < 1e-12 && rep.status == SystoleStatus::CertifiedBelowCutoff;
        parts.push(format!("staircase g={g}: {} [{}]", rep.value, rep.status));
    }
    let hex = torus_systole(Vec2::new(1.0, 0.0), Vec2::new(0.5, 3f64.sqrt() / 2.0)).unwrap();
    pass &= (hex.value - 1.0).abs() < 1e-12;
    parts.push(format!("hex lattice: {}", hex.value));
    let k = make_square_klein_bottle(1.0, 1.0).unwrap();
    let kr = enumerate_systole(&k, 2.0).unwrap();
    pass &= (kr.value - 1.0).abs() < 1e-12;
    parts.push(format!("klein-square: {} [{}]", kr.value, kr.status));
    let el = t.elapsed();
    pass &= within(el, 30.0);
    parts.push(format!("{el:.2?}"));
    outcome(pass, parts.join("; "))
}

pub fn table() -> Outcome {
    let rows = reference_table();
    let value = |name: &str| {
        rows.iter()
            .find(|r| r.surface == name)
            .map(|r| r.value)
            .unwrap()
    };
    let checks = [
        ("T2", value("T2"), 0.866),
        ("K2", value("K2"), 1.0),
        ("3RP2", value("3RP2"), 1.152),
        ("Sigma_2", value("Sigma_2"), 1.242),
        ("Sigma_3", value("Sigma_3"), 1.515),
        ("Sigma_g>=3", value("Sigma_g (g>=3)"), 1.144),
        ("nRP2 n>=4", value("nRP2 (n>=4)"), 0.992),
        ("chi=-1", value("chi=-1"), 0.899),
        ("C", value("Loewner disk C"), 2.5502),
        ("2sqrt2/pi", value("K2 (Riemannian)"), 0.9),
        ("Schmutz", value("Sigma_3 (hyperbolic)"), 1.528),
    ];
    let off: Vec<String> = checks
        .iter()
        .filter(|(_, v, quoted)| (v - quoted).abs() >= 5e-4)
        .map(|(n, v, quoted)| format!("{n} {v:.6} vs {quoted}"))
        .collect();
    let sane = (loewner_disk_constant() - value("Loewner disk C")).abs() == 0.0;
    outcome(
        off.is_empty() && sane,
        if off.is_empty() {
            format!("{} constants within 5e-4", checks.len())
        } else {
            format!(
                "{} of {} off by >= 5e-4: {}",
                off.len(),
                checks.len(),
                off.join(", ")
            )
        },
    )
}

pub fn model_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    for r in [0.25, 0.5, 1.0, 2.0] {
        let res = PI * r * r - model_g(-1.0, r).unwrap() - model_ball_area(-1.0, r).unwrap();
        worst = worst.max(res.abs());
    }
    outcome(worst < 1e-12, format!("max residual {worst:.1e}"))
}

pub fn quadratic() -> Outcome {
    let mut worst: f64 = 0.0;
    for chi in -20..=0 {
        let s = sigma_lower_bound(chi).unwrap();
        worst = worst.max((s * s - PI / 4.0 * s + PI * PI * chi as f64 / 96.0).abs());
    }
    outcome(
        worst < 1e-12,
        format!("chi in -20..=0, max residual {worst:.1e}"),
    )
}

pub fn determinism() -> Outcome {
    let args = [
        "cone-systole",
        "verify",
        "--builtin",
        "staircase",
        "--genus",
        "2",
        "--r",
        "0.4",
        "--n",
        "100000",
        "--seed",
        "7",
    ];
    let once = || {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with(args, &mut out, &mut err);
        (code, out)
    };
    let (c1, a) = once();
    let (c2, b) = once();
    outcome(
        a == b && c1 == c2 && c1 == 0,
        format!("{} bytes, identical: {}, exit {c1}", a.len(), a == b),
    )
}

/// Name and check of one criterion.
pub type Criterion = (&'static str, fn() -> Outcome);

/// Name and check of every criterion, in order.
pub fn criteria() -> [Criterion; 10] {
    [
        ("Gauss-Bonnet exactness", gauss_bonnet),
        ("integral of F_r", liouville),
        ("F_r >= G_r", f_dominates_g),
        ("ball area equals pi r^2 - G_r", ball_area_equality),
        ("rich disk and ball-area bound", rich_disk),
        ("systole certification", systole_certification),
        ("reference table decimals", table),
        ("constant-curvature oracle", model_oracle),
        ("quadratic consistency", quadratic),
        ("determinism", determinism),
    ]
}
