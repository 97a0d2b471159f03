//! Closed-form systolic inequalities and reference constants.

use std::f64::consts::PI;
use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::error::{Error, Result};

/// Systolic area of the hexagonal torus, the Loewner threshold.
pub fn loewner_threshold() -> f64 {
    3f64.sqrt() / 2.0
}

/// `σ = area / sys²`.
pub fn systolic_area(area: f64, systole: f64) -> Result<f64> {
    if !(area > 0.0 && systole > 0.0) || !area.is_finite() || !systole.is_finite() {
        return Err(Error::NonpositiveInput);
    }
    Ok(area / (systole * systole))
}

/// `(π/8)(1 + √(1 − 2χ/3))`, the positive root of `σ² − (π/4)σ + π²χ/96`.
pub fn sigma_lower_bound(chi: i64) -> Result<f64> {
    if chi > 0 {
        return Err(Error::PositiveEuler(chi));
    }
    Ok(PI / 8.0 * (1.0 + (1.0 - 2.0 * chi as f64 / 3.0).sqrt()))
}

/// [`sigma_lower_bound`] for the orientable surface of genus `g ≥ 1`.
pub fn sigma_lower_bound_genus(g: i64) -> Result<f64> {
    if g < 1 {
        return Err(Error::InvalidArgument(format!(
            "genus must be at least 1 (got {g})"
        )));
    }
    sigma_lower_bound(2 - 2 * g)
}

/// [`sigma_lower_bound`] for the connected sum of `n ≥ 2` projective planes.
pub fn sigma_lower_bound_crosscaps(n: i64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 cross-caps (got {n})"
        )));
    }
    sigma_lower_bound(2 - n)
}

/// Lower bound `πr² − (2πχ/area)(π/12) r⁴` for the area of any ball of
/// radius `r < sys/2` centred at a point where `G_r` is at most its mean.
pub fn prop_end_ball_bound(chi: i64, area: f64, r: f64) -> Result<f64> {
    if !(area > 0.0) {
        return Err(Error::NonpositiveInput);
    }
    Ok(PI * r * r - 2.0 * PI * chi as f64 / area * (PI / 12.0) * r.powi(4))
}

/// Returns `(σ, σ ≥ √3/2)`.
pub fn is_loewner(area: f64, systole: f64) -> Result<(f64, bool)> {
    let sigma = systolic_area(area, systole)?;
    Ok((sigma, sigma >= loewner_threshold() - 1e-12))
}

/// `C = π² / (12(2√3 − π))`.
pub fn loewner_disk_constant() -> f64 {
    PI * PI / (12.0 * (2.0 * 3f64.sqrt() - PI))
}

/// Returns `(C, σ ≤ C(g − 1))`: when true, a genus-`g` nonpositively curved
/// surface of systolic area `σ` contains a Loewner disk.
pub fn loewner_disk_criterion(g: i64, sigma: f64) -> Result<(f64, bool)> {
    if g < 2 {
        return Err(Error::InvalidGenus(g));
    }
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::NonpositiveInput);
    }
    let c = loewner_disk_constant();
    Ok((c, sigma <= c * (g - 1) as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LoewnerDisk {
    pub constant: f64,
    pub verdict: bool,
}

/// Every bound that applies to a surface of the given topology and,
/// when known, area and systole.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub chi: i64,
    pub genus: Option<i64>,
    pub area: Option<f64>,
    pub systole: Option<f64>,
    pub sigma: Option<f64>,
    pub loewner: Option<bool>,
    pub sqrt_bound: f64,
    pub loewner_disk: Option<LoewnerDisk>,
}

impl BoundsReport {
    /// `genus` marks the surface as orientable; it must agree with `chi`.
    pub fn new(
        chi: i64,
        genus: Option<i64>,
        area: Option<f64>,
        systole: Option<f64>,
    ) -> Result<Self> {
        if let Some(g) = genus {
            if g < 0 || 2 - 2 * g != chi {
                return Err(Error::InvalidArgument(format!(
                    "genus {g} does not match Euler characteristic {chi}"
                )));
            }
        }
        let sqrt_bound = sigma_lower_bound(chi)?;
        if area.is_some_and(|a| !(a > 0.0)) || systole.is_some_and(|s| !(s > 0.0)) {
            return Err(Error::NonpositiveInput);
        }
        let (sigma, loewner) = match (area, systole) {
            (Some(a), Some(s)) => {
                let (sigma, verdict) = is_loewner(a, s)?;
                (Some(sigma), Some(verdict))
            }
            _ => (None, None),
        };
        let loewner_disk = match (genus, sigma) {
            (Some(g), Some(sigma)) if g >= 2 => {
                let (constant, verdict) = loewner_disk_criterion(g, sigma)?;
                Some(LoewnerDisk { constant, verdict })
            }
            _ => None,
        };
        Ok(BoundsReport {
            chi,
            genus,
            area,
            systole,
            sigma,
            loewner,
            sqrt_bound,
            loewner_disk,
        })
    }

    /// The ball-area lower bound at radius `r`; needs the area.
    pub fn prop_end_bound(&self, r: f64) -> Option<f64> {
        self.area
            .and_then(|a| prop_end_ball_bound(self.chi, a, r).ok())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowKind {
    /// Known minimum of the systolic area.
    ExactMin,
    /// Systolic area of a specific example.
    UpperExample,
    LowerBound,
    /// A constant that is not a systolic area of the listed surface.
    Constant,
}

impl fmt::Display for RowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowKind::ExactMin => "exact-min",
            RowKind::UpperExample => "upper-example",
            RowKind::LowerBound => "lower-bound",
            RowKind::Constant => "constant",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub surface: &'static str,
    pub chi: &'static str,
    pub value: f64,
    pub kind: RowKind,
    pub source: &'static str,
}

fn bound(chi: i64) -> f64 {
    sigma_lower_bound(chi).expect("non-positive χ")
}

/// Minimal systolic areas over nonpositively curved metrics, the general
/// bounds at their first admissible topology, and related constants.
pub fn reference_table() -> Vec<TableRow> {
    use RowKind::*;
    let s3 = 3f64.sqrt();
    let row = |surface, chi, value, kind, source| TableRow {
        surface,
        chi,
        value,
        kind,
        source,
    };
    vec![
        row("T2", "0", s3 / 2.0, ExactMin, "Loewner, hexagonal torus"),
        row("K2", "0", 1.0, ExactMin, "square flat Klein bottle"),
        row(
            "3RP2",
            "-1",
            1.0 + (169.0 - 38.0 * 19f64.sqrt()).sqrt() / 12.0,
            ExactMin,
            "known minimum",
        ),
        row(
            "Sigma_2",
            "-2",
            3.0 * (2f64.sqrt() - 1.0),
            ExactMin,
            "known minimum",
        ),
        row(
            "Sigma_3",
            "-4",
            7.0 * s3 / 8.0,
            UpperExample,
            "Calabi, piecewise flat",
        ),
        row(
            "Sigma_g (g>=3)",
            "2-2g",
            bound(-4),
            LowerBound,
            "sqrt bound at g=3",
        ),
        row(
            "Sigma_g (g>=4)",
            "2-2g",
            bound(-6),
            LowerBound,
            "sqrt bound at g=4",
        ),
        row(
            "nRP2 (n>=4)",
            "2-n",
            bound(-2),
            LowerBound,
            "sqrt bound at n=4",
        ),
        row(
            "nRP2 (n>=7)",
            "2-n",
            bound(-5),
            LowerBound,
            "sqrt bound at n=7",
        ),
        row("chi=-1", "-1", bound(-1), LowerBound, "sqrt bound"),
        row(
            "K2 (Riemannian)",
            "0",
            2.0 * 2f64.sqrt() / PI,
            ExactMin,
            "Bavard",
        ),
        row(
            "Sigma_3 (hyperbolic)",
            "-4",
            2.0 * PI / (2.0 + s3).asinh().powi(2),
            UpperExample,
            "Schmutz, (2,3,12) triangle surface",
        ),
        row(
            "Loewner disk C",
            "",
            loewner_disk_constant(),
            Constant,
            "pi^2/(12(2sqrt3-pi))",
        ),
    ]
}

/// Printed under the table: the orientable genus bound at `g = 2` is the
/// `χ = −2` value, while `√(11/3)` belongs to `g = 3`.
pub fn table_footnote() -> String {
    format!(
        "note: for orientable genus g the bound is (pi/8)(1+sqrt((4g-1)/3)); at g=2 this is \
         (pi/8)(1+sqrt(7/3)) = {:.6}, and (pi/8)(1+sqrt(11/3)) = {:.6} is its g=3 value. \
         Rows are computed from the formula; the g=2 minimum {:.6} exceeds both.",
        bound(-2),
        bound(-4),
        3.0 * (2f64.sqrt() - 1.0)
    )
}

/// Aligned plain-text rendering of `rows`, followed by the footnote.
pub fn format_table(rows: &[TableRow]) -> String {
    let headers = ["surface", "chi", "value", "kind", "source"];
    let cells: Vec<[String; 5]> = rows
        .iter()
        .map(|r| {
            [
                r.surface.to_string(),
                r.chi.to_string(),
                format!("{:.6}", r.value),
                r.kind.to_string(),
                r.source.to_string(),
            ]
        })
        .collect();
    let mut widths = headers.map(str::len);
    for c in &cells {
        for (w, s) in widths.iter_mut().zip(c) {
            *w = (*w).max(s.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |fields: [&str; 5]| {
        let mut l = String::new();
        for (i, (f, w)) in fields.iter().zip(widths).enumerate() {
            if i == 2 {
                let _ = write!(l, "{f:>w$}  ");
            } else {
                let _ = write!(l, "{f:<w$}  ");
            }
        }
        out.push_str(l.trim_end());
        out.push('\n');
    };
    line(headers);
    for c in &cells {
        line([&c[0], &c[1], &c[2], &c[3], &c[4]]);
    }
    out.push_str(&table_footnote());
    out.push('\n');
    out
}

/// CSV rendering with the header `surface,chi,value,kind,source`.
pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("surface,chi,value,kind,source\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            csv_field(r.surface),
            csv_field(r.chi),
            crate::format::g9(r.value),
            r.kind,
            csv_field(r.source)
        );
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_bound_values() {
        assert_eq!(sigma_lower_bound(0).unwrap(), PI / 4.0);
        assert!((sigma_lower_bound(-1).unwrap() - 0.899671).abs() < 1e-6);
        assert!((sigma_lower_bound_genus(2).unwrap() - 0.992557).abs() < 1e-6);
        assert!((sigma_lower_bound_genus(3).unwrap() - 1.144661).abs() < 1e-6);
        assert!((sigma_lower_bound_crosscaps(4).unwrap() - 0.992557).abs() < 1e-6);
        assert_eq!(sigma_lower_bound(1), Err(Error::PositiveEuler(1)));
    }

    #[test]
    fn prop_end_values() {
        assert_eq!(prop_end_ball_bound(0, 7.0, 0.3).unwrap(), PI * 0.09);
        let expect = PI * 0.2025 + (4.0 * PI / 3.0) * (PI / 12.0) * 0.45f64.powi(4);
        assert!((prop_end_ball_bound(-2, 3.0, 0.45).unwrap() - expect).abs() < 1e-15);
        assert!((prop_end_ball_bound(-2, 3.0, 0.45).unwrap() - 0.6811409).abs() < 1e-7);
        assert!((prop_end_ball_bound(-2, 3.0, 0.5).unwrap() - 0.8539371).abs() < 1e-7);
        assert_eq!(
            prop_end_ball_bound(-2, 0.0, 0.5),
            Err(Error::NonpositiveInput)
        );
    }

    #[test]
    fn loewner_verdicts() {
        let (s, v) = is_loewner(3f64.sqrt() / 2.0, 1.0).unwrap();
        assert!(v && (s - 0.8660254).abs() < 1e-7);
        assert_eq!(is_loewner(3.0, 1.0).unwrap(), (3.0, true));
        assert!(!is_loewner(0.5, 1.0).unwrap().1);
        assert_eq!(is_loewner(-1.0, 1.0), Err(Error::NonpositiveInput));
    }

    #[test]
    fn disk_criterion() {
        let c = loewner_disk_constant();
        assert!((c - 2.550214).abs() < 1e-6);
        assert_eq!(loewner_disk_criterion(2, 3.0).unwrap(), (c, false));
        assert_eq!(loewner_disk_criterion(3, 5.0).unwrap(), (c, true));
        assert_eq!(loewner_disk_criterion(1, 1.0), Err(Error::InvalidGenus(1)));
    }

    #[test]
    fn report_for_staircase() {
        let r = BoundsReport::new(-2, Some(2), Some(3.0), Some(1.0)).unwrap();
        assert_eq!(r.sigma, Some(3.0));
        assert_eq!(r.loewner, Some(true));
        assert!(!r.loewner_disk.unwrap().verdict);
        assert!((r.prop_end_bound(0.45).unwrap() - 0.6811409).abs() < 1e-7);
        assert!(BoundsReport::new(-2, Some(3), None, None).is_err());
        let bare = BoundsReport::new(-1, None, None, None).unwrap();
        assert!(bare.sigma.is_none() && bare.prop_end_bound(0.1).is_none());
    }

    #[test]
    fn table_renders() {
        let rows = reference_table();
        let text = format_table(&rows);
        assert!(text.contains("1.152794") && text.contains("note:"));
        let csv = table_csv(&rows);
        assert_eq!(csv.lines().count(), rows.len() + 1);
        assert!(csv.contains("\"Schmutz, (2,3,12) triangle surface\""));
        assert!(csv.contains("Sigma_2,-2,1.24264069,exact-min,known minimum"));
    }

    #[test]
    fn published_decimals_are_truncations() {
        let rows = reference_table();
        let value = |name: &str| rows.iter().find(|r| r.surface == name).unwrap().value;
        for (name, published) in [
            ("T2", 0.866),
            ("K2", 1.0),
            ("3RP2", 1.152),
            ("Sigma_2", 1.242),
            ("Sigma_3", 1.515),
            ("Sigma_g (g>=3)", 1.144),
            ("nRP2 (n>=4)", 0.992),
            ("chi=-1", 0.899),
            ("Sigma_3 (hyperbolic)", 1.528),
        ] {
            let d = value(name) - published;
            assert!((0.0..1e-3).contains(&d), "{name}: {d}");
        }
    }
}
