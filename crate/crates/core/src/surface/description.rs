//! Input description of a polygonal surface and its JSON file format.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec2;

/// A coordinate: exact rational, or a float that will be matched with tolerance.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn int(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Scalar::Exact(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// Stores `f` exactly when it is a short dyadic rational, otherwise as a float.
    pub fn from_f64(f: f64) -> Self {
        let scaled = f * 1_048_576.0;
        if f.is_finite() && f.abs() < 2f64.powi(31) && scaled.fract() == 0.0 {
            Scalar::Exact(BigRational::new(
                BigInt::from(scaled as i64),
                BigInt::from(1_048_576i64),
            ))
        } else {
            Scalar::Float(f)
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(f) => *f,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Float(_) => None,
        }
    }

    pub fn scaled(&self, factor: &Scalar) -> Scalar {
        match (self, factor) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            _ => Scalar::Float(self.to_f64() * factor.to_f64()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Scalar::Exact(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Scalar::Exact(BigRational::new(p, q)))
        } else if let Ok(n) = s.parse::<BigInt>() {
            Ok(Scalar::Exact(BigRational::from_integer(n)))
        } else {
            Err(bad())
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(q) if q.is_integer() => match q.numer().to_i64() {
                Some(n) => serializer.serialize_i64(n),
                None => serializer.serialize_str(&self.to_string()),
            },
            Scalar::Exact(_) => serializer.serialize_str(&self.to_string()),
            Scalar::Float(x) => serializer.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Float(f64),
            Str(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(n) => Ok(Scalar::int(n)),
            Raw::Float(x) => Ok(Scalar::Float(x)),
            Raw::Str(s) => s.parse().map_err(de::Error::custom),
        }
    }
}

pub type Point = [Scalar; 2];

pub fn point_f64(p: &Point) -> Vec2 {
    Vec2::new(p[0].to_f64(), p[1].to_f64())
}

/// `(polygon index, edge index)`; edge `i` runs from vertex `i` to vertex `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeRef(pub usize, pub usize);

/// How an edge is identified with its partner.
///
/// `Translation` and `Rotation` traverse the two edges in opposite directions
/// (the gluing extends orientation across the edge); `Translation` additionally
/// requires the edge vectors to be antiparallel. `Flip` matches start to start
/// and reverses orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GlueMap {
    Translation,
    Rotation,
    Flip,
}

impl GlueMap {
    pub fn preserves_orientation(self) -> bool {
        !matches!(self, GlueMap::Flip)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gluing {
    pub a: EdgeRef,
    pub b: EdgeRef,
    pub map: GlueMap,
}

/// Convex polygons plus a pairing of their edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDescription {
    pub polygons: Vec<Vec<Point>>,
    pub gluings: Vec<Gluing>,
}

impl SurfaceDescription {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("description serializes")
    }

    /// Every coordinate is an exact rational.
    pub fn is_exact(&self) -> bool {
        self.polygons
            .iter()
            .flatten()
            .all(|p| p[0].exact().is_some() && p[1].exact().is_some())
    }

    /// Uniform scaling of every coordinate.
    pub fn scaled(&self, factor: &Scalar) -> SurfaceDescription {
        SurfaceDescription {
            polygons: self
                .polygons
                .iter()
                .map(|poly| {
                    poly.iter()
                        .map(|[x, y]| [x.scaled(factor), y.scaled(factor)])
                        .collect()
                })
                .collect(),
            gluings: self.gluings.clone(),
        }
    }
}

/// Exact helpers over rational points.
pub(crate) mod exact {
    use super::*;

    pub fn sub(a: &[BigRational; 2], b: &[BigRational; 2]) -> [BigRational; 2] {
        [&a[0] - &b[0], &a[1] - &b[1]]
    }

    pub fn cross(a: &[BigRational; 2], b: &[BigRational; 2]) -> BigRational {
        &a[0] * &b[1] - &a[1] * &b[0]
    }

    pub fn dot(a: &[BigRational; 2], b: &[BigRational; 2]) -> BigRational {
        &a[0] * &b[0] + &a[1] * &b[1]
    }

    pub fn point(p: &Point) -> Option<[BigRational; 2]> {
        Some([p[0].exact()?.clone(), p[1].exact()?.clone()])
    }

    pub fn sign(q: &BigRational) -> i8 {
        if q.is_zero() {
            0
        } else if q.is_positive() {
            1
        } else {
            -1
        }
    }

    #[allow(dead_code)]
    pub fn one() -> BigRational {
        BigRational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_mixed_scalars() {
        let json = r#"{"polygons": [[[0, 0], ["1/2", 0], [0.5, 1.5]]],
                       "gluings": [{"a": [0, 0], "b": [0, 1], "map": "flip"}]}"#;
        let d = SurfaceDescription::from_json(json).unwrap();
        assert_eq!(d.polygons[0][1][0], Scalar::ratio(1, 2));
        assert_eq!(d.polygons[0][2][0], Scalar::Float(0.5));
        assert_eq!(d.gluings[0].map, GlueMap::Flip);
        assert!(!d.is_exact());
    }

    #[test]
    fn rejects_unknown_keys() {
        let json = r#"{"polygons": [], "gluings": [], "colour": "red"}"#;
        assert!(matches!(
            SurfaceDescription::from_json(json),
            Err(Error::Parse(_))
        ));
        let json =
            r#"{"polygons": [], "gluings": [{"a": [0,0], "b": [0,1], "map": "flip", "x": 1}]}"#;
        assert!(SurfaceDescription::from_json(json).is_err());
    }

    #[test]
    fn rejects_bad_rationals() {
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
        assert_eq!("-3/6".parse::<Scalar>().unwrap(), Scalar::ratio(-1, 2));
    }

    #[test]
    fn json_round_trip_keeps_exactness() {
        let d = SurfaceDescription {
            polygons: vec![vec![
                [Scalar::int(0), Scalar::int(0)],
                [Scalar::ratio(3, 2), Scalar::int(0)],
                [Scalar::int(0), Scalar::Float(0.25)],
            ]],
            gluings: vec![],
        };
        let back = SurfaceDescription::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
    }
}
