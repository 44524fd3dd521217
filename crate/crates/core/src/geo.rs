//! Units, WGS-84 geodetic ↔ ECEF transforms and great-circle navigation.
//!
//! The ECEF inverse starts from Bowring's parametric-latitude estimate and
//! refines `φ ← atan2(z + e²·N(φ)·sin φ, p)` until `|Δφ| < 1e-12` rad or ten
//! iterations; height uses `h = p·cos φ + z·sin φ − a·√(1 − e² sin² φ)`,
//! which stays well conditioned at the poles.
//!
//! Distances are haversine on a sphere of radius [`MEAN_RADIUS`]; against
//! the ellipsoid this errs by up to about 0.5 %.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// WGS-84 semi-major axis (m).
pub const A: f64 = 6_378_137.0;
/// WGS-84 flattening.
pub const F: f64 = 1.0 / 298.257_223_563;
/// Semi-minor axis `a(1 − f)` (m).
pub const B: f64 = A * (1.0 - F);
/// First eccentricity squared `f(2 − f)`.
pub const E2: f64 = F * (2.0 - F);
/// Mean Earth radius used for haversine distances (m).
pub const MEAN_RADIUS: f64 = 6_371_008.8;

#[derive(Debug, Error, PartialEq)]
pub enum GeoError {
    #[error("cannot convert {from} ({from_dim}) to {to} ({to_dim})")]
    Dimension {
        from: Unit,
        to: Unit,
        from_dim: &'static str,
        to_dim: &'static str,
    },
    #[error("unknown unit `{0}`")]
    UnknownUnit(String),
    #[error("domain error: {0}")]
    Domain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unit {
    M,
    Km,
    Ft,
    Mi,
    Nm,
    Deg,
    Rad,
}

impl Unit {
    /// Size of one unit in the dimension's base unit (m or rad).
    fn factor(self) -> f64 {
        match self {
            Unit::M => 1.0,
            Unit::Km => 1000.0,
            Unit::Ft => 0.3048,
            Unit::Mi => 1609.344,
            Unit::Nm => 1852.0,
            Unit::Rad => 1.0,
            Unit::Deg => PI / 180.0,
        }
    }

    pub fn dimension(self) -> &'static str {
        match self {
            Unit::Deg | Unit::Rad => "angle",
            _ => "length",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unit::M => "m",
            Unit::Km => "km",
            Unit::Ft => "ft",
            Unit::Mi => "mi",
            Unit::Nm => "NM",
            Unit::Deg => "deg",
            Unit::Rad => "rad",
        })
    }
}

impl FromStr for Unit {
    type Err = GeoError;

    /// Case-insensitive: `m`, `km`, `ft`, `mi`, `nm`, `deg`, `rad`.
    fn from_str(s: &str) -> Result<Unit, GeoError> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "m" => Unit::M,
            "km" => Unit::Km,
            "ft" => Unit::Ft,
            "mi" => Unit::Mi,
            "nm" => Unit::Nm,
            "deg" => Unit::Deg,
            "rad" => Unit::Rad,
            _ => return Err(GeoError::UnknownUnit(s.to_string())),
        })
    }
}

/// Converts `value` through the base unit of its dimension.
pub fn convert_unit(value: f64, from: Unit, to: Unit) -> Result<f64, GeoError> {
    if from.dimension() != to.dimension() {
        return Err(GeoError::Dimension {
            from,
            to,
            from_dim: from.dimension(),
            to_dim: to.dimension(),
        });
    }
    if from == to {
        return Ok(value);
    }
    Ok(value * from.factor() / to.factor())
}

/// Latitude and longitude in degrees, altitude in metres above the ellipsoid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeodeticCoord {
    pub lat: f64,
    pub lon: f64,
    pub alt: f64,
}

impl GeodeticCoord {
    /// Validates latitude and normalises longitude into (−180, 180].
    pub fn new(lat: f64, lon: f64, alt: f64) -> Result<GeodeticCoord, GeoError> {
        if !(lat.is_finite() && lon.is_finite() && alt.is_finite()) {
            return Err(GeoError::Domain("coordinates must be finite".into()));
        }
        if !(-90.0..=90.0).contains(&lat) {
            return Err(GeoError::Domain(format!("latitude {lat} outside [-90, 90]")));
        }
        Ok(GeodeticCoord {
            lat,
            lon: normalize_lon(lon),
            alt,
        })
    }

    /// Geocentric latitude (degrees): `tan φ_gc = (1 − e²) tan φ`.
    pub fn geocentric_latitude(&self) -> f64 {
        let phi = self.lat.to_radians();
        ((1.0 - E2) * phi.sin()).atan2(phi.cos()).to_degrees()
    }
}

/// Geodetic latitude (degrees) for a geocentric latitude (degrees).
pub fn geodetic_from_geocentric(lat_gc: f64) -> f64 {
    let psi = lat_gc.to_radians();
    psi.sin().atan2((1.0 - E2) * psi.cos()).to_degrees()
}

fn normalize_lon(lon: f64) -> f64 {
    let l = lon.rem_euclid(360.0);
    if l > 180.0 {
        l - 360.0
    } else {
        l
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EcefCoord {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

fn prime_vertical(sin_phi: f64) -> f64 {
    A / (1.0 - E2 * sin_phi * sin_phi).sqrt()
}

pub fn geodetic_to_ecef(g: &GeodeticCoord) -> EcefCoord {
    let (sp, cp) = g.lat.to_radians().sin_cos();
    let (sl, cl) = g.lon.to_radians().sin_cos();
    let n = prime_vertical(sp);
    EcefCoord {
        x: (n + g.alt) * cp * cl,
        y: (n + g.alt) * cp * sl,
        z: (n * (1.0 - E2) + g.alt) * sp,
    }
}

/// Inverse of [`geodetic_to_ecef`]; points within 1 m of the centre are a
/// domain error.
pub fn ecef_to_geodetic(e: &EcefCoord) -> Result<GeodeticCoord, GeoError> {
    if !(e.x.is_finite() && e.y.is_finite() && e.z.is_finite()) {
        return Err(GeoError::Domain("ECEF coordinates must be finite".into()));
    }
    let r = (e.x * e.x + e.y * e.y + e.z * e.z).sqrt();
    if r <= 1.0 {
        return Err(GeoError::Domain(format!(
            "point is {r} m from the Earth's centre; need > 1 m"
        )));
    }
    let p = e.x.hypot(e.y);
    let ep2 = E2 / (1.0 - E2);
    let theta = (e.z * A).atan2(p * B);
    let (st, ct) = theta.sin_cos();
    let mut phi = (e.z + ep2 * B * st.powi(3)).atan2(p - E2 * A * ct.powi(3));
    for _ in 0..10 {
        let next = (e.z + E2 * prime_vertical(phi.sin()) * phi.sin()).atan2(p);
        let done = (next - phi).abs() < 1e-12;
        phi = next;
        if done {
            break;
        }
    }
    let (sp, cp) = phi.sin_cos();
    let alt = p * cp + e.z * sp - A * (1.0 - E2 * sp * sp).sqrt();
    Ok(GeodeticCoord {
        lat: phi.to_degrees(),
        lon: normalize_lon(e.y.atan2(e.x).to_degrees()),
        alt,
    })
}

/// Haversine distance (m) and initial bearing (degrees in [0, 360)).
/// Altitudes are ignored; identical points give `(0, 0)`.
pub fn distance_bearing(p1: &GeodeticCoord, p2: &GeodeticCoord) -> (f64, f64) {
    let (phi1, phi2) = (p1.lat.to_radians(), p2.lat.to_radians());
    let dphi = phi2 - phi1;
    let dlambda = (p2.lon - p1.lon).to_radians();
    let h = ((dphi / 2.0).sin().powi(2) + phi1.cos() * phi2.cos() * (dlambda / 2.0).sin().powi(2))
        .clamp(0.0, 1.0);
    let d = 2.0 * MEAN_RADIUS * h.sqrt().atan2((1.0 - h).sqrt());
    if d == 0.0 {
        return (0.0, 0.0);
    }
    let y = dlambda.sin() * phi2.cos();
    let x = phi1.cos() * phi2.sin() - phi1.sin() * phi2.cos() * dlambda.cos();
    let mut b = y.atan2(x).to_degrees().rem_euclid(360.0);
    if b >= 360.0 {
        b = 0.0;
    }
    (d, b + 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Stream;
    use proptest::prelude::*;

    fn g(lat: f64, lon: f64, alt: f64) -> GeodeticCoord {
        GeodeticCoord::new(lat, lon, alt).unwrap()
    }

    #[test]
    fn unit_factors() {
        assert_eq!(convert_unit(1.0, Unit::Nm, Unit::M).unwrap(), 1852.0);
        assert_eq!(convert_unit(180.0, Unit::Deg, Unit::Rad).unwrap(), PI);
        assert_eq!(convert_unit(10000.0, Unit::Ft, Unit::M).unwrap(), 3048.0);
        assert_eq!(convert_unit(1.0, Unit::Mi, Unit::Ft).unwrap(), 5280.0);
        assert!(matches!(
            convert_unit(1.0, Unit::M, Unit::Deg),
            Err(GeoError::Dimension { .. })
        ));
        assert_eq!("NM".parse::<Unit>().unwrap(), Unit::Nm);
        assert!("furlong".parse::<Unit>().is_err());
    }

    #[test]
    fn anchors() {
        let e = geodetic_to_ecef(&g(0.0, 0.0, 0.0));
        assert_eq!((e.x, e.y, e.z), (A, 0.0, 0.0));
        let pole = geodetic_to_ecef(&g(90.0, 0.0, 0.0));
        assert!((pole.z - 6_356_752.314_2).abs() < 1e-4);
        assert!(pole.x.abs() < 1e-9);
        let e = geodetic_to_ecef(&g(0.0, 90.0, 0.0));
        assert!(e.x.abs() < 1e-9 && (e.y - A).abs() < 1e-9 && e.z == 0.0);
        let back = ecef_to_geodetic(&EcefCoord { x: A, y: 0.0, z: 0.0 }).unwrap();
        assert_eq!((back.lat, back.lon), (0.0, 0.0));
        assert!(back.alt.abs() < 1e-9);
        assert!(ecef_to_geodetic(&EcefCoord {
            x: 0.0,
            y: 0.0,
            z: 0.0
        })
        .is_err());
    }

    #[test]
    fn seeded_round_trip_sweep() {
        let mut s = Stream::new(2024);
        for _ in 0..10_000 {
            let p = g(
                s.uniform_range(-89.9, 89.9),
                s.uniform_range(-180.0, 180.0),
                s.uniform_range(-5000.0, 50_000.0),
            );
            let q = ecef_to_geodetic(&geodetic_to_ecef(&p)).unwrap();
            assert!((p.lat - q.lat).abs() < 1e-9, "{p:?} {q:?}");
            assert!((p.lon - q.lon).abs() < 1e-9, "{p:?} {q:?}");
            assert!((p.alt - q.alt).abs() < 1e-4, "{p:?} {q:?}");
        }
    }

    #[test]
    fn longitude_normalisation_and_validation() {
        assert_eq!(g(0.0, 190.0, 0.0).lon, -170.0);
        assert_eq!(g(0.0, -180.0, 0.0).lon, 180.0);
        assert_eq!(g(0.0, 540.0, 0.0).lon, 180.0);
        assert!(GeodeticCoord::new(90.5, 0.0, 0.0).is_err());
        assert!(GeodeticCoord::new(f64::NAN, 0.0, 0.0).is_err());
    }

    #[test]
    fn geocentric_latitude_round_trip() {
        let p = g(45.0, 0.0, 0.0);
        let gc = p.geocentric_latitude();
        assert!(gc < 45.0 && gc > 44.8);
        assert!((geodetic_from_geocentric(gc) - 45.0).abs() < 1e-12);
        assert_eq!(g(90.0, 0.0, 0.0).geocentric_latitude(), 90.0);
    }

    #[test]
    fn haversine_anchors() {
        let o = g(0.0, 0.0, 0.0);
        assert_eq!(distance_bearing(&o, &o), (0.0, 0.0));
        let (d, b) = distance_bearing(&o, &g(0.0, 90.0, 0.0));
        assert!((d - MEAN_RADIUS * PI / 2.0).abs() < 1.0);
        assert!((b - 90.0).abs() < 1e-12);
        let (d, _) = distance_bearing(&o, &g(0.0, 180.0, 0.0));
        assert!((d - MEAN_RADIUS * PI).abs() < 1e-6);
        let (_, b) = distance_bearing(&o, &g(-10.0, 0.0, 0.0));
        assert!((b - 180.0).abs() < 1e-12);
        let (_, b) = distance_bearing(&o, &g(0.0, -1.0, 0.0));
        assert!((b - 270.0).abs() < 1e-12);
    }

    fn coord() -> impl Strategy<Value = GeodeticCoord> {
        (-90.0f64..=90.0, -180.0f64..180.0).prop_map(|(lat, lon)| g(lat, lon, 0.0))
    }

    proptest! {
        #[test]
        fn unit_round_trip(v in -1e9f64..1e9, a in 0usize..5, b in 0usize..5, angle in any::<bool>()) {
            let lengths = [Unit::M, Unit::Km, Unit::Ft, Unit::Mi, Unit::Nm];
            let (u, w) = if angle {
                ([Unit::Deg, Unit::Rad][a % 2], [Unit::Deg, Unit::Rad][b % 2])
            } else {
                (lengths[a], lengths[b])
            };
            let back = convert_unit(convert_unit(v, u, w).unwrap(), w, u).unwrap();
            prop_assert!((back - v).abs() <= 1e-12 * v.abs().max(f64::MIN_POSITIVE));
        }

        #[test]
        fn surface_radius_between_axes(lat in -90.0f64..=90.0, lon in -180.0f64..180.0) {
            let e = geodetic_to_ecef(&g(lat, lon, 0.0));
            let r = (e.x * e.x + e.y * e.y + e.z * e.z).sqrt();
            prop_assert!((B - 1e-6..=A + 1e-6).contains(&r));
        }

        #[test]
        fn distance_symmetric_and_triangle(p in coord(), q in coord(), r in coord()) {
            let (pq, b) = distance_bearing(&p, &q);
            let (qp, _) = distance_bearing(&q, &p);
            prop_assert!((pq - qp).abs() <= 1e-6);
            prop_assert!((0.0..360.0).contains(&b));
            let (qr, _) = distance_bearing(&q, &r);
            let (pr, _) = distance_bearing(&p, &r);
            prop_assert!(pr <= pq + qr + 1e-6);
        }
    }
}
