//! Catalog of test maps: isometries, quasiconformal stretches and a
//! non-quasiconformal control.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::maps::MapUnderTest;
use crate::mobius::MobiusMap;
use crate::point::HPoint;
use crate::rotmap::{rot0_inverse_raw, rot0_raw};

pub const DEFAULT_TWIST: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    Mobius,
    RadialStretch,
    BoundaryTwist,
    Rot0,
    Composite,
}

/// Declarative description of a catalog map, as read from experiment configs.
///
/// Parameters by kind:
/// - `mobius`: `[]` (identity), `[r]` for `z -> (z + r) / (1 + r z)`, or
///   `[theta, ax, ay]` for `z -> e^{i theta} (z - a) / (1 - conj(a) z)`;
/// - `radial_stretch`: `[K]` with `K >= 1`, the map `z |z|^{K - 1}`;
/// - `boundary_twist`: `[]` or `[c]`, the map `r e^{i theta} -> r e^{i (theta + c / (1 - r))}`;
/// - `rot0`: `[]`;
/// - `composite`: no parameters, `parts` applied in list order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub kind: MapKind,
    #[serde(default)]
    pub params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claimed_k: Option<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<MapSpec>,
}

impl MapSpec {
    pub fn new(kind: MapKind, params: Vec<f64>) -> Self {
        MapSpec {
            kind,
            params,
            claimed_k: None,
            parts: Vec::new(),
        }
    }

    pub fn composite(parts: Vec<MapSpec>) -> Self {
        MapSpec {
            kind: MapKind::Composite,
            params: Vec::new(),
            claimed_k: None,
            parts,
        }
    }
}

fn invalid(msg: String) -> GeomError {
    GeomError::InvalidParameter(msg)
}

fn finite_params(spec: &MapSpec) -> Result<()> {
    if let Some(p) = spec.params.iter().find(|p| !p.is_finite()) {
        return Err(invalid(format!("{:?} parameter {p} is not finite", spec.kind)));
    }
    Ok(())
}

pub fn mobius_map(m: MobiusMap) -> MapUnderTest {
    MapUnderTest::from_mobius(m)
}

/// `z -> z |z|^{K - 1}`, with dilatation `(K - 1) / (K + 1)` off the origin.
pub fn radial_stretch(k: f64) -> Result<MapUnderTest> {
    if !(k >= 1.0) || !k.is_finite() {
        return Err(invalid(format!("stretch exponent K = {k} must be a finite value >= 1")));
    }
    let scale = move |z: Complex64, e: f64| {
        let r = z.norm();
        if r == 0.0 {
            z
        } else {
            z * r.powf(e - 1.0)
        }
    };
    Ok(MapUnderTest::new(format!("radial_stretch(K={k})"), Some(k), move |z| scale(z, k))
        .with_inverse(move |z| scale(z, 1.0 / k)))
}

/// `r e^{i theta} -> r e^{i (theta + c / (1 - r))}`; unbounded dilatation near the boundary.
pub fn boundary_twist(c: f64) -> Result<MapUnderTest> {
    if !c.is_finite() {
        return Err(invalid(format!("twist strength {c} is not finite")));
    }
    let twist = move |z: Complex64, sign: f64| {
        let r = z.norm();
        z * Complex64::from_polar(1.0, sign * c / (1.0 - r))
    };
    Ok(MapUnderTest::new(format!("boundary_twist(c={c})"), None, move |z| twist(z, 1.0))
        .with_inverse(move |z| twist(z, -1.0)))
}

pub fn rot0() -> MapUnderTest {
    MapUnderTest::new("rot0", None, rot0_raw).with_inverse(rot0_inverse_raw)
}

/// Pointwise composition applying `maps[0]` first.
///
/// The claimed `K` is the product of the parts' values when all of them have one.
pub fn compose_maps(maps: &[MapUnderTest]) -> Result<MapUnderTest> {
    if maps.is_empty() {
        return Err(invalid("cannot compose an empty list of maps".into()));
    }
    let k = maps
        .iter()
        .map(|m| m.claimed_k())
        .try_fold(1.0, |acc, k| k.map(|k| acc * k));
    let name = format!(
        "composite({})",
        maps.iter().map(|m| m.name()).collect::<Vec<_>>().join(", ")
    );
    let forward: Vec<_> = maps.iter().map(|m| m.eval_fn()).collect();
    let mut out = MapUnderTest::new(name, k, move |z| forward.iter().fold(z, |z, f| f(z)));
    let inverses: Option<Vec<_>> = maps.iter().rev().map(|m| m.inverse_fn()).collect();
    if let Some(inverses) = inverses {
        out = out.with_inverse(move |z| inverses.iter().fold(z, |z, g| g(z)));
    }
    Ok(out)
}

/// Build and validate a catalog map. A `claimed_k` in the spec overrides the default.
pub fn make_map(spec: &MapSpec) -> Result<MapUnderTest> {
    finite_params(spec)?;
    if spec.kind != MapKind::Composite && !spec.parts.is_empty() {
        return Err(invalid(format!("{:?} maps take no parts", spec.kind)));
    }
    if let Some(k) = spec.claimed_k {
        if !(k >= 1.0) || !k.is_finite() {
            return Err(invalid(format!("claimed K = {k} must be a finite value >= 1")));
        }
    }
    let p = &spec.params;
    let map = match spec.kind {
        MapKind::Mobius => match p.as_slice() {
            [] => mobius_map(MobiusMap::identity()),
            [r] => mobius_map(MobiusMap::real_translation(*r).map_err(|_| invalid(format!("mobius shift r = {r} must satisfy |r| < 1")))?),
            [theta, ax, ay] => {
                let a = HPoint::new(*ax, *ay).map_err(|_| invalid(format!("mobius centre ({ax}, {ay}) must satisfy |a| < 1")))?;
                mobius_map(MobiusMap::new(*theta, a))
            }
            _ => return Err(invalid(format!("mobius takes 0, 1 or 3 parameters, got {}", p.len()))),
        },
        MapKind::RadialStretch => match p.as_slice() {
            [k] => radial_stretch(*k)?,
            _ => return Err(invalid(format!("radial_stretch takes 1 parameter, got {}", p.len()))),
        },
        MapKind::BoundaryTwist => match p.as_slice() {
            [] => boundary_twist(DEFAULT_TWIST)?,
            [c] => boundary_twist(*c)?,
            _ => return Err(invalid(format!("boundary_twist takes 0 or 1 parameters, got {}", p.len()))),
        },
        MapKind::Rot0 => {
            if !p.is_empty() {
                return Err(invalid(format!("rot0 takes no parameters, got {}", p.len())));
            }
            rot0()
        }
        MapKind::Composite => {
            if !p.is_empty() {
                return Err(invalid("composite maps take parts, not parameters".into()));
            }
            let parts = spec.parts.iter().map(make_map).collect::<Result<Vec<_>>>()?;
            compose_maps(&parts)?
        }
    };
    Ok(match spec.claimed_k {
        Some(k) => map.with_claimed_k(Some(k)),
        None => map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rotmap::{beltrami_fd, DEFAULT_FD_STEP};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn spec(kind: MapKind, params: &[f64]) -> MapSpec {
        MapSpec::new(kind, params.to_vec())
    }

    #[test]
    fn catalog_values() {
        let m = make_map(&spec(MapKind::Mobius, &[0.5])).unwrap();
        assert_eq!(m.apply(HPoint::ORIGIN).unwrap().z(), Complex64::new(0.5, 0.0));
        assert_eq!(m.claimed_k(), Some(1.0));

        let s = make_map(&spec(MapKind::RadialStretch, &[2.0])).unwrap();
        assert_eq!(s.apply(HPoint::real(0.5).unwrap()).unwrap().z(), Complex64::new(0.25, 0.0));
        assert_eq!(s.claimed_k(), Some(2.0));

        let r = make_map(&spec(MapKind::Rot0, &[])).unwrap();
        let img = r.apply(HPoint::real(0.5).unwrap()).unwrap();
        assert_abs_diff_eq!(img.norm(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(img.arg(), 0.895_664_793_857_865, epsilon = 1e-14);
        assert_eq!(r.claimed_k(), None);

        let t = make_map(&spec(MapKind::BoundaryTwist, &[])).unwrap();
        assert_eq!(t.claimed_k(), None);
        let img = t.apply(HPoint::real(0.5).unwrap()).unwrap();
        assert_abs_diff_eq!(img.arg(), 0.4, epsilon = 1e-15);
    }

    #[test]
    fn invalid_specs() {
        assert!(make_map(&spec(MapKind::RadialStretch, &[0.5])).is_err());
        assert!(make_map(&spec(MapKind::RadialStretch, &[])).is_err());
        assert!(make_map(&spec(MapKind::Mobius, &[1.0])).is_err());
        assert!(make_map(&spec(MapKind::Mobius, &[0.0, 0.8, 0.8])).is_err());
        assert!(make_map(&spec(MapKind::Mobius, &[0.1, 0.2])).is_err());
        assert!(make_map(&spec(MapKind::Rot0, &[1.0])).is_err());
        assert!(make_map(&spec(MapKind::BoundaryTwist, &[f64::NAN])).is_err());
        assert!(make_map(&MapSpec::composite(vec![])).is_err());
        let mut bad_k = spec(MapKind::Rot0, &[]);
        bad_k.claimed_k = Some(0.5);
        assert!(make_map(&bad_k).is_err());
    }

    #[test]
    fn spec_json_rejects_unknown_fields() {
        let ok: MapSpec = serde_json::from_str(r#"{"kind": "radial_stretch", "params": [2.0]}"#).unwrap();
        assert_eq!(ok.kind, MapKind::RadialStretch);
        assert!(serde_json::from_str::<MapSpec>(r#"{"kind": "rot0", "colour": 1}"#).is_err());
        assert!(serde_json::from_str::<MapSpec>(r#"{"kind": "spiral"}"#).is_err());
        let nested: MapSpec = serde_json::from_str(
            r#"{"kind": "composite", "parts": [{"kind": "mobius", "params": [0.3]}, {"kind": "rot0"}], "claimed_k": 4.0}"#,
        )
        .unwrap();
        let m = make_map(&nested).unwrap();
        assert_eq!(m.claimed_k(), Some(4.0));
    }

    #[test]
    fn composition_rules() {
        let m = MobiusMap::new(0.4, HPoint::new(0.3, -0.2).unwrap());
        let pair = compose_maps(&[mobius_map(m), mobius_map(m.inverse())]).unwrap();
        for k in 0..50 {
            let z = HPoint::from_polar(0.95 * k as f64 / 50.0, k as f64).unwrap();
            assert!((pair.apply(z).unwrap().z() - z.z()).norm() < 1e-12);
        }
        let s = compose_maps(&[radial_stretch(2.0).unwrap(), radial_stretch(3.0).unwrap()]).unwrap();
        assert_eq!(s.claimed_k(), Some(6.0));
        let sandwich = compose_maps(&[mobius_map(m), radial_stretch(2.0).unwrap(), mobius_map(m.inverse())]).unwrap();
        assert_eq!(sandwich.claimed_k(), Some(2.0));
        let none = compose_maps(&[rot0(), radial_stretch(2.0).unwrap()]).unwrap();
        assert_eq!(none.claimed_k(), None);

        // list order is application order
        let shift = mobius_map(MobiusMap::real_translation(0.5).unwrap());
        let sq = radial_stretch(2.0).unwrap();
        let c = compose_maps(&[shift, sq]).unwrap();
        assert_abs_diff_eq!(c.apply(HPoint::ORIGIN).unwrap().x(), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn stretch_dilatation() {
        for &k in &[1.5, 2.0, 4.0] {
            let s = radial_stretch(k).unwrap();
            for &(x, y) in &[(0.3, 0.0), (-0.2, 0.6), (0.05, -0.05), (0.7, 0.7)] {
                let mu = beltrami_fd(&s, HPoint::new(x, y).unwrap(), DEFAULT_FD_STEP).unwrap();
                assert_abs_diff_eq!(mu, (k - 1.0) / (k + 1.0), epsilon = 1e-6);
            }
        }
    }

    fn catalog() -> Vec<MapUnderTest> {
        vec![
            make_map(&spec(MapKind::Mobius, &[0.6])).unwrap(),
            make_map(&spec(MapKind::Mobius, &[1.1, -0.3, 0.5])).unwrap(),
            make_map(&spec(MapKind::RadialStretch, &[2.0])).unwrap(),
            make_map(&spec(MapKind::RadialStretch, &[3.5])).unwrap(),
            make_map(&spec(MapKind::BoundaryTwist, &[])).unwrap(),
            make_map(&spec(MapKind::Rot0, &[])).unwrap(),
        ]
    }

    proptest! {
        #[test]
        fn catalog_maps_round_trip(r in 0.0..0.95f64, theta in 0.0..std::f64::consts::TAU) {
            let z = HPoint::from_polar(r, theta).unwrap();
            for m in catalog() {
                let w = m.apply(z).unwrap();
                let back = m.apply_inverse(w).unwrap().unwrap();
                prop_assert!((back.z() - z.z()).norm() < 1e-10, "{}: {:?} -> {:?}", m.name(), z, back);
            }
        }
    }
}
