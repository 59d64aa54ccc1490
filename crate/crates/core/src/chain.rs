//! Chains of equal-side equilateral triangles joining a triangle to a target point.
//!
//! Each round fans the current triangle about its vertex nearest the target
//! (at most seven rotations through the interior angle) and moves to the fan
//! member closest to the target. With side `r <= 1` every round gets at least
//! `r / 100` closer, which bounds the chain length by `max{7, 700 d / r}`.

use std::fmt;

use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::metric::dist_disk;
use crate::mobius::MobiusMap;
use crate::point::HPoint;
use crate::triangle::{EqTriangle, EQUILATERAL_TOL};

/// Hyperbolic distance within which two vertices count as the same point.
pub const SHARED_VERTEX_TOL: f64 = 1e-10;

/// Largest fan allowed around one vertex.
pub const MAX_FAN: usize = 7;

/// Tolerance on the per-round decrease `r / 100`.
pub const PROGRESS_SLACK: f64 = 1e-12;

/// Fan candidates whose distances differ by less than this are tied; the
/// lowest index wins. Shared vertices make exact ties common.
pub const TIE_TOL: f64 = 1e-12;

const DISTANCE_RECORD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct TriangleChain {
    triangles: Vec<EqTriangle>,
    target: HPoint,
    distances: Vec<f64>,
}

impl TriangleChain {
    pub fn triangles(&self) -> &[EqTriangle] {
        &self.triangles
    }

    pub fn target(&self) -> HPoint {
        self.target
    }

    /// `rho(target, T_i)` for every triangle in order.
    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn side(&self) -> f64 {
        self.triangles[0].side()
    }

    pub fn initial_distance(&self) -> f64 {
        self.distances[0]
    }

    /// `max{7, ceil(700 d / r)}` for the starting distance `d`.
    pub fn length_bound(&self) -> usize {
        length_bound(self.initial_distance(), self.side())
    }

    /// `m r / d`; the bound corresponds to 700. `None` when the target starts inside.
    pub fn slack_ratio(&self) -> Option<f64> {
        let d = self.initial_distance();
        (d > 0.0).then(|| self.len() as f64 * self.side() / d)
    }
}

pub fn length_bound(distance: f64, side: f64) -> usize {
    let scaled = (700.0 * distance / side).ceil();
    (scaled as usize).max(7)
}

/// `k` successive rotations of `t` about vertex `v` (0-based) through its interior angle.
///
/// Each member shares with its predecessor the side from `v` to the vertex
/// the rotation moves onto; members are returned in rotation order.
pub fn fan_about_vertex(t: &EqTriangle, v: usize, k: usize) -> Result<Vec<EqTriangle>> {
    if v > 2 {
        return Err(GeomError::InvalidParameter(format!("vertex index {v}")));
    }
    if k > MAX_FAN {
        return Err(GeomError::InvalidParameter(format!("fan of {k} triangles, at most {MAX_FAN}")));
    }
    let verts = t.vertices();
    let (ia, ib) = ((v + 1) % 3, (v + 2) % 3);
    let to_origin = MobiusMap::sending_to_origin(verts[v]);
    let a = to_origin.apply_raw(verts[ia].z());
    let b = to_origin.apply_raw(verts[ib].z());
    let turn = (a / b).arg();
    let rot = to_origin.inverse().compose(&MobiusMap::rotation(turn)).compose(&to_origin);

    let mut fan = Vec::with_capacity(k);
    let mut cur = *t;
    for _ in 0..k {
        let prev = cur.vertices();
        let mut next = prev;
        next[ib] = prev[ia];
        next[ia] = rot.apply(prev[ia])?;
        cur = cur.moved_with_vertices(&rot, next)?;
        fan.push(cur);
    }
    Ok(fan)
}

fn nearest_vertex(t: &EqTriangle, p: HPoint) -> Result<usize> {
    let verts = t.vertices();
    let mut best = (0, dist_disk(p, verts[0])?);
    for (k, v) in verts.iter().enumerate().skip(1) {
        let d = dist_disk(p, *v)?;
        if d < best.1 {
            best = (k, d);
        }
    }
    Ok(best.0)
}

/// Chain from `t` to a triangle containing `p`.
pub fn build_chain(t: &EqTriangle, p: HPoint) -> Result<TriangleChain> {
    let r = t.side();
    if r > 1.0 {
        return Err(GeomError::Domain {
            what: "chain side length",
            expected: "(0, 1]",
            value: r,
        });
    }
    let mut cur = *t;
    let mut d = cur.dist_to_point(p)?;
    let mut chain = TriangleChain {
        triangles: vec![cur],
        target: p,
        distances: vec![d],
    };
    let step = r / 100.0;
    let max_rounds = (d / (step - PROGRESS_SLACK)).ceil() as usize + 1;
    let mut round = 0;
    while d > 0.0 {
        round += 1;
        let v = nearest_vertex(&cur, p)?;
        let fan = fan_about_vertex(&cur, v, MAX_FAN)?;
        let dists = fan
            .iter()
            .map(|f| f.dist_to_point(p))
            .collect::<Result<Vec<_>>>()?;
        let min = dists.iter().cloned().fold(f64::INFINITY, f64::min);
        let j = dists.iter().position(|&dk| dk <= min + TIE_TOL).expect("fan is not empty");
        let after = dists[j];
        if (after > 0.0 && after > d - step + PROGRESS_SLACK) || round > max_rounds {
            return Err(GeomError::NoProgress {
                round,
                before: d,
                after,
            });
        }
        chain.triangles.extend_from_slice(&fan[..=j]);
        chain.distances.extend_from_slice(&dists[..=j]);
        cur = fan[j];
        d = after;
    }
    Ok(chain)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChainViolation {
    Empty,
    UnequalSides { index: usize },
    NoSharedSide { index: usize },
    NotEquilateral { index: usize },
    TargetOutside,
    DistanceRecord { index: usize },
}

impl fmt::Display for ChainViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainViolation::Empty => write!(f, "empty chain"),
            ChainViolation::UnequalSides { index } => write!(f, "triangle {index} has a different side length"),
            ChainViolation::NoSharedSide { index } => {
                write!(f, "triangles {} and {index} do not share a side", index - 1)
            }
            ChainViolation::NotEquilateral { index } => write!(f, "triangle {index} is not equilateral"),
            ChainViolation::TargetOutside => write!(f, "last triangle does not contain the target"),
            ChainViolation::DistanceRecord { index } => write!(f, "recorded distance {index} is wrong"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainReport {
    pub violation: Option<ChainViolation>,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

fn shared_vertices(s: &EqTriangle, t: &EqTriangle) -> usize {
    let tv = t.vertices();
    s.vertices()
        .iter()
        .filter(|a| {
            tv.iter()
                .any(|b| dist_disk(**a, *b).map_or(false, |d| d <= SHARED_VERTEX_TOL))
        })
        .count()
}

/// Re-check every chain invariant from scratch; reports the first failure.
pub fn validate_chain(c: &TriangleChain) -> ChainReport {
    ChainReport {
        violation: first_violation(c),
    }
}

fn first_violation(c: &TriangleChain) -> Option<ChainViolation> {
    let tris = &c.triangles;
    if tris.is_empty() {
        return Some(ChainViolation::Empty);
    }
    let r = tris[0].side();
    if let Some(index) = tris.iter().position(|t| (t.side() - r).abs() > EQUILATERAL_TOL) {
        return Some(ChainViolation::UnequalSides { index });
    }
    if let Some(k) = tris.windows(2).position(|w| shared_vertices(&w[0], &w[1]) < 2) {
        return Some(ChainViolation::NoSharedSide { index: k + 1 });
    }
    let bad_shape = tris.iter().position(|t| match t.as_triangle().hyperbolic_sides() {
        Ok(sides) => sides.iter().any(|s| (s - r).abs() > EQUILATERAL_TOL),
        Err(_) => true,
    });
    if let Some(index) = bad_shape {
        return Some(ChainViolation::NotEquilateral { index });
    }
    if !tris[tris.len() - 1].contains_point(c.target) {
        return Some(ChainViolation::TargetOutside);
    }
    if c.distances.len() != tris.len() {
        return Some(ChainViolation::DistanceRecord {
            index: c.distances.len().min(tris.len()),
        });
    }
    for (index, (t, &d)) in tris.iter().zip(&c.distances).enumerate() {
        match t.dist_to_point(c.target) {
            Ok(actual) if (actual - d).abs() <= DISTANCE_RECORD_TOL => {}
            _ => return Some(ChainViolation::DistanceRecord { index }),
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangle::vertex_param_from_side;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{PI, TAU};

    fn random_disk_point(rng: &mut ChaCha8Rng, hyp_radius: f64) -> HPoint {
        let s = hyp_radius * rng.gen::<f64>().sqrt();
        HPoint::from_polar((s / 2.0).tanh(), rng.gen_range(0.0..TAU)).unwrap()
    }

    fn random_instance(rng: &mut ChaCha8Rng) -> (EqTriangle, HPoint) {
        let r = rng.gen_range(0.05..=1.0);
        let c = random_disk_point(rng, 2.0);
        let t = EqTriangle::from_side(r, &MobiusMap::moving_origin_to(c, rng.gen_range(0.0..TAU))).unwrap();
        let to_c = MobiusMap::moving_origin_to(c, 0.0);
        let p = to_c.apply(random_disk_point(rng, 5.0)).unwrap();
        (t, p)
    }

    #[test]
    fn fan_members_share_sides_and_lengths() {
        let t = EqTriangle::from_side(0.7, &MobiusMap::moving_origin_to(HPoint::new(0.2, -0.4).unwrap(), 0.3)).unwrap();
        for v in 0..3 {
            let fan = fan_about_vertex(&t, v, 7).unwrap();
            assert_eq!(fan.len(), 7);
            let mut prev = t;
            for f in &fan {
                let sides = f.as_triangle().hyperbolic_sides().unwrap();
                assert!(sides.iter().all(|s| (s - 0.7).abs() < 1e-9), "{sides:?}");
                assert_eq!(shared_vertices(&prev, f), 2);
                assert_eq!(f.vertices()[v], t.vertices()[v]);
                prev = *f;
            }
        }
        let one = fan_about_vertex(&t, 0, 1).unwrap();
        assert_eq!(shared_vertices(&t, &one[0]), 2);
        assert!(!t.contains_point(one[0].centroid()));
        assert!(fan_about_vertex(&t, 0, 8).is_err());
        assert!(fan_about_vertex(&t, 3, 1).is_err());
        assert!(fan_about_vertex(&t, 0, 0).unwrap().is_empty());
    }

    // T together with its first six rotations makes seven triangles; the
    // last of them already overlaps T because the angle exceeds 2 pi / 7.
    #[test]
    fn seventh_triangle_overlaps_start() {
        for &r in &[0.05, 0.5, 1.0] {
            let t = EqTriangle::from_side(r, &MobiusMap::identity()).unwrap();
            let fan = fan_about_vertex(&t, 0, 7).unwrap();
            let v = t.vertices()[0];
            let mut rng = ChaCha8Rng::seed_from_u64(61);
            let back = MobiusMap::sending_to_origin(v).inverse();
            let eps = (r / 20.0 / 2.0).tanh();
            let hits = (0..10_000)
                .filter(|_| {
                    let z = back.apply(HPoint::from_polar(eps * rng.gen::<f64>(), rng.gen_range(0.0..TAU)).unwrap()).unwrap();
                    fan[5].contains_point(z) && t.contains_point(z)
                })
                .count();
            assert!(hits > 0, "r={r}");
            assert!(fan[..5].iter().all(|f| !f.contains_point(t.centroid())));
        }
    }

    #[test]
    fn fan_covers_neighbourhood_sector() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        for &r in &[0.1, 0.5, 1.0] {
            let t = EqTriangle::from_side(r, &MobiusMap::identity()).unwrap();
            let fan = fan_about_vertex(&t, 0, 7).unwrap();
            let tv = vertex_param_from_side(r).unwrap();
            let outer = ((2.0 * tv.atanh() + r / 100.0) / 2.0).tanh();
            let mut accepted = 0;
            while accepted < 1000 {
                let z = HPoint::from_polar(outer * rng.gen::<f64>().sqrt(), rng.gen_range(-PI / 3.0..=PI / 3.0)).unwrap();
                let d = t.dist_to_point(z).unwrap();
                if d == 0.0 || d >= r / 100.0 {
                    continue;
                }
                accepted += 1;
                assert!(fan.iter().any(|f| f.contains_point(z)), "r={r} z={z:?}");
            }
        }
    }

    #[test]
    fn chain_to_centroid_is_trivial() {
        let t = EqTriangle::from_side(0.5, &MobiusMap::moving_origin_to(HPoint::new(0.1, 0.1).unwrap(), 0.0)).unwrap();
        let c = build_chain(&t, t.centroid()).unwrap();
        assert_eq!(c.len(), 1);
        assert!(validate_chain(&c).passed());
        assert_eq!(c.slack_ratio(), None);
        assert_eq!(c.length_bound(), 7);
    }

    #[test]
    fn chain_at_unit_side_and_distance() {
        let t = EqTriangle::from_side(1.0, &MobiusMap::identity()).unwrap();
        let v = t.vertices()[0];
        // target on the ray through vertex 0, one unit beyond it
        let p = HPoint::from_polar(((2.0 * v.norm().atanh() + 1.0) / 2.0).tanh(), v.arg()).unwrap();
        assert!((t.dist_to_point(p).unwrap() - 1.0).abs() < 1e-12);
        let c = build_chain(&t, p).unwrap();
        assert!(validate_chain(&c).passed());
        assert!((700..=701).contains(&c.length_bound()));
        assert!(c.len() <= 700);
        assert!(c.len() < 20, "{}", c.len());
    }

    #[test]
    fn random_chains_valid_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        for _ in 0..100 {
            let (t, p) = random_instance(&mut rng);
            let c = build_chain(&t, p).unwrap();
            assert!(validate_chain(&c).passed());
            assert!(c.len() <= c.length_bound());
            assert_eq!(c.triangles()[0], t);
        }
    }

    #[test]
    fn rounds_make_progress() {
        let mut rng = ChaCha8Rng::seed_from_u64(64);
        for _ in 0..30 {
            let (t, p) = random_instance(&mut rng);
            let c = build_chain(&t, p).unwrap();
            let r = c.side();
            let mut last = c.distances()[0];
            let mut since = 0;
            for &d in &c.distances()[1..] {
                since += 1;
                if d == 0.0 || d <= last - r / 100.0 + PROGRESS_SLACK {
                    last = d;
                    since = 0;
                }
                assert!(since < 7);
            }
            assert_eq!(last, 0.0);
        }
    }

    #[test]
    fn mobius_equivariance_of_length() {
        let mut rng = ChaCha8Rng::seed_from_u64(65);
        for _ in 0..20 {
            let (t, p) = random_instance(&mut rng);
            let a = MobiusMap::new(rng.gen_range(0.0..TAU), random_disk_point(&mut rng, 1.0));
            let c = build_chain(&t, p).unwrap();
            let moved = build_chain(&t.map(&a).unwrap(), a.apply(p).unwrap()).unwrap();
            assert_eq!(c.len(), moved.len());
        }
    }

    #[test]
    fn larger_sides_rejected() {
        let t = EqTriangle::from_side(1.5, &MobiusMap::identity()).unwrap();
        assert!(build_chain(&t, HPoint::real(0.9).unwrap()).is_err());
    }

    fn sample_chain() -> TriangleChain {
        let t = EqTriangle::from_side(0.5, &MobiusMap::identity()).unwrap();
        let c = build_chain(&t, HPoint::from_polar((1.0f64).tanh(), 0.4).unwrap()).unwrap();
        assert!(c.len() >= 3);
        c
    }

    #[test]
    fn perturbed_vertex_fails_side_sharing() {
        let mut c = sample_chain();
        let t = c.triangles[1];
        let mut verts = t.vertices();
        let shared = (0..3)
            .find(|&k| c.triangles[0].vertices().iter().any(|v| *v == verts[k]))
            .unwrap();
        verts[shared] = HPoint::from_complex(verts[shared].z() + Complex64::new(1e-3, 0.0)).unwrap();
        c.triangles[1] = t.moved_with_vertices(&MobiusMap::identity(), verts).unwrap();
        assert_eq!(validate_chain(&c).violation, Some(ChainViolation::NoSharedSide { index: 1 }));
    }

    #[test]
    fn mixed_sides_fail() {
        let mut c = sample_chain();
        c.triangles[2] = EqTriangle::from_side(0.6, &MobiusMap::identity()).unwrap();
        assert_eq!(validate_chain(&c).violation, Some(ChainViolation::UnequalSides { index: 2 }));
    }

    #[test]
    fn other_violations() {
        let mut c = sample_chain();
        c.target = HPoint::real(-0.9).unwrap();
        assert_eq!(validate_chain(&c).violation, Some(ChainViolation::TargetOutside));

        let mut c = sample_chain();
        c.distances[1] += 0.1;
        assert_eq!(validate_chain(&c).violation, Some(ChainViolation::DistanceRecord { index: 1 }));

        let mut c = sample_chain();
        c.triangles.clear();
        assert_eq!(validate_chain(&c).violation, Some(ChainViolation::Empty));

        let mut c = sample_chain();
        let t = c.triangles[0];
        let mut verts = t.vertices();
        verts[0] = HPoint::from_complex(verts[0].z() * 1.001).unwrap();
        c.triangles[0] = t.moved_with_vertices(&MobiusMap::identity(), verts).unwrap();
        // the moved vertex is not shared with the next triangle
        let v = validate_chain(&c).violation.unwrap();
        assert!(matches!(v, ChainViolation::NotEquilateral { index: 0 } | ChainViolation::NoSharedSide { index: 1 }));
    }

    #[test]
    fn chain_serializes() {
        let c = sample_chain();
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json["triangles"].as_array().unwrap().len(), c.len());
        assert!(json["triangles"][0]["vertices"][0]["x"].is_number());
        assert_eq!(json["distances"].as_array().unwrap().len(), c.len());
    }
}
