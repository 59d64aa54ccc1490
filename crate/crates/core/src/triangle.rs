//! Equilateral hyperbolic triangles, skew, containment and the inscribed-ball constant.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use once_cell::sync::OnceCell;
use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::geodesic::MIN_SIDE;
use crate::metric::dist_disk;
use crate::mobius::MobiusMap;
use crate::point::HPoint;
use crate::search::golden_section_min;

/// Pairwise distances of a valid equilateral triangle agree to this tolerance.
pub const EQUILATERAL_TOL: f64 = 1e-9;

/// Points within this hyperbolic distance of a side count as inside.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Interior angle of an equilateral triangle with side `r`,
/// `arccos((1 + tanh^2(r/2)) / 2)`.
pub fn side_to_angle(r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(GeomError::Domain {
            what: "side length",
            expected: "(0, inf)",
            value: r,
        });
    }
    let x = (r / 2.0).tanh();
    Ok(((1.0 + x * x) / 2.0).acos())
}

/// Angle `alpha` for which `(0, x, x e^{i alpha})` is equilateral, `arccos((1 + x^2) / 2)`.
pub fn vertex_to_angle(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(GeomError::Domain {
            what: "vertex modulus",
            expected: "(0, 1)",
            value: x,
        });
    }
    Ok(((1.0 + x * x) / 2.0).acos())
}

/// Side length of the triangle with vertices `t, t w, t w^2`, `w = e^{2 pi i / 3}`.
///
/// Near `t = 1` the factor `1 - u^2` is taken as `(1 - t^2)^2 / (1 + t^2 + t^4)`.
pub fn side_from_vertex_param(t: f64) -> f64 {
    let q = 1.0 + t * t + t.powi(4);
    let u = t * 3f64.sqrt() / q.sqrt();
    if u < 0.5 {
        return 2.0 * u.atanh();
    }
    let one_minus_t_sq = (1.0 - t) * (1.0 + t);
    2.0 * u.ln_1p() - 2.0 * one_minus_t_sq.ln() + q.ln()
}

/// Inverse of [`side_from_vertex_param`] by bisection on the increasing map `t -> r(t)`.
pub fn vertex_param_from_side(r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(GeomError::Domain {
            what: "side length",
            expected: "(0, inf)",
            value: r,
        });
    }
    let (mut lo, mut hi) = (0.0f64, 1.0 - 1e-15);
    if side_from_vertex_param(hi) < r {
        return Err(GeomError::SolverFailure(r));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if side_from_vertex_param(mid) < r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Three vertices; skew needs nothing else.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Triangle {
    pub vertices: [HPoint; 3],
}

impl Triangle {
    pub fn new(v1: HPoint, v2: HPoint, v3: HPoint) -> Self {
        Triangle {
            vertices: [v1, v2, v3],
        }
    }

    pub fn is_degenerate(&self) -> bool {
        let [a, b, c] = self.vertices;
        a == b || b == c || a == c
    }

    pub fn hyperbolic_sides(&self) -> Result<[f64; 3]> {
        let [a, b, c] = self.vertices;
        Ok([dist_disk(a, b)?, dist_disk(b, c)?, dist_disk(c, a)?])
    }

    pub fn euclidean_sides(&self) -> [f64; 3] {
        let [a, b, c] = self.vertices;
        [a.euclid_dist(b), b.euclid_dist(c), c.euclid_dist(a)]
    }

    pub fn skew_hyp(&self) -> Result<f64> {
        skew_of(self.hyperbolic_sides()?)
    }

    pub fn skew_euclid(&self) -> Result<f64> {
        skew_of(self.euclidean_sides())
    }
}

/// Longest over shortest of three side lengths.
pub fn skew_of(sides: [f64; 3]) -> Result<f64> {
    let max = sides.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = sides.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < MIN_SIDE {
        return Err(GeomError::Degenerate("shortest side below 1e-14"));
    }
    Ok(max / min)
}

pub fn skew_hyp(t: &Triangle) -> Result<f64> {
    t.skew_hyp()
}

pub fn skew_euclid(t: &Triangle) -> Result<f64> {
    t.skew_euclid()
}

/// A validated equilateral hyperbolic triangle (closed solid region).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EqTriangle {
    vertices: [HPoint; 3],
    side: f64,
    #[serde(skip)]
    vertex_param: f64,
    #[serde(skip)]
    centroid: HPoint,
}

impl EqTriangle {
    /// The canonical triangle `t, t w, t w^2` of side `r` moved by `placement`.
    /// Its centroid is `placement(0)`.
    pub fn from_side(r: f64, placement: &MobiusMap) -> Result<Self> {
        let t = vertex_param_from_side(r)?;
        let mut vertices = [HPoint::ORIGIN; 3];
        for (k, v) in vertices.iter_mut().enumerate() {
            let w = Complex64::from_polar(t, TAU * k as f64 / 3.0);
            *v = HPoint::from_complex(placement.apply_raw(w))?;
        }
        let centroid = placement.apply(HPoint::ORIGIN)?;
        let tri = EqTriangle {
            vertices,
            side: r,
            vertex_param: t,
            centroid,
        };
        tri.check_equilateral()?;
        Ok(tri)
    }

    /// Validate three vertices as an equilateral triangle.
    pub fn from_vertices(vertices: [HPoint; 3]) -> Result<Self> {
        let sides = Triangle { vertices }.hyperbolic_sides()?;
        let max = sides.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = sides.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < MIN_SIDE {
            return Err(GeomError::Degenerate("coincident vertices"));
        }
        if max - min > EQUILATERAL_TOL {
            return Err(GeomError::InvalidParameter(format!(
                "triangle is not equilateral: sides {sides:?}"
            )));
        }
        Self::from_parts_unchecked(vertices, (sides[0] + sides[1] + sides[2]) / 3.0)
    }

    /// Build without checking the side lengths; the centroid is derived from
    /// the first vertex and the bisector of the other two.
    pub(crate) fn from_parts_unchecked(vertices: [HPoint; 3], side: f64) -> Result<Self> {
        let t = vertex_param_from_side(side)?;
        let to_origin = MobiusMap::sending_to_origin(vertices[0]);
        let u = to_origin.apply_raw(vertices[1].z());
        let v = to_origin.apply_raw(vertices[2].z());
        let bisector = u / u.norm() + v / v.norm();
        let dir = if bisector.norm() > 0.0 {
            bisector / bisector.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let centroid = HPoint::from_complex(to_origin.inverse().apply_raw(dir * t))?;
        Ok(EqTriangle {
            vertices,
            side,
            vertex_param: t,
            centroid,
        })
    }

    /// Image under `m` with the vertices supplied by the caller, who knows them
    /// more accurately (for example shared with a neighbour).
    pub(crate) fn moved_with_vertices(&self, m: &MobiusMap, vertices: [HPoint; 3]) -> Result<EqTriangle> {
        Ok(EqTriangle {
            vertices,
            side: self.side,
            vertex_param: self.vertex_param,
            centroid: m.apply(self.centroid)?,
        })
    }

    fn check_equilateral(&self) -> Result<()> {
        let sides = Triangle {
            vertices: self.vertices,
        }
        .hyperbolic_sides()?;
        if sides.iter().any(|s| (s - self.side).abs() > EQUILATERAL_TOL) {
            return Err(GeomError::InvalidParameter(format!(
                "triangle is not equilateral: sides {sides:?}, expected {}",
                self.side
            )));
        }
        Ok(())
    }

    pub fn vertices(&self) -> [HPoint; 3] {
        self.vertices
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    /// The parameter `t` of the canonical position `t, t w, t w^2`.
    pub fn vertex_param(&self) -> f64 {
        self.vertex_param
    }

    pub fn interior_angle(&self) -> f64 {
        side_to_angle(self.side).expect("side is positive")
    }

    /// Image of the centre of the canonical position; equidistant from the vertices.
    pub fn centroid(&self) -> HPoint {
        self.centroid
    }

    pub fn as_triangle(&self) -> Triangle {
        Triangle {
            vertices: self.vertices,
        }
    }

    /// Image under an isometry; the side length is carried over.
    pub fn map(&self, m: &MobiusMap) -> Result<EqTriangle> {
        let mut vertices = self.vertices;
        for v in vertices.iter_mut() {
            *v = m.apply(*v)?;
        }
        Ok(EqTriangle {
            vertices,
            side: self.side,
            vertex_param: self.vertex_param,
            centroid: m.apply(self.centroid)?,
        })
    }

    /// Whether `p` lies in the closed solid triangle.
    ///
    /// Each side is moved onto the real diameter; `p` must be on the same side
    /// of it as the centroid, up to [`BOUNDARY_TOL`] in hyperbolic distance.
    pub fn contains_point(&self, p: HPoint) -> bool {
        (0..3).all(|k| {
            let a = self.vertices[k];
            let b = self.vertices[(k + 1) % 3];
            let frame = MobiusMap::normalizing(a, b);
            let side_of = |w: Complex64| signed_dist_to_real_axis(w);
            let reference = side_of(frame.apply_raw(self.centroid.z()));
            let sp = side_of(frame.apply_raw(p.z()));
            sp.abs() <= BOUNDARY_TOL || sp.signum() == reference.signum()
        })
    }

    /// Hyperbolic distance from `p` to the closed triangle.
    pub fn dist_to_point(&self, p: HPoint) -> Result<f64> {
        if self.contains_point(p) {
            return Ok(0.0);
        }
        let mut best = f64::INFINITY;
        for k in 0..3 {
            let d = dist_to_segment(p, self.vertices[k], self.vertices[(k + 1) % 3])?;
            best = best.min(d);
        }
        Ok(best)
    }
}

pub fn equilateral_from_side(r: f64, placement: &MobiusMap) -> Result<EqTriangle> {
    EqTriangle::from_side(r, placement)
}

pub fn centroid(t: &EqTriangle) -> HPoint {
    t.centroid()
}

pub fn contains_point(t: &EqTriangle, p: HPoint) -> bool {
    t.contains_point(p)
}

pub fn dist_to_triangle(p: HPoint, t: &EqTriangle) -> Result<f64> {
    t.dist_to_point(p)
}

// Signed distance from w to the real diameter: sinh(d) = 2 Im(w) / (1 - |w|^2).
fn signed_dist_to_real_axis(w: Complex64) -> f64 {
    (2.0 * w.im / (1.0 - w.norm_sqr())).asinh()
}

/// Distance from `p` to the geodesic segment `[a, b]`.
///
/// With `a` at 0 and `b` on the positive real axis, the distance from `p` to
/// the points of the real diameter is convex with its minimum at the foot of
/// the perpendicular, `(|c| - 1) / (|c| + 1)` where `c` is the Cayley image of
/// `p`; clamping the foot to the segment solves the constrained problem.
pub fn dist_to_segment(p: HPoint, a: HPoint, b: HPoint) -> Result<f64> {
    if a == b {
        return dist_disk(p, a);
    }
    let frame = MobiusMap::normalizing(a, b);
    let b_x = frame.apply_raw(b.z()).re;
    let w = frame.apply_raw(p.z());
    let one = Complex64::new(1.0, 0.0);
    let c = (one + w) / (one - w);
    let modulus = c.norm();
    let foot = ((modulus - 1.0) / (modulus + 1.0)).clamp(0.0, b_x);
    let q = HPoint::real(foot)?;
    dist_disk(HPoint::from_complex(w)?, q)
}

/// Golden-section variant of [`dist_to_segment`] over the arclength parameter.
pub fn dist_to_segment_search(p: HPoint, a: HPoint, b: HPoint) -> Result<f64> {
    let seg = crate::geodesic::GeodesicSegment::new(a, b)?;
    let f = |s: f64| -> f64 {
        seg.point_at(s)
            .and_then(|x| dist_disk(p, x))
            .unwrap_or(f64::INFINITY)
    };
    let (_, v) = golden_section_min(&f, 0.0, 1.0, 1e-12, 200);
    Ok(v.min(f(0.0)).min(f(1.0)))
}

/// Euclidean and hyperbolic radii of the largest balls about 0 inside the
/// canonical triangle `t, t w, t w^2`:
///
/// `R(t) = (1 + t^2 - sqrt(1 + t^2 + t^4)) / t` and `R~(t) = log((1 + R) / (1 - R))`.
///
/// `R` is evaluated as `t / (1 + t^2 + sqrt(1 + t^2 + t^4))`, the same value
/// without cancellation for small `t`.
pub fn inscribed_radii(t: f64) -> Result<(f64, f64)> {
    if !(t > 0.0 && t < 1.0) {
        return Err(GeomError::Domain {
            what: "vertex parameter",
            expected: "(0, 1)",
            value: t,
        });
    }
    let r = t / (1.0 + t * t + (1.0 + t * t + t.powi(4)).sqrt());
    Ok((r, 2.0 * r.atanh()))
}

/// `R~(t(r)) / (2 r)`: the ball `B(c, 2 delta r)` fits in a triangle of side `r`
/// exactly when `delta` is at most this ratio.
pub fn inscribed_ratio(r: f64) -> Result<f64> {
    let t = vertex_param_from_side(r)?;
    Ok(inscribed_radii(t)?.1 / (2.0 * r))
}

/// The largest `delta` with `B_rho(c, 2 delta r)` inside every equilateral
/// triangle of side `r <= 1`, `c` its centroid.
///
/// Minimizes [`inscribed_ratio`] over a uniform grid on `(0, 1]` and refines
/// around the best grid cell by golden section. Computed once.
pub fn delta_constant() -> f64 {
    static DELTA: OnceCell<f64> = OnceCell::new();
    *DELTA.get_or_init(|| {
        const GRID: usize = 1000;
        let ratio = |r: f64| inscribed_ratio(r).unwrap_or(f64::INFINITY);
        let (mut best_r, mut best) = (1.0, ratio(1.0));
        for k in 1..=GRID {
            let r = k as f64 / GRID as f64;
            let v = ratio(r);
            if v < best {
                best = v;
                best_r = r;
            }
        }
        let lo = (best_r - 1.0 / GRID as f64).max(1e-6);
        let hi = (best_r + 1.0 / GRID as f64).min(1.0);
        let (_, refined) = golden_section_min(&ratio, lo, hi, 1e-10, 200);
        best.min(refined)
    })
}

/// `pi / 3`, the Euclidean limit of the interior angle.
pub const EUCLIDEAN_ANGLE: f64 = PI / 3.0;

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_map(rng: &mut ChaCha8Rng, max_modulus: f64) -> MobiusMap {
        let c = HPoint::from_polar(max_modulus * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU)).unwrap();
        MobiusMap::moving_origin_to(c, rng.gen_range(0.0..TAU))
    }

    #[test]
    fn side_to_angle_values() {
        assert!(side_to_angle(0.0).is_err());
        assert!(side_to_angle(-1.0).is_err());
        assert_abs_diff_eq!(side_to_angle(1e-8).unwrap(), PI / 3.0, epsilon = 1e-12);
        // mpmath: acos((1 + tanh(1/2)^2) / 2)
        let a1 = side_to_angle(1.0).unwrap();
        assert_abs_diff_eq!(a1, 0.918_797_872_178_027_4, epsilon = 1e-12);
        assert!(a1 > 2.0 * PI / 7.0);
        let mut prev = PI / 3.0;
        for k in 1..=100 {
            let a = side_to_angle(k as f64 * 0.05).unwrap();
            assert!(a < prev);
            prev = a;
        }
    }

    #[test]
    fn vertex_to_angle_values() {
        assert!(vertex_to_angle(0.0).is_err());
        assert!(vertex_to_angle(1.0).is_err());
        let a = vertex_to_angle(0.3).unwrap();
        assert_abs_diff_eq!(a, 0.994_407_212_058_699_5, epsilon = 1e-12);
        let x = HPoint::real(0.3).unwrap();
        let y = HPoint::from_polar(0.3, a).unwrap();
        assert_abs_diff_eq!(dist_disk(x, y).unwrap(), dist_disk(HPoint::ORIGIN, x).unwrap(), epsilon = 1e-10);
        assert_abs_diff_eq!(vertex_to_angle(1e-9).unwrap(), PI / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(vertex_to_angle(0.5f64.tanh()).unwrap(), side_to_angle(1.0).unwrap(), epsilon = 1e-15);
    }

    #[test]
    fn vertex_param_from_side_matches_closed_form() {
        // t^2 solves u^2 s^2 + (u^2 - 3) s + u^2 = 0 with u = tanh(r/2).
        for &r in &[1e-6, 0.01, 0.3, 1.0, 2.5, 6.0] {
            let u = (r / 2.0f64).tanh();
            let (a, b) = (u * u, u * u - 3.0);
            let s = 2.0 * a / (-b + (b * b - 4.0 * a * a).sqrt());
            let t = vertex_param_from_side(r).unwrap();
            assert!((t - s.sqrt()).abs() < 1e-13 * s.sqrt().max(1e-3), "r={r}: {t} vs {}", s.sqrt());
        }
        assert_abs_diff_eq!(vertex_param_from_side(1.0).unwrap(), 0.277_660_097_105_892_4, epsilon = 1e-13);
        let t = vertex_param_from_side(0.01).unwrap();
        assert!((t / (0.01 / (2.0 * 3f64.sqrt())) - 1.0).abs() < 1e-4);
        assert!(matches!(vertex_param_from_side(80.0), Err(GeomError::SolverFailure(_))));
    }

    #[test]
    fn canonical_triangle() {
        let tri = EqTriangle::from_side(1.0, &MobiusMap::identity()).unwrap();
        assert_abs_diff_eq!(tri.vertex_param(), 0.277_660_097_105_892_4, epsilon = 1e-13);
        for s in tri.as_triangle().hyperbolic_sides().unwrap() {
            assert_abs_diff_eq!(s, 1.0, epsilon = 1e-10);
        }
        assert!(tri.centroid().norm() < 1e-16);
        let rebuilt = EqTriangle::from_vertices(tri.vertices()).unwrap();
        assert!(rebuilt.centroid().norm() < 1e-15);
    }

    #[test]
    fn isometry_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..200 {
            let r = rng.gen_range(0.05..2.0);
            let tri = EqTriangle::from_side(r, &random_map(&mut rng, 0.7)).unwrap();
            let m = random_map(&mut rng, 0.7);
            let image = tri.map(&m).unwrap();
            let again = EqTriangle::from_vertices(image.vertices()).unwrap();
            assert!((again.side() - r).abs() < 1e-9);
            assert!((image.as_triangle().skew_hyp().unwrap() - 1.0).abs() < 1e-9);
            // Centroid equivariance and equidistance.
            assert!((again.centroid().z() - m.apply(tri.centroid()).unwrap().z()).norm() < 1e-10);
            let ds: Vec<f64> = tri.vertices().iter().map(|v| dist_disk(tri.centroid(), *v).unwrap()).collect();
            assert!((ds[0] - ds[1]).abs() < 1e-9 && (ds[1] - ds[2]).abs() < 1e-9);
            // Containment and distance are invariant.
            let p = HPoint::from_polar(0.8 * rng.gen::<f64>(), rng.gen_range(0.0..TAU)).unwrap();
            let mp = m.apply(p).unwrap();
            assert_eq!(tri.contains_point(p), image.contains_point(mp));
            assert!((tri.dist_to_point(p).unwrap() - image.dist_to_point(mp).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn skew_values() {
        let tri = Triangle::new(
            HPoint::ORIGIN,
            HPoint::real(0.5).unwrap(),
            HPoint::new(0.0, 0.5).unwrap(),
        );
        // log 3, log 3 and rho(0.5, 0.5i) = 1.6806997724...
        assert_abs_diff_eq!(tri.skew_hyp().unwrap(), 1.529_838_861_046_767_6, epsilon = 1e-12);
        assert_abs_diff_eq!(tri.skew_euclid().unwrap(), 2f64.sqrt(), epsilon = 1e-15);

        let eq = EqTriangle::from_side(0.7, &MobiusMap::identity()).unwrap();
        assert_abs_diff_eq!(eq.as_triangle().skew_hyp().unwrap(), 1.0, epsilon = 1e-12);
        // Euclidean-equilateral triangle.
        let e = Triangle::new(
            HPoint::from_polar(0.3, 0.0).unwrap(),
            HPoint::from_polar(0.3, TAU / 3.0).unwrap(),
            HPoint::from_polar(0.3, 2.0 * TAU / 3.0).unwrap(),
        );
        assert_abs_diff_eq!(e.skew_euclid().unwrap(), 1.0, epsilon = 1e-14);

        // Hyperbolic-equilateral triangle pushed toward the boundary is Euclidean-skewed.
        let far = EqTriangle::from_side(1.0, &MobiusMap::moving_origin_to(HPoint::real(0.9).unwrap(), 0.0)).unwrap();
        assert_abs_diff_eq!(far.as_triangle().skew_hyp().unwrap(), 1.0, epsilon = 1e-9);
        assert!(far.as_triangle().skew_euclid().unwrap() > 1.2);

        let w = HPoint::real(0.2).unwrap();
        assert!(Triangle::new(w, w, HPoint::ORIGIN).skew_hyp().is_err());
        assert!(Triangle::new(w, w, HPoint::ORIGIN).is_degenerate());
    }

    #[test]
    fn containment() {
        let tri = EqTriangle::from_side(1.0, &MobiusMap::moving_origin_to(HPoint::new(0.2, -0.3).unwrap(), 0.4)).unwrap();
        assert!(tri.contains_point(tri.centroid()));
        for v in tri.vertices() {
            assert!(tri.contains_point(v));
            assert_eq!(tri.dist_to_point(v).unwrap(), 0.0);
        }
        // Points at distance 2r from the centroid lie outside in every direction.
        for k in 0..64 {
            let theta = TAU * k as f64 / 64.0;
            let q = MobiusMap::sending_to_origin(tri.centroid())
                .inverse()
                .apply(HPoint::from_polar((2.0f64 / 2.0).tanh(), theta).unwrap())
                .unwrap();
            assert!(!tri.contains_point(q));
            assert!(tri.dist_to_point(q).unwrap() > 0.0);
        }
    }

    #[test]
    fn distance_matches_dense_boundary_sampling() {
        let tri = EqTriangle::from_side(1.0, &MobiusMap::identity()).unwrap();
        let p = HPoint::real(-0.5).unwrap();
        let vs = tri.vertices();
        let mut brute = f64::INFINITY;
        const N: usize = 100_000;
        for k in 0..3 {
            let seg = crate::geodesic::GeodesicSegment::new(vs[k], vs[(k + 1) % 3]).unwrap();
            for i in 0..=N / 3 {
                let x = seg.point_at(i as f64 / (N / 3) as f64).unwrap();
                brute = brute.min(dist_disk(p, x).unwrap());
            }
        }
        let d = tri.dist_to_point(p).unwrap();
        assert!((d - brute).abs() < 1e-8, "{d} vs {brute}");
        let searched = (0..3)
            .map(|k| dist_to_segment_search(p, vs[k], vs[(k + 1) % 3]).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!((d - searched).abs() < 1e-12);
    }

    #[test]
    fn distance_zero_iff_contained() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..300 {
            let tri = EqTriangle::from_side(rng.gen_range(0.1..1.5), &random_map(&mut rng, 0.5)).unwrap();
            for _ in 0..20 {
                let p = HPoint::from_polar(0.9 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU)).unwrap();
                let d = tri.dist_to_point(p).unwrap();
                assert_eq!(d == 0.0, tri.contains_point(p));
                let vs = tri.vertices();
                for k in 0..3 {
                    let a = dist_to_segment(p, vs[k], vs[(k + 1) % 3]).unwrap();
                    let b = dist_to_segment_search(p, vs[k], vs[(k + 1) % 3]).unwrap();
                    assert!((a - b).abs() < 1e-10, "{a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn inscribed_radii_anchors() {
        assert!(inscribed_radii(0.0).is_err());
        assert!(inscribed_radii(1.0).is_err());
        let (r, _) = inscribed_radii(1.0 - 1e-9).unwrap();
        assert!((r - (2.0 - 3f64.sqrt())).abs() < 1e-6);
        let (r, rt) = inscribed_radii(1e-6).unwrap();
        assert!((r / 1e-6 - 0.5).abs() < 1e-4);
        assert!((rt / 1e-6 - 1.0).abs() < 1e-4);
        let (r, _) = inscribed_radii(0.5).unwrap();
        assert_abs_diff_eq!(r, 0.208_712_152_522_080, epsilon = 1e-14);
        let mid = crate::geodesic::geodesic_midpoint(
            HPoint::from_polar(0.5, TAU / 3.0).unwrap(),
            HPoint::from_polar(0.5, 2.0 * TAU / 3.0).unwrap(),
        )
        .unwrap();
        assert_abs_diff_eq!(mid.point.norm(), r, epsilon = 1e-14);
        let mut prev = (0.0, 0.0);
        for k in 1..100 {
            let cur = inscribed_radii(k as f64 / 100.0).unwrap();
            assert!(cur.0 > prev.0 && cur.1 > prev.1);
            prev = cur;
        }
    }

    #[test]
    fn delta_value() {
        let d = delta_constant();
        // mpmath: R~(t(1)) / 2 = 0.13186770093...
        assert_abs_diff_eq!(d, 0.131_867_700_933_600_6, epsilon = 1e-6);
        assert!(d >= 0.13);
        assert_abs_diff_eq!(inscribed_ratio(1e-4).unwrap(), 1.0 / (4.0 * 3f64.sqrt()), epsilon = 1e-8);
        assert_eq!(d, delta_constant());
    }
}
