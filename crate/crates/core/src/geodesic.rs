//! Geodesic segments, midpoints and vertex angles.

use num_complex::Complex64;

use crate::error::{GeomError, Result};
use crate::metric::dist_disk;
use crate::mobius::MobiusMap;
use crate::point::HPoint;

/// Geodesic segment from `p` to `q`, parametrized proportionally to arclength.
///
/// Evaluation moves `p` to the origin, where the geodesic is a diameter,
/// and maps the result back.
#[derive(Debug, Clone, Copy)]
pub struct GeodesicSegment {
    p: HPoint,
    q: HPoint,
    length: f64,
    // Sends p to 0 and q to the positive real axis.
    frame: MobiusMap,
}

impl GeodesicSegment {
    pub fn new(p: HPoint, q: HPoint) -> Result<Self> {
        let length = dist_disk(p, q)?;
        Ok(GeodesicSegment {
            p,
            q,
            length,
            frame: MobiusMap::normalizing(p, q),
        })
    }

    pub fn start(&self) -> HPoint {
        self.p
    }

    pub fn end(&self) -> HPoint {
        self.q
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Point at hyperbolic distance `s * length` from the start; `s` may leave `[0, 1]`
    /// to walk along the extended geodesic.
    pub fn point_at(&self, s: f64) -> Result<HPoint> {
        if s == 0.0 {
            return Ok(self.p);
        }
        if s == 1.0 {
            return Ok(self.q);
        }
        let x = (s * self.length / 2.0).tanh();
        let inv = self.frame.inverse();
        HPoint::from_complex(inv.apply_raw(Complex64::new(x, 0.0)))
    }
}

/// Result of [`geodesic_midpoint`]; `degenerate` is set when both endpoints coincide.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Midpoint {
    pub point: HPoint,
    pub degenerate: bool,
}

/// Hyperbolic midpoint of the segment `[p, q]`. For `p == q` returns `p` flagged degenerate.
pub fn geodesic_midpoint(p: HPoint, q: HPoint) -> Result<Midpoint> {
    if p == q {
        return Ok(Midpoint {
            point: p,
            degenerate: true,
        });
    }
    let point = GeodesicSegment::new(p, q)?.point_at(0.5)?;
    Ok(Midpoint {
        point,
        degenerate: false,
    })
}

/// Side lengths below this are treated as collapsed.
pub const MIN_SIDE: f64 = 1e-14;

/// Angle at `w1` between the geodesics to `w2` and `w3`, in `[0, pi]`, from the
/// hyperbolic law of cosines
///
/// `cos(phi) = (cosh(b) cosh(c) - cosh(a)) / (sinh(b) sinh(c))`
///
/// with `b = rho(w1, w2)`, `c = rho(w1, w3)`, `a = rho(w2, w3)`. The
/// numerator is factored into products of `sinh` so the half-angle form
/// stays accurate for short sides.
pub fn angle_at_vertex(w1: HPoint, w2: HPoint, w3: HPoint) -> Result<f64> {
    let b = dist_disk(w1, w2)?;
    let c = dist_disk(w1, w3)?;
    let a = dist_disk(w2, w3)?;
    angle_from_sides(b, c, a)
}

/// Angle between the sides of length `b` and `c` opposite the side of length `a`.
pub fn angle_from_sides(b: f64, c: f64, a: f64) -> Result<f64> {
    if b < MIN_SIDE || c < MIN_SIDE {
        return Err(GeomError::Degenerate("side adjacent to the vertex has collapsed"));
    }
    let den = b.sinh() * c.sinh();
    // sin^2(phi/2) and cos^2(phi/2) from the law of cosines.
    let sin_half_sq = (((a + b - c) / 2.0).sinh() * ((a - b + c) / 2.0).sinh() / den).max(0.0);
    let cos_half_sq = (((b + c + a) / 2.0).sinh() * ((b + c - a) / 2.0).sinh() / den).max(0.0);
    Ok(2.0 * sin_half_sq.sqrt().atan2(cos_half_sq.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn omega(k: u32) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 3.0)
    }

    #[test]
    fn endpoints_and_unit_speed() {
        let p = HPoint::new(0.2, -0.5).unwrap();
        let q = HPoint::new(-0.6, 0.3).unwrap();
        let g = GeodesicSegment::new(p, q).unwrap();
        assert_eq!(g.point_at(0.0).unwrap(), p);
        assert_eq!(g.point_at(1.0).unwrap(), q);
        for i in 1..20 {
            let s = i as f64 / 20.0;
            let m = g.point_at(s).unwrap();
            assert!((dist_disk(p, m).unwrap() - s * g.length()).abs() < 1e-10);
            assert!((dist_disk(m, q).unwrap() - (1.0 - s) * g.length()).abs() < 1e-10);
        }
    }

    #[test]
    fn midpoint_of_canonical_side() {
        // Midpoint of t*omega and t*omega^2 sits at (sqrt(1+t^2+t^4) - 1 - t^2) / t.
        let t: f64 = 0.5;
        let p = HPoint::from_complex(t * omega(1)).unwrap();
        let q = HPoint::from_complex(t * omega(2)).unwrap();
        let m = geodesic_midpoint(p, q).unwrap();
        assert!(!m.degenerate);
        let expected = ((1.0 + t * t + t.powi(4)).sqrt() - 1.0 - t * t) / t;
        assert_abs_diff_eq!(m.point.x(), expected, epsilon = 1e-14);
        assert_abs_diff_eq!(m.point.x(), -0.208_712_152_522_080, epsilon = 1e-12);
        assert_abs_diff_eq!(m.point.y(), 0.0, epsilon = 1e-14);

        // Bisection along the geodesic as an independent locator.
        let g = GeodesicSegment::new(p, q).unwrap();
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let x = g.point_at(mid).unwrap();
            if dist_disk(p, x).unwrap() < dist_disk(x, q).unwrap() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let bis = g.point_at(0.5 * (lo + hi)).unwrap();
        assert!((bis.z() - m.point.z()).norm() < 1e-12);
    }

    #[test]
    fn midpoint_symmetric_pair_and_degenerate() {
        let p = HPoint::new(0.3, 0.4).unwrap();
        let m = geodesic_midpoint(p, HPoint::new(-0.3, -0.4).unwrap()).unwrap();
        assert!(m.point.norm() < 1e-15);
        let d = geodesic_midpoint(p, p).unwrap();
        assert!(d.degenerate);
        assert_eq!(d.point, p);
    }

    #[test]
    fn midpoint_equidistant_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..1000 {
            let p = HPoint::from_polar(0.95 * rng.gen::<f64>(), rng.gen_range(0.0..7.0)).unwrap();
            let q = HPoint::from_polar(0.95 * rng.gen::<f64>(), rng.gen_range(0.0..7.0)).unwrap();
            let m = geodesic_midpoint(p, q).unwrap().point;
            let (a, b) = (dist_disk(p, m).unwrap(), dist_disk(m, q).unwrap());
            assert!((a - b).abs() < 1e-10);
            assert!((a + b - dist_disk(p, q).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn angles() {
        // Equilateral triangle of side 1.
        let x = 0.5f64.tanh();
        let alpha = ((1.0 + x * x) / 2.0).acos();
        let tri = [
            HPoint::ORIGIN,
            HPoint::real(x).unwrap(),
            HPoint::from_polar(x, alpha).unwrap(),
        ];
        let phi = angle_at_vertex(tri[0], tri[1], tri[2]).unwrap();
        assert_abs_diff_eq!(phi, alpha, epsilon = 1e-10);
        assert_abs_diff_eq!(phi, 0.918_797_872_178_027_4, epsilon = 1e-10);
        let phi1 = angle_at_vertex(tri[1], tri[2], tri[0]).unwrap();
        assert_abs_diff_eq!(phi1, alpha, epsilon = 1e-10);

        let w = HPoint::new(0.1, 0.1).unwrap();
        assert_eq!(angle_at_vertex(HPoint::ORIGIN, w, w).unwrap(), 0.0);
        assert!(angle_at_vertex(w, w, HPoint::ORIGIN).is_err());

        // Straight angle along a diameter, right angle at the origin.
        let a = HPoint::real(0.4).unwrap();
        let b = HPoint::real(-0.7).unwrap();
        assert_abs_diff_eq!(angle_at_vertex(HPoint::ORIGIN, a, b).unwrap(), PI, epsilon = 1e-7);
        let c = HPoint::new(0.0, 0.3).unwrap();
        assert_abs_diff_eq!(angle_at_vertex(HPoint::ORIGIN, a, c).unwrap(), PI / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn angle_matches_conformal_angle_at_origin() {
        // At the origin geodesics are diameters, so the hyperbolic angle is the Euclidean one.
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..1000 {
            let w1 = HPoint::from_polar(0.8 * rng.gen::<f64>(), rng.gen_range(0.0..7.0)).unwrap();
            let w2 = HPoint::from_polar(0.8 * rng.gen::<f64>(), rng.gen_range(0.0..7.0)).unwrap();
            let w3 = HPoint::from_polar(0.8 * rng.gen::<f64>(), rng.gen_range(0.0..7.0)).unwrap();
            let m = MobiusMap::sending_to_origin(w1);
            let (u, v) = (m.apply_raw(w2.z()), m.apply_raw(w3.z()));
            let euclid = (u.conj() * v).arg().abs();
            let phi = angle_at_vertex(w1, w2, w3).unwrap();
            assert!((phi - euclid).abs() < 1e-8, "{phi} vs {euclid}");
        }
    }
}
