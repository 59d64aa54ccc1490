//! Orientation-preserving automorphisms of the disk.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::point::HPoint;

/// The disk automorphism `z -> e^{i theta} (z - a) / (1 - conj(a) z)`.
///
/// Every orientation-preserving isometry of the hyperbolic metric on the disk
/// has exactly one such representation with `theta` reduced to `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    theta: f64,
    a: HPoint,
}

impl MobiusMap {
    pub fn new(theta: f64, a: HPoint) -> Self {
        MobiusMap {
            theta: reduce_angle(theta),
            a,
        }
    }

    pub fn identity() -> Self {
        Self::new(0.0, HPoint::ORIGIN)
    }

    pub fn rotation(theta: f64) -> Self {
        Self::new(theta, HPoint::ORIGIN)
    }

    /// `A_w(z) = (z - w) / (1 - conj(w) z)`, the map sending `w` to 0.
    pub fn sending_to_origin(w: HPoint) -> Self {
        Self::new(0.0, w)
    }

    /// `A_r(z) = (z + r) / (1 + r z)` for real `r`, which sends 0 to `r`.
    pub fn real_translation(r: f64) -> Result<Self> {
        Ok(Self::new(0.0, HPoint::real(-r)?))
    }

    /// `z -> (e^{i phi} z + c) / (1 + conj(c) e^{i phi} z)`: rotate by `phi`, then move 0 to `c`.
    pub fn moving_origin_to(c: HPoint, phi: f64) -> Self {
        let a = -c.z() * Complex64::from_polar(1.0, -phi);
        Self::new(phi, HPoint::from_complex(a).expect("|a| = |c| < 1"))
    }

    /// The map sending `p` to 0 and `q` onto the positive real axis.
    ///
    /// When `p == q` only the translation part is applied.
    pub fn normalizing(p: HPoint, q: HPoint) -> Self {
        let ap = Self::sending_to_origin(p);
        let q0 = ap.apply_raw(q.z());
        if q0.norm() == 0.0 {
            return ap;
        }
        Self::rotation(-q0.arg()).compose(&ap)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The point sent to the origin.
    pub fn center(&self) -> HPoint {
        self.a
    }

    pub fn apply(&self, z: HPoint) -> Result<HPoint> {
        HPoint::from_complex(self.apply_raw(z.z()))
    }

    /// Evaluate without re-validating the image.
    #[inline]
    pub fn apply_raw(&self, z: Complex64) -> Complex64 {
        let a = self.a.z();
        Complex64::from_polar(1.0, self.theta) * (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        let (a1, b1) = self.su11();
        let (a2, b2) = other.su11();
        let alpha = a1 * a2 + b1 * b2.conj();
        let beta = a1 * b2 + b1 * a2.conj();
        Self::from_su11(alpha, beta)
    }

    pub fn inverse(&self) -> MobiusMap {
        let a = -self.a.z() * Complex64::from_polar(1.0, self.theta);
        MobiusMap::new(
            -self.theta,
            HPoint::from_complex(a).expect("|a| unchanged by rotation"),
        )
    }

    // Unnormalized SU(1,1) entries (alpha, beta) of [[alpha, beta], [conj(beta), conj(alpha)]].
    fn su11(&self) -> (Complex64, Complex64) {
        let half = Complex64::from_polar(1.0, self.theta / 2.0);
        (half, -self.a.z() * half)
    }

    fn from_su11(alpha: Complex64, beta: Complex64) -> MobiusMap {
        let a = -beta / alpha;
        MobiusMap::new(
            2.0 * alpha.arg(),
            HPoint::from_complex(a).expect("SU(1,1) product stays in SU(1,1)"),
        )
    }
}

fn reduce_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(std::f64::consts::TAU);
    if t > std::f64::consts::PI {
        t - std::f64::consts::TAU
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::dist_disk;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_point(rng: &mut ChaCha8Rng, max_modulus: f64) -> HPoint {
        let r = max_modulus * rng.gen::<f64>().sqrt();
        HPoint::from_polar(r, rng.gen_range(-3.2..3.2)).unwrap()
    }

    fn random_map(rng: &mut ChaCha8Rng) -> MobiusMap {
        MobiusMap::new(rng.gen_range(-4.0..4.0), random_point(rng, 0.9))
    }

    #[test]
    fn a_w_sends_w_to_origin() {
        let w = HPoint::real(0.3).unwrap();
        let img = MobiusMap::sending_to_origin(w).apply(w).unwrap();
        assert_eq!(img, HPoint::ORIGIN);
    }

    #[test]
    fn real_translation_moves_origin() {
        let a = MobiusMap::real_translation(0.5).unwrap();
        let img = a.apply(HPoint::ORIGIN).unwrap();
        assert_abs_diff_eq!(img.x(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(img.y(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let m = random_map(&mut rng);
            let id = m.compose(&m.inverse());
            let id2 = m.inverse().compose(&m);
            for _ in 0..100 {
                let z = random_point(&mut rng, 0.95);
                assert!((id.apply_raw(z.z()) - z.z()).norm() < 1e-12);
                assert!((id2.apply_raw(z.z()) - z.z()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn compose_matches_sequential_application() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let (m1, m2) = (random_map(&mut rng), random_map(&mut rng));
            let z = random_point(&mut rng, 0.9);
            let direct = m1.apply_raw(m2.apply_raw(z.z()));
            let composed = m1.compose(&m2).apply_raw(z.z());
            assert!((direct - composed).norm() < 1e-12);
        }
    }

    #[test]
    fn moving_origin_to_and_normalizing() {
        let c = HPoint::new(-0.4, 0.2).unwrap();
        let m = MobiusMap::moving_origin_to(c, 1.1);
        assert!((m.apply_raw(Complex64::new(0.0, 0.0)) - c.z()).norm() < 1e-15);

        let p = HPoint::new(0.3, -0.6).unwrap();
        let q = HPoint::new(-0.1, 0.7).unwrap();
        let n = MobiusMap::normalizing(p, q);
        assert!(n.apply_raw(p.z()).norm() < 1e-15);
        let q0 = n.apply_raw(q.z());
        assert!(q0.re > 0.0 && q0.im.abs() < 1e-15);
    }

    #[test]
    fn preserves_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..1000 {
            let m = random_map(&mut rng);
            let (z, w) = (random_point(&mut rng, 0.9), random_point(&mut rng, 0.9));
            let before = dist_disk(z, w).unwrap();
            let after = dist_disk(m.apply(z).unwrap(), m.apply(w).unwrap()).unwrap();
            assert!((before - after).abs() < 1e-12, "{before} vs {after}");
        }
    }
}
