//! Points of the disk, the ball and the upper half-plane.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

/// Points with `|z| >= 1 - BOUNDARY_EPS` are treated as lying on the unit circle.
pub const BOUNDARY_EPS: f64 = 1e-15;

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint", into = "RawPoint")]
pub struct HPoint(Complex64);

#[derive(Serialize, Deserialize)]
struct RawPoint {
    x: f64,
    y: f64,
}

impl TryFrom<RawPoint> for HPoint {
    type Error = GeomError;

    fn try_from(raw: RawPoint) -> Result<Self> {
        HPoint::new(raw.x, raw.y)
    }
}

impl From<HPoint> for RawPoint {
    fn from(p: HPoint) -> Self {
        RawPoint { x: p.x(), y: p.y() }
    }
}

impl HPoint {
    pub const ORIGIN: HPoint = HPoint(Complex64 { re: 0.0, im: 0.0 });

    pub fn new(x: f64, y: f64) -> Result<Self> {
        Self::from_complex(Complex64::new(x, y))
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        if !z.re.is_finite() || !z.im.is_finite() || z.norm() >= 1.0 - BOUNDARY_EPS {
            return Err(GeomError::OutsideDisk { x: z.re, y: z.im });
        }
        Ok(HPoint(z))
    }

    /// Point `modulus * e^{i angle}`.
    pub fn from_polar(modulus: f64, angle: f64) -> Result<Self> {
        Self::from_complex(Complex64::from_polar(modulus, angle))
    }

    /// Real point `x` on the horizontal diameter.
    pub fn real(x: f64) -> Result<Self> {
        Self::new(x, 0.0)
    }

    #[inline]
    pub fn z(self) -> Complex64 {
        self.0
    }

    #[inline]
    pub fn x(self) -> f64 {
        self.0.re
    }

    #[inline]
    pub fn y(self) -> f64 {
        self.0.im
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.0.norm()
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.0.norm_sqr()
    }

    #[inline]
    pub fn arg(self) -> f64 {
        self.0.arg()
    }

    /// `1 - |z|^2`, positive for every valid point.
    #[inline]
    pub fn one_minus_norm_sqr(self) -> f64 {
        1.0 - self.0.norm_sqr()
    }

    pub fn conj(self) -> HPoint {
        HPoint(self.0.conj())
    }

    /// Euclidean distance to another disk point.
    pub fn euclid_dist(self, other: HPoint) -> f64 {
        (self.0 - other.0).norm()
    }
}

impl From<HPoint> for Complex64 {
    fn from(p: HPoint) -> Self {
        p.0
    }
}

/// A point of the open unit ball in R^n for n in {2, 3}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallPoint {
    coords: Vec<f64>,
}

impl BallPoint {
    pub fn new(coords: &[f64]) -> Result<Self> {
        if !(2..=3).contains(&coords.len()) {
            return Err(GeomError::UnsupportedDimension(coords.len()));
        }
        let norm_sq: f64 = coords.iter().map(|c| c * c).sum();
        if !norm_sq.is_finite() || norm_sq.sqrt() >= 1.0 - BOUNDARY_EPS {
            return Err(GeomError::OutsideBall { norm_sq });
        }
        Ok(BallPoint {
            coords: coords.to_vec(),
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum()
    }
}

impl From<HPoint> for BallPoint {
    fn from(p: HPoint) -> Self {
        BallPoint {
            coords: vec![p.x(), p.y()],
        }
    }
}

/// A point of the open upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperPoint(Complex64);

impl UpperPoint {
    pub const I: UpperPoint = UpperPoint(Complex64 { re: 0.0, im: 1.0 });

    pub fn new(x: f64, y: f64) -> Result<Self> {
        Self::from_complex(Complex64::new(x, y))
    }

    pub fn from_complex(w: Complex64) -> Result<Self> {
        if !w.re.is_finite() || !w.im.is_finite() || w.im <= 0.0 {
            return Err(GeomError::OutsideHalfPlane { x: w.re, y: w.im });
        }
        Ok(UpperPoint(w))
    }

    #[inline]
    pub fn w(self) -> Complex64 {
        self.0
    }

    /// Multiply by a positive real factor (a hyperbolic translation along the imaginary axis).
    pub fn scale(self, factor: f64) -> UpperPoint {
        debug_assert!(factor > 0.0);
        UpperPoint(self.0 * factor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_boundary_and_outside() {
        assert!(HPoint::new(1.0, 0.0).is_err());
        assert!(HPoint::new(0.0, -1.0 + 5e-16).is_err());
        assert!(HPoint::new(0.6, 0.8).is_err());
        assert!(HPoint::new(f64::NAN, 0.0).is_err());
        assert!(HPoint::new(0.999_999, 0.0).is_ok());
    }

    #[test]
    fn ball_dimension_checks() {
        assert!(matches!(
            BallPoint::new(&[0.1]),
            Err(GeomError::UnsupportedDimension(1))
        ));
        assert!(BallPoint::new(&[0.1, 0.2, 0.3, 0.0]).is_err());
        assert!(BallPoint::new(&[0.6, 0.8, 0.0]).is_err());
        assert_eq!(BallPoint::new(&[0.1, 0.2, 0.3]).unwrap().dim(), 3);
    }

    #[test]
    fn upper_half_plane_rejects_real_axis() {
        assert!(UpperPoint::new(3.0, 0.0).is_err());
        assert!(UpperPoint::new(3.0, 1e-300).is_ok());
    }

    #[test]
    fn serde_validates() {
        let p: HPoint = serde_json::from_str("{\"x\":0.25,\"y\":-0.5}").unwrap();
        assert_eq!(p, HPoint::new(0.25, -0.5).unwrap());
        assert!(serde_json::from_str::<HPoint>("{\"x\":2.0,\"y\":0.0}").is_err());
    }
}
