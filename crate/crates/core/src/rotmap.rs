//! Rotation maps generating equilateral triangles, and their complex dilatation.
//!
//! `R0(t e^{i theta}) = t e^{i (theta + arccos((1 + t^2) / 2))}` turns each circle
//! about the origin by the interior angle of the equilateral triangle with
//! vertices `0, t, ...`, so `(0, z, R0(z))` is always equilateral.
//! `R_w = A_w^{-1} ∘ R0 ∘ A_w` moves the same construction to the vertex `w`.

use num_complex::Complex64;

use crate::error::{GeomError, Result};
use crate::maps::MapUnderTest;
use crate::mobius::MobiusMap;
use crate::point::HPoint;

fn turn(z: Complex64, sign: f64) -> Complex64 {
    let t = z.norm();
    if t == 0.0 {
        return z;
    }
    let alpha = ((1.0 + t * t) / 2.0).acos();
    z * Complex64::from_polar(1.0, sign * alpha)
}

/// `R0` on raw complex input; `R0(0) = 0`.
pub fn rot0_raw(z: Complex64) -> Complex64 {
    turn(z, 1.0)
}

pub fn rot0_inverse_raw(z: Complex64) -> Complex64 {
    turn(z, -1.0)
}

pub fn rot0_apply(z: HPoint) -> Result<HPoint> {
    HPoint::from_complex(rot0_raw(z.z()))
}

pub fn rot0_inverse(z: HPoint) -> Result<HPoint> {
    HPoint::from_complex(rot0_inverse_raw(z.z()))
}

/// `R_w`; the identity centre `w = 0` gives `R0`.
#[derive(Debug, Clone, Copy)]
pub struct RotationMap {
    center: HPoint,
    to_origin: MobiusMap,
    from_origin: MobiusMap,
}

impl RotationMap {
    pub fn new(center: HPoint) -> Self {
        let to_origin = MobiusMap::sending_to_origin(center);
        RotationMap {
            center,
            to_origin,
            from_origin: to_origin.inverse(),
        }
    }

    pub fn center(&self) -> HPoint {
        self.center
    }

    pub fn apply(&self, z: HPoint) -> Result<HPoint> {
        if z == self.center {
            return Err(GeomError::Degenerate("rotation map applied at its own centre"));
        }
        HPoint::from_complex(self.apply_raw(z.z()))
    }

    pub fn inverse(&self, z: HPoint) -> Result<HPoint> {
        if z == self.center {
            return Err(GeomError::Degenerate("rotation map applied at its own centre"));
        }
        HPoint::from_complex(self.inverse_raw(z.z()))
    }

    pub fn apply_raw(&self, z: Complex64) -> Complex64 {
        self.from_origin.apply_raw(rot0_raw(self.to_origin.apply_raw(z)))
    }

    pub fn inverse_raw(&self, z: Complex64) -> Complex64 {
        self.from_origin.apply_raw(rot0_inverse_raw(self.to_origin.apply_raw(z)))
    }
}

pub fn rotw_apply(w: HPoint, z: HPoint) -> Result<HPoint> {
    RotationMap::new(w).apply(z)
}

pub fn rotw_inverse(w: HPoint, z: HPoint) -> Result<HPoint> {
    RotationMap::new(w).inverse(z)
}

/// `R0` as a map under test; it is only locally quasiconformal, so no `K` is claimed.
pub fn rot0_map() -> MapUnderTest {
    MapUnderTest::new("rot0", None, rot0_raw).with_inverse(rot0_inverse_raw)
}

/// Exact `|mu_{R0}(t e^{i theta})| = t^2 / sqrt(3 - 2 t^2)`.
pub fn beltrami_r0_exact(z: HPoint) -> Result<f64> {
    let t = z.norm();
    if t == 0.0 {
        return Err(GeomError::Domain {
            what: "|z|",
            expected: "(0, 1)",
            value: t,
        });
    }
    Ok(t * t / (3.0 - 2.0 * t * t).sqrt())
}

/// Default finite-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Complex dilatation `f_zbar / f_z` from central differences.
///
/// The step is shrunk to `(1 - |z|) / 4` near the boundary so every stencil
/// point stays in the disk.
pub fn beltrami_fd_complex(f: &MapUnderTest, z: HPoint, h: f64) -> Result<Complex64> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(GeomError::InvalidParameter(format!("finite-difference step {h}")));
    }
    let h = h.min((1.0 - z.norm()) / 4.0);
    let eval = |dz: Complex64| -> Result<Complex64> {
        let p = z.z() + dz;
        let p = HPoint::from_complex(p).map_err(|_| GeomError::StepTooLarge { h, x: p.re, y: p.im })?;
        Ok(f.apply(p)?.z())
    };
    let dx = Complex64::new(h, 0.0);
    let dy = Complex64::new(0.0, h);
    let fx = (eval(dx)? - eval(-dx)?) / (2.0 * h);
    let fy = (eval(dy)? - eval(-dy)?) / (2.0 * h);
    let i = Complex64::i();
    let f_z = (fx - i * fy) / 2.0;
    let f_zbar = (fx + i * fy) / 2.0;
    if f_z.norm() == 0.0 {
        return Err(GeomError::Degenerate("vanishing complex derivative"));
    }
    Ok(f_zbar / f_z)
}

/// `|mu_f(z)|` from central differences.
pub fn beltrami_fd(f: &MapUnderTest, z: HPoint, h: f64) -> Result<f64> {
    Ok(beltrami_fd_complex(f, z, h)?.norm())
}
