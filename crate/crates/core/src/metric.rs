//! The hyperbolic metric on the disk, the ball and the upper half-plane,
//! the two conformal densities, and the Cayley model change.

use num_complex::Complex64;

use crate::error::{GeomError, Result};
use crate::point::{BallPoint, HPoint, UpperPoint, BOUNDARY_EPS};

/// Pseudo-hyperbolic distance `|z - w| / |1 - conj(w) z|`.
pub fn pseudo_hyperbolic(z: HPoint, w: HPoint) -> f64 {
    let num = (z.z() - w.z()).norm();
    let den = (Complex64::new(1.0, 0.0) - w.z().conj() * z.z()).norm();
    num / den
}

/// Hyperbolic distance on the disk, `log((1 + p) / (1 - p))` with `p` the
/// pseudo-hyperbolic distance.
///
/// Small `p` goes through `2 atanh(p)`. For `p >= 1/2` the factor `1 - p^2`
/// is rebuilt from `(1 - |z|^2)(1 - |w|^2) / |1 - conj(w) z|^2`, which never
/// subtracts two numbers close to 1. Pairs with `p >= 1 - 1e-15` overflow the
/// representable range and are rejected.
pub fn dist_disk(z: HPoint, w: HPoint) -> Result<f64> {
    let diff = (z.z() - w.z()).norm();
    let den = (Complex64::new(1.0, 0.0) - w.z().conj() * z.z()).norm();
    let p = diff / den;
    if p >= 1.0 - BOUNDARY_EPS {
        return Err(GeomError::Range(p));
    }
    if p < 0.5 {
        return Ok(2.0 * p.atanh());
    }
    let one_minus_p_sq = z.one_minus_norm_sqr() * w.one_minus_norm_sqr() / (den * den);
    Ok(2.0 * p.ln_1p() - one_minus_p_sq.ln())
}

/// Hyperbolic distance on the unit ball of R^2 or R^3,
/// `arccosh(1 + 2|u - v|^2 / ((1 - |u|^2)(1 - |v|^2)))`.
///
/// Evaluated as `2 asinh(sqrt(q))` with `q` the quotient above, which is the
/// same number without the cancellation of `arccosh` near 1.
pub fn dist_ball(u: &BallPoint, v: &BallPoint) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(GeomError::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    let diff_sq: f64 = u
        .coords()
        .iter()
        .zip(v.coords())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let q = diff_sq / ((1.0 - u.norm_sqr()) * (1.0 - v.norm_sqr()));
    Ok(2.0 * q.sqrt().asinh())
}

/// Hyperbolic density `2 / (1 - |z|^2)`.
pub fn hyperbolic_density(z: HPoint) -> f64 {
    2.0 / z.one_minus_norm_sqr()
}

/// Quasihyperbolic density of the disk, `1 / dist(z, boundary) = 1 / (1 - |z|)`.
pub fn quasihyperbolic_density(z: HPoint) -> f64 {
    1.0 / (1.0 - z.norm())
}

pub fn hyperbolic_density_ball(u: &BallPoint) -> f64 {
    2.0 / (1.0 - u.norm_sqr())
}

pub fn quasihyperbolic_density_ball(u: &BallPoint) -> f64 {
    1.0 / (1.0 - u.norm_sqr().sqrt())
}

/// Cayley map `z -> i (1 + z) / (1 - z)`; sends 0 to `i` and the real
/// diameter onto the imaginary axis.
pub fn cayley_to_halfplane(z: HPoint) -> Result<UpperPoint> {
    let one = Complex64::new(1.0, 0.0);
    UpperPoint::from_complex(Complex64::i() * (one + z.z()) / (one - z.z()))
}

/// Inverse Cayley map `w -> (w - i) / (w + i)`.
pub fn cayley_to_disk(w: UpperPoint) -> Result<HPoint> {
    let i = Complex64::i();
    HPoint::from_complex((w.w() - i) / (w.w() + i))
}

/// Hyperbolic distance on the upper half-plane,
/// `2 asinh(|w1 - w2| / (2 sqrt(Im w1 Im w2)))`.
pub fn dist_halfplane(w1: UpperPoint, w2: UpperPoint) -> f64 {
    let d = (w1.w() - w2.w()).norm();
    2.0 * (d / (2.0 * (w1.w().im * w2.w().im).sqrt())).asinh()
}

/// Sharp comparison constants between the Euclidean and hyperbolic metrics
/// on the hyperbolic ball `B(0, radius)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzBounds {
    /// Largest `c` with `c |x - y| <= rho(x, y)` on the ball.
    pub lower: f64,
    /// Smallest `C` with `rho(x, y) <= C |x - y|` on the ball.
    pub upper: f64,
}

impl LipschitzBounds {
    /// The smallest `L >= 1` with `|x - y| / L <= rho(x, y) <= L |x - y|`.
    pub fn bilipschitz_constant(&self) -> f64 {
        self.upper.max(1.0 / self.lower).max(1.0)
    }
}

/// On `B_rho(0, radius)`, the Euclidean ball of radius `R = tanh(radius / 2)`,
/// the density ranges over `[2, 2 / (1 - R^2))` and hyperbolic geodesics stay
/// inside the ball, so `2 |x - y| <= rho(x, y) <= 2 / (1 - R^2) |x - y|` with
/// both constants approached by nearby pairs at the centre and at the rim.
pub fn euclid_hyperbolic_lipschitz(radius: f64) -> Result<LipschitzBounds> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(GeomError::Domain {
            what: "ball radius",
            expected: "(0, inf)",
            value: radius,
        });
    }
    let r_euclid = (radius / 2.0).tanh();
    Ok(LipschitzBounds {
        lower: 2.0,
        upper: 2.0 / (1.0 - r_euclid * r_euclid),
    })
}
