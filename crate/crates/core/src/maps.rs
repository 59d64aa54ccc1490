//! Self-maps of the disk under test.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{GeomError, Result};
use crate::mobius::MobiusMap;
use crate::point::HPoint;

pub type PointFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A self-map of the disk exposed through point evaluation, with an optional
/// closed-form inverse and the dilatation it is claimed to have.
#[derive(Clone)]
pub struct MapUnderTest {
    name: String,
    eval: PointFn,
    inverse: Option<PointFn>,
    claimed_k: Option<f64>,
}

impl fmt::Debug for MapUnderTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MapUnderTest")
            .field("name", &self.name)
            .field("claimed_k", &self.claimed_k)
            .field("has_inverse", &self.inverse.is_some())
            .finish()
    }
}

impl MapUnderTest {
    pub fn new<F>(name: impl Into<String>, claimed_k: Option<f64>, eval: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        MapUnderTest {
            name: name.into(),
            eval: Arc::new(eval),
            inverse: None,
            claimed_k,
        }
    }

    pub fn with_inverse<F>(mut self, inverse: F) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        self.inverse = Some(Arc::new(inverse));
        self
    }

    pub fn with_claimed_k(mut self, k: Option<f64>) -> Self {
        self.claimed_k = k;
        self
    }

    pub fn identity() -> Self {
        MapUnderTest::new("identity", Some(1.0), |z| z).with_inverse(|z| z)
    }

    pub fn from_mobius(m: MobiusMap) -> Self {
        let inv = m.inverse();
        MapUnderTest::new("mobius", Some(1.0), move |z| m.apply_raw(z)).with_inverse(move |z| inv.apply_raw(z))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn claimed_k(&self) -> Option<f64> {
        self.claimed_k
    }

    pub fn require_k(&self) -> Result<f64> {
        self.claimed_k
            .ok_or_else(|| GeomError::MissingClaimedK(self.name.clone()))
    }

    pub fn has_inverse(&self) -> bool {
        self.inverse.is_some()
    }

    pub(crate) fn eval_fn(&self) -> PointFn {
        Arc::clone(&self.eval)
    }

    pub(crate) fn inverse_fn(&self) -> Option<PointFn> {
        self.inverse.clone()
    }

    /// Evaluate and check that the image stays in the disk.
    pub fn apply(&self, z: HPoint) -> Result<HPoint> {
        self.check((self.eval)(z.z()))
    }

    pub fn apply_inverse(&self, z: HPoint) -> Result<Option<HPoint>> {
        match &self.inverse {
            Some(g) => self.check(g(z.z())).map(Some),
            None => Ok(None),
        }
    }

    /// Raw evaluation without the disk check.
    #[inline]
    pub fn eval_raw(&self, z: Complex64) -> Complex64 {
        (self.eval)(z)
    }

    fn check(&self, w: Complex64) -> Result<HPoint> {
        HPoint::from_complex(w).map_err(|_| GeomError::MapLeftDisk {
            name: self.name.clone(),
            x: w.re,
            y: w.im,
        })
    }
}
