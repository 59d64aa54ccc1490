//! Annuli as quotients of the hyperbolic plane by one hyperbolic translation.
//!
//! Work happens in the upper half-plane, where the generator is `w -> lambda w`
//! and its axis is the imaginary axis through the basepoint `i`. Distances on
//! the quotient minimise over the orbit of one lift; the search over powers
//! stops once `|k| l > best + rho(i, x) + rho(i, y)`, which is safe because
//! `rho(x, g^k y) >= rho(i, g^k i) - rho(i, x) - rho(i, y) = |k| l - ...`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::distortion::{evaluate, power_eta, qs_ratio, uniform_in_ball, DistortionReport, Sample, WorstCase, MIN_IMAGE_DIST};
use crate::error::{GeomError, Result};
use crate::maps::MapUnderTest;
use crate::metric::{cayley_to_disk, cayley_to_halfplane, dist_disk, dist_halfplane};
use crate::mobius::MobiusMap;
use crate::point::{HPoint, UpperPoint};
use crate::triangle::EqTriangle;

/// Orbit distances within this of the minimum count as ties.
pub const TIE_TOL: f64 = 1e-12;

/// Hyperbolic error allowed in the equivariance check of a lift.
pub const EQUIVARIANCE_TOL: f64 = 1e-9;

/// Number of sample points in the equivariance check.
pub const EQUIVARIANCE_SAMPLES: usize = 1000;

/// The group generated by `w -> lambda w` on the half-plane, or equivalently
/// `z -> (z + a) / (1 + a z)` on the disk with `lambda = (1 + a) / (1 - a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CyclicGroup {
    lambda: f64,
    translation_length: f64,
}

impl CyclicGroup {
    pub fn from_halfplane_factor(lambda: f64) -> Result<Self> {
        if !(lambda > 1.0) || !lambda.is_finite() {
            return Err(GeomError::Domain {
                what: "translation factor",
                expected: "(1, inf)",
                value: lambda,
            });
        }
        Ok(CyclicGroup {
            lambda,
            translation_length: lambda.ln(),
        })
    }

    pub fn from_disk_translation(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(GeomError::Domain {
                what: "disk translation parameter",
                expected: "(0, 1)",
                value: a,
            });
        }
        Ok(CyclicGroup {
            lambda: (1.0 + a) / (1.0 - a),
            translation_length: 2.0 * a.atanh(),
        })
    }

    pub fn factor(&self) -> f64 {
        self.lambda
    }

    pub fn translation_length(&self) -> f64 {
        self.translation_length
    }

    /// The group whose generator is the `k`-th power of this one's.
    pub fn power(&self, k: f64) -> Result<Self> {
        Self::from_halfplane_factor((k * self.translation_length).exp())
    }

    /// The generator as a disk automorphism.
    pub fn disk_generator(&self) -> MobiusMap {
        MobiusMap::real_translation((self.translation_length / 2.0).tanh()).expect("translation parameter is below 1")
    }

    /// `g^k(w) = lambda^k w`.
    pub fn act(&self, k: i64, w: UpperPoint) -> UpperPoint {
        w.scale((k as f64 * self.translation_length).exp())
    }

    pub fn act_disk(&self, k: i64, z: HPoint) -> Result<HPoint> {
        cayley_to_disk(self.act(k, cayley_to_halfplane(z)?))
    }
}

/// A point of the annulus, carried by one chosen lift `g^shift(base)`.
///
/// Keeping the power separate makes changing the representative exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuotientPoint {
    base: UpperPoint,
    shift: i64,
    group: CyclicGroup,
}

impl QuotientPoint {
    pub fn from_halfplane(group: CyclicGroup, lift: UpperPoint) -> Self {
        QuotientPoint {
            base: lift,
            shift: 0,
            group,
        }
    }

    pub fn from_disk(group: CyclicGroup, z: HPoint) -> Result<Self> {
        Ok(Self::from_halfplane(group, cayley_to_halfplane(z)?))
    }

    /// The representative in the half-plane.
    pub fn lift(&self) -> UpperPoint {
        self.group.act(self.shift, self.base)
    }

    pub fn lift_disk(&self) -> Result<HPoint> {
        cayley_to_disk(self.lift())
    }

    pub fn group(&self) -> CyclicGroup {
        self.group
    }

    /// The same point with the representative moved by `g^k`.
    pub fn translate(&self, k: i64) -> Self {
        QuotientPoint {
            shift: self.shift + k,
            ..*self
        }
    }

    /// The representative in the fundamental annulus `1 <= |w| < lambda`.
    pub fn normalized(&self) -> Self {
        let k = (self.base.w().norm().ln() / self.group.translation_length).floor() as i64;
        QuotientPoint {
            base: self.group.act(-k, self.base),
            shift: 0,
            group: self.group,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuotientDistance {
    pub value: f64,
    /// The power `k` with `rho(x, g^k y)` minimal for the two representatives
    /// (lowest `|k|`, then the negative one).
    pub k: i64,
    /// All powers within [`TIE_TOL`] of the minimum, in increasing order.
    pub ties: Vec<i64>,
    /// Largest `|k|` examined, relative to the base lifts.
    pub window: i64,
}

fn check_group(p: &QuotientPoint, q: &QuotientPoint) -> Result<()> {
    if p.group != q.group {
        return Err(GeomError::GroupMismatch);
    }
    Ok(())
}

/// Candidates are powers relative to the base lifts; `offset` converts them
/// to powers between the representatives.
fn finish(candidates: Vec<(i64, f64)>, offset: i64, window: i64) -> QuotientDistance {
    let value = candidates.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let mut ties: Vec<i64> = candidates
        .iter()
        .filter(|c| c.1 <= value + TIE_TOL)
        .map(|c| c.0 - offset)
        .collect();
    ties.sort_unstable();
    let k = *ties.iter().min_by_key(|k| (k.abs(), **k)).expect("at least one candidate");
    QuotientDistance { value, k, ties, window }
}

/// `min_k rho(x, g^k y)` with the provable truncation of the orbit search.
pub fn quotient_dist_detailed(p: &QuotientPoint, q: &QuotientPoint) -> Result<QuotientDistance> {
    check_group(p, q)?;
    let g = p.group;
    let (x, y) = (p.base, q.base);
    let reach = dist_halfplane(UpperPoint::I, x) + dist_halfplane(UpperPoint::I, y);
    let mut best = dist_halfplane(x, y);
    let mut candidates = vec![(0, best)];
    let mut k = 0i64;
    loop {
        k += 1;
        if k as f64 * g.translation_length > best + reach + TIE_TOL {
            break;
        }
        for s in [-k, k] {
            let d = dist_halfplane(x, g.act(s, y));
            best = best.min(d);
            candidates.push((s, d));
        }
    }
    Ok(finish(candidates, q.shift - p.shift, k - 1))
}

pub fn quotient_dist(p: &QuotientPoint, q: &QuotientPoint) -> Result<f64> {
    Ok(quotient_dist_detailed(p, q)?.value)
}

/// Orbit minimisation over the fixed window `|k| <= window` about the base
/// lifts, without truncation.
pub fn quotient_dist_window(p: &QuotientPoint, q: &QuotientPoint, window: i64) -> Result<QuotientDistance> {
    check_group(p, q)?;
    let g = p.group;
    let candidates = (-window..=window)
        .map(|k| (k, dist_halfplane(p.base, g.act(k, q.base))))
        .collect();
    Ok(finish(candidates, q.shift - p.shift, window))
}

/// `r e^{i theta} -> r^K e^{i theta}` on the half-plane, as a disk map.
///
/// It conjugates `w -> lambda w` to `w -> lambda^K w`, so it descends to a
/// map between the corresponding annuli.
pub fn halfplane_power_stretch(k: f64) -> Result<MapUnderTest> {
    if !(k >= 1.0) || !k.is_finite() {
        return Err(GeomError::InvalidParameter(format!("stretch exponent K = {k} must be a finite value >= 1")));
    }
    let i = Complex64::i();
    let stretch = move |z: Complex64, e: f64| {
        let w = i * (1.0 + z) / (1.0 - z);
        let w = Complex64::from_polar(w.norm().powf(e), w.arg());
        (w - i) / (w + i)
    };
    Ok(MapUnderTest::new(format!("halfplane_power_stretch(K={k})"), Some(k), move |z| stretch(z, k))
        .with_inverse(move |z| stretch(z, 1.0 / k)))
}

/// A map between annuli given by an equivariant lift.
#[derive(Debug, Clone)]
pub struct DescendedMap {
    lift: MapUnderTest,
    source: CyclicGroup,
    target: CyclicGroup,
    equivariance_error: f64,
}

impl DescendedMap {
    pub fn lift(&self) -> &MapUnderTest {
        &self.lift
    }

    pub fn source(&self) -> CyclicGroup {
        self.source
    }

    pub fn target(&self) -> CyclicGroup {
        self.target
    }

    /// Largest `rho(f(g z), h f(z))` seen in the equivariance check.
    pub fn equivariance_error(&self) -> f64 {
        self.equivariance_error
    }

    pub fn apply(&self, p: &QuotientPoint) -> Result<QuotientPoint> {
        if p.group != self.source {
            return Err(GeomError::GroupMismatch);
        }
        let image = self.lift.apply(p.lift_disk()?)?;
        QuotientPoint::from_disk(self.target, image)
    }
}

/// Check `f(g z) = h f(z)` on seeded samples and wrap the lift as an annulus map.
pub fn descend_map(lift: MapUnderTest, source: CyclicGroup, target: CyclicGroup) -> Result<DescendedMap> {
    let g = source.disk_generator();
    let h = target.disk_generator();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let points = (0..EQUIVARIANCE_SAMPLES)
        .map(|_| uniform_in_ball(&mut rng, HPoint::ORIGIN, 3.0))
        .collect::<Result<Vec<_>>>()?;
    let errors = points
        .par_iter()
        .map(|&z| -> Result<f64> { dist_disk(lift.apply(g.apply(z)?)?, h.apply(lift.apply(z)?)?) })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut worst = 0;
    for (j, e) in errors.iter().enumerate() {
        if *e > errors[worst] {
            worst = j;
        }
    }
    if !(errors[worst] <= EQUIVARIANCE_TOL) {
        return Err(GeomError::EquivarianceViolation {
            error: errors[worst],
            x: points[worst].x(),
            y: points[worst].y(),
        });
    }
    Ok(DescendedMap {
        lift,
        source,
        target,
        equivariance_error: errors[worst],
    })
}

/// Skew, measured with the target's quotient distance, of the image of a
/// triangle on the source annulus given by a lift `t`.
pub fn quotient_skew(fd: &DescendedMap, t: &EqTriangle) -> Result<f64> {
    let limit = fd.source.translation_length / 2.0;
    if !(t.side() < limit) {
        return Err(GeomError::SideTooLarge { side: t.side(), limit });
    }
    let mut w = Vec::with_capacity(3);
    for v in t.vertices() {
        w.push(fd.apply(&QuotientPoint::from_disk(fd.source, v)?)?);
    }
    let sides = [
        quotient_dist(&w[0], &w[1])?,
        quotient_dist(&w[1], &w[2])?,
        quotient_dist(&w[2], &w[0])?,
    ];
    let min = sides.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = sides.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(min >= MIN_IMAGE_DIST) {
        return Err(GeomError::ImageDegenerate(min));
    }
    Ok(max / min)
}

/// A lift at signed distance `d` from the axis, height `e^s` along it.
fn axis_point(s: f64, d: f64) -> Result<HPoint> {
    let w = UpperPoint::new(d.tanh(), 1.0 / d.cosh())?.scale(s.exp());
    cayley_to_disk(w)
}

/// A lift uniformly placed along one period of the axis, at most `spread`
/// away from it.
fn draw_annulus_point<R: Rng>(rng: &mut R, g: &CyclicGroup, spread: f64) -> Result<HPoint> {
    let s = rng.gen_range(0.0..g.translation_length);
    let d = rng.gen_range(-spread..=spread);
    axis_point(s, d)
}

/// Image skew of random triangles on the source annulus with sides in
/// `[max_side / 10, max_side]`, centred within distance 2 of the core geodesic.
pub fn quotient_skew_scan(fd: &DescendedMap, triangles: usize, max_side: f64, seed: u64) -> Result<DistortionReport> {
    let limit = fd.source.translation_length / 2.0;
    if !(max_side > 0.0 && max_side < limit) {
        return Err(GeomError::SideTooLarge { side: max_side, limit });
    }
    if triangles == 0 {
        return Err(GeomError::InvalidParameter("quotient skew scan needs at least one triangle".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tris = Vec::with_capacity(triangles);
    for _ in 0..triangles {
        let c = draw_annulus_point(&mut rng, &fd.source, 2.0)?;
        let r = rng.gen_range(max_side / 10.0..=max_side);
        let phi = rng.gen_range(0.0..TAU);
        tris.push(EqTriangle::from_side(r, &MobiusMap::moving_origin_to(c, phi))?);
    }
    let values = evaluate(&tris, |t| quotient_skew(fd, t))?;
    let samples = tris
        .iter()
        .zip(&values)
        .map(|(t, &value)| Sample {
            location: [t.centroid().x(), t.centroid().y()],
            scale: t.side(),
            value,
        })
        .collect();
    let mut report = DistortionReport::from_samples("quotient-skew", fd.lift.name(), Some(seed), samples);
    let k = report.argmax();
    report.fitted_constants.insert("sigma".into(), report.supremum);
    report.worst_cases.insert(
        "sigma".into(),
        WorstCase {
            sample_index: k,
            points: tris[k].vertices().iter().map(|v| [v.x(), v.y()]).collect(),
            scale: tris[k].side(),
            value: report.supremum,
        },
    );
    Ok(report)
}

struct QsEval {
    t: f64,
    ratio: f64,
    lifted: Vec<(f64, f64)>,
}

fn quotient_triple(fd: &DescendedMap, u: HPoint, q: HPoint, r: HPoint) -> Result<QsEval> {
    let g = fd.source;
    let p = QuotientPoint::from_disk(g, u)?;
    let pq = quotient_dist_detailed(&p, &QuotientPoint::from_disk(g, q)?)?;
    let pr = quotient_dist_detailed(&p, &QuotientPoint::from_disk(g, r)?)?;
    if pr.value < MIN_IMAGE_DIST {
        return Err(GeomError::Degenerate("p and r project to the same point"));
    }
    // lifts realising both quotient distances from u
    let v = g.act_disk(pq.k, q)?;
    let w = g.act_disk(pr.k, r)?;
    let (fp, fq, fr) = (
        fd.apply(&p)?,
        fd.apply(&QuotientPoint::from_disk(g, v)?)?,
        fd.apply(&QuotientPoint::from_disk(g, w)?)?,
    );
    let image_pr = quotient_dist_detailed(&fp, &fr)?;
    if image_pr.value < MIN_IMAGE_DIST {
        return Err(GeomError::ImageDegenerate(image_pr.value));
    }
    let ratio = quotient_dist(&fp, &fq)? / image_pr.value;
    let mut lifted = vec![qs_ratio(&fd.lift, u, v, w)?];
    // the orbit point of w whose image realises the target distance
    if image_pr.k != 0 {
        let w_star = g.act_disk(image_pr.k, w)?;
        lifted.push(qs_ratio(&fd.lift, u, w, w_star)?);
    }
    Ok(QsEval {
        t: pq.value / pr.value,
        ratio,
        lifted,
    })
}

/// Three-point ratios on the annuli against `max{t^K, t^{1/K}}`.
///
/// Lifts realising the quotient distances give matched triples in the
/// plane, from which the lift's own constant `C_lift` is fitted; every
/// quotient ratio is then checked against `C_lift^2 max{t^K, t^{1/K}}`, the
/// bound obtained by passing to the lift. Violations are counted in
/// `diagnostics`.
pub fn quotient_qs_scan(fd: &DescendedMap, triples: usize, seed: u64) -> Result<DistortionReport> {
    let k = fd.lift.require_k()?;
    if triples == 0 {
        return Err(GeomError::InvalidParameter("quotient scan needs at least one triple".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = Vec::with_capacity(triples);
    for _ in 0..triples {
        let u = draw_annulus_point(&mut rng, &fd.source, 2.0)?;
        let q = uniform_in_ball(&mut rng, u, 3.0)?;
        let r = uniform_in_ball(&mut rng, u, 3.0)?;
        draws.push((u, q, r));
    }
    let evals = evaluate(&draws, |&(u, q, r)| quotient_triple(fd, u, q, r))?;
    let c_lift = evals
        .iter()
        .flat_map(|e| e.lifted.iter())
        .map(|&(t, ratio)| ratio / power_eta(t, k))
        .fold(f64::NEG_INFINITY, f64::max);
    let violations = evals
        .iter()
        .filter(|e| e.ratio > c_lift * c_lift * power_eta(e.t, k) * (1.0 + 1e-12))
        .count();
    let samples = draws
        .iter()
        .zip(&evals)
        .map(|(&(u, _, _), e)| Sample {
            location: [u.x(), u.y()],
            scale: e.t,
            value: e.ratio / power_eta(e.t, k),
        })
        .collect();
    let mut report = DistortionReport::from_samples("quotient-qs", fd.lift.name(), Some(seed), samples);
    let j = report.argmax();
    report.fitted_constants.insert("C".into(), report.supremum);
    report.fitted_constants.insert("C_lift".into(), c_lift);
    report.fitted_constants.insert("K".into(), k);
    report.diagnostics.insert("lift_bound_violations".into(), violations as f64);
    report.worst_cases.insert(
        "C".into(),
        WorstCase {
            sample_index: j,
            points: [draws[j].0, draws[j].1, draws[j].2].iter().map(|z| [z.x(), z.y()]).collect(),
            scale: evals[j].t,
            value: report.supremum,
        },
    );
    Ok(report)
}
