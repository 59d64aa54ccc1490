//! Distortion functionals for self-maps of the disk: linear distortion on
//! hyperbolic circles, image skew of equilateral triangles, three-point
//! quasisymmetry ratios and two-point growth constants.
//!
//! Suprema and infima are empirical: circles are sampled and refined by a
//! golden-section search, random configurations come from a seeded ChaCha8
//! stream drawn sequentially, and evaluation runs in parallel with results
//! kept in draw order, so reports do not depend on the worker count.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use argmin::core::{CostFunction, Error as ArgminError, Executor};
use argmin::solver::neldermead::NelderMead;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::geodesic::{angle_at_vertex, GeodesicSegment};
use crate::maps::MapUnderTest;
use crate::metric::dist_disk;
use crate::mobius::MobiusMap;
use crate::point::HPoint;
use crate::search::{golden_section_max, golden_section_min};
use crate::triangle::EqTriangle;

pub const DEFAULT_CIRCLE_SAMPLES: usize = 256;
pub const DEFAULT_REFINE_STEPS: usize = 30;
pub const MAX_CIRCLE_RADIUS: f64 = 35.0;
/// Image distances below this make ratios meaningless.
pub const MIN_IMAGE_DIST: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub location: [f64; 2],
    pub scale: f64,
    pub value: f64,
}

/// The configuration that produced an extreme value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorstCase {
    pub sample_index: usize,
    pub points: Vec<[f64; 2]>,
    pub scale: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistortionReport {
    pub experiment: String,
    pub map: String,
    pub seed: Option<u64>,
    pub samples: Vec<Sample>,
    pub supremum: f64,
    pub fitted_constants: BTreeMap<String, f64>,
    pub worst_cases: BTreeMap<String, WorstCase>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub diagnostics: BTreeMap<String, f64>,
}

impl DistortionReport {
    fn new(experiment: &str, map: &MapUnderTest, seed: Option<u64>, samples: Vec<Sample>) -> Self {
        Self::from_samples(experiment, map.name(), seed, samples)
    }

    /// A report with the supremum of `samples` filled in and nothing fitted yet.
    pub fn from_samples(experiment: &str, map: &str, seed: Option<u64>, samples: Vec<Sample>) -> Self {
        let supremum = samples.iter().map(|s| s.value).fold(f64::NEG_INFINITY, f64::max);
        DistortionReport {
            experiment: experiment.to_string(),
            map: map.to_string(),
            seed,
            samples,
            supremum,
            fitted_constants: BTreeMap::new(),
            worst_cases: BTreeMap::new(),
            diagnostics: BTreeMap::new(),
        }
    }

    /// Index of the first sample attaining the supremum.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (k, s) in self.samples.iter().enumerate() {
            if s.value > self.samples[best].value {
                best = k;
            }
        }
        best
    }
}

fn xy(z: HPoint) -> [f64; 2] {
    [z.x(), z.y()]
}

/// Evaluate in parallel, keep draw order, and report the earliest failure
/// tagged with its index.
pub(crate) fn evaluate<I, O, F>(inputs: &[I], f: F) -> Result<Vec<O>>
where
    I: Sync,
    O: Send,
    F: Fn(&I) -> Result<O> + Sync + Send,
{
    inputs
        .par_iter()
        .map(f)
        .collect::<Vec<_>>()
        .into_iter()
        .enumerate()
        .map(|(index, r)| {
            r.map_err(|e| GeomError::AtSample {
                index,
                source: Box::new(e),
            })
        })
        .collect()
}

fn circle_point_raw(x: HPoint, r: f64, theta: f64) -> Result<HPoint> {
    let y = Complex64::from_polar((r / 2.0).tanh(), theta);
    HPoint::from_complex(MobiusMap::sending_to_origin(x).inverse().apply_raw(y))
}

/// The point at hyperbolic distance `r` from `x` in direction `theta`
/// (measured after moving `x` to the origin).
pub fn hyperbolic_circle_point(x: HPoint, r: f64, theta: f64) -> Result<HPoint> {
    if !(r > 0.0) {
        return Err(GeomError::Domain {
            what: "circle radius",
            expected: "(0, 35]",
            value: r,
        });
    }
    if r > MAX_CIRCLE_RADIUS {
        return Err(GeomError::Saturated(r));
    }
    circle_point_raw(x, r, theta)
}

/// A point uniformly distributed (in hyperbolic area) in the ball `B(center, radius)`.
pub fn uniform_in_ball<R: Rng>(rng: &mut R, center: HPoint, radius: f64) -> Result<HPoint> {
    let u: f64 = rng.gen();
    let theta = rng.gen_range(0.0..TAU);
    let s = (1.0 + u * (radius.cosh() - 1.0)).acosh();
    circle_point_raw(center, s, theta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircleExtremes {
    pub max: f64,
    pub min: f64,
    pub argmax: f64,
    pub argmin: f64,
}

/// Largest and smallest `rho(f(x), f(y))` over the circle `rho(x, y) = r`.
pub fn circle_extremes(f: &MapUnderTest, x: HPoint, r: f64, samples: usize) -> Result<CircleExtremes> {
    if samples < 8 {
        return Err(GeomError::InvalidParameter(format!("circle needs at least 8 samples, got {samples}")));
    }
    let fx = f.apply(x)?;
    let image_dist = |theta: f64| -> Result<f64> { dist_disk(fx, f.apply(hyperbolic_circle_point(x, r, theta)?)?) };
    let step = TAU / samples as f64;
    let mut ext = CircleExtremes {
        max: f64::NEG_INFINITY,
        min: f64::INFINITY,
        argmax: 0.0,
        argmin: 0.0,
    };
    for k in 0..samples {
        let theta = k as f64 * step;
        let d = image_dist(theta)?;
        if d > ext.max {
            ext.max = d;
            ext.argmax = theta;
        }
        if d < ext.min {
            ext.min = d;
            ext.argmin = theta;
        }
    }
    let g = |theta: f64| image_dist(theta).unwrap_or(f64::NAN);
    let (a, v) = golden_section_max(&g, ext.argmax - step, ext.argmax + step, 0.0, DEFAULT_REFINE_STEPS);
    if v > ext.max {
        ext.max = v;
        ext.argmax = a.rem_euclid(TAU);
    }
    let (a, v) = golden_section_min(&g, ext.argmin - step, ext.argmin + step, 0.0, DEFAULT_REFINE_STEPS);
    if v < ext.min {
        ext.min = v;
        ext.argmin = a.rem_euclid(TAU);
    }
    if !(ext.min >= MIN_IMAGE_DIST) {
        return Err(GeomError::ImageDegenerate(ext.min));
    }
    Ok(ext)
}

/// Hyperbolic linear distortion `H(x, r)`: max over min image distance on the circle.
pub fn h_rho(f: &MapUnderTest, x: HPoint, r: f64, samples: usize) -> Result<f64> {
    let e = circle_extremes(f, x, r, samples)?;
    Ok(e.max / e.min)
}

/// How triangle placements are drawn in skew scans.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Placement {
    /// Centroid uniform in the hyperbolic ball of this radius about 0.
    HyperbolicBall { radius: f64 },
    /// Centroid on the Euclidean circle `|c| = modulus`, uniform argument.
    Ring { modulus: f64 },
}

impl Default for Placement {
    fn default() -> Self {
        Placement::HyperbolicBall { radius: 3.0 }
    }
}

impl Placement {
    fn validate(&self) -> Result<()> {
        match *self {
            Placement::HyperbolicBall { radius } if radius > 0.0 && radius <= MAX_CIRCLE_RADIUS => Ok(()),
            Placement::Ring { modulus } if (0.0..1.0).contains(&modulus) => Ok(()),
            p => Err(GeomError::InvalidParameter(format!("placement {p:?}"))),
        }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> Result<HPoint> {
        match *self {
            Placement::HyperbolicBall { radius } => uniform_in_ball(rng, HPoint::ORIGIN, radius),
            Placement::Ring { modulus } => HPoint::from_polar(modulus, rng.gen_range(0.0..TAU)),
        }
    }
}

/// Skew of the image of a triangle's vertices.
pub fn image_skew(f: &MapUnderTest, t: &EqTriangle) -> Result<f64> {
    let v = t.vertices();
    let w = [f.apply(v[0])?, f.apply(v[1])?, f.apply(v[2])?];
    let sides = [dist_disk(w[0], w[1])?, dist_disk(w[1], w[2])?, dist_disk(w[2], w[0])?];
    let min = sides.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = sides.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(min >= MIN_IMAGE_DIST) {
        return Err(GeomError::ImageDegenerate(min));
    }
    Ok(max / min)
}

/// Golden-section steps used when refining orientation peaks.
pub const ORIENTATION_REFINE_STEPS: usize = 60;

/// Options for [`skew_scan_with`].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkewScanOptions {
    #[serde(default)]
    pub placement: Placement,
    /// When set, each sample is the supremum over triangle orientations at
    /// the drawn centroid (grid of this size plus refinement) instead of a
    /// single random orientation. Narrow peaks of the image skew are only
    /// found this way.
    #[serde(default)]
    pub orientation_samples: Option<usize>,
}

/// Largest image skew over rotations of the side-`r` triangle about `centre`.
///
/// Orientations are sampled over one period `2 pi / 3`; every discrete local
/// maximum is refined by a golden-section search.
pub fn orientation_sup(f: &MapUnderTest, r: f64, centre: HPoint, samples: usize) -> Result<(f64, EqTriangle)> {
    if samples < 3 {
        return Err(GeomError::InvalidParameter(format!("orientation grid needs at least 3 samples, got {samples}")));
    }
    let place = |phi: f64| EqTriangle::from_side(r, &MobiusMap::moving_origin_to(centre, phi));
    let step = TAU / 3.0 / samples as f64;
    let mut vals = Vec::with_capacity(samples);
    for j in 0..samples {
        vals.push(image_skew(f, &place(j as f64 * step)?)?);
    }
    let g = |phi: f64| place(phi).and_then(|t| image_skew(f, &t)).unwrap_or(f64::NAN);
    let mut best = (f64::NEG_INFINITY, 0.0);
    for j in 0..samples {
        let (before, after) = (vals[(j + samples - 1) % samples], vals[(j + 1) % samples]);
        if vals[j] > best.0 {
            best = (vals[j], j as f64 * step);
        }
        if vals[j] >= before && vals[j] >= after {
            let mid = j as f64 * step;
            let (phi, v) = golden_section_max(&g, mid - step, mid + step, 0.0, ORIENTATION_REFINE_STEPS);
            if v > best.0 {
                best = (v, phi);
            }
        }
    }
    Ok((best.0, place(best.1)?))
}

pub fn skew_scan(f: &MapUnderTest, r_grid: &[f64], placements: usize, seed: u64) -> Result<DistortionReport> {
    skew_scan_with(f, r_grid, placements, &SkewScanOptions::default(), seed)
}

/// Image skew of equilateral triangles of each side in `r_grid` at random
/// placements; the supremum is an empirical lower bound for the `sigma` of
/// the map.
pub fn skew_scan_with(
    f: &MapUnderTest,
    r_grid: &[f64],
    placements: usize,
    options: &SkewScanOptions,
    seed: u64,
) -> Result<DistortionReport> {
    if let Some(r) = r_grid.iter().find(|r| !(**r > 0.0)) {
        return Err(GeomError::InvalidParameter(format!("side length {r} in grid")));
    }
    if r_grid.is_empty() || placements == 0 {
        return Err(GeomError::InvalidParameter("skew scan needs side lengths and placements".into()));
    }
    options.placement.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tris = Vec::with_capacity(r_grid.len() * placements);
    for &r in r_grid {
        for _ in 0..placements {
            let c = options.placement.draw(&mut rng)?;
            let phi = rng.gen_range(0.0..TAU);
            tris.push(EqTriangle::from_side(r, &MobiusMap::moving_origin_to(c, phi))?);
        }
    }
    let evaluated = evaluate(&tris, |t| match options.orientation_samples {
        None => Ok((image_skew(f, t)?, *t)),
        Some(n) => orientation_sup(f, t.side(), t.centroid(), n),
    })?;
    let samples = evaluated
        .iter()
        .map(|(value, t)| Sample {
            location: xy(t.centroid()),
            scale: t.side(),
            value: *value,
        })
        .collect();
    let mut report = DistortionReport::new("skew-scan", f, Some(seed), samples);
    let k = report.argmax();
    let worst = evaluated[k].1;
    report.fitted_constants.insert("sigma".into(), report.supremum);
    report.worst_cases.insert(
        "sigma".into(),
        WorstCase {
            sample_index: k,
            points: worst.vertices().iter().map(|v| xy(*v)).collect(),
            scale: worst.side(),
            value: report.supremum,
        },
    );
    Ok(report)
}

/// `H(x, r)` at random centres for each radius in `r_grid`.
pub fn h_rho_scan(
    f: &MapUnderTest,
    r_grid: &[f64],
    centres: usize,
    placement: Placement,
    circle_samples: usize,
    seed: u64,
) -> Result<DistortionReport> {
    if let Some(r) = r_grid.iter().find(|r| !(**r > 0.0 && **r <= MAX_CIRCLE_RADIUS)) {
        return Err(GeomError::InvalidParameter(format!("circle radius {r} in grid")));
    }
    if r_grid.is_empty() || centres == 0 {
        return Err(GeomError::InvalidParameter("h_rho scan needs radii and centres".into()));
    }
    placement.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jobs = Vec::with_capacity(r_grid.len() * centres);
    for &r in r_grid {
        for _ in 0..centres {
            jobs.push((placement.draw(&mut rng)?, r));
        }
    }
    let values = evaluate(&jobs, |&(x, r)| h_rho(f, x, r, circle_samples))?;
    let samples = jobs
        .iter()
        .zip(&values)
        .map(|(&(x, r), &value)| Sample {
            location: xy(x),
            scale: r,
            value,
        })
        .collect();
    let mut report = DistortionReport::new("hrho-scan", f, Some(seed), samples);
    let k = report.argmax();
    report.fitted_constants.insert("H".into(), report.supremum);
    report.worst_cases.insert(
        "H".into(),
        WorstCase {
            sample_index: k,
            points: vec![xy(jobs[k].0)],
            scale: jobs[k].1,
            value: report.supremum,
        },
    );
    Ok(report)
}

/// `(t, ratio)` for a triple: `t = rho(u, v) / rho(u, w)` and
/// `ratio = rho(fu, fv) / rho(fu, fw)`.
pub fn qs_ratio(f: &MapUnderTest, u: HPoint, v: HPoint, w: HPoint) -> Result<(f64, f64)> {
    let duw = dist_disk(u, w)?;
    if duw < MIN_IMAGE_DIST {
        return Err(GeomError::Degenerate("u and w coincide"));
    }
    let t = dist_disk(u, v)? / duw;
    let (fu, fv, fw) = (f.apply(u)?, f.apply(v)?, f.apply(w)?);
    let den = dist_disk(fu, fw)?;
    if den < MIN_IMAGE_DIST {
        return Err(GeomError::ImageDegenerate(den));
    }
    Ok((t, dist_disk(fu, fv)? / den))
}

/// The same two ratios measured with Euclidean distances.
pub fn euclid_ratio(f: &MapUnderTest, u: HPoint, v: HPoint, w: HPoint) -> Result<(f64, f64)> {
    let duw = u.euclid_dist(w);
    if duw < MIN_IMAGE_DIST {
        return Err(GeomError::Degenerate("u and w coincide"));
    }
    let (fu, fv, fw) = (f.apply(u)?, f.apply(v)?, f.apply(w)?);
    let den = fu.euclid_dist(fw);
    if den < MIN_IMAGE_DIST {
        return Err(GeomError::ImageDegenerate(den));
    }
    Ok((u.euclid_dist(v) / duw, fu.euclid_dist(fv) / den))
}

/// `max{t^K, t^{1/K}}`.
pub fn power_eta(t: f64, k: f64) -> f64 {
    t.powf(k).max(t.powf(1.0 / k))
}

/// A triple for quasisymmetry sampling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triple {
    pub u: HPoint,
    pub v: HPoint,
    pub w: HPoint,
}

/// Draw a triple: a centre uniform in `B(0, 2)`, `u` and `w` uniform in the
/// radius-3 ball about it, `v` uniform along the geodesic from `u` to `w`,
/// then `v` and `w` swapped with probability 1/2 so that `t > 1` is as
/// common as `t < 1`.
pub fn draw_triple<R: Rng>(rng: &mut R) -> Result<Triple> {
    let c = uniform_in_ball(rng, HPoint::ORIGIN, 2.0)?;
    loop {
        let u = uniform_in_ball(rng, c, 3.0)?;
        let w = uniform_in_ball(rng, c, 3.0)?;
        let s: f64 = rng.gen();
        let swap: bool = rng.gen();
        let g = GeodesicSegment::new(u, w)?;
        if g.length() < 1e-9 || s == 0.0 {
            continue;
        }
        let v = g.point_at(s)?;
        return Ok(if swap { Triple { u, v: w, w: v } } else { Triple { u, v, w } });
    }
}

fn triple_points(t: &Triple) -> Vec<[f64; 2]> {
    vec![xy(t.u), xy(t.v), xy(t.w)]
}

/// Three-point ratios against `eta(t) = max{t^K, t^{1/K}}` for the claimed `K`.
///
/// Each sample stores `ratio / eta(t)` at scale `t`; the supremum is the
/// least `C` with `ratio <= C eta(t)` on the sample.
pub fn qs_ratio_scan(f: &MapUnderTest, triples: usize, seed: u64) -> Result<DistortionReport> {
    qs_ratio_scan_refined(f, triples, DEFAULT_QS_REFINE, seed)
}

/// As [`qs_ratio_scan`], polishing the `refine` worst triples with a local
/// search before fitting `C`. `refine = 0` fits the raw sampled supremum.
pub fn qs_ratio_scan_refined(f: &MapUnderTest, triples: usize, refine: usize, seed: u64) -> Result<DistortionReport> {
    let k = f.require_k()?;
    if triples == 0 {
        return Err(GeomError::InvalidParameter("quasisymmetry scan needs at least one triple".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws = (0..triples).map(|_| draw_triple(&mut rng)).collect::<Result<Vec<_>>>()?;
    let values = evaluate(&draws, |tr| qs_ratio(f, tr.u, tr.v, tr.w))?;
    let samples = draws
        .iter()
        .zip(&values)
        .map(|(tr, &(t, ratio))| Sample {
            location: xy(tr.u),
            scale: t,
            value: ratio / power_eta(t, k),
        })
        .collect();
    let mut report = DistortionReport::new("qs-scan", f, Some(seed), samples);
    let j = report.argmax();
    report.fitted_constants.insert("C".into(), report.supremum);
    report.fitted_constants.insert("K".into(), k);
    report.worst_cases.insert(
        "C".into(),
        WorstCase {
            sample_index: j,
            points: triple_points(&draws[j]),
            scale: values[j].0,
            value: report.supremum,
        },
    );
    if refine > 0 {
        refine_qs_constant(f, &mut report, &draws, refine)?;
    }
    Ok(report)
}

/// Default number of worst sampled triples polished by [`refine_qs_constant`].
pub const DEFAULT_QS_REFINE: usize = 16;
const QS_REFINE_ROUNDS: usize = 4;
const QS_REFINE_ITERS: u64 = 2000;

/// A disk point from plane coordinates whose length is the hyperbolic
/// distance to the origin, so the search space has no boundary.
fn from_exp_coords(x: f64, y: f64) -> Result<HPoint> {
    let s = x.hypot(y);
    if s == 0.0 {
        return Ok(HPoint::ORIGIN);
    }
    let m = (s / 2.0).tanh() / s;
    HPoint::new(x * m, y * m)
}

fn to_exp_coords(z: HPoint) -> [f64; 2] {
    let r = z.norm();
    if r == 0.0 {
        return [0.0, 0.0];
    }
    let s = 2.0 * r.atanh() / r;
    [z.x() * s, z.y() * s]
}

fn decode_triple(x: &[f64]) -> Result<Triple> {
    Ok(Triple {
        u: from_exp_coords(x[0], x[1])?,
        v: from_exp_coords(x[2], x[3])?,
        w: from_exp_coords(x[4], x[5])?,
    })
}

struct NegQsValue<'a> {
    f: &'a MapUnderTest,
    k: f64,
}

impl CostFunction for NegQsValue<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, x: &Vec<f64>) -> std::result::Result<f64, ArgminError> {
        let value = decode_triple(x)
            .and_then(|tr| qs_ratio(self.f, tr.u, tr.v, tr.w))
            .map(|(t, ratio)| ratio / power_eta(t, self.k));
        Ok(match value {
            Ok(v) if v.is_finite() => -v,
            _ => 0.0,
        })
    }
}

/// Local maximisation of `ratio / eta(t)` from one triple (Nelder-Mead in
/// exponential coordinates, restarted a few times). Never returns less than
/// the starting value.
pub fn refine_triple(f: &MapUnderTest, k: f64, start: Triple) -> Result<(f64, Triple)> {
    let cost = NegQsValue { f, k };
    let mut x: Vec<f64> = [start.u, start.v, start.w].iter().flat_map(|z| to_exp_coords(*z)).collect();
    let mut best = -cost.cost(&x).expect("cost is infallible");
    for _ in 0..QS_REFINE_ROUNDS {
        let spread = x.chunks(2).map(|p| p[0].hypot(p[1])).fold(0.0, f64::max);
        let h = 0.05 * spread.max(1e-6);
        let mut simplex = vec![x.clone()];
        for i in 0..x.len() {
            let mut y = x.clone();
            y[i] += h;
            simplex.push(y);
        }
        let solver = NelderMead::new(simplex)
            .with_sd_tolerance(1e-15)
            .map_err(|e| GeomError::InvalidParameter(e.to_string()))?;
        let res = Executor::new(NegQsValue { f, k }, solver)
            .configure(|state| state.max_iters(QS_REFINE_ITERS))
            .run()
            .map_err(|e| GeomError::InvalidParameter(e.to_string()))?;
        let state = res.state();
        if let Some(p) = &state.best_param {
            if -state.best_cost > best {
                best = -state.best_cost;
                x = p.clone();
            }
        }
    }
    Ok((best, decode_triple(&x)?))
}

fn refine_qs_constant(f: &MapUnderTest, report: &mut DistortionReport, draws: &[Triple], refine: usize) -> Result<()> {
    let k = f.require_k()?;
    let mut order: Vec<usize> = (0..report.samples.len()).collect();
    order.sort_by(|&a, &b| report.samples[b].value.total_cmp(&report.samples[a].value).then(a.cmp(&b)));
    order.truncate(refine);
    let refined = evaluate(&order, |&j| refine_triple(f, k, draws[j]))?;
    let mut best: Option<(usize, f64, Triple)> = None;
    for (&j, &(value, tr)) in order.iter().zip(&refined) {
        if best.map_or(true, |b| value > b.1) {
            best = Some((j, value, tr));
        }
    }
    if let Some((j, value, tr)) = best {
        if value > report.fitted_constants["C"] {
            report.fitted_constants.insert("C".into(), value);
            let (t, _) = qs_ratio(f, tr.u, tr.v, tr.w)?;
            report.worst_cases.insert(
                "C".into(),
                WorstCase {
                    sample_index: j,
                    points: triple_points(&tr),
                    scale: t,
                    value,
                },
            );
        }
    }
    report.fitted_constants.insert("C_sampled".into(), report.supremum);
    Ok(())
}

/// Count triples of a fresh sample violating `ratio <= c max{t^K, t^{1/K}}`.
pub fn qs_violations(f: &MapUnderTest, c: f64, triples: usize, seed: u64) -> Result<usize> {
    let k = f.require_k()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws = (0..triples).map(|_| draw_triple(&mut rng)).collect::<Result<Vec<_>>>()?;
    let values = evaluate(&draws, |tr| qs_ratio(f, tr.u, tr.v, tr.w))?;
    Ok(values.iter().filter(|(t, ratio)| *ratio > c * power_eta(*t, k)).count())
}

/// Draw a pair: `x` uniform in `B(0, 3)` and `y` at a log-uniform distance
/// in `[1e-3, 6]` from it in a uniform direction.
pub fn draw_pair<R: Rng>(rng: &mut R) -> Result<(HPoint, HPoint)> {
    let x = uniform_in_ball(rng, HPoint::ORIGIN, 3.0)?;
    let d = (rng.gen_range((1e-3f64).ln()..(6.0f64).ln())).exp();
    let y = circle_point_raw(x, d, rng.gen_range(0.0..TAU))?;
    Ok((x, y))
}

/// Least `C1` and greatest `C2` with
/// `C2 min{d^K, d} <= rho(fx, fy) <= C1 max{d^{1/K}, d}` on sampled pairs.
///
/// Samples store the upper ratio, so the supremum is `C1`.
pub fn growth_bounds_fit(f: &MapUnderTest, pairs: usize, seed: u64) -> Result<DistortionReport> {
    let k = f.require_k()?;
    if pairs == 0 {
        return Err(GeomError::InvalidParameter("growth fit needs at least one pair".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws = (0..pairs).map(|_| draw_pair(&mut rng)).collect::<Result<Vec<_>>>()?;
    let values = evaluate(&draws, |&(x, y)| -> Result<(f64, f64)> {
        let d = dist_disk(x, y)?;
        let image = dist_disk(f.apply(x)?, f.apply(y)?)?;
        Ok((d, image))
    })?;
    let samples = draws
        .iter()
        .zip(&values)
        .map(|(&(x, _), &(d, image))| Sample {
            location: xy(x),
            scale: d,
            value: image / d.powf(1.0 / k).max(d),
        })
        .collect();
    let mut report = DistortionReport::new("growth-fit", f, Some(seed), samples);
    let hi = report.argmax();
    let mut lo = 0;
    let lower = |j: usize| values[j].1 / values[j].0.powf(k).min(values[j].0);
    for j in 1..values.len() {
        if lower(j) < lower(lo) {
            lo = j;
        }
    }
    let c2 = lower(lo);
    report.fitted_constants.insert("C1".into(), report.supremum);
    report.fitted_constants.insert("C2".into(), c2);
    report.fitted_constants.insert("K".into(), k);
    for (name, j, value) in [("C1", hi, report.supremum), ("C2", lo, c2)] {
        report.worst_cases.insert(
            name.into(),
            WorstCase {
                sample_index: j,
                points: vec![xy(draws[j].0), xy(draws[j].1)],
                scale: values[j].0,
                value,
            },
        );
    }
    Ok(report)
}

/// Tolerance on `|f(0)|` for maps assumed to fix the origin.
pub const FIXED_POINT_TOL: f64 = 1e-12;

/// `L(0, t r) / l(0, r)` over `r_grid`, where `L` and `l` are the largest and
/// smallest image distances from `f(0)` over the circle of that radius.
pub fn ratio_bound_scan(f: &MapUnderTest, t: f64, r_grid: &[f64], samples: usize) -> Result<DistortionReport> {
    let f0 = f.apply(HPoint::ORIGIN)?;
    if f0.norm() > FIXED_POINT_TOL {
        return Err(GeomError::FixedPointViolation(f0.norm()));
    }
    if !(t > 0.0) {
        return Err(GeomError::InvalidParameter(format!("distance ratio t = {t}")));
    }
    let values = evaluate(r_grid, |&r| -> Result<f64> {
        let outer = circle_extremes(f, HPoint::ORIGIN, t * r, samples)?;
        let inner = circle_extremes(f, HPoint::ORIGIN, r, samples)?;
        Ok(outer.max / inner.min)
    })?;
    let samples = r_grid
        .iter()
        .zip(values)
        .map(|(&r, value)| Sample {
            location: [0.0, 0.0],
            scale: r,
            value,
        })
        .collect();
    let mut report = DistortionReport::new("ratio-bound", f, None, samples);
    report.fitted_constants.insert("t".into(), t);
    report.fitted_constants.insert("eta".into(), report.supremum);
    Ok(report)
}

/// Vertices `0, tanh(t/2) e^{i pi/3}, tanh(t/2) e^{-i pi/3}`: two sides of
/// length `t` meeting at the origin at angle `2 pi / 3`.
pub fn wide_isosceles(t: f64) -> Result<[HPoint; 3]> {
    let s = (t / 2.0).tanh();
    Ok([
        HPoint::ORIGIN,
        HPoint::from_polar(s, PI / 3.0)?,
        HPoint::from_polar(s, -PI / 3.0)?,
    ])
}

/// Bound on the change of the `2 pi / 3` angle of [`wide_isosceles`] when
/// every vertex moves by less than `t xi`, from bounding the law of cosines
/// term by term.
pub fn angle_perturbation_epsilon(t: f64, xi: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) || !(xi > 0.0 && xi < 0.5) {
        return Err(GeomError::InvalidParameter(format!("t = {t}, xi = {xi}")));
    }
    let v = wide_isosceles(t)?;
    let h = dist_disk(v[1], v[2])?;
    let (short, long) = ((1.0 - 2.0 * xi) * t, (1.0 + 2.0 * xi) * t);
    let lo = (short.cosh().powi(2) - (h + 2.0 * xi * t).cosh()) / long.sinh().powi(2);
    let hi = (long.cosh().powi(2) - (h - 2.0 * xi * t).cosh()) / short.sinh().powi(2);
    let target = 2.0 * PI / 3.0;
    let angle = |c: f64| c.clamp(-1.0, 1.0).acos();
    Ok((angle(lo) - target).abs().max((angle(hi) - target).abs()))
}

/// Angle at the first vertex after moving each vertex of [`wide_isosceles`]
/// by the given hyperbolic offsets `(distance, direction)`.
pub fn perturbed_wide_angle(t: f64, offsets: [(f64, f64); 3]) -> Result<f64> {
    let v = wide_isosceles(t)?;
    let mut w = v;
    for k in 0..3 {
        let (d, theta) = offsets[k];
        w[k] = circle_point_raw(v[k], d, theta)?;
    }
    angle_at_vertex(w[0], w[1], w[2])
}
