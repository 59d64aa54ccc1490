//! The invariant suite behind `verify-lemmas`: one seeded check per
//! geometric fact the library relies on.

use std::f64::consts::{PI, TAU};

use hypskew::chain::{build_chain, validate_chain};
use hypskew::distortion::{
    angle_perturbation_epsilon, growth_bounds_fit, h_rho, perturbed_wide_angle, qs_ratio_scan, skew_scan,
    uniform_in_ball,
};
use hypskew::metric::{dist_ball, dist_disk};
use hypskew::quotient::{quotient_dist, CyclicGroup, QuotientPoint};
use hypskew::rotmap::{beltrami_fd, beltrami_r0_exact, rot0_map, RotationMap, DEFAULT_FD_STEP};
use hypskew::triangle::{delta_constant, inscribed_radii, side_to_angle, skew_hyp, EqTriangle, Triangle};
use hypskew::{BallPoint, HPoint, MapUnderTest, MobiusMap, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Outcome of one check: `error` is the measured deviation, which must not
/// exceed `tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &'static str, error: f64, tolerance: f64) -> Self {
        Check {
            name,
            error,
            tolerance,
            passed: error <= tolerance,
        }
    }
}

fn disk_point(rng: &mut ChaCha8Rng, max_modulus: f64) -> Result<HPoint> {
    HPoint::from_polar(max_modulus * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..TAU))
}

fn placed_triangle(rng: &mut ChaCha8Rng, side: f64) -> Result<EqTriangle> {
    let c = uniform_in_ball(rng, HPoint::ORIGIN, 3.0)?;
    EqTriangle::from_side(side, &MobiusMap::moving_origin_to(c, rng.gen_range(0.0..TAU)))
}

fn metric_models_agree(rng: &mut ChaCha8Rng) -> Result<Check> {
    let mut err: f64 = 0.0;
    for _ in 0..10_000 {
        let (z, w) = (disk_point(rng, 0.99)?, disk_point(rng, 0.99)?);
        let d = dist_disk(z, w)?;
        let e = dist_ball(&BallPoint::new(&[z.x(), z.y()])?, &BallPoint::new(&[w.x(), w.y()])?)?;
        err = err.max((d - e).abs() / d.max(1.0));
    }
    Ok(Check::new("metric models agree", err, 1e-12))
}

fn equilateral_generation() -> Result<Check> {
    let mut err: f64 = 0.0;
    for k in 1..=1000 {
        let r = k as f64 / 1000.0;
        let x = (r / 2.0).tanh();
        let v = [HPoint::ORIGIN, HPoint::real(x)?, HPoint::from_polar(x, side_to_angle(r)?)?];
        for j in 0..3 {
            err = err.max((dist_disk(v[j], v[(j + 1) % 3])? - r).abs());
        }
    }
    Ok(Check::new("equilateral generation", err, 1e-10))
}

fn angle_window() -> Result<Check> {
    // distance outside the open window (2 pi / 7, pi / 3), zero when inside
    let mut err: f64 = 0.0;
    for k in 1..=1000 {
        let a = side_to_angle(k as f64 / 1000.0)?;
        if !(a > 2.0 * PI / 7.0 && a < PI / 3.0) {
            err = err.max((a - PI / 3.0).max(2.0 * PI / 7.0 - a).max(f64::MIN_POSITIVE));
        }
    }
    let anchor = (side_to_angle(1.0)? - 0.918_798).abs();
    Ok(Check::new("angle window", err.max(anchor), 1e-5))
}

fn inscribed_ball(rng: &mut ChaCha8Rng) -> Result<Check> {
    let limit = (inscribed_radii(1.0 - 1e-9)?.0 - (2.0 - 3f64.sqrt())).abs();
    let small = (inscribed_radii(1e-6)?.0 / 1e-6 - 0.5).abs();
    let delta = delta_constant();
    let mut outside = 0;
    for _ in 0..100 {
        let r = rng.gen_range(0.01..=1.0);
        let t = placed_triangle(rng, r)?;
        for _ in 0..1000 {
            if !t.contains_point(uniform_in_ball(rng, t.centroid(), 2.0 * delta * r)?) {
                outside += 1;
            }
        }
    }
    let err = (limit / 1e-6).max(small / 1e-4).max(if delta >= 0.13 { 0.0 } else { 1.0 });
    Ok(Check::new("inscribed ball", err + outside as f64, 1.0))
}

fn rotation_dilatation(rng: &mut ChaCha8Rng) -> Result<Check> {
    let f = rot0_map();
    let mut err: f64 = 0.0;
    for i in 1..=20 {
        let t = 0.9 * i as f64 / 20.0;
        for j in 0..8 {
            let z = HPoint::from_polar(t, TAU * j as f64 / 8.0)?;
            err = err.max((beltrami_fd(&f, z, DEFAULT_FD_STEP)? - beltrami_r0_exact(z)?).abs());
        }
    }
    let mut skew: f64 = 0.0;
    for _ in 0..1000 {
        let (w, z) = (disk_point(rng, 0.9)?, disk_point(rng, 0.9)?);
        if dist_disk(w, z)? < 1e-6 {
            continue;
        }
        let y = RotationMap::new(w).apply(z)?;
        skew = skew.max((skew_hyp(&Triangle::new(w, z, y))? - 1.0).abs());
    }
    Ok(Check::new("rotation map dilatation", (err / 1e-6).max(skew / 1e-9), 1.0))
}

fn chain_length(rng: &mut ChaCha8Rng) -> Result<Check> {
    let mut bad = 0;
    for _ in 0..100 {
        let side = rng.gen_range(0.05..=1.0);
        let t = placed_triangle(rng, side)?;
        let p = uniform_in_ball(rng, t.centroid(), 5.0)?;
        let c = build_chain(&t, p)?;
        if !validate_chain(&c).passed() || c.len() > c.length_bound() {
            bad += 1;
        }
    }
    Ok(Check::new("chain length bound", bad as f64, 0.0))
}

fn angle_perturbation(rng: &mut ChaCha8Rng) -> Result<Check> {
    let xi = 0.01;
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let t = rng.gen_range(0.01..=1.0);
        let eps = angle_perturbation_epsilon(t, xi)?;
        let mut offsets = [(0.0, 0.0); 3];
        for o in &mut offsets {
            *o = (t * xi * rng.gen::<f64>(), rng.gen_range(0.0..TAU));
        }
        worst = worst.max((perturbed_wide_angle(t, offsets)? - 2.0 * PI / 3.0).abs() / eps);
    }
    Ok(Check::new("angle perturbation", worst, 1.0))
}

fn isometry_controls(seed: u64) -> Result<Check> {
    let m = MapUnderTest::from_mobius(MobiusMap::new(1.3, HPoint::new(0.5, -0.2)?));
    let grid = [0.1, 0.5, 1.0];
    let mut err = (skew_scan(&m, &grid, 50, seed)?.supremum - 1.0).abs();
    err = err.max((h_rho(&m, HPoint::new(-0.3, 0.4)?, 1.0, 64)? - 1.0).abs());
    err = err.max((qs_ratio_scan(&m, 1000, seed)?.fitted_constants["C"] - 1.0).abs());
    let g = growth_bounds_fit(&m, 1000, seed)?;
    err = err.max((g.fitted_constants["C1"] - 1.0).abs()).max((g.fitted_constants["C2"] - 1.0).abs());
    Ok(Check::new("isometry controls", err, 1e-9))
}

fn quotient_pseudometric(rng: &mut ChaCha8Rng) -> Result<Check> {
    let g = CyclicGroup::from_halfplane_factor(3.0)?;
    let mut err: f64 = 0.0;
    for _ in 0..200 {
        let p: Vec<QuotientPoint> = (0..3)
            .map(|_| QuotientPoint::from_disk(g, disk_point(rng, 0.95)?))
            .collect::<Result<_>>()?;
        let (dpq, dqp) = (quotient_dist(&p[0], &p[1])?, quotient_dist(&p[1], &p[0])?);
        let dpr = quotient_dist(&p[0], &p[2])?;
        let dqr = quotient_dist(&p[1], &p[2])?;
        err = err.max((dpq - dqp).abs());
        err = err.max(dpr - dpq - dqr);
        err = err.max(quotient_dist(&p[0], &p[0].translate(rng.gen_range(-4..=4)))?);
        err = err.max(dpq - dist_disk(p[0].lift_disk()?, p[1].lift_disk()?)?);
    }
    Ok(Check::new("quotient pseudometric", err, 1e-9))
}

/// Run every check; sampling is driven by `seed`.
pub fn run_checks(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(vec![
        metric_models_agree(&mut rng)?,
        equilateral_generation()?,
        angle_window()?,
        inscribed_ball(&mut rng)?,
        rotation_dilatation(&mut rng)?,
        chain_length(&mut rng)?,
        angle_perturbation(&mut rng)?,
        isometry_controls(seed)?,
        quotient_pseudometric(&mut rng)?,
    ])
}

/// Fixed-width pass/fail table.
pub fn format_table(checks: &[Check]) -> String {
    let mut out = format!("{:<28} {:>6} {:>12} {:>12}\n", "check", "result", "error", "tolerance");
    for c in checks {
        out.push_str(&format!(
            "{:<28} {:>6} {:>12.3e} {:>12.3e}\n",
            c.name,
            if c.passed { "pass" } else { "FAIL" },
            c.error,
            c.tolerance
        ));
    }
    out
}
