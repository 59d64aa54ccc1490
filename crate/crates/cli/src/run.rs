//! Experiment execution and artifact output.

use std::fs;
use std::path::{Path, PathBuf};

use hypskew::chain::{build_chain, validate_chain, ChainReport, TriangleChain};
use hypskew::distortion::{
    growth_bounds_fit, h_rho_scan, hyperbolic_circle_point, qs_ratio_scan_refined, skew_scan_with, DistortionReport,
    Sample, SkewScanOptions,
};
use hypskew::metric::cayley_to_disk;
use hypskew::quotient::{descend_map, halfplane_power_stretch, quotient_skew_scan, CyclicGroup};
use hypskew::triangle::EqTriangle;
use hypskew::zoo::make_map;
use hypskew::{HPoint, MapUnderTest, MobiusMap, UpperPoint};
use serde::Serialize;

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::CliError;
use crate::lemmas::{format_table, run_checks, Check};
use crate::svg::{color_ramp, render_svg, Element, Rgb, Scene};

/// Environment fallback for `--jobs`.
pub const JOBS_ENV: &str = "HYPSKEW_JOBS";

const BLACK: Rgb = Rgb(0, 0, 0);
const RED: Rgb = Rgb(200, 0, 0);

/// Command-line overrides applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub render: bool,
    pub jobs: Option<usize>,
}

impl Overrides {
    pub fn apply(&self, config: &mut ExperimentConfig) {
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(out) = &self.out {
            config.out = out.clone();
        }
        config.render |= self.render;
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainRecord {
    pub chain: TriangleChain,
    pub validation: ChainReport,
    pub length_bound: usize,
    pub slack_ratio: Option<f64>,
}

/// Everything an experiment produced, before it is written out.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: DistortionReport,
    pub chain: Option<ChainRecord>,
    pub checks: Vec<Check>,
    /// `(file name, document)` pairs for `figures/`.
    pub figures: Vec<(String, String)>,
}

impl Outcome {
    /// `ChecksFailed` when any lemma check failed.
    pub fn status(&self) -> Result<(), CliError> {
        match self.checks.iter().filter(|c| !c.passed).count() {
            0 => Ok(()),
            n => Err(CliError::ChecksFailed(n)),
        }
    }

    fn new(report: DistortionReport) -> Self {
        Outcome {
            report,
            chain: None,
            checks: Vec::new(),
            figures: Vec::new(),
        }
    }
}

fn build_map(config: &ExperimentConfig) -> Result<MapUnderTest, CliError> {
    let spec = config
        .map
        .as_ref()
        .ok_or_else(|| CliError::Config(format!("{} needs a `map`", config.experiment.name())))?;
    make_map(spec).map_err(|e| CliError::Config(format!("map: {e}")))
}

/// Run the experiment in memory. Scans use the current rayon pool.
pub fn execute(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let seed = config.seed;
    let kind = config.experiment;
    let numeric = CliError::numeric(kind.name());
    let mut outcome = match kind {
        ExperimentKind::VerifyLemmas => verify_lemmas(seed).map_err(numeric)?,
        ExperimentKind::SkewScan => {
            let f = build_map(config)?;
            let options = SkewScanOptions {
                placement: config.placement,
                orientation_samples: config.orientation_samples,
            };
            let report = skew_scan_with(&f, &config.r_grid, config.samples, &options, seed).map_err(numeric)?;
            let mut outcome = Outcome::new(report);
            if config.render {
                let mut scene = samples_scene(&outcome.report.samples);
                if let Some(w) = outcome.report.worst_cases.get("sigma") {
                    scene.push(polygon(&w.points, RED));
                }
                outcome.figures.push(("skew-scan.svg".into(), render_svg(&scene)));
            }
            outcome
        }
        ExperimentKind::HrhoScan => {
            let f = build_map(config)?;
            let report = h_rho_scan(&f, &config.r_grid, config.samples, config.placement, config.circle_samples, seed)
                .map_err(numeric)?;
            let mut outcome = Outcome::new(report);
            if config.render {
                let scene = samples_scene(&outcome.report.samples);
                outcome.figures.push(("hrho-scan.svg".into(), render_svg(&scene)));
            }
            outcome
        }
        ExperimentKind::QsScan => {
            let f = build_map(config)?;
            f.require_k().map_err(|e| CliError::Config(e.to_string()))?;
            let report = qs_ratio_scan_refined(&f, config.samples, config.refine, seed).map_err(numeric)?;
            let mut outcome = Outcome::new(report);
            if config.render {
                let mut scene = samples_scene(&outcome.report.samples);
                if let Some(w) = outcome.report.worst_cases.get("C") {
                    let p = points(&w.points);
                    scene.push(Element::Geodesic { from: p[0], to: p[1], stroke: RED });
                    scene.push(Element::Geodesic { from: p[0], to: p[2], stroke: BLACK });
                }
                outcome.figures.push(("qs-scan.svg".into(), render_svg(&scene)));
            }
            outcome
        }
        ExperimentKind::GrowthFit => {
            let f = build_map(config)?;
            f.require_k().map_err(|e| CliError::Config(e.to_string()))?;
            let report = growth_bounds_fit(&f, config.samples, seed).map_err(numeric)?;
            let mut outcome = Outcome::new(report);
            if config.render {
                let scene = samples_scene(&outcome.report.samples);
                outcome.figures.push(("growth-fit.svg".into(), render_svg(&scene)));
            }
            outcome
        }
        ExperimentKind::ChainDemo => chain_demo(config).map_err(numeric)?,
        ExperimentKind::QuotientDemo => quotient_demo(config).map_err(numeric)?,
    };
    if !config.render {
        outcome.figures.clear();
    }
    Ok(outcome)
}

fn verify_lemmas(seed: u64) -> hypskew::Result<Outcome> {
    let checks = run_checks(seed)?;
    let samples = checks
        .iter()
        .map(|c| Sample {
            location: [0.0, 0.0],
            scale: c.tolerance,
            value: c.error,
        })
        .collect();
    let mut report = DistortionReport::from_samples("verify-lemmas", "none", Some(seed), samples);
    let failed = checks.iter().filter(|c| !c.passed).count();
    report.fitted_constants.insert("checks".into(), checks.len() as f64);
    report.fitted_constants.insert("failed".into(), failed as f64);
    let mut outcome = Outcome::new(report);
    outcome.checks = checks;
    Ok(outcome)
}

fn chain_demo(config: &ExperimentConfig) -> hypskew::Result<Outcome> {
    let c = &config.chain;
    let centre = HPoint::new(c.centre[0], c.centre[1])?;
    let t = EqTriangle::from_side(c.side, &MobiusMap::moving_origin_to(centre, c.orientation))?;
    let target = if c.target_distance == 0.0 {
        centre
    } else {
        hyperbolic_circle_point(centre, c.target_distance, c.target_angle)?
    };
    let chain = build_chain(&t, target)?;
    let samples = chain
        .triangles()
        .iter()
        .zip(chain.distances())
        .map(|(tri, &d)| Sample {
            location: [tri.centroid().x(), tri.centroid().y()],
            scale: tri.side(),
            value: d,
        })
        .collect();
    let mut report = DistortionReport::from_samples("chain-demo", "none", Some(config.seed), samples);
    report.fitted_constants.insert("length".into(), chain.len() as f64);
    report.fitted_constants.insert("length_bound".into(), chain.length_bound() as f64);
    report.fitted_constants.insert("initial_distance".into(), chain.initial_distance());
    if let Some(s) = chain.slack_ratio() {
        report.fitted_constants.insert("slack_ratio".into(), s);
    }
    let validation = validate_chain(&chain);
    report.diagnostics.insert("valid".into(), if validation.passed() { 1.0 } else { 0.0 });
    let mut outcome = Outcome::new(report);
    if config.render {
        let mut scene = Scene::new();
        let n = chain.len();
        for (k, tri) in chain.triangles().iter().enumerate() {
            let s = if n > 1 { k as f64 / (n - 1) as f64 } else { 0.0 };
            scene.triangle(tri.vertices(), BLACK, Some(color_ramp(s)));
        }
        scene.point(target, 4.0, BLACK);
        outcome.figures.push(("chain.svg".into(), render_svg(&scene)));
    }
    outcome.chain = Some(ChainRecord {
        length_bound: chain.length_bound(),
        slack_ratio: chain.slack_ratio(),
        validation,
        chain,
    });
    Ok(outcome)
}

fn quotient_demo(config: &ExperimentConfig) -> hypskew::Result<Outcome> {
    let q = &config.quotient;
    let source = CyclicGroup::from_halfplane_factor(q.factor)?;
    let target = source.power(q.k)?;
    let fd = descend_map(halfplane_power_stretch(q.k)?, source, target)?;
    let mut report = quotient_skew_scan(&fd, config.samples, q.max_side, config.seed)?;
    report.diagnostics.insert("equivariance_error".into(), fd.equivariance_error());
    report.diagnostics.insert("source_translation_length".into(), source.translation_length());
    report.diagnostics.insert("target_translation_length".into(), target.translation_length());
    let mut outcome = Outcome::new(report);
    if config.render {
        let mut scene = samples_scene(&outcome.report.samples);
        // the two geodesics |w| = 1 and |w| = factor bound a fundamental domain
        for radius in [1.0, q.factor] {
            let end = |angle: f64| cayley_to_disk(UpperPoint::new(radius * angle.cos(), radius * angle.sin())?);
            scene.push(Element::Geodesic {
                from: end(1e-6)?,
                to: end(std::f64::consts::PI - 1e-6)?,
                stroke: BLACK,
            });
        }
        outcome.figures.push(("quotient.svg".into(), render_svg(&scene)));
    }
    Ok(outcome)
}

fn points(p: &[[f64; 2]]) -> Vec<HPoint> {
    p.iter().filter_map(|q| HPoint::new(q[0], q[1]).ok()).collect()
}

fn polygon(p: &[[f64; 2]], stroke: Rgb) -> Element {
    Element::Polygon {
        vertices: points(p),
        stroke,
        fill: None,
    }
}

/// Sample locations coloured by `log(value)` between the smallest and largest value.
fn samples_scene(samples: &[Sample]) -> Scene {
    let logs: Vec<f64> = samples.iter().map(|s| s.value.max(f64::MIN_POSITIVE).ln()).collect();
    let lo = logs.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut scene = Scene::new();
    for (s, l) in samples.iter().zip(&logs) {
        if let Ok(at) = HPoint::new(s.location[0], s.location[1]) {
            let u = if hi > lo { (l - lo) / (hi - lo) } else { 0.0 };
            scene.point(at, 2.0, color_ramp(u));
        }
    }
    scene
}

#[derive(Serialize)]
struct CsvRow<'a> {
    experiment: &'a str,
    seed: Option<u64>,
    sample_index: usize,
    location_x: f64,
    location_y: f64,
    scale: f64,
    value: f64,
}

pub fn report_csv(report: &DistortionReport) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for (k, s) in report.samples.iter().enumerate() {
        w.serialize(CsvRow {
            experiment: &report.experiment,
            seed: report.seed,
            sample_index: k,
            location_x: s.location[0],
            location_y: s.location[1],
            scale: s.scale,
            value: s.value,
        })?;
    }
    if report.samples.is_empty() {
        w.write_record(["experiment", "seed", "sample_index", "location_x", "location_y", "scale", "value"])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Write `report.json`, `report.csv`, `chain.json` and `figures/*.svg` into
/// `dir`; returns the written paths in order.
pub fn write_artifacts(outcome: &Outcome, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let mut written = Vec::new();
    let report = dir.join("report.json");
    write(&report, &to_json(&outcome.report))?;
    written.push(report);
    let csv_path = dir.join("report.csv");
    let csv = report_csv(&outcome.report).map_err(|e| CliError::Io {
        path: csv_path.clone(),
        source: std::io::Error::other(e),
    })?;
    write(&csv_path, &csv)?;
    written.push(csv_path);
    if let Some(chain) = &outcome.chain {
        let path = dir.join("chain.json");
        write(&path, &to_json(chain))?;
        written.push(path);
    }
    if !outcome.figures.is_empty() {
        let figures = dir.join("figures");
        fs::create_dir_all(&figures).map_err(io(&figures))?;
        for (name, doc) in &outcome.figures {
            let path = figures.join(name);
            write(&path, doc)?;
            written.push(path);
        }
    }
    Ok(written)
}

fn jobs_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(JOBS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .map(Some)
            .ok_or_else(|| CliError::Config(format!("{JOBS_ENV}={v} is not a positive integer"))),
        Err(_) => Ok(None),
    }
}

/// Apply overrides, run on a pool of the requested size and write artifacts.
/// Failed lemma checks are reported through [`Outcome::status`], after the
/// artifacts are written.
pub fn run(mut config: ExperimentConfig, overrides: &Overrides) -> Result<Outcome, CliError> {
    overrides.apply(&mut config);
    config.validate()?;
    let jobs = match overrides.jobs {
        Some(0) => return Err(CliError::Config("--jobs must be positive".into())),
        Some(n) => Some(n),
        None => jobs_from_env()?,
    };
    let outcome = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?
            .install(|| execute(&config))?,
        None => execute(&config)?,
    };
    write_artifacts(&outcome, &config.out)?;
    Ok(outcome)
}

/// Text printed after a successful run.
pub fn summary(outcome: &Outcome) -> String {
    if !outcome.checks.is_empty() {
        return format_table(&outcome.checks);
    }
    let r = &outcome.report;
    let mut s = format!("{} on {}: {} samples, supremum {}\n", r.experiment, r.map, r.samples.len(), r.supremum);
    for (k, v) in &r.fitted_constants {
        s.push_str(&format!("  {k} = {v}\n"));
    }
    s
}
