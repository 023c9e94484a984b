//! Executing scene tasks and writing their outputs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::output::{format_float, to_json, Svg};
use super::{Diagnostic, Scene, Task, TaskKind};
use crate::bde::{integrate_asymptotic_line, trace_discriminant, AsymptoticLine, IntegrationOptions};
use crate::error::Error;
use crate::fields::{
    find_umbilics, global_index_report, isoclinic_index, mean_index, wintgen_residual, winding_radius, AtlasChart,
    CandidateFailure, IndexValue, Umbilic,
};
use crate::geometry::{classify_point, point_geometry};
use crate::inflection::{classify_inflection, find_inflections, ClassifyOptions, InflectionReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "LAGSURF_OUT_DIR";
const FALLBACK_OUT_DIR: &str = "lagsurf-out";

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Takes precedence over the scene's `output` and the environment.
    pub out_dir: Option<PathBuf>,
    /// Overrides the scene's classification tolerance.
    pub tol: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub out_dir: Option<PathBuf>,
    /// Files written, manifest last.
    pub files: Vec<PathBuf>,
    pub diagnostics: Vec<Diagnostic>,
    /// One message per failed task, naming the task and the point.
    pub errors: Vec<String>,
}

struct Products {
    files: Vec<(String, String)>,
    notes: Vec<String>,
}

#[derive(Serialize)]
struct ManifestTask {
    name: String,
    kind: &'static str,
    status: &'static str,
    files: Vec<String>,
    notes: Vec<String>,
    error: Option<String>,
}

#[derive(Serialize)]
struct Manifest {
    scene: String,
    scene_sha256: String,
    tool: String,
    created_unix: u64,
    status: &'static str,
    tasks: Vec<ManifestTask>,
}

/// Run a scene file. I/O errors reading the scene or writing outputs are returned as `Err`.
pub fn run_scene(path: &Path, opts: &RunOptions) -> std::io::Result<RunOutcome> {
    let text = std::fs::read_to_string(path)?;
    run_scene_text(&text, opts)
}

pub fn run_scene_text(text: &str, opts: &RunOptions) -> std::io::Result<RunOutcome> {
    let scene = match Scene::parse(text) {
        Ok(s) => s,
        Err(diagnostics) => {
            return Ok(RunOutcome {
                exit_code: EXIT_VALIDATION,
                out_dir: None,
                files: Vec::new(),
                diagnostics,
                errors: Vec::new(),
            })
        }
    };
    let out_dir = opts
        .out_dir
        .clone()
        .or_else(|| scene.output.clone())
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(FALLBACK_OUT_DIR));
    std::fs::create_dir_all(&out_dir)?;
    let tol = opts.tol.unwrap_or(scene.tolerances.classification);

    let results: Vec<Result<Products, String>> = scene.tasks.par_iter().map(|t| execute(&scene, t, tol)).collect();

    let mut files = Vec::new();
    let mut errors = Vec::new();
    let mut entries = Vec::new();
    for (task, result) in scene.tasks.iter().zip(results) {
        match result {
            Ok(p) => {
                let mut names = Vec::new();
                for (name, content) in &p.files {
                    let path = out_dir.join(name);
                    std::fs::write(&path, content)?;
                    files.push(path);
                    names.push(name.clone());
                }
                entries.push(ManifestTask {
                    name: task.name.clone(),
                    kind: task.kind.tag(),
                    status: "ok",
                    files: names,
                    notes: p.notes,
                    error: None,
                });
            }
            Err(e) => {
                errors.push(e.clone());
                entries.push(ManifestTask {
                    name: task.name.clone(),
                    kind: task.kind.tag(),
                    status: "failed",
                    files: Vec::new(),
                    notes: Vec::new(),
                    error: Some(e),
                });
            }
        }
    }
    let created_unix = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let manifest = Manifest {
        scene: scene.name.clone(),
        scene_sha256: scene.hash.clone(),
        tool: format!("lagsurf {}", env!("CARGO_PKG_VERSION")),
        created_unix,
        status: if errors.is_empty() { "ok" } else { "partial" },
        tasks: entries,
    };
    let mpath = out_dir.join("manifest.json");
    std::fs::write(&mpath, to_json(&manifest))?;
    files.push(mpath);
    Ok(RunOutcome {
        exit_code: if errors.is_empty() { EXIT_OK } else { EXIT_NUMERIC },
        out_dir: Some(out_dir),
        files,
        diagnostics: Vec::new(),
        errors,
    })
}

fn execute(scene: &Scene, task: &Task, tol: f64) -> Result<Products, String> {
    let fail = |e: String| format!("task `{}` ({}): {e}", task.name, task.kind.tag());
    match &task.kind {
        TaskKind::ClassifyGrid => classify_grid(scene, task, tol),
        TaskKind::Discriminant => discriminant(scene, task),
        TaskKind::AsymptoticLines { .. } => asymptotic_lines(scene, task),
        TaskKind::InflectionReport { separatrix_radius } => inflection_report(scene, task, tol, *separatrix_radius),
        TaskKind::UmbilicReport => umbilic_report(scene, task),
        TaskKind::IndexReport { chi } => index_report(scene, task, *chi),
        TaskKind::WintgenScan => wintgen_scan(scene, task),
    }
    .map_err(fail)
}

/// Tolerated per-point failures: evaluation errors and degenerate metrics.
fn soft(e: &Error) -> bool {
    matches!(e, Error::Eval(_) | Error::DegenerateMetric { .. })
}

fn at(e: Error, x: f64, y: f64, chart: &str) -> String {
    format!("chart {chart} at ({x}, {y}): {e}")
}

fn grid(c: &AtlasChart, res: usize) -> Vec<(f64, f64)> {
    let n = res + 1;
    let r = &c.region;
    (0..n * n)
        .map(|k| {
            let (i, j) = (k % n, k / n);
            (
                r.x.0 + r.width() * i as f64 / res as f64,
                r.y.0 + r.height() * j as f64 / res as f64,
            )
        })
        .collect()
}

fn file_name(scene: &Scene, task: &Task, chart: &str, ext: &str) -> String {
    if scene.is_atlas() {
        format!("{}_{chart}.{ext}", task.name)
    } else {
        format!("{}.{ext}", task.name)
    }
}

fn classify_grid(scene: &Scene, task: &Task, tol: f64) -> Result<Products, String> {
    let mut csv = String::from("chart,x,y,K,kappa,Delta,class\n");
    let mut notes = Vec::new();
    for c in &scene.charts {
        let rows: Vec<Result<(f64, f64, Option<(f64, f64, f64, &'static str, bool)>), String>> = grid(c, task.resolution)
            .into_par_iter()
            .map(|(x, y)| match point_geometry(&c.chart, x, y) {
                Ok(pg) => {
                    let cd = pg.curvatures();
                    let class = classify_point(&cd, &pg.frame, Some(tol));
                    Ok((x, y, Some((cd.k, cd.kappa, cd.delta, class.region.name(), class.degenerate))))
                }
                Err(e) if soft(&e) => Ok((x, y, None)),
                Err(e) => Err(at(e, x, y, &c.name)),
            })
            .collect();
        let (mut undefined, mut degenerate, total) = (0, 0, rows.len());
        for r in rows {
            let (x, y, v) = r?;
            let (k, kappa, delta, class) = match v {
                Some((k, kappa, delta, class, deg)) => {
                    degenerate += deg as usize;
                    (k, kappa, delta, class)
                }
                None => {
                    undefined += 1;
                    (f64::NAN, f64::NAN, f64::NAN, "undefined")
                }
            };
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{class}",
                c.name,
                format_float(x),
                format_float(y),
                format_float(k),
                format_float(kappa),
                format_float(delta)
            );
        }
        if undefined > 0 {
            notes.push(format!("chart {}: {undefined} grid points could not be evaluated", c.name));
        }
        if degenerate > 0 {
            notes.push(format!(
                "chart {}: second-order data vanish at {degenerate} of {total} grid points",
                c.name
            ));
        }
    }
    Ok(Products {
        files: vec![(format!("{}.csv", task.name), csv)],
        notes,
    })
}

fn discriminant(scene: &Scene, task: &Task) -> Result<Products, String> {
    let mut csv = String::from("chart,polyline,vertex,x,y\n");
    let mut pts = String::from("chart,x,y,value,gradient\n");
    let mut files = Vec::new();
    let mut notes = Vec::new();
    for c in &scene.charts {
        let tr = trace_discriminant(&c.chart, c.region, task.resolution).map_err(|e| format!("chart {}: {e}", c.name))?;
        let mut chart_notes = Vec::new();
        if tr.degenerate {
            chart_notes.push(format!("chart {}: discriminant vanishes identically (degenerate)", c.name));
        }
        let mut svg = Svg::new(c.region);
        for (k, line) in tr.polylines.iter().enumerate() {
            for (v, (x, y)) in line.iter().enumerate() {
                let _ = writeln!(csv, "{},{k},{v},{},{}", c.name, format_float(*x), format_float(*y));
            }
            svg.polyline(line, "discriminant");
        }
        for s in &tr.singular_points {
            let _ = writeln!(
                pts,
                "{},{},{},{},{}",
                c.name,
                format_float(s.x),
                format_float(s.y),
                format_float(s.value),
                format_float(s.gradient)
            );
            svg.marker(s.x, s.y, "curve-singularity");
        }
        files.push((file_name(scene, task, &c.name, "svg"), svg.finish(&scene.hash, &chart_notes)));
        notes.extend(chart_notes);
        notes.push(format!(
            "chart {}: {} polylines, {} singular points",
            c.name,
            tr.polylines.len(),
            tr.singular_points.len()
        ));
    }
    files.insert(0, (format!("{}.csv", task.name), csv));
    files.insert(1, (format!("{}_points.csv", task.name), pts));
    Ok(Products { files, notes })
}

fn asymptotic_lines(scene: &Scene, task: &Task) -> Result<Products, String> {
    let TaskKind::AsymptoticLines { seeds, step, max_steps } = &task.kind else {
        unreachable!()
    };
    let seeds = seeds.points();
    struct Traced<'a> {
        chart: &'a AtlasChart,
        seed: (f64, f64),
        branch: usize,
        reverse: bool,
        line: Option<AsymptoticLine>,
        note: Option<String>,
    }
    let jobs: Vec<(usize, usize, bool)> = (0..seeds.len())
        .flat_map(|s| [(s, 0, false), (s, 0, true), (s, 1, false), (s, 1, true)])
        .collect();
    let traced: Vec<Result<Traced, String>> = jobs
        .par_iter()
        .map(|&(s, branch, reverse)| {
            let seed = seeds[s];
            let chart = scene
                .charts
                .iter()
                .find(|c| c.region.contains(seed.0, seed.1))
                .expect("seeds validated against regions");
            let opts = IntegrationOptions {
                step: *step,
                max_steps: *max_steps,
                bounds: Some(chart.region),
                reverse,
                ..IntegrationOptions::default()
            };
            let (line, note) = match integrate_asymptotic_line(&chart.chart, seed, branch, &opts) {
                Ok(l) => (Some(l), None),
                Err(e @ Error::EllipticSeed { .. }) => (None, Some(e.to_string())),
                Err(e) => return Err(at(e, seed.0, seed.1, &chart.name)),
            };
            Ok(Traced {
                chart,
                seed,
                branch,
                reverse,
                line,
                note,
            })
        })
        .collect();
    let traced: Vec<Traced> = traced.into_iter().collect::<Result<_, _>>()?;

    let mut csv = String::from("line,chart,seed_x,seed_y,branch,direction,vertex,x,y,slope,slope_chart\n");
    let mut summary =
        String::from("line,chart,seed_x,seed_y,branch,direction,vertices,stop,relative_first_integral,double_root\n");
    let mut notes = Vec::new();
    let mut elliptic = 0;
    for (k, t) in traced.iter().enumerate() {
        let dir = if t.reverse { "reverse" } else { "forward" };
        let (sx, sy) = (format_float(t.seed.0), format_float(t.seed.1));
        let Some(line) = &t.line else {
            if t.branch == 0 && !t.reverse {
                elliptic += 1;
                if let Some(n) = &t.note {
                    notes.push(format!("chart {}: {n}", t.chart.name));
                }
            }
            continue;
        };
        for (v, p) in line.vertices.iter().enumerate() {
            let _ = writeln!(
                csv,
                "{k},{},{sx},{sy},{},{dir},{v},{},{},{},{}",
                t.chart.name,
                t.branch,
                format_float(p.x),
                format_float(p.y),
                format_float(p.slope),
                p.chart.tag()
            );
        }
        let stop = serde_json::to_value(line.stop).unwrap();
        let _ = writeln!(
            summary,
            "{k},{},{sx},{sy},{},{dir},{},{},{},{}",
            t.chart.name,
            t.branch,
            line.vertices.len(),
            stop.as_str().unwrap(),
            format_float(line.relative_first_integral()),
            line.double_root
        );
    }
    if elliptic > 0 {
        notes.push(format!("{elliptic} seeds lie in the elliptic region and carry no asymptotic lines"));
    }
    let mut files = vec![
        (format!("{}.csv", task.name), csv),
        (format!("{}_summary.csv", task.name), summary),
    ];
    for c in &scene.charts {
        let mut svg = Svg::new(c.region);
        let tr = trace_discriminant(&c.chart, c.region, task.resolution).map_err(|e| format!("chart {}: {e}", c.name))?;
        for line in &tr.polylines {
            svg.polyline(line, "discriminant");
        }
        for t in traced.iter().filter(|t| std::ptr::eq(t.chart, c)) {
            if let Some(l) = &t.line {
                svg.polyline(&l.xy(), if t.branch == 0 { "branch-0" } else { "branch-1" });
            }
        }
        let inf = find_inflections(&c.chart, c.region, task.resolution).map_err(|e| format!("chart {}: {e}", c.name))?;
        for p in &inf.points {
            svg.marker(p.x, p.y, "inflection");
        }
        let mut chart_notes = Vec::new();
        if tr.degenerate {
            chart_notes.push(format!("chart {}: discriminant vanishes identically (degenerate)", c.name));
        }
        files.push((file_name(scene, task, &c.name, "svg"), svg.finish(&scene.hash, &chart_notes)));
        notes.extend(chart_notes);
    }
    Ok(Products { files, notes })
}

#[derive(Serialize)]
struct InflectionEntry {
    x: f64,
    y: f64,
    rank: usize,
    residual: f64,
    report: Option<InflectionReport>,
    error: Option<String>,
}

#[derive(Serialize)]
struct InflectionChart {
    chart: String,
    degenerate: bool,
    failures: Vec<CandidateFailure>,
    inflections: Vec<InflectionEntry>,
}

#[derive(Serialize)]
struct ChartList<T> {
    charts: Vec<T>,
}

fn inflection_report(scene: &Scene, task: &Task, tol: f64, separatrix_radius: Option<f64>) -> Result<Products, String> {
    let opts = ClassifyOptions {
        tol,
        index_radius: scene.tolerances.index_radius,
        separatrix_radius,
    };
    let mut charts = Vec::new();
    let mut notes = Vec::new();
    for c in &scene.charts {
        let search = find_inflections(&c.chart, c.region, task.resolution).map_err(|e| format!("chart {}: {e}", c.name))?;
        if search.degenerate {
            notes.push(format!("chart {}: every grid point is an inflection (degenerate)", c.name));
        }
        let entries: Vec<Result<InflectionEntry, String>> = search
            .points
            .par_iter()
            .map(|p| {
                let (report, error) = match classify_inflection(&c.chart, (p.x, p.y), &opts) {
                    Ok(r) => (Some(r), None),
                    Err(e @ (Error::Genericity(_) | Error::NotInflection { .. })) => (None, Some(e.to_string())),
                    Err(e) => return Err(at(e, p.x, p.y, &c.name)),
                };
                Ok(InflectionEntry {
                    x: p.x,
                    y: p.y,
                    rank: p.rank,
                    residual: p.residual,
                    report,
                    error,
                })
            })
            .collect();
        let inflections: Vec<InflectionEntry> = entries.into_iter().collect::<Result<_, _>>()?;
        for e in &inflections {
            match (&e.report, &e.error) {
                (Some(r), _) => notes.push(format!(
                    "chart {}: inflection at ({}, {}) is {:?}",
                    c.name, e.x, e.y, r.model
                )),
                (None, Some(err)) => notes.push(format!("chart {}: {err}", c.name)),
                _ => {}
            }
        }
        charts.push(InflectionChart {
            chart: c.name.clone(),
            degenerate: search.degenerate,
            failures: search.failures,
            inflections,
        });
    }
    Ok(Products {
        files: vec![(format!("{}.json", task.name), to_json(&ChartList { charts }))],
        notes,
    })
}

#[derive(Serialize)]
struct UmbilicEntry {
    #[serde(flatten)]
    point: Umbilic,
    radius: Option<f64>,
    index_h: Option<IndexValue>,
    index_s: Option<IndexValue>,
    index_error: Option<String>,
    wintgen_residual: f64,
}

#[derive(Serialize)]
struct UmbilicChart {
    chart: String,
    degenerate: bool,
    failures: Vec<CandidateFailure>,
    umbilics: Vec<UmbilicEntry>,
}

fn umbilic_report(scene: &Scene, task: &Task) -> Result<Products, String> {
    let mut charts = Vec::new();
    let mut notes = Vec::new();
    for c in &scene.charts {
        let search = find_umbilics(&c.chart, c.region, task.resolution).map_err(|e| format!("chart {}: {e}", c.name))?;
        if search.degenerate {
            notes.push(format!(
                "chart {}: the isoclinic field vanishes on the whole grid (minimal surface, degenerate)",
                c.name
            ));
        }
        let mut umbilics = Vec::new();
        for p in &search.points {
            let nearest = search
                .points
                .iter()
                .filter(|q| (q.x, q.y) != (p.x, p.y))
                .map(|q| (q.x, q.y))
                .min_by(|a, b| {
                    (a.0 - p.x).hypot(a.1 - p.y).partial_cmp(&(b.0 - p.x).hypot(b.1 - p.y)).unwrap()
                });
            let wr = wintgen_residual(&c.chart, p.x, p.y).map_err(|e| at(e, p.x, p.y, &c.name))?;
            let mut entry = UmbilicEntry {
                point: p.clone(),
                radius: None,
                index_h: None,
                index_s: None,
                index_error: None,
                wintgen_residual: wr,
            };
            let indices = winding_radius((p.x, p.y), nearest).and_then(|r| {
                Ok((r, isoclinic_index(&c.chart, (p.x, p.y), r)?, mean_index(&c.chart, (p.x, p.y), r)?))
            });
            match indices {
                Ok((r, h, s)) => {
                    entry.radius = Some(r);
                    entry.index_h = Some(h);
                    entry.index_s = Some(s);
                }
                Err(e) if soft(&e) => return Err(at(e, p.x, p.y, &c.name)),
                Err(e) => {
                    notes.push(format!("chart {}: umbilic at ({}, {}): {e}", c.name, p.x, p.y));
                    entry.index_error = Some(e.to_string());
                }
            }
            if p.flat {
                notes.push(format!(
                    "chart {}: umbilic at ({}, {}) has vanishing second fundamental form",
                    c.name, p.x, p.y
                ));
            }
            umbilics.push(entry);
        }
        charts.push(UmbilicChart {
            chart: c.name.clone(),
            degenerate: search.degenerate,
            failures: search.failures,
            umbilics,
        });
    }
    Ok(Products {
        files: vec![(format!("{}.json", task.name), to_json(&ChartList { charts }))],
        notes,
    })
}

fn index_report(scene: &Scene, task: &Task, chi: i64) -> Result<Products, String> {
    let report = global_index_report(&scene.charts, chi, task.resolution).map_err(|e| e.to_string())?;
    let mut notes = report.diagnostics.clone();
    notes.push(format!(
        "generic: {}; relations: {}",
        report.generic,
        report
            .relations
            .iter()
            .map(|r| format!("{} {}", r.name, if r.pass { "holds" } else { "fails" }))
            .collect::<Vec<_>>()
            .join("; ")
    ));
    Ok(Products {
        files: vec![(format!("{}.json", task.name), to_json(&report))],
        notes,
    })
}

#[derive(Serialize)]
struct WintgenSummary {
    chart: String,
    points: usize,
    undefined: usize,
    min_residual: Option<f64>,
    min_at: Option<(f64, f64)>,
    /// Points with residual below −1e−10.
    violations: usize,
}

fn wintgen_scan(scene: &Scene, task: &Task) -> Result<Products, String> {
    let mut csv = String::from("chart,x,y,residual\n");
    let mut charts = Vec::new();
    let mut notes = Vec::new();
    for c in &scene.charts {
        let rows: Vec<Result<(f64, f64, f64), String>> = grid(c, task.resolution)
            .into_par_iter()
            .map(|(x, y)| match wintgen_residual(&c.chart, x, y) {
                Ok(r) => Ok((x, y, r)),
                Err(e) if soft(&e) => Ok((x, y, f64::NAN)),
                Err(e) => Err(at(e, x, y, &c.name)),
            })
            .collect();
        let mut s = WintgenSummary {
            chart: c.name.clone(),
            points: rows.len(),
            undefined: 0,
            min_residual: None,
            min_at: None,
            violations: 0,
        };
        for r in rows {
            let (x, y, w) = r?;
            let _ = writeln!(csv, "{},{},{},{}", c.name, format_float(x), format_float(y), format_float(w));
            if w.is_nan() {
                s.undefined += 1;
                continue;
            }
            if w < -1e-10 {
                s.violations += 1;
            }
            if s.min_residual.is_none_or(|m| w < m) {
                s.min_residual = Some(w);
                s.min_at = Some((x, y));
            }
        }
        notes.push(format!(
            "chart {}: min residual {}",
            c.name,
            s.min_residual.map(format_float).unwrap_or_else(|| "undefined".into())
        ));
        if s.violations > 0 {
            notes.push(format!("chart {}: {} points violate the inequality", c.name, s.violations));
        }
        charts.push(s);
    }
    Ok(Products {
        files: vec![
            (format!("{}.csv", task.name), csv),
            (format!("{}_summary.json", task.name), to_json(&ChartList { charts })),
        ],
        notes,
    })
}
