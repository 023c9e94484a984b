//! The isoclinic field 𝔥, the mean directional field 𝔖, winding indices and
//! global index bookkeeping.

use rayon::prelude::*;
use serde::Serialize;

use crate::bde::{BdeCoeffs, BdeForm};
use crate::error::{Error, Result};
use crate::geometry::{classify_point, fundamental_forms, null_directions, point_geometry, wintgen, Directions};
use crate::jets::{Domain, SurfaceChart};
use crate::numerics::{levenberg_marquardt, wrap_half_pi, wrap_pi};

/// Tangent representative `(a + c, e + g)` of the isoclinic direction.
pub fn isoclinic_vector(chart: &SurfaceChart, x: f64, y: f64) -> Result<(f64, f64)> {
    let fc = fundamental_forms(chart, x, y)?;
    Ok((fc.a + fc.c, fc.e + fc.g))
}

/// The mean directional equation at a point in its several forms.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct MeanBde {
    /// `(A, B, C)` of `A dx² + 2B dxdy + C dy²` with the metric-weighted coefficients.
    pub general: [f64; 3],
    /// `EC − (2FB − GA)`, which vanishes identically.
    pub redundancy_residual: f64,
    /// `−M dx² + 2(H_φ − H_ψ) dxdy + M dy²` in chart coordinates.
    pub chart_form: BdeCoeffs,
    /// `A′ dx² + 2B′ dxdy − A′ dy²` in the orthonormal tangent frame with
    /// `A′ = H₂a − H₁e`, `B′ = H₂b − H₁f`.
    pub frame_form: BdeCoeffs,
}

pub fn mean_bde(chart: &SurfaceChart, x: f64, y: f64) -> Result<MeanBde> {
    let pg = point_geometry(chart, x, y)?;
    let fc = pg.frame;
    let (a, b, c, e, f, g) = (fc.a, fc.b, fc.c, fc.e, fc.f, fc.g);
    let (ee, ff, gg) = (fc.e_cap, fc.f_cap, fc.g_cap);
    let ca = (a * g - c * e) * ee + 2.0 * (b * e - a * f) * ff;
    let cb = (b * g - c * f) * ee + (b * e - a * f) * gg;
    let cc = 2.0 * (b * g - c * f) * ff + (c * e - a * g) * gg;
    let sv = pg.second;
    let m = sv.m();
    let (h1, h2) = fc.mean();
    let ap = h2 * a - h1 * e;
    let bp = h2 * b - h1 * f;
    Ok(MeanBde {
        general: [ca, cb, cc],
        redundancy_residual: ee * cc - (2.0 * ff * cb - gg * ca),
        chart_form: BdeCoeffs {
            a: -m,
            b: 2.0 * (sv.h_phi() - sv.h_psi()),
            c: m,
            form: BdeForm::Mean,
        },
        frame_form: BdeCoeffs {
            a: ap,
            b: 2.0 * bp,
            c: -ap,
            form: BdeForm::Mean,
        },
    })
}

/// `‖H‖² − K − |κ|`, non-negative on every surface.
pub fn wintgen_residual(chart: &SurfaceChart, x: f64, y: f64) -> Result<f64> {
    Ok(wintgen(&fundamental_forms(chart, x, y)?))
}

/// A rounded winding index.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IndexValue {
    /// Nearest half-integer.
    pub index: f64,
    /// Pre-rounding value.
    pub raw: f64,
    pub residual: f64,
}

impl IndexValue {
    fn from_raw(raw: f64) -> Result<IndexValue> {
        let index = (2.0 * raw).round() / 2.0;
        let residual = (raw - index).abs();
        if residual > 0.05 {
            return Err(Error::AmbiguousIndex { raw, residual });
        }
        Ok(IndexValue { index, raw, residual })
    }
}

/// Default sample count for index loops.
pub const DEFAULT_SAMPLES: usize = 720;
const MAX_DEPTH: usize = 10;

fn loop_point(center: (f64, f64), radius: f64, t: f64) -> (f64, f64) {
    (center.0 + radius * t.cos(), center.1 + radius * t.sin())
}

/// Angle increment between parameters `t0` and `t1`, subdividing while the
/// sampled change exceeds `max_jump`.
fn increment<F>(angle: &F, t0: f64, a0: f64, t1: f64, a1: f64, max_jump: f64, wrap: fn(f64) -> f64, depth: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let d = wrap(a1 - a0);
    if d.abs() <= max_jump || depth >= MAX_DEPTH {
        return Ok(d);
    }
    let tm = 0.5 * (t0 + t1);
    let am = angle(tm)?;
    Ok(increment(angle, t0, a0, tm, am, max_jump, wrap, depth + 1)?
        + increment(angle, tm, am, t1, a1, max_jump, wrap, depth + 1)?)
}

/// Winding index of a planar vector field around a circle.
pub fn vector_index<F>(field: F, center: (f64, f64), radius: f64, n_samples: usize) -> Result<IndexValue>
where
    F: Fn(f64, f64) -> Result<(f64, f64)>,
{
    let angle = |t: f64| -> Result<f64> {
        let (x, y) = loop_point(center, radius, t);
        let (u, v) = field(x, y)?;
        if !(u.hypot(v) > 1e-10) {
            return Err(Error::SingularOnLoop { x, y });
        }
        Ok(v.atan2(u))
    };
    let n = n_samples.max(8);
    let step = std::f64::consts::TAU / n as f64;
    let mut total = 0.0;
    let mut a0 = angle(0.0)?;
    for k in 0..n {
        let (t0, t1) = (k as f64 * step, (k + 1) as f64 * step);
        let a1 = angle(t1)?;
        total += increment(&angle, t0, a0, t1, a1, 0.5, wrap_pi, 0)?;
        a0 = a1;
    }
    IndexValue::from_raw(total / std::f64::consts::TAU)
}

/// Root directions (angles mod π) of `a dx² + b dxdy + c dy²`.
fn root_angles(c: &BdeCoeffs) -> Option<[f64; 2]> {
    match null_directions(c.a, c.b, c.c, 1e-12) {
        Directions::Two(d1, d2) => Some([d1[1].atan2(d1[0]), d2[1].atan2(d2[0])]),
        _ => None,
    }
}

/// Index of a direction field given as the roots of a quadratic differential form.
///
/// One root is followed continuously around the loop; if the roots trade places the loop is
/// traversed twice and the total halved.
pub fn line_index<F>(form: F, center: (f64, f64), radius: f64, n_samples: usize) -> Result<IndexValue>
where
    F: Fn(f64, f64) -> Result<BdeCoeffs>,
{
    let roots = |t: f64| -> Result<[f64; 2]> {
        let (x, y) = loop_point(center, radius, t);
        let c = form(x, y)?;
        root_angles(&c).ok_or(Error::SingularOnLoop { x, y })
    };
    let n = n_samples.max(8);
    let step = std::f64::consts::TAU / n as f64;
    let start = roots(0.0)?[0];
    let mut current = start;
    let mut total = 0.0;
    for lap in 1..=2 {
        for k in 0..n {
            let t1 = (k + 1) as f64 * step;
            let (t0, a0) = (k as f64 * step, current);
            // Track by picking, at each parameter, the root nearest the previous one.
            let follow = |t: f64, prev: f64| -> Result<f64> {
                let r = roots(t)?;
                let d0 = wrap_half_pi(r[0] - prev).abs();
                let d1 = wrap_half_pi(r[1] - prev).abs();
                Ok(if d0 <= d1 { r[0] } else { r[1] })
            };
            let a1 = follow(t1, a0)?;
            let mut d = wrap_half_pi(a1 - a0);
            if d.abs() > 0.25 {
                // Refine this interval with finer tracking.
                let m = 64;
                let mut prev = a0;
                d = 0.0;
                for s in 1..=m {
                    let t = t0 + (t1 - t0) * s as f64 / m as f64;
                    let a = follow(t, prev)?;
                    d += wrap_half_pi(a - prev);
                    prev = a;
                }
            }
            total += d;
            current = a0 + d;
        }
        // Same root as the start (mod π) closes the loop.
        if wrap_half_pi(current - start).abs() < 0.1 {
            let raw = total / std::f64::consts::TAU / lap as f64;
            return IndexValue::from_raw(raw);
        }
    }
    let raw = total / std::f64::consts::TAU / 2.0;
    IndexValue::from_raw(raw)
}

/// Index of 𝔥 at a point.
pub fn isoclinic_index(chart: &SurfaceChart, center: (f64, f64), radius: f64) -> Result<IndexValue> {
    vector_index(|x, y| isoclinic_vector(chart, x, y), center, radius, DEFAULT_SAMPLES)
}

/// Index of 𝔖 at a point.
pub fn mean_index(chart: &SurfaceChart, center: (f64, f64), radius: f64) -> Result<IndexValue> {
    line_index(|x, y| Ok(mean_bde(chart, x, y)?.frame_form), center, radius, DEFAULT_SAMPLES)
}

/// Default winding radius for a singular point, given the distance to its nearest neighbour.
pub fn winding_radius(center: (f64, f64), nearest: Option<(f64, f64)>) -> Result<f64> {
    const DEFAULT: f64 = 0.05;
    const MIN: f64 = 1e-3;
    let Some(q) = nearest else {
        return Ok(DEFAULT);
    };
    let half = 0.5 * (center.0 - q.0).hypot(center.1 - q.1);
    let r = DEFAULT.min(half);
    if r < MIN {
        return Err(Error::OverlappingSingularities {
            x1: center.0,
            y1: center.1,
            x2: q.0,
            y2: q.1,
            radius: MIN,
        });
    }
    Ok(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct Umbilic {
    pub x: f64,
    pub y: f64,
    pub residual: f64,
    pub k: f64,
    pub kappa: f64,
    /// `K = κ ≤ 0` within tolerance.
    pub curvature_check: bool,
    /// The whole second fundamental form vanishes.
    pub flat: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateFailure {
    pub x: f64,
    pub y: f64,
    pub residual: f64,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct UmbilicSearch {
    pub points: Vec<Umbilic>,
    pub failures: Vec<CandidateFailure>,
    /// The isoclinic vector vanishes on the whole grid.
    pub degenerate: bool,
}

/// Zeros of `(a + c, e + g)` in a region.
pub fn find_umbilics(chart: &SurfaceChart, region: Domain, resolution: usize) -> Result<UmbilicSearch> {
    let n = resolution.max(2) + 1;
    let hx = region.width() / (n - 1) as f64;
    let hy = region.height() / (n - 1) as f64;
    let node = |i: usize, j: usize| (region.x.0 + i as f64 * hx, region.y.0 + j as f64 * hy);
    let values: Vec<Option<(f64, f64)>> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (x, y) = node(k % n, k / n);
            match isoclinic_vector(chart, x, y) {
                Ok(v) => Ok(Some(v)),
                Err(Error::Eval(_)) | Err(Error::DegenerateMetric { .. }) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mags: Vec<f64> = values.iter().flatten().map(|(u, v)| u.hypot(*v)).collect();
    let scale = mags.iter().fold(0.0_f64, |m, v| m.max(*v));
    if scale <= 1e-14 {
        return Ok(UmbilicSearch {
            points: Vec::new(),
            failures: Vec::new(),
            degenerate: true,
        });
    }
    let val = |i: usize, j: usize| values[j * n + i];
    // Candidate cells: nonzero winding of the corner vectors, or a near-zero corner.
    let mut seeds: Vec<(f64, f64)> = Vec::new();
    for j in 0..n - 1 {
        for i in 0..n - 1 {
            let corners = [val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1)];
            let Some(c) = corners.iter().copied().collect::<Option<Vec<_>>>() else {
                continue;
            };
            let mut w = 0.0;
            for k in 0..4 {
                let (u0, v0) = c[k];
                let (u1, v1) = c[(k + 1) % 4];
                w += wrap_pi(v1.atan2(u1) - v0.atan2(u0));
            }
            let small = c.iter().any(|(u, v)| u.hypot(*v) <= 1e-6 * scale);
            if w.abs() > 1.0 || small {
                let (x, y) = node(i, j);
                seeds.push((x + 0.5 * hx, y + 0.5 * hy));
            }
        }
    }
    let results: Vec<Result<(f64, f64, f64)>> = seeds
        .par_iter()
        .map(|&s| {
            let h = 1e-6 * (1.0 + s.0.abs().max(s.1.abs()));
            let sol = levenberg_marquardt(
                |x, y| {
                    let (u, v) = isoclinic_vector(chart, x, y)?;
                    let (ux, vx) = isoclinic_vector(chart, x + h, y)?;
                    let (ux2, vx2) = isoclinic_vector(chart, x - h, y)?;
                    let (uy, vy) = isoclinic_vector(chart, x, y + h)?;
                    let (uy2, vy2) = isoclinic_vector(chart, x, y - h)?;
                    Ok((
                        vec![u, v],
                        vec![
                            [(ux - ux2) / (2.0 * h), (uy - uy2) / (2.0 * h)],
                            [(vx - vx2) / (2.0 * h), (vy - vy2) / (2.0 * h)],
                        ],
                    ))
                },
                s,
                50,
                1e-13,
            )?;
            Ok((sol.x, sol.y, sol.residual))
        })
        .collect();
    let mut points: Vec<Umbilic> = Vec::new();
    let mut failures = Vec::new();
    for (seed, r) in seeds.iter().zip(results) {
        let (x, y, res) = match r {
            Ok(v) => v,
            Err(Error::Eval(_)) | Err(Error::DegenerateMetric { .. }) => {
                failures.push(CandidateFailure {
                    x: seed.0,
                    y: seed.1,
                    residual: f64::NAN,
                    reason: "evaluation failed".into(),
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        if res > 1e-12 || !region.contains(x, y) {
            if res > 1e-12 && region.contains(x, y) {
                failures.push(CandidateFailure {
                    x: seed.0,
                    y: seed.1,
                    residual: res,
                    reason: "did not converge".into(),
                });
            }
            continue;
        }
        if points.iter().any(|p| (p.x - x).hypot(p.y - y) < 1e-6) {
            continue;
        }
        let pg = point_geometry(chart, x, y)?;
        let cd = pg.curvatures();
        let s = pg.frame.scale().max(1.0);
        let tol = 1e-8 * s * s;
        let class = classify_point(&cd, &pg.frame, None);
        points.push(Umbilic {
            x,
            y,
            residual: res,
            k: cd.k,
            kappa: cd.kappa,
            curvature_check: (cd.k - cd.kappa).abs() <= tol && cd.k <= tol,
            flat: class.degenerate,
        });
    }
    points.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap().then(a.y.partial_cmp(&b.y).unwrap()));
    // Non-convergent seeds near an accepted point are duplicates, not failures.
    failures.retain(|f| !points.iter().any(|p| (p.x - f.x).hypot(p.y - f.y) < 2.0 * hx.max(hy)));
    Ok(UmbilicSearch {
        points,
        failures,
        degenerate: false,
    })
}

/// One chart of an atlas.
#[derive(Clone, Debug)]
pub struct AtlasChart {
    pub name: String,
    pub chart: SurfaceChart,
    /// Part of the chart domain searched for singular points.
    pub region: Domain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingularKind {
    Umbilic,
    Inflection,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularPoint {
    pub kind: SingularKind,
    pub chart: String,
    pub x: f64,
    pub y: f64,
    /// Image in R⁴, used to identify points seen by several charts.
    pub position: [f64; 4],
    pub radius: f64,
    /// Index of 𝔥 (umbilics only).
    pub index_h: Option<IndexValue>,
    /// Index of 𝔖.
    pub index_s: Option<IndexValue>,
    pub flat: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Relation {
    pub name: String,
    pub value: f64,
    pub target: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexReport {
    pub chi: i64,
    pub singular_points: Vec<SingularPoint>,
    pub sum_index_h: f64,
    pub sum_umbilic_index_s: f64,
    pub sum_inflection_index_s: f64,
    pub umbilic_count: usize,
    pub inflection_count: usize,
    /// `#umbilics = χ + 2n`.
    pub umbilic_parity_n: Option<i64>,
    /// `#inflections = 3χ + 2m`.
    pub inflection_parity_m: Option<i64>,
    pub relations: Vec<Relation>,
    /// Relations are asserted only when no genericity diagnostic was raised.
    pub generic: bool,
    pub diagnostics: Vec<String>,
}

/// Orthogonal projector onto the tangent plane in R⁴.
fn tangent_projector(chart: &SurfaceChart, x: f64, y: f64) -> Result<[[f64; 4]; 4]> {
    let emb = chart.embedding_jets(x, y, 1)?;
    let t1: [f64; 4] = std::array::from_fn(|k| emb[k].get(1, 0));
    let t2: [f64; 4] = std::array::from_fn(|k| emb[k].get(0, 1));
    let dot = |a: &[f64; 4], b: &[f64; 4]| (0..4).map(|k| a[k] * b[k]).sum::<f64>();
    let n1 = dot(&t1, &t1).sqrt();
    let e1 = t1.map(|v| v / n1);
    let d = dot(&t2, &e1);
    let mut e2: [f64; 4] = std::array::from_fn(|k| t2[k] - d * e1[k]);
    let n2 = dot(&e2, &e2).sqrt();
    if !(n1 * n2 > 1e-12) {
        return Err(Error::DegenerateMetric { w: n1 * n2, x, y });
    }
    e2 = e2.map(|v| v / n2);
    Ok(std::array::from_fn(|i| std::array::from_fn(|j| e1[i] * e1[j] + e2[i] * e2[j])))
}

fn parity(count: usize, base: i64) -> Option<i64> {
    let d = count as i64 - base;
    (d >= 0 && d % 2 == 0).then_some(d / 2)
}

/// Detect singular points on every chart, compute their indices, and check the global relations.
pub fn global_index_report(atlas: &[AtlasChart], chi: i64, resolution: usize) -> Result<IndexReport> {
    let mut diagnostics = Vec::new();
    let mut raw: Vec<(SingularKind, &AtlasChart, f64, f64, bool)> = Vec::new();
    for ac in atlas {
        let um = find_umbilics(&ac.chart, ac.region, resolution)?;
        if um.degenerate {
            diagnostics.push(format!("chart {}: isoclinic field vanishes identically", ac.name));
        }
        for f in &um.failures {
            diagnostics.push(format!(
                "chart {}: umbilic candidate near ({:.6}, {:.6}) {}",
                ac.name, f.x, f.y, f.reason
            ));
        }
        for p in &um.points {
            raw.push((SingularKind::Umbilic, ac, p.x, p.y, p.flat));
            if !p.curvature_check {
                diagnostics.push(format!(
                    "chart {}: umbilic at ({:.6}, {:.6}) violates K = κ ≤ 0",
                    ac.name, p.x, p.y
                ));
            }
        }
        let inf = crate::inflection::find_inflections(&ac.chart, ac.region, resolution)?;
        if inf.degenerate {
            diagnostics.push(format!("chart {}: second fundamental form has rank ≤ 1 on the whole grid", ac.name));
        }
        for f in &inf.failures {
            diagnostics.push(format!(
                "chart {}: inflection candidate near ({:.6}, {:.6}) {}",
                ac.name, f.x, f.y, f.reason
            ));
        }
        for p in &inf.points {
            // A point where the whole second fundamental form vanishes is both an umbilic and an inflection.
            if raw.iter().any(|(_, c, x, y, _)| c.name == ac.name && (x - p.x).hypot(y - p.y) < 1e-6) {
                continue;
            }
            raw.push((SingularKind::Inflection, ac, p.x, p.y, p.rank == 0));
        }
    }
    // Identify points seen from several charts through their image in R⁴.
    // Double points share an image but not a tangent plane.
    let mut points: Vec<SingularPoint> = Vec::new();
    let mut planes: Vec<[[f64; 4]; 4]> = Vec::new();
    for (kind, ac, x, y, flat) in &raw {
        let position = ac.chart.point(*x, *y)?;
        let plane = tangent_projector(&ac.chart, *x, *y)?;
        let dup = points.iter().zip(planes.iter()).any(|(p, q)| {
            let dp = p.position.iter().zip(position.iter()).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
            let dq = (0..16).map(|k| (q[k / 4][k % 4] - plane[k / 4][k % 4]).powi(2)).sum::<f64>();
            dp.sqrt() < 1e-6 && dq.sqrt() < 1e-6
        });
        if dup {
            continue;
        }
        planes.push(plane);
        points.push(SingularPoint {
            kind: *kind,
            chart: ac.name.clone(),
            x: *x,
            y: *y,
            position,
            radius: 0.0,
            index_h: None,
            index_s: None,
            flat: *flat,
        });
    }
    let snapshot: Vec<(String, f64, f64)> = points.iter().map(|p| (p.chart.clone(), p.x, p.y)).collect();
    for p in points.iter_mut() {
        let ac = atlas.iter().find(|a| a.name == p.chart).expect("chart exists");
        let nearest = snapshot
            .iter()
            .filter(|(c, x, y)| *c == p.chart && (*x, *y) != (p.x, p.y))
            .map(|(_, x, y)| (*x, *y))
            .min_by(|a, b| {
                let da = (a.0 - p.x).hypot(a.1 - p.y);
                let db = (b.0 - p.x).hypot(b.1 - p.y);
                da.partial_cmp(&db).unwrap()
            });
        let r = winding_radius((p.x, p.y), nearest)?;
        p.radius = r;
        let loop_inside = ac.chart.domain.contains(p.x - r, p.y - r) && ac.chart.domain.contains(p.x + r, p.y + r);
        if !loop_inside {
            diagnostics.push(format!(
                "chart {}: loop around ({:.6}, {:.6}) leaves the chart",
                p.chart, p.x, p.y
            ));
            continue;
        }
        let label = match p.kind {
            SingularKind::Umbilic => "umbilic",
            SingularKind::Inflection => "inflection",
        };
        if p.kind == SingularKind::Umbilic {
            match isoclinic_index(&ac.chart, (p.x, p.y), r) {
                Ok(v) => {
                    if v.index.abs() != 1.0 {
                        diagnostics.push(format!(
                            "chart {}: {label} at ({:.6}, {:.6}) has non-generic ind 𝔥 = {}",
                            p.chart, p.x, p.y, v.index
                        ));
                    }
                    p.index_h = Some(v);
                }
                Err(e) => diagnostics.push(format!("chart {}: ind 𝔥 at ({:.6}, {:.6}): {e}", p.chart, p.x, p.y)),
            }
        }
        match mean_index(&ac.chart, (p.x, p.y), r) {
            Ok(v) => {
                if v.index.abs() != 0.5 {
                    diagnostics.push(format!(
                        "chart {}: {label} at ({:.6}, {:.6}) has non-generic ind 𝔖 = {}",
                        p.chart, p.x, p.y, v.index
                    ));
                }
                p.index_s = Some(v);
            }
            Err(e) => diagnostics.push(format!("chart {}: ind 𝔖 at ({:.6}, {:.6}): {e}", p.chart, p.x, p.y)),
        }
        if p.flat {
            diagnostics.push(format!(
                "chart {}: {label} at ({:.6}, {:.6}) has vanishing second fundamental form",
                p.chart, p.x, p.y
            ));
        }
    }
    let umb: Vec<&SingularPoint> = points.iter().filter(|p| p.kind == SingularKind::Umbilic).collect();
    let inf: Vec<&SingularPoint> = points.iter().filter(|p| p.kind == SingularKind::Inflection).collect();
    let sum = |v: &[&SingularPoint], f: fn(&SingularPoint) -> Option<IndexValue>| -> f64 {
        v.iter().filter_map(|p| f(p)).map(|i| i.index).sum()
    };
    let sum_h = sum(&umb, |p| p.index_h);
    let sum_us = sum(&umb, |p| p.index_s);
    let sum_is = sum(&inf, |p| p.index_s);
    let chi_f = chi as f64;
    let mut relations = vec![
        Relation {
            name: "sum ind h over umbilics = chi".into(),
            value: sum_h,
            target: chi_f,
            pass: (sum_h - chi_f).abs() <= 0.05,
        },
        Relation {
            name: "sum ind S over inflections = 3 chi / 2".into(),
            value: sum_is,
            target: 1.5 * chi_f,
            pass: (sum_is - 1.5 * chi_f).abs() <= 0.05,
        },
    ];
    let ratio_ok = umb.iter().all(|p| match (p.index_h, p.index_s) {
        (Some(h), Some(s)) => (s.index + 0.5 * h.index).abs() <= 0.05,
        _ => false,
    });
    relations.push(Relation {
        name: "ind S = -ind h / 2 at umbilics".into(),
        value: sum_us,
        target: -0.5 * sum_h,
        pass: ratio_ok,
    });
    let total_s = sum_us + sum_is;
    relations.push(Relation {
        name: "sum ind S over all singular points = chi".into(),
        value: total_s,
        target: chi_f,
        pass: (total_s - chi_f).abs() <= 0.05,
    });
    Ok(IndexReport {
        chi,
        sum_index_h: sum_h,
        sum_umbilic_index_s: sum_us,
        sum_inflection_index_s: sum_is,
        umbilic_count: umb.len(),
        inflection_count: inf.len(),
        umbilic_parity_n: parity(umb.len(), chi),
        inflection_parity_m: parity(inf.len(), 3 * chi),
        relations,
        generic: diagnostics.is_empty(),
        diagnostics,
        singular_points: points,
    })
}
