use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::BdeJets;
use crate::error::{Error, Result};
use crate::jets::{Domain, Jet, SurfaceChart};
use crate::numerics::levenberg_marquardt;

/// Jet of `M² − 4NL` of the given order (at most 3 on generating-function charts).
pub fn discriminant_jet(chart: &SurfaceChart, x: f64, y: f64, order: usize) -> Result<Jet> {
    let j = BdeJets::at(chart, x, y, order)?;
    Ok(j.b * j.b - j.a * j.c * 4.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurveSingularity {
    pub x: f64,
    pub y: f64,
    /// `|D|` at the point.
    pub value: f64,
    /// `|∇D|` at the point.
    pub gradient: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscriminantTrace {
    pub region: Domain,
    pub resolution: usize,
    pub polylines: Vec<Vec<(f64, f64)>>,
    pub singular_points: Vec<CurveSingularity>,
    /// The discriminant vanishes on the whole grid.
    pub degenerate: bool,
    /// Largest `|D|` over refined crossing points.
    pub max_residual: f64,
}

const REFINE_TOL: f64 = 1e-10;

fn eval_or_nan(chart: &SurfaceChart, x: f64, y: f64) -> Result<f64> {
    match discriminant_jet(chart, x, y, 0) {
        Ok(j) => Ok(j.value()),
        Err(Error::Eval(_)) => Ok(f64::NAN),
        Err(e) => Err(e),
    }
}

/// Safeguarded Newton on `t ↦ D(p0 + t(p1 − p0))` over a sign-changing bracket.
fn refine_edge(chart: &SurfaceChart, p0: (f64, f64), p1: (f64, f64), v0: f64, v1: f64) -> Result<((f64, f64), f64)> {
    let d = (p1.0 - p0.0, p1.1 - p0.1);
    let at = |t: f64| (p0.0 + t * d.0, p0.1 + t * d.1);
    if v0 == 0.0 {
        return Ok((p0, 0.0));
    }
    if v1 == 0.0 {
        return Ok((p1, 0.0));
    }
    let (mut lo, mut hi, mut flo) = (0.0_f64, 1.0_f64, v0);
    let mut t = v0 / (v0 - v1);
    let mut best = (t, f64::INFINITY);
    for _ in 0..100 {
        let (x, y) = at(t);
        let j = discriminant_jet(chart, x, y, 1)?;
        let f = j.value();
        if f.abs() < best.1 {
            best = (t, f.abs());
        }
        if f.abs() < REFINE_TOL || hi - lo < 1e-15 {
            break;
        }
        if (f > 0.0) == (flo > 0.0) {
            lo = t;
            flo = f;
        } else {
            hi = t;
        }
        let df = j.get(1, 0) * d.0 + j.get(0, 1) * d.1;
        let newton = t - f / df;
        t = if df != 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
    }
    Ok((at(best.0), best.1))
}

/// Zero-level curves of the discriminant by marching squares on a
/// `resolution × resolution` cell grid.
pub fn trace_discriminant(chart: &SurfaceChart, region: Domain, resolution: usize) -> Result<DiscriminantTrace> {
    let res = resolution.max(2);
    let n = res + 1;
    let hx = region.width() / res as f64;
    let hy = region.height() / res as f64;
    let node = |i: usize, j: usize| (region.x.0 + i as f64 * hx, region.y.0 + j as f64 * hy);
    let values: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (x, y) = node(k % n, k / n);
            eval_or_nan(chart, x, y)
        })
        .collect::<Result<Vec<f64>>>()?;
    let val = |i: usize, j: usize| values[j * n + i];
    let empty = DiscriminantTrace {
        region,
        resolution: res,
        polylines: Vec::new(),
        singular_points: Vec::new(),
        degenerate: false,
        max_residual: 0.0,
    };
    let finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    if finite.iter().all(|v| v.abs() <= 1e-14) {
        return Ok(DiscriminantTrace {
            degenerate: true,
            ..empty
        });
    }
    let pos = |v: f64| v >= 0.0;

    // Edge ids: horizontal (i, j)→(i+1, j) first, then vertical (i, j)→(i, j+1).
    let h_id = |i: usize, j: usize| j * (n - 1) + i;
    let v_id = |i: usize, j: usize| n * (n - 1) + j * n + i;
    let mut edges: Vec<(usize, (usize, usize), (usize, usize))> = Vec::new();
    for j in 0..n {
        for i in 0..n - 1 {
            let (a, b) = (val(i, j), val(i + 1, j));
            if a.is_finite() && b.is_finite() && pos(a) != pos(b) {
                edges.push((h_id(i, j), (i, j), (i + 1, j)));
            }
        }
    }
    for j in 0..n - 1 {
        for i in 0..n {
            let (a, b) = (val(i, j), val(i, j + 1));
            if a.is_finite() && b.is_finite() && pos(a) != pos(b) {
                edges.push((v_id(i, j), (i, j), (i, j + 1)));
            }
        }
    }
    let refined: Vec<(usize, (f64, f64), f64)> = edges
        .par_iter()
        .map(|&(id, a, b)| {
            let (p, r) = refine_edge(chart, node(a.0, a.1), node(b.0, b.1), val(a.0, a.1), val(b.0, b.1))?;
            Ok((id, p, r))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut points: HashMap<usize, (f64, f64)> = HashMap::with_capacity(refined.len());
    let mut max_residual: f64 = 0.0;
    for (id, p, r) in &refined {
        points.insert(*id, *p);
        max_residual = max_residual.max(*r);
    }

    // Cell segments.
    let mut segments: Vec<(usize, usize)> = Vec::new();
    for j in 0..n - 1 {
        for i in 0..n - 1 {
            let c = [val(i, j), val(i + 1, j), val(i + 1, j + 1), val(i, j + 1)];
            if c.iter().any(|v| !v.is_finite()) {
                continue;
            }
            let b: Vec<bool> = c.iter().map(|v| pos(*v)).collect();
            // bottom, right, top, left
            let e = [h_id(i, j), v_id(i + 1, j), h_id(i, j + 1), v_id(i, j)];
            let crossing = [b[0] != b[1], b[1] != b[2], b[3] != b[2], b[0] != b[3]];
            let hits: Vec<usize> = (0..4).filter(|k| crossing[*k]).collect();
            match hits.len() {
                2 => segments.push((e[hits[0]], e[hits[1]])),
                4 => {
                    let (cx, cy) = (node(i, j).0 + 0.5 * hx, node(i, j).1 + 0.5 * hy);
                    let center = eval_or_nan(chart, cx, cy)?;
                    if pos(center) == b[0] {
                        // Corners 0 and 2 connect through the centre.
                        segments.push((e[0], e[1]));
                        segments.push((e[2], e[3]));
                    } else {
                        segments.push((e[3], e[0]));
                        segments.push((e[1], e[2]));
                    }
                }
                _ => {}
            }
        }
    }

    let polylines = link(&segments, &points);
    let singular_points = find_singular_points(chart, &region, hx.max(hy), &refined)?;
    Ok(DiscriminantTrace {
        polylines,
        singular_points,
        max_residual,
        ..empty
    })
}

fn link(segments: &[(usize, usize)], points: &HashMap<usize, (f64, f64)>) -> Vec<Vec<(f64, f64)>> {
    let mut by_edge: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, (a, b)) in segments.iter().enumerate() {
        by_edge.entry(*a).or_default().push(k);
        by_edge.entry(*b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let mut out = Vec::new();
    // Open chains start at edges touched once; remaining segments form loops.
    let mut starts: Vec<usize> = by_edge.iter().filter(|(_, v)| v.len() == 1).map(|(e, _)| *e).collect();
    starts.sort_unstable();
    let mut all: Vec<usize> = (0..segments.len()).map(|k| segments[k].0).collect();
    starts.append(&mut all);
    for start in starts {
        let Some(first) = by_edge[&start].iter().copied().find(|k| !used[*k]) else {
            continue;
        };
        let mut chain = vec![start];
        let mut seg = first;
        let mut edge = start;
        loop {
            used[seg] = true;
            let (a, b) = segments[seg];
            edge = if a == edge { b } else { a };
            chain.push(edge);
            match by_edge[&edge].iter().copied().find(|k| !used[*k]) {
                Some(s) => seg = s,
                None => break,
            }
        }
        out.push(chain.iter().map(|e| points[e]).collect());
    }
    out
}

/// Points of the curve where the gradient of the discriminant also vanishes.
fn find_singular_points(
    chart: &SurfaceChart,
    region: &Domain,
    h: f64,
    crossings: &[(usize, (f64, f64), f64)],
) -> Result<Vec<CurveSingularity>> {
    let grads: Vec<f64> = crossings
        .par_iter()
        .map(|(_, (x, y), _)| {
            let j = discriminant_jet(chart, *x, *y, 1)?;
            Ok(j.get(1, 0).hypot(j.get(0, 1)))
        })
        .collect::<Result<Vec<f64>>>()?;
    let g_scale = grads.iter().fold(0.0_f64, |m, v| m.max(*v));
    if g_scale == 0.0 {
        return Ok(Vec::new());
    }
    // Candidates: crossings whose gradient is small and locally minimal.
    let mut cand: Vec<(f64, (f64, f64))> = crossings
        .iter()
        .zip(&grads)
        .filter(|(_, g)| **g < 0.05 * g_scale)
        .map(|((_, p, _), g)| (*g, *p))
        .collect();
    cand.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1 .0.partial_cmp(&b.1 .0).unwrap()));
    let mut found: Vec<CurveSingularity> = Vec::new();
    let mut tried: Vec<(f64, f64)> = Vec::new();
    for (_, p) in cand {
        if tried.iter().any(|q| (q.0 - p.0).hypot(q.1 - p.1) < 4.0 * h) {
            continue;
        }
        tried.push(p);
        if let Some(s) = solve_singular(chart, p, g_scale)? {
            if region.contains(s.x, s.y) && !found.iter().any(|q| (q.x - s.x).hypot(q.y - s.y) < 2.0 * h) {
                found.push(s);
            }
        }
    }
    found.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap().then(a.y.partial_cmp(&b.y).unwrap()));
    Ok(found)
}

fn solve_singular(chart: &SurfaceChart, start: (f64, f64), g_scale: f64) -> Result<Option<CurveSingularity>> {
    let check = |x: f64, y: f64| -> Result<Option<CurveSingularity>> {
        let j = discriminant_jet(chart, x, y, 1)?;
        let g = j.get(1, 0).hypot(j.get(0, 1));
        if j.value().abs() <= REFINE_TOL && g <= 1e-5 * g_scale {
            Ok(Some(CurveSingularity {
                x,
                y,
                value: j.value().abs(),
                gradient: g,
            }))
        } else {
            Ok(None)
        }
    };
    // Points where the whole equation vanishes are singular; that system is well conditioned.
    let nml = levenberg_marquardt(
        |x, y| {
            let j = BdeJets::at(chart, x, y, 1)?;
            let r = vec![j.a.value(), j.b.value(), j.c.value()];
            let jac = vec![
                [j.a.get(1, 0), j.a.get(0, 1)],
                [j.b.get(1, 0), j.b.get(0, 1)],
                [j.c.get(1, 0), j.c.get(0, 1)],
            ];
            Ok((r, jac))
        },
        start,
        50,
        1e-14,
    );
    if let Ok(s) = nml {
        if let Some(found) = check(s.x, s.y)? {
            return Ok(Some(found));
        }
    }
    let grad = levenberg_marquardt(
        |x, y| {
            let j = discriminant_jet(chart, x, y, 2)?;
            let r = vec![j.value(), j.get(1, 0), j.get(0, 1)];
            let jac = vec![
                [j.get(1, 0), j.get(0, 1)],
                [j.get(2, 0), j.get(1, 1)],
                [j.get(1, 1), j.get(0, 2)],
            ];
            Ok((r, jac))
        },
        start,
        200,
        1e-16,
    );
    match grad {
        Ok(s) => check(s.x, s.y),
        Err(Error::Eval(_)) => Ok(None),
        Err(e) => Err(e),
    }
}
