//! Inflection points: location, the (η, ζ₁..ζ₅) normal form, the slope cubic
//! Π and its critical points, the equation-surface Hessian, the 1-jet reduction
//! and the discriminant cusp.
//!
//! Normal-form convention: after a unitary change of coordinates the surface is
//! the graph of `(φ, ψ) = (F_x, F_y)` with
//! `F = η/6 x³ + ζ₁/24 x⁴ + ζ₂/6 x³y + ζ₃/4 x²y² + ζ₄/6 xy³ + ζ₅/24 y⁴ + O(5)`,
//! so `η = φ_xx`, `ζ₁ = φ_xxx`, `ζ₂ = φ_xxy`, `ζ₃ = φ_xyy`, `ζ₄ = φ_yyy`, `ζ₅ = ψ_yyy`.

mod frame;

pub use frame::{inflection_frame, FrameBranch, NormalFormJet};

use nalgebra::Matrix3;
use rayon::prelude::*;
use serde::Serialize;

use crate::bde::{count_separatrices, BdeJets, IntegrationOptions, LiftedPoint, SeparatrixCount, SlopeChart};
use crate::error::{Error, Result};
use crate::fields::{mean_index, CandidateFailure, IndexValue};
use crate::geometry::{classify_point, point_geometry, Region};
use crate::jets::{Domain, SurfaceChart};
use crate::numerics::{levenberg_marquardt, ProjRoot};

#[derive(Clone, Debug, Serialize)]
pub struct InflectionPoint {
    pub x: f64,
    pub y: f64,
    pub residual: f64,
    pub rank: usize,
    pub region: Region,
}

#[derive(Clone, Debug, Serialize)]
pub struct InflectionSearch {
    pub points: Vec<InflectionPoint>,
    pub failures: Vec<CandidateFailure>,
    /// The minors vanish on the whole grid.
    pub degenerate: bool,
}

fn nml(chart: &SurfaceChart, x: f64, y: f64) -> Result<f64> {
    let v = BdeJets::at(chart, x, y, 0)?.values();
    Ok((v.a * v.a + v.b * v.b + v.c * v.c).sqrt())
}

/// Points where the second fundamental form has rank ≤ 1.
///
/// Grid minima of the minor norm seed a damped Gauss–Newton solve on the three minors.
pub fn find_inflections(chart: &SurfaceChart, region: Domain, resolution: usize) -> Result<InflectionSearch> {
    let n = resolution.max(2) + 1;
    let hx = region.width() / (n - 1) as f64;
    let hy = region.height() / (n - 1) as f64;
    let node = |i: usize, j: usize| (region.x.0 + i as f64 * hx, region.y.0 + j as f64 * hy);
    let values: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (x, y) = node(k % n, k / n);
            match nml(chart, x, y) {
                Ok(v) => Ok(v),
                Err(Error::Eval(_)) => Ok(f64::NAN),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    let scale = values.iter().filter(|v| v.is_finite()).fold(0.0_f64, |m, v| m.max(*v));
    if scale <= 1e-14 {
        return Ok(InflectionSearch {
            points: Vec::new(),
            failures: Vec::new(),
            degenerate: true,
        });
    }
    let val = |i: isize, j: isize| -> f64 {
        if i < 0 || j < 0 || i >= n as isize || j >= n as isize {
            f64::INFINITY
        } else {
            let v = values[j as usize * n + i as usize];
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        }
    };
    let mut seeds = Vec::new();
    for j in 0..n as isize {
        for i in 0..n as isize {
            let v = val(i, j);
            if !v.is_finite() {
                continue;
            }
            let mut is_min = true;
            for dj in -1..=1 {
                for di in -1..=1 {
                    if (di, dj) != (0, 0) && val(i + di, j + dj) < v {
                        is_min = false;
                    }
                }
            }
            if is_min {
                seeds.push((node(i as usize, j as usize), v));
            }
        }
    }
    let solved: Vec<Result<(f64, f64, f64)>> = seeds
        .par_iter()
        .map(|&(s, _)| {
            let sol = levenberg_marquardt(
                |x, y| {
                    let j = BdeJets::at(chart, x, y, 1)?;
                    Ok((
                        vec![j.a.value(), j.b.value(), j.c.value()],
                        vec![
                            [j.a.get(1, 0), j.a.get(0, 1)],
                            [j.b.get(1, 0), j.b.get(0, 1)],
                            [j.c.get(1, 0), j.c.get(0, 1)],
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
    let mut points: Vec<InflectionPoint> = Vec::new();
    let mut failures = Vec::new();
    for ((seed, v0), r) in seeds.iter().zip(solved) {
        let (x, y, res) = match r {
            Ok(t) => t,
            Err(Error::Eval(_)) | Err(Error::DegenerateMetric { .. }) => continue,
            Err(e) => return Err(e),
        };
        if res > 1e-12 {
            // Only near-zero minima are worth reporting as failures.
            if *v0 < 1e-3 * scale {
                failures.push(CandidateFailure {
                    x: seed.0,
                    y: seed.1,
                    residual: res,
                    reason: "did not converge".into(),
                });
            }
            continue;
        }
        if !region.contains(x, y) || points.iter().any(|p| (p.x - x).hypot(p.y - y) < 1e-6) {
            continue;
        }
        let pg = point_geometry(chart, x, y)?;
        let class = classify_point(&pg.curvatures(), &pg.frame, None);
        points.push(InflectionPoint {
            x,
            y,
            residual: res,
            rank: class.rank,
            region: class.region,
        });
    }
    points.sort_by(|a, b| a.x.partial_cmp(&b.x).unwrap().then(a.y.partial_cmp(&b.y).unwrap()));
    failures.retain(|f| !points.iter().any(|p| (p.x - f.x).hypot(p.y - f.y) < 2.0 * hx.max(hy)));
    Ok(InflectionSearch {
        points,
        failures,
        degenerate: false,
    })
}

/// Nondegeneracy conditions of the normal form.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Genericity {
    pub eta: f64,
    pub zeta5: f64,
    /// `ζ₄² − ζ₃ζ₅`.
    pub invariant: f64,
    pub eta_ok: bool,
    pub zeta5_ok: bool,
    pub invariant_ok: bool,
    pub generic: bool,
}

pub fn genericity(nf: &NormalFormJet, tol: f64) -> Genericity {
    let s = nf.scale().max(f64::MIN_POSITIVE);
    let inv = nf.invariant();
    let eta_ok = nf.eta.abs() > tol * s;
    let zeta5_ok = nf.zeta[4].abs() > tol * s;
    let invariant_ok = inv.abs() > tol * s * s;
    Genericity {
        eta: nf.eta,
        zeta5: nf.zeta[4],
        invariant: inv,
        eta_ok,
        zeta5_ok,
        invariant_ok,
        generic: eta_ok && zeta5_ok && invariant_ok,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PiPolynomial {
    /// `(A, B, C, D)` of `Ap³ + Bp² + Cp + D` from the coefficient jets.
    pub general: [f64; 4],
    /// Coefficients of `η(ζ₅p² + 2ζ₄p + ζ₃)`, highest degree first.
    pub quadratic: [f64; 3],
    /// Real projective roots, finite ones ascending, then ∞.
    pub roots: Vec<ProjRoot>,
    pub count: usize,
    /// `ζ₅ ≈ 0` or a double finite root.
    pub degenerate: bool,
}

pub fn pi_polynomial(nf: &NormalFormJet, tol: f64) -> PiPolynomial {
    let j = nf.bde_jets(1);
    let general = [
        j.c.get(0, 1),
        j.c.get(1, 0) + j.b.get(0, 1),
        j.b.get(1, 0) + j.a.get(0, 1),
        j.a.get(1, 0),
    ];
    let [_, _, z3, z4, z5] = nf.zeta;
    let eta = nf.eta;
    let quadratic = [eta * z5, 2.0 * eta * z4, eta * z3];
    let s = nf.scale().max(f64::MIN_POSITIVE);
    let mut degenerate = z5.abs() <= tol * s;
    let mut roots = Vec::new();
    if !degenerate {
        let disc = z4 * z4 - z3 * z5;
        if disc.abs() <= tol * s * s {
            degenerate = true;
            roots.push(ProjRoot::Finite(-z4 / z5));
        } else if disc > 0.0 {
            let r = disc.sqrt();
            let q = -(z4 + z4.signum() * r);
            let q = if q == 0.0 { -r } else { q };
            let mut v = [q / z5, z3 / q];
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            roots.extend(v.iter().map(|p| ProjRoot::Finite(*p)));
        }
    }
    roots.push(ProjRoot::Infinity);
    PiPolynomial {
        general,
        quadratic,
        count: roots.len(),
        roots,
        degenerate,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalPoint {
    pub root: ProjRoot,
    pub chart: SlopeChart,
    pub slope: f64,
    /// `(μ₁, 0, μ₃)` from the closed forms.
    pub closed_form: [f64; 3],
    /// Eigenvalues of the assembled Jacobian, matched to `closed_form`.
    pub numeric: [f64; 3],
    pub simple: bool,
    /// `|μ₁ + 2μ₃| / |μ₃|` at finite points, `|μ₁ + μ₃| / |μ₃|` at ∞, from `numeric`.
    pub relation_residual: f64,
}

/// Critical points of the lifted field over the inflection, one per real root of Π.
pub fn lifted_critical_points(nf: &NormalFormJet, tol: f64) -> Vec<CriticalPoint> {
    let pi = pi_polynomial(nf, tol);
    let jets = nf.bde_jets(2);
    let [_, _, _, z4, z5] = nf.zeta;
    let eta = nf.eta;
    let s = nf.scale().max(f64::MIN_POSITIVE);
    pi.roots
        .iter()
        .map(|root| {
            let (state, closed, simple) = match *root {
                ProjRoot::Finite(p) => {
                    let mu3 = eta * (z4 + z5 * p);
                    (
                        LiftedPoint {
                            x: 0.0,
                            y: 0.0,
                            slope: p,
                            chart: SlopeChart::P,
                        },
                        [-2.0 * eta * (z5 * p + z4), 0.0, mu3],
                        (2.0 * mu3).abs() >= tol * s * s,
                    )
                }
                ProjRoot::Infinity => (
                    LiftedPoint {
                        x: 0.0,
                        y: 0.0,
                        slope: 0.0,
                        chart: SlopeChart::Q,
                    },
                    [-eta * z5, 0.0, eta * z5],
                    (eta * z5).abs() >= tol * s * s,
                ),
            };
            let jac = crate::bde::lifted_jacobian(&jets, &state);
            let numeric = match_eigenvalues(&jac, closed);
            let relation_residual = match root {
                ProjRoot::Finite(_) => (numeric[0] + 2.0 * numeric[2]).abs() / numeric[2].abs(),
                ProjRoot::Infinity => (numeric[0] + numeric[2]).abs() / numeric[2].abs(),
            };
            CriticalPoint {
                root: *root,
                chart: state.chart,
                slope: state.slope,
                closed_form: closed,
                numeric,
                simple,
                relation_residual,
            }
        })
        .collect()
}

/// Real parts of the eigenvalues of `m`, ordered to best match `target`.
fn match_eigenvalues(m: &Matrix3<f64>, target: [f64; 3]) -> [f64; 3] {
    let ev: Vec<f64> = m.complex_eigenvalues().iter().map(|z| z.re).collect();
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let mut best = [ev[0], ev[1], ev[2]];
    let mut err = f64::INFINITY;
    for p in perms {
        let cand = [ev[p[0]], ev[p[1]], ev[p[2]]];
        let e = (0..3).map(|k| (cand[k] - target[k]).abs()).fold(0.0, f64::max);
        if e < err {
            err = e;
            best = cand;
        }
    }
    best
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct HessianData {
    /// Hessian of `H_ψ` at the inflection.
    pub f2: [[f64; 2]; 2],
    /// `η(ζ₅, −ζ₄)`.
    pub frak_f: [f64; 2],
    /// `−Q₂(𝔣)`.
    pub h_f: f64,
    /// `2F̂_xyF̂_yqF̂_xq − F̂_xxF̂_yq² − F̂_yyF̂_xq²` from the coefficient jets.
    pub bordered: f64,
    pub morse: bool,
    /// The q-axis is an isotropic direction of the Hessian.
    pub cone: bool,
}

pub fn hessian_equation_surface(nf: &NormalFormJet, tol: f64) -> HessianData {
    let [_, z2, z3, z4, z5] = nf.zeta;
    let eta = nf.eta;
    let f2 = [
        [2.0 * (z2 * z4 - z3 * z3), z2 * z5 - z3 * z4],
        [z2 * z5 - z3 * z4, 2.0 * (z3 * z5 - z4 * z4)],
    ];
    let frak_f = [eta * z5, -eta * z4];
    let q2 = f2[0][0] * frak_f[0] * frak_f[0] + 2.0 * f2[0][1] * frak_f[0] * frak_f[1] + f2[1][1] * frak_f[1] * frak_f[1];
    let h_f = -q2;
    // On the q-chart F̂ = Nq² + Mq + L, so at q = 0 the x, y block is the Hessian of L
    // and the mixed terms are the gradient of M.
    let j = nf.bde_jets(2);
    let (fxx, fxy, fyy) = (j.c.get(2, 0), j.c.get(1, 1), j.c.get(0, 2));
    let (fxq, fyq) = (j.b.get(1, 0), j.b.get(0, 1));
    let bordered = 2.0 * fxy * fyq * fxq - fxx * fyq * fyq - fyy * fxq * fxq;
    let s = nf.scale().max(f64::MIN_POSITIVE);
    let morse = h_f.abs() > tol * s.powi(4);
    // F̂_qq = 2N vanishes at the inflection.
    let cone = morse && (2.0 * j.a.value()).abs() <= tol * s * s;
    HessianData {
        f2,
        frak_f,
        h_f,
        bordered,
        morse,
        cone,
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct OneJetReduction {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    /// `±1` in `Y dY² ± 2X dXdY`.
    pub sign: f64,
    /// Transformed 1-jet: rows dX², dXdY, dY²; columns the X and Y coefficients.
    pub coefficients: [[f64; 2]; 3],
    /// Largest deviation from the target pattern.
    pub residual: f64,
}

/// Linear change `dx = α dX + β dY`, `dy = γ dX + δ dY` taking the 1-jet of the
/// asymptotic equation to `Y dY² ± 2X dXdY`.
pub fn reduce_1jet(nf: &NormalFormJet, tol: f64) -> Result<OneJetReduction> {
    let g = genericity(nf, tol);
    if !g.generic {
        return Err(Error::Genericity(format!(
            "1-jet reduction needs η ≠ 0, ζ₅ ≠ 0, ζ₄² − ζ₃ζ₅ ≠ 0 (η = {}, ζ₅ = {}, ζ₄² − ζ₃ζ₅ = {})",
            g.eta, g.zeta5, g.invariant
        )));
    }
    let [_, _, z3, z4, z5] = nf.zeta;
    let w = z3 * z5 - z4 * z4;
    let alpha = 0.0;
    let beta = (z5 / w).abs().sqrt();
    let delta = -beta * z4 / z5;
    let gamma = (2.0 / z5.abs()).sqrt();
    let s1 = (w / z5).signum();
    let s2 = z5.signum();
    let sign = s1 * s2;
    // Linear parts of the coefficients, read off the jets.
    let j = nf.bde_jets(1);
    let lin = |jet: &crate::jets::Jet| [jet.get(1, 0), jet.get(0, 1)];
    let (p, q, r) = (lin(&j.a), lin(&j.b), lin(&j.c));
    // A linear function (u, v) in (x, y) becomes (uα + vγ, uβ + vδ) in (X, Y).
    let sub = |f: [f64; 2]| [f[0] * alpha + f[1] * gamma, f[0] * beta + f[1] * delta];
    let (p, q, r) = (sub(p), sub(q), sub(r));
    let comb = |cp: f64, cq: f64, cr: f64| [cp * p[0] + cq * q[0] + cr * r[0], cp * p[1] + cq * q[1] + cr * r[1]];
    let norm = nf.eta * beta * s1;
    let scale = |v: [f64; 2]| [v[0] / norm, v[1] / norm];
    let coefficients = [
        scale(comb(alpha * alpha, alpha * gamma, gamma * gamma)),
        scale(comb(2.0 * alpha * beta, alpha * delta + beta * gamma, 2.0 * gamma * delta)),
        scale(comb(beta * beta, beta * delta, delta * delta)),
    ];
    let target = [[0.0, 0.0], [2.0 * sign, 0.0], [0.0, 1.0]];
    let mut residual: f64 = 0.0;
    for (row, t) in coefficients.iter().zip(target.iter()) {
        for k in 0..2 {
            residual = residual.max((row[k] - t[k]).abs());
        }
    }
    Ok(OneJetReduction {
        alpha,
        beta,
        gamma,
        delta,
        sign,
        coefficients,
        residual,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CuspDiagnostics {
    /// Taylor coefficients of `x², xy, y²` in the quadratic part of the discriminant.
    pub quadratic: [f64; 3],
    /// Coefficients of `[η(ζ₄x + ζ₅y)]²`.
    pub expected: [f64; 3],
    pub square_residual: f64,
    /// Taylor coefficients of `x³, x²y, xy², y³`.
    pub cubic: [f64; 4],
    /// Cubic part evaluated on the tangent direction, relative to its size.
    pub divisibility_residual: f64,
    /// Unit direction of the tangent line `ζ₄x + ζ₅y = 0`.
    pub tangent: [f64; 2],
    /// `Δ₂(0, 1) = (ηζ₅)²`.
    pub transversality: f64,
    pub transversal: bool,
    /// The cubic part is not divisible by the tangent line.
    pub cusp: bool,
}

pub fn cusp_diagnostics(nf: &NormalFormJet, tol: f64) -> Result<CuspDiagnostics> {
    let g = genericity(nf, tol);
    if !g.eta_ok || !g.zeta5_ok {
        return Err(Error::Genericity(format!(
            "cusp analysis needs η ≠ 0 and ζ₅ ≠ 0 (η = {}, ζ₅ = {})",
            g.eta, g.zeta5
        )));
    }
    let j = nf.bde_jets(3);
    let d = j.b * j.b - j.a * j.c * 4.0;
    let q = d.homogeneous_part(2);
    let c = d.homogeneous_part(3);
    let [_, _, _, z4, z5] = nf.zeta;
    let e2 = nf.eta * nf.eta;
    let expected = [e2 * z4 * z4, 2.0 * e2 * z4 * z5, e2 * z5 * z5];
    let s = nf.scale().max(f64::MIN_POSITIVE);
    let square_residual = (0..3).map(|k| (q[k] - expected[k]).abs()).fold(0.0, f64::max) / s.powi(4);
    let n = z4.hypot(z5);
    let tangent = [z5 / n, -z4 / n];
    let cubic = [c[0], c[1], c[2], c[3]];
    let (tx, ty) = (tangent[0], tangent[1]);
    let on_tangent = cubic[0] * tx.powi(3) + cubic[1] * tx * tx * ty + cubic[2] * tx * ty * ty + cubic[3] * ty.powi(3);
    let cscale = cubic.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let divisibility_residual = if cscale > 0.0 { on_tangent.abs() / cscale } else { 0.0 };
    let transversality = q[2];
    Ok(CuspDiagnostics {
        quadratic: [q[0], q[1], q[2]],
        expected,
        square_residual,
        cubic,
        divisibility_residual,
        tangent,
        transversality,
        transversal: transversality.abs() > tol * s.powi(4),
        cusp: divisibility_residual > tol,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Model {
    StarD3,
    LemonMonstar,
    NonGeneric,
    /// Root count and the sign of `ζ₄² − ζ₃ζ₅` disagree.
    UnexpectedCase,
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub tol: f64,
    pub index_radius: f64,
    /// Count separatrices on a circle of this radius when set.
    pub separatrix_radius: Option<f64>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            tol: 1e-8,
            index_radius: 0.05,
            separatrix_radius: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InflectionReport {
    pub location: (f64, f64),
    pub normal_form: NormalFormJet,
    pub genericity: Genericity,
    pub pi: PiPolynomial,
    pub root_count: usize,
    pub model: Model,
    /// `−½` for StarD3, `+½` for LemonMonstar.
    pub expected_index: Option<f64>,
    pub mean_index: Option<IndexValue>,
    pub index_radius: f64,
    pub critical_points: Vec<CriticalPoint>,
    pub hessian: HessianData,
    pub reduction: Option<OneJetReduction>,
    pub cusp: Option<CuspDiagnostics>,
    pub separatrices: Option<SeparatrixCount>,
    pub notes: Vec<String>,
}

/// Full analysis of the inflection at `point`.
pub fn classify_inflection(chart: &SurfaceChart, point: (f64, f64), opts: &ClassifyOptions) -> Result<InflectionReport> {
    let nf = inflection_frame(chart, point.0, point.1)?;
    let tol = opts.tol;
    let g = genericity(&nf, tol);
    let pi = pi_polynomial(&nf, tol);
    let mut notes = Vec::new();
    let model = if !g.generic || pi.degenerate {
        Model::NonGeneric
    } else if pi.count == 3 && g.invariant > 0.0 {
        Model::StarD3
    } else if pi.count == 1 && g.invariant < 0.0 {
        Model::LemonMonstar
    } else {
        Model::UnexpectedCase
    };
    let expected_index = match model {
        Model::StarD3 => Some(-0.5),
        Model::LemonMonstar => Some(0.5),
        _ => None,
    };
    let d = &chart.domain;
    let room = (point.0 - d.x.0).min(d.x.1 - point.0).min(point.1 - d.y.0).min(d.y.1 - point.1);
    let radius = opts.index_radius.min(0.9 * room);
    let mean = match mean_index(chart, point, radius) {
        Ok(v) => Some(v),
        Err(e) => {
            notes.push(format!("mean-field index unavailable: {e}"));
            None
        }
    };
    if let (Some(m), Some(e)) = (mean, expected_index) {
        if m.index != e {
            notes.push(format!("mean-field index {} differs from the model value {e}", m.index));
        }
    }
    let critical_points = lifted_critical_points(&nf, tol);
    let hessian = hessian_equation_surface(&nf, tol);
    let reduction = match reduce_1jet(&nf, tol) {
        Ok(r) => Some(r),
        Err(e) => {
            notes.push(e.to_string());
            None
        }
    };
    let cusp = match cusp_diagnostics(&nf, tol) {
        Ok(c) => {
            if !c.cusp {
                notes.push("cubic part of the discriminant is divisible by its tangent line".into());
            }
            Some(c)
        }
        Err(e) => {
            notes.push(e.to_string());
            None
        }
    };
    let separatrices = match opts.separatrix_radius {
        Some(r) => {
            let opts = IntegrationOptions {
                step: 0.1 * r,
                ..IntegrationOptions::default()
            };
            Some(count_separatrices(chart, point, r, &opts)?)
        }
        None => None,
    };
    Ok(InflectionReport {
        location: point,
        root_count: pi.count,
        genericity: g,
        pi,
        model,
        expected_index,
        mean_index: mean,
        index_radius: radius,
        critical_points,
        hessian,
        reduction,
        cusp,
        separatrices,
        notes,
        normal_form: nf,
    })
}
