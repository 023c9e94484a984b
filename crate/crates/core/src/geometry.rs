//! Pointwise curvature theory of surfaces in R⁴.

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::jets::{SecondValues, SurfaceChart};

/// First fundamental form, normal metric and second fundamental form at a point.
///
/// `a, b, c` and `e, f, g` are the coefficients of the two components of the
/// second fundamental form in the adapted orthonormal frame `(e₁, e₂; e₃, e₄)`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct FrameCoeffs {
    pub e_cap: f64,
    pub f_cap: f64,
    pub g_cap: f64,
    pub w: f64,
    pub e_hat: f64,
    pub f_hat: f64,
    pub g_hat: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

impl FrameCoeffs {
    /// Only the second fundamental form, with a unit metric.
    pub fn from_sff(a: f64, b: f64, c: f64, e: f64, f: f64, g: f64) -> FrameCoeffs {
        FrameCoeffs {
            e_cap: 1.0,
            f_cap: 0.0,
            g_cap: 1.0,
            w: 1.0,
            e_hat: 1.0,
            f_hat: 0.0,
            g_hat: 1.0,
            a,
            b,
            c,
            e,
            f,
            g,
        }
    }

    pub fn sff(&self) -> [f64; 6] {
        [self.a, self.b, self.c, self.e, self.f, self.g]
    }

    /// max(|a|, …, |g|, 1)
    pub fn scale(&self) -> f64 {
        self.sff().iter().fold(1.0_f64, |m, v| m.max(v.abs()))
    }

    /// (ac − b²) + (eg − f²)
    pub fn gaussian(&self) -> f64 {
        (self.a * self.c - self.b * self.b) + (self.e * self.g - self.f * self.f)
    }

    /// (a − c)f − (e − g)b
    pub fn normal_curvature(&self) -> f64 {
        (self.a - self.c) * self.f - (self.e - self.g) * self.b
    }

    /// Mean curvature vector in the normal frame.
    pub fn mean(&self) -> (f64, f64) {
        ((self.a + self.c) / 2.0, (self.e + self.g) / 2.0)
    }

    /// The 2×2 minors (af − be, ag − ce, bg − cf).
    pub fn minors(&self) -> [f64; 3] {
        [
            self.a * self.f - self.b * self.e,
            self.a * self.g - self.c * self.e,
            self.b * self.g - self.c * self.f,
        ]
    }

    /// Second fundamental form applied to the unit vector at angle θ.
    pub fn ii(&self, theta: f64) -> (f64, f64) {
        let (s, c) = theta.sin_cos();
        (
            self.a * c * c + 2.0 * self.b * c * s + self.c * s * s,
            self.e * c * c + 2.0 * self.f * c * s + self.g * s * s,
        )
    }
}

/// Curvature invariants at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureData {
    /// Gaussian curvature from the determinant formula.
    pub k: f64,
    /// Normal curvature from the determinant formula.
    pub kappa: f64,
    pub h1: f64,
    pub h2: f64,
    /// Resultant invariant.
    pub delta: f64,
    /// Discriminant of the asymptotic quadratic, equal to −4Δ.
    pub d: f64,
    pub h_phi: f64,
    pub h_psi: f64,
    pub q: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    Elliptic,
    Hyperbolic,
    Parabolic,
    InflectionReal,
    InflectionFlat,
    InflectionImaginary,
}

impl Region {
    pub fn name(self) -> &'static str {
        match self {
            Region::Elliptic => "elliptic",
            Region::Hyperbolic => "hyperbolic",
            Region::Parabolic => "parabolic",
            Region::InflectionReal => "inflection-real",
            Region::InflectionFlat => "inflection-flat",
            Region::InflectionImaginary => "inflection-imaginary",
        }
    }

    pub fn is_inflection(self) -> bool {
        matches!(
            self,
            Region::InflectionReal | Region::InflectionFlat | Region::InflectionImaginary
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct PointClass {
    pub region: Region,
    pub minimal: bool,
    pub circle: bool,
    pub umbilic: bool,
    /// Rank of [[a, b, c], [e, f, g]].
    pub rank: usize,
    /// All second-order data vanish.
    pub degenerate: bool,
    /// inflection ⟺ parabolic with K = 0 ⟺ parabolic with κ = 0.
    pub equivalences_hold: bool,
}

/// Relative zero tolerance used by the classification.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Frame coefficients together with the second-order data used by the determinant formulas.
#[derive(Clone, Copy, Debug)]
pub struct PointGeometry {
    pub frame: FrameCoeffs,
    pub second: SecondValues,
}

impl PointGeometry {
    pub fn curvatures(&self) -> CurvatureData {
        curvatures(&self.frame, &self.second)
    }
}

pub fn point_geometry(chart: &SurfaceChart, x: f64, y: f64) -> Result<PointGeometry> {
    let second = chart.second_jets(x, y, 0)?.values();
    let frame = fundamental_forms(chart, x, y)?;
    Ok(PointGeometry { frame, second })
}

pub fn fundamental_forms(chart: &SurfaceChart, x: f64, y: f64) -> Result<FrameCoeffs> {
    if let Some((phi, psi)) = chart.graph_jets(x, y, 2)? {
        return graph_frame(
            [phi.get(1, 0), phi.get(0, 1), psi.get(1, 0), psi.get(0, 1)],
            [phi.get(2, 0), phi.get(1, 1), phi.get(0, 2)],
            [psi.get(2, 0), psi.get(1, 1), psi.get(0, 2)],
            x,
            y,
        );
    }
    immersion_frame(chart, x, y)
}

fn graph_frame(first: [f64; 4], p: [f64; 3], s: [f64; 3], x: f64, y: f64) -> Result<FrameCoeffs> {
    let [px, py, sx, sy] = first;
    let e_cap = 1.0 + px * px + sx * sx;
    let f_cap = px * py + sx * sy;
    let g_cap = 1.0 + py * py + sy * sy;
    let w = e_cap * g_cap - f_cap * f_cap;
    if !(w > 1e-14) {
        return Err(Error::DegenerateMetric { w, x, y });
    }
    let e_hat = 1.0 + px * px + py * py;
    let f_hat = px * sx + py * sy;
    let g_hat = 1.0 + sx * sx + sy * sy;
    let (e, f) = (e_cap, f_cap);
    let [pxx, pxy, pyy] = p;
    let [sxx, sxy, syy] = s;
    let se = e_hat.sqrt();
    let sw = w.sqrt();
    let rxx = e_hat * sxx - f_hat * pxx;
    let rxy = e_hat * sxy - f_hat * pxy;
    let ryy = e_hat * syy - f_hat * pyy;
    Ok(FrameCoeffs {
        e_cap,
        f_cap,
        g_cap,
        w,
        e_hat,
        f_hat,
        g_hat,
        a: pxx / (e * se),
        b: (e * pxy - f * pxx) / (e * sw * se),
        c: (e * e * pyy - 2.0 * e * f * pxy + f * f * pxx) / (e * w * se),
        e: rxx / (e * se * sw),
        f: (e * rxy - f * rxx) / (e * w * se),
        g: (e * e * ryy - 2.0 * e * f * rxy + f * f * rxx) / (e * w * sw * se),
    })
}

type V4 = [f64; 4];

fn dot(a: &V4, b: &V4) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &V4, y: &V4) -> V4 {
    [
        y[0] + alpha * x[0],
        y[1] + alpha * x[1],
        y[2] + alpha * x[2],
        y[3] + alpha * x[3],
    ]
}

fn scaled(alpha: f64, x: &V4) -> V4 {
    x.map(|v| alpha * v)
}

/// Orthonormalizes `v` against `basis`; `None` when what remains is too small.
fn orthonormalize(v: &V4, basis: &[V4]) -> Option<V4> {
    let mut u = *v;
    for _ in 0..2 {
        for b in basis {
            u = axpy(-dot(&u, b), b, &u);
        }
    }
    let n = dot(&u, &u).sqrt();
    if n > 1e-6 * dot(v, v).sqrt().max(1e-300) {
        Some(scaled(1.0 / n, &u))
    } else {
        None
    }
}

/// Adapted orthonormal frame of an immersion at a point, with the parameter derivatives.
pub(crate) struct ImmersionFrame {
    pub tx: V4,
    pub ty: V4,
    pub e: [V4; 4],
    /// Ξ_x = b11 e₁, Ξ_y = b12 e₁ + b22 e₂
    pub b11: f64,
    pub b12: f64,
    pub b22: f64,
}

pub(crate) fn immersion_frame_vectors(chart: &SurfaceChart, x: f64, y: f64) -> Result<(ImmersionFrame, [V4; 3])> {
    let xi = chart.embedding_jets(x, y, 2)?;
    let tx = xi.map(|j| j.get(1, 0));
    let ty = xi.map(|j| j.get(0, 1));
    let second = [
        xi.map(|j| j.get(2, 0)),
        xi.map(|j| j.get(1, 1)),
        xi.map(|j| j.get(0, 2)),
    ];
    let e_cap = dot(&tx, &tx);
    let f_cap = dot(&tx, &ty);
    let g_cap = dot(&ty, &ty);
    let w = e_cap * g_cap - f_cap * f_cap;
    if !(w > 1e-14) {
        return Err(Error::DegenerateMetric { w, x, y });
    }
    let b11 = e_cap.sqrt();
    let e1 = scaled(1.0 / b11, &tx);
    let b12 = dot(&ty, &e1);
    let u = axpy(-b12, &e1, &ty);
    let b22 = dot(&u, &u).sqrt();
    let e2 = scaled(1.0 / b22, &u);
    let j = chart.convention;
    let mut normals: Vec<V4> = Vec::new();
    for cand in [j.j(e1), j.j(e2)] {
        let mut basis = vec![e1, e2];
        basis.extend(normals.iter().copied());
        if let Some(n) = orthonormalize(&cand, &basis) {
            normals.push(n);
        }
    }
    let mut k = 0;
    while normals.len() < 2 && k < 4 {
        let mut cand = [0.0; 4];
        cand[k] = 1.0;
        let mut basis = vec![e1, e2];
        basis.extend(normals.iter().copied());
        if let Some(n) = orthonormalize(&cand, &basis) {
            normals.push(n);
        }
        k += 1;
    }
    let frame = ImmersionFrame {
        tx,
        ty,
        e: [e1, e2, normals[0], normals[1]],
        b11,
        b12,
        b22,
    };
    Ok((frame, second))
}

fn immersion_frame(chart: &SurfaceChart, x: f64, y: f64) -> Result<FrameCoeffs> {
    let (fr, second) = immersion_frame_vectors(chart, x, y)?;
    let (tx, ty) = (fr.tx, fr.ty);
    let e_cap = dot(&tx, &tx);
    let f_cap = dot(&tx, &ty);
    let g_cap = dot(&ty, &ty);
    let w = e_cap * g_cap - f_cap * f_cap;
    // Normal metric from the projected images of the tangent basis under J.
    let project = |v: V4| {
        let vx = dot(&v, &tx);
        let vy = dot(&v, &ty);
        let alpha = (g_cap * vx - f_cap * vy) / w;
        let beta = (e_cap * vy - f_cap * vx) / w;
        axpy(-beta, &ty, &axpy(-alpha, &tx, &v))
    };
    let n1 = project(chart.convention.j(tx));
    let n2 = project(chart.convention.j(ty));
    // Parameter-space coordinates of e₁, e₂.
    let c1 = [1.0 / fr.b11, 0.0];
    let c2 = [-fr.b12 / (fr.b11 * fr.b22), 1.0 / fr.b22];
    let sff = |n: &V4| {
        let s = [dot(&second[0], n), dot(&second[1], n), dot(&second[2], n)];
        let form = |u: [f64; 2], v: [f64; 2]| {
            s[0] * u[0] * v[0] + s[1] * (u[0] * v[1] + u[1] * v[0]) + s[2] * u[1] * v[1]
        };
        (form(c1, c1), form(c1, c2), form(c2, c2))
    };
    let (a, b, c) = sff(&fr.e[2]);
    let (e, f, g) = sff(&fr.e[3]);
    Ok(FrameCoeffs {
        e_cap,
        f_cap,
        g_cap,
        w,
        e_hat: dot(&n1, &n1),
        f_hat: dot(&n1, &n2),
        g_hat: dot(&n2, &n2),
        a,
        b,
        c,
        e,
        f,
        g,
    })
}

pub fn curvatures(fc: &FrameCoeffs, sv: &SecondValues) -> CurvatureData {
    let w2 = fc.w * fc.w;
    let (h_phi, h_psi, q) = (sv.h_phi(), sv.h_psi(), sv.q());
    let (l, m, n) = (sv.l(), sv.m(), sv.n());
    let (h1, h2) = fc.mean();
    CurvatureData {
        k: (fc.e_hat * h_psi - fc.f_hat * q + fc.g_hat * h_phi) / w2,
        kappa: (fc.e_cap * l - fc.f_cap * m + fc.g_cap * n) / w2,
        h1,
        h2,
        delta: delta_resultant(fc),
        d: bde_discriminant(fc),
        h_phi,
        h_psi,
        q,
        l,
        m,
        n,
    }
}

/// ¼ det [[a, 2b, c, 0], [e, 2f, g, 0], [0, a, 2b, c], [0, e, 2f, g]]
pub fn delta_resultant(fc: &FrameCoeffs) -> f64 {
    let FrameCoeffs { a, b, c, e, f, g, .. } = *fc;
    #[rustfmt::skip]
    let m = Matrix4::new(
        a, 2.0 * b, c, 0.0,
        e, 2.0 * f, g, 0.0,
        0.0, a, 2.0 * b, c,
        0.0, e, 2.0 * f, g,
    );
    m.determinant() / 4.0
}

/// (ag − ce)² − 4(af − be)(bg − cf)
pub fn bde_discriminant(fc: &FrameCoeffs) -> f64 {
    let [p, q, r] = fc.minors();
    q * q - 4.0 * p * r
}

/// ‖H‖² − K − |κ|, computed from the frame.
pub fn wintgen(fc: &FrameCoeffs) -> f64 {
    let (h1, h2) = fc.mean();
    h1 * h1 + h2 * h2 - fc.gaussian() - fc.normal_curvature().abs()
}

/// Classification with relative tolerance `tol` (default [`DEFAULT_TOL`]).
///
/// Quadratic quantities (K, κ, minors, Wintgen residual) are compared with
/// `tol·s²` and Δ with `tol·s⁴`, where `s` is [`FrameCoeffs::scale`].
pub fn classify_point(cd: &CurvatureData, fc: &FrameCoeffs, tol: Option<f64>) -> PointClass {
    let t = tol.unwrap_or(DEFAULT_TOL);
    let s = fc.scale();
    let t1 = t * s;
    let t2 = t * s * s;
    let t4 = t2 * s * s;
    let degenerate = fc.sff().iter().all(|v| v.abs() <= t1);
    let rank = if degenerate {
        0
    } else if fc.minors().iter().all(|m| m.abs() <= t2) {
        1
    } else {
        2
    };
    let delta_zero = cd.delta.abs() <= t4;
    let k_zero = cd.k.abs() <= t2;
    let region = if rank <= 1 {
        if k_zero {
            Region::InflectionFlat
        } else if cd.k < 0.0 {
            Region::InflectionReal
        } else {
            Region::InflectionImaginary
        }
    } else if delta_zero {
        Region::Parabolic
    } else if cd.delta > 0.0 {
        Region::Elliptic
    } else {
        Region::Hyperbolic
    };
    let minimal = (cd.h1 * cd.h1 + cd.h2 * cd.h2).sqrt() <= t1;
    let circle = wintgen(fc).abs() <= t2;
    let inflection = rank <= 1;
    let parabolic_k = delta_zero && k_zero;
    let parabolic_kappa = delta_zero && cd.kappa.abs() <= t2;
    PointClass {
        region,
        minimal,
        circle,
        umbilic: minimal && circle,
        rank,
        degenerate,
        equivalences_hold: inflection == parabolic_k && inflection == parabolic_kappa,
    }
}

/// Samples of the curvature ellipse for θ = kπ/n, k = 0..n.
pub fn curvature_ellipse(fc: &FrameCoeffs, n_samples: usize) -> Vec<(f64, f64)> {
    let n = n_samples.max(3);
    (0..n)
        .map(|k| fc.ii(std::f64::consts::PI * k as f64 / n as f64))
        .collect()
}

/// Signed area of the curvature ellipse, ½∮(x dy − y dx) over one traversal θ ∈ [0, π),
/// by the periodic trapezoid rule.
pub fn ellipse_area(fc: &FrameCoeffs, n_samples: usize) -> f64 {
    let n = n_samples.max(3);
    let h = std::f64::consts::PI / n as f64;
    let mut s = 0.0;
    for k in 0..n {
        let t = h * k as f64;
        let (x, y) = fc.ii(t);
        let (s2, c2) = (2.0 * t).sin_cos();
        let dx = (fc.c - fc.a) * s2 + 2.0 * fc.b * c2;
        let dy = (fc.g - fc.e) * s2 + 2.0 * fc.f * c2;
        s += x * dy - y * dx;
    }
    0.5 * s * h
}

/// Solutions of a quadratic binary form.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Directions {
    None,
    /// A double root.
    One([f64; 2]),
    Two([f64; 2], [f64; 2]),
    /// The form vanishes identically.
    All,
}

/// Null directions of `p u² + q uv + r v²`, as unit vectors `(u, v)`.
///
/// The discriminant `q² − 4pr` is compared with `tol·s²`, `s = max(|p|, |q|, |r|)`.
pub fn null_directions(p: f64, q: f64, r: f64, tol: f64) -> Directions {
    let s = p.abs().max(q.abs()).max(r.abs());
    if s == 0.0 || !s.is_finite() {
        return Directions::All;
    }
    let (p, q, r) = (p / s, q / s, r / s);
    let disc = q * q - 4.0 * p * r;
    // Eigen-decomposition of [[p, q/2], [q/2, r]].
    let mean = (p + r) / 2.0;
    let rad = (((p - r) / 2.0).powi(2) + (q / 2.0).powi(2)).sqrt();
    let (l1, l2) = (mean + rad, mean - rad);
    let phi = 0.5 * q.atan2(p - r);
    let v1 = [phi.cos(), phi.sin()];
    let v2 = [-phi.sin(), phi.cos()];
    if disc.abs() <= tol {
        let v = if l1.abs() <= l2.abs() { v1 } else { v2 };
        return Directions::One(v);
    }
    if disc < 0.0 {
        return Directions::None;
    }
    // l1 cos²t + l2 sin²t = 0 with l1 ≥ 0 ≥ l2.
    let t = (l1 / (l1 - l2)).sqrt().atan2((-l2 / (l1 - l2)).sqrt());
    let (st, ct) = t.sin_cos();
    let d1 = [ct * v1[0] + st * v2[0], ct * v1[1] + st * v2[1]];
    let d2 = [ct * v1[0] - st * v2[0], ct * v1[1] - st * v2[1]];
    Directions::Two(d1, d2)
}

/// Asymptotic directions, expressed in the adapted frame `(e₁, e₂)`.
pub fn asymptotic_directions(fc: &FrameCoeffs) -> Directions {
    let [p, q, r] = fc.minors();
    let s = fc.scale();
    if p.abs().max(q.abs()).max(r.abs()) <= 1e-12 * s * s {
        return Directions::All;
    }
    null_directions(p, q, r, 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::Domain;

    fn saddle() -> SurfaceChart {
        SurfaceChart::generating_function("x^3/3 - x*y^2", Domain::square(2.0)).unwrap()
    }

    #[test]
    fn umbilic_frame_at_origin() {
        let fc = fundamental_forms(&saddle(), 0.0, 0.0).unwrap();
        assert_eq!((fc.e_cap, fc.f_cap, fc.g_cap, fc.w), (1.0, 0.0, 1.0, 1.0));
        assert_eq!(fc.sff(), [2.0, 0.0, -2.0, 0.0, -2.0, 0.0]);
    }

    #[test]
    fn metric_at_one_zero() {
        let fc = fundamental_forms(&saddle(), 1.0, 0.0).unwrap();
        assert_eq!((fc.e_cap, fc.f_cap, fc.g_cap, fc.w), (5.0, 0.0, 5.0, 25.0));
        assert_eq!((fc.e_hat, fc.f_hat, fc.g_hat), (5.0, 0.0, 5.0));
    }

    #[test]
    fn desk_curvatures() {
        let pg = point_geometry(&saddle(), 0.0, 0.0).unwrap();
        let cd = pg.curvatures();
        assert_eq!((cd.k, cd.kappa), (-8.0, -8.0));
        assert_eq!((cd.h1, cd.h2, cd.m), (0.0, 0.0, 0.0));
        assert_eq!((cd.l, cd.n, cd.h_phi, cd.h_psi, cd.q), (-4.0, -4.0, -4.0, -4.0, 0.0));
        assert!((cd.delta - 16.0).abs() < 1e-12);
        let cd = point_geometry(&saddle(), 1.0, 0.0).unwrap().curvatures();
        assert!((cd.k + 0.064).abs() < 1e-15);
        assert!((cd.kappa + 0.064).abs() < 1e-15);
    }

    #[test]
    fn classification_of_umbilic() {
        let pg = point_geometry(&saddle(), 0.0, 0.0).unwrap();
        let pc = classify_point(&pg.curvatures(), &pg.frame, None);
        assert_eq!(pc.region, Region::Elliptic);
        assert!(pc.minimal && pc.circle && pc.umbilic);
        assert_eq!(pc.rank, 2);
    }

    #[test]
    fn flat_plane_is_degenerate_flat_inflection() {
        let c = SurfaceChart::generating_function("0", Domain::square(1.0)).unwrap();
        let pg = point_geometry(&c, 0.3, 0.1).unwrap();
        assert_eq!(pg.frame.sff(), [0.0; 6]);
        let pc = classify_point(&pg.curvatures(), &pg.frame, None);
        assert_eq!(pc.region, Region::InflectionFlat);
        assert_eq!(pc.rank, 0);
        assert!(pc.degenerate);
        assert_eq!(asymptotic_directions(&pg.frame), Directions::All);
    }

    #[test]
    fn normal_form_origin_is_flat_inflection() {
        let c = SurfaceChart::normal_form(1.0, [0.0, 0.0, 0.0, 1.0, 1.0], None, Domain::square(1.0)).unwrap();
        let pg = point_geometry(&c, 0.0, 0.0).unwrap();
        let pc = classify_point(&pg.curvatures(), &pg.frame, None);
        assert_eq!(pc.region, Region::InflectionFlat);
        assert_eq!(pc.rank, 1);
    }

    #[test]
    fn ellipse_of_umbilic_is_circle() {
        let fc = FrameCoeffs::from_sff(2.0, 0.0, -2.0, 0.0, -2.0, 0.0);
        for (x, y) in curvature_ellipse(&fc, 17) {
            assert!(((x * x + y * y).sqrt() - 2.0).abs() < 1e-14);
        }
        let area = ellipse_area(&fc, 16);
        assert!((area - std::f64::consts::FRAC_PI_2 * fc.normal_curvature()).abs() < 1e-12);
        assert!(curvature_ellipse(&FrameCoeffs::from_sff(0.0, 0.0, 0.0, 0.0, 0.0, 0.0), 5)
            .iter()
            .all(|&(x, y)| x == 0.0 && y == 0.0));
    }

    #[test]
    fn asymptotic_direction_examples() {
        let fc = FrameCoeffs::from_sff(2.0, 0.0, -2.0, 0.0, -2.0, 0.0);
        assert_eq!(asymptotic_directions(&fc), Directions::None);
        let fc = FrameCoeffs::from_sff(1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
        let Directions::Two(d1, d2) = asymptotic_directions(&fc) else {
            panic!()
        };
        let mut found = [d1, d2].map(|d| (d[0].abs() > 0.5, d[1].abs() > 0.5));
        found.sort();
        assert_eq!(found, [(false, true), (true, false)]);
        assert!(delta_resultant(&fc) < 0.0);
    }

    #[test]
    fn null_directions_solve_the_form() {
        let (p, q, r) = (0.3, -1.7, -0.4);
        let Directions::Two(d1, d2) = null_directions(p, q, r, 1e-12) else {
            panic!()
        };
        for d in [d1, d2] {
            let v = p * d[0] * d[0] + q * d[0] * d[1] + r * d[1] * d[1];
            assert!(v.abs() < 1e-14);
        }
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(delta_resultant(&FrameCoeffs::from_sff(0.0, 0.0, 0.0, 0.0, 0.0, 0.0)), 0.0);
        let fc = FrameCoeffs::from_sff(2.0, 0.0, -2.0, 0.0, -2.0, 0.0);
        assert!((bde_discriminant(&fc) + 4.0 * delta_resultant(&fc)).abs() < 1e-12);
    }
}
