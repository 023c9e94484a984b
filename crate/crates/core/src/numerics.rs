//! Small numerical helpers shared by the analysis modules.

use nalgebra::Matrix3;

use crate::error::Result;

/// A residual vector and its Jacobian with respect to `(x, y)`.
pub(crate) type Residual = (Vec<f64>, Vec<[f64; 2]>);

#[derive(Clone, Copy, Debug)]
pub(crate) struct Solution {
    pub x: f64,
    pub y: f64,
    pub residual: f64,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Damped Gauss–Newton (Levenberg–Marquardt) for small over- or fully determined systems in two unknowns.
///
/// Stops when the residual norm falls below `tol`, when steps stall, or after `max_iter` iterations.
/// Evaluation failures abort the solve.
pub(crate) fn levenberg_marquardt<F>(f: F, start: (f64, f64), max_iter: usize, tol: f64) -> Result<Solution>
where
    F: Fn(f64, f64) -> Result<Residual>,
{
    let (mut x, mut y) = start;
    let (mut r, mut jac) = f(x, y)?;
    let mut rn = norm(&r);
    let mut lambda = 1e-6;
    let mut it = 0;
    while it < max_iter && rn > tol {
        it += 1;
        let mut a = [[0.0; 2]; 2];
        let mut g = [0.0; 2];
        for (ri, ji) in r.iter().zip(jac.iter()) {
            for p in 0..2 {
                g[p] += ji[p] * ri;
                for q in 0..2 {
                    a[p][q] += ji[p] * ji[q];
                }
            }
        }
        let mut improved = false;
        for _ in 0..30 {
            let d0 = a[0][0] * (1.0 + lambda) + 1e-300;
            let d1 = a[1][1] * (1.0 + lambda) + 1e-300;
            let det = d0 * d1 - a[0][1] * a[1][0];
            if det == 0.0 || !det.is_finite() {
                lambda *= 10.0;
                continue;
            }
            let dx = -(d1 * g[0] - a[0][1] * g[1]) / det;
            let dy = -(d0 * g[1] - a[1][0] * g[0]) / det;
            let (nx, ny) = (x + dx, y + dy);
            match f(nx, ny) {
                Ok((nr, nj)) if norm(&nr) < rn => {
                    let small = dx.hypot(dy) <= 1e-16 * (1.0 + x.hypot(y));
                    x = nx;
                    y = ny;
                    r = nr;
                    jac = nj;
                    rn = norm(&r);
                    lambda = (lambda / 5.0).max(1e-12);
                    improved = !small;
                    break;
                }
                _ => lambda *= 8.0,
            }
            if lambda > 1e12 {
                break;
            }
        }
        if !improved {
            break;
        }
    }
    Ok(Solution {
        x,
        y,
        residual: rn,
    })
}

/// A point of the projective line.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProjRoot {
    Finite(f64),
    Infinity,
}

impl ProjRoot {
    /// Unit direction `(1, p)` normalized, or `(0, 1)`.
    pub fn direction(self) -> (f64, f64) {
        match self {
            ProjRoot::Finite(p) => {
                let n = (1.0 + p * p).sqrt();
                (1.0 / n, p / n)
            }
            ProjRoot::Infinity => (0.0, 1.0),
        }
    }
}

/// Real projective roots of `a p³ + b p² + c p + d`, sorted with finite roots
/// ascending and ∞ last. Leading coefficients below `tol·scale` count as zero,
/// contributing roots at infinity.
pub(crate) fn real_cubic_roots(coef: [f64; 4], tol: f64) -> Vec<ProjRoot> {
    let s = coef.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if s == 0.0 {
        return Vec::new();
    }
    let c: Vec<f64> = coef.iter().map(|v| v / s).collect();
    let mut lead = 0;
    while lead < 3 && c[lead].abs() <= tol {
        lead += 1;
    }
    let degree = 3 - lead;
    let mut roots: Vec<f64> = Vec::new();
    match degree {
        0 => {}
        1 => roots.push(-c[3] / c[2]),
        2 => {
            let (a, b, cc) = (c[1], c[2], c[3]);
            let disc = b * b - 4.0 * a * cc;
            if disc >= 0.0 {
                let q = -0.5 * (b + b.signum() * disc.sqrt());
                let q = if q == 0.0 { -0.5 * disc.sqrt() } else { q };
                roots.push(q / a);
                if q != 0.0 {
                    roots.push(cc / q);
                } else {
                    roots.push(0.0);
                }
            }
        }
        _ => {
            let (a, b, cc, d) = (c[0], c[1], c[2], c[3]);
            let m = Matrix3::new(-b / a, -cc / a, -d / a, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0);
            for z in m.complex_eigenvalues().iter() {
                if z.im.abs() <= 1e-7 * (1.0 + z.re.abs()) {
                    roots.push(z.re);
                }
            }
            // Newton polish.
            for r in roots.iter_mut() {
                for _ in 0..4 {
                    let v = ((a * *r + b) * *r + cc) * *r + d;
                    let dv = (3.0 * a * *r + 2.0 * b) * *r + cc;
                    if dv != 0.0 {
                        *r -= v / dv;
                    }
                }
            }
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<ProjRoot> = roots.into_iter().map(ProjRoot::Finite).collect();
    for _ in 0..lead {
        out.push(ProjRoot::Infinity);
    }
    out
}

/// Angle difference wrapped to (−π, π].
pub(crate) fn wrap_pi(mut d: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    while d > PI {
        d -= TAU;
    }
    while d <= -PI {
        d += TAU;
    }
    d
}

/// Angle difference wrapped to (−π/2, π/2].
pub(crate) fn wrap_half_pi(mut d: f64) -> f64 {
    use std::f64::consts::{FRAC_PI_2, PI};
    while d > FRAC_PI_2 {
        d -= PI;
    }
    while d <= -FRAC_PI_2 {
        d += PI;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_roots() {
        // (p − 1)(p + 2)(p − 3)
        let r = real_cubic_roots([1.0, -2.0, -5.0, 6.0], 1e-12);
        let v: Vec<f64> = r
            .iter()
            .map(|x| match x {
                ProjRoot::Finite(p) => *p,
                ProjRoot::Infinity => f64::NAN,
            })
            .collect();
        assert!((v[0] + 2.0).abs() < 1e-12 && (v[1] - 1.0).abs() < 1e-12 && (v[2] - 3.0).abs() < 1e-12);
        let r = real_cubic_roots([0.0, 1.0, 2.0, 0.0], 1e-12);
        assert_eq!(r.len(), 3);
        assert_eq!(r[2], ProjRoot::Infinity);
        let r = real_cubic_roots([0.0, 1.0, 0.0, 1.0], 1e-12);
        assert_eq!(r, vec![ProjRoot::Infinity]);
    }

    #[test]
    fn lm_finds_root() {
        let s = levenberg_marquardt(
            |x, y| Ok((vec![x * x - 2.0, y - x], vec![[2.0 * x, 0.0], [-1.0, 1.0]])),
            (1.0, 0.0),
            50,
            1e-14,
        )
        .unwrap();
        assert!((s.x - 2f64.sqrt()).abs() < 1e-12 && (s.y - s.x).abs() < 1e-12);
    }
}
