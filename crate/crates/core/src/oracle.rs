//! Brute-force verifiers, deliberately independent of the code paths they check.

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::geometry::FrameCoeffs;
use crate::jets::Jet;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleConfig {
    /// Base step `h₀`; derivatives of total order `k` use `h₀^{2/(k+1)}`.
    pub fd_step: f64,
    /// Richardson levels, at most 4.
    pub richardson_levels: usize,
    pub membership_samples: usize,
    pub winding_samples: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            fd_step: 1e-4,
            richardson_levels: 2,
            membership_samples: 2048,
            winding_samples: 4096,
        }
    }
}

impl OracleConfig {
    fn check(&self) -> Result<()> {
        if !(self.fd_step > 0.0)
            || self.richardson_levels > 4
            || self.membership_samples == 0
            || self.winding_samples == 0
        {
            return Err(Error::Oracle(format!("invalid configuration {self:?}")));
        }
        Ok(())
    }
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Central difference of order `(i, j)` with spacing `h`, sampling at half-integer offsets for odd orders.
fn central<F>(f: &F, x: f64, y: f64, i: usize, j: usize, h: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    let mut s = 0.0;
    for m in 0..=i {
        let ox = (i as f64 / 2.0 - m as f64) * h;
        let cx = if m % 2 == 0 { 1.0 } else { -1.0 } * binom(i, m);
        for n in 0..=j {
            let oy = (j as f64 / 2.0 - n as f64) * h;
            let cy = if n % 2 == 0 { 1.0 } else { -1.0 } * binom(j, n);
            let v = f(x + ox, y + oy)
                .map_err(|e| Error::Oracle(format!("stencil evaluation failed: {e}")))?;
            if !v.is_finite() {
                return Err(Error::Oracle(format!(
                    "non-finite stencil value at ({}, {})",
                    x + ox,
                    y + oy
                )));
            }
            s += cx * cy * v;
        }
    }
    Ok(s / h.powi((i + j) as i32))
}

/// Finite-difference jet of order ≤ 3 with Richardson extrapolation.
pub fn fd_jet<F>(f: F, x: f64, y: f64, order: usize, cfg: &OracleConfig) -> Result<Jet>
where
    F: Fn(f64, f64) -> Result<f64>,
{
    cfg.check()?;
    let order = order.min(3);
    let mut out = Jet::zero(order);
    for k in 0..=order {
        for i in 0..=k {
            let j = k - i;
            if k == 0 {
                out.set(0, 0, central(&f, x, y, 0, 0, 1.0)?);
                continue;
            }
            let h = cfg.fd_step.powf(2.0 / (k as f64 + 1.0));
            let mut table: Vec<f64> = Vec::new();
            for lvl in 0..=cfg.richardson_levels {
                table.push(central(&f, x, y, i, j, h / 2f64.powi(lvl as i32))?);
            }
            for lvl in 1..=cfg.richardson_levels {
                let factor = 4f64.powi(lvl as i32);
                for t in 0..table.len() - lvl {
                    table[t] = (factor * table[t + 1] - table[t]) / (factor - 1.0);
                }
            }
            out.set(i, j, table[0]);
        }
    }
    Ok(out)
}

/// Resultant of `ax² + 2bxy + cy²` and `ex² + 2fxy + gy²` by evaluating the
/// second form on the roots of the first, in the ¼·det normalization.
pub fn resultant_bruteforce(a: f64, b: f64, c: f64, e: f64, f: f64, g: f64) -> Result<f64> {
    if [a, b, c].iter().all(|v| *v == 0.0) && [e, f, g].iter().all(|v| *v == 0.0) {
        return Err(Error::Oracle("both forms vanish".into()));
    }
    if [a, b, c].iter().all(|v| *v == 0.0) || [e, f, g].iter().all(|v| *v == 0.0) {
        return Ok(0.0);
    }
    // Work in the variable whose leading coefficient is larger; swapping x and y
    // leaves the resultant of two binary quadratics unchanged.
    let (p, q) = if a.abs() >= c.abs() {
        ([a, 2.0 * b, c], [e, 2.0 * f, g])
    } else {
        ([c, 2.0 * b, a], [g, 2.0 * f, e])
    };
    if p[0] == 0.0 {
        // Both a and c vanish: the first form is 2bxy with roots x = 0 and y = 0.
        return Ok(-b * b * e * g);
    }
    let disc = Complex::new(p[1] * p[1] - 4.0 * p[0] * p[2], 0.0).sqrt();
    let r1 = (-p[1] + disc) / (2.0 * p[0]);
    let r2 = (-p[1] - disc) / (2.0 * p[0]);
    let second = |r: Complex<f64>| r * r * q[0] + r * q[1] + q[2];
    let res = second(r1) * second(r2) * (p[0] * p[0]);
    Ok(-res.re / 4.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Outside,
    On,
    Inside,
    /// The sampled ellipse has (numerically) no area.
    Degenerate,
}

/// Position of the origin relative to the sampled curvature ellipse.
pub fn ellipse_membership(fc: &FrameCoeffs, cfg: &OracleConfig) -> Membership {
    let n = cfg.membership_samples.max(16);
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let t = std::f64::consts::PI * k as f64 / n as f64;
            let (s, c) = t.sin_cos();
            (
                fc.a * c * c + 2.0 * fc.b * s * c + fc.c * s * s,
                fc.e * c * c + 2.0 * fc.f * s * c + fc.g * s * s,
            )
        })
        .collect();
    let mut area = 0.0;
    let mut min_d: f64 = f64::INFINITY;
    let mut winding = 0.0;
    let mut perimeter = 0.0;
    for k in 0..n {
        let (x0, y0) = pts[k];
        let (x1, y1) = pts[(k + 1) % n];
        area += 0.5 * (x0 * y1 - x1 * y0);
        perimeter += ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt();
        // Distance from the origin to the segment.
        let (dx, dy) = (x1 - x0, y1 - y0);
        let len2 = dx * dx + dy * dy;
        let t = if len2 > 0.0 {
            (-(x0 * dx + y0 * dy) / len2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        min_d = min_d.min(((x0 + t * dx).powi(2) + (y0 + t * dy).powi(2)).sqrt());
        winding += (x0 * y1 - x1 * y0).atan2(x0 * x1 + y0 * y1);
    }
    if area.abs() < 1e-12 {
        return Membership::Degenerate;
    }
    if min_d <= 1e-9 * perimeter.max(1e-300) {
        return Membership::On;
    }
    if (winding / std::f64::consts::TAU).round() == 0.0 {
        Membership::Outside
    } else {
        Membership::Inside
    }
}

/// Shoelace area of a closed polygon.
pub fn shoelace(points: &[(f64, f64)]) -> f64 {
    let n = points.len();
    (0..n)
        .map(|k| {
            let (x0, y0) = points[k];
            let (x1, y1) = points[(k + 1) % n];
            0.5 * (x0 * y1 - x1 * y0)
        })
        .sum()
}

/// Pre-rounding winding number of a planar vector field around a circle.
pub fn winding_oracle<F>(field: F, center: (f64, f64), radius: f64, n: usize) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<(f64, f64)>,
{
    let n = n.max(4096);
    let mut angles = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let t = std::f64::consts::TAU * k as f64 / n as f64;
        let (u, v) = field(center.0 + radius * t.cos(), center.1 + radius * t.sin())
            .map_err(|e| Error::Oracle(e.to_string()))?;
        if !(u.hypot(v) > 1e-10) {
            return Err(Error::Oracle(format!("field vanishes on the loop at angle {t}")));
        }
        angles.push(v.atan2(u));
    }
    let mut total = 0.0;
    for w in angles.windows(2) {
        let mut d = w[1] - w[0];
        while d > std::f64::consts::PI {
            d -= std::f64::consts::TAU;
        }
        while d <= -std::f64::consts::PI {
            d += std::f64::consts::TAU;
        }
        total += d;
    }
    Ok(total / std::f64::consts::TAU)
}

/// Pre-rounding index of the eigen-line field of `a dx² + 2b dxdy + c dy²`,
/// half the winding of `(a − c, 2b)`.
pub fn line_winding_oracle<F>(form: F, center: (f64, f64), radius: f64, n: usize) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<(f64, f64, f64)>,
{
    let w = winding_oracle(
        |x, y| {
            let (a, b, c) = form(x, y)?;
            Ok((a - c, 2.0 * b))
        },
        center,
        radius,
        n,
    )?;
    Ok(w / 2.0)
}
