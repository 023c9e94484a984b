use nalgebra::Matrix3;
use serde::Serialize;

use super::{lifted_velocity, BdeJets, LiftedPoint, QChartField, SlopeChart};
use crate::error::{Error, Result};
use crate::geometry::{null_directions, Directions};
use crate::jets::{Domain, SurfaceChart};
use crate::numerics::{real_cubic_roots, ProjRoot};

#[derive(Clone, Debug, PartialEq)]
pub struct IntegrationOptions {
    pub step: f64,
    pub max_steps: usize,
    /// Integration region; the chart domain when `None`.
    pub bounds: Option<Domain>,
    /// Integrate against the seed orientation.
    pub reverse: bool,
    /// Stop once the trajectory leaves this circle `(center, radius)`.
    pub exit_circle: Option<((f64, f64), f64)>,
    /// Switch slope charts when `|slope|` exceeds this.
    pub switch_at: f64,
    pub min_speed: f64,
    pub q_field: QChartField,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        IntegrationOptions {
            step: 1e-3,
            max_steps: 10_000,
            bounds: None,
            reverse: false,
            exit_circle: None,
            switch_at: 1.1,
            min_speed: 1e-12,
            q_field: QChartField::Corrected,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    Boundary,
    MaxSteps,
    Critical,
    ExitCircle,
    EvaluationFailure,
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticLine {
    pub vertices: Vec<LiftedPoint>,
    pub stop: StopReason,
    /// The seed sat on a double root; both branches coincide.
    pub double_root: bool,
    /// Largest `|F|` met along the lifted trajectory.
    pub max_first_integral: f64,
    /// Largest coefficient magnitude `max(|A|, |B|, |C|)` met along the trajectory.
    pub coefficient_scale: f64,
}

impl AsymptoticLine {
    /// `max |F|` relative to the coefficient scale; zero for an empty field.
    pub fn relative_first_integral(&self) -> f64 {
        if self.coefficient_scale > 0.0 {
            self.max_first_integral / self.coefficient_scale
        } else {
            0.0
        }
    }

    pub fn xy(&self) -> Vec<(f64, f64)> {
        self.vertices.iter().map(|v| (v.x, v.y)).collect()
    }
}

fn add(s: &LiftedPoint, k: &[f64; 3], h: f64) -> LiftedPoint {
    LiftedPoint {
        x: s.x + h * k[0],
        y: s.y + h * k[1],
        slope: s.slope + h * k[2],
        chart: s.chart,
    }
}

/// Re-express a state in the other chart when its slope has grown past the threshold.
fn switch(state: LiftedPoint) -> LiftedPoint {
    LiftedPoint {
        slope: 1.0 / state.slope,
        chart: state.chart.other(),
        ..state
    }
}

struct Tracker<'a> {
    chart: &'a SurfaceChart,
    opts: &'a IntegrationOptions,
    bounds: Domain,
}

impl Tracker<'_> {
    fn velocity(&self, s: &LiftedPoint, sign: f64) -> Result<[f64; 3]> {
        let jets = BdeJets::at(self.chart, s.x, s.y, 1)?;
        let v = lifted_velocity(&jets, s, self.opts.q_field);
        Ok(v.map(|c| c * sign))
    }

    fn coefficients(&self, s: &LiftedPoint) -> Result<(f64, f64)> {
        let jets = BdeJets::at(self.chart, s.x, s.y, 0)?;
        let c = jets.values();
        let f = match s.chart {
            SlopeChart::P => c.eval_p(s.slope),
            SlopeChart::Q => c.eval_q(s.slope),
        };
        Ok((f, c.scale()))
    }

    fn inside(&self, s: &LiftedPoint) -> bool {
        self.bounds.contains(s.x, s.y)
    }

    fn outside_exit(&self, s: &LiftedPoint) -> bool {
        match self.opts.exit_circle {
            Some(((cx, cy), r)) => (s.x - cx).hypot(s.y - cy) > r,
            None => false,
        }
    }

    fn rk4(&self, s: &LiftedPoint, k1: [f64; 3], sign: f64) -> Result<LiftedPoint> {
        let h = self.opts.step;
        let k2 = self.velocity(&add(s, &k1, h / 2.0), sign)?;
        let k3 = self.velocity(&add(s, &k2, h / 2.0), sign)?;
        let k4 = self.velocity(&add(s, &k3, h), sign)?;
        let mut k = [0.0; 3];
        for i in 0..3 {
            k[i] = (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0;
        }
        Ok(add(s, &k, h))
    }

    fn run(&self, start: LiftedPoint, mut sign: f64, double_root: bool) -> Result<AsymptoticLine> {
        let mut state = start;
        if state.slope.abs() > self.opts.switch_at {
            state = switch(state);
        }
        let mut vertices = vec![state];
        let (f0, s0) = self.coefficients(&state)?;
        let mut max_f = f0.abs();
        let mut scale = s0;
        let mut stop = StopReason::MaxSteps;
        for _ in 0..self.opts.max_steps {
            let v = match self.velocity(&state, sign) {
                Ok(v) => v,
                Err(Error::Eval(_)) => {
                    stop = StopReason::EvaluationFailure;
                    break;
                }
                Err(e) => return Err(e),
            };
            if (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt() < self.opts.min_speed {
                stop = StopReason::Critical;
                break;
            }
            let next = match self.rk4(&state, v, sign) {
                Ok(n) => n,
                Err(Error::Eval(_)) => {
                    stop = StopReason::EvaluationFailure;
                    break;
                }
                Err(e) => return Err(e),
            };
            if !self.inside(&next) || !next.slope.is_finite() {
                stop = StopReason::Boundary;
                break;
            }
            let mut next = next;
            if next.slope.abs() > self.opts.switch_at {
                let old = self.velocity(&next, sign)?;
                next = switch(next);
                let new = self.velocity(&next, sign)?;
                if old[0] * new[0] + old[1] * new[1] < 0.0 {
                    sign = -sign;
                }
            }
            match self.coefficients(&next) {
                Ok((f, s)) => {
                    max_f = max_f.max(f.abs());
                    scale = scale.max(s);
                }
                Err(Error::Eval(_)) => {
                    stop = StopReason::EvaluationFailure;
                    break;
                }
                Err(e) => return Err(e),
            }
            state = next;
            vertices.push(state);
            if self.outside_exit(&state) {
                stop = StopReason::ExitCircle;
                break;
            }
        }
        Ok(AsymptoticLine {
            vertices,
            stop,
            double_root,
            max_first_integral: max_f,
            coefficient_scale: scale,
        })
    }
}

/// Integrate the lifted field from an arbitrary state of the equation surface.
///
/// `orientation` multiplies the field; its sign picks the direction of travel.
pub fn trace_lifted(
    chart: &SurfaceChart,
    start: LiftedPoint,
    orientation: f64,
    opts: &IntegrationOptions,
) -> Result<AsymptoticLine> {
    let tracker = Tracker {
        chart,
        opts,
        bounds: opts.bounds.unwrap_or(chart.domain),
    };
    let sign = if opts.reverse { -orientation.signum() } else { orientation.signum() };
    tracker.run(start, sign, false)
}

/// Integrate the asymptotic line through `seed` along root `branch` (0 = smaller slope).
pub fn integrate_asymptotic_line(
    chart: &SurfaceChart,
    seed: (f64, f64),
    branch: usize,
    opts: &IntegrationOptions,
) -> Result<AsymptoticLine> {
    let (x, y) = seed;
    let coeffs = BdeJets::at(chart, x, y, 0)?.values();
    let tracker = Tracker {
        chart,
        opts,
        bounds: opts.bounds.unwrap_or(chart.domain),
    };
    let scale = coeffs.scale();
    if scale == 0.0 {
        let start = LiftedPoint {
            x,
            y,
            slope: 0.0,
            chart: SlopeChart::P,
        };
        return Ok(AsymptoticLine {
            vertices: vec![start],
            stop: StopReason::Critical,
            double_root: false,
            max_first_integral: 0.0,
            coefficient_scale: 0.0,
        });
    }
    if coeffs.discriminant() < -1e-12 * scale * scale {
        return Err(Error::EllipticSeed { x, y });
    }
    let dirs = match null_directions(coeffs.a, coeffs.b, coeffs.c, 1e-12) {
        Directions::Two(d1, d2) => {
            let mut v = vec![(d1[0], d1[1]), (d2[0], d2[1])];
            v.sort_by(|u, w| slope_key(*u).partial_cmp(&slope_key(*w)).unwrap());
            (v, false)
        }
        Directions::One(d) => (vec![(d[0], d[1]); 2], true),
        // A sub-threshold negative discriminant is a numerically double root.
        Directions::None => {
            let d = if coeffs.c.abs() >= coeffs.a.abs() {
                let p = -coeffs.b / (2.0 * coeffs.c);
                let n = (1.0 + p * p).sqrt();
                (1.0 / n, p / n)
            } else {
                let q = -coeffs.b / (2.0 * coeffs.a);
                let n = (1.0 + q * q).sqrt();
                (q / n, 1.0 / n)
            };
            (vec![d, d], true)
        }
        Directions::All => unreachable!("scale is nonzero"),
    };
    let (dirs, double_root) = dirs;
    let Some(&(dx, dy)) = dirs.get(branch) else {
        return Err(Error::NoRealBranch { branch, x, y });
    };
    let start = if dy.abs() <= dx.abs() {
        LiftedPoint {
            x,
            y,
            slope: dy / dx,
            chart: SlopeChart::P,
        }
    } else {
        LiftedPoint {
            x,
            y,
            slope: dx / dy,
            chart: SlopeChart::Q,
        }
    };
    // Orient along (dx, dy) with dx > 0, or dy > 0 when vertical.
    let (ox, oy) = if dx > 0.0 || (dx == 0.0 && dy > 0.0) { (dx, dy) } else { (-dx, -dy) };
    let v = tracker.velocity(&start, 1.0)?;
    let dot = v[0] * ox + v[1] * oy;
    let mut sign = if dot < 0.0 { -1.0 } else { 1.0 };
    if opts.reverse {
        sign = -sign;
    }
    tracker.run(start, sign, double_root)
}

fn slope_key(d: (f64, f64)) -> f64 {
    if d.0 == 0.0 {
        f64::INFINITY
    } else {
        d.1 / d.0
    }
}

/// One integrated separatrix leaving a critical point of the lifted field.
#[derive(Clone, Debug, Serialize)]
pub struct SeparatrixExit {
    pub root: ProjRoot,
    pub mu3: f64,
    /// Exit point on the circle, `None` if the trajectory never left it.
    pub exit: Option<(f64, f64)>,
    /// Direction of the exit point mod π, in `[0, π)`.
    pub angle: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparatrixCount {
    pub center: (f64, f64),
    pub radius: f64,
    pub roots: Vec<ProjRoot>,
    pub exits: Vec<SeparatrixExit>,
    /// Distinct exit directions mod π.
    pub directions: usize,
}

/// Jacobian of the lifted field at a state, from coefficient jets of order ≥ 2.
pub(crate) fn lifted_jacobian(jets: &BdeJets, state: &LiftedPoint) -> Matrix3<f64> {
    let s = state.slope;
    let d = |j: &crate::jets::Jet, i: usize, k: usize| j.get(i, k);
    let (a, b, c) = (&jets.a, &jets.b, &jets.c);
    // Partials of the equation surface polynomial in the active chart.
    let (w0, w1, w2) = match state.chart {
        SlopeChart::P => (1.0, s, s * s),
        SlopeChart::Q => (s * s, s, 1.0),
    };
    let (dw0, dw1, dw2) = match state.chart {
        SlopeChart::P => (0.0, 1.0, 2.0 * s),
        SlopeChart::Q => (2.0 * s, 1.0, 0.0),
    };
    let (ddw0, ddw2) = match state.chart {
        SlopeChart::P => (0.0, 2.0),
        SlopeChart::Q => (2.0, 0.0),
    };
    let f = |i: usize, k: usize| w0 * d(a, i, k) + w1 * d(b, i, k) + w2 * d(c, i, k);
    let fs = |i: usize, k: usize| dw0 * d(a, i, k) + dw1 * d(b, i, k) + dw2 * d(c, i, k);
    let fss = ddw0 * a.value() + ddw2 * c.value();
    let (fx, fy) = (f(1, 0), f(0, 1));
    let (fxx, fxy, fyy) = (f(2, 0), f(1, 1), f(0, 2));
    let (fsx, fsy, fs0) = (fs(1, 0), fs(0, 1), fs(0, 0));
    match state.chart {
        SlopeChart::P => {
            let r1 = [fsx, fsy, fss];
            let r2 = [s * fsx, s * fsy, s * fss + fs0];
            let r3 = [-(fxx + s * fxy), -(fxy + s * fyy), -(fsx + fy + s * fsy)];
            Matrix3::from_rows(&[r1, r2, r3].map(nalgebra::RowVector3::from))
        }
        SlopeChart::Q => {
            let r2 = [fsx, fsy, fss];
            let r1 = [s * fsx, s * fsy, s * fss + fs0];
            let r3 = [-(s * fxx + fxy), -(s * fxy + fyy), -(fx + s * fsx + fsy)];
            Matrix3::from_rows(&[r1, r2, r3].map(nalgebra::RowVector3::from))
        }
    }
}

/// Count separatrix directions at an isolated critical point of the asymptotic equation.
///
/// Each real root of the slope cubic is a critical point of the lifted field. From each
/// one the unstable (or, reversed, the stable) manifold transverse to the slope axis is
/// integrated until it leaves the circle of `radius`; exit angles are clustered mod π.
pub fn count_separatrices(
    chart: &SurfaceChart,
    center: (f64, f64),
    radius: f64,
    opts: &IntegrationOptions,
) -> Result<SeparatrixCount> {
    let jets = BdeJets::at(chart, center.0, center.1, 2)?;
    let (a, b, c) = (&jets.a, &jets.b, &jets.c);
    // F_x + pF_y on the slope axis.
    let cubic = [
        c.get(0, 1),
        c.get(1, 0) + b.get(0, 1),
        b.get(1, 0) + a.get(0, 1),
        a.get(1, 0),
    ];
    let roots = real_cubic_roots(cubic, 1e-10);
    let mut exits = Vec::new();
    let eps = 1e-3 * radius;
    for root in &roots {
        let state = match *root {
            ProjRoot::Finite(p) if p.abs() <= 1.0 => LiftedPoint {
                x: center.0,
                y: center.1,
                slope: p,
                chart: SlopeChart::P,
            },
            ProjRoot::Finite(p) => LiftedPoint {
                x: center.0,
                y: center.1,
                slope: 1.0 / p,
                chart: SlopeChart::Q,
            },
            ProjRoot::Infinity => LiftedPoint {
                x: center.0,
                y: center.1,
                slope: 0.0,
                chart: SlopeChart::Q,
            },
        };
        let jac = lifted_jacobian(&jets, &state);
        let mu1 = jac[(2, 2)];
        let mu3 = jac.trace() - mu1;
        let shifted = jac - Matrix3::identity() * mu3;
        let svd = shifted.svd(false, true);
        let vt = svd.v_t.expect("requested");
        let (imin, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, v)| if *v < acc.1 { (i, *v) } else { acc });
        let v = vt.row(imin);
        let planar = v[0].hypot(v[1]);
        if planar < 1e-12 {
            continue;
        }
        for side in [1.0, -1.0] {
            let k = side * eps / planar;
            let start = LiftedPoint {
                x: state.x + k * v[0],
                y: state.y + k * v[1],
                slope: state.slope + k * v[2],
                chart: state.chart,
            };
            let mut o = opts.clone();
            o.exit_circle = Some((center, radius));
            o.reverse = false;
            // A few escape times `ln(r/ε)/|μ₃|` of the linearization.
            let escape = (radius / eps).ln() / mu3.abs().max(1e-12) / o.step;
            o.max_steps = (3.0 * escape).clamp(2_000.0, 60_000.0) as usize;
            let orientation = if mu3 >= 0.0 { 1.0 } else { -1.0 };
            let line = trace_lifted(chart, start, orientation, &o)?;
            let (exit, angle) = if line.stop == StopReason::ExitCircle {
                let last = line.vertices.last().expect("non-empty");
                let ang = (last.y - center.1).atan2(last.x - center.0).rem_euclid(std::f64::consts::PI);
                (Some((last.x, last.y)), Some(ang))
            } else {
                (None, None)
            };
            exits.push(SeparatrixExit {
                root: *root,
                mu3,
                exit,
                angle,
            });
        }
    }
    let mut angles: Vec<f64> = exits.iter().filter_map(|e| e.angle).collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let directions = cluster_mod_pi(&angles, 0.25);
    Ok(SeparatrixCount {
        center,
        radius,
        roots,
        exits,
        directions,
    })
}

fn cluster_mod_pi(sorted: &[f64], tol: f64) -> usize {
    if sorted.is_empty() {
        return 0;
    }
    let mut count = 1;
    for w in sorted.windows(2) {
        if w[1] - w[0] > tol {
            count += 1;
        }
    }
    // Wrap-around: first and last clusters may be the same direction.
    if count > 1 && sorted[0] + std::f64::consts::PI - sorted[sorted.len() - 1] <= tol {
        count -= 1;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star() -> SurfaceChart {
        SurfaceChart::normal_form(1.0, [0.0, 0.0, 0.0, 1.0, 1.0], None, Domain::square(0.5)).unwrap()
    }

    #[test]
    fn flat_plane_stops_immediately() {
        let c = SurfaceChart::generating_function("0", Domain::square(1.0)).unwrap();
        let l = integrate_asymptotic_line(&c, (0.1, 0.1), 0, &IntegrationOptions::default()).unwrap();
        assert_eq!(l.stop, StopReason::Critical);
        assert_eq!(l.vertices.len(), 1);
    }

    #[test]
    fn elliptic_seed_rejected() {
        let c = SurfaceChart::generating_function("x^3/3 - x*y^2", Domain::square(1.0)).unwrap();
        assert!(matches!(
            integrate_asymptotic_line(&c, (0.0, 0.0), 0, &IntegrationOptions::default()),
            Err(Error::EllipticSeed { .. })
        ));
    }

    #[test]
    fn first_integral_conserved() {
        let c = star();
        let mut o = IntegrationOptions::default();
        o.max_steps = 2000;
        for branch in 0..2 {
            let l = integrate_asymptotic_line(&c, (0.2, 0.1), branch, &o).unwrap();
            assert!(l.vertices.len() > 10);
            assert!(l.relative_first_integral() < 1e-6, "{}", l.relative_first_integral());
        }
    }

    #[test]
    fn separatrices_star_and_lemon() {
        let o = IntegrationOptions::default();
        let s = count_separatrices(&star(), (0.0, 0.0), 0.1, &o).unwrap();
        assert_eq!(s.roots.len(), 3);
        assert_eq!(s.directions, 3, "{s:?}");
        let lemon =
            SurfaceChart::normal_form(1.0, [0.0, 0.0, 1.0, 0.0, 1.0], None, Domain::square(0.5)).unwrap();
        let s = count_separatrices(&lemon, (0.0, 0.0), 0.1, &o).unwrap();
        assert_eq!(s.roots.len(), 1);
        assert_eq!(s.directions, 1, "{s:?}");
    }

    #[test]
    fn cluster_wraps() {
        assert_eq!(cluster_mod_pi(&[0.01, 1.0, 3.13], 0.1), 2);
        assert_eq!(cluster_mod_pi(&[0.5, 0.55, 2.0], 0.1), 2);
    }
}
