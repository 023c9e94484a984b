//! Binary differential equations `A dx² + B dxdy + C dy² = 0` of asymptotic lines,
//! the lifted field on the equation surface, and curve tracing.
//!
//! Slopes live in two projective charts: `p = dy/dx` and `q = dx/dy`. On the
//! p-chart the equation surface is `F(x, y, p) = A + Bp + Cp²`, on the q-chart
//! `F̂(x, y, q) = Aq² + Bq + C`.

mod discriminant;
mod integrate;

pub use discriminant::{discriminant_jet, trace_discriminant, DiscriminantTrace};
pub use integrate::{
    count_separatrices, integrate_asymptotic_line, trace_lifted, AsymptoticLine, IntegrationOptions, SeparatrixCount,
    SeparatrixExit, StopReason,
};

pub(crate) use integrate::lifted_jacobian;

use serde::Serialize;

use crate::error::Result;
use crate::geometry::fundamental_forms;
use crate::jets::{Jet, SurfaceChart};

/// Which equation a set of coefficients came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BdeForm {
    /// `H_φ dx² + (EM − 2FH_φ) dxdy + (E²H_ψ − EFM + F²H_φ) dy²`.
    Full,
    /// `H_φ dx² + M dxdy + H_ψ dy²`.
    Reduced,
    /// `N dx² + M dxdy + L dy²`, the determinant of the second fundamental form
    /// along a direction, exact in chart coordinates.
    Chart,
    /// Mean directional field.
    Mean,
}

/// Coefficients of `a dx² + b dxdy + c dy²` at one point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BdeCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub form: BdeForm,
}

impl BdeCoeffs {
    pub fn scale(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs())
    }

    /// `b² − 4ac`; positive where two real directions exist.
    pub fn discriminant(&self) -> f64 {
        self.b * self.b - 4.0 * self.a * self.c
    }

    pub fn eval_p(&self, p: f64) -> f64 {
        self.a + self.b * p + self.c * p * p
    }

    pub fn eval_q(&self, q: f64) -> f64 {
        self.a * q * q + self.b * q + self.c
    }
}

/// Asymptotic equation at a point, full or reduced.
pub fn asymptotic_bde(chart: &SurfaceChart, x: f64, y: f64, reduced: bool) -> Result<BdeCoeffs> {
    let sv = chart.second_jets(x, y, 0)?.values();
    let (hphi, hpsi, m) = (sv.h_phi(), sv.h_psi(), sv.m());
    if reduced {
        return Ok(BdeCoeffs {
            a: hphi,
            b: m,
            c: hpsi,
            form: BdeForm::Reduced,
        });
    }
    let fc = fundamental_forms(chart, x, y)?;
    let (e, f) = (fc.e_cap, fc.f_cap);
    Ok(BdeCoeffs {
        a: hphi,
        b: e * m - 2.0 * f * hphi,
        c: e * e * hpsi - e * f * m + f * f * hphi,
        form: BdeForm::Full,
    })
}

/// The chart-exact asymptotic equation `N dx² + M dxdy + L dy²`.
pub fn chart_bde(chart: &SurfaceChart, x: f64, y: f64) -> Result<BdeCoeffs> {
    let sv = chart.second_jets(x, y, 0)?.values();
    Ok(BdeCoeffs {
        a: sv.n(),
        b: sv.m(),
        c: sv.l(),
        form: BdeForm::Chart,
    })
}

/// `M² − 4H_φH_ψ`. Negative on the elliptic side.
pub fn discriminant_field(chart: &SurfaceChart, x: f64, y: f64) -> Result<f64> {
    let sv = chart.second_jets(x, y, 0)?.values();
    Ok(sv.m() * sv.m() - 4.0 * sv.n() * sv.l())
}

/// Jets of the chart-exact coefficients `(N, M, L)` at a point.
#[derive(Clone, Debug)]
pub struct BdeJets {
    pub a: Jet,
    pub b: Jet,
    pub c: Jet,
}

impl BdeJets {
    /// Jets of order `order` (at most 2 for generating-function charts).
    pub fn at(chart: &SurfaceChart, x: f64, y: f64, order: usize) -> Result<BdeJets> {
        let sj = chart.second_jets(x, y, order)?;
        Ok(BdeJets {
            a: sj.n(),
            b: sj.m(),
            c: sj.l(),
        })
    }

    pub fn from_coeffs(a: Jet, b: Jet, c: Jet) -> BdeJets {
        BdeJets { a, b, c }
    }

    pub fn values(&self) -> BdeCoeffs {
        BdeCoeffs {
            a: self.a.value(),
            b: self.b.value(),
            c: self.c.value(),
            form: BdeForm::Chart,
        }
    }

    /// `(F, F_x, F_y, F_s)` in the given slope chart.
    pub fn equation_surface(&self, chart: SlopeChart, s: f64) -> [f64; 4] {
        let g = |j: &Jet| (j.value(), j.get(1, 0), j.get(0, 1));
        let (a, ax, ay) = g(&self.a);
        let (b, bx, by) = g(&self.b);
        let (c, cx, cy) = g(&self.c);
        match chart {
            SlopeChart::P => [
                a + b * s + c * s * s,
                ax + bx * s + cx * s * s,
                ay + by * s + cy * s * s,
                b + 2.0 * c * s,
            ],
            SlopeChart::Q => [
                a * s * s + b * s + c,
                ax * s * s + bx * s + cx,
                ay * s * s + by * s + cy,
                2.0 * a * s + b,
            ],
        }
    }
}

/// Active projective chart of the slope coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SlopeChart {
    /// `p = dy/dx`.
    P,
    /// `q = dx/dy`.
    Q,
}

impl SlopeChart {
    pub fn tag(self) -> &'static str {
        match self {
            SlopeChart::P => "p",
            SlopeChart::Q => "q",
        }
    }

    pub fn other(self) -> SlopeChart {
        match self {
            SlopeChart::P => SlopeChart::Q,
            SlopeChart::Q => SlopeChart::P,
        }
    }

    /// Unit spatial direction of the slope `s` in this chart.
    pub fn direction(self, s: f64) -> (f64, f64) {
        let n = (1.0 + s * s).sqrt();
        match self {
            SlopeChart::P => (1.0 / n, s / n),
            SlopeChart::Q => (s / n, 1.0 / n),
        }
    }
}

/// A point of the equation surface.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LiftedPoint {
    pub x: f64,
    pub y: f64,
    pub slope: f64,
    pub chart: SlopeChart,
}

/// Which third component to use on the q-chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QChartField {
    /// `−(qF̂_x + F̂_y)`, which keeps `F̂` a first integral.
    #[default]
    Corrected,
    /// `−q(F̂_x + F̂_y)`.
    Printed,
}

/// Lifted vector field at a state, given coefficient jets (order ≥ 1) at `(state.x, state.y)`.
pub fn lifted_velocity(jets: &BdeJets, state: &LiftedPoint, q_field: QChartField) -> [f64; 3] {
    let s = state.slope;
    let [_, fx, fy, fs] = jets.equation_surface(state.chart, s);
    match state.chart {
        SlopeChart::P => [fs, s * fs, -(fx + s * fy)],
        SlopeChart::Q => match q_field {
            QChartField::Corrected => [s * fs, fs, -(s * fx + fy)],
            QChartField::Printed => [s * fs, fs, -s * (fx + fy)],
        },
    }
}

/// Evaluate the lifted field at an arbitrary state of a chart.
pub fn lifted_velocity_at(chart: &SurfaceChart, state: &LiftedPoint, q_field: QChartField) -> Result<[f64; 3]> {
    let jets = BdeJets::at(chart, state.x, state.y, 1)?;
    Ok(lifted_velocity(&jets, state, q_field))
}

/// Value of the equation surface at a state.
pub fn first_integral(chart: &SurfaceChart, state: &LiftedPoint) -> Result<f64> {
    let c = chart_bde(chart, state.x, state.y)?;
    Ok(match state.chart {
        SlopeChart::P => c.eval_p(state.slope),
        SlopeChart::Q => c.eval_q(state.slope),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::Domain;

    fn saddle() -> SurfaceChart {
        SurfaceChart::generating_function("x^3/3 - x*y^2", Domain::square(1.0)).unwrap()
    }

    fn star() -> SurfaceChart {
        SurfaceChart::normal_form(1.0, [0.0, 0.0, 0.0, 1.0, 1.0], None, Domain::square(0.5)).unwrap()
    }

    #[test]
    fn coefficients_at_umbilic() {
        let r = asymptotic_bde(&saddle(), 0.0, 0.0, true).unwrap();
        assert_eq!((r.a, r.b, r.c), (-4.0, 0.0, -4.0));
        let f = asymptotic_bde(&saddle(), 0.0, 0.0, false).unwrap();
        assert_eq!((f.a, f.b, f.c), (-4.0, 0.0, -4.0));
        assert_eq!(discriminant_field(&saddle(), 0.0, 0.0).unwrap(), -64.0);
    }

    #[test]
    fn inflection_coefficients_vanish() {
        let r = asymptotic_bde(&star(), 0.0, 0.0, true).unwrap();
        assert!(r.scale() < 1e-15);
    }

    #[test]
    fn slope_axis_velocity() {
        let c = star();
        for p in [-3.0, -1.0, 0.0, 0.5, 2.0] {
            let v = lifted_velocity_at(
                &c,
                &LiftedPoint {
                    x: 0.0,
                    y: 0.0,
                    slope: p,
                    chart: SlopeChart::P,
                },
                QChartField::Corrected,
            )
            .unwrap();
            assert!(v[0].abs() < 1e-14 && v[1].abs() < 1e-14);
            assert!((v[2] + (p * p + 2.0 * p)).abs() < 1e-12);
        }
    }

    #[test]
    fn flat_plane_field_vanishes() {
        let c = SurfaceChart::generating_function("0", Domain::square(1.0)).unwrap();
        let v = lifted_velocity_at(
            &c,
            &LiftedPoint {
                x: 0.3,
                y: -0.2,
                slope: 0.4,
                chart: SlopeChart::Q,
            },
            QChartField::Corrected,
        )
        .unwrap();
        assert_eq!(v, [0.0, 0.0, 0.0]);
    }
}
