//! Unitary normalisation of the surface at an inflection.

use serde::Serialize;

use crate::bde::BdeJets;
use crate::error::{Error, Result};
use crate::jets::{Convention, Jet, SecondJets, SurfaceChart};

const ORDER: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FrameBranch {
    /// Rotation with `a₁ > 0`.
    Principal,
    /// `a₁ ≈ 0`; the rotation is `(0, 1)`.
    Complementary,
}

/// Normal-form data at an inflection together with the normalised graph jets.
#[derive(Clone, Debug, Serialize)]
pub struct NormalFormJet {
    pub eta: f64,
    pub zeta: [f64; 5],
    /// `(a₁, a₂)` of the final rotation.
    pub rotation: (f64, f64),
    pub branch: FrameBranch,
    pub base: (f64, f64),
    /// Largest second derivative that should vanish after normalisation.
    pub j2_residual: f64,
    #[serde(skip)]
    pub phi: Jet,
    #[serde(skip)]
    pub psi: Jet,
}

impl NormalFormJet {
    /// Exact jets of the normal form with no higher-order terms.
    pub fn from_coefficients(eta: f64, zeta: [f64; 5]) -> NormalFormJet {
        let mut phi = Jet::zero(ORDER);
        let mut psi = Jet::zero(ORDER);
        phi.set(2, 0, eta);
        phi.set(3, 0, zeta[0]);
        phi.set(2, 1, zeta[1]);
        phi.set(1, 2, zeta[2]);
        phi.set(0, 3, zeta[3]);
        psi.set(3, 0, zeta[1]);
        psi.set(2, 1, zeta[2]);
        psi.set(1, 2, zeta[3]);
        psi.set(0, 3, zeta[4]);
        NormalFormJet {
            eta,
            zeta,
            rotation: (1.0, 0.0),
            branch: FrameBranch::Principal,
            base: (0.0, 0.0),
            j2_residual: 0.0,
            phi,
            psi,
        }
    }

    /// Size of the coefficients, used to scale tolerances.
    pub fn scale(&self) -> f64 {
        self.zeta.iter().fold(self.eta.abs(), |m, z| m.max(z.abs()))
    }

    /// `ζ₄² − ζ₃ζ₅`: positive for three slope roots, negative for one.
    pub fn invariant(&self) -> f64 {
        self.zeta[3] * self.zeta[3] - self.zeta[2] * self.zeta[4]
    }

    /// Second-derivative jets of the normalised graph at the origin.
    pub fn second_jets(&self, order: usize) -> SecondJets {
        let o = order.min(ORDER - 2);
        let d = |j: &Jet, a: usize, b: usize| {
            let mut j = *j;
            for _ in 0..a {
                j = j.dx();
            }
            for _ in 0..b {
                j = j.dy();
            }
            j.truncate(o)
        };
        SecondJets {
            phi: [d(&self.phi, 2, 0), d(&self.phi, 1, 1), d(&self.phi, 0, 2)],
            psi: [d(&self.psi, 2, 0), d(&self.psi, 1, 1), d(&self.psi, 0, 2)],
        }
    }

    /// Coefficient jets `(N, M, L)` of the normalised graph at the origin.
    pub fn bde_jets(&self, order: usize) -> BdeJets {
        let sj = self.second_jets(order);
        BdeJets::from_coeffs(sj.n(), sj.m(), sj.l())
    }
}

/// Brings the surface at `(x, y)` to normal form by a unitary motion and a
/// rotation in the tangent plane.
pub fn inflection_frame(chart: &SurfaceChart, x: f64, y: f64) -> Result<NormalFormJet> {
    let mut emb = chart.embedding_jets(x, y, ORDER)?;
    if chart.convention == Convention::Variant {
        emb[3] = -emb[3];
    }
    let p: [f64; 4] = emb.clone().map(|j| j.value());
    let t1: [f64; 4] = emb.clone().map(|j| j.get(1, 0));
    let t2: [f64; 4] = emb.clone().map(|j| j.get(0, 1));
    let dot = |a: &[f64; 4], b: &[f64; 4]| (0..4).map(|k| a[k] * b[k]).sum::<f64>();
    let n1 = dot(&t1, &t1).sqrt();
    let e1 = t1.map(|v| v / n1);
    let proj = dot(&t2, &e1);
    let mut e2: [f64; 4] = std::array::from_fn(|k| t2[k] - proj * e1[k]);
    let n2 = dot(&e2, &e2).sqrt();
    let w = n1 * n2;
    if !(w > 1e-12) {
        return Err(Error::DegenerateMetric { w, x, y });
    }
    e2 = e2.map(|v| v / n2);
    let j = Convention::Standard;
    let axes = [e1, e2, j.j(e1), j.j(e2)];
    let coords: Vec<Jet> = axes
        .iter()
        .map(|a| {
            let mut s = Jet::zero(ORDER);
            for k in 0..4 {
                s += (emb[k] + (-p[k])).scale(a[k]);
            }
            s
        })
        .collect();
    let (xt, yt) = (coords[0], coords[1]);
    let l = [[xt.get(1, 0), xt.get(0, 1)], [yt.get(1, 0), yt.get(0, 1)]];
    let det = l[0][0] * l[1][1] - l[0][1] * l[1][0];
    let linv = [[l[1][1] / det, -l[0][1] / det], [-l[1][0] / det, l[0][0] / det]];
    let ix = Jet::var_x(0.0, ORDER);
    let iy = Jet::var_y(0.0, ORDER);
    let mut su = ix.scale(linv[0][0]) + iy.scale(linv[0][1]);
    let mut sv = ix.scale(linv[1][0]) + iy.scale(linv[1][1]);
    for _ in 0..ORDER + 2 {
        let rx = ix - xt.compose(&su, &sv);
        let ry = iy - yt.compose(&su, &sv);
        su += rx.scale(linv[0][0]) + ry.scale(linv[0][1]);
        sv += rx.scale(linv[1][0]) + ry.scale(linv[1][1]);
    }
    let phi_t = coords[2].compose(&su, &sv);
    let psi_t = coords[3].compose(&su, &sv);

    let second = |f: &Jet| [f.get(2, 0), f.get(1, 1), f.get(0, 2)];
    let (hp, hs) = (second(&phi_t), second(&psi_t));
    let s2 = hp.iter().chain(hs.iter()).fold(0.0_f64, |m, v| m.max(v.abs()));
    if s2 <= 1e-10 {
        return Err(Error::Genericity(format!(
            "second fundamental form vanishes at ({x}, {y})"
        )));
    }
    let minors = [
        hp[0] * hs[1] - hp[1] * hs[0],
        hp[0] * hs[2] - hp[2] * hs[0],
        hp[1] * hs[2] - hp[2] * hs[1],
    ];
    if minors.iter().any(|m| m.abs() > 1e-8 * s2 * s2) {
        return Err(Error::NotInflection { x, y, rank: 2 });
    }
    let wv = (hp[0] + hp[2], hs[0] + hs[2]);
    let wn = wv.0.hypot(wv.1);
    if wn <= 1e-10 * s2 {
        return Err(Error::Genericity(format!(
            "second fundamental form at ({x}, {y}) has no normal component of trace"
        )));
    }
    let (mut a1, mut a2) = (wv.0 / wn, wv.1 / wn);
    let branch = if a1.abs() < 1e-8 {
        a1 = 0.0;
        a2 = 1.0;
        FrameBranch::Complementary
    } else {
        if a1 < 0.0 {
            a1 = -a1;
            a2 = -a2;
        }
        FrameBranch::Principal
    };
    let xr = ix.scale(a1) - iy.scale(a2);
    let yr = ix.scale(a2) + iy.scale(a1);
    let phi = (phi_t.scale(a1) + psi_t.scale(a2)).compose(&xr, &yr);
    let psi = (psi_t.scale(a1) - phi_t.scale(a2)).compose(&xr, &yr);
    let j2_residual = [phi.get(1, 1), phi.get(0, 2), psi.get(2, 0), psi.get(1, 1), psi.get(0, 2)]
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    if j2_residual > 1e-7 * s2 {
        return Err(Error::NotInflection { x, y, rank: 2 });
    }
    Ok(NormalFormJet {
        eta: phi.get(2, 0),
        zeta: [phi.get(3, 0), phi.get(2, 1), phi.get(1, 2), phi.get(0, 3), psi.get(0, 3)],
        rotation: (a1, a2),
        branch,
        base: (x, y),
        j2_residual,
        phi,
        psi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::Domain;

    #[test]
    fn recovers_coefficients() {
        let zeta = [0.3, -0.2, 0.7, 1.1, -0.9];
        let c = SurfaceChart::normal_form(1.5, zeta, None, Domain::square(0.5)).unwrap();
        let nf = inflection_frame(&c, 0.0, 0.0).unwrap();
        assert!((nf.eta - 1.5).abs() < 1e-12);
        for k in 0..5 {
            assert!((nf.zeta[k] - zeta[k]).abs() < 1e-12, "{:?}", nf.zeta);
        }
        assert_eq!(nf.branch, FrameBranch::Principal);
    }

    #[test]
    fn negative_eta_keeps_identity() {
        let c = SurfaceChart::normal_form(-2.0, [0.0, 0.0, 1.0, 0.5, 1.0], None, Domain::square(0.5)).unwrap();
        let nf = inflection_frame(&c, 0.0, 0.0).unwrap();
        assert!((nf.eta + 2.0).abs() < 1e-12);
        assert_eq!(nf.rotation, (1.0, 0.0));
    }

    #[test]
    fn rotated_chart_has_same_invariant() {
        let (c, s) = (0.6_f64, 0.8_f64);
        let g = format!(
            "(1/6)*({c}*x + {s}*y)^3 + (1/4)*({c}*x + {s}*y)^2*(-{s}*x + {c}*y)^2 + (1/3)*({c}*x + {s}*y)*(-{s}*x + {c}*y)^3 + (1/24)*(-{s}*x + {c}*y)^4"
        );
        let chart = SurfaceChart::generating_function(&g, Domain::square(0.5)).unwrap();
        let nf = inflection_frame(&chart, 0.0, 0.0).unwrap();
        assert!((nf.eta - 1.0).abs() < 1e-12);
        assert!((nf.invariant() - 3.0).abs() < 1e-12);
        for k in 0..5 {
            assert!((nf.zeta[k] - [0.0, 0.0, 1.0, 2.0, 1.0][k]).abs() < 1e-12, "{:?}", nf.zeta);
        }
    }

    #[test]
    fn rejects_rank_two() {
        let c = SurfaceChart::generating_function("x^3/3 - x*y^2", Domain::square(1.0)).unwrap();
        assert!(matches!(inflection_frame(&c, 0.0, 0.0), Err(Error::NotInflection { rank: 2, .. })));
    }
}
