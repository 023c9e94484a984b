//! Surface charts in R⁴ and their derivative jets.

use crate::error::{Error, Result};
use crate::jets::expr::Expr;
use crate::jets::jet::{Jet, MAX_ORDER};

/// Which symplectic form the chart is Lagrangean for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Convention {
    /// ω = dx∧du + dy∧dv; graphs satisfy φ_y ≡ ψ_x.
    #[default]
    Standard,
    /// ω′ = dx∧du − dy∧dv; graphs satisfy φ_y ≡ −ψ_x.
    Variant,
}

impl Convention {
    /// The complex structure compatible with the form.
    pub fn j(self, v: [f64; 4]) -> [f64; 4] {
        match self {
            Convention::Standard => [-v[2], -v[3], v[0], v[1]],
            Convention::Variant => [-v[2], v[3], v[0], -v[1]],
        }
    }

    fn j_jet(self, v: &[Jet; 4]) -> [Jet; 4] {
        match self {
            Convention::Standard => [-v[2], -v[3], v[0], v[1]],
            Convention::Variant => [-v[2], v[3], v[0], -v[1]],
        }
    }

    /// ω(p, q).
    pub fn omega(self, p: [f64; 4], q: [f64; 4]) -> f64 {
        let s = match self {
            Convention::Standard => 1.0,
            Convention::Variant => -1.0,
        };
        (p[0] * q[2] - p[2] * q[0]) + s * (p[1] * q[3] - p[3] * q[1])
    }
}

/// A closed rectangle of parameter values.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Domain {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Domain {
    pub fn new(x: (f64, f64), y: (f64, f64)) -> Result<Domain> {
        let ok = |r: (f64, f64)| r.0.is_finite() && r.1.is_finite() && r.0 < r.1;
        if !ok(x) || !ok(y) {
            return Err(Error::Domain(format!(
                "[{}, {}] x [{}, {}]",
                x.0, x.1, y.0, y.1
            )));
        }
        Ok(Domain { x, y })
    }

    pub fn square(h: f64) -> Domain {
        Domain {
            x: (-h, h),
            y: (-h, h),
        }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x.0 && x <= self.x.1 && y >= self.y.0 && y <= self.y.1
    }

    pub fn width(&self) -> f64 {
        self.x.1 - self.x.0
    }

    pub fn height(&self) -> f64 {
        self.y.1 - self.y.0
    }

    /// `n × n` grid of points including the corners, row-major in y.
    pub fn grid(&self, n: usize) -> Vec<(f64, f64)> {
        let n = n.max(2);
        let mut out = Vec::with_capacity(n * n);
        for j in 0..n {
            let y = self.y.0 + self.height() * j as f64 / (n - 1) as f64;
            for i in 0..n {
                let x = self.x.0 + self.width() * i as f64 / (n - 1) as f64;
                out.push((x, y));
            }
        }
        out
    }
}

/// An auxiliary definition of an immersion, evaluated before the components.
#[derive(Clone, Debug, PartialEq)]
pub struct Definition {
    pub name: String,
    pub expr: Expr,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SurfaceKind {
    /// φ = F_x, ψ = F_y.
    GeneratingFunction { f: Expr },
    ComponentPair { phi: Expr, psi: Expr },
    /// Ξ(s, t) = four components; `defs` may reference the parameters and earlier defs.
    Immersion {
        params: [String; 2],
        defs: Vec<Definition>,
        components: [Expr; 4],
    },
}

/// Second derivatives of the two graph components, or for immersions the
/// pairings `Ξ_ij · n_k` with the normals `n_k = proj_N(J Ξ_k)`.
#[derive(Clone, Copy, Debug)]
pub struct SecondJets {
    /// (xx, xy, yy)
    pub phi: [Jet; 3],
    pub psi: [Jet; 3],
}

impl SecondJets {
    pub fn values(&self) -> SecondValues {
        SecondValues {
            phi: self.phi.map(|j| j.value()),
            psi: self.psi.map(|j| j.value()),
        }
    }

    pub fn h_phi(&self) -> Jet {
        let [xx, xy, yy] = self.phi;
        xx * yy - xy * xy
    }

    pub fn h_psi(&self) -> Jet {
        let [xx, xy, yy] = self.psi;
        xx * yy - xy * xy
    }

    /// φ_xx ψ_yy − φ_yy ψ_xx
    pub fn m(&self) -> Jet {
        self.phi[0] * self.psi[2] - self.phi[2] * self.psi[0]
    }

    /// φ_xy ψ_yy − φ_yy ψ_xy
    pub fn l(&self) -> Jet {
        self.phi[1] * self.psi[2] - self.phi[2] * self.psi[1]
    }

    /// φ_xx ψ_xy − φ_xy ψ_xx
    pub fn n(&self) -> Jet {
        self.phi[0] * self.psi[1] - self.phi[1] * self.psi[0]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecondValues {
    pub phi: [f64; 3],
    pub psi: [f64; 3],
}

impl SecondValues {
    pub fn h_phi(&self) -> f64 {
        self.phi[0] * self.phi[2] - self.phi[1] * self.phi[1]
    }

    pub fn h_psi(&self) -> f64 {
        self.psi[0] * self.psi[2] - self.psi[1] * self.psi[1]
    }

    pub fn q(&self) -> f64 {
        self.phi[0] * self.psi[2] - 2.0 * self.phi[1] * self.psi[1] + self.phi[2] * self.psi[0]
    }

    pub fn m(&self) -> f64 {
        self.phi[0] * self.psi[2] - self.phi[2] * self.psi[0]
    }

    pub fn l(&self) -> f64 {
        self.phi[1] * self.psi[2] - self.phi[2] * self.psi[1]
    }

    pub fn n(&self) -> f64 {
        self.phi[0] * self.psi[1] - self.phi[1] * self.psi[0]
    }
}

/// Tolerance used when checking component pairs and immersions for the Lagrangean condition.
pub const LAGRANGEAN_TOL: f64 = 1e-8;
/// Side of the validation grid.
pub const VALIDATION_GRID: usize = 11;

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceChart {
    pub kind: SurfaceKind,
    pub domain: Domain,
    pub convention: Convention,
}

impl SurfaceChart {
    pub fn generating_function(f: &str, domain: Domain) -> Result<SurfaceChart> {
        let f = parse(f, &["x", "y"], "F")?;
        Ok(SurfaceChart {
            kind: SurfaceKind::GeneratingFunction { f },
            domain,
            convention: Convention::Standard,
        })
    }

    pub fn component_pair(
        phi: &str,
        psi: &str,
        domain: Domain,
        convention: Convention,
    ) -> Result<SurfaceChart> {
        let phi = parse(phi, &["x", "y"], "phi")?;
        let psi = parse(psi, &["x", "y"], "psi")?;
        let chart = SurfaceChart {
            kind: SurfaceKind::ComponentPair { phi, psi },
            domain,
            convention,
        };
        chart.validate_lagrangean()?;
        Ok(chart)
    }

    /// `defs` are `(name, expression)` pairs evaluated in order.
    pub fn immersion(
        params: [&str; 2],
        defs: &[(&str, &str)],
        components: [&str; 4],
        domain: Domain,
        convention: Convention,
    ) -> Result<SurfaceChart> {
        let mut names: Vec<&str> = params.to_vec();
        let mut parsed = Vec::new();
        for (name, text) in defs {
            let expr = parse(text, &names, name)?;
            parsed.push(Definition {
                name: name.to_string(),
                expr,
            });
            names.push(name);
        }
        let mut comps = Vec::new();
        for (k, text) in components.iter().enumerate() {
            comps.push(parse(text, &names, &format!("component {}", k + 1))?);
        }
        let components: [Expr; 4] = comps.try_into().expect("four components");
        let chart = SurfaceChart {
            kind: SurfaceKind::Immersion {
                params: [params[0].to_string(), params[1].to_string()],
                defs: parsed,
                components,
            },
            domain,
            convention,
        };
        chart.validate_lagrangean()?;
        Ok(chart)
    }

    /// Graph of the normal form with quadratic part ½η x² and cubic coefficients ζ₁..ζ₅
    /// (third derivatives φ_xxx, φ_xxy, φ_xyy, φ_yyy, ψ_yyy), plus optional higher terms
    /// added to the generating function.
    pub fn normal_form(eta: f64, zeta: [f64; 5], extra: Option<&str>, domain: Domain) -> Result<SurfaceChart> {
        let [z1, z2, z3, z4, z5] = zeta;
        let mut f = format!(
            "{}*x^3 + {}*x^4 + {}*x^3*y + {}*x^2*y^2 + {}*x*y^3 + {}*y^4",
            num(eta / 6.0),
            num(z1 / 24.0),
            num(z2 / 6.0),
            num(z3 / 4.0),
            num(z4 / 6.0),
            num(z5 / 24.0)
        );
        if let Some(e) = extra {
            f = format!("{f} + ({e})");
        }
        SurfaceChart::generating_function(&f, domain)
    }

    /// Graph of the umbilic normal form: quadratic parts ½α(x²−y²) + βxy and
    /// ½β(x²−y²) − αxy, cubic parts as in [`SurfaceChart::normal_form`].
    pub fn umbilic_normal_form(
        alpha: f64,
        beta: f64,
        zeta: [f64; 5],
        extra: Option<&str>,
        domain: Domain,
    ) -> Result<SurfaceChart> {
        let cubic = format!(
            "{}*(x^3/6 - x*y^2/2) + {}*(x^2*y/2 - y^3/6)",
            num(alpha),
            num(beta)
        );
        let extra = match extra {
            Some(e) => format!("{cubic} + ({e})"),
            None => cubic,
        };
        SurfaceChart::normal_form(0.0, zeta, Some(&extra), domain)
    }

    pub fn is_graph(&self) -> bool {
        !matches!(self.kind, SurfaceKind::Immersion { .. })
    }

    /// Jets of φ and ψ for graph kinds.
    pub fn graph_jets(&self, x: f64, y: f64, order: usize) -> Result<Option<(Jet, Jet)>> {
        let bx = Jet::var_x(x, order);
        let by = Jet::var_y(y, order);
        match &self.kind {
            SurfaceKind::GeneratingFunction { f } => {
                assert!(order < MAX_ORDER, "generating functions need one extra order");
                let bx = Jet::var_x(x, order + 1);
                let by = Jet::var_y(y, order + 1);
                let fj: Jet = f.eval(&[bx, by])?;
                Ok(Some((fj.dx(), fj.dy())))
            }
            SurfaceKind::ComponentPair { phi, psi } => {
                Ok(Some((phi.eval(&[bx, by])?, psi.eval(&[bx, by])?)))
            }
            SurfaceKind::Immersion { .. } => Ok(None),
        }
    }

    /// Jets of the four coordinates of the embedding.
    pub fn embedding_jets(&self, x: f64, y: f64, order: usize) -> Result<[Jet; 4]> {
        if let Some((phi, psi)) = self.graph_jets(x, y, order)? {
            return Ok([Jet::var_x(x, order), Jet::var_y(y, order), phi, psi]);
        }
        let SurfaceKind::Immersion {
            defs, components, ..
        } = &self.kind
        else {
            unreachable!()
        };
        let mut env = vec![Jet::var_x(x, order), Jet::var_y(y, order)];
        for d in defs {
            let v = d.expr.eval(&env)?;
            env.push(v);
        }
        let mut out = [Jet::zero(order); 4];
        for (o, c) in out.iter_mut().zip(components.iter()) {
            *o = c.eval(&env)?;
        }
        Ok(out)
    }

    /// The embedding point itself.
    pub fn point(&self, x: f64, y: f64) -> Result<[f64; 4]> {
        Ok(self.embedding_jets(x, y, 0)?.map(|j| j.value()))
    }

    /// Second-order data as jets of the given order.
    pub fn second_jets(&self, x: f64, y: f64, order: usize) -> Result<SecondJets> {
        if let Some((phi, psi)) = self.graph_jets(x, y, order + 2)? {
            let second = |f: Jet| [f.dx().dx(), f.dx().dy(), f.dy().dy()];
            return Ok(SecondJets {
                phi: second(phi),
                psi: second(psi),
            });
        }
        let xi = self.embedding_jets(x, y, order + 2)?;
        let tx = xi.map(|j| j.dx());
        let ty = xi.map(|j| j.dy());
        let normals = [self.convention.j_jet(&tx), self.convention.j_jet(&ty)];
        let dot = |a: &[Jet; 4], b: &[Jet; 4]| {
            let mut s = a[0] * b[0];
            for k in 1..4 {
                s += a[k] * b[k];
            }
            s
        };
        let e = dot(&tx, &tx);
        let f = dot(&tx, &ty);
        let g = dot(&ty, &ty);
        let inv_w = (e * g - f * f).recip();
        let project = |v: &[Jet; 4]| {
            let vx = dot(v, &tx);
            let vy = dot(v, &ty);
            let alpha = (g * vx - f * vy) * inv_w;
            let beta = (e * vy - f * vx) * inv_w;
            let mut out = *v;
            for k in 0..4 {
                out[k] = out[k] - alpha * tx[k] - beta * ty[k];
            }
            out
        };
        let n1 = project(&normals[0]);
        let n2 = project(&normals[1]);
        let xxyy = [
            xi.map(|j| j.dx().dx()),
            xi.map(|j| j.dx().dy()),
            xi.map(|j| j.dy().dy()),
        ];
        let pair = |n: &[Jet; 4]| {
            [
                dot(&xxyy[0], n).truncate(order),
                dot(&xxyy[1], n).truncate(order),
                dot(&xxyy[2], n).truncate(order),
            ]
        };
        Ok(SecondJets {
            phi: pair(&n1),
            psi: pair(&n2),
        })
    }

    /// Graph kinds: φ_y − ψ_x (φ_y + ψ_x for the variant); immersions: ω(Ξ_x, Ξ_y).
    pub fn lagrangean_residual(&self, x: f64, y: f64) -> Result<f64> {
        if let SurfaceKind::GeneratingFunction { .. } = self.kind {
            return Ok(0.0);
        }
        if let Some((phi, psi)) = self.graph_jets(x, y, 1)? {
            return Ok(match self.convention {
                Convention::Standard => phi.get(0, 1) - psi.get(1, 0),
                Convention::Variant => phi.get(0, 1) + psi.get(1, 0),
            });
        }
        let xi = self.embedding_jets(x, y, 1)?;
        let tx = xi.map(|j| j.get(1, 0));
        let ty = xi.map(|j| j.get(0, 1));
        Ok(self.convention.omega(tx, ty))
    }

    /// Checks the residual on the validation grid; evaluation failures at grid points are skipped.
    pub fn validate_lagrangean(&self) -> Result<()> {
        for (x, y) in self.domain.grid(VALIDATION_GRID) {
            let r = match self.lagrangean_residual(x, y) {
                Ok(r) => r,
                Err(Error::Eval(_)) => continue,
                Err(e) => return Err(e),
            };
            if !(r.abs() <= LAGRANGEAN_TOL) {
                return Err(Error::NotLagrangean {
                    residual: r,
                    x,
                    y,
                    tolerance: LAGRANGEAN_TOL,
                });
            }
        }
        Ok(())
    }
}

fn parse(text: &str, params: &[&str], context: &str) -> Result<Expr> {
    Expr::parse(text, params).map_err(|source| Error::Parse {
        context: context.to_string(),
        source,
    })
}

fn num(v: f64) -> String {
    format!("({v:?})")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generating_function_components() {
        let c = SurfaceChart::generating_function("x^3/3 - x*y^2", Domain::square(1.0)).unwrap();
        let (phi, psi) = c.graph_jets(0.5, -0.25, 3).unwrap().unwrap();
        assert!((phi.value() - (0.25 - 0.0625)).abs() < 1e-15);
        assert!((psi.value() - 0.25).abs() < 1e-15);
        assert_eq!(c.lagrangean_residual(3.0, -1.0).unwrap(), 0.0);
    }

    #[test]
    fn component_pair_rejected_when_not_lagrangean() {
        let err = SurfaceChart::component_pair("x*y", "x*y", Domain::square(1.0), Convention::Standard)
            .unwrap_err();
        assert!(matches!(err, Error::NotLagrangean { .. }));
        let ok = SurfaceChart::component_pair(
            "x^2 - y^2",
            "-2*x*y",
            Domain::square(1.0),
            Convention::Standard,
        )
        .unwrap();
        assert_eq!(ok.lagrangean_residual(3.0, -1.0).unwrap(), 0.0);
    }

    #[test]
    fn variant_convention_residual() {
        let c = SurfaceChart::component_pair("x*y", "-x^2/2 + y^2/2", Domain::square(1.0), Convention::Variant)
            .unwrap();
        assert!(c.lagrangean_residual(0.3, 0.2).unwrap().abs() < 1e-15);
    }

    #[test]
    fn immersion_of_a_graph_matches_graph_second_jets() {
        let d = Domain::square(0.5);
        let g = SurfaceChart::generating_function("x^3/3 - x*y^2 + x^2*y^2/4", d).unwrap();
        let im = SurfaceChart::immersion(
            ["s", "t"],
            &[],
            ["s", "t", "s^2 - t^2 + s*t^2/2", "-2*s*t + s^2*t/2"],
            d,
            Convention::Standard,
        )
        .unwrap();
        let a = g.second_jets(0.2, -0.1, 1).unwrap();
        let b = im.second_jets(0.2, -0.1, 1).unwrap();
        for k in 0..3 {
            for (i, j) in [(0, 0), (1, 0), (0, 1)] {
                assert!((a.phi[k].get(i, j) - b.phi[k].get(i, j)).abs() < 1e-12);
                assert!((a.psi[k].get(i, j) - b.psi[k].get(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn normal_form_jets() {
        let c = SurfaceChart::normal_form(2.0, [0.1, 0.2, 0.3, 0.4, 0.5], None, Domain::square(1.0)).unwrap();
        let (phi, psi) = c.graph_jets(0.0, 0.0, 3).unwrap().unwrap();
        assert!((phi.get(2, 0) - 2.0).abs() < 1e-15);
        assert!((phi.get(3, 0) - 0.1).abs() < 1e-15);
        assert!((phi.get(2, 1) - 0.2).abs() < 1e-15);
        assert!((phi.get(1, 2) - 0.3).abs() < 1e-15);
        assert!((phi.get(0, 3) - 0.4).abs() < 1e-15);
        assert!((psi.get(0, 3) - 0.5).abs() < 1e-15);
        assert!((psi.get(3, 0) - 0.2).abs() < 1e-15);
        assert_eq!(psi.get(2, 0), 0.0);
    }

    #[test]
    fn immersion_defs_chain() {
        let c = SurfaceChart::immersion(
            ["x", "y"],
            &[("r", "x^2 + y^2"), ("s", "2*r")],
            ["x", "y", "s*x", "s*y"],
            Domain::square(1.0),
            Convention::Standard,
        );
        // ω(Ξ_x, Ξ_y) = 2(x s_y - y s_x) = 0 for radial s.
        let c = c.unwrap();
        let p = c.point(0.5, 0.5).unwrap();
        assert!((p[2] - 0.5).abs() < 1e-15);
    }
}
