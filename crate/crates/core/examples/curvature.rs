//! Curvature invariants and point classes.

use lagsurf::geometry::{classify_point, point_geometry};
use lagsurf::jets::{Convention, Domain, SurfaceChart};

fn table(title: &str, chart: &SurfaceChart, points: &[(f64, f64)]) -> lagsurf::Result<()> {
    println!("{title}");
    println!("{:>6} {:>6} {:>12} {:>12} {:>12} {:>12}  class", "x", "y", "K", "kappa", "Delta", "|H|");
    for &(x, y) in points {
        let pg = point_geometry(chart, x, y)?;
        let cd = pg.curvatures();
        let pc = classify_point(&cd, &pg.frame, None);
        let mut tags = vec![pc.region.name()];
        if pc.umbilic {
            tags.push("umbilic");
        }
        println!(
            "{x:>6} {y:>6} {:>12.6} {:>12.6} {:>12.6} {:>12.3e}  {}",
            cd.k,
            cd.kappa,
            cd.delta,
            cd.h1.hypot(cd.h2),
            tags.join(", ")
        );
    }
    Ok(())
}

fn main() -> lagsurf::Result<()> {
    // A complex curve: every point is umbilic.
    let holo = SurfaceChart::component_pair("x^2 - y^2", "-2*x*y", Domain::square(2.0), Convention::Standard)?;
    table("phi = x^2 - y^2, psi = -2xy", &holo, &[(0.0, 0.0), (1.0, 0.0), (0.5, 0.5)])?;
    let star = SurfaceChart::normal_form(1.0, [0.0, 0.0, 0.0, 1.0, 1.0], None, Domain::square(1.0))?;
    table(
        "F = x^3/6 + x y^3/6 + y^4/24",
        &star,
        &[(0.0, 0.0), (0.1, 0.1), (0.1, -0.2), (-0.2, 0.05), (0.2, -0.1)],
    )
}
