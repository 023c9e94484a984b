//! Locate an inflection on a generating function and print its full report.

use lagsurf::inflection::{classify_inflection, find_inflections, ClassifyOptions};
use lagsurf::jets::{Domain, SurfaceChart};

fn main() -> lagsurf::Result<()> {
    // A star at the origin and a second inflection nearby.
    let f = "x^3/6 + 0.3*x^2*y^2 + 0.25*x*y^3 + y^4/24 + 0.05*x^5 - 0.1*x*y^4";
    let chart = SurfaceChart::generating_function(f, Domain::square(0.6))?;
    let found = find_inflections(&chart, Domain::square(0.4), 40)?;
    println!("{} inflection(s) found", found.points.len());
    let opts = ClassifyOptions {
        separatrix_radius: Some(0.1),
        ..ClassifyOptions::default()
    };
    for p in &found.points {
        let r = classify_inflection(&chart, (p.x, p.y), &opts)?;
        let nf = &r.normal_form;
        println!("at ({:.3e}, {:.3e}), residual {:.1e}", p.x, p.y, p.residual);
        println!("  eta = {:.6}, zeta = {:.6?}", nf.eta, nf.zeta);
        println!("  zeta4^2 - zeta3 zeta5 = {:.6}, model {:?}", nf.invariant(), r.model);
        println!("  roots of Pi: {:?}", r.pi.roots);
        for cp in &r.critical_points {
            println!("    {:?}: mu1 = {:.6}, mu3 = {:.6}", cp.root, cp.numeric[0], cp.numeric[2]);
        }
        println!("  H_F = {:.6}", r.hessian.h_f);
        if let Some(red) = &r.reduction {
            println!("  1-jet: Y dY^2 {} 2X dXdY (residual {:.1e})", if red.sign > 0.0 { "+" } else { "-" }, red.residual);
        }
        if let Some(c) = &r.cusp {
            println!("  discriminant tangent {:.4?}, cusp {}", c.tangent, c.cusp);
        }
        if let Some(m) = r.mean_index {
            println!("  index of the mean directional field {}", m.index);
        }
        if let Some(s) = &r.separatrices {
            println!("  separatrix directions {}", s.directions);
        }
        for n in &r.notes {
            println!("  note: {n}");
        }
    }
    Ok(())
}
