//! Trace the parabolic curve M² − 4H_φH_ψ = 0 near a cusp.
//!
//! cargo run --example discriminant -- [eta z1 z2 z3 z4 z5]

use lagsurf::bde::trace_discriminant;
use lagsurf::jets::{Domain, SurfaceChart};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (eta, zeta) = match args.as_slice() {
        [eta, z @ ..] if z.len() == 5 => (*eta, [z[0], z[1], z[2], z[3], z[4]]),
        [] => (1.0, [0.0, 0.0, 0.0, 1.0, 1.0]),
        _ => return Err("expected six numbers: eta z1 z2 z3 z4 z5".into()),
    };
    let chart = SurfaceChart::normal_form(eta, zeta, None, Domain::square(0.5))?;
    let trace = trace_discriminant(&chart, Domain::square(0.3), 96)?;
    println!("{} polylines, max |D| at refined points {:.1e}", trace.polylines.len(), trace.max_residual);
    for (k, line) in trace.polylines.iter().enumerate() {
        let (first, last) = (line[0], line[line.len() - 1]);
        println!(
            "  polyline {k}: {} vertices from ({:.4}, {:.4}) to ({:.4}, {:.4})",
            line.len(),
            first.0,
            first.1,
            last.0,
            last.1
        );
    }
    for s in &trace.singular_points {
        println!("  singular point ({:.2e}, {:.2e}), |D| = {:.1e}, |grad D| = {:.1e}", s.x, s.y, s.value, s.gradient);
    }
    Ok(())
}
