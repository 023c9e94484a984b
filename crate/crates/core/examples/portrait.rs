//! Asymptotic lines around an inflection written to an SVG phase portrait.
//!
//! cargo run --release --example portrait -- star|lemon [out.svg]

use lagsurf::bde::{integrate_asymptotic_line, trace_discriminant, IntegrationOptions};
use lagsurf::jets::{Domain, SurfaceChart};
use lagsurf::scene::Svg;
use lagsurf::Error;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let kind = args.next().unwrap_or_else(|| "star".into());
    let out = args.next().unwrap_or_else(|| format!("{kind}.svg"));
    let zeta = match kind.as_str() {
        "star" => [0.0, 0.0, 0.0, 1.0, 1.0],
        "lemon" => [0.0, 0.0, 1.0, 0.0, 1.0],
        other => return Err(format!("unknown model {other}").into()),
    };
    let region = Domain::square(0.3);
    let chart = SurfaceChart::normal_form(1.0, zeta, None, region)?;
    let mut svg = Svg::new(region);
    for line in trace_discriminant(&chart, region, 96)?.polylines {
        svg.polyline(&line, "discriminant");
    }
    let opts = IntegrationOptions {
        step: 2e-3,
        max_steps: 1500,
        ..IntegrationOptions::default()
    };
    let mut skipped = 0;
    for k in 0..24 {
        let t = std::f64::consts::TAU * k as f64 / 24.0;
        let seed = (0.1 * t.cos(), 0.1 * t.sin());
        for branch in 0..2 {
            for reverse in [false, true] {
                let o = IntegrationOptions { reverse, ..opts.clone() };
                match integrate_asymptotic_line(&chart, seed, branch, &o) {
                    Ok(line) => svg.polyline(&line.xy(), &format!("branch-{branch}")),
                    Err(Error::EllipticSeed { .. }) => skipped += 1,
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    svg.marker(0.0, 0.0, "inflection");
    std::fs::write(&out, svg.finish("example", &[]))?;
    println!("{out}: {} paths, {skipped} elliptic seeds skipped", svg.path_count());
    Ok(())
}
