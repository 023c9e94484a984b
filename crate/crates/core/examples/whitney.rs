//! Index bookkeeping on the Whitney sphere atlas shipped in scenes/.

use std::path::Path;

use lagsurf::fields::global_index_report;
use lagsurf::scene::Scene;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenes/whitney.toml");
    let scene = Scene::load(&path)?.map_err(|d| format!("{d:?}"))?;
    let report = global_index_report(&scene.charts, 2, scene.resolution)?;
    for p in &report.singular_points {
        println!(
            "{:?} on {} at ({:.4}, {:.4}): ind h {:?}, ind S {:?}",
            p.kind,
            p.chart,
            p.x,
            p.y,
            p.index_h.map(|v| v.index),
            p.index_s.map(|v| v.index)
        );
    }
    for r in &report.relations {
        println!("{}: {} (target {}) {}", r.name, r.value, r.target, if r.pass { "holds" } else { "fails" });
    }
    println!("generic: {}", report.generic);
    for d in &report.diagnostics {
        println!("  {d}");
    }
    Ok(())
}
