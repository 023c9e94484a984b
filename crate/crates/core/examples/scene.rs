//! Run an inline scene and list what it wrote.
//!
//! cargo run --example scene -- [out-dir]

use lagsurf::scene::{run_scene_text, RunOptions};

const SCENE: &str = r#"
name = "monkey-saddle"
resolution = 32

[surface]
kind = "generating-function"
F = "x^3/3 - x*y^2 + 0.1*x^4"

[region]
x = [-1, 1]
y = [-1, 1]

[[task]]
kind = "classify-grid"

[[task]]
kind = "discriminant"

[[task]]
kind = "umbilic-report"
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "lagsurf-example-out".into());
    let opts = RunOptions {
        out_dir: Some(out.into()),
        tol: None,
    };
    let outcome = run_scene_text(SCENE, &opts)?;
    for d in &outcome.diagnostics {
        println!("diagnostic: {d}");
    }
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    println!("exit code {}", outcome.exit_code);
    Ok(())
}
