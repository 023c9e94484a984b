use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lagsurf::scene::{run_scene, validate_scene, RunOptions, EXIT_VALIDATION};

/// Batch runner for scene files.
#[derive(Parser)]
#[command(name = "lagsurf", version)]
struct Cli {
    /// Relative zero tolerance for point and inflection classification.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output directory; overrides the scene and LAGSURF_OUT_DIR.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task of a scene and write its outputs.
    Run { scene: PathBuf },
    /// Report all problems in a scene without computing anything.
    Validate { scene: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match cli.command {
        Command::Validate { scene } => match validate_scene(&scene) {
            Ok(d) if d.is_empty() => {
                println!("{}: valid", scene.display());
                ExitCode::SUCCESS
            }
            Ok(d) => {
                for x in &d {
                    eprintln!("{}: {x}", scene.display());
                }
                ExitCode::from(EXIT_VALIDATION as u8)
            }
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", scene.display());
                ExitCode::from(1)
            }
        },
        Command::Run { scene } => {
            let opts = RunOptions {
                out_dir: cli.out_dir,
                tol: cli.tol,
            };
            match run_scene(&scene, &opts) {
                Ok(out) => {
                    for d in &out.diagnostics {
                        eprintln!("{}: {d}", scene.display());
                    }
                    for e in &out.errors {
                        eprintln!("error: {e}");
                    }
                    for f in &out.files {
                        println!("{}", f.display());
                    }
                    ExitCode::from(out.exit_code as u8)
                }
                Err(e) => {
                    eprintln!("error: {}: {e}", scene.display());
                    ExitCode::from(1)
                }
            }
        }
    }
}
