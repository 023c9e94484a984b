//! Parse an expression, expand it as a derivative jet and compare with finite differences.
//!
//! cargo run --example jets -- "sin(x)*exp(y) + x^3*y"

use lagsurf::jets::{eval_jet_order, parse_expression};
use lagsurf::oracle::{fd_jet, OracleConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::env::args().nth(1).unwrap_or_else(|| "sin(x)*exp(y) + x^3*y".to_string());
    let expr = parse_expression(&text, &["x", "y"])?;
    let (x, y) = (0.3, -0.2);
    let jet = eval_jet_order(&expr, x, y, 3)?;
    let fd = fd_jet(|u, v| Ok(expr.eval_f64(&[u, v])?), x, y, 3, &OracleConfig::default())?;

    println!("f = {text} at ({x}, {y})");
    println!("{:>8} {:>22} {:>22} {:>10}", "d", "jet", "finite diff", "|diff|");
    for k in 0..=3 {
        for i in (0..=k).rev() {
            let j = k - i;
            let (a, b) = (jet.get(i, j), fd.get(i, j));
            println!("{:>8} {a:>22.15} {b:>22.15} {:>10.1e}", format!("x{i}y{j}"), (a - b).abs());
        }
    }
    Ok(())
}
