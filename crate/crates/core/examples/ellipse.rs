//! The curvature ellipse against the resultant Δ and the normal curvature κ.

use lagsurf::geometry::{curvature_ellipse, delta_resultant, ellipse_area, FrameCoeffs};
use lagsurf::oracle::{ellipse_membership, resultant_bruteforce, shoelace, OracleConfig};

fn main() -> lagsurf::Result<()> {
    let cases = [
        ("circle about the origin", [2.0, 0.0, -2.0, 0.0, -2.0, 0.0]),
        ("shifted ellipse", [3.0, 0.2, 1.0, 0.5, 0.1, 0.7]),
        ("origin outside", [0.3, 0.8, -0.4, 1.0, 0.1, 0.2]),
        ("segment", [1.0, 0.0, 0.0, 2.0, 0.0, 0.0]),
    ];
    let cfg = OracleConfig::default();
    for (name, [a, b, c, e, f, g]) in cases {
        let fc = FrameCoeffs::from_sff(a, b, c, e, f, g);
        let delta = delta_resultant(&fc);
        println!("{name}");
        println!("  Delta = {delta:.6}, brute force {:.6}", resultant_bruteforce(a, b, c, e, f, g)?);
        println!("  membership of the origin: {:?}", ellipse_membership(&fc, &cfg));
        println!(
            "  pi/2 kappa = {:.6}, area = {:.6}, polygon {:.6}",
            std::f64::consts::FRAC_PI_2 * fc.normal_curvature(),
            ellipse_area(&fc, 64),
            shoelace(&curvature_ellipse(&fc, 4096))
        );
    }
    Ok(())
}
