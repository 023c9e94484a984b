//! Winding indices of the isoclinic and mean directional fields at umbilics and inflections.

use lagsurf::fields::{find_umbilics, isoclinic_index, mean_index};
use lagsurf::jets::{Domain, SurfaceChart};

fn main() -> lagsurf::Result<()> {
    println!("umbilics");
    for (alpha, beta, zeta) in [
        (1.0, 0.0, [1.0, 0.0, 0.0, 0.0, 1.0]),
        (0.5, -0.8, [1.0, 0.0, -1.0, 0.2, -2.0]),
        (0.0, 1.0, [0.3, 0.9, 0.1, 0.0, 0.4]),
    ] {
        let c = SurfaceChart::umbilic_normal_form(alpha, beta, zeta, None, Domain::square(0.5))?;
        let found = find_umbilics(&c, Domain::square(0.2), 24)?;
        let det = (zeta[0] + zeta[2]) * (zeta[2] + zeta[4]) - (zeta[1] + zeta[3]).powi(2);
        let h = isoclinic_index(&c, (0.0, 0.0), 0.05)?;
        let s = mean_index(&c, (0.0, 0.0), 0.05)?;
        println!(
            "  alpha {alpha:>4}, beta {beta:>4}: {} found, det {det:>7.3}, ind h {:>4}, ind S {:>4}",
            found.points.len(),
            h.index,
            s.index
        );
    }
    println!("inflections");
    for zeta in [[0.0, 0.0, 0.0, 1.0, 1.0], [0.0, 0.0, 1.0, 0.0, 1.0], [0.2, -0.4, -1.0, 0.3, 0.6]] {
        let c = SurfaceChart::normal_form(1.0, zeta, None, Domain::square(0.5))?;
        let inv = zeta[3] * zeta[3] - zeta[2] * zeta[4];
        let s = mean_index(&c, (0.0, 0.0), 0.05)?;
        println!("  zeta {zeta:?}: zeta4^2 - zeta3 zeta5 = {inv:>6.3}, ind S {:>4}", s.index);
    }
    Ok(())
}
