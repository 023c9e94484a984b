use std::path::Path;

use lagsurf::fields::{
    find_umbilics, global_index_report, isoclinic_index, line_index, mean_bde, mean_index, vector_index,
    winding_radius,
};
use lagsurf::jets::{Domain, SurfaceChart};
use lagsurf::oracle::{line_winding_oracle, winding_oracle};
use lagsurf::scene::Scene;
use lagsurf::Error;
use proptest::prelude::*;

#[test]
fn winding_radius_rule() {
    assert_eq!(winding_radius((0.0, 0.0), None).unwrap(), 0.05);
    assert_eq!(winding_radius((0.0, 0.0), Some((0.04, 0.0))).unwrap(), 0.02);
    assert!(matches!(
        winding_radius((0.0, 0.0), Some((1e-3, 0.0))),
        Err(Error::OverlappingSingularities { .. })
    ));
}

#[test]
fn indices_agree_with_the_oracle() {
    let c = SurfaceChart::umbilic_normal_form(0.5, -0.8, [1.0, 0.0, -1.0, 0.2, -2.0], None, Domain::square(0.5)).unwrap();
    let field = |x: f64, y: f64| {
        let m = mean_bde(&c, x, y)?;
        Ok(m.frame_form)
    };
    let ours = line_index(field, (0.0, 0.0), 0.02, 720).unwrap();
    let form = |x: f64, y: f64| field(x, y).map(|m| (m.a, m.b / 2.0, m.c));
    let oracle = line_winding_oracle(form, (0.0, 0.0), 0.02, 4096).unwrap();
    assert!((ours.raw - oracle).abs() < 1e-6, "{ours:?} {oracle}");
    let v = vector_index(|x, y| Ok((x * x - y * y, 2.0 * x * y)), (0.0, 0.0), 0.5, 720).unwrap();
    assert_eq!(v.index, 2.0);
    assert!((winding_oracle(|x, y| Ok((x * x - y * y, 2.0 * x * y)), (0.0, 0.0), 0.5, 4096).unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn frozen_whitney_report() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenes/whitney.toml");
    let scene = Scene::load(&path).unwrap().unwrap();
    let r = global_index_report(&scene.charts, 2, scene.resolution).unwrap();
    assert_eq!(r.umbilic_count, 2);
    assert_eq!(r.inflection_count, 0);
    assert_eq!(r.sum_index_h, 2.0);
    assert!(!r.generic);
    assert!(r.diagnostics.iter().any(|d| d.contains("vanishing second fundamental form")));
    let holds: Vec<bool> = r.relations.iter().map(|x| x.pass).collect();
    assert_eq!(holds, vec![true, false, false, true]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn umbilic_indices_follow_the_determinant(
        alpha in -1.0..1.0f64,
        beta in -1.0..1.0f64,
        z in proptest::array::uniform5(-1.0..1.0f64),
    ) {
        let det = (z[0] + z[2]) * (z[2] + z[4]) - (z[1] + z[3]).powi(2);
        prop_assume!(alpha.hypot(beta) > 0.2 && det.abs() > 0.05);
        let c = SurfaceChart::umbilic_normal_form(alpha, beta, z, None, Domain::square(0.5)).unwrap();
        let h = isoclinic_index(&c, (0.0, 0.0), 0.02).unwrap();
        let s = mean_index(&c, (0.0, 0.0), 0.02).unwrap();
        prop_assert_eq!(h.index, det.signum());
        prop_assert_eq!(s.index, -h.index / 2.0);
        let found = find_umbilics(&c, Domain::square(0.05), 16).unwrap();
        prop_assert!(found.points.iter().any(|p| p.x.hypot(p.y) < 1e-8));
    }

    #[test]
    fn inflection_index_follows_the_invariant(eta in 0.5..2.0f64, z in proptest::array::uniform5(-1.0..1.0f64)) {
        let inv = z[3] * z[3] - z[2] * z[4];
        prop_assume!(inv.abs() > 0.05 && z[4].abs() > 0.1);
        let c = SurfaceChart::normal_form(eta, z, None, Domain::square(0.5)).unwrap();
        prop_assert_eq!(mean_index(&c, (0.0, 0.0), 0.02).unwrap().index, -inv.signum() / 2.0);
    }
}
