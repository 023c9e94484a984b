use lagsurf::geometry::{
    asymptotic_directions, bde_discriminant, classify_point, curvature_ellipse, delta_resultant, ellipse_area,
    point_geometry, wintgen, Directions, FrameCoeffs, Region,
};
use lagsurf::jets::{Convention, Domain, SurfaceChart};
use lagsurf::oracle::{ellipse_membership, resultant_bruteforce, Membership, OracleConfig};
use proptest::prelude::*;

fn star() -> SurfaceChart {
    SurfaceChart::normal_form(1.0, [0.0, 0.0, 0.0, 1.0, 1.0], None, Domain::square(1.0)).unwrap()
}

#[test]
fn desk_values() {
    let c = SurfaceChart::component_pair("x^2 - y^2", "-2*x*y", Domain::square(2.0), Convention::Standard).unwrap();
    let cd = point_geometry(&c, 0.0, 0.0).unwrap().curvatures();
    assert_eq!((cd.k, cd.kappa), (-8.0, -8.0));
    assert!((cd.delta - 16.0).abs() < 1e-12);
    let cd = point_geometry(&c, 1.0, 0.0).unwrap().curvatures();
    assert!((cd.k + 0.064).abs() < 1e-12 && (cd.kappa + 0.064).abs() < 1e-12);
}

#[test]
fn frozen_classes_on_the_star_normal_form() {
    let c = star();
    let class = |x: f64, y: f64| {
        let pg = point_geometry(&c, x, y).unwrap();
        classify_point(&pg.curvatures(), &pg.frame, None)
    };
    assert_eq!(class(0.0, 0.0).region, Region::InflectionFlat);
    assert_eq!(class(0.1, 0.1).region, Region::Hyperbolic);
    assert_eq!(class(0.1, -0.2).region, Region::Elliptic);
    assert!(class(0.1, 0.1).equivalences_hold);
    let cd = point_geometry(&c, 0.1, 0.1).unwrap().curvatures();
    assert!((cd.k - 0.087992).abs() < 1e-6);
}

#[test]
fn variant_convention_graph() {
    let c = SurfaceChart::component_pair(
        "x^2/2 + x*y^2",
        "-(y^2/2 + x^2*y)",
        Domain::square(1.0),
        Convention::Variant,
    )
    .unwrap();
    assert_eq!(c.lagrangean_residual(0.3, 0.2).unwrap(), 0.0);
    let pg = point_geometry(&c, 0.3, 0.2).unwrap();
    let cd = pg.curvatures();
    assert!((cd.k.abs() - cd.kappa.abs()).abs() < 1e-12);
    assert!(SurfaceChart::component_pair("x^2/2 + x*y^2", "y^2/2 + x^2*y", Domain::square(1.0), Convention::Variant)
        .is_err());
}

#[test]
fn degenerate_ellipse_is_flagged() {
    let fc = FrameCoeffs::from_sff(1.0, 0.0, 0.0, 2.0, 0.0, 0.0);
    assert_eq!(ellipse_membership(&fc, &OracleConfig::default()), Membership::Degenerate);
    assert_eq!(delta_resultant(&fc), 0.0);
    assert_eq!(asymptotic_directions(&fc), Directions::All);
}

fn sff() -> impl Strategy<Value = [f64; 6]> {
    proptest::array::uniform6(-2.0..2.0f64)
}

proptest! {
    #[test]
    fn resultant_identities(v in sff()) {
        let fc = FrameCoeffs::from_sff(v[0], v[1], v[2], v[3], v[4], v[5]);
        let delta = delta_resultant(&fc);
        let s = fc.scale().powi(4);
        prop_assert!((bde_discriminant(&fc) + 4.0 * delta).abs() <= 1e-12 * s);
        let brute = resultant_bruteforce(v[0], v[1], v[2], v[3], v[4], v[5]).unwrap();
        prop_assert!((brute - delta).abs() <= 1e-10 * s);
    }

    #[test]
    fn ellipse_area_is_half_pi_kappa(v in sff()) {
        let fc = FrameCoeffs::from_sff(v[0], v[1], v[2], v[3], v[4], v[5]);
        let target = std::f64::consts::FRAC_PI_2 * fc.normal_curvature();
        prop_assert!((ellipse_area(&fc, 64) - target).abs() < 1e-12 * fc.scale().powi(2));
        prop_assert_eq!(curvature_ellipse(&fc, 10).len(), 10);
    }

    #[test]
    fn lagrangean_identities(c in proptest::array::uniform7(-1.0..1.0f64), x in -1.0..1.0f64, y in -1.0..1.0f64) {
        let f = format!(
            "{}*x^3 + {}*x^2*y + {}*x*y^2 + {}*y^3 + {}*x^4 + {}*x^2*y^2 + {}*y^4",
            c[0], c[1], c[2], c[3], c[4], c[5], c[6]
        );
        let chart = SurfaceChart::generating_function(&f, Domain::square(1.0)).unwrap();
        let pg = point_geometry(&chart, x, y).unwrap();
        let (cd, fc) = (pg.curvatures(), pg.frame);
        prop_assert!((cd.k.abs() - cd.kappa.abs()).abs() <= 1e-9 * (1.0 + cd.k.abs()));
        prop_assert!((fc.e - fc.b).abs() <= 1e-10 * fc.scale());
        prop_assert!((fc.f - fc.c).abs() <= 1e-10 * fc.scale());
        // Determinant formulas agree with the frame.
        prop_assert!((cd.k - fc.gaussian()).abs() <= 1e-9 * (1.0 + cd.k.abs()));
        prop_assert!(wintgen(&fc) >= -1e-12 * fc.scale().powi(2));
    }

    #[test]
    fn sign_of_delta_matches_membership(v in sff()) {
        let fc = FrameCoeffs::from_sff(v[0], v[1], v[2], v[3], v[4], v[5]);
        let delta = delta_resultant(&fc);
        prop_assume!(delta.abs() > 1e-4 && fc.normal_curvature().abs() > 1e-4);
        let m = ellipse_membership(&fc, &OracleConfig::default());
        prop_assert_eq!(m, if delta > 0.0 { Membership::Inside } else { Membership::Outside });
    }
}
