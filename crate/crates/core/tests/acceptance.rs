//! Acceptance run: one PASS/FAIL line per criterion.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use lagsurf::bde::{integrate_asymptotic_line, IntegrationOptions, StopReason};
use lagsurf::fields::{global_index_report, isoclinic_index, mean_index, wintgen_residual};
use lagsurf::geometry::{
    bde_discriminant, curvature_ellipse, delta_resultant, ellipse_area, point_geometry, FrameCoeffs,
};
use lagsurf::inflection::{
    classify_inflection, cusp_diagnostics, hessian_equation_surface, inflection_frame, lifted_critical_points,
    pi_polynomial, reduce_1jet, ClassifyOptions, Model, NormalFormJet,
};
use lagsurf::jets::{Convention, Domain, SurfaceChart};
use lagsurf::oracle::{ellipse_membership, fd_jet, resultant_bruteforce, shoelace, Membership, OracleConfig};
use lagsurf::scene::{run_scene, RunOptions, Scene};
use lagsurf::ProjRoot;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const TOL: f64 = 1e-8;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_polynomial(r: &mut ChaCha8Rng) -> String {
    let mut terms = Vec::new();
    for deg in 3..=5 {
        for i in 0..=deg {
            let c: f64 = r.gen_range(-1.0..1.0);
            terms.push(format!("({c:.6})*x^{i}*y^{}", deg - i));
        }
    }
    terms.join(" + ")
}

/// Random (η, ζ) with ζ₅ and ζ₄² − ζ₃ζ₅ bounded away from zero.
fn random_generic(r: &mut ChaCha8Rng) -> (f64, [f64; 5]) {
    loop {
        let eta = r.gen_range(0.5..2.0) * if r.gen_bool(0.5) { 1.0 } else { -1.0 };
        let zeta: [f64; 5] = std::array::from_fn(|_| r.gen_range(-1.0..1.0));
        let inv = zeta[3] * zeta[3] - zeta[2] * zeta[4];
        if zeta[4].abs() > 0.1 && inv.abs() > 0.05 {
            return (eta, zeta);
        }
    }
}

/// The normal form with random quintic terms, brought back to normal form by the frame.
fn framed(r: &mut ChaCha8Rng, eta: f64, zeta: [f64; 5]) -> Result<NormalFormJet, String> {
    let extra = format!(
        "({:.4})*x^5 + ({:.4})*x^2*y^3 + ({:.4})*y^5",
        r.gen_range(-1.0..1.0),
        r.gen_range(-1.0..1.0),
        r.gen_range(-1.0..1.0)
    );
    let chart = SurfaceChart::normal_form(eta, zeta, Some(&extra), Domain::square(0.5)).map_err(|e| e.to_string())?;
    inflection_frame(&chart, 0.0, 0.0).map_err(|e| e.to_string())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let (mut worst_k, mut worst_sym) = (0.0_f64, 0.0_f64);
    for _ in 0..10 {
        let chart = SurfaceChart::generating_function(&random_polynomial(&mut r), Domain::square(1.0))
            .map_err(|e| e.to_string())?;
        for _ in 0..1000 {
            let (x, y) = (r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0));
            let pg = point_geometry(&chart, x, y).map_err(|e| e.to_string())?;
            let cd = pg.curvatures();
            let fc = pg.frame;
            worst_k = worst_k.max((cd.k.abs() - cd.kappa.abs()).abs() / (1.0 + cd.k.abs()));
            worst_sym = worst_sym.max((fc.e - fc.b).abs().max((fc.f - fc.c).abs()) / fc.scale());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(worst_k <= 1e-9, || format!("max ||K| - |kappa||/(1+|K|) = {worst_k:e}"))?;
    ensure(worst_sym <= 1e-10, || format!("max |e - b|, |f - c| = {worst_sym:e}"))?;
    ensure(secs < 10.0, || format!("runtime {secs:.2} s"))?;
    Ok(format!(
        "10 x 1000 points, max ||K|-|kappa||/(1+|K|) = {worst_k:.1e}, max e-b, f-c = {worst_sym:.1e}, {secs:.2} s"
    ))
}

/// K, κ, Δ, H from finite differences of the components and an independently built frame.
fn oracle_invariants(chart: &SurfaceChart, x: f64, y: f64) -> Result<(f64, f64, f64, f64), String> {
    let cfg = OracleConfig::default();
    let comp = |k: usize| {
        fd_jet(|u, v| Ok(chart.point(u, v)?[k]), x, y, 2, &cfg).map_err(|e| e.to_string())
    };
    let (phi, psi) = (comp(2)?, comp(3)?);
    let t1 = [1.0, 0.0, phi.get(1, 0), psi.get(1, 0)];
    let t2 = [0.0, 1.0, phi.get(0, 1), psi.get(0, 1)];
    let second = |i: usize, j: usize| [0.0, 0.0, phi.get(i, j), psi.get(i, j)];
    let dot = |a: &[f64; 4], b: &[f64; 4]| (0..4).map(|k| a[k] * b[k]).sum::<f64>();
    let e1 = {
        let n = dot(&t1, &t1).sqrt();
        t1.map(|v| v / n)
    };
    let e2 = {
        let p = dot(&t2, &e1);
        let v: [f64; 4] = std::array::from_fn(|k| t2[k] - p * e1[k]);
        let n = dot(&v, &v).sqrt();
        v.map(|c| c / n)
    };
    let e3 = Convention::Standard.j(e1);
    let e4 = Convention::Standard.j(e2);
    // Coordinates change: ∂/∂e₁, ∂/∂e₂ in terms of ∂x, ∂y.
    let g = [[dot(&t1, &e1), dot(&t2, &e1)], [dot(&t1, &e2), dot(&t2, &e2)]];
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    let inv = [[g[1][1] / det, -g[0][1] / det], [-g[1][0] / det, g[0][0] / det]];
    let hess = |n: &[f64; 4]| {
        let h = [
            [dot(&second(2, 0), n), dot(&second(1, 1), n)],
            [dot(&second(1, 1), n), dot(&second(0, 2), n)],
        ];
        // inv^T h inv
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        out[i][j] += inv[k][i] * h[k][l] * inv[l][j];
                    }
                }
            }
        }
        out
    };
    let (h3, h4) = (hess(&e3), hess(&e4));
    let fc = FrameCoeffs::from_sff(h3[0][0], h3[0][1], h3[1][1], h4[0][0], h4[0][1], h4[1][1]);
    let (m1, m2) = fc.mean();
    Ok((fc.gaussian(), fc.normal_curvature(), delta_resultant(&fc), m1.hypot(m2)))
}

fn criterion_2() -> Outcome {
    let chart =
        SurfaceChart::component_pair("x^2 - y^2", "-2*x*y", Domain::square(2.0), Convention::Standard)
            .map_err(|e| e.to_string())?;
    let o = point_geometry(&chart, 0.0, 0.0).map_err(|e| e.to_string())?;
    let cd = o.curvatures();
    let h = cd.h1.hypot(cd.h2);
    let near = |a: f64, b: f64| (a - b).abs() <= 1e-9;
    ensure(near(cd.k, -8.0) && near(cd.kappa, -8.0), || format!("origin K = {}, kappa = {}", cd.k, cd.kappa))?;
    ensure(near(cd.delta, 16.0) && near(h, 0.0), || format!("origin Delta = {}, |H| = {h}", cd.delta))?;
    let p = point_geometry(&chart, 1.0, 0.0).map_err(|e| e.to_string())?.curvatures();
    ensure(near(p.k, -0.064) && near(p.kappa, -0.064), || format!("(1,0) K = {}, kappa = {}", p.k, p.kappa))?;
    let (ok, okap, odel, oh) = oracle_invariants(&chart, 0.0, 0.0)?;
    let (pk, pkap, _, _) = oracle_invariants(&chart, 1.0, 0.0)?;
    // Finite differences of a quadratic are exact up to rounding.
    let fd = |a: f64, b: f64| (a - b).abs() <= 1e-6;
    ensure(fd(ok, -8.0) && fd(okap, -8.0) && fd(odel, 16.0) && fd(oh, 0.0), || {
        format!("oracle at origin: K = {ok}, kappa = {okap}, Delta = {odel}, |H| = {oh}")
    })?;
    ensure(fd(pk, -0.064) && fd(pkap, -0.064), || format!("oracle at (1,0): K = {pk}, kappa = {pkap}"))?;
    Ok(format!(
        "K = kappa = {}, Delta = {}, H = 0 at origin; K = kappa = {:.3} at (1,0); oracle agrees",
        cd.k, cd.delta, p.k
    ))
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let cfg = OracleConfig {
        membership_samples: 4096,
        ..OracleConfig::default()
    };
    let (mut n, mut worst_area, mut worst_res, mut worst_d) = (0, 0.0_f64, 0.0_f64, 0.0_f64);
    while n < 1000 {
        let v: [f64; 6] = std::array::from_fn(|_| r.gen_range(-1.0..1.0));
        let fc = FrameCoeffs::from_sff(v[0], v[1], v[2], v[3], v[4], v[5]);
        let delta = delta_resultant(&fc);
        let kappa = fc.normal_curvature();
        if delta.abs() < 1e-6 || kappa.abs() < 1e-6 {
            continue;
        }
        n += 1;
        let m = ellipse_membership(&fc, &cfg);
        let expected = if delta > 0.0 { Membership::Inside } else { Membership::Outside };
        ensure(m == expected, || format!("Delta = {delta:e} but membership {m:?} for {v:?}"))?;
        let sampled = shoelace(&curvature_ellipse(&fc, 16384));
        let target = std::f64::consts::FRAC_PI_2 * kappa;
        worst_area = worst_area.max((sampled - target).abs()).max((ellipse_area(&fc, 64) - target).abs());
        let brute = resultant_bruteforce(v[0], v[1], v[2], v[3], v[4], v[5]).map_err(|e| e.to_string())?;
        worst_res = worst_res.max((brute - delta).abs() / delta.abs().max(1e-300));
        worst_d = worst_d.max((bde_discriminant(&fc) + 4.0 * delta).abs() / (4.0 * delta.abs()));
    }
    ensure(worst_area <= 1e-6, || format!("area deviation {worst_area:e}"))?;
    ensure(worst_d <= 1e-9, || format!("D + 4 Delta relative {worst_d:e}"))?;
    ensure(worst_res <= 1e-9, || format!("brute-force resultant relative {worst_res:e}"))?;
    Ok(format!(
        "1000 tuples, membership agrees, area error {worst_area:.1e}, D = -4 Delta to {worst_d:.1e}, resultant oracle to {worst_res:.1e}"
    ))
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let (mut worst_eig, mut worst_rel) = (0.0_f64, 0.0_f64);
    let mut counts = [0usize; 2];
    for _ in 0..20 {
        let (eta, zeta) = random_generic(&mut r);
        let nf = framed(&mut r, eta, zeta)?;
        let pi = pi_polynomial(&nf, TOL);
        let expected = if nf.invariant() > 0.0 { 3 } else { 1 };
        ensure(pi.count == expected && !pi.degenerate, || {
            format!("{} roots for zeta4^2 - zeta3 zeta5 = {}", pi.count, nf.invariant())
        })?;
        counts[usize::from(expected == 3)] += 1;
        for cp in lifted_critical_points(&nf, TOL) {
            let mu3 = cp.closed_form[2];
            for k in 0..3 {
                worst_eig = worst_eig.max((cp.numeric[k] - cp.closed_form[k]).abs() / mu3.abs().max(1.0));
            }
            let rel = match cp.root {
                ProjRoot::Finite(_) => (cp.numeric[0] + 2.0 * cp.numeric[2]).abs() / cp.numeric[2].abs(),
                ProjRoot::Infinity => (cp.closed_form[0] + cp.closed_form[2]).abs() / mu3.abs(),
            };
            worst_rel = worst_rel.max(rel);
        }
    }
    ensure(worst_eig <= 1e-6, || format!("eigenvalue mismatch {worst_eig:e}"))?;
    ensure(worst_rel <= 1e-6, || format!("eigenvalue relation residual {worst_rel:e}"))?;
    Ok(format!(
        "20 cases ({} with 3 roots, {} with 1), eigenvalues to {worst_eig:.1e}, relations to {worst_rel:.1e}",
        counts[1], counts[0]
    ))
}

fn criterion_5() -> Outcome {
    let mut vals = Vec::new();
    for eta in [1.0, 2.0, -3.0] {
        let chart = SurfaceChart::normal_form(eta, [0.0, 0.0, 0.0, 1.0, 1.0], None, Domain::square(0.5))
            .map_err(|e| e.to_string())?;
        let nf = inflection_frame(&chart, 0.0, 0.0).map_err(|e| e.to_string())?;
        let h = hessian_equation_surface(&nf, TOL);
        ensure((h.h_f - 2.0 * eta * eta).abs() <= 1e-10, || format!("eta = {eta}: H_F = {}", h.h_f))?;
        ensure((h.bordered - h.h_f).abs() <= 1e-10, || format!("eta = {eta}: bordered Hessian {}", h.bordered))?;
        vals.push(format!("{}", h.h_f));
    }
    Ok(format!("H_F = {} for eta = 1, 2, -3", vals.join(", ")))
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    let mut worst = 0.0_f64;
    let mut signs = [0usize; 2];
    for _ in 0..20 {
        let (eta, zeta) = random_generic(&mut r);
        let nf = framed(&mut r, eta, zeta)?;
        let red = reduce_1jet(&nf, TOL).map_err(|e| e.to_string())?;
        let expected = -nf.invariant().signum();
        ensure(red.sign == expected, || format!("sign {} for invariant {}", red.sign, nf.invariant()))?;
        signs[usize::from(red.sign > 0.0)] += 1;
        worst = worst.max(red.residual);
    }
    ensure(worst < 1e-9, || format!("off-pattern coefficient {worst:e}"))?;
    Ok(format!(
        "20 cases ({} with +2X dXdY, {} with -2X dXdY), worst off-pattern {worst:.1e}",
        signs[1], signs[0]
    ))
}

fn criterion_7() -> Outcome {
    let mut r = rng(7);
    let (mut worst_sq, mut worst_tr) = (0.0_f64, 0.0_f64);
    for _ in 0..20 {
        let (eta, zeta) = random_generic(&mut r);
        let nf = framed(&mut r, eta, zeta)?;
        let c = cusp_diagnostics(&nf, TOL).map_err(|e| e.to_string())?;
        worst_sq = worst_sq.max(c.square_residual);
        let expected = (nf.eta * nf.zeta[4]).powi(2);
        worst_tr = worst_tr.max((c.transversality - expected).abs() / nf.scale().powi(4));
        ensure(c.transversal && expected > 0.0, || format!("not transversal: {}", c.transversality))?;
    }
    ensure(worst_sq <= 1e-8, || format!("quadratic part deviation {worst_sq:e}"))?;
    ensure(worst_tr <= 1e-8, || format!("transversality deviation {worst_tr:e}"))?;
    Ok(format!("20 cases, square fit to {worst_sq:.1e}, Delta2(0,1) = (eta zeta5)^2 to {worst_tr:.1e}"))
}

fn criterion_8() -> Outcome {
    let mut r = rng(8);
    let mut h_counts = BTreeMap::new();
    let mut n = 0;
    while n < 50 {
        let alpha: f64 = r.gen_range(-1.0..1.0);
        let beta: f64 = r.gen_range(-1.0..1.0);
        let z: [f64; 5] = std::array::from_fn(|_| r.gen_range(-1.0..1.0));
        let det = (z[0] + z[2]) * (z[2] + z[4]) - (z[1] + z[3]).powi(2);
        if alpha.hypot(beta) < 0.2 || det.abs() < 0.05 {
            continue;
        }
        n += 1;
        let chart = SurfaceChart::umbilic_normal_form(alpha, beta, z, None, Domain::square(0.5))
            .map_err(|e| e.to_string())?;
        let ih = isoclinic_index(&chart, (0.0, 0.0), 0.02).map_err(|e| e.to_string())?;
        let is = mean_index(&chart, (0.0, 0.0), 0.02).map_err(|e| e.to_string())?;
        ensure(ih.index == det.signum(), || format!("ind h = {} with det {det}", ih.index))?;
        ensure(is.index == -0.5 * det.signum(), || format!("ind S = {} with det {det}", is.index))?;
        *h_counts.entry(ih.index as i64).or_insert(0) += 1;
    }
    let mut infl = [0usize; 2];
    for _ in 0..50 {
        let (eta, zeta) = random_generic(&mut r);
        let chart = SurfaceChart::normal_form(eta, zeta, None, Domain::square(0.5)).map_err(|e| e.to_string())?;
        let inv = zeta[3] * zeta[3] - zeta[2] * zeta[4];
        let is = mean_index(&chart, (0.0, 0.0), 0.02).map_err(|e| e.to_string())?;
        ensure(is.index == -0.5 * inv.signum(), || format!("ind S = {} with invariant {inv}", is.index))?;
        infl[usize::from(inv > 0.0)] += 1;
    }
    let opts = ClassifyOptions {
        separatrix_radius: Some(0.1),
        ..ClassifyOptions::default()
    };
    let mut sep = Vec::new();
    for (zeta, model, want) in [
        ([0.0, 0.0, 0.0, 1.0, 1.0], Model::StarD3, 3),
        ([0.0, 0.0, 1.0, 0.0, 1.0], Model::LemonMonstar, 1),
    ] {
        let chart = SurfaceChart::normal_form(1.0, zeta, None, Domain::square(0.3)).map_err(|e| e.to_string())?;
        let rep = classify_inflection(&chart, (0.0, 0.0), &opts).map_err(|e| e.to_string())?;
        let count = rep.separatrices.as_ref().map_or(0, |s| s.directions);
        ensure(rep.model == model && count == want, || {
            format!("{:?}: model {:?}, {count} separatrix directions", model, rep.model)
        })?;
        sep.push(count);
    }
    Ok(format!(
        "50 umbilics (ind h: {:?}), 50 inflections ({} star, {} lemon/monstar), separatrices star {} lemon {}",
        h_counts, infl[1], infl[0], sep[0], sep[1]
    ))
}

fn criterion_9() -> Outcome {
    let mut worst = 0.0_f64;
    let (mut lines, mut steps) = (0, 0usize);
    let charts = [
        SurfaceChart::normal_form(1.0, [0.0, 0.0, 0.0, 1.0, 1.0], None, Domain::square(3.0)),
        SurfaceChart::normal_form(-0.7, [0.3, -0.2, 0.5, 0.1, 0.8], Some("0.1*x^5"), Domain::square(3.0)),
        SurfaceChart::generating_function("x^3/3 - x*y^2 + 0.2*x^2*y^2", Domain::square(3.0)),
    ];
    let opts = IntegrationOptions {
        step: 1e-3,
        max_steps: 10_000,
        ..IntegrationOptions::default()
    };
    let mut full = 0;
    for chart in charts {
        let chart = chart.map_err(|e| e.to_string())?;
        for seed in [(0.4, -0.3), (-0.5, 0.2), (0.2, 0.6), (0.8, 0.1)] {
            for branch in 0..2 {
                let line = match integrate_asymptotic_line(&chart, seed, branch, &opts) {
                    Ok(l) => l,
                    Err(lagsurf::Error::EllipticSeed { .. }) => continue,
                    Err(e) => return Err(e.to_string()),
                };
                lines += 1;
                steps += line.vertices.len() - 1;
                if line.stop == StopReason::MaxSteps {
                    full += 1;
                }
                worst = worst.max(line.relative_first_integral());
            }
        }
    }
    ensure(lines > 0, || "no hyperbolic seed".into())?;
    ensure(full > 0, || "no line ran the full 10^4 steps".into())?;
    ensure(worst < 1e-6, || format!("max |F| / scale = {worst:e}"))?;
    Ok(format!(
        "{lines} lines ({full} ran 10^4 steps, {steps} steps total), max |F|/scale = {worst:.1e}"
    ))
}

fn scenes_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenes")
}

fn criterion_10() -> Outcome {
    let scene = Scene::load(&scenes_dir().join("whitney.toml"))
        .map_err(|e| e.to_string())?
        .map_err(|d| format!("{d:?}"))?;
    let band = scene.charts.iter().find(|c| c.name == "band").ok_or("no band chart")?;
    let (mut omega, mut wint) = (0.0_f64, f64::INFINITY);
    let reg = band.region;
    let n = 200;
    for i in 0..n {
        for j in 0..n {
            let x = reg.x.0 + (i as f64 + 0.5) * reg.width() / n as f64;
            let y = reg.y.0 + (j as f64 + 0.5) * reg.height() / n as f64;
            omega = omega.max(band.chart.lagrangean_residual(x, y).map_err(|e| e.to_string())?.abs());
            wint = wint.min(wintgen_residual(&band.chart, x, y).map_err(|e| e.to_string())?);
        }
    }
    ensure(omega < 1e-10, || format!("omega residual {omega:e}"))?;
    ensure(wint >= -1e-10, || format!("Wintgen residual {wint:e}"))?;
    let rep = global_index_report(&scene.charts, 2, scene.resolution).map_err(|e| e.to_string())?;
    let status = if rep.generic {
        let fails: Vec<&str> = rep.relations.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
        ensure(fails.is_empty(), || format!("generic, but relations fail: {fails:?}"))?;
        "generic, index sums hold".to_string()
    } else {
        ensure(!rep.diagnostics.is_empty(), || "non-generic without a diagnostic".into())?;
        format!("non-generic, {} degeneracy diagnostics emitted", rep.diagnostics.len())
    };
    Ok(format!(
        "omega residual {omega:.1e}, min Wintgen {wint:.1e}; {} umbilics, {} inflections, sum ind h = {}; {status}",
        rep.umbilic_count, rep.inflection_count, rep.sum_index_h
    ))
}

fn data_files(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let mut out = BTreeMap::new();
    for e in std::fs::read_dir(dir).map_err(|e| e.to_string())? {
        let p = e.map_err(|e| e.to_string())?.path();
        let name = p.file_name().unwrap().to_string_lossy().to_string();
        let ext = p.extension().and_then(|s| s.to_str()).unwrap_or("");
        if name != "manifest.json" && (ext == "csv" || ext == "json") {
            out.insert(name, std::fs::read(&p).map_err(|e| e.to_string())?);
        }
    }
    Ok(out)
}

fn criterion_11() -> Outcome {
    let mut scenes: Vec<PathBuf> = std::fs::read_dir(scenes_dir())
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "toml"))
        .collect();
    scenes.sort();
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut files = 0;
    for scene in &scenes {
        let stem = scene.file_stem().unwrap().to_string_lossy().to_string();
        let mut runs = Vec::new();
        for k in 0..2 {
            let dir = tmp.path().join(format!("{stem}-{k}"));
            let opts = RunOptions {
                out_dir: Some(dir.clone()),
                tol: None,
            };
            let out = run_scene(scene, &opts).map_err(|e| format!("{stem}: {e}"))?;
            ensure(out.exit_code == 0, || format!("{stem}: exit {} {:?}", out.exit_code, out.errors))?;
            runs.push(data_files(&dir)?);
        }
        ensure(!runs[0].is_empty(), || format!("{stem}: no data files"))?;
        ensure(runs[0] == runs[1], || {
            let diff: Vec<&String> = runs[0].keys().filter(|k| runs[0].get(*k) != runs[1].get(*k)).collect();
            format!("{stem}: outputs differ: {diff:?}")
        })?;
        files += runs[0].len();
    }
    Ok(format!("{} scenes, {files} CSV/JSON files identical across two runs", scenes.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("Lagrangean curvature identity", criterion_1),
        ("desk values", criterion_2),
        ("ellipse and resultant consistency", criterion_3),
        ("inflection classification", criterion_4),
        ("Hessian of the equation surface", criterion_5),
        ("1-jet reduction", criterion_6),
        ("cusp diagnostics", criterion_7),
        ("index suite", criterion_8),
        ("first-integral conservation", criterion_9),
        ("Whitney sphere pipeline", criterion_10),
        ("determinism", criterion_11),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = f();
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} [{secs:.1} s]", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} [{secs:.1} s]", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
