//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::time::Instant;

use isothermic::fit::sphere_rank;
use isothermic::io::{export_mesh, read_mesh, MeshFormat};
use isothermic::net::{classify, factorize_unchecked, isothermic_factorization};
use isothermic::special::{
    bryant_cousin, catenoid_pair, ccousin_coords, christoffel_identity_residual, cousin_models,
    cousin_sweep, dual_check, horospherical_from_gauss, minimal_cousin, poincare_ball,
    similarity_deviation, weierstrass_minimal, HolomorphicNet,
};
use isothermic::suites;
use isothermic::transforms::christoffel::ChristoffelPair;
use isothermic::transforms::darboux::{
    bianchi_residual, cd_check, edge_cross_ratio_residual, hexahedron_residual,
};
use isothermic::transforms::ttransform::{frame_of, q_lambda_residual};
use isothermic::transforms::{
    bianchi_permute, build_connection, cd_permute, christoffel, darboux_fixed_point,
    darboux_riccati, integrate_T, t_group_check, t_transform, ConnectionPair,
};
use isothermic::{
    AffineNet, CrossRatioFactorization, Execution, Grid, GridWindow, HPoint, ImaginaryQuaternion,
    Quaternion as Q,
};

type Outcome = Result<(bool, String), isothermic::Error>;

const EXEC: Execution = Execution::Parallel;

fn exponential() -> (HolomorphicNet, HolomorphicNet) {
    catenoid_pair(20, GridWindow::symmetric(10, 10).unwrap()).unwrap()
}

/// The exponential net with its Christoffel transform and labels.
fn exponential_pair() -> Result<ChristoffelPair, isothermic::Error> {
    let (g, _) = exponential();
    let f = g.to_affine();
    let fact = isothermic_factorization(&f, EXEC)?;
    christoffel(&f, &fact, Q::ZERO)
}

fn christoffel_identity() -> Outcome {
    let (g, h) = exponential();
    let start = Instant::now();
    let r = christoffel_identity_residual(&g, &h, EXEC);
    let t = start.elapsed().as_secs_f64();
    Ok((
        r < 1e-9 && t < 0.1,
        format!("residual {r:.2e}, {:.1} ms", t * 1e3),
    ))
}

fn cross_ratio_constant() -> Outcome {
    let (g, _) = exponential();
    let s = PI / 20.0;
    let expect = -(s.sinh() / s.sin()).powi(2);
    let q = g.to_affine().quad_cross_ratios(EXEC)?;
    let dev = q
        .values()
        .iter()
        .fold(0.0f64, |m, c| m.max((c.re - expect).abs().max(c.im)));
    Ok((dev < 1e-10, format!("q = {expect:.6}, deviation {dev:.2e}")))
}

fn q_lambda() -> Outcome {
    let pair = exponential_pair()?;
    let f = pair.f.to_projective();
    let frame = integrate_T(&build_connection(&pair), 0.1, EXEC)?;
    let r = q_lambda_residual(&t_transform(&f, &frame)?, &pair.factorization, 0.1, EXEC)?;
    Ok((r < 1e-8, format!("residual {r:.2e}")))
}

fn group_law() -> Outcome {
    let pair = exponential_pair()?;
    let g = t_group_check(
        &pair.f.to_projective(),
        &build_connection(&pair),
        0.1,
        0.2,
        EXEC,
    )?;
    Ok((
        g.composition < 1e-7 && g.inverse < 1e-8,
        format!(
            "composition {:.2e}, inverse {:.2e}",
            g.composition, g.inverse
        ),
    ))
}

fn darboux_equivalence() -> Outcome {
    let pair = exponential_pair()?;
    let lambda = 0.3;
    let init = pair.f.get(0, 0) + Q::new(0.2, 0.5, -0.3, 0.4);
    let riccati = darboux_riccati(&pair, lambda, init, EXEC)?;
    let frame = integrate_T(&build_connection(&pair), lambda, EXEC)?;
    let fixed = darboux_fixed_point(&frame, &HPoint::affine(init))?;
    let agree = riccati.hat.max_dist(&fixed.hat);
    let cross = edge_cross_ratio_residual(
        &pair.f.to_projective(),
        &riccati.hat,
        &pair.factorization,
        lambda,
        EXEC,
    );
    Ok((
        agree < 1e-8 && cross < 1e-8,
        format!("constructions differ by {agree:.2e}, edge cross ratios {cross:.2e}"),
    ))
}

fn bianchi() -> Outcome {
    let pair = exponential_pair()?;
    let f = pair.f.to_projective();
    let o = pair.f.get(0, 0);
    let hat1 = darboux_riccati(&pair, 0.3, o + Q::new(0.2, 0.5, -0.3, 0.4), EXEC)?;
    let hat2 = darboux_riccati(&pair, -0.2, o + Q::new(-0.4, 0.1, 0.6, 0.2), EXEC)?;
    let hat = bianchi_permute(&f, &hat1, &hat2)?;
    let cross = bianchi_residual(&f, &hat1, &hat2, &hat);
    let cube = hexahedron_residual(&f, [&hat1.hat, &hat2.hat, &hat.hat], EXEC);
    // f̂ is a Darboux transform of f̂1 at λ2
    let chain =
        edge_cross_ratio_residual(&hat1.hat, &hat.hat, &pair.factorization, hat2.lambda, EXEC);
    Ok((
        cross < 1e-9 && cube < 1e-8 && chain < 1e-8,
        format!("cross ratio {cross:.2e}, hexahedra {cube:.2e}, D(f1) relation {chain:.2e}"),
    ))
}

fn cd_permutability() -> Outcome {
    let pair = exponential_pair()?;
    let lambda = 0.3;
    let hat = darboux_riccati(
        &pair,
        lambda,
        pair.f.get(0, 0) + Q::new(0.2, 0.5, -0.3, 0.4),
        EXEC,
    )?;
    let permuted = cd_permute(&pair, &hat.affine(&pair.f.chart)?, lambda)?;
    let r = cd_check(&pair, &permuted, lambda, EXEC);
    let dual = r.christoffel.max();
    Ok((
        dual < 1e-8 && r.riccati < 1e-8,
        format!("dual relations {dual:.2e}, Riccati {:.2e}", r.riccati),
    ))
}

fn sphere_preservation() -> Outcome {
    let (g, _) = exponential();
    let n = minimal_cousin(&g, EXEC)?.gauss;
    let fact = isothermic_factorization(&n, EXEC)?;
    let before = sphere_rank(n.to_projective().values.values()).two_sphere_residual();
    let (_, frame) = frame_of(&n.to_projective(), &fact, 0.2, EXEC)?;
    let image = t_transform(&n.to_projective(), &frame)?;
    let after = sphere_rank(image.values.values()).two_sphere_residual();
    Ok((
        after < 1e-8,
        format!("S² residual {before:.2e} before, {after:.2e} after T^0.2"),
    ))
}

fn minimal_closedness() -> Outcome {
    let (g, h) = exponential();
    let m = weierstrass_minimal(&g, &h)?;
    Ok((
        m.closure < 1e-10 && m.max_real_part < 1e-10,
        format!(
            "closure {:.2e}, real part {:.2e}",
            m.closure, m.max_real_part
        ),
    ))
}

fn horospherical() -> Outcome {
    let (g, h) = exponential();
    let lambda = 0.25;
    let f = bryant_cousin(&g, &h, lambda, EXEC)?;
    let sharp = horospherical_from_gauss(
        &g,
        &h,
        -lambda,
        ImaginaryQuaternion::new(1.0, 0.0, 0.0),
        EXEC,
    )?;
    let darboux = f.darboux_residual(EXEC).max(sharp.darboux_residual(EXEC));
    let dual = dual_check(&sharp, &f, EXEC)?.max();
    let ball = poincare_ball(&ccousin_coords(&f.frame)?)?;
    let radius = ball.values().iter().fold(0.0f64, |m, p| m.max(p.norm()));
    let report = suites::horospherical_pipeline(&g, &h, lambda, EXEC)?;
    Ok((
        darboux < 1e-8 && dual < 1e-8 && radius < 1.0 && report.pass(),
        format!(
            "Darboux {darboux:.2e}, duality {dual:.2e}, ball radius {radius:.4}, suite {}",
            if report.pass() { "pass" } else { "FAIL" }
        ),
    ))
}

fn sweep() -> Outcome {
    let start = Instant::now();
    let (g, h) = exponential();
    let lambdas = [-0.8, -0.117, -0.05, -0.025, 1e-7, 0.01, 0.025, 0.085, 0.25];
    let dir = tempfile::tempdir().map_err(isothermic::Error::from)?;
    let family = cousin_sweep(&g, &h, &lambdas, EXEC)?;
    let mut meshes = 0;
    for (k, c) in family.iter().enumerate() {
        for (model, pts) in [
            ("gauss", &c.gauss),
            ("ccousin", &c.ccousin),
            ("ball", &c.ball),
        ] {
            let path = dir.path().join(format!("{k:02}_{model}.obj"));
            export_mesh(pts, &path, MeshFormat::Obj)?;
            let mesh = read_mesh(&path)?;
            meshes += usize::from(mesh.vertices.len() == 441 && mesh.faces.len() == 400);
        }
    }
    let failing: Vec<String> = lambdas
        .iter()
        .map(|&l| suites::horospherical_pipeline(&g, &h, l, EXEC).map(|r| (l, r.pass())))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter(|(_, ok)| !ok)
        .map(|(l, _)| format!("{l:?}"))
        .collect();
    let minimal = weierstrass_minimal(&g, &h)?;
    let devs: Vec<f64> = [1e-3, 1e-5, 1e-7]
        .iter()
        .map(|&l| cousin_models(&g, &h, l).map(|c| similarity_deviation(&minimal, &c.ccousin)))
        .collect::<Result<_, _>>()?;
    let decreasing = devs.windows(2).all(|w| w[1] < w[0]);
    let t = start.elapsed().as_secs_f64();
    Ok((
        meshes == 27 && failing.is_empty() && decreasing && t < 10.0,
        format!(
            "{meshes} meshes, failing suites [{}], limit deviations {:.1e} {:.1e} {:.1e}, {t:.2} s",
            failing.join(", "),
            devs[0],
            devs[1],
            devs[2]
        ),
    ))
}

/// A planar net completed quad by quad from cross ratios `q_{m,n} = -exp(0.15 m n)`:
/// principal, but `log|q|` has a mixed term, so no labels `a_m / b_n` exist.
fn principal_not_isothermic() -> AffineNet {
    let w = GridWindow::new(0, 6, 0, 6).unwrap();
    let mut vals = Grid::from_fn(w, |_, _| Q::ZERO);
    for m in 0..=6 {
        let x = m as f64;
        vals.set(m, 0, Q::new(x + 0.05 * x * x, 0.0, 0.0, 0.0));
    }
    for n in 1..=6 {
        let y = n as f64;
        vals.set(0, n, Q::new(-0.03 * y * y, y, 0.0, 0.0));
    }
    for m in 0..6 {
        for n in 0..6 {
            let q = -(0.15 * (m * n) as f64).exp();
            let p = isothermic::transforms::darboux::complete_cross_ratio(
                *vals.get(m, n),
                *vals.get(m + 1, n),
                *vals.get(m, n + 1),
                q,
            )
            .expect("nondegenerate quad");
            vals.set(m + 1, n + 1, p);
        }
    }
    AffineNet::new(vals)
}

fn negative_control() -> Outcome {
    let net = principal_not_isothermic();
    let c = classify(&net, EXEC);
    let raw = net.quad_cross_ratios_raw(EXEC)?;
    let fit = factorize_unchecked(&raw.map(|q| q.w))?;
    let factor = raw.iter().fold(0.0f64, |r, ((m, n), q)| {
        r.max((q.w - fit.q(m, n)).abs() / q.w.abs())
    });
    // the best label guess, used as if the net were isothermic
    let labels = CrossRatioFactorization::from_fns(net.window(), |m| fit.a(m), |n| fit.b(n));
    let u = Grid::from_fn(net.window(), |m, n| {
        if m < 6 {
            (net.get(m + 1, n) - net.get(m, n)).inv().unwrap() * fit.a(m)
        } else {
            Q::ZERO
        }
    });
    let v = Grid::from_fn(net.window(), |m, n| {
        if n < 6 {
            (net.get(m, n + 1) - net.get(m, n)).inv().unwrap() * fit.b(n)
        } else {
            Q::ZERO
        }
    });
    let face = ConnectionPair::from_edge_fields(&net, &u, &v, Some(labels))
        .maurer_cartan_residual(0.1, EXEC);
    Ok((
        c.principal && !c.isothermic && factor > 1e-3 && face > 1e-3,
        format!(
            "|Im q| {:.1e}, factorization residual {factor:.2e}, face residual {face:.2e}",
            c.max_imaginary
        ),
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("Christoffel-pair identity", christoffel_identity),
        ("cross-ratio constant", cross_ratio_constant),
        ("T-law q^lambda", q_lambda),
        ("group law", group_law),
        ("Darboux equivalence", darboux_equivalence),
        ("Bianchi permutability", bianchi),
        ("C-D permutability", cd_permutability),
        ("sphere preservation", sphere_preservation),
        ("minimal-net closedness", minimal_closedness),
        ("horospherical consistency", horospherical),
        ("cousin sweep", sweep),
        ("negative control", negative_control),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let (ok, detail) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!ok);
        println!(
            "{:>2} {} {name}: {detail}",
            k + 1,
            if ok { "pass" } else { "FAIL" }
        );
    }
    println!(
        "{} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
