use isothermic::net::isothermic_factorization;
use isothermic::special::{bryant_cousin, catenoid_pair};
use isothermic::suites;
use isothermic::transforms::ttransform::frame_of;
use isothermic::transforms::{christoffel, darboux_riccati, t_transform};
use isothermic::{AffineNet, Execution, GridWindow, Quaternion as Q};

const EXEC: Execution = Execution::Parallel;

fn exponential() -> AffineNet {
    catenoid_pair(20, GridWindow::symmetric(5, 5).unwrap()).unwrap().0.to_affine()
}

#[test]
fn isothermic_suite_separates_good_and_bad() {
    let f = exponential();
    let good = suites::isothermic(&f, EXEC);
    assert!(good.pass(), "{}", good.to_text());

    // bend one vertex out of its circles
    let mut vals = f.values.clone();
    vals.set(1, 1, *vals.get(1, 1) + Q::new(0.0, 0.0, 0.05, 0.0));
    let bad = suites::isothermic(&AffineNet::new(vals), EXEC);
    assert!(!bad.pass());
    let json: serde_json::Value = serde_json::from_str(&bad.to_json()).unwrap();
    assert_eq!(json["suite"], "isothermic");
    assert_eq!(json["pass"], false);
}

#[test]
fn transform_suites_pass_on_their_transforms() {
    let f = exponential();
    let fact = isothermic_factorization(&f, EXEC).unwrap();
    let pair = christoffel(&f, &fact, Q::ZERO).unwrap();
    assert!(suites::christoffel_pair(&f, &pair.f_star, EXEC).pass());

    let hat = darboux_riccati(&pair, 0.3, f.get(0, 0) + Q::new(0.1, 0.4, 0.2, -0.3), EXEC).unwrap();
    let r = suites::darboux_pair(&f.to_projective(), &hat.hat, EXEC).unwrap();
    assert!(r.pass(), "{}", r.to_text());
    let mu: f64 = r.parameters[0].1.parse().unwrap();
    assert!((mu - 0.3).abs() < 1e-8);

    let fp = f.to_projective();
    let (_, frame) = frame_of(&fp, &fact, 0.15, EXEC).unwrap();
    let fl = t_transform(&fp, &frame).unwrap();
    assert!(suites::t_laws(&fp, 0.15, Some(&fl), EXEC).unwrap().pass());
    // the wrong parameter is detected
    assert!(!suites::t_laws(&fp, 0.1, Some(&fl), EXEC).unwrap().pass());

    assert!(suites::permutability(&f, 0.2, 0.05, EXEC).unwrap().pass());
}

#[test]
fn horospherical_suites() {
    let (g, h) = catenoid_pair(20, GridWindow::symmetric(6, 6).unwrap()).unwrap();
    let r = suites::horospherical_pipeline(&g, &h, 0.25, EXEC).unwrap();
    assert!(r.pass(), "{}", r.to_text());
    let f = bryant_cousin(&g, &h, 0.25, EXEC).unwrap();
    let r = suites::horospherical_pair(&f.surface, &f.gauss, EXEC).unwrap();
    assert!(r.pass(), "{}", r.to_text());
}
