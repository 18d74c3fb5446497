use isothermic::fit::{fit_mobius, sphere_rank};
use isothermic::projective::{cross_ratio, mobius_apply, stereo_project};
use isothermic::{AffineChart, ComplexScalar, HPoint, QuatMatrix2, Quaternion as Q};
use proptest::prelude::*;

fn quat(r: f64) -> impl Strategy<Value = Q> {
    prop::array::uniform4(-r..r).prop_map(Q::from_array)
}

/// Matrices near the identity: `|c p| < |d|` for `|p| <= 3`, so images stay finite.
fn mobius() -> impl Strategy<Value = QuatMatrix2> {
    prop::array::uniform4(quat(0.1)).prop_map(|e| {
        QuatMatrix2::new(Q::ONE + e[0], e[1], e[2], Q::ONE + e[3])
    })
}

fn close(a: Q, b: Q, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

#[test]
fn multiplication_table() {
    assert_eq!(Q::I * Q::J, Q::K);
    assert_eq!(Q::J * Q::K, Q::I);
    assert_eq!(Q::K * Q::I, Q::J);
    assert_eq!(Q::I * Q::I, Q::real(-1.0));
    assert_eq!(Q::J * Q::I, -Q::K);
    // complex numbers embed as re + im i
    assert_eq!(Q::from(ComplexScalar::new(2.0, 3.0)), Q::new(2.0, 3.0, 0.0, 0.0));
}

proptest! {
    #[test]
    fn associative(a in quat(3.0), b in quat(3.0), c in quat(3.0)) {
        prop_assert!(close((a * b) * c, a * (b * c), 1e-14));
    }

    #[test]
    fn norm_is_multiplicative(a in quat(3.0), b in quat(3.0)) {
        prop_assert!(((a * b).norm() - a.norm() * b.norm()).abs() <= 1e-13 * (1.0 + a.norm() * b.norm()));
    }

    #[test]
    fn conjugation_reverses_products(a in quat(3.0), b in quat(3.0)) {
        prop_assert!(close((a * b).conj(), b.conj() * a.conj(), 1e-14));
    }

    #[test]
    fn inverse_both_sides(a in quat(3.0)) {
        prop_assume!(a.norm() > 1e-3);
        let inv = a.inv().unwrap();
        prop_assert!(close(a * inv, Q::ONE, 1e-13));
        prop_assert!(close(inv * a, Q::ONE, 1e-13));
    }

    #[test]
    fn chart_roundtrip(m in mobius(), p in quat(1.5)) {
        let chart = AffineChart::from_matrix(&m).unwrap();
        prop_assert!(chart.pseudo_duality_residual() < 1e-12);
        let back = stereo_project(&chart, &chart.point(p)).unwrap();
        prop_assert!(close(back, p, 1e-10));
    }

    #[test]
    fn cross_ratio_is_mobius_invariant(m in mobius(), p in prop::array::uniform4(quat(1.5))) {
        let pts = p.map(HPoint::affine);
        let before = cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3]);
        prop_assume!(before.is_ok());
        let before = before.unwrap();
        prop_assume!(before.re.abs() + before.im < 1e3);
        let img: Vec<HPoint> = pts.iter().map(|x| mobius_apply(&m, x).unwrap()).collect();
        let after = cross_ratio(&img[0], &img[1], &img[2], &img[3]).unwrap();
        prop_assert!(after.dist(before) <= 1e-8 * (1.0 + before.re.abs()));
    }

    #[test]
    fn concircular_points_have_real_cross_ratio(t in prop::array::uniform4(0.0..std::f64::consts::TAU), c in quat(1.0), r in 0.2..2.0f64) {
        let gaps = [t[0], t[1], t[2], t[3]];
        prop_assume!((0..4).all(|i| (0..i).all(|k| (gaps[i] - gaps[k]).abs() > 0.05)));
        // a circle in the plane spanned by 1 and j through the centre c
        let pts: Vec<HPoint> = gaps.iter().map(|&a| HPoint::affine(c + Q::new(a.cos(), 0.0, a.sin(), 0.0) * r)).collect();
        let q = cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap();
        prop_assert!(q.im <= 1e-9 * (1.0 + q.re.abs()));
    }

    #[test]
    fn sphere_points_have_rank_deficient_system(c in quat(1.0), r in 0.3..2.0f64, dirs in prop::collection::vec(prop::array::uniform3(-1.0..1.0f64), 8)) {
        prop_assume!(dirs.iter().all(|d| d.iter().map(|x| x * x).sum::<f64>() > 0.01));
        // points on a 2-sphere inside the 3-space Im H + c
        let pts: Vec<HPoint> = dirs.iter().map(|d| {
            let n = d.iter().map(|x| x * x).sum::<f64>().sqrt();
            HPoint::affine(c + Q::new(0.0, d[0], d[1], d[2]) * (r / n))
        }).collect();
        prop_assert!(sphere_rank(&pts).two_sphere_residual() < 1e-9);
    }

    #[test]
    fn mobius_fit_recovers_the_map(m in mobius(), p in prop::collection::vec(quat(1.5), 6)) {
        let src: Vec<HPoint> = p.iter().map(|&x| HPoint::affine(x)).collect();
        let dst: Vec<HPoint> = src.iter().map(|x| mobius_apply(&m, x).unwrap()).collect();
        let (fit, residual) = fit_mobius(&src, &dst).unwrap();
        prop_assert!(residual < 1e-6);
        for (s, d) in src.iter().zip(&dst) {
            prop_assert!(mobius_apply(&fit, s).unwrap().dist(d) < 1e-6);
        }
    }
}
