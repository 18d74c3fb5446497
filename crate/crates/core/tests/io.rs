use isothermic::io::{export_mesh, load_net, read_mesh, save_net, MeshFormat, NetFile, NetKind};
use isothermic::special::catenoid_pair;
use isothermic::{AffineChart, AffineNet, Error, Grid, GridWindow, ImaginaryQuaternion, QuatMatrix2, Quaternion as Q};
use proptest::prelude::*;

fn window() -> impl Strategy<Value = GridWindow> {
    (-3i32..1, 1i32..4, -2i32..1, 1i32..3).prop_map(|(a, b, c, d)| GridWindow::new(a, b, c, d).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn affine_files_roundtrip_bit_exact(w in window(), seed in any::<u64>()) {
        // values spread over many binades, including subnormal-adjacent and huge ones
        let val = |k: u64| f64::from_bits((seed.wrapping_mul(k + 1).rotate_left(17) & 0x7fef_ffff_ffff_ffff) | 1) * if k % 2 == 0 { 1.0 } else { -1.0 };
        let net = AffineNet::from_fn(w, |m, n| {
            let k = ((m + 10) * 100 + n + 10) as u64 * 4;
            Q::new(val(k), val(k + 1), val(k + 2), val(k + 3))
        });
        let text = NetFile::from_affine(&net).to_text();
        let back = NetFile::parse(&text).unwrap().to_affine().unwrap();
        for ((m, n), p) in net.values.iter() {
            prop_assert_eq!(p.to_array().map(f64::to_bits), back.get(m, n).to_array().map(f64::to_bits));
        }
    }
}

#[test]
fn every_kind_survives_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let w = GridWindow::new(-1, 2, 0, 1).unwrap();
    let (g, _) = catenoid_pair(12, w).unwrap();
    let path = dir.path().join("g.net");
    save_net(&path, &NetFile::from_holomorphic(&g).with_meta("lambda", 0.25)).unwrap();
    let file = load_net(&path).unwrap();
    assert_eq!(file.kind, NetKind::Complex);
    assert_eq!(file.meta_f64("lambda"), Some(0.25));
    assert_eq!(file.to_holomorphic().unwrap(), g);

    let pts = Grid::from_fn(w, |m, n| ImaginaryQuaternion::new(m as f64, n as f64, 0.5));
    let back = NetFile::parse(&NetFile::from_imaginary(&pts).to_text()).unwrap();
    assert_eq!(back.to_imaginary().unwrap(), pts);

    let proj = g.to_affine().to_projective();
    let back = NetFile::parse(&NetFile::from_projective(&proj).to_text()).unwrap();
    assert!(back.to_projective().unwrap().max_dist(&proj) == 0.0);
}

#[test]
fn non_standard_chart_is_kept() {
    let m = QuatMatrix2::new(Q::ONE, Q::new(0.0, 0.0, 0.5, 0.0), Q::ZERO, Q::real(2.0));
    let chart = AffineChart::from_matrix(&m).unwrap();
    let w = GridWindow::new(0, 1, 0, 1).unwrap();
    let net = AffineNet::with_chart(Grid::from_fn(w, |m, n| Q::new(m as f64, n as f64, 0.0, 1.0)), chart);
    let back = NetFile::parse(&NetFile::from_affine(&net).to_text()).unwrap().to_affine().unwrap();
    assert_eq!(back.chart, chart);
}

#[test]
fn malformed_files_name_the_line() {
    let good = NetFile::from_holomorphic(&catenoid_pair(12, GridWindow::new(0, 1, 0, 1).unwrap()).unwrap().0).to_text();
    let lines: Vec<&str> = good.lines().collect();
    let truncated = lines[..lines.len() - 1].join("\n");
    assert!(matches!(NetFile::parse(&truncated), Err(Error::Parse { .. })));

    let bad_number = good.replacen("data\n0 0 ", "data\n0 0 x", 1);
    match NetFile::parse(&bad_number) {
        Err(Error::Parse { line, .. }) => assert!(line > 1),
        other => panic!("{other:?}"),
    }
    assert!(matches!(NetFile::parse(&good.replace("kind complex", "kind spinor")), Err(Error::KindMismatch(_))));
    assert!(NetFile::parse("").is_err());
    assert!(matches!(load_net("/nonexistent/x.net"), Err(Error::Io(_))));
}

#[test]
fn meshes_have_one_quad_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let w = GridWindow::new(-2, 2, -1, 2).unwrap();
    let pts = Grid::from_fn(w, |m, n| ImaginaryQuaternion::new(m as f64, n as f64, (m * n) as f64 * 0.1));
    for fmt in [MeshFormat::Obj, MeshFormat::Ply] {
        let path = dir.path().join(format!("mesh.{}", fmt.extension()));
        export_mesh(&pts, &path, fmt).unwrap();
        let mesh = read_mesh(&path).unwrap();
        assert_eq!(mesh.vertices.len(), 20);
        assert_eq!(mesh.faces.len(), 12);
        assert!(mesh.faces.iter().all(|f| f.len() == 4));
        // m outer: (-1, 1) is the seventh vertex
        assert_eq!(mesh.vertices[6], [-1.0, 1.0, -0.1]);
    }
    assert!("stl".parse::<MeshFormat>().is_err());
}
