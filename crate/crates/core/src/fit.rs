//! Least-squares fits used by the verification suites: Möbius maps between
//! point sets, spheres through points in HP^1, and Euclidean similarities.

use nalgebra::{DMatrix, Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::projective::{annihilator, HPoint, HermitianForm, QuatMatrix2};
use crate::quaternion::{ImaginaryQuaternion, Quaternion as Q};

fn basis_matrix(k: usize) -> QuatMatrix2 {
    let unit = match k % 4 {
        0 => Q::ONE,
        1 => Q::I,
        2 => Q::J,
        _ => Q::K,
    };
    let mut e = [Q::ZERO; 4];
    e[k / 4] = unit;
    QuatMatrix2::from_entries(e)
}

fn smallest_right_singular(a: DMatrix<f64>) -> (Vec<f64>, Vec<f64>) {
    let cols = a.ncols();
    // pad so the SVD exposes a full right basis
    let a = if a.nrows() < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (a.nrows(), cols)).copy_from(&a);
        p
    } else {
        a
    };
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let sigma: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let last = *order.last().expect("nonempty");
    (sigma, v_t.row(last).iter().copied().collect())
}

/// Best Möbius map `M` with `M src_i ≡ dst_i`, by the null vector of the
/// linear system `ψ_i M v_i = 0`. Returns the map and the largest chordal
/// distance between `M src_i` and `dst_i`.
pub fn fit_mobius(src: &[HPoint], dst: &[HPoint]) -> Result<(QuatMatrix2, f64)> {
    assert_eq!(src.len(), dst.len());
    if src.len() < 4 {
        return Err(Error::DegenerateConfiguration { m: 0, n: 0 });
    }
    let mut a = DMatrix::zeros(4 * src.len(), 16);
    for (r, (p, q)) in src.iter().zip(dst).enumerate() {
        let psi = annihilator(q)?;
        let v = p.rep();
        for k in 0..16 {
            let c = psi.apply(basis_matrix(k).apply(v));
            for (l, x) in c.to_array().into_iter().enumerate() {
                a[(4 * r + l, k)] = x;
            }
        }
    }
    let (_, x) = smallest_right_singular(a);
    let mut m = QuatMatrix2::ZERO;
    for (k, &c) in x.iter().enumerate() {
        m = m + basis_matrix(k).scale_real(c);
    }
    m.inverse()?;
    let mut res: f64 = 0.0;
    for (p, q) in src.iter().zip(dst) {
        res = res.max(HPoint::new(m.apply(p.rep()))?.dist(q));
    }
    Ok((m, res))
}

/// Coefficient row of the linear condition `s(v, v) = 0` in the forms `s`.
fn sphere_row(p: &HPoint) -> [f64; 6] {
    let v = p.rep();
    let (a, b) = (v.upper, v.lower);
    let c = a * b.conj() * 2.0;
    let row = [a.norm_sqr(), c.w, c.x, c.y, c.z, b.norm_sqr()];
    let n = row.iter().map(|x| x * x).sum::<f64>().sqrt();
    row.map(|x| x / n)
}

/// Singular values of the lifted point matrix, relative to the largest.
///
/// Points lie on a common 3-sphere iff the sixth value vanishes, on a common
/// 2-sphere iff the fifth does, on a circle iff the fourth does.
#[derive(Debug, Clone)]
pub struct SphereRank {
    pub relative_sigma: Vec<f64>,
    pub form: HermitianForm,
}

impl SphereRank {
    pub fn three_sphere_residual(&self) -> f64 {
        self.relative_sigma.get(5).copied().unwrap_or(0.0)
    }

    pub fn two_sphere_residual(&self) -> f64 {
        self.relative_sigma.get(4).copied().unwrap_or(0.0)
    }

    pub fn circle_residual(&self) -> f64 {
        self.relative_sigma.get(3).copied().unwrap_or(0.0)
    }
}

pub fn sphere_rank(points: &[HPoint]) -> SphereRank {
    let mut a = DMatrix::zeros(points.len().max(6), 6);
    for (r, p) in points.iter().enumerate() {
        for (k, x) in sphere_row(p).into_iter().enumerate() {
            a[(r, k)] = x;
        }
    }
    let (sigma, x) = smallest_right_singular(a);
    let s1 = sigma[0].max(f64::MIN_POSITIVE);
    SphereRank {
        relative_sigma: sigma.iter().map(|s| s / s1).collect(),
        form: HermitianForm::new(x[0], Q::new(x[1], x[2], x[3], x[4]), x[5]),
    }
}

/// Similarity `y ≈ s R x + t` (Umeyama). `allow_reflection` lets `R` lie in O(3).
#[derive(Debug, Clone, Copy)]
pub struct Similarity {
    pub scale: f64,
    pub rotation: Matrix3<f64>,
    pub translation: Vector3<f64>,
    /// Largest residual `|s R x + t - y|`.
    pub max_deviation: f64,
    /// Root mean square of `y` about its centroid.
    pub target_size: f64,
}

impl Similarity {
    pub fn apply(&self, x: ImaginaryQuaternion) -> ImaginaryQuaternion {
        let v = self.rotation * Vector3::new(x.x, x.y, x.z) * self.scale + self.translation;
        ImaginaryQuaternion::new(v.x, v.y, v.z)
    }

    pub fn relative_deviation(&self) -> f64 {
        self.max_deviation / self.target_size
    }
}

pub fn fit_similarity(
    src: &[ImaginaryQuaternion],
    dst: &[ImaginaryQuaternion],
    allow_reflection: bool,
) -> Similarity {
    assert_eq!(src.len(), dst.len());
    let n = src.len() as f64;
    let v = |p: &ImaginaryQuaternion| Vector3::new(p.x, p.y, p.z);
    let mx = src.iter().map(v).sum::<Vector3<f64>>() / n;
    let my = dst.iter().map(v).sum::<Vector3<f64>>() / n;
    let mut cov = Matrix3::zeros();
    let mut var_x = 0.0;
    let mut var_y = 0.0;
    for (p, q) in src.iter().zip(dst) {
        let x = v(p) - mx;
        let y = v(q) - my;
        cov += y * x.transpose();
        var_x += x.norm_squared();
        var_y += y.norm_squared();
    }
    cov /= n;
    var_x /= n;
    var_y /= n;
    let svd = cov.svd(true, true);
    let (u, vt) = (svd.u.expect("requested"), svd.v_t.expect("requested"));
    let mut d = Matrix3::identity();
    if !allow_reflection && (u * vt).determinant() < 0.0 {
        // flip the direction of the smallest singular value
        let k = (0..3)
            .min_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]))
            .unwrap();
        d[(k, k)] = -1.0;
    }
    let rotation = u * d * vt;
    let trace: f64 = (0..3).map(|i| svd.singular_values[i] * d[(i, i)]).sum();
    let scale = if var_x > 0.0 { trace / var_x } else { 0.0 };
    let translation = my - rotation * mx * scale;
    let mut sim = Similarity {
        scale,
        rotation,
        translation,
        max_deviation: 0.0,
        target_size: var_y.sqrt(),
    };
    sim.max_deviation = src
        .iter()
        .zip(dst)
        .fold(0.0, |m, (p, q)| m.max((v(&sim.apply(*p)) - v(q)).norm()));
    sim
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::HVector;

    #[test]
    fn recovers_a_mobius_map() {
        let m = QuatMatrix2::new(
            Q::new(1.0, 0.2, 0.0, 0.1),
            Q::J,
            Q::new(0.3, 0.0, -0.5, 0.0),
            Q::new(2.0, 0.0, 0.0, 1.0),
        );
        let src: Vec<HPoint> = (0..8)
            .map(|k| {
                let t = k as f64;
                HPoint::affine(Q::new(
                    t.sin(),
                    (1.7 * t).cos(),
                    (0.3 * t * t).sin(),
                    0.5 * t - 1.0,
                ))
            })
            .collect();
        let dst: Vec<HPoint> = src
            .iter()
            .map(|p| HPoint::new(m.apply(p.rep())).unwrap())
            .collect();
        let (fit, res) = fit_mobius(&src, &dst).unwrap();
        assert!(res < 1e-10, "{res}");
        let q = HPoint::affine(Q::new(5.0, -1.0, 2.0, 0.0));
        let a = HPoint::new(fit.apply(q.rep())).unwrap();
        let b = HPoint::new(m.apply(q.rep())).unwrap();
        assert!(a.dist(&b) < 1e-9);
    }

    #[test]
    fn points_on_a_round_two_sphere() {
        let pts: Vec<HPoint> = (0..8)
            .map(|k| {
                let t = k as f64 * 0.7;
                let u = k as f64 * 1.3;
                HPoint::affine(
                    Q::new(0.0, t.cos() * u.sin(), t.sin() * u.sin(), u.cos()) * 2.0 + Q::ONE,
                )
            })
            .collect();
        let r = sphere_rank(&pts);
        assert!(r.two_sphere_residual() < 1e-12, "{:?}", r.relative_sigma);
        assert!(r.circle_residual() > 1e-3);
        let r = sphere_rank(
            &[
                pts.clone(),
                vec![HPoint::new(HVector::new(Q::K, Q::ONE)).unwrap()],
            ]
            .concat(),
        );
        assert!(r.two_sphere_residual() > 1e-3);
    }

    #[test]
    fn similarity_roundtrip() {
        let src: Vec<_> = (0..10)
            .map(|k| ImaginaryQuaternion::new(k as f64, (k * k) as f64 * 0.1, (k as f64).sin()))
            .collect();
        let rot = nalgebra::Rotation3::from_euler_angles(0.3, -0.2, 1.1);
        let dst: Vec<_> = src
            .iter()
            .map(|p| {
                let v = rot * Vector3::new(p.x, p.y, p.z) * 2.5 + Vector3::new(1.0, 2.0, 3.0);
                ImaginaryQuaternion::new(v.x, v.y, v.z)
            })
            .collect();
        let s = fit_similarity(&src, &dst, false);
        assert!((s.scale - 2.5).abs() < 1e-12);
        assert!(s.max_deviation < 1e-10);
    }
}
