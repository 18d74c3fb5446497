//! The quaternionic projective line as a model of the conformal 4-sphere.
//!
//! Vectors of H^2 form a right module, covectors a left module. The standard
//! chart uses `v_inf = (1,0)`, `v_0 = (0,1)`, so the point over `p` is `(p, 1)`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::quaternion::Quaternion as Q;
use crate::tol::EPS_ZERO;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HVector {
    pub upper: Q,
    pub lower: Q,
}

impl HVector {
    pub const fn new(upper: Q, lower: Q) -> Self {
        HVector { upper, lower }
    }

    pub fn max_abs(self) -> f64 {
        self.upper.max_abs().max(self.lower.max_abs())
    }

    pub fn norm_sqr(self) -> f64 {
        self.upper.norm_sqr() + self.lower.norm_sqr()
    }

    /// Rescales by a positive real so the largest component is 1.
    pub fn normalized(self) -> Self {
        let s = self.max_abs();
        if s > 0.0 && s.is_finite() {
            HVector::new(self.upper / s, self.lower / s)
        } else {
            self
        }
    }

    /// Right scalar multiplication `v λ`.
    pub fn scale(self, l: Q) -> Self {
        HVector::new(self.upper * l, self.lower * l)
    }

    pub fn outer(self, nu: HCovector) -> QuatMatrix2 {
        QuatMatrix2::new(
            self.upper * nu.left,
            self.upper * nu.right,
            self.lower * nu.left,
            self.lower * nu.right,
        )
    }

    pub fn is_finite(self) -> bool {
        self.upper.is_finite() && self.lower.is_finite()
    }
}

impl Add for HVector {
    type Output = HVector;
    fn add(self, o: HVector) -> HVector {
        HVector::new(self.upper + o.upper, self.lower + o.lower)
    }
}

impl Sub for HVector {
    type Output = HVector;
    fn sub(self, o: HVector) -> HVector {
        HVector::new(self.upper - o.upper, self.lower - o.lower)
    }
}

impl Neg for HVector {
    type Output = HVector;
    fn neg(self) -> HVector {
        HVector::new(-self.upper, -self.lower)
    }
}

impl Mul<Q> for HVector {
    type Output = HVector;
    fn mul(self, l: Q) -> HVector {
        self.scale(l)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HCovector {
    pub left: Q,
    pub right: Q,
}

impl HCovector {
    pub const fn new(left: Q, right: Q) -> Self {
        HCovector { left, right }
    }

    pub fn apply(self, v: HVector) -> Q {
        self.left * v.upper + self.right * v.lower
    }

    /// Left scalar multiplication `λ ν`.
    pub fn scale(self, l: Q) -> Self {
        HCovector::new(l * self.left, l * self.right)
    }

    /// `ν M`.
    pub fn times(self, m: &QuatMatrix2) -> Self {
        HCovector::new(
            self.left * m.a11 + self.right * m.a21,
            self.left * m.a12 + self.right * m.a22,
        )
    }

    pub fn max_abs(self) -> f64 {
        self.left.max_abs().max(self.right.max_abs())
    }
}

impl Add for HCovector {
    type Output = HCovector;
    fn add(self, o: HCovector) -> HCovector {
        HCovector::new(self.left + o.left, self.right + o.right)
    }
}

impl Sub for HCovector {
    type Output = HCovector;
    fn sub(self, o: HCovector) -> HCovector {
        HCovector::new(self.left - o.left, self.right - o.right)
    }
}

/// A 2x2 quaternionic matrix acting on `HVector` from the left.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QuatMatrix2 {
    pub a11: Q,
    pub a12: Q,
    pub a21: Q,
    pub a22: Q,
}

impl QuatMatrix2 {
    pub const IDENTITY: QuatMatrix2 = QuatMatrix2::new(Q::ONE, Q::ZERO, Q::ZERO, Q::ONE);
    pub const ZERO: QuatMatrix2 = QuatMatrix2::new(Q::ZERO, Q::ZERO, Q::ZERO, Q::ZERO);

    pub const fn new(a11: Q, a12: Q, a21: Q, a22: Q) -> Self {
        QuatMatrix2 { a11, a12, a21, a22 }
    }

    /// Matrix with the given columns.
    pub fn from_columns(c1: HVector, c2: HVector) -> Self {
        QuatMatrix2::new(c1.upper, c2.upper, c1.lower, c2.lower)
    }

    pub fn from_rows(r1: HCovector, r2: HCovector) -> Self {
        QuatMatrix2::new(r1.left, r1.right, r2.left, r2.right)
    }

    pub fn column(&self, j: usize) -> HVector {
        match j {
            0 => HVector::new(self.a11, self.a21),
            _ => HVector::new(self.a12, self.a22),
        }
    }

    pub fn row(&self, i: usize) -> HCovector {
        match i {
            0 => HCovector::new(self.a11, self.a12),
            _ => HCovector::new(self.a21, self.a22),
        }
    }

    pub fn entries(&self) -> [Q; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn from_entries(e: [Q; 4]) -> Self {
        QuatMatrix2::new(e[0], e[1], e[2], e[3])
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().iter().fold(0.0, |m, q| m.max(q.max_abs()))
    }

    /// Rescales by a positive real so the largest entry component is 1.
    pub fn normalized(&self) -> Self {
        let s = self.max_abs();
        if s > 0.0 && s.is_finite() {
            self.scale_real(1.0 / s)
        } else {
            *self
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        QuatMatrix2::from_entries(self.entries().map(|q| q * s))
    }

    /// `M λ` with λ acting on the right of every entry.
    pub fn right_scale(&self, l: Q) -> Self {
        QuatMatrix2::from_entries(self.entries().map(|q| q * l))
    }

    pub fn apply(&self, v: HVector) -> HVector {
        HVector::new(
            self.a11 * v.upper + self.a12 * v.lower,
            self.a21 * v.upper + self.a22 * v.lower,
        )
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        QuatMatrix2::new(
            self.a11.conj(),
            self.a21.conj(),
            self.a12.conj(),
            self.a22.conj(),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|q| q.is_finite())
    }

    /// Largest entry distance, a plain matrix metric.
    pub fn dist(&self, o: &QuatMatrix2) -> f64 {
        (*self - *o)
            .entries()
            .iter()
            .fold(0.0, |m, q| m.max(q.norm()))
    }

    /// Distance between the real lines spanned by two matrices, after scaling
    /// both to unit max entry and choosing the better sign.
    pub fn projective_dist(&self, o: &QuatMatrix2) -> f64 {
        let a = self.normalized();
        let b = o.normalized();
        a.dist(&b).min(a.dist(&b.scale_real(-1.0)))
    }

    /// Inverse by a pivoted Schur complement.
    pub fn inverse(&self) -> Result<QuatMatrix2> {
        let scale = self.max_abs();
        if !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::SingularMatrix);
        }
        let m = self.scale_real(1.0 / scale);
        let e = m.entries();
        let (mut piv, mut best) = (0, -1.0);
        for (k, q) in e.iter().enumerate() {
            let n = q.norm();
            if n > best {
                best = n;
                piv = k;
            }
        }
        let swap_rows = piv >= 2;
        let swap_cols = piv % 2 == 1;
        let mut p = m;
        if swap_rows {
            p = QuatMatrix2::new(p.a21, p.a22, p.a11, p.a12);
        }
        if swap_cols {
            p = QuatMatrix2::new(p.a12, p.a11, p.a22, p.a21);
        }
        let a_inv = p.a11.inv().map_err(|_| Error::SingularMatrix)?;
        let schur = p.a22 - p.a21 * a_inv * p.a12;
        if schur.norm() <= EPS_ZERO {
            return Err(Error::SingularMatrix);
        }
        let s_inv = schur.inv().map_err(|_| Error::SingularMatrix)?;
        let ab = a_inv * p.a12;
        let ca = p.a21 * a_inv;
        let mut inv =
            QuatMatrix2::new(a_inv + ab * s_inv * ca, -(ab * s_inv), -(s_inv * ca), s_inv);
        // p = R m C with R, C swaps, so m^{-1} = C p^{-1} R
        if swap_cols {
            inv = QuatMatrix2::new(inv.a21, inv.a22, inv.a11, inv.a12);
        }
        if swap_rows {
            inv = QuatMatrix2::new(inv.a12, inv.a11, inv.a22, inv.a21);
        }
        Ok(inv.scale_real(1.0 / scale))
    }
}

impl Add for QuatMatrix2 {
    type Output = QuatMatrix2;
    fn add(self, o: QuatMatrix2) -> QuatMatrix2 {
        QuatMatrix2::new(
            self.a11 + o.a11,
            self.a12 + o.a12,
            self.a21 + o.a21,
            self.a22 + o.a22,
        )
    }
}

impl Sub for QuatMatrix2 {
    type Output = QuatMatrix2;
    fn sub(self, o: QuatMatrix2) -> QuatMatrix2 {
        QuatMatrix2::new(
            self.a11 - o.a11,
            self.a12 - o.a12,
            self.a21 - o.a21,
            self.a22 - o.a22,
        )
    }
}

impl Mul for QuatMatrix2 {
    type Output = QuatMatrix2;
    fn mul(self, o: QuatMatrix2) -> QuatMatrix2 {
        QuatMatrix2::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }
}

impl Mul<HVector> for QuatMatrix2 {
    type Output = HVector;
    fn mul(self, v: HVector) -> HVector {
        self.apply(v)
    }
}

impl Mul<f64> for QuatMatrix2 {
    type Output = QuatMatrix2;
    fn mul(self, s: f64) -> QuatMatrix2 {
        self.scale_real(s)
    }
}

/// A point of HP^1, stored by a representative with max component 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint {
    rep: HVector,
}

impl HPoint {
    pub fn new(rep: HVector) -> Result<HPoint> {
        let s = rep.max_abs();
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::DegeneratePoint);
        }
        Ok(HPoint {
            rep: rep.normalized(),
        })
    }

    /// The point over `p` in the standard chart.
    pub fn affine(p: Q) -> HPoint {
        HPoint {
            rep: HVector::new(p, Q::ONE).normalized(),
        }
    }

    pub fn infinity() -> HPoint {
        HPoint {
            rep: HVector::new(Q::ONE, Q::ZERO),
        }
    }

    pub fn rep(&self) -> HVector {
        self.rep
    }

    /// Image in the round S^4 of R^5: `(2 a b̄, |b|² - |a|²) / (|a|² + |b|²)`.
    pub fn sphere_coords(&self) -> [f64; 5] {
        let (a, b) = (self.rep.upper, self.rep.lower);
        let n = a.norm_sqr() + b.norm_sqr();
        let c = a * b.conj() * 2.0;
        [
            c.w / n,
            c.x / n,
            c.y / n,
            c.z / n,
            (b.norm_sqr() - a.norm_sqr()) / n,
        ]
    }

    /// Chordal distance on S^4; independent of representatives.
    pub fn dist(&self, o: &HPoint) -> f64 {
        let a = self.sphere_coords();
        let b = o.sphere_coords();
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }

    /// Standard-chart affine coordinate.
    pub fn to_affine(&self) -> Result<Q> {
        stereo_project(&AffineChart::standard(), self)
    }
}

/// A covector with `ν(p) = 0`.
pub fn annihilator(p: &HPoint) -> Result<HCovector> {
    annihilator_of(p.rep)
}

pub fn annihilator_of(v: HVector) -> Result<HCovector> {
    let v = v.normalized();
    if !(v.max_abs() > 0.0) {
        return Err(Error::DegeneratePoint);
    }
    let (a, b) = (v.upper, v.lower);
    if b.norm() >= a.norm() {
        Ok(HCovector::new(Q::ONE, -(a * b.inv()?)))
    } else {
        Ok(HCovector::new(-(b * a.inv()?), Q::ONE))
    }
}

/// Pseudo-dual bases `(v0, vinf)`, `(nu0, nuinf)` with `v0 nuinf + vinf nu0 = id`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineChart {
    pub v0: HVector,
    pub vinf: HVector,
    pub nu0: HCovector,
    pub nuinf: HCovector,
}

impl AffineChart {
    pub fn standard() -> AffineChart {
        AffineChart {
            v0: HVector::new(Q::ZERO, Q::ONE),
            vinf: HVector::new(Q::ONE, Q::ZERO),
            nu0: HCovector::new(Q::ONE, Q::ZERO),
            nuinf: HCovector::new(Q::ZERO, Q::ONE),
        }
    }

    /// Chart with the given homogeneous coordinates of `0` and `∞`.
    pub fn from_points(v0: HVector, vinf: HVector) -> Result<AffineChart> {
        let inv = QuatMatrix2::from_columns(vinf, v0).inverse()?;
        Ok(AffineChart {
            v0,
            vinf,
            nu0: inv.row(0),
            nuinf: inv.row(1),
        })
    }

    /// The image of the standard chart under `M`.
    pub fn from_matrix(m: &QuatMatrix2) -> Result<AffineChart> {
        AffineChart::from_points(m.column(1), m.column(0))
    }

    /// The matrix `[vinf | v0]` mapping the standard chart to this one.
    pub fn matrix(&self) -> QuatMatrix2 {
        QuatMatrix2::from_columns(self.vinf, self.v0)
    }

    pub fn pseudo_duality_residual(&self) -> f64 {
        (self.v0.outer(self.nuinf) + self.vinf.outer(self.nu0)).dist(&QuatMatrix2::IDENTITY)
    }

    /// `v0 + vinf p`.
    pub fn lift(&self, p: Q) -> HVector {
        self.v0 + self.vinf * p
    }

    pub fn point(&self, p: Q) -> HPoint {
        HPoint::new(self.lift(p)).expect("lift of a finite point is nonzero")
    }

    /// `nu0 - p nuinf`.
    pub fn colift(&self, p: Q) -> HCovector {
        self.nu0 - self.nuinf.scale(p)
    }
}

/// `p = (nu0 v)(nuinf v)^{-1}`.
pub fn stereo_project(chart: &AffineChart, p: &HPoint) -> Result<Q> {
    let v = p.rep();
    let scale = v.max_abs() * chart.nuinf.max_abs().max(chart.nu0.max_abs());
    let d = chart.nuinf.apply(v);
    let inv = d.inv_scaled(scale).map_err(|_| Error::PointAtInfinity)?;
    Ok(chart.nu0.apply(v) * inv)
}

/// `M p`.
pub fn mobius_apply(m: &QuatMatrix2, p: &HPoint) -> Result<HPoint> {
    m.inverse()?;
    HPoint::new(m.apply(p.rep()))
}

/// Cross ratio in normal form `Re q + i |Im q|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizedCrossRatio {
    pub re: f64,
    pub im: f64,
}

impl NormalizedCrossRatio {
    pub fn from_quaternion(q: Q) -> Self {
        NormalizedCrossRatio {
            re: q.w,
            im: q.im().norm(),
        }
    }

    pub fn as_complex(self) -> crate::ComplexScalar {
        crate::ComplexScalar::new(self.re, self.im)
    }

    pub fn dist(self, o: Self) -> f64 {
        (self.as_complex() - o.as_complex()).norm()
    }
}

/// `q = (ν1 v2)(ν3 v2)^{-1}(ν3 v4)(ν1 v4)^{-1}` with annihilators `ν1`, `ν3`.
pub fn cross_ratio_quaternion(p1: &HPoint, p2: &HPoint, p3: &HPoint, p4: &HPoint) -> Result<Q> {
    for (a, b) in [(p1, p2), (p2, p3), (p3, p4), (p4, p1)] {
        if a.dist(b) <= EPS_ZERO {
            return Err(Error::CoincidentPoints);
        }
    }
    let n1 = annihilator(p1)?;
    let n3 = annihilator(p3)?;
    let (v2, v4) = (p2.rep(), p4.rep());
    let inv = |q: Q| q.inv_scaled(1.0).map_err(|_| Error::CoincidentPoints);
    Ok(n1.apply(v2) * inv(n3.apply(v2))? * n3.apply(v4) * inv(n1.apply(v4))?)
}

pub fn cross_ratio(
    p1: &HPoint,
    p2: &HPoint,
    p3: &HPoint,
    p4: &HPoint,
) -> Result<NormalizedCrossRatio> {
    cross_ratio_quaternion(p1, p2, p3, p4).map(NormalizedCrossRatio::from_quaternion)
}

/// Affine cross ratio `(p1-p2)(p2-p3)^{-1}(p3-p4)(p4-p1)^{-1}`.
pub fn cross_ratio_affine(p1: Q, p2: Q, p3: Q, p4: Q) -> Result<Q> {
    let scale = p1
        .norm()
        .max(p2.norm())
        .max(p3.norm())
        .max(p4.norm())
        .max(1.0);
    let inv = |q: Q| q.inv_scaled(scale).map_err(|_| Error::CoincidentPoints);
    inv(p1 - p2)?;
    inv(p3 - p4)?;
    Ok((p1 - p2) * inv(p2 - p3)? * (p3 - p4) * inv(p4 - p1)?)
}

/// Quaternionic hermitian form `s(v,w) = v̄ᵀ S w` with `S = [[s11, s12], [s̄12, s22]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianForm {
    pub s11: f64,
    pub s12: Q,
    pub s22: f64,
}

impl HermitianForm {
    pub fn new(s11: f64, s12: Q, s22: f64) -> Self {
        HermitianForm { s11, s12, s22 }
    }

    /// The form whose null cone is `Im H ∪ {∞}`.
    pub fn imaginary_sphere() -> Self {
        HermitianForm::new(0.0, Q::ONE, 0.0)
    }

    /// Null cone `|p - c|² = r²`.
    pub fn round_sphere(center: Q, radius: f64) -> Self {
        // |a - c b|² - r²|b|² on (a, b)
        HermitianForm::new(1.0, -center, center.norm_sqr() - radius * radius)
    }

    pub fn det(&self) -> f64 {
        self.s11 * self.s22 - self.s12.norm_sqr()
    }

    pub fn matrix(&self) -> QuatMatrix2 {
        QuatMatrix2::new(
            Q::real(self.s11),
            self.s12,
            self.s12.conj(),
            Q::real(self.s22),
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.s11.abs().max(self.s22.abs()).max(self.s12.max_abs())
    }

    pub fn eval(&self, v: HVector, w: HVector) -> Q {
        hermitian_eval(self, v, w)
    }

    /// `σ_v = s(v, ·)` as a covector.
    pub fn covector(&self, v: HVector) -> HCovector {
        let m = self.matrix();
        HCovector::new(
            v.upper.conj() * m.a11 + v.lower.conj() * m.a21,
            v.upper.conj() * m.a12 + v.lower.conj() * m.a22,
        )
    }

    /// `|s(v,v)|` for a unit representative.
    pub fn point_residual(&self, p: &HPoint) -> f64 {
        let v = p.rep();
        let n = v.norm_sqr();
        self.eval(v, v).w.abs() / (n * self.max_abs())
    }
}

pub fn hermitian_eval(s: &HermitianForm, v: HVector, w: HVector) -> Q {
    s.covector(v).apply(w)
}

/// `s(M^{-1}·, M^{-1}·)`.
pub fn sphere_transform(m: &QuatMatrix2, s: &HermitianForm) -> Result<HermitianForm> {
    let inv = m.inverse()?;
    let r = inv.adjoint() * s.matrix() * inv;
    Ok(HermitianForm::new(
        r.a11.w,
        (r.a12 + r.a21.conj()) * 0.5,
        r.a22.w,
    ))
}

/// Right-hand side of Kramer's rule in the standard basis `e1, e2`.
pub fn kramer_rhs(s: &HermitianForm, v: HVector) -> HVector {
    let e1 = HVector::new(Q::ONE, Q::ZERO);
    let e2 = HVector::new(Q::ZERO, Q::ONE);
    let c1 = s.eval(e1, e2) * s.eval(e2, v) - s.eval(e1, v) * s.eval(e2, e2);
    let c2 = s.eval(e2, e1) * s.eval(e1, v) - s.eval(e2, v) * s.eval(e1, e1);
    e1 * c1 + e2 * c2
}
