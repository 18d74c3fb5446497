//! Double-precision quaternions, the imaginary quaternions as a model of R^3,
//! and the complex line span{1, i}.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::tol::EPS_ZERO;

pub type ComplexScalar = num_complex::Complex64;

/// `w + x i + y j + z k` with `ij = k`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub const fn real(w: f64) -> Self {
        Quaternion::new(w, 0.0, 0.0, 0.0)
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Quaternion::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// Embeds `re + im i`.
    pub fn from_complex(c: ComplexScalar) -> Self {
        Quaternion::new(c.re, c.im, 0.0, 0.0)
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        // hypot-style scaling keeps tiny and huge values representable
        let s = self.max_abs();
        if s == 0.0 || !s.is_finite() {
            return s;
        }
        let q = self / s;
        s * q.norm_sqr().sqrt()
    }

    pub fn max_abs(self) -> f64 {
        self.w
            .abs()
            .max(self.x.abs())
            .max(self.y.abs())
            .max(self.z.abs())
    }

    pub fn re(self) -> f64 {
        self.w
    }

    pub fn im(self) -> ImaginaryQuaternion {
        ImaginaryQuaternion::new(self.x, self.y, self.z)
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Inverse, failing when `|q| <= EPS_ZERO * scale`.
    pub fn inv_scaled(self, scale: f64) -> Result<Self> {
        let n = self.norm();
        if !(n > EPS_ZERO * scale.max(f64::MIN_POSITIVE)) || !n.is_finite() {
            return Err(Error::ZeroDivision { norm: n });
        }
        let s = self / n;
        Ok(s.conj() / n)
    }

    pub fn inv(self) -> Result<Self> {
        self.inv_scaled(1.0)
    }

    pub fn dist(self, other: Self) -> f64 {
        (self - other).norm()
    }

    /// Real part and `i` part as a complex number.
    pub fn complex_part(self) -> ComplexScalar {
        ComplexScalar::new(self.w, self.x)
    }

    /// Components `(y, z)` read as `c` in `c j = y j + z k`.
    pub fn cj_part(self) -> ComplexScalar {
        ComplexScalar::new(self.y, self.z)
    }
}

pub fn quat_mul(p: Quaternion, q: Quaternion) -> Quaternion {
    p * q
}

pub fn quat_inv(q: Quaternion) -> Result<Quaternion> {
    q.inv()
}

/// `c ↦ c j`, i.e. `re j + im k`.
pub fn complex_to_cj(c: ComplexScalar) -> Quaternion {
    Quaternion::new(0.0, 0.0, c.re, c.im)
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;
    fn div(self, s: f64) -> Quaternion {
        Quaternion::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Quaternion) {
        *self = *self - o;
    }
}

impl MulAssign for Quaternion {
    fn mul_assign(&mut self, o: Quaternion) {
        *self = *self * o;
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Quaternion::real(w)
    }
}

impl From<ComplexScalar> for Quaternion {
    fn from(c: ComplexScalar) -> Self {
        Quaternion::from_complex(c)
    }
}

impl From<ImaginaryQuaternion> for Quaternion {
    fn from(v: ImaginaryQuaternion) -> Self {
        Quaternion::new(0.0, v.x, v.y, v.z)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.w, self.x, self.y, self.z)
    }
}

/// A point of R^3 read as `x i + y j + z k`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ImaginaryQuaternion {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ImaginaryQuaternion {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        ImaginaryQuaternion { x, y, z }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        ImaginaryQuaternion::new(a[0], a[1], a[2])
    }

    pub fn norm(self) -> f64 {
        Quaternion::from(self).norm()
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }
}

impl Add for ImaginaryQuaternion {
    type Output = ImaginaryQuaternion;
    fn add(self, o: Self) -> Self {
        ImaginaryQuaternion::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for ImaginaryQuaternion {
    type Output = ImaginaryQuaternion;
    fn sub(self, o: Self) -> Self {
        ImaginaryQuaternion::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for ImaginaryQuaternion {
    type Output = ImaginaryQuaternion;
    fn mul(self, s: f64) -> Self {
        ImaginaryQuaternion::new(self.x * s, self.y * s, self.z * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Quaternion as Q;

    fn close(a: Q, b: Q, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn units() {
        assert_eq!(Q::I * Q::J, Q::K);
        assert_eq!(Q::J * Q::K, Q::I);
        assert_eq!(Q::K * Q::I, Q::J);
        assert_eq!(Q::J * Q::I, -Q::K);
        for u in [Q::I, Q::J, Q::K] {
            assert_eq!(u * u, -Q::ONE);
        }
    }

    #[test]
    fn bilinear_expansion() {
        let p = Q::ONE + Q::I;
        let q = Q::ONE + Q::J;
        assert_eq!(p * q, Q::new(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn inverses() {
        assert!(close(Q::I.inv().unwrap(), -Q::I, 0.0));
        assert!(close(Q::real(2.0).inv().unwrap(), Q::real(0.5), 0.0));
        let jk = Q::J + Q::K;
        assert!(close(jk.inv().unwrap(), -jk / 2.0, 1e-16));
        assert!(matches!(Q::ZERO.inv(), Err(Error::ZeroDivision { .. })));
        assert!(Q::real(1e-14).inv().is_err());
    }

    #[test]
    fn cj_embedding() {
        let c = ComplexScalar::new;
        assert_eq!(complex_to_cj(c(1.0, 0.0)), Q::J);
        assert_eq!(complex_to_cj(c(0.0, 1.0)), Q::K);
        assert_eq!(complex_to_cj(c(3.0, -2.0)), Q::new(0.0, 0.0, 3.0, -2.0));
        // (a + b i) j = a j + b k
        let z = c(0.7, -1.3);
        assert_eq!(Q::from(z) * Q::J, complex_to_cj(z));
    }

    #[test]
    fn tiny_and_huge_norms() {
        let q = Q::new(3e-200, 4e-200, 0.0, 0.0);
        assert!((q.norm() / 5e-200 - 1.0).abs() < 1e-15);
        let q = Q::new(3e200, 4e200, 0.0, 0.0);
        assert!((q.norm() / 5e200 - 1.0).abs() < 1e-15);
    }
}
