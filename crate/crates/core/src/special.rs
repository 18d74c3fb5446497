//! Discrete minimal nets, the complex H-system, horospherical (cmc-1)
//! nets in hyperbolic space and the coordinate models used to draw them.
//!
//! Hyperbolic space is the component of `Im H ∪ {∞}` minus the boundary
//! sphere `Cj ∪ {∞}` that contains `i`. Complex 2×2 frames `τ` act on
//! quaternionic homogeneous coordinates through `J⁻¹ τ J`, `J = diag(1, j)`.

use nalgebra::Matrix2;
use num_complex::Complex64 as C;

use crate::error::{Error, Result};
use crate::fit::fit_similarity;
use crate::grid::{integrate_center_out, Grid, GridWindow};
use crate::net::{classify, AffineNet, CrossRatioFactorization, ProjectiveNet};
use crate::par::{self, Execution};
use crate::projective::{HPoint, HVector, QuatMatrix2};
use crate::quaternion::{ImaginaryQuaternion, Quaternion as Q};
use crate::tol;
use crate::transforms::christoffel::{
    christoffel, christoffel_within, dual_residuals, edge_labels, rel, DualResiduals,
};
use crate::transforms::darboux::{darboux_riccati, edge_cross_ratio_residual};
use crate::transforms::ttransform::{frame_of, t_transform};

pub type CMat2 = Matrix2<C>;

/// A net in the complex plane.
#[derive(Debug, Clone, PartialEq)]
pub struct HolomorphicNet {
    pub values: Grid<C>,
}

impl HolomorphicNet {
    pub fn new(values: Grid<C>) -> Self {
        HolomorphicNet { values }
    }

    pub fn from_fn(window: GridWindow, f: impl FnMut(i32, i32) -> C) -> Self {
        HolomorphicNet {
            values: Grid::from_fn(window, f),
        }
    }

    pub fn window(&self) -> GridWindow {
        self.values.window()
    }

    pub fn get(&self, m: i32, n: i32) -> C {
        *self.values.get(m, n)
    }

    /// The net in `C = span(1, i) ⊂ H`.
    pub fn to_affine(&self) -> AffineNet {
        AffineNet::from_fn(self.window(), |m, n| Q::from(self.get(m, n)))
    }

    /// `g j`, a net in the boundary plane `Cj`.
    pub fn times_j(&self) -> AffineNet {
        AffineNet::from_fn(self.window(), |m, n| Q::from(self.get(m, n)) * Q::J)
    }

    fn diff(&self, dir: u8, m: i32, n: i32) -> C {
        if dir == 1 {
            self.get(m + 1, n) - self.get(m, n)
        } else {
            self.get(m, n + 1) - self.get(m, n)
        }
    }
}

/// The exponential nets `g = e^{2π(m+in)/N}` and `h = 1/g`.
pub fn catenoid_pair(n: u32, window: GridWindow) -> Result<(HolomorphicNet, HolomorphicNet)> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!("N = {n}, need N >= 4")));
    }
    let s = 2.0 * std::f64::consts::PI / n as f64;
    let g = HolomorphicNet::from_fn(window, |m, k| (C::new(m as f64, k as f64) * s).exp());
    let h = HolomorphicNet::from_fn(window, |m, k| (-C::new(m as f64, k as f64) * s).exp());
    Ok((g, h))
}

/// Largest `|q - (∂1h ∂1g)/(∂2h ∂2g)|` over all quads of `g`.
pub fn christoffel_identity_residual(
    g: &HolomorphicNet,
    h: &HolomorphicNet,
    exec: Execution,
) -> f64 {
    let quads = g.window().quads();
    par::max_range(exec, quads.len(), |k| {
        let (m, n) = quads[k];
        let (p1, p2, p3, p4) = (
            g.get(m, n),
            g.get(m + 1, n),
            g.get(m + 1, n + 1),
            g.get(m, n + 1),
        );
        let q = (p1 - p2) / (p2 - p3) * (p3 - p4) / (p4 - p1);
        let r = (h.diff(1, m, n) * g.diff(1, m, n)) / (h.diff(2, m, n) * g.diff(2, m, n));
        (q - r).norm()
    })
}

/// Edge labels `∂h ∂g` of a Christoffel pair in C; they must be real and
/// depend only on `m` (direction 1) resp. `n` (direction 2).
pub fn christoffel_labels(
    g: &HolomorphicNet,
    h: &HolomorphicNet,
) -> Result<CrossRatioFactorization> {
    let w = g.window();
    if h.window() != w {
        return Err(Error::WindowMismatch(format!(
            "{:?} vs {:?}",
            w,
            h.window()
        )));
    }
    let prod = |dir, m, n| h.diff(dir, m, n) * g.diff(dir, m, n);
    let mut fact = CrossRatioFactorization::from_fns(w, |m| prod(1, m, 0).re, |n| prod(2, 0, n).re);
    let mut residual: f64 = 0.0;
    for (m, n, dir) in w.edges() {
        let label = fact.label(dir, m, n);
        if label.abs() <= tol::EPS_ZERO {
            return Err(Error::NotRegular {
                m,
                n,
                reason: "vanishing edge",
            });
        }
        let r = (prod(dir, m, n) - label).norm() / label.abs();
        residual = if r.is_nan() {
            f64::INFINITY
        } else {
            residual.max(r)
        };
    }
    fact.residual = residual;
    if !(residual <= tol::FACTOR) {
        return Err(Error::NotChristoffelPair { residual });
    }
    Ok(fact)
}

/// Stereographic image `i (i + g j)(i - g j)^{-1}` of a complex number on S².
pub fn gauss_point(g: C) -> Result<Q> {
    let gj = Q::from(g) * Q::J;
    Ok(Q::I * (Q::I + gj) * (Q::I - gj).inv()?)
}

/// A minimal net in `Im H` with its Gauss map.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimalNet {
    pub surface: Grid<ImaginaryQuaternion>,
    pub gauss: AffineNet,
    /// Labels of the pair `(gauss, surface)`.
    pub labels: CrossRatioFactorization,
    pub closure: f64,
    /// Largest real part dropped from the integrated surface.
    pub max_real_part: f64,
}

impl MinimalNet {
    pub fn surface_net(&self) -> AffineNet {
        AffineNet::from_fn(self.surface.window(), |m, n| {
            Q::from(*self.surface.get(m, n))
        })
    }

    /// The dual relations of the C-pair `(gauss, surface)`.
    pub fn pair_residuals(&self, exec: Execution) -> DualResiduals {
        dual_residuals(&self.gauss, &self.surface_net(), &self.labels, exec)
    }

    /// Largest `| |n| - 1 |`.
    pub fn gauss_norm_residual(&self) -> f64 {
        self.gauss
            .values
            .values()
            .iter()
            .fold(0.0f64, |r, p| r.max((p.norm() - 1.0).abs()))
    }
}

fn weierstrass_edge(g: &HolomorphicNet, h: &HolomorphicNet, dir: u8, m: i32, n: i32) -> Q {
    let next = if dir == 1 {
        g.get(m + 1, n)
    } else {
        g.get(m, n + 1)
    };
    let left = Q::I - Q::from(g.get(m, n)) * Q::J;
    let right = Q::I - Q::from(next) * Q::J;
    left * Q::J * Q::from(h.diff(dir, m, n)) * right * 0.5
}

/// Discrete Weierstrass representation:
/// `∂f = ½ (i - g j) j (∂h) (i - g j)₊`, integrated from `f_{0,0} = 0`.
pub fn weierstrass_minimal(g: &HolomorphicNet, h: &HolomorphicNet) -> Result<MinimalNet> {
    christoffel_labels(g, h)?;
    let w = g.window();
    let values = integrate_center_out(w, Q::ZERO, |&prev, from, to| {
        Ok::<Q, Error>(if to.0 > from.0 || to.1 > from.1 {
            prev + weierstrass_edge(g, h, if to.0 > from.0 { 1 } else { 2 }, from.0, from.1)
        } else {
            prev - weierstrass_edge(g, h, if to.0 < from.0 { 1 } else { 2 }, to.0, to.1)
        })
    })?;
    let mut closure: f64 = 0.0;
    for (m, n, dir) in w.edges() {
        let to = if dir == 1 { (m + 1, n) } else { (m, n + 1) };
        closure = closure.max(rel(
            *values.get(to.0, to.1) - *values.get(m, n),
            weierstrass_edge(g, h, dir, m, n),
        ));
    }
    if !(closure <= tol::CLOSURE) {
        return Err(Error::ClosureFailure {
            what: "Weierstrass form",
            residual: closure,
            tolerance: tol::CLOSURE,
        });
    }
    let gauss = AffineNet::new(Grid::try_from_fn(w, |m, n| gauss_point(g.get(m, n)))?);
    let surface_q = AffineNet::new(values);
    let labels = edge_labels(&gauss, &surface_q);
    let max_real_part = surface_q
        .values
        .values()
        .iter()
        .fold(0.0f64, |r, p| r.max(p.w.abs()));
    Ok(MinimalNet {
        surface: surface_q.values.map(|p| p.im()),
        gauss,
        labels,
        closure,
        max_real_part,
    })
}

/// The C-transform of the S²-projection of `g`, from `f_{0,0} = 0`.
pub fn minimal_cousin(g: &HolomorphicNet, exec: Execution) -> Result<MinimalNet> {
    let gauss = AffineNet::new(Grid::try_from_fn(g.window(), |m, n| {
        gauss_point(g.get(m, n))
    })?);
    let c = classify(&gauss, exec);
    let fact = match c.factorization {
        Some(f) if c.isothermic => f,
        _ => return Err(Error::NotIsothermic(c.reasons.join("; "))),
    };
    let pair = christoffel(&gauss, &fact, Q::ZERO)?;
    let max_real_part = pair
        .f_star
        .values
        .values()
        .iter()
        .fold(0.0f64, |r, p| r.max(p.w.abs()));
    Ok(MinimalNet {
        surface: pair.f_star.values.map(|p| p.im()),
        gauss,
        labels: fact,
        closure: pair.closure,
        max_real_part,
    })
}

/// Complex frames `τ^λ` solving the H-system, up to positive real scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexFrame {
    pub lambda: f64,
    pub values: Grid<CMat2>,
    pub residual: f64,
}

pub fn to_quat_matrix(t: &CMat2) -> QuatMatrix2 {
    QuatMatrix2::new(
        Q::from(t[(0, 0)]),
        Q::from(t[(0, 1)]),
        Q::from(t[(1, 0)]),
        Q::from(t[(1, 1)]),
    )
}

fn j_matrix() -> QuatMatrix2 {
    QuatMatrix2::new(Q::ONE, Q::ZERO, Q::ZERO, Q::J)
}

fn j_inverse() -> QuatMatrix2 {
    QuatMatrix2::new(Q::ONE, Q::ZERO, Q::ZERO, -Q::J)
}

impl ComplexFrame {
    pub fn get(&self, m: i32, n: i32) -> CMat2 {
        *self.values.get(m, n)
    }

    /// `J⁻¹ τ J`, the quaternionic frame of the boundary net `g j`.
    pub fn quaternionic(&self, m: i32, n: i32) -> QuatMatrix2 {
        j_inverse() * to_quat_matrix(&self.get(m, n)) * j_matrix()
    }
}

/// Step matrix `id + λ (g; 1) ∂h (1, -g₊)` of the edge starting at `(m, n)`.
pub fn h_step(
    g: &HolomorphicNet,
    h: &HolomorphicNet,
    dir: u8,
    m: i32,
    n: i32,
    lambda: f64,
) -> CMat2 {
    let g0 = g.get(m, n);
    let g1 = if dir == 1 {
        g.get(m + 1, n)
    } else {
        g.get(m, n + 1)
    };
    let dh = h.diff(dir, m, n) * lambda;
    CMat2::identity() + CMat2::new(g0 * dh, -g0 * dh * g1, dh, -dh * g1)
}

fn cmat_max(t: &CMat2) -> f64 {
    t.iter().fold(0.0f64, |r, z| r.max(z.norm()))
}

/// Distance between frames after scaling each to unit Frobenius norm.
pub fn cmat_dist(a: &CMat2, b: &CMat2) -> f64 {
    (a.unscale(a.norm()) - b.unscale(b.norm())).norm()
}

/// Integrates the H-system center-out from `τ_{0,0} = id`.
pub fn integrate_h(
    g: &HolomorphicNet,
    h: &HolomorphicNet,
    lambda: f64,
    exec: Execution,
) -> Result<ComplexFrame> {
    christoffel_labels(g, h)?.check_lambda(lambda)?;
    let w = g.window();
    let values = integrate_center_out(w, CMat2::identity(), |prev, from, to| {
        let next = if to.0 > from.0 || to.1 > from.1 {
            prev * h_step(
                g,
                h,
                if to.0 > from.0 { 1 } else { 2 },
                from.0,
                from.1,
                lambda,
            )
        } else {
            let s = h_step(g, h, if to.0 < from.0 { 1 } else { 2 }, to.0, to.1, lambda);
            prev * s.try_inverse().ok_or(Error::SingularMatrix)?
        };
        let scale = cmat_max(&next);
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::SingularMatrix);
        }
        Ok(next.unscale(scale))
    })?;
    let edges = w.edges();
    let residual = par::max_range(exec, edges.len(), |k| {
        let (m, n, d) = edges[k];
        let to = if d == 1 { (m + 1, n) } else { (m, n + 1) };
        cmat_dist(
            values.get(to.0, to.1),
            &(values.get(m, n) * h_step(g, h, d, m, n, lambda)),
        )
    });
    if !(residual <= tol::CLOSURE) {
        return Err(Error::ClosureFailure {
            what: "H-system",
            residual,
            tolerance: tol::CLOSURE,
        });
    }
    Ok(ComplexFrame {
        lambda,
        values,
        residual,
    })
}

/// Chordal distance on S⁴ from the boundary sphere `Cj ∪ {∞}`.
/// Closure tolerance for nets whose edges are small against their position:
/// `tol::CLOSURE` or the roundoff `1e-13 · max|f| / min|∂f|`, whichever is larger.
pub fn roundoff_tolerance(f: &AffineNet) -> f64 {
    let size = f
        .values
        .values()
        .iter()
        .fold(0.0f64, |m, p| m.max(p.norm()));
    let edge = f
        .window()
        .edges()
        .into_iter()
        .fold(f64::INFINITY, |m, (a, b, d)| {
            let to = if d == 1 { (a + 1, b) } else { (a, b + 1) };
            m.min((f.get(to.0, to.1) - f.get(a, b)).norm())
        });
    tol::CLOSURE.max(1e-13 * size / edge)
}

pub fn boundary_distance(p: &HPoint) -> f64 {
    let c = p.sphere_coords();
    c[0].hypot(c[1])
}

/// A horospherical net together with its hyperbolic Gauss map.
///
/// `surface` is the Darboux transform of `gauss` with parameter
/// `darboux_parameter` for the edge labels `labels` of `gauss`.
#[derive(Debug, Clone, PartialEq)]
pub struct HorosphericalNet {
    pub surface: ProjectiveNet,
    pub gauss: ProjectiveNet,
    pub labels: CrossRatioFactorization,
    pub darboux_parameter: f64,
    pub lambda: f64,
    pub frame: ComplexFrame,
}

impl HorosphericalNet {
    /// Largest deviation of the edge cross ratios `[n, n₊, f₊, f]` from `μ a`, `μ b`.
    pub fn darboux_residual(&self, exec: Execution) -> f64 {
        edge_cross_ratio_residual(
            &self.gauss,
            &self.surface,
            &self.labels,
            self.darboux_parameter,
            exec,
        )
    }

    /// Smallest distance of the surface from the boundary sphere.
    pub fn boundary_margin(&self) -> f64 {
        self.surface
            .values
            .values()
            .iter()
            .fold(f64::INFINITY, |r, p| r.min(boundary_distance(p)))
    }

    /// Largest distance of the Gauss map from the boundary sphere (zero in exact arithmetic).
    pub fn gauss_boundary_residual(&self) -> f64 {
        self.gauss
            .values
            .values()
            .iter()
            .fold(0.0f64, |r, p| r.max(boundary_distance(p)))
    }

    /// The hyperbolic Gauss map recovered as the Darboux transform of the
    /// surface through `gauss_{0,0}` with the same parameter.
    pub fn recovered_gauss(&self, exec: Execution) -> Result<ProjectiveNet> {
        let f = self.surface.project(&crate::AffineChart::standard())?;
        let pair = christoffel_within(&f, &self.labels, Q::ZERO, roundoff_tolerance(&f))?;
        let init = self.gauss.get(0, 0).to_affine()?;
        Ok(darboux_riccati(&pair, self.darboux_parameter, init, exec)?.hat)
    }

    /// `T^μ n` for the Darboux parameter `μ`: the S²-projection of the secondary Gauss map.
    pub fn secondary_gauss(&self, exec: Execution) -> Result<ProjectiveNet> {
        let (_, frame) = frame_of(&self.gauss, &self.labels, self.darboux_parameter, exec)?;
        t_transform(&self.gauss, &frame)
    }
}

fn check_boundary(net: &ProjectiveNet) -> Result<()> {
    for ((m, n), p) in net.values.iter() {
        if boundary_distance(p) <= tol::BOUNDARY {
            return Err(Error::BoundaryHit { m, n });
        }
    }
    Ok(())
}

/// `f♯ = J⁻¹ (τ^{-λ})^{-1} J (p0; 1)`: the horospherical net with hyperbolic
/// Gauss map `n = g j` and `f♯_{0,0} = p0`.
pub fn horospherical_from_gauss(
    g: &HolomorphicNet,
    h: &HolomorphicNet,
    lambda: f64,
    p0: ImaginaryQuaternion,
    exec: Execution,
) -> Result<HorosphericalNet> {
    if lambda == 0.0 {
        return Err(Error::ZeroLambda);
    }
    if !(p0.x.abs() > tol::BOUNDARY) || !p0.norm().is_finite() {
        return Err(Error::BadBasePoint);
    }
    let labels = christoffel_labels(g, h)?;
    let frame = integrate_h(g, h, -lambda, exec)?;
    let base = j_matrix().apply(HVector::new(Q::from(p0), Q::ONE));
    let values = Grid::try_from_fn(g.window(), |m, n| {
        let inv = frame.get(m, n).try_inverse().ok_or(Error::SingularMatrix)?;
        HPoint::new((j_inverse() * to_quat_matrix(&inv)).apply(base))
    })?;
    let surface = ProjectiveNet::new(values);
    check_boundary(&surface)?;
    Ok(HorosphericalNet {
        surface,
        gauss: g.times_j().to_projective(),
        labels,
        darboux_parameter: -lambda,
        lambda,
        frame,
    })
}

/// `f = J⁻¹ τ^λ (i; j) / √2` with hyperbolic Gauss map `n^λ = J⁻¹ τ^λ (g; 1) j`.
pub fn bryant_cousin(
    g: &HolomorphicNet,
    h: &HolomorphicNet,
    lambda: f64,
    exec: Execution,
) -> Result<HorosphericalNet> {
    if lambda == 0.0 {
        return Err(Error::ZeroLambda);
    }
    let labels = christoffel_labels(g, h)?;
    let frame = integrate_h(g, h, lambda, exec)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let surface = ProjectiveNet::new(Grid::try_from_fn(g.window(), |m, n| {
        let t = j_inverse() * to_quat_matrix(&frame.get(m, n));
        HPoint::new(t.apply(HVector::new(Q::I * s, Q::J * s)))
    })?);
    check_boundary(&surface)?;
    let gauss = ProjectiveNet::new(Grid::try_from_fn(g.window(), |m, n| {
        let t = j_inverse() * to_quat_matrix(&frame.get(m, n));
        HPoint::new(
            t.apply(HVector::new(Q::from(g.get(m, n)), Q::ONE))
                .scale(Q::J),
        )
    })?);
    Ok(HorosphericalNet {
        surface,
        gauss,
        labels: labels.t_transformed(lambda),
        darboux_parameter: -lambda,
        lambda,
        frame,
    })
}

/// Secondary Gauss maps of a pair of horospherical nets compared with the
/// other net's hyperbolic Gauss map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualReport {
    /// `T^μ n♯` vs the hyperbolic Gauss map of `f`.
    pub sharp_to_bryant: f64,
    /// `T^μ n^λ` vs the hyperbolic Gauss map of `f♯`.
    pub bryant_to_sharp: f64,
}

impl DualReport {
    pub fn max(&self) -> f64 {
        self.sharp_to_bryant.max(self.bryant_to_sharp)
    }
}

/// Checks that the secondary Gauss map of each net is the hyperbolic Gauss
/// map of the other. `f♯` built at `λ` pairs with `f` built at `-λ`.
pub fn dual_check(
    f_sharp: &HorosphericalNet,
    f: &HorosphericalNet,
    exec: Execution,
) -> Result<DualReport> {
    Ok(DualReport {
        sharp_to_bryant: f_sharp.secondary_gauss(exec)?.max_dist(&f.gauss),
        bryant_to_sharp: f.secondary_gauss(exec)?.max_dist(&f_sharp.gauss),
    })
}

fn denominator_error(m: i32, n: i32) -> Error {
    Error::ZeroDenominator { m, n }
}

/// The hyperbolic-model point of a frame as a full quaternion
/// `(-Im det τ, Re det τ, Re w, Im w) / (|τ21|² + |τ22|²)`, `w = τ11 τ̄21 + τ12 τ̄22`.
pub fn ccousin_point(t: &CMat2) -> Option<Q> {
    let den = t[(1, 0)].norm_sqr() + t[(1, 1)].norm_sqr();
    if !(den > tol::EPS_ZERO) {
        return None;
    }
    let det = t.determinant();
    let w = t[(0, 0)] * t[(1, 0)].conj() + t[(0, 1)] * t[(1, 1)].conj();
    Some(Q::new(-det.im, det.re, w.re, w.im) / den)
}

/// Hyperbolic-model coordinates of the cousin; the real slot, zero for a
/// Christoffel pair, is dropped.
pub fn ccousin_coords(frame: &ComplexFrame) -> Result<Grid<ImaginaryQuaternion>> {
    Grid::try_from_fn(frame.values.window(), |m, n| {
        ccousin_point(&frame.get(m, n))
            .map(|p| p.im())
            .ok_or_else(|| denominator_error(m, n))
    })
}

/// Largest real part of the hyperbolic-model points.
pub fn ccousin_real_part(frame: &ComplexFrame) -> f64 {
    frame.values.values().iter().fold(0.0f64, |r, t| {
        r.max(ccousin_point(t).map_or(f64::INFINITY, |p| p.w.abs()))
    })
}

/// `x ↦ (x + e1) / |x + e1|²`.
pub fn poincare_ball(points: &Grid<ImaginaryQuaternion>) -> Result<Grid<ImaginaryQuaternion>> {
    Grid::try_from_fn(points.window(), |m, n| {
        let p = *points.get(m, n);
        let den = (p.x + 1.0).powi(2) + p.y * p.y + p.z * p.z;
        if !(den > tol::EPS_ZERO) {
            return Err(denominator_error(m, n));
        }
        Ok(ImaginaryQuaternion::new(
            (p.x + 1.0) / den,
            p.y / den,
            p.z / den,
        ))
    })
}

/// Hyperbolic Gauss map as the complex Möbius image `(τ11 g + τ12)/(τ21 g + τ22)`,
/// placed in the boundary plane `Cj`.
pub fn hyperbolic_gauss_coords(
    frame: &ComplexFrame,
    g: &HolomorphicNet,
) -> Result<Grid<ImaginaryQuaternion>> {
    Grid::try_from_fn(g.window(), |m, n| {
        let t = frame.get(m, n);
        let z = g.get(m, n);
        let den = t[(1, 0)] * z + t[(1, 1)];
        if !(den.norm() > tol::EPS_ZERO * cmat_max(&t)) {
            return Err(denominator_error(m, n));
        }
        let w = (t[(0, 0)] * z + t[(0, 1)]) / den;
        Ok(ImaginaryQuaternion::new(0.0, w.re, w.im))
    })
}

/// The three coordinate models of one member of the cousin family.
#[derive(Debug, Clone, PartialEq)]
pub struct CousinModels {
    pub lambda: f64,
    pub gauss: Grid<ImaginaryQuaternion>,
    pub ccousin: Grid<ImaginaryQuaternion>,
    pub ball: Grid<ImaginaryQuaternion>,
    pub frame_residual: f64,
}

pub fn cousin_models(g: &HolomorphicNet, h: &HolomorphicNet, lambda: f64) -> Result<CousinModels> {
    let frame = integrate_h(g, h, lambda, Execution::Sequential)?;
    let ccousin = ccousin_coords(&frame)?;
    Ok(CousinModels {
        lambda,
        gauss: hyperbolic_gauss_coords(&frame, g)?,
        ball: poincare_ball(&ccousin)?,
        ccousin,
        frame_residual: frame.residual,
    })
}

/// One frame integration per parameter, run in parallel under `Execution::Parallel`.
pub fn cousin_sweep(
    g: &HolomorphicNet,
    h: &HolomorphicNet,
    lambdas: &[f64],
    exec: Execution,
) -> Result<Vec<CousinModels>> {
    par::map(exec, lambdas, |&l| cousin_models(g, h, l))
        .into_iter()
        .collect()
}

/// Relative deviation of the best similarity carrying the minimal net onto `points`.
pub fn similarity_deviation(minimal: &MinimalNet, points: &Grid<ImaginaryQuaternion>) -> f64 {
    fit_similarity(minimal.surface.values(), points.values(), true).relative_deviation()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair() -> (HolomorphicNet, HolomorphicNet) {
        catenoid_pair(20, GridWindow::symmetric(4, 4).unwrap()).unwrap()
    }

    #[test]
    fn exponential_pair_is_christoffel() {
        let (g, h) = pair();
        assert!(christoffel_identity_residual(&g, &h, Execution::Sequential) < 1e-12);
        let l = christoffel_labels(&g, &h).unwrap();
        let s = std::f64::consts::PI / 20.0;
        assert!((l.a(0) + 4.0 * s.sinh().powi(2)).abs() < 1e-14);
        assert!((l.b(0) - 4.0 * s.sin().powi(2)).abs() < 1e-14);
    }

    #[test]
    fn small_n_rejected() {
        assert!(catenoid_pair(3, GridWindow::symmetric(1, 1).unwrap()).is_err());
    }

    #[test]
    fn step_determinant() {
        let (g, h) = pair();
        let l = christoffel_labels(&g, &h).unwrap();
        let s = h_step(&g, &h, 1, 1, -2, 0.3);
        assert!((s.determinant() - C::new(1.0 - 0.3 * l.a(1), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn zero_lambda_frame_is_identity() {
        let (g, h) = pair();
        let f = integrate_h(&g, &h, 0.0, Execution::Sequential).unwrap();
        assert!(f
            .values
            .values()
            .iter()
            .all(|t| (t - CMat2::identity()).norm() == 0.0));
    }

    #[test]
    fn ccousin_of_identity() {
        let p = ccousin_point(&CMat2::identity()).unwrap();
        assert_eq!(p, Q::I);
        let grid = Grid::from_fn(GridWindow::symmetric(1, 1).unwrap(), |_, _| p.im());
        let b = poincare_ball(&grid).unwrap();
        assert_eq!(*b.get(0, 0), ImaginaryQuaternion::new(0.5, 0.0, 0.0));
    }

    #[test]
    fn base_point_on_boundary_rejected() {
        let (g, h) = pair();
        let r = horospherical_from_gauss(
            &g,
            &h,
            0.25,
            ImaginaryQuaternion::new(0.0, 1.0, 0.5),
            Execution::Sequential,
        );
        assert_eq!(r.unwrap_err(), Error::BadBasePoint);
    }
}
