//! Christoffel transforms of isothermic nets and the dual relations they satisfy.

use crate::error::{Error, Result};
use crate::grid::integrate_center_out;
use crate::net::{edge_differences, AffineNet, CrossRatioFactorization};
use crate::par::{self, Execution};
use crate::projective::NormalizedCrossRatio;
use crate::quaternion::Quaternion as Q;
use crate::tol;

/// An isothermic net `f` with a Christoffel transform `f*` in the same chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ChristoffelPair {
    pub f: AffineNet,
    pub f_star: AffineNet,
    pub factorization: CrossRatioFactorization,
    /// Largest edge mismatch found while integrating `f*`.
    pub closure: f64,
}

pub(crate) fn rel(a: Q, b: Q) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        (a - b).norm() / s
    }
}

/// Edge of `f*` prescribed by `∂f* = label (∂f)^{-1}`.
fn dual_edge(
    f: &AffineNet,
    fact: &CrossRatioFactorization,
    from: (i32, i32),
    to: (i32, i32),
) -> Result<Q> {
    // forward edge starting at the smaller index
    let (lo, hi, sign) = if to.0 + to.1 > from.0 + from.1 {
        (from, to, 1.0)
    } else {
        (to, from, -1.0)
    };
    let dir = if hi.0 != lo.0 { 1 } else { 2 };
    let d = f.get(hi.0, hi.1) - f.get(lo.0, lo.1);
    let inv = d
        .inv_scaled(f.get(lo.0, lo.1).norm().max(1.0))
        .map_err(|_| Error::NotRegular {
            m: lo.0,
            n: lo.1,
            reason: "vanishing edge",
        })?;
    Ok(inv * (fact.label(dir, lo.0, lo.1) * sign))
}

/// Integrates `∂1 f* = a (∂1 f)^{-1}`, `∂2 f* = b (∂2 f)^{-1}` from `f*_{0,0} = seed`.
pub fn christoffel(
    f: &AffineNet,
    fact: &CrossRatioFactorization,
    seed: Q,
) -> Result<ChristoffelPair> {
    christoffel_within(f, fact, seed, tol::CLOSURE)
}

/// As [`christoffel`], with the closure gate at `tolerance`.
pub fn christoffel_within(
    f: &AffineNet,
    fact: &CrossRatioFactorization,
    seed: Q,
    tolerance: f64,
) -> Result<ChristoffelPair> {
    let w = f.window();
    let values = integrate_center_out(w, seed, |prev, from, to| {
        Ok::<Q, Error>(*prev + dual_edge(f, fact, from, to)?)
    })?;
    let f_star = AffineNet::with_chart(values, f.chart);
    let closure = dual_edge_mismatch(f, &f_star, fact, Execution::Sequential);
    if !(closure <= tolerance) {
        return Err(Error::ClosureFailure {
            what: "Christoffel transform",
            residual: closure,
            tolerance,
        });
    }
    Ok(ChristoffelPair {
        f: f.clone(),
        f_star,
        factorization: fact.clone(),
        closure,
    })
}

/// Largest relative mismatch between the edges of `f*` and `label (∂f)^{-1}`.
pub fn dual_edge_mismatch(
    f: &AffineNet,
    f_star: &AffineNet,
    fact: &CrossRatioFactorization,
    exec: Execution,
) -> f64 {
    let edges = f.window().edges();
    par::max_range(exec, edges.len(), |k| {
        let (m, n, d) = edges[k];
        let to = if d == 1 { (m + 1, n) } else { (m, n + 1) };
        match dual_edge(f, fact, (m, n), to) {
            Ok(e) => rel(f_star.get(to.0, to.1) - f_star.get(m, n), e),
            Err(_) => f64::INFINITY,
        }
    })
}

/// Residuals of the identities satisfied by a Christoffel pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualResiduals {
    /// `(∂1 f*)(∂2 f)_{m+1,n} = (∂2 f*)(∂1 f)_{m,n+1}` and its mirror.
    pub dual_relations: f64,
    /// The four consequences involving `d = ∂1 f - ∂2 f`.
    pub consequences: f64,
    /// Quad cross ratio against `(∂1 f* ∂1 f)(∂2 f* ∂2 f)^{-1}`.
    pub cross_relation: f64,
    /// `(∂f*)(∂f)` against the real labels.
    pub labels: f64,
}

impl DualResiduals {
    pub fn max(&self) -> f64 {
        self.dual_relations
            .max(self.consequences)
            .max(self.cross_relation)
            .max(self.labels)
    }
}

pub fn dual_residuals(
    f: &AffineNet,
    f_star: &AffineNet,
    fact: &CrossRatioFactorization,
    exec: Execution,
) -> DualResiduals {
    let (d1, d2) = edge_differences(f);
    let (s1, s2) = edge_differences(f_star);
    let quads = f.window().quads();
    let per_quad = par::map(exec, &quads, |&(m, n)| {
        let (a1, a2) = (*d1.get(m, n), *d2.get(m, n));
        let (b1, b2) = (*s1.get(m, n), *s2.get(m, n));
        let a2r = *d2.get(m + 1, n);
        let a1u = *d1.get(m, n + 1);
        let b2r = *s2.get(m + 1, n);
        let b1u = *s1.get(m, n + 1);
        let dual = rel(b1 * a2r, b2 * a1u).max(rel(a1 * b2r, a2 * b1u));
        let d = a1 - a2;
        let cons = rel(d * b1u * a1u, a1 * b1 * d)
            .max(rel(d * b2r * a2r, a2 * b2 * d))
            .max(rel(d * b2r * a1u, a2 * b1 * d))
            .max(rel(d * b1u * a2r, a1 * b2 * d));
        let cross = match (f.quad_cross(m, n), (b2 * a2).inv()) {
            (Ok(q), Ok(inv)) => {
                let r = NormalizedCrossRatio::from_quaternion(b1 * a1 * inv);
                q.dist(r) / q.as_complex().norm().max(1e-300)
            }
            _ => f64::INFINITY,
        };
        let labels = rel(b1 * a1, Q::real(fact.a(m))).max(rel(b2 * a2, Q::real(fact.b(n))));
        [dual, cons, cross, labels]
    });
    let mut out = [0.0f64; 4];
    for r in per_quad {
        for k in 0..4 {
            out[k] = if r[k].is_nan() {
                f64::INFINITY
            } else {
                out[k].max(r[k])
            };
        }
    }
    // labels of the last row / column edges
    let w = f.window();
    for n in w.n_min..w.n_max {
        let m = w.m_max;
        out[3] = out[3].max(rel(*s2.get(m, n) * *d2.get(m, n), Q::real(fact.b(n))));
    }
    for m in w.m_min..w.m_max {
        let n = w.n_max;
        out[3] = out[3].max(rel(*s1.get(m, n) * *d1.get(m, n), Q::real(fact.a(m))));
    }
    DualResiduals {
        dual_relations: out[0],
        consequences: out[1],
        cross_relation: out[2],
        labels: out[3],
    }
}

impl AffineNet {
    /// Normalized cross ratio of the quad with lower-left corner `(m, n)`.
    pub fn quad_cross(&self, m: i32, n: i32) -> Result<NormalizedCrossRatio> {
        crate::projective::cross_ratio_affine(
            self.get(m, n),
            self.get(m + 1, n),
            self.get(m + 1, n + 1),
            self.get(m, n + 1),
        )
        .map(NormalizedCrossRatio::from_quaternion)
        .map_err(|_| Error::DegenerateQuad { m, n })
    }
}

impl ChristoffelPair {
    pub fn residuals(&self, exec: Execution) -> DualResiduals {
        dual_residuals(&self.f, &self.f_star, &self.factorization, exec)
    }

    /// The pair with roles exchanged; `f** = f` for the same labels.
    pub fn swapped(&self) -> ChristoffelPair {
        ChristoffelPair {
            f: self.f_star.clone(),
            f_star: self.f.clone(),
            factorization: self.factorization.clone(),
            closure: self.closure,
        }
    }
}

/// Real labels read off the products `(∂f*)(∂f)` along the row and column
/// through the origin. `residual` is left at zero; [`dual_residuals`] checks
/// them everywhere.
pub fn edge_labels(f: &AffineNet, f_star: &AffineNet) -> CrossRatioFactorization {
    let w = f.window();
    let (d1, d2) = edge_differences(f);
    let (s1, s2) = edge_differences(f_star);
    CrossRatioFactorization::from_fns(
        w,
        |m| (*s1.get(m, 0) * *d1.get(m, 0)).w,
        |n| (*s2.get(0, n) * *d2.get(0, n)).w,
    )
}

/// Largest distance between `g` and `s g + t` for the best real `s` and
/// quaternion `t` (least squares); relative to the spread of `g`.
pub fn scale_translation_residual(f: &AffineNet, g: &AffineNet) -> f64 {
    let n = f.values.values().len() as f64;
    let mean = |net: &AffineNet| net.values.values().iter().fold(Q::ZERO, |s, &p| s + p) / n;
    let (mf, mg) = (mean(f), mean(g));
    let mut num = 0.0;
    let mut den = 0.0;
    for (&a, &b) in f.values.values().iter().zip(g.values.values()) {
        let (x, y) = (a - mf, b - mg);
        num += x.w * y.w + x.x * y.x + x.y * y.y + x.z * y.z;
        den += x.norm_sqr();
    }
    let s = num / den;
    let spread = g
        .values
        .values()
        .iter()
        .fold(0.0f64, |m, &b| m.max((b - mg).norm()));
    let dev = f
        .values
        .values()
        .iter()
        .zip(g.values.values())
        .fold(0.0f64, |m, (&a, &b)| {
            m.max(((a - mf) * s - (b - mg)).norm())
        });
    dev / spread
}

/// Grid of `|∂ f|` ratios between two nets, used to detect non-congruence.
pub fn edge_length_ratios(f: &AffineNet, g: &AffineNet) -> Vec<f64> {
    let w = f.window();
    w.edges()
        .into_iter()
        .map(|(m, n, d)| {
            let to = if d == 1 { (m + 1, n) } else { (m, n + 1) };
            (g.get(to.0, to.1) - g.get(m, n)).norm() / (f.get(to.0, to.1) - f.get(m, n)).norm()
        })
        .collect()
}
