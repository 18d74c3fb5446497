//! Darboux transforms: the Riccati system, the fixed-point construction, the
//! cross-ratio conditions, Bianchi permutability and the C-D permutability.

use crate::error::{Error, Result};
use crate::fit::sphere_rank;
use crate::grid::{integrate_center_out, Grid};
use crate::net::{edge_differences, AffineNet, CrossRatioFactorization, ProjectiveNet};
use crate::par::{self, Execution};
use crate::projective::{cross_ratio, AffineChart, HPoint, NormalizedCrossRatio};
use crate::quaternion::Quaternion as Q;
use crate::tol;

use super::christoffel::{dual_residuals, rel, ChristoffelPair, DualResiduals};
use super::ttransform::TTransformFrame;

#[derive(Debug, Clone, PartialEq)]
pub struct DarbouxNet {
    pub hat: ProjectiveNet,
    pub lambda: f64,
    /// Largest edge residual of the construction.
    pub closure: f64,
}

impl DarbouxNet {
    pub fn affine(&self, chart: &AffineChart) -> Result<AffineNet> {
        self.hat.project(chart)
    }
}

/// Integrates the Riccati system
/// `∂f̂ = λ (f̂ - f) (∂f*) (f̂ - f)₊` from `f̂_{0,0} = init`.
pub fn darboux_riccati(
    pair: &ChristoffelPair,
    lambda: f64,
    init: Q,
    exec: Execution,
) -> Result<DarbouxNet> {
    if lambda == 0.0 {
        return Err(Error::ZeroLambda);
    }
    let f = &pair.f;
    let fs = &pair.f_star;
    let d0 = init - f.get(0, 0);
    if d0.norm() <= tol::EPS_ZERO * f.get(0, 0).norm().max(1.0) {
        return Err(Error::BadInitialPoint);
    }
    let diffs = integrate_center_out(f.window(), d0, |&d, from, to| {
        let (lo, hi, forward) = if to.0 + to.1 > from.0 + from.1 {
            (from, to, true)
        } else {
            (to, from, false)
        };
        let df = f.get(hi.0, hi.1) - f.get(lo.0, lo.1);
        let u = fs.get(hi.0, hi.1) - fs.get(lo.0, lo.1);
        let bad = || Error::DegenerateImage { m: to.0, n: to.1 };
        if forward {
            let k = (Q::ONE - d * u * lambda).inv().map_err(|_| bad())?;
            Ok::<Q, Error>(k * (d - df))
        } else {
            let k = (Q::ONE + u * d * lambda).inv().map_err(|_| bad())?;
            Ok((d + df) * k)
        }
    })?;
    let hat_affine = AffineNet::with_chart(
        Grid::from_fn(f.window(), |m, n| f.get(m, n) + *diffs.get(m, n)),
        f.chart,
    );
    let closure = riccati_residual(pair, &hat_affine, lambda, exec);
    if !(closure <= tol::CLOSURE) {
        return Err(Error::ClosureFailure {
            what: "Riccati system",
            residual: closure,
            tolerance: tol::CLOSURE,
        });
    }
    Ok(DarbouxNet {
        hat: hat_affine.to_projective(),
        lambda,
        closure,
    })
}

/// Largest relative residual of the Riccati system over all edges.
pub fn riccati_residual(
    pair: &ChristoffelPair,
    hat: &AffineNet,
    lambda: f64,
    exec: Execution,
) -> f64 {
    let f = &pair.f;
    let (d1, d2) = edge_differences(&pair.f_star);
    let edges = f.window().edges();
    par::max_range(exec, edges.len(), |k| {
        let (m, n, dir) = edges[k];
        let to = if dir == 1 { (m + 1, n) } else { (m, n + 1) };
        let u = if dir == 1 {
            *d1.get(m, n)
        } else {
            *d2.get(m, n)
        };
        let lhs = hat.get(to.0, to.1) - hat.get(m, n);
        let rhs =
            (hat.get(m, n) - f.get(m, n)) * u * (hat.get(to.0, to.1) - f.get(to.0, to.1)) * lambda;
        rel(lhs, rhs)
    })
}

/// Largest `|[f, f₊, f̂₊, f̂] - λ a|` (and `λ b` in direction 2).
pub fn edge_cross_ratio_residual(
    f: &ProjectiveNet,
    hat: &ProjectiveNet,
    fact: &CrossRatioFactorization,
    lambda: f64,
    exec: Execution,
) -> f64 {
    let edges = f.window().edges();
    par::max_range(exec, edges.len(), |k| {
        let (m, n, dir) = edges[k];
        let to = if dir == 1 { (m + 1, n) } else { (m, n + 1) };
        match cross_ratio(
            &f.get(m, n),
            &f.get(to.0, to.1),
            &hat.get(to.0, to.1),
            &hat.get(m, n),
        ) {
            Ok(c) => c.dist(NormalizedCrossRatio {
                re: lambda * fact.label(dir, m, n),
                im: 0.0,
            }),
            Err(_) => f64::INFINITY,
        }
    })
}

/// `f̂ = T^{-1} (T_{0,0} init)`.
pub fn darboux_fixed_point(frame: &TTransformFrame, init: &HPoint) -> Result<DarbouxNet> {
    if frame.lambda == 0.0 {
        return Err(Error::ZeroLambda);
    }
    let p = frame.get(0, 0).apply(init.rep());
    let values = frame
        .values
        .try_map(|t| HPoint::new(t.inverse()?.apply(p)))?;
    Ok(DarbouxNet {
        hat: ProjectiveNet::new(values),
        lambda: frame.lambda,
        closure: frame.residual,
    })
}

/// Solves `[p1, p2, p3, p4] = μ` for `p3`.
pub fn complete_cross_ratio(p1: Q, p2: Q, p4: Q, mu: f64) -> Option<Q> {
    let c = (p1 - p2).inv().ok()? * (p4 - p1) * mu;
    Some((p2 * c + p4) * (Q::ONE + c).inv().ok()?)
}

/// The common Darboux transform `f̂` of `f̂1 = D_{λ1} f` and `f̂2 = D_{λ2} f`,
/// pointwise from `[f, f̂2, f̂, f̂1] = λ1/λ2`.
pub fn bianchi_permute(
    f: &ProjectiveNet,
    hat1: &DarbouxNet,
    hat2: &DarbouxNet,
) -> Result<DarbouxNet> {
    let (l1, l2) = (hat1.lambda, hat2.lambda);
    if l1 == l2 {
        return Err(Error::DegenerateConfiguration { m: 0, n: 0 });
    }
    let chart = AffineChart::standard();
    let values = Grid::try_from_fn(f.window(), |m, n| {
        let bad = Error::DegenerateConfiguration { m, n };
        let p1 =
            crate::projective::stereo_project(&chart, &f.get(m, n)).map_err(|_| bad.clone())?;
        let p2 = crate::projective::stereo_project(&chart, &hat2.hat.get(m, n))
            .map_err(|_| bad.clone())?;
        let p4 = crate::projective::stereo_project(&chart, &hat1.hat.get(m, n))
            .map_err(|_| bad.clone())?;
        complete_cross_ratio(p1, p2, p4, l1 / l2)
            .map(HPoint::affine)
            .ok_or(bad)
    })?;
    Ok(DarbouxNet {
        hat: ProjectiveNet::new(values),
        lambda: l2,
        closure: 0.0,
    })
}

/// Largest `|[f, f̂2, f̂, f̂1] - λ1/λ2|`.
pub fn bianchi_residual(
    f: &ProjectiveNet,
    hat1: &DarbouxNet,
    hat2: &DarbouxNet,
    hat: &DarbouxNet,
) -> f64 {
    let target = NormalizedCrossRatio {
        re: hat1.lambda / hat2.lambda,
        im: 0.0,
    };
    f.window().indices().fold(0.0f64, |r, (m, n)| {
        let c = cross_ratio(
            &f.get(m, n),
            &hat2.hat.get(m, n),
            &hat.hat.get(m, n),
            &hat1.hat.get(m, n),
        );
        r.max(c.map(|c| c.dist(target)).unwrap_or(f64::INFINITY))
    })
}

/// Largest two-sphere residual of the eight points `f`, `f̂` over each quad.
pub fn ribaucour_residual(f: &ProjectiveNet, hat: &ProjectiveNet, exec: Execution) -> f64 {
    let quads = f.window().quads();
    par::max_range(exec, quads.len(), |k| {
        let (m, n) = quads[k];
        let corners = [(m, n), (m + 1, n), (m + 1, n + 1), (m, n + 1)];
        let pts: Vec<HPoint> = corners
            .iter()
            .flat_map(|&(a, b)| [f.get(a, b), hat.get(a, b)])
            .collect();
        sphere_rank(&pts).two_sphere_residual()
    })
}

/// Largest two-sphere residual of the Bianchi cubes `f, f̂1, f̂2, f̂` over each edge.
pub fn hexahedron_residual(f: &ProjectiveNet, nets: [&ProjectiveNet; 3], exec: Execution) -> f64 {
    let edges = f.window().edges();
    par::max_range(exec, edges.len(), |k| {
        let (m, n, d) = edges[k];
        let to = if d == 1 { (m + 1, n) } else { (m, n + 1) };
        let mut pts = vec![f.get(m, n), f.get(to.0, to.1)];
        for g in nets {
            pts.push(g.get(m, n));
            pts.push(g.get(to.0, to.1));
        }
        sphere_rank(&pts).two_sphere_residual()
    })
}

/// `f̃ = f* + (1/λ)(f̂ - f)^{-1}`: a Christoffel transform of `f̂` and a
/// Darboux transform of `f*`.
pub fn cd_permute(pair: &ChristoffelPair, hat: &AffineNet, lambda: f64) -> Result<ChristoffelPair> {
    if lambda == 0.0 {
        return Err(Error::ZeroLambda);
    }
    let f = &pair.f;
    let values = Grid::try_from_fn(f.window(), |m, n| {
        let d = hat.get(m, n) - f.get(m, n);
        let inv = d
            .inv_scaled(f.get(m, n).norm().max(1.0))
            .map_err(|_| Error::DegenerateDifference { m, n })?;
        Ok::<_, Error>(pair.f_star.get(m, n) + inv / lambda)
    })?;
    let tilde = AffineNet::with_chart(values, f.chart);
    Ok(ChristoffelPair {
        f: hat.clone(),
        f_star: tilde,
        factorization: pair.factorization.clone(),
        closure: 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdReport {
    /// Christoffel identities between `f̂` and `f̃`.
    pub christoffel: DualResiduals,
    /// Riccati system between `f*` (with dual `f`) and `f̃`.
    pub riccati: f64,
}

pub fn cd_check(
    pair: &ChristoffelPair,
    permuted: &ChristoffelPair,
    lambda: f64,
    exec: Execution,
) -> CdReport {
    let christoffel = dual_residuals(&permuted.f, &permuted.f_star, &permuted.factorization, exec);
    let riccati = riccati_residual(&pair.swapped(), &permuted.f_star, lambda, exec);
    CdReport {
        christoffel,
        riccati,
    }
}
