//! The connection `U = f u φ_{m+1,n}`, `V = f v φ_{m,n+1}` of a Christoffel
//! pair, its integrability, and the general Christoffel transform.

use crate::error::{Error, Result};
use crate::grid::{integrate_center_out, Grid, GridWindow};
use crate::net::{edge_differences, AffineNet, CrossRatioFactorization};
use crate::par::{self, Execution};
use crate::projective::{AffineChart, HVector, QuatMatrix2};
use crate::quaternion::Quaternion as Q;
use crate::tol;

use super::christoffel::ChristoffelPair;

/// Edge matrices of the T-system. `u`/`v` entries on the last row/column are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionPair {
    pub u: Grid<QuatMatrix2>,
    pub v: Grid<QuatMatrix2>,
    /// Lifts `v0 + vinf f` with `nuinf f = 1`.
    pub lifts: Grid<HVector>,
    pub chart: AffineChart,
    /// Edge labels, when the connection comes from an isothermic net.
    pub factorization: Option<CrossRatioFactorization>,
}

impl ConnectionPair {
    /// Builds `U`, `V` from a net and arbitrary edge fields `u`, `v`.
    pub fn from_edge_fields(
        f: &AffineNet,
        u: &Grid<Q>,
        v: &Grid<Q>,
        factorization: Option<CrossRatioFactorization>,
    ) -> Self {
        let w = f.window();
        let chart = f.chart;
        let lifts = f.values.map(|&p| chart.lift(p));
        let uu = Grid::from_fn(w, |m, n| {
            if m < w.m_max {
                lifts
                    .get(m, n)
                    .outer(chart.colift(f.get(m + 1, n)).scale(*u.get(m, n)))
            } else {
                QuatMatrix2::ZERO
            }
        });
        let vv = Grid::from_fn(w, |m, n| {
            if n < w.n_max {
                lifts
                    .get(m, n)
                    .outer(chart.colift(f.get(m, n + 1)).scale(*v.get(m, n)))
            } else {
                QuatMatrix2::ZERO
            }
        });
        ConnectionPair {
            u: uu,
            v: vv,
            lifts,
            chart,
            factorization,
        }
    }

    pub fn window(&self) -> GridWindow {
        self.u.window()
    }

    /// Edge matrix of the edge starting at `(m, n)`.
    pub fn edge(&self, direction: u8, m: i32, n: i32) -> QuatMatrix2 {
        if direction == 1 {
            *self.u.get(m, n)
        } else {
            *self.v.get(m, n)
        }
    }

    /// `1 + λ U` or `1 + λ V`.
    pub fn step(&self, direction: u8, m: i32, n: i32, lambda: f64) -> QuatMatrix2 {
        QuatMatrix2::IDENTITY + self.edge(direction, m, n).scale_real(lambda)
    }

    /// Residual of `(1+λU)f = f(1-λa)` and `(1+λU)f₊ = f₊` (and the `V` analogues).
    pub fn fixed_point_residual(&self, lambda: f64, exec: Execution) -> f64 {
        let Some(fact) = &self.factorization else {
            return f64::INFINITY;
        };
        let edges = self.window().edges();
        par::max_range(exec, edges.len(), |k| {
            let (m, n, d) = edges[k];
            let to = if d == 1 { (m + 1, n) } else { (m, n + 1) };
            let s = self.step(d, m, n, lambda);
            let f0 = *self.lifts.get(m, n);
            let f1 = *self.lifts.get(to.0, to.1);
            let a = fact.label(d, m, n);
            let r0 = s.apply(f0) - f0 * Q::real(1.0 - lambda * a);
            let r1 = s.apply(f1) - f1;
            let scale = s.max_abs() * f0.max_abs().max(f1.max_abs());
            r0.max_abs().max(r1.max_abs()) / scale
        })
    }

    /// Largest face residual of `(1+λU)(1+λV₊) = (1+λV)(1+λU₊)`, relative.
    pub fn maurer_cartan_residual(&self, lambda: f64, exec: Execution) -> f64 {
        let quads = self.window().quads();
        par::max_range(exec, quads.len(), |k| {
            let (m, n) = quads[k];
            let l = self.step(1, m, n, lambda) * self.step(2, m + 1, n, lambda);
            let r = self.step(2, m, n, lambda) * self.step(1, m, n + 1, lambda);
            l.dist(&r) / l.max_abs().max(r.max_abs())
        })
    }

    /// Residual of the rank-one structure `U = f u φ₊` against given `u`, `v`.
    pub fn rank_one_residual(&self, f: &AffineNet, f_star: &AffineNet) -> f64 {
        let rebuilt = build_connection_from(f, f_star, None);
        let mut r: f64 = 0.0;
        for (m, n, _) in self.window().edges() {
            for d in [1u8, 2] {
                let a = self.edge(d, m, n);
                let b = rebuilt.edge(d, m, n);
                r = r.max(a.dist(&b) / a.max_abs().max(b.max_abs()).max(1e-300));
            }
        }
        r
    }
}

fn build_connection_from(
    f: &AffineNet,
    f_star: &AffineNet,
    fact: Option<CrossRatioFactorization>,
) -> ConnectionPair {
    let (u, v) = edge_differences(f_star);
    ConnectionPair::from_edge_fields(f, &u, &v, fact)
}

/// `U`, `V` with `u = ∂1 f*`, `v = ∂2 f*`.
pub fn build_connection(pair: &ChristoffelPair) -> ConnectionPair {
    build_connection_from(&pair.f, &pair.f_star, Some(pair.factorization.clone()))
}

/// Solution of `F*_{m+1,n} = F*_{m,n} + U`, `F*_{m,n+1} = F*_{m,n} + V`, `F*_{0,0} = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralChristoffelField {
    pub values: Grid<QuatMatrix2>,
    pub closure: f64,
}

pub fn general_christoffel(conn: &ConnectionPair) -> Result<GeneralChristoffelField> {
    let values = integrate_center_out(conn.window(), QuatMatrix2::ZERO, |prev, from, to| {
        Ok::<_, Error>(if to.0 > from.0 {
            *prev + conn.edge(1, from.0, from.1)
        } else if to.0 < from.0 {
            *prev - conn.edge(1, to.0, to.1)
        } else if to.1 > from.1 {
            *prev + conn.edge(2, from.0, from.1)
        } else {
            *prev - conn.edge(2, to.0, to.1)
        })
    })?;
    let scale = values
        .values()
        .iter()
        .fold(1.0f64, |m, x| m.max(x.max_abs()));
    let mut closure: f64 = 0.0;
    for (m, n, d) in conn.window().edges() {
        let to = if d == 1 { (m + 1, n) } else { (m, n + 1) };
        let r = (*values.get(to.0, to.1) - *values.get(m, n)).dist(&conn.edge(d, m, n));
        closure = closure.max(r / scale);
    }
    if !(closure <= tol::CLOSURE) {
        return Err(Error::ClosureFailure {
            what: "general Christoffel transform",
            residual: closure,
            tolerance: tol::CLOSURE,
        });
    }
    Ok(GeneralChristoffelField { values, closure })
}

impl GeneralChristoffelField {
    /// `nuinf F* vinf` in the given chart.
    pub fn project(&self, chart: &AffineChart) -> Grid<Q> {
        self.values.map(|x| chart.nuinf.apply(x.apply(chart.vinf)))
    }
}

/// Integrates the Euclidean-frame system
/// `F_{m+1,n} = F_{m,n}(1 + vinf (∂1 f) nuinf + λ v0 u nu0)` from
/// `F_{0,0} = id + vinf f_{0,0} nuinf`, renormalizing every step.
pub fn integrate_euclidean_frame(pair: &ChristoffelPair, lambda: f64) -> Result<Grid<QuatMatrix2>> {
    let c = pair.f.chart;
    let f = &pair.f;
    let fs = &pair.f_star;
    let step = |lo: (i32, i32), hi: (i32, i32)| {
        let df = f.get(hi.0, hi.1) - f.get(lo.0, lo.1);
        let du = fs.get(hi.0, hi.1) - fs.get(lo.0, lo.1);
        QuatMatrix2::IDENTITY
            + c.vinf.outer(c.nuinf.scale(df))
            + c.v0.outer(c.nu0.scale(du)).scale_real(lambda)
    };
    let seed = QuatMatrix2::IDENTITY + c.vinf.outer(c.nuinf.scale(f.get(0, 0)));
    integrate_center_out(f.window(), seed, |prev, from, to| {
        let next = if to.0 + to.1 > from.0 + from.1 {
            *prev * step(from, to)
        } else {
            *prev * step(to, from).inverse()?
        };
        Ok::<_, Error>(next.normalized())
    })
}

/// Euclidean frame `id + vinf f nuinf` at every vertex.
pub fn euclidean_frame(f: &AffineNet) -> Grid<QuatMatrix2> {
    let c = f.chart;
    f.values
        .map(|&p| QuatMatrix2::IDENTITY + c.vinf.outer(c.nuinf.scale(p)))
}
