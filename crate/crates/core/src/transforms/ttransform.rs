//! The Calapso (T) transformation: frames solving the T-system and the
//! transformed nets `f^λ = T^λ f`.

use crate::error::{Error, Result};
use crate::grid::{integrate_center_out, Grid};
use crate::net::{CrossRatioFactorization, ProjectiveNet};
use crate::par::{self, Execution};
use crate::projective::{sphere_transform, HPoint, HermitianForm, QuatMatrix2};
use crate::quaternion::Quaternion as Q;
use crate::tol;

use super::christoffel::christoffel;
use super::connection::{build_connection, ConnectionPair};

#[derive(Debug, Clone, PartialEq)]
pub struct TTransformFrame {
    pub lambda: f64,
    /// Frames up to positive real scale; `T_{0,0} = id`.
    pub values: Grid<QuatMatrix2>,
    /// Largest projective mismatch over all edges.
    pub residual: f64,
}

impl TTransformFrame {
    pub fn get(&self, m: i32, n: i32) -> QuatMatrix2 {
        *self.values.get(m, n)
    }
}

/// Largest projective mismatch `T_{next}` vs `T (step)` over all edges.
pub fn frame_edge_residual(
    values: &Grid<QuatMatrix2>,
    step: impl Fn(u8, i32, i32) -> QuatMatrix2 + Sync + Send,
    exec: Execution,
) -> f64 {
    let edges = values.window().edges();
    par::max_range(exec, edges.len(), |k| {
        let (m, n, d) = edges[k];
        let to = if d == 1 { (m + 1, n) } else { (m, n + 1) };
        values
            .get(to.0, to.1)
            .projective_dist(&(*values.get(m, n) * step(d, m, n)))
    })
}

/// Integrates `T_{m+1,n} = T_{m,n} S1_{m,n}`, `T_{m,n+1} = T_{m,n} S2_{m,n}` center-out
/// from `T_{0,0} = id`, renormalizing each frame by its largest entry.
pub fn integrate_frame(
    window: crate::GridWindow,
    step: impl Fn(u8, i32, i32) -> QuatMatrix2 + Sync + Send,
) -> Result<Grid<QuatMatrix2>> {
    integrate_center_out(window, QuatMatrix2::IDENTITY, |prev, from, to| {
        let next = if to.0 > from.0 {
            *prev * step(1, from.0, from.1)
        } else if to.0 < from.0 {
            *prev * step(1, to.0, to.1).inverse()?
        } else if to.1 > from.1 {
            *prev * step(2, from.0, from.1)
        } else {
            *prev * step(2, to.0, to.1).inverse()?
        };
        Ok::<_, Error>(next.normalized())
    })
}

/// Solves the T-system for the connection at parameter `λ`.
#[allow(non_snake_case)]
pub fn integrate_T(conn: &ConnectionPair, lambda: f64, exec: Execution) -> Result<TTransformFrame> {
    if let Some(f) = &conn.factorization {
        f.check_lambda(lambda)?;
    }
    let values = integrate_frame(conn.window(), |d, m, n| conn.step(d, m, n, lambda))?;
    let residual = frame_edge_residual(&values, |d, m, n| conn.step(d, m, n, lambda), exec);
    if !(residual <= tol::CLOSURE) {
        return Err(Error::ClosureFailure {
            what: "T-system",
            residual,
            tolerance: tol::CLOSURE,
        });
    }
    Ok(TTransformFrame {
        lambda,
        values,
        residual,
    })
}

/// `f^λ = T^λ f`.
pub fn t_transform(f: &ProjectiveNet, frame: &TTransformFrame) -> Result<ProjectiveNet> {
    let w = f.window();
    let values = Grid::try_from_fn(w, |m, n| {
        HPoint::new(frame.get(m, n).apply(f.get(m, n).rep()))
    })?;
    let out = ProjectiveNet::new(values);
    for (m, n, d) in w.edges() {
        let to = if d == 1 { (m + 1, n) } else { (m, n + 1) };
        if out.get(m, n).dist(&out.get(to.0, to.1)) <= tol::EPS_ZERO {
            return Err(Error::DegenerateImage { m, n });
        }
    }
    Ok(out)
}

/// Largest `|q^λ - q (1 - λb)/(1 - λa)|` over all quads.
pub fn q_lambda_residual(
    f_lambda: &ProjectiveNet,
    fact: &CrossRatioFactorization,
    lambda: f64,
    exec: Execution,
) -> Result<f64> {
    let q = f_lambda.quad_cross_ratios(exec)?;
    Ok(q.iter().fold(0.0f64, |r, ((m, n), c)| {
        let expect = fact.q(m, n) * (1.0 - lambda * fact.b(n)) / (1.0 - lambda * fact.a(m));
        r.max((c.re - expect).abs().max(c.im))
    }))
}

/// Frame of `f` at `λ`, computed from scratch: projection to the standard
/// chart, Christoffel transform with the given labels, connection, T-system.
pub fn frame_of(
    f: &ProjectiveNet,
    fact: &CrossRatioFactorization,
    lambda: f64,
    exec: Execution,
) -> Result<(ConnectionPair, TTransformFrame)> {
    let affine = f.project(&crate::AffineChart::standard())?;
    let pair = christoffel(&affine, fact, Q::ZERO)?;
    let conn = build_connection(&pair);
    let frame = integrate_T(&conn, lambda, exec)?;
    Ok((conn, frame))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupReport {
    /// Pointwise distance between `T^{λ2}_{f^{λ1}} f^{λ1}` and `T^{λ1+λ2} f`.
    pub composition: f64,
    /// Projective distance between `T^{λ2}_{f^{λ1}} T^{λ1}` and `T^{λ1+λ2}` as matrices.
    pub frames: f64,
    /// Distance of `T^{-λ1}_{f^{λ1}} T^{λ1}` from the identity.
    pub inverse: f64,
}

/// Checks `T^{λ1+λ2} = T^{λ2} T^{λ1}` and `(T^{λ})^{-1} = T^{-λ}`.
pub fn t_group_check(
    f: &ProjectiveNet,
    conn: &ConnectionPair,
    lambda1: f64,
    lambda2: f64,
    exec: Execution,
) -> Result<GroupReport> {
    let fact = conn
        .factorization
        .clone()
        .ok_or_else(|| Error::NotIsothermic("connection without labels".into()))?;
    let t1 = integrate_T(conn, lambda1, exec)?;
    let t12 = integrate_T(conn, lambda1 + lambda2, exec)?;
    let f1 = t_transform(f, &t1)?;
    let fact1 = fact.t_transformed(lambda1);
    let (_, t2) = frame_of(&f1, &fact1, lambda2, exec)?;
    let composed = t_transform(&f1, &t2)?;
    let direct = t_transform(f, &t12)?;
    let composition = composed.max_dist(&direct);
    let w = f.window();
    let frames = w.indices().fold(0.0f64, |r, (m, n)| {
        r.max((t2.get(m, n) * t1.get(m, n)).projective_dist(&t12.get(m, n)))
    });
    let (_, tinv) = frame_of(&f1, &fact1, -lambda1, exec)?;
    let inverse = w.indices().fold(0.0f64, |r, (m, n)| {
        r.max((tinv.get(m, n) * t1.get(m, n)).projective_dist(&QuatMatrix2::IDENTITY))
    });
    Ok(GroupReport {
        composition,
        frames,
        inverse,
    })
}

/// Distance between the real lines of two hermitian forms.
pub fn form_dist(a: &HermitianForm, b: &HermitianForm) -> f64 {
    let v = |s: &HermitianForm| {
        let x = [s.s11, s.s12.w, s.s12.x, s.s12.y, s.s12.z, s.s22];
        let n = x.iter().map(|t| t * t).sum::<f64>().sqrt();
        x.map(|t| t / n)
    };
    let (x, y) = (v(a), v(b));
    let plus = x
        .iter()
        .zip(&y)
        .map(|(p, q)| (p - q) * (p - q))
        .sum::<f64>()
        .sqrt();
    let minus = x
        .iter()
        .zip(&y)
        .map(|(p, q)| (p + q) * (p + q))
        .sum::<f64>()
        .sqrt();
    plus.min(minus)
}

/// Largest deviation of `(1+λU)·s`, `(1+λV)·s` from `s`: zero iff every step
/// lies in the Möbius group of the 3-sphere `s`.
pub fn mobius_preservation_residual(
    conn: &ConnectionPair,
    s: &HermitianForm,
    lambda: f64,
    exec: Execution,
) -> f64 {
    let edges = conn.window().edges();
    par::max_range(exec, edges.len(), |k| {
        let (m, n, d) = edges[k];
        match sphere_transform(&conn.step(d, m, n, lambda), s) {
            Ok(t) => form_dist(&t, s),
            Err(_) => f64::INFINITY,
        }
    })
}
