//! Goursat transforms: Christoffel transforms of a different stereographic
//! projection of the same net.

use crate::error::{Error, Result};
use crate::grid::{integrate_center_out, Grid};
use crate::net::{AffineNet, ProjectiveNet};
use crate::projective::{stereo_project, AffineChart, HCovector, HVector};
use crate::quaternion::Quaternion as Q;
use crate::tol;

/// Transforms the Christoffel transform `f_star` of the projection of `base`
/// in `f_star.chart` into the Christoffel transform of its projection in
/// `new_chart`, with the same edge labels:
/// `∂f̃* = (ν̃∞ f)(∂f*)(φ₊ ṽ∞)`.
pub fn goursat(
    f_star: &AffineNet,
    new_chart: &AffineChart,
    base: &ProjectiveNet,
) -> Result<AffineNet> {
    let old = f_star.chart;
    let w = base.window();
    for (m, n) in w.indices() {
        stereo_project(new_chart, &base.get(m, n)).map_err(|_| Error::PointAtInfinity)?;
    }
    let proj = base.project(&old)?;
    let lifts: Grid<HVector> = proj.values.map(|&p| old.lift(p));
    let colifts: Grid<HCovector> = proj.values.map(|&p| old.colift(p));
    let edge = |lo: (i32, i32), hi: (i32, i32)| {
        let d = f_star.get(hi.0, hi.1) - f_star.get(lo.0, lo.1);
        new_chart.nuinf.apply(*lifts.get(lo.0, lo.1))
            * d
            * colifts.get(hi.0, hi.1).apply(new_chart.vinf)
    };
    let values = integrate_center_out(w, f_star.get(0, 0), |prev, from, to| {
        Ok::<_, Error>(if to.0 + to.1 > from.0 + from.1 {
            *prev + edge(from, to)
        } else {
            *prev - edge(to, from)
        })
    })?;
    let out = AffineNet::with_chart(values, *new_chart);
    let scale = out
        .values
        .values()
        .iter()
        .fold(1.0f64, |m, p| m.max(p.norm()));
    let mut closure: f64 = 0.0;
    for (m, n, d) in w.edges() {
        let to = if d == 1 { (m + 1, n) } else { (m, n + 1) };
        closure =
            closure.max((out.get(to.0, to.1) - out.get(m, n) - edge((m, n), to)).norm() / scale);
    }
    if !(closure <= tol::CLOSURE) {
        return Err(Error::ClosureFailure {
            what: "Goursat transform",
            residual: closure,
            tolerance: tol::CLOSURE,
        });
    }
    Ok(out)
}

/// Largest deviation of `g - f` from a constant, relative to the spread of `g`.
pub fn translation_residual(f: &AffineNet, g: &AffineNet) -> f64 {
    let vals = g.values.values();
    let n = vals.len() as f64;
    let diffs: Vec<Q> = f
        .values
        .values()
        .iter()
        .zip(vals)
        .map(|(&a, &b)| b - a)
        .collect();
    let mean = diffs.iter().fold(Q::ZERO, |s, &d| s + d) / n;
    let gm = vals.iter().fold(Q::ZERO, |s, &p| s + p) / n;
    let spread = vals.iter().fold(0.0f64, |m, &p| m.max((p - gm).norm()));
    diffs.iter().fold(0.0f64, |m, &d| m.max((d - mean).norm())) / spread
}
