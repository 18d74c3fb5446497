//! Invariant suites: each runs the checks belonging to one construction and
//! returns an [`InvariantReport`].

use crate::error::{Error, Result};
use crate::io::{Check, InvariantReport};
use crate::net::{
    classify, classify_projective, factorize_unchecked, AffineNet, CrossRatioFactorization,
    ProjectiveNet,
};
use crate::par::{self, Execution};
use crate::projective::{cross_ratio, AffineChart};
use crate::quaternion::{ImaginaryQuaternion, Quaternion as Q};
use crate::special::{
    bryant_cousin, ccousin_coords, ccousin_real_part, christoffel_identity_residual, dual_check,
    horospherical_from_gauss, poincare_ball, roundoff_tolerance, HolomorphicNet,
};
use crate::tol;
use crate::transforms::christoffel::{christoffel, dual_residuals, edge_labels};
use crate::transforms::darboux::ribaucour_residual;
use crate::transforms::permutability::permutability_suite;
use crate::transforms::ttransform::{frame_of, q_lambda_residual, t_group_check, t_transform};

/// Tolerance for the transformation laws checked pointwise.
pub const LAW: f64 = 1e-7;

fn labels_of(net: &ProjectiveNet, exec: Execution) -> Result<CrossRatioFactorization> {
    let c = classify_projective(net, exec);
    c.factorization
        .ok_or_else(|| Error::NotIsothermic(c.reasons.join("; ")))
}

/// Regularity, concircularity and factorization of the quad cross ratios.
pub fn isothermic(net: &AffineNet, exec: Execution) -> InvariantReport {
    let c = classify(net, exec);
    let mut r = InvariantReport::new("isothermic").param("window", format!("{:?}", net.window()));
    r.push(Check::single(
        "regular",
        if c.regular { 0.0 } else { f64::INFINITY },
        0.0,
    ));
    match net.quad_cross_ratios_raw(exec) {
        Ok(q) => {
            let im: Vec<f64> = q.values().iter().map(|q| q.im().norm()).collect();
            r.push(Check::from_values("principal |Im q|", &im, tol::PRINCIPAL));
            match factorize_unchecked(&q.map(|q| q.w)) {
                Ok(f) => {
                    let res: Vec<f64> = q
                        .iter()
                        .map(|((m, n), q)| (q.w - f.q(m, n)).abs() / q.w.abs())
                        .collect();
                    r.push(Check::from_values(
                        "factorization q = a/b",
                        &res,
                        tol::FACTOR,
                    ));
                    let w = net.window();
                    r = r
                        .param("a_0", f.a(0.min(w.m_max - 1)))
                        .param("b_0", f.b(0.min(w.n_max - 1)));
                }
                Err(_) => r.push(Check::single(
                    "factorization q = a/b",
                    f64::INFINITY,
                    tol::FACTOR,
                )),
            }
        }
        Err(_) => r.push(Check::single("cross ratios", f64::INFINITY, 0.0)),
    }
    r
}

/// The dual relations between `f` and `f*`, with labels read from the edges.
pub fn christoffel_pair(f: &AffineNet, f_star: &AffineNet, exec: Execution) -> InvariantReport {
    let mut r = isothermic(f, exec);
    r.suite = "christoffel".into();
    let labels = edge_labels(f, f_star);
    let d = dual_residuals(f, f_star, &labels, exec);
    r.push(Check::single(
        "dual relations",
        d.dual_relations,
        tol::CLOSURE,
    ));
    r.push(Check::single(
        "dual consequences",
        d.consequences,
        tol::CLOSURE,
    ));
    r.push(Check::single(
        "cross ratio vs edge products",
        d.cross_relation,
        tol::CLOSURE,
    ));
    r.push(Check::single("real edge labels", d.labels, tol::CLOSURE));
    r
}

/// Edge cross ratios `[f, f₊, f̂₊, f̂]` against `μ a`, `μ b` with `μ` estimated
/// on the first edge; returns `μ` and the per-edge deviations.
pub fn darboux_parameter_fit(
    f: &ProjectiveNet,
    hat: &ProjectiveNet,
    labels: &CrossRatioFactorization,
    exec: Execution,
) -> Result<(f64, Vec<f64>)> {
    let edges = f.window().edges();
    let edge_cross = |(m, n, d): (i32, i32, u8)| {
        let to = if d == 1 { (m + 1, n) } else { (m, n + 1) };
        cross_ratio(
            &f.get(m, n),
            &f.get(to.0, to.1),
            &hat.get(to.0, to.1),
            &hat.get(m, n),
        )
    };
    let (m0, n0, d0) = edges[0];
    let mu = edge_cross(edges[0])?.re / labels.label(d0, m0, n0);
    let dev = par::map(exec, &edges, |&(m, n, d)| match edge_cross((m, n, d)) {
        Ok(c) => (c.re - mu * labels.label(d, m, n)).abs().max(c.im),
        Err(_) => f64::INFINITY,
    });
    Ok((mu, dev))
}

/// Darboux pair `(f, f̂)`: edge cross ratios, Ribaucour spheres, preserved quad cross ratios.
pub fn darboux_pair(
    f: &ProjectiveNet,
    hat: &ProjectiveNet,
    exec: Execution,
) -> Result<InvariantReport> {
    let labels = labels_of(f, exec)?;
    let (mu, dev) = darboux_parameter_fit(f, hat, &labels, exec)?;
    let mut r = InvariantReport::new("darboux").param("fitted parameter", mu);
    r.push(Check::from_values(
        "edge cross ratios = mu a, mu b",
        &dev,
        tol::CLOSURE,
    ));
    r.push(Check::single(
        "Ribaucour two-spheres",
        ribaucour_residual(f, hat, exec),
        tol::CLOSURE,
    ));
    let (qf, qh) = (f.quad_cross_ratios(exec)?, hat.quad_cross_ratios(exec)?);
    let diff: Vec<f64> = qf
        .values()
        .iter()
        .zip(qh.values())
        .map(|(a, b)| a.dist(*b))
        .collect();
    r.push(Check::from_values(
        "quad cross ratios preserved",
        &diff,
        tol::CLOSURE,
    ));
    Ok(r)
}

/// System (T) at `λ` and the laws of the T-transformation; `against`, if
/// given, is compared with the computed `f^λ`.
pub fn t_laws(
    f: &ProjectiveNet,
    lambda: f64,
    against: Option<&ProjectiveNet>,
    exec: Execution,
) -> Result<InvariantReport> {
    let fact = labels_of(f, exec)?;
    let (conn, frame) = frame_of(f, &fact, lambda, exec)?;
    let f_lambda = t_transform(f, &frame)?;
    let mut r = InvariantReport::new("t-laws").param("lambda", lambda);
    r.push(Check::single(
        "T-system closure",
        frame.residual,
        tol::CLOSURE,
    ));
    r.push(Check::single(
        "fixed point of the connection",
        conn.fixed_point_residual(lambda, exec),
        tol::CLOSURE,
    ));
    r.push(Check::single(
        "Maurer-Cartan",
        conn.maurer_cartan_residual(lambda, exec),
        tol::CLOSURE,
    ));
    r.push(Check::single(
        "q^lambda formula",
        q_lambda_residual(&f_lambda, &fact, lambda, exec)?,
        tol::CLOSURE,
    ));
    let g = t_group_check(f, &conn, lambda, lambda, exec)?;
    r.push(Check::single("group law (composition)", g.composition, LAW));
    r.push(Check::single("group law (frames)", g.frames, LAW));
    r.push(Check::single("group law (inverse)", g.inverse, LAW));
    if let Some(a) = against {
        if a.window() != f.window() {
            return Err(Error::WindowMismatch(
                "--against net has a different window".into(),
            ));
        }
        r.push(Check::single(
            "against f^lambda",
            a.max_dist(&f_lambda),
            LAW,
        ));
    }
    Ok(r)
}

/// The permutability theorems around `f` at `λ`, `μ`.
pub fn permutability(
    f: &AffineNet,
    lambda: f64,
    mu: f64,
    exec: Execution,
) -> Result<InvariantReport> {
    let fact = classify(f, exec)
        .factorization
        .ok_or_else(|| Error::NotIsothermic("permutability needs an isothermic net".into()))?;
    let pair = christoffel(f, &fact, Q::ZERO)?;
    let (i1, i2) = (
        f.get(0, 0) + Q::new(0.3, 0.2, 0.5, -0.4),
        f.get(0, 0) + Q::new(-0.5, 1.0, 0.1, 0.2),
    );
    let rep = permutability_suite(&pair, lambda, mu, i1, i2, exec)?;
    let mut r = InvariantReport::new("permutability")
        .param("lambda", lambda)
        .param("mu", mu);
    for (name, v) in rep.entries() {
        r.push(Check::single(name, v, LAW));
    }
    Ok(r)
}

/// The horospherical pipeline from a holomorphic net `g` at `λ`: both
/// representations, their Darboux relations, duality and the ball model.
pub fn horospherical_pipeline(
    g: &HolomorphicNet,
    h: &HolomorphicNet,
    lambda: f64,
    exec: Execution,
) -> Result<InvariantReport> {
    let mut r = InvariantReport::new("horospherical").param("lambda", lambda);
    r.push(Check::single(
        "Christoffel pair identity",
        christoffel_identity_residual(g, h, exec),
        1e-9,
    ));
    let f = bryant_cousin(g, h, lambda, exec)?;
    let p0 = ImaginaryQuaternion::new(1.0, 0.0, 0.0);
    let sharp = horospherical_from_gauss(g, h, -lambda, p0, exec)?;
    r.push(Check::single(
        "H-system closure",
        f.frame.residual,
        tol::CLOSURE,
    ));
    r.push(Check::single(
        "Bryant net: Darboux relation",
        f.darboux_residual(exec),
        tol::CLOSURE,
    ));
    r.push(Check::single(
        "f#: Darboux relation",
        sharp.darboux_residual(exec),
        tol::CLOSURE,
    ));
    r.push(Check::single(
        "Gauss map on boundary",
        f.gauss_boundary_residual()
            .max(sharp.gauss_boundary_residual()),
        tol::CLOSURE,
    ));
    r.push(Check::at_least(
        "distance from boundary",
        f.boundary_margin().min(sharp.boundary_margin()),
        tol::BOUNDARY,
    ));
    let rec = f
        .recovered_gauss(exec)?
        .max_dist(&f.gauss)
        .max(sharp.recovered_gauss(exec)?.max_dist(&sharp.gauss));
    let chart = AffineChart::standard();
    let rec_tol = roundoff_tolerance(&f.surface.project(&chart)?)
        .max(roundoff_tolerance(&sharp.surface.project(&chart)?));
    r.push(Check::single(
        "Gauss map recovered by Darboux",
        rec,
        rec_tol,
    ));
    r.push(Check::single(
        "dual Gauss maps",
        dual_check(&sharp, &f, exec)?.max(),
        tol::CLOSURE,
    ));
    let cc = ccousin_coords(&f.frame)?;
    let surf = f.surface.project(&AffineChart::standard())?;
    let model = cc.iter().fold(0.0f64, |m, ((a, b), p)| {
        m.max((Q::from(*p) - surf.get(a, b)).norm())
    });
    r.push(Check::single(
        "hyperbolic-model coordinates",
        model.max(ccousin_real_part(&f.frame)),
        tol::CLOSURE,
    ));
    let ball = poincare_ball(&cc)?;
    let radius = ball.values().iter().fold(0.0f64, |m, p| m.max(p.norm()));
    r.push(Check::at_least("ball margin 1 - |x|", 1.0 - radius, 0.0));
    Ok(r)
}

/// A given horospherical net `f` with its hyperbolic Gauss map `n`.
pub fn horospherical_pair(
    f: &ProjectiveNet,
    n: &ProjectiveNet,
    exec: Execution,
) -> Result<InvariantReport> {
    let mut r = darboux_pair(n, f, exec)?;
    r.suite = "horospherical".into();
    let bd = |p: &crate::HPoint| crate::special::boundary_distance(p);
    let on = n.values.values().iter().fold(0.0f64, |m, p| m.max(bd(p)));
    let off = f
        .values
        .values()
        .iter()
        .fold(f64::INFINITY, |m, p| m.min(bd(p)));
    let real = f
        .values
        .values()
        .iter()
        .fold(0.0f64, |m, p| m.max(p.sphere_coords()[0].abs()));
    r.push(Check::single("Gauss map on boundary", on, tol::CLOSURE));
    r.push(Check::single("surface in Im H", real, tol::CLOSURE));
    r.push(Check::at_least(
        "distance from boundary",
        off,
        tol::BOUNDARY,
    ));
    Ok(r)
}
