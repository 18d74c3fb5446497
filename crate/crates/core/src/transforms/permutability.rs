//! Numerical verification of the permutability theorems between the
//! Christoffel, Darboux and T-transformations, using the explicit gauges.

use crate::error::Result;
use crate::grid::Grid;
use crate::net::{AffineNet, ProjectiveNet};
use crate::par::Execution;
use crate::projective::{annihilator, AffineChart, HPoint, HVector, QuatMatrix2};
use crate::quaternion::Quaternion as Q;

use super::christoffel::{christoffel, ChristoffelPair};
use super::connection::build_connection;
use super::darboux::{cd_permute, darboux_riccati, edge_cross_ratio_residual};
use super::goursat::{goursat, translation_residual};
use super::ttransform::{frame_edge_residual, frame_of, integrate_T, TTransformFrame};

/// `v∞ν∞ + λ (v0 + v∞ f)(ν0 - f* ν∞)` at every vertex.
pub fn dual_gauge(pair: &ChristoffelPair, lambda: f64) -> Grid<QuatMatrix2> {
    let c = pair.f.chart;
    Grid::from_fn(pair.f.window(), |m, n| {
        c.vinf.outer(c.nuinf)
            + c.lift(pair.f.get(m, n))
                .outer(c.colift(pair.f_star.get(m, n)))
                .scale_real(lambda)
    })
}

/// `(T*)^λ = T^λ (v∞ν∞ + λ (v0 + v∞ f)(ν0 - f* ν∞))`.
pub fn dual_frame(pair: &ChristoffelPair, frame: &TTransformFrame) -> Grid<QuatMatrix2> {
    let g = dual_gauge(pair, frame.lambda);
    Grid::from_fn(frame.values.window(), |m, n| {
        (frame.get(m, n) * *g.get(m, n)).normalized()
    })
}

fn apply_frames(frames: &Grid<QuatMatrix2>, pts: &Grid<HVector>) -> Result<ProjectiveNet> {
    Ok(ProjectiveNet::new(Grid::try_from_fn(
        frames.window(),
        |m, n| HPoint::new(frames.get(m, n).apply(*pts.get(m, n))),
    )?))
}

fn lifts(net: &AffineNet) -> Grid<HVector> {
    net.values.map(|&p| net.chart.lift(p))
}

/// Edge residual of a frame field against the T-system of `pair.f` at `λ`.
fn t_system_residual(
    frames: &Grid<QuatMatrix2>,
    pair: &ChristoffelPair,
    lambda: f64,
    exec: Execution,
) -> f64 {
    let conn = build_connection(pair);
    frame_edge_residual(frames, |d, m, n| conn.step(d, m, n, lambda), exec)
}

/// Christoffel pair of the Darboux transform `f̂`, in the standard chart.
fn hat_pair(hat: &ProjectiveNet, pair: &ChristoffelPair) -> Result<ChristoffelPair> {
    let affine = hat.project(&AffineChart::standard())?;
    christoffel(&affine, &pair.factorization, Q::ZERO)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PermutabilityReport {
    /// `(T*)^λ f*` against `T^λ v∞`.
    pub tc_common_point: f64,
    /// Edge cross ratios of `T^λ f`, `(T*)^λ f*` against `-λ a^λ`.
    pub tc_darboux: f64,
    /// `(T*)^λ` against the T-system of `f*`.
    pub tc_dual_frame: f64,
    /// `T̂^λ f̂` against `v0 + v∞ f'*` after positioning `T^λ f̂` at `v∞`.
    pub ct_christoffel: f64,
    /// `T̂^λ` against the T-system of `f̂`.
    pub ct_frame: f64,
    /// Edge cross ratios of `T^μ f`, `T̂^μ f̂` against `(λ-μ) a^μ`.
    pub tmu_darboux: f64,
    /// `T̂^μ` against the T-system of `f̂` at `μ`.
    pub tmu_frame: f64,
    /// `T^λ f̂` against `(T*)^λ f̂*` (common vertex of the cube).
    pub cube_common_point: f64,
    /// Edge cross ratios of `T̂^λ f̂`, `(T̂*)^λ f̂*` against `-λ a^λ`.
    pub cube_darboux: f64,
    /// Positioned duals of two Darboux transforms against a Goursat transform.
    pub goursat_difference: f64,
}

impl PermutabilityReport {
    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("tc_common_point", self.tc_common_point),
            ("tc_darboux", self.tc_darboux),
            ("tc_dual_frame", self.tc_dual_frame),
            ("ct_christoffel", self.ct_christoffel),
            ("ct_frame", self.ct_frame),
            ("tmu_darboux", self.tmu_darboux),
            ("tmu_frame", self.tmu_frame),
            ("cube_common_point", self.cube_common_point),
            ("cube_darboux", self.cube_darboux),
            ("goursat_difference", self.goursat_difference),
        ]
    }

    pub fn max(&self) -> f64 {
        self.entries().iter().fold(0.0, |m, (_, v)| m.max(*v))
    }
}

/// Result of positioning a Darboux pair so that it projects to a Christoffel pair.
struct Positioned {
    /// Its Christoffel transform with labels `a^λ`, `b^λ`.
    pair: ChristoffelPair,
    /// `T̂^λ = ((X*)^{-λ})^{-1} M`.
    hat_frame: Grid<QuatMatrix2>,
    chart: AffineChart,
}

/// Positions `T^λ f̂ ≡ const` at `v∞` and builds `T̂^λ` with `T̂^λ f̂ = v0 + v∞ f'*`.
fn position(
    f: &ProjectiveNet,
    hat: &ProjectiveNet,
    frame: &TTransformFrame,
    pair: &ChristoffelPair,
    exec: Execution,
) -> Result<Positioned> {
    let lambda = frame.lambda;
    let p = frame.get(0, 0).apply(hat.get(0, 0).rep()).normalized();
    let other = if p.upper.norm() >= p.lower.norm() {
        HVector::new(Q::ZERO, Q::ONE)
    } else {
        HVector::new(Q::ONE, Q::ZERO)
    };
    // chart with ∞ at P; M maps it to the standard chart
    let chart = AffineChart::from_points(other, p)?;
    let m_inv = chart.matrix();
    let m = m_inv.inverse()?;
    let w = f.window();
    let std = AffineChart::standard();
    let moved = Grid::try_from_fn(w, |i, j| {
        HPoint::new((m * frame.get(i, j)).apply(f.get(i, j).rep()))
    })?;
    let fprime = ProjectiveNet::new(moved).project(&std)?;
    let fact = pair.factorization.t_transformed(lambda);
    let ppair = christoffel(&fprime, &fact, Q::ZERO)?;
    let (_, x) = frame_of(&ppair.f.to_projective(), &fact, -lambda, exec)?;
    let xstar = dual_frame(&ppair, &x);
    let hat_frame = Grid::try_from_fn(w, |i, j| {
        Ok::<_, crate::Error>((xstar.get(i, j).inverse()? * m).normalized())
    })?;
    Ok(Positioned {
        pair: ppair,
        hat_frame,
        chart: AffineChart::from_matrix(&m_inv)?,
    })
}

/// Runs every permutability check for the pair at parameters `λ`, `μ`, using
/// Darboux transforms from the initial points `init1`, `init2`.
pub fn permutability_suite(
    pair: &ChristoffelPair,
    lambda: f64,
    mu: f64,
    init1: Q,
    init2: Q,
    exec: Execution,
) -> Result<PermutabilityReport> {
    let conn = build_connection(pair);
    let fact = &pair.factorization;
    let f = pair.f.to_projective();
    let t = integrate_T(&conn, lambda, exec)?;
    let c = pair.f.chart;
    let w = f.window();

    // T^λ C = D_{-λ} T^λ
    let tstar = dual_frame(pair, &t);
    let f_lambda = apply_frames(&t.values, &lifts(&pair.f))?;
    let at_inf = apply_frames(&t.values, &Grid::from_fn(w, |_, _| c.vinf))?;
    let dual_image = apply_frames(&tstar, &lifts(&pair.f_star))?;
    let tc_common_point = dual_image.max_dist(&at_inf);
    let fact_l = fact.t_transformed(lambda);
    let tc_darboux = edge_cross_ratio_residual(&f_lambda, &dual_image, &fact_l, -lambda, exec);
    let tc_dual_frame = t_system_residual(&tstar, &pair.swapped(), lambda, exec);

    // C T^λ = T^λ D_λ
    let hat1 = darboux_riccati(pair, lambda, init1, exec)?;
    let pos1 = position(&f, &hat1.hat, &t, pair, exec)?;
    let hat_image = ProjectiveNet::new(Grid::try_from_fn(w, |i, j| {
        HPoint::new(pos1.hat_frame.get(i, j).apply(hat1.hat.get(i, j).rep()))
    })?);
    let target = pos1.pair.f_star.to_projective();
    let ct_christoffel = hat_image.max_dist(&target);
    let hpair = hat_pair(&hat1.hat, pair)?;
    let ct_frame = t_system_residual(&pos1.hat_frame, &hpair, lambda, exec);

    // T^μ D_λ = D_{λ-μ} T^μ
    let tm = integrate_T(&conn, mu, exec)?;
    let lifted = lifts(&pair.f);
    let hat_mu_frame = Grid::try_from_fn(w, |i, j| {
        let fv = *lifted.get(i, j);
        let phi = annihilator(&hat1.hat.get(i, j))?;
        let k = phi.apply(fv).inv()?;
        let g = QuatMatrix2::IDENTITY - fv.outer(phi.scale(k)).scale_real(mu / lambda);
        Ok::<_, crate::Error>((tm.get(i, j) * g).normalized())
    })?;
    let f_mu = apply_frames(&tm.values, &lifted)?;
    let hat_mu = ProjectiveNet::new(Grid::try_from_fn(w, |i, j| {
        HPoint::new(hat_mu_frame.get(i, j).apply(hat1.hat.get(i, j).rep()))
    })?);
    let tmu_darboux =
        edge_cross_ratio_residual(&f_mu, &hat_mu, &fact.t_transformed(mu), lambda - mu, exec);
    let tmu_frame = t_system_residual(&hat_mu_frame, &hpair, mu, exec);

    // the cube: C-D permutability carried along by T^λ
    let hat_aff = hat1.hat.project(&c)?;
    let hat_star = cd_permute(pair, &hat_aff, lambda)?;
    let via_f = apply_frames(&t.values, &lifts(&hat_aff))?;
    let via_star = apply_frames(&tstar, &lifts(&hat_star.f_star))?;
    let cube_common_point = via_f.max_dist(&via_star);
    let hat_star_frame = {
        let g = dual_gauge(&hat_star, lambda);
        Grid::from_fn(w, |i, j| {
            (*pos1.hat_frame.get(i, j) * *g.get(i, j)).normalized()
        })
    };
    let hat_dual_image = apply_frames(&hat_star_frame, &lifts(&hat_star.f_star))?;
    let cube_darboux =
        edge_cross_ratio_residual(&hat_image, &hat_dual_image, &fact_l, -lambda, exec);

    // two Darboux transforms differ by a Goursat transform
    let hat2 = darboux_riccati(pair, lambda, init2, exec)?;
    let pos2 = position(&f, &hat2.hat, &t, pair, exec)?;
    let star1 = AffineNet::with_chart(pos1.pair.f_star.values.clone(), pos1.chart);
    let moved = goursat(&star1, &pos2.chart, &f_lambda)?;
    let goursat_difference = translation_residual(&pos2.pair.f_star, &moved);

    Ok(PermutabilityReport {
        tc_common_point,
        tc_darboux,
        tc_dual_frame,
        ct_christoffel,
        ct_frame,
        tmu_darboux,
        tmu_frame,
        cube_common_point,
        cube_darboux,
        goursat_difference,
    })
}
