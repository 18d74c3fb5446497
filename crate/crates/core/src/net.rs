//! Discrete nets, their edge differences, quad cross ratios, and the
//! regular / principal / isothermic classification.

use crate::error::{Error, Result};
use crate::grid::{CellGrid, Grid, GridWindow};
use crate::par::Execution;
use crate::projective::{
    cross_ratio_affine, cross_ratio_quaternion, stereo_project, AffineChart, HPoint,
    NormalizedCrossRatio,
};
use crate::quaternion::Quaternion as Q;
use crate::tol;

/// A net given by its stereographic projection in some chart.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineNet {
    pub values: Grid<Q>,
    pub chart: AffineChart,
}

impl AffineNet {
    pub fn new(values: Grid<Q>) -> Self {
        AffineNet {
            values,
            chart: AffineChart::standard(),
        }
    }

    pub fn with_chart(values: Grid<Q>, chart: AffineChart) -> Self {
        AffineNet { values, chart }
    }

    pub fn from_fn(window: GridWindow, f: impl FnMut(i32, i32) -> Q) -> Self {
        AffineNet::new(Grid::from_fn(window, f))
    }

    pub fn window(&self) -> GridWindow {
        self.values.window()
    }

    pub fn get(&self, m: i32, n: i32) -> Q {
        *self.values.get(m, n)
    }

    /// Lift through the chart.
    pub fn to_projective(&self) -> ProjectiveNet {
        ProjectiveNet {
            values: self.values.map(|&p| self.chart.point(p)),
        }
    }

    pub fn quad_cross_ratios_raw(&self, exec: Execution) -> Result<CellGrid<Q>> {
        let w = self.window();
        let cells = CellGrid::par_from_fn(w, exec, |(m, n)| {
            cross_ratio_affine(
                self.get(m, n),
                self.get(m + 1, n),
                self.get(m + 1, n + 1),
                self.get(m, n + 1),
            )
            .map_err(|_| Error::DegenerateQuad { m, n })
        });
        collect_cells(cells)
    }

    pub fn quad_cross_ratios(&self, exec: Execution) -> Result<CellGrid<NormalizedCrossRatio>> {
        Ok(self
            .quad_cross_ratios_raw(exec)?
            .map(|&q| NormalizedCrossRatio::from_quaternion(q)))
    }

    pub fn translated(&self, t: Q) -> AffineNet {
        AffineNet::with_chart(self.values.map(|&p| p + t), self.chart)
    }

    pub fn scaled(&self, s: f64) -> AffineNet {
        AffineNet::with_chart(self.values.map(|&p| p * s), self.chart)
    }
}

fn collect_cells<T: Clone>(cells: CellGrid<Result<T>>) -> Result<CellGrid<T>> {
    let w = cells.window();
    let mut out = Vec::with_capacity(cells.values().len());
    for v in cells.values() {
        out.push(v.clone()?);
    }
    Ok(CellGrid::from_vec(w, out))
}

/// A net in HP^1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveNet {
    pub values: Grid<HPoint>,
}

impl ProjectiveNet {
    pub fn new(values: Grid<HPoint>) -> Self {
        ProjectiveNet { values }
    }

    pub fn window(&self) -> GridWindow {
        self.values.window()
    }

    pub fn get(&self, m: i32, n: i32) -> HPoint {
        *self.values.get(m, n)
    }

    pub fn project(&self, chart: &AffineChart) -> Result<AffineNet> {
        let values = self.values.try_map(|p| stereo_project(chart, p))?;
        Ok(AffineNet::with_chart(values, *chart))
    }

    pub fn quad_cross_ratios_raw(&self, exec: Execution) -> Result<CellGrid<Q>> {
        let cells = CellGrid::par_from_fn(self.window(), exec, |(m, n)| {
            cross_ratio_quaternion(
                &self.get(m, n),
                &self.get(m + 1, n),
                &self.get(m + 1, n + 1),
                &self.get(m, n + 1),
            )
            .map_err(|_| Error::DegenerateQuad { m, n })
        });
        collect_cells(cells)
    }

    pub fn quad_cross_ratios(&self, exec: Execution) -> Result<CellGrid<NormalizedCrossRatio>> {
        Ok(self
            .quad_cross_ratios_raw(exec)?
            .map(|&q| NormalizedCrossRatio::from_quaternion(q)))
    }

    /// Largest pointwise chordal distance to another net on the same window.
    pub fn max_dist(&self, o: &ProjectiveNet) -> f64 {
        self.values
            .values()
            .iter()
            .zip(o.values.values())
            .fold(0.0, |m, (a, b)| m.max(a.dist(b)))
    }
}

/// Forward differences `(∂1 f)_{m,n}` and `(∂2 f)_{m,n}`; entries on the last
/// row/column of the respective direction are zero.
pub fn edge_differences(net: &AffineNet) -> (Grid<Q>, Grid<Q>) {
    let w = net.window();
    let d1 = Grid::from_fn(w, |m, n| {
        if m < w.m_max {
            net.get(m + 1, n) - net.get(m, n)
        } else {
            Q::ZERO
        }
    });
    let d2 = Grid::from_fn(w, |m, n| {
        if n < w.n_max {
            net.get(m, n + 1) - net.get(m, n)
        } else {
            Q::ZERO
        }
    });
    (d1, d2)
}

/// Real edge labels with `q_{m,n} = a_m / b_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossRatioFactorization {
    pub m_min: i32,
    pub a: Vec<f64>,
    pub n_min: i32,
    pub b: Vec<f64>,
    pub residual: f64,
}

impl CrossRatioFactorization {
    /// Labels for every edge of `window`.
    pub fn from_fns(window: GridWindow, a: impl Fn(i32) -> f64, b: impl Fn(i32) -> f64) -> Self {
        CrossRatioFactorization {
            m_min: window.m_min,
            a: (window.m_min..window.m_max).map(a).collect(),
            n_min: window.n_min,
            b: (window.n_min..window.n_max).map(b).collect(),
            residual: 0.0,
        }
    }

    pub fn a(&self, m: i32) -> f64 {
        self.a[(m - self.m_min) as usize]
    }

    pub fn b(&self, n: i32) -> f64 {
        self.b[(n - self.n_min) as usize]
    }

    /// Label of the edge starting at `(m, n)` in `direction`.
    pub fn label(&self, direction: u8, m: i32, n: i32) -> f64 {
        if direction == 1 {
            self.a(m)
        } else {
            self.b(n)
        }
    }

    pub fn q(&self, m: i32, n: i32) -> f64 {
        self.a(m) / self.b(n)
    }

    /// Labels of a T-transform: `a / (1 - λa)`, `b / (1 - λb)`.
    pub fn t_transformed(&self, lambda: f64) -> Self {
        CrossRatioFactorization {
            m_min: self.m_min,
            a: self.a.iter().map(|&a| a / (1.0 - lambda * a)).collect(),
            n_min: self.n_min,
            b: self.b.iter().map(|&b| b / (1.0 - lambda * b)).collect(),
            residual: self.residual,
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        CrossRatioFactorization {
            m_min: self.m_min,
            a: self.a.iter().map(|a| a * c).collect(),
            n_min: self.n_min,
            b: self.b.iter().map(|b| b * c).collect(),
            residual: self.residual,
        }
    }

    /// Checks `|1 - λa_m|`, `|1 - λb_n|` against the singularity margin.
    pub fn check_lambda(&self, lambda: f64) -> Result<()> {
        for (k, &a) in self.a.iter().enumerate() {
            let gap = (1.0 - lambda * a).abs();
            if gap < tol::LAMBDA_MARGIN {
                return Err(Error::SingularLambda {
                    direction: 1,
                    index: self.m_min + k as i32,
                    gap,
                });
            }
        }
        for (k, &b) in self.b.iter().enumerate() {
            let gap = (1.0 - lambda * b).abs();
            if gap < tol::LAMBDA_MARGIN {
                return Err(Error::SingularLambda {
                    direction: 2,
                    index: self.n_min + k as i32,
                    gap,
                });
            }
        }
        Ok(())
    }
}

/// Factors real cross ratios as `a_m / b_n`, normalized by `b = -1` on the
/// reference row through the origin.
pub fn factorize_cross_ratios(q: &CellGrid<f64>) -> Result<CrossRatioFactorization> {
    let fact = factorize_unchecked(q)?;
    if !(fact.residual <= tol::FACTOR) {
        return Err(Error::NotFactorizable {
            residual: fact.residual,
        });
    }
    Ok(fact)
}

/// Like [`factorize_cross_ratios`] but returns the labels whatever the residual.
pub fn factorize_unchecked(q: &CellGrid<f64>) -> Result<CrossRatioFactorization> {
    let w = q.window();
    let m0 = 0.min(w.m_max - 1);
    let n0 = 0.min(w.n_max - 1);
    let b0 = -1.0;
    let a: Vec<f64> = (w.m_min..w.m_max).map(|m| q.get(m, n0) * b0).collect();
    let am0 = a[(m0 - w.m_min) as usize];
    let mut b = Vec::new();
    for n in w.n_min..w.n_max {
        let qq = *q.get(m0, n);
        if qq == 0.0 || !qq.is_finite() {
            return Err(Error::DegenerateQuad { m: m0, n });
        }
        b.push(am0 / qq);
    }
    let mut fact = CrossRatioFactorization {
        m_min: w.m_min,
        a,
        n_min: w.n_min,
        b,
        residual: 0.0,
    };
    let mut res: f64 = 0.0;
    for ((m, n), &qq) in q.iter() {
        let r = (qq - fact.q(m, n)).abs() / qq.abs();
        res = if r.is_nan() {
            f64::INFINITY
        } else {
            res.max(r)
        };
    }
    fact.residual = res;
    Ok(fact)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub regular: bool,
    pub principal: bool,
    pub isothermic: bool,
    /// Largest `|Im q|` over all quads.
    pub max_imaginary: f64,
    pub factor_residual: Option<f64>,
    pub factorization: Option<CrossRatioFactorization>,
    pub reasons: Vec<String>,
}

/// First vertex where the net fails to be regular, if any.
pub fn regularity_defect(net: &AffineNet) -> Option<(i32, i32, &'static str)> {
    let w = net.window();
    for m in w.m_min..w.m_max {
        for n in w.n_min..w.n_max {
            let f = net.get(m, n);
            let d1 = net.get(m + 1, n) - f;
            let d2 = net.get(m, n + 1) - f;
            let scale = f.norm().max(1.0);
            if d1.norm() <= tol::EPS_ZERO * scale {
                return Some((m, n, "vanishing difference in direction 1"));
            }
            if d2.norm() <= tol::EPS_ZERO * scale {
                return Some((m, n, "vanishing difference in direction 2"));
            }
            let r = d2 * d1.inv().expect("nonzero");
            if r.im().norm() <= tol::PRINCIPAL * r.norm() {
                return Some((m, n, "parallel edge differences"));
            }
        }
    }
    None
}

fn classify_from(
    regular: Option<(i32, i32, &'static str)>,
    q: Result<CellGrid<Q>>,
) -> Classification {
    let mut reasons = Vec::new();
    if let Some((m, n, why)) = regular {
        reasons.push(format!("not regular at ({m}, {n}): {why}"));
    }
    let q = match q {
        Ok(q) => q,
        Err(e) => {
            reasons.push(e.to_string());
            return Classification {
                regular: false,
                principal: false,
                isothermic: false,
                max_imaginary: f64::INFINITY,
                factor_residual: None,
                factorization: None,
                reasons,
            };
        }
    };
    let max_imaginary = q.values().iter().fold(0.0f64, |m, q| m.max(q.im().norm()));
    let principal = regular.is_none() && max_imaginary < tol::PRINCIPAL;
    if max_imaginary >= tol::PRINCIPAL {
        reasons.push(format!(
            "quads not concircular: max |Im q| = {max_imaginary:e}"
        ));
    }
    let (factor_residual, factorization) = match factorize_unchecked(&q.map(|q| q.w)) {
        Ok(f) => (Some(f.residual), Some(f)),
        Err(e) => {
            reasons.push(e.to_string());
            (None, None)
        }
    };
    let isothermic = principal && factor_residual.is_some_and(|r| r <= tol::FACTOR);
    if principal && !isothermic {
        if let Some(r) = factor_residual {
            reasons.push(format!("cross ratios do not factor: residual {r:e}"));
        }
    }
    Classification {
        regular: regular.is_none(),
        principal,
        isothermic,
        max_imaginary,
        factor_residual,
        factorization: if isothermic { factorization } else { None },
        reasons,
    }
}

pub fn classify(net: &AffineNet, exec: Execution) -> Classification {
    classify_from(regularity_defect(net), net.quad_cross_ratios_raw(exec))
}

/// Classification of a projective net; regularity is tested in the standard
/// chart when possible.
pub fn classify_projective(net: &ProjectiveNet, exec: Execution) -> Classification {
    let defect = match net.project(&AffineChart::standard()) {
        Ok(a) => regularity_defect(&a),
        Err(_) => None,
    };
    classify_from(defect, net.quad_cross_ratios_raw(exec))
}

/// The factorization of an isothermic net, or the reason it has none.
pub fn isothermic_factorization(
    net: &AffineNet,
    exec: Execution,
) -> Result<CrossRatioFactorization> {
    let c = classify(net, exec);
    match c.factorization {
        Some(f) => Ok(f),
        None => {
            if let (true, Some(r)) = (c.principal, c.factor_residual) {
                Err(Error::NotFactorizable { residual: r })
            } else {
                Err(Error::NotIsothermic(c.reasons.join("; ")))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn planar(w: GridWindow) -> AffineNet {
        AffineNet::from_fn(w, |m, n| Q::new(m as f64, n as f64, 0.0, 0.0))
    }

    #[test]
    fn planar_grid_is_isothermic() {
        let w = GridWindow::symmetric(3, 2).unwrap();
        let net = planar(w);
        let (d1, d2) = edge_differences(&net);
        assert_eq!(*d1.get(0, 0), Q::ONE);
        assert_eq!(*d2.get(-3, 1), Q::I);
        let c = classify(&net, Execution::Sequential);
        assert!(c.regular && c.principal && c.isothermic, "{:?}", c.reasons);
        let f = c.factorization.unwrap();
        assert!(f.a.iter().all(|&a| (a - 1.0).abs() < 1e-15));
        assert!(f.b.iter().all(|&b| (b + 1.0).abs() < 1e-15));
    }

    #[test]
    fn constant_net_is_not_regular() {
        let w = GridWindow::symmetric(1, 1).unwrap();
        let net = AffineNet::from_fn(w, |_, _| Q::J);
        let c = classify(&net, Execution::Sequential);
        assert!(!c.regular && !c.isothermic);
    }

    #[test]
    fn displaced_vertex_breaks_principality() {
        let w = GridWindow::symmetric(2, 2).unwrap();
        let mut net = planar(w);
        net.values.set(1, 1, Q::new(1.0, 1.0, 0.2, 0.0));
        let c = classify(&net, Execution::Sequential);
        assert!(c.regular && !c.principal);
    }

    #[test]
    fn factorization_normalizes_at_origin_row() {
        let w = GridWindow::new(-1, 2, -2, 1).unwrap();
        let q = CellGrid::from_fn(w, |(m, n)| -((m + 3) as f64) / ((n + 4) as f64));
        let f = factorize_cross_ratios(&q).unwrap();
        assert_eq!(f.b(0), -1.0);
        assert!(f.residual < 1e-15);
        for ((m, n), &v) in q.iter() {
            assert!((f.q(m, n) - v).abs() < 1e-14);
        }
    }

    #[test]
    fn singular_lambda_names_index() {
        let w = GridWindow::symmetric(2, 2).unwrap();
        let f = CrossRatioFactorization::from_fns(w, |m| 1.0 + m as f64 * 0.5, |_| -1.0);
        match f.check_lambda(1.0 / 1.5) {
            Err(Error::SingularLambda {
                direction: 1,
                index: 1,
                ..
            }) => {}
            other => panic!("{other:?}"),
        }
        assert!(f.check_lambda(0.1).is_ok());
    }
}
