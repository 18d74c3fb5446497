//! Rectangular windows of Z^2 containing the origin, and grids of values over them.

use crate::error::{Error, Result};
use crate::par::{self, Execution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridWindow {
    pub m_min: i32,
    pub m_max: i32,
    pub n_min: i32,
    pub n_max: i32,
}

impl GridWindow {
    pub fn new(m_min: i32, m_max: i32, n_min: i32, n_max: i32) -> Result<Self> {
        if !(m_min <= 0 && 0 <= m_max && n_min <= 0 && 0 <= n_max) {
            return Err(Error::InvalidWindow(format!(
                "[{m_min}, {m_max}] x [{n_min}, {n_max}] does not contain the origin"
            )));
        }
        if m_max - m_min < 1 || n_max - n_min < 1 {
            return Err(Error::InvalidWindow(format!(
                "[{m_min}, {m_max}] x [{n_min}, {n_max}] is smaller than 2x2"
            )));
        }
        Ok(GridWindow {
            m_min,
            m_max,
            n_min,
            n_max,
        })
    }

    /// `[-irg, irg] x [-jrg, jrg]`.
    pub fn symmetric(irg: i32, jrg: i32) -> Result<Self> {
        GridWindow::new(-irg, irg, -jrg, jrg)
    }

    pub fn rows(&self) -> usize {
        (self.m_max - self.m_min + 1) as usize
    }

    pub fn cols(&self) -> usize {
        (self.n_max - self.n_min + 1) as usize
    }

    pub fn len(&self) -> usize {
        self.rows() * self.cols()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, m: i32, n: i32) -> bool {
        self.m_min <= m && m <= self.m_max && self.n_min <= n && n <= self.n_max
    }

    /// Storage offset; `m` is the outer index.
    pub fn offset(&self, m: i32, n: i32) -> usize {
        debug_assert!(self.contains(m, n));
        (m - self.m_min) as usize * self.cols() + (n - self.n_min) as usize
    }

    pub fn index(&self, k: usize) -> (i32, i32) {
        let c = self.cols();
        (self.m_min + (k / c) as i32, self.n_min + (k % c) as i32)
    }

    pub fn indices(&self) -> impl Iterator<Item = (i32, i32)> + '_ {
        (self.m_min..=self.m_max).flat_map(move |m| (self.n_min..=self.n_max).map(move |n| (m, n)))
    }

    /// Lower-left corners of all elementary quadrilaterals.
    pub fn quads(&self) -> Vec<(i32, i32)> {
        (self.m_min..self.m_max)
            .flat_map(|m| (self.n_min..self.n_max).map(move |n| (m, n)))
            .collect()
    }

    /// All edges as `(m, n, direction)`; direction 1 steps m, 2 steps n.
    pub fn edges(&self) -> Vec<(i32, i32, u8)> {
        let mut out = Vec::new();
        for (m, n) in self.indices() {
            if m < self.m_max {
                out.push((m, n, 1));
            }
            if n < self.n_max {
                out.push((m, n, 2));
            }
        }
        out
    }

    /// Visiting order for center-out integration: each entry is a vertex and
    /// the already-visited neighbor it is reached from (`None` for the origin).
    ///
    /// The `n = 0` row is swept in both `m` directions first, then every column
    /// in both `n` directions.
    pub fn center_out_order(&self) -> Vec<((i32, i32), Option<(i32, i32)>)> {
        let mut out = Vec::with_capacity(self.len());
        out.push(((0, 0), None));
        for m in 1..=self.m_max {
            out.push(((m, 0), Some((m - 1, 0))));
        }
        for m in (self.m_min..0).rev() {
            out.push(((m, 0), Some((m + 1, 0))));
        }
        for m in self.m_min..=self.m_max {
            for n in 1..=self.n_max {
                out.push(((m, n), Some((m, n - 1))));
            }
            for n in (self.n_min..0).rev() {
                out.push(((m, n), Some((m, n + 1))));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    window: GridWindow,
    data: Vec<T>,
}

impl<T> Grid<T> {
    pub fn from_vec(window: GridWindow, data: Vec<T>) -> Result<Self> {
        if data.len() != window.len() {
            return Err(Error::WindowMismatch(format!(
                "{} values for a window of {} vertices",
                data.len(),
                window.len()
            )));
        }
        Ok(Grid { window, data })
    }

    pub fn from_fn(window: GridWindow, mut f: impl FnMut(i32, i32) -> T) -> Self {
        let data = window.indices().map(|(m, n)| f(m, n)).collect();
        Grid { window, data }
    }

    pub fn try_from_fn<E>(
        window: GridWindow,
        mut f: impl FnMut(i32, i32) -> std::result::Result<T, E>,
    ) -> std::result::Result<Self, E> {
        let data = window
            .indices()
            .map(|(m, n)| f(m, n))
            .collect::<std::result::Result<Vec<_>, E>>()?;
        Ok(Grid { window, data })
    }

    pub fn window(&self) -> GridWindow {
        self.window
    }

    pub fn get(&self, m: i32, n: i32) -> &T {
        &self.data[self.window.offset(m, n)]
    }

    pub fn try_get(&self, m: i32, n: i32) -> Option<&T> {
        self.window.contains(m, n).then(|| self.get(m, n))
    }

    pub fn set(&mut self, m: i32, n: i32, v: T) {
        let k = self.window.offset(m, n);
        self.data[k] = v;
    }

    pub fn values(&self) -> &[T] {
        &self.data
    }

    pub fn into_values(self) -> Vec<T> {
        self.data
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i32, i32), &T)> + '_ {
        self.window.indices().zip(self.data.iter())
    }

    pub fn map<R>(&self, mut f: impl FnMut(&T) -> R) -> Grid<R> {
        Grid {
            window: self.window,
            data: self.data.iter().map(&mut f).collect(),
        }
    }

    pub fn map_indexed<R>(&self, mut f: impl FnMut(i32, i32, &T) -> R) -> Grid<R> {
        Grid::from_fn(self.window, |m, n| f(m, n, self.get(m, n)))
    }

    pub fn try_map<R, E>(
        &self,
        mut f: impl FnMut(&T) -> std::result::Result<R, E>,
    ) -> std::result::Result<Grid<R>, E> {
        let data = self
            .data
            .iter()
            .map(&mut f)
            .collect::<std::result::Result<Vec<_>, E>>()?;
        Ok(Grid {
            window: self.window,
            data,
        })
    }
}

impl<T: Sync> Grid<T> {
    pub fn par_map<R: Send>(&self, exec: Execution, f: impl Fn(&T) -> R + Sync + Send) -> Grid<R> {
        Grid {
            window: self.window,
            data: par::map(exec, &self.data, f),
        }
    }
}

/// Integrates a discrete system center-out.
///
/// `step(value, from, to)` returns the value at `to` given the value at the
/// already-visited neighbor `from`.
pub fn integrate_center_out<T: Clone, E>(
    window: GridWindow,
    seed: T,
    mut step: impl FnMut(&T, (i32, i32), (i32, i32)) -> std::result::Result<T, E>,
) -> std::result::Result<Grid<T>, E> {
    let mut data: Vec<Option<T>> = vec![None; window.len()];
    for (to, from) in window.center_out_order() {
        let v = match from {
            None => seed.clone(),
            Some(fr) => {
                let prev = data[window.offset(fr.0, fr.1)].as_ref().expect("visited");
                step(prev, fr, to)?
            }
        };
        data[window.offset(to.0, to.1)] = Some(v);
    }
    Ok(Grid {
        window,
        data: data
            .into_iter()
            .map(|v| v.expect("all vertices visited"))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_validation() {
        assert!(GridWindow::new(1, 3, 0, 2).is_err());
        assert!(GridWindow::new(0, 0, -1, 1).is_err());
        let w = GridWindow::new(-2, 3, -1, 1).unwrap();
        assert_eq!(w.len(), 18);
        assert_eq!(w.quads().len(), 10);
        assert_eq!(w.edges().len(), 5 * 3 + 6 * 2);
        for k in 0..w.len() {
            let (m, n) = w.index(k);
            assert_eq!(w.offset(m, n), k);
        }
    }

    #[test]
    fn center_out_visits_everything_once() {
        let w = GridWindow::new(-3, 2, -2, 4).unwrap();
        let order = w.center_out_order();
        assert_eq!(order.len(), w.len());
        let mut seen = std::collections::HashSet::new();
        for (to, from) in order {
            if let Some(f) = from {
                assert!(seen.contains(&f));
                assert_eq!((to.0 - f.0).abs() + (to.1 - f.1).abs(), 1);
            }
            assert!(seen.insert(to));
        }
    }

    #[test]
    fn integrating_unit_steps_counts_distance() {
        let w = GridWindow::symmetric(3, 2).unwrap();
        let g = integrate_center_out::<i32, ()>(w, 0, |v, fr, to| {
            Ok(v + (to.0 - fr.0) + 10 * (to.1 - fr.1))
        })
        .unwrap();
        for ((m, n), v) in g.iter() {
            assert_eq!(*v, m + 10 * n);
        }
    }
}

/// Values attached to the elementary quadrilaterals of a window, indexed by
/// their lower-left vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct CellGrid<T> {
    window: GridWindow,
    data: Vec<T>,
}

impl<T> CellGrid<T> {
    pub fn from_fn(window: GridWindow, f: impl FnMut((i32, i32)) -> T) -> Self {
        CellGrid {
            window,
            data: window.quads().into_iter().map(f).collect(),
        }
    }

    pub fn from_vec(window: GridWindow, data: Vec<T>) -> Self {
        assert_eq!(data.len(), window.quads().len());
        CellGrid { window, data }
    }

    /// Vertex window the cells belong to.
    pub fn window(&self) -> GridWindow {
        self.window
    }

    pub fn get(&self, m: i32, n: i32) -> &T {
        let c = self.window.cols() - 1;
        &self.data[(m - self.window.m_min) as usize * c + (n - self.window.n_min) as usize]
    }

    pub fn values(&self) -> &[T] {
        &self.data
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i32, i32), &T)> + '_ {
        self.window.quads().into_iter().zip(self.data.iter())
    }

    pub fn map<R>(&self, f: impl FnMut(&T) -> R) -> CellGrid<R> {
        CellGrid {
            window: self.window,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Send> CellGrid<T> {
    pub fn par_from_fn(
        window: GridWindow,
        exec: Execution,
        f: impl Fn((i32, i32)) -> T + Sync + Send,
    ) -> Self {
        let quads = window.quads();
        CellGrid {
            window,
            data: par::map(exec, &quads, |&q| f(q)),
        }
    }
}
