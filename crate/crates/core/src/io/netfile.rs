//! The `isonet` text format.
//!
//! ```text
//! isonet 1
//! kind affine-quaternion
//! window -2 2 -1 1
//! chart 1 0 0 0  0 0 0 0  0 0 0 0  1 0 0 0
//! meta lambda 0.25
//! data
//! -2 -1 0.5 0 0 0
//! ...
//! ```
//!
//! Data lines carry `m n` followed by the components of the value, ordered
//! with `m` outer. Numbers are written as shortest round-trip decimals.
//! `chart` (optional) lists the entries `a11 a12 a21 a22` of the chart
//! matrix `[v∞ | v0]`, four components each.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{Grid, GridWindow};
use crate::net::{AffineNet, ProjectiveNet};
use crate::projective::{AffineChart, HPoint, HVector, QuatMatrix2};
use crate::quaternion::{ComplexScalar, ImaginaryQuaternion, Quaternion as Q};
use crate::special::HolomorphicNet;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetKind {
    AffineQuaternion,
    Projective,
    Complex,
    Imaginary,
    Real,
}

impl NetKind {
    pub fn arity(self) -> usize {
        match self {
            NetKind::AffineQuaternion => 4,
            NetKind::Projective => 8,
            NetKind::Complex => 2,
            NetKind::Imaginary => 3,
            NetKind::Real => 1,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            NetKind::AffineQuaternion => "affine-quaternion",
            NetKind::Projective => "projective",
            NetKind::Complex => "complex",
            NetKind::Imaginary => "imaginary",
            NetKind::Real => "real",
        }
    }
}

impl FromStr for NetKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "affine-quaternion" => NetKind::AffineQuaternion,
            "projective" => NetKind::Projective,
            "complex" => NetKind::Complex,
            "imaginary" => NetKind::Imaginary,
            "real" => NetKind::Real,
            _ => return Err(Error::KindMismatch(format!("unknown kind `{s}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NetFile {
    pub kind: NetKind,
    pub window: GridWindow,
    /// `window.len() * kind.arity()` numbers, vertex by vertex.
    pub values: Vec<f64>,
    pub chart: Option<[f64; 16]>,
    pub meta: BTreeMap<String, String>,
}

fn quats(c: &[f64]) -> impl Iterator<Item = Q> + '_ {
    c.chunks(4).map(|q| Q::new(q[0], q[1], q[2], q[3]))
}

impl NetFile {
    pub fn new(kind: NetKind, window: GridWindow, values: Vec<f64>) -> Result<Self> {
        if values.len() != window.len() * kind.arity() {
            return Err(Error::KindMismatch(format!(
                "{} values for {} vertices of kind {}",
                values.len(),
                window.len(),
                kind.tag()
            )));
        }
        Ok(NetFile {
            kind,
            window,
            values,
            chart: None,
            meta: BTreeMap::new(),
        })
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.insert(key.to_string(), value.to_string());
        self
    }

    pub fn vertex(&self, m: i32, n: i32) -> &[f64] {
        let k = self.kind.arity();
        let o = self.window.offset(m, n) * k;
        &self.values[o..o + k]
    }

    pub fn from_affine(net: &AffineNet) -> Self {
        let values = net
            .values
            .values()
            .iter()
            .flat_map(|q| q.to_array())
            .collect();
        let mut file =
            NetFile::new(NetKind::AffineQuaternion, net.window(), values).expect("arity");
        if net.chart != AffineChart::standard() {
            let e = net.chart.matrix().entries();
            let mut c = [0.0; 16];
            for (k, q) in e.iter().enumerate() {
                c[4 * k..4 * k + 4].copy_from_slice(&q.to_array());
            }
            file.chart = Some(c);
        }
        file
    }

    pub fn from_projective(net: &ProjectiveNet) -> Self {
        let values = net
            .values
            .values()
            .iter()
            .flat_map(|p| {
                let r = p.rep();
                r.upper.to_array().into_iter().chain(r.lower.to_array())
            })
            .collect();
        NetFile::new(NetKind::Projective, net.window(), values).expect("arity")
    }

    pub fn from_holomorphic(net: &HolomorphicNet) -> Self {
        let values = net
            .values
            .values()
            .iter()
            .flat_map(|z| [z.re, z.im])
            .collect();
        NetFile::new(NetKind::Complex, net.window(), values).expect("arity")
    }

    pub fn from_imaginary(points: &Grid<ImaginaryQuaternion>) -> Self {
        let values = points.values().iter().flat_map(|p| p.to_array()).collect();
        NetFile::new(NetKind::Imaginary, points.window(), values).expect("arity")
    }

    pub fn from_real(values: &Grid<f64>) -> Self {
        NetFile::new(NetKind::Real, values.window(), values.values().to_vec()).expect("arity")
    }

    pub fn chart(&self) -> Result<AffineChart> {
        match &self.chart {
            None => Ok(AffineChart::standard()),
            Some(c) => {
                let e: Vec<Q> = quats(c).collect();
                AffineChart::from_matrix(&QuatMatrix2::new(e[0], e[1], e[2], e[3]))
            }
        }
    }

    /// Quaternion values of an affine, complex, imaginary or real net.
    fn quaternions(&self) -> Result<Vec<Q>> {
        let k = self.kind.arity();
        Ok(match self.kind {
            NetKind::AffineQuaternion => quats(&self.values).collect(),
            NetKind::Complex => self
                .values
                .chunks(k)
                .map(|c| Q::new(c[0], c[1], 0.0, 0.0))
                .collect(),
            NetKind::Imaginary => self
                .values
                .chunks(k)
                .map(|c| Q::new(0.0, c[0], c[1], c[2]))
                .collect(),
            NetKind::Real => self.values.iter().map(|&c| Q::real(c)).collect(),
            NetKind::Projective => {
                return Err(Error::KindMismatch(
                    "projective net has no affine values".into(),
                ))
            }
        })
    }

    /// The net in its chart; projective nets are projected to the standard chart.
    pub fn to_affine(&self) -> Result<AffineNet> {
        if self.kind == NetKind::Projective {
            return self.to_projective()?.project(&AffineChart::standard());
        }
        let values = Grid::from_vec(self.window, self.quaternions()?)?;
        Ok(AffineNet::with_chart(values, self.chart()?))
    }

    pub fn to_projective(&self) -> Result<ProjectiveNet> {
        if self.kind == NetKind::Projective {
            let points = self
                .values
                .chunks(8)
                .map(|c| {
                    let mut q = quats(c);
                    HPoint::new(HVector::new(q.next().expect("4"), q.next().expect("4")))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(ProjectiveNet::new(Grid::from_vec(self.window, points)?));
        }
        let chart = self.chart()?;
        let points = self
            .quaternions()?
            .into_iter()
            .map(|q| chart.point(q))
            .collect();
        Ok(ProjectiveNet::new(Grid::from_vec(self.window, points)?))
    }

    pub fn to_holomorphic(&self) -> Result<HolomorphicNet> {
        self.expect_kind(NetKind::Complex)?;
        let v = self
            .values
            .chunks(2)
            .map(|c| ComplexScalar::new(c[0], c[1]))
            .collect();
        Ok(HolomorphicNet::new(Grid::from_vec(self.window, v)?))
    }

    pub fn to_imaginary(&self) -> Result<Grid<ImaginaryQuaternion>> {
        self.expect_kind(NetKind::Imaginary)?;
        let v = self
            .values
            .chunks(3)
            .map(|c| ImaginaryQuaternion::new(c[0], c[1], c[2]))
            .collect();
        Grid::from_vec(self.window, v)
    }

    fn expect_kind(&self, kind: NetKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::KindMismatch(format!(
                "expected kind {}, found {}",
                kind.tag(),
                self.kind.tag()
            )));
        }
        Ok(())
    }

    pub fn meta_f64(&self, key: &str) -> Option<f64> {
        self.meta.get(key).and_then(|v| v.parse().ok())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let w = self.window;
        let _ = writeln!(s, "isonet {FORMAT_VERSION}");
        let _ = writeln!(s, "kind {}", self.kind.tag());
        let _ = writeln!(s, "window {} {} {} {}", w.m_min, w.m_max, w.n_min, w.n_max);
        if let Some(c) = &self.chart {
            let _ = writeln!(s, "chart {}", join(c));
        }
        for (k, v) in &self.meta {
            let _ = writeln!(s, "meta {k} {v}");
        }
        s.push_str("data\n");
        let a = self.kind.arity();
        for (k, (m, n)) in w.indices().enumerate() {
            let _ = writeln!(s, "{m} {n} {}", join(&self.values[k * a..(k + 1) * a]));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let mut next = |what: &str| {
            lines.next().ok_or_else(|| Error::Parse {
                line: 0,
                message: format!("unexpected end of file, expected {what}"),
            })
        };

        let (ln, l) = next("header")?;
        let version = l
            .strip_prefix("isonet ")
            .ok_or_else(|| parse_err(ln, "missing `isonet` header"))?;
        if version.trim() != FORMAT_VERSION.to_string() {
            return Err(parse_err(ln, &format!("unsupported version `{version}`")));
        }
        let (ln, l) = next("kind")?;
        let kind: NetKind = l
            .strip_prefix("kind ")
            .ok_or_else(|| parse_err(ln, "expected `kind`"))?
            .trim()
            .parse()?;
        let (ln, l) = next("window")?;
        let nums = l
            .strip_prefix("window ")
            .ok_or_else(|| parse_err(ln, "expected `window`"))?;
        let b: Vec<i32> = nums
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| parse_err(ln, &format!("bad integer `{t}`")))
            })
            .collect::<Result<_>>()?;
        if b.len() != 4 {
            return Err(parse_err(ln, "window needs four bounds"));
        }
        let window =
            GridWindow::new(b[0], b[1], b[2], b[3]).map_err(|e| parse_err(ln, &e.to_string()))?;

        let mut chart = None;
        let mut meta = BTreeMap::new();
        loop {
            let (ln, l) = next("data")?;
            if l == "data" {
                break;
            } else if let Some(rest) = l.strip_prefix("chart ") {
                let c = numbers(ln, rest)?;
                let c: [f64; 16] = c
                    .try_into()
                    .map_err(|_| parse_err(ln, "chart needs 16 numbers"))?;
                chart = Some(c);
            } else if let Some(rest) = l.strip_prefix("meta ") {
                let (k, v) = rest.split_once(' ').unwrap_or((rest, ""));
                meta.insert(k.to_string(), v.trim().to_string());
            } else {
                return Err(parse_err(ln, &format!("unexpected line `{l}`")));
            }
        }

        let a = kind.arity();
        let mut values = Vec::with_capacity(window.len() * a);
        for (m, n) in window.indices() {
            let (ln, l) = next(&format!("data for vertex ({m}, {n})"))?;
            let mut toks = l.split_whitespace();
            let idx: Vec<i32> = toks
                .by_ref()
                .take(2)
                .map(|t| {
                    t.parse()
                        .map_err(|_| parse_err(ln, &format!("bad index `{t}`")))
                })
                .collect::<Result<_>>()?;
            if idx != [m, n] {
                return Err(parse_err(
                    ln,
                    &format!("expected vertex ({m}, {n}), found {idx:?}"),
                ));
            }
            let comps = numbers(ln, &toks.collect::<Vec<_>>().join(" "))?;
            if comps.len() != a {
                return Err(Error::KindMismatch(format!(
                    "line {ln}: kind {} expects {a} components, found {}",
                    kind.tag(),
                    comps.len()
                )));
            }
            values.extend(comps);
        }
        if let Some((ln, l)) = lines.next() {
            return Err(parse_err(ln, &format!("trailing content `{l}`")));
        }
        Ok(NetFile {
            kind,
            window,
            values,
            chart,
            meta,
        })
    }
}

fn parse_err(line: usize, message: &str) -> Error {
    Error::Parse {
        line,
        message: message.to_string(),
    }
}

fn numbers(line: usize, s: &str) -> Result<Vec<f64>> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| parse_err(line, &format!("bad number `{t}`")))
        })
        .collect()
}

fn join(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x:?}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn save_net(path: impl AsRef<Path>, file: &NetFile) -> Result<()> {
    std::fs::write(path, file.to_text())?;
    Ok(())
}

pub fn load_net(path: impl AsRef<Path>) -> Result<NetFile> {
    NetFile::parse(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_is_exact() {
        let w = GridWindow::new(-1, 2, 0, 1).unwrap();
        let vals: Vec<f64> = (0..w.len() * 3)
            .map(|k| (k as f64 * 0.7).sin() / 3.0 + 1e-300 * k as f64)
            .collect();
        let f = NetFile::new(NetKind::Imaginary, w, vals)
            .unwrap()
            .with_meta("lambda", 0.1);
        let g = NetFile::parse(&f.to_text()).unwrap();
        assert_eq!(f, g);
        assert!(f
            .values
            .iter()
            .zip(&g.values)
            .all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn malformed_files() {
        let w = GridWindow::symmetric(1, 1).unwrap();
        let f = NetFile::new(NetKind::Complex, w, vec![0.5; 18]).unwrap();
        let text = f.to_text();
        let truncated: String = text.lines().take(6).map(|l| format!("{l}\n")).collect();
        assert!(matches!(
            NetFile::parse(&truncated),
            Err(Error::Parse { .. })
        ));
        let widened = text.replace("-1 -1 0.5 0.5", "-1 -1 0.5 0.5 0.5");
        assert!(matches!(
            NetFile::parse(&widened),
            Err(Error::KindMismatch(_))
        ));
        assert!(matches!(
            NetFile::parse("isonet 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            NetFile::parse(&text.replace("kind complex", "kind spinor")),
            Err(Error::KindMismatch(_))
        ));
    }

    #[test]
    fn chart_survives() {
        let w = GridWindow::symmetric(1, 1).unwrap();
        let chart =
            AffineChart::from_points(HVector::new(Q::I, Q::ONE), HVector::new(Q::ONE, Q::J))
                .unwrap();
        let net = AffineNet::with_chart(
            Grid::from_fn(w, |m, n| Q::new(m as f64, n as f64, 0.5, 0.0)),
            chart,
        );
        let back = NetFile::parse(&NetFile::from_affine(&net).to_text())
            .unwrap()
            .to_affine()
            .unwrap();
        assert_eq!(back.values, net.values);
        assert!(back.chart.matrix().dist(&chart.matrix()) < 1e-15);
    }
}
