//! Quad meshes in OBJ and ASCII PLY: one vertex per grid point (`m` outer),
//! one quad `(m,n), (m+1,n), (m+1,n+1), (m,n+1)` per cell.

use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::quaternion::ImaginaryQuaternion;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Ply,
}

impl MeshFormat {
    pub fn extension(self) -> &'static str {
        match self {
            MeshFormat::Obj => "obj",
            MeshFormat::Ply => "ply",
        }
    }
}

impl FromStr for MeshFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "obj" => Ok(MeshFormat::Obj),
            "ply" => Ok(MeshFormat::Ply),
            _ => Err(Error::InvalidParameter(format!(
                "unknown mesh format `{s}`"
            ))),
        }
    }
}

fn faces(points: &Grid<ImaginaryQuaternion>) -> Vec<[usize; 4]> {
    let w = points.window();
    w.quads()
        .into_iter()
        .map(|(m, n)| {
            [
                w.offset(m, n),
                w.offset(m + 1, n),
                w.offset(m + 1, n + 1),
                w.offset(m, n + 1),
            ]
        })
        .collect()
}

pub fn write_mesh(
    out: &mut impl Write,
    points: &Grid<ImaginaryQuaternion>,
    format: MeshFormat,
) -> std::io::Result<()> {
    let faces = faces(points);
    match format {
        MeshFormat::Obj => {
            for p in points.values() {
                writeln!(out, "v {:?} {:?} {:?}", p.x, p.y, p.z)?;
            }
            for f in &faces {
                writeln!(out, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1)?;
            }
        }
        MeshFormat::Ply => {
            writeln!(out, "ply\nformat ascii 1.0")?;
            writeln!(out, "element vertex {}", points.values().len())?;
            writeln!(
                out,
                "property double x\nproperty double y\nproperty double z"
            )?;
            writeln!(out, "element face {}", faces.len())?;
            writeln!(out, "property list uchar int vertex_indices\nend_header")?;
            for p in points.values() {
                writeln!(out, "{:?} {:?} {:?}", p.x, p.y, p.z)?;
            }
            for f in &faces {
                writeln!(out, "4 {} {} {} {}", f[0], f[1], f[2], f[3])?;
            }
        }
    }
    Ok(())
}

pub fn export_mesh(
    points: &Grid<ImaginaryQuaternion>,
    path: impl AsRef<Path>,
    format: MeshFormat,
) -> Result<()> {
    let mut buf = Vec::new();
    write_mesh(&mut buf, points, format)?;
    std::fs::write(path, buf)?;
    Ok(())
}

/// What a mesh file contains, as read back.
#[derive(Debug, Clone, PartialEq)]
pub struct MeshSummary {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<Vec<usize>>,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn floats(line: usize, toks: &[&str]) -> Result<[f64; 3]> {
    if toks.len() < 3 {
        return Err(parse_err(line, "vertex needs three coordinates"));
    }
    let mut v = [0.0; 3];
    for (k, t) in toks.iter().take(3).enumerate() {
        v[k] = t
            .parse()
            .map_err(|_| parse_err(line, format!("bad number `{t}`")))?;
    }
    Ok(v)
}

fn indices(line: usize, toks: &[&str]) -> Result<Vec<usize>> {
    toks.iter()
        .map(|t| {
            // OBJ allows `v/vt/vn`
            let head = t.split('/').next().unwrap_or(t);
            head.parse()
                .map_err(|_| parse_err(line, format!("bad index `{t}`")))
        })
        .collect()
}

/// Reads OBJ or ASCII PLY; face indices are returned 0-based.
pub fn read_mesh(path: impl AsRef<Path>) -> Result<MeshSummary> {
    let text = std::fs::read_to_string(path)?;
    parse_mesh(&text)
}

pub fn parse_mesh(text: &str) -> Result<MeshSummary> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut mesh = MeshSummary {
        vertices: Vec::new(),
        faces: Vec::new(),
    };
    if text.starts_with("ply") {
        let (mut nv, mut nf) = (0usize, 0usize);
        for (ln, l) in lines.by_ref() {
            let toks: Vec<&str> = l.split_whitespace().collect();
            match toks.as_slice() {
                ["end_header"] => break,
                ["element", "vertex", k] => {
                    nv = k.parse().map_err(|_| parse_err(ln, "bad vertex count"))?
                }
                ["element", "face", k] => {
                    nf = k.parse().map_err(|_| parse_err(ln, "bad face count"))?
                }
                _ => {}
            }
        }
        for _ in 0..nv {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| parse_err(0, "missing vertex lines"))?;
            mesh.vertices
                .push(floats(ln, &l.split_whitespace().collect::<Vec<_>>())?);
        }
        for _ in 0..nf {
            let (ln, l) = lines
                .next()
                .ok_or_else(|| parse_err(0, "missing face lines"))?;
            let toks: Vec<&str> = l.split_whitespace().collect();
            let idx = indices(ln, &toks)?;
            if idx.is_empty() || idx[0] + 1 != idx.len() {
                return Err(parse_err(ln, "face count does not match its index list"));
            }
            mesh.faces.push(idx[1..].to_vec());
        }
    } else {
        for (ln, l) in lines {
            let toks: Vec<&str> = l.split_whitespace().collect();
            match toks.first() {
                Some(&"v") => mesh.vertices.push(floats(ln, &toks[1..])?),
                Some(&"f") => {
                    let idx = indices(ln, &toks[1..])?;
                    if idx.contains(&0) {
                        return Err(parse_err(ln, "OBJ indices are 1-based"));
                    }
                    mesh.faces.push(idx.into_iter().map(|i| i - 1).collect());
                }
                _ => {}
            }
        }
    }
    if let Some(bad) = mesh
        .faces
        .iter()
        .flatten()
        .find(|&&i| i >= mesh.vertices.len())
    {
        return Err(parse_err(0, format!("face index {bad} out of range")));
    }
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridWindow;

    #[test]
    fn single_quad() {
        let w = GridWindow::new(0, 1, 0, 1).unwrap();
        let g = Grid::from_fn(w, |m, n| ImaginaryQuaternion::new(m as f64, n as f64, 0.0));
        for fmt in [MeshFormat::Obj, MeshFormat::Ply] {
            let mut buf = Vec::new();
            write_mesh(&mut buf, &g, fmt).unwrap();
            let mesh = parse_mesh(std::str::from_utf8(&buf).unwrap()).unwrap();
            assert_eq!(mesh.vertices.len(), 4);
            assert_eq!(mesh.faces, vec![vec![0, 2, 3, 1]]);
        }
    }
}
