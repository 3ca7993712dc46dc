//! Wavefront OBJ and ASCII PLY readers and writers.
//!
//! Only positions and face connectivity are read; texture coordinates,
//! normals and extra PLY properties are skipped. Polygons with more than
//! three corners are fan-triangulated when `triangulate` is set and
//! rejected otherwise.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::Mesh;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    PlyAscii,
    /// Chosen from the file extension.
    Auto,
}

impl MeshFormat {
    fn resolve(self, path: &Path) -> Result<MeshFormat> {
        if self != MeshFormat::Auto {
            return Ok(self);
        }
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .as_deref()
        {
            Some("obj") => Ok(MeshFormat::Obj),
            Some("ply") => Ok(MeshFormat::PlyAscii),
            _ => Err(Error::InvalidArgument(format!(
                "cannot infer mesh format from {}",
                path.display()
            ))),
        }
    }
}

impl FromStr for MeshFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "obj" => Ok(MeshFormat::Obj),
            "ply" | "ply-ascii" => Ok(MeshFormat::PlyAscii),
            "auto" => Ok(MeshFormat::Auto),
            other => Err(Error::InvalidArgument(format!(
                "unknown mesh format {other:?}"
            ))),
        }
    }
}

pub fn load_mesh(path: impl AsRef<Path>, format: MeshFormat, triangulate: bool) -> Result<Mesh> {
    let path = path.as_ref();
    let format = format.resolve(path)?;
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    match format {
        MeshFormat::Obj => parse_obj(&text, triangulate),
        MeshFormat::PlyAscii => parse_ply(&text, triangulate),
        MeshFormat::Auto => unreachable!(),
    }
}

pub fn save_mesh(mesh: &Mesh, path: impl AsRef<Path>, format: MeshFormat) -> Result<()> {
    let path = path.as_ref();
    let text = match format.resolve(path)? {
        MeshFormat::Obj => to_obj(mesh),
        MeshFormat::PlyAscii => to_ply(mesh),
        MeshFormat::Auto => unreachable!(),
    };
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn push_polygon(
    faces: &mut Vec<[usize; 3]>,
    polygon: &[usize],
    face_no: usize,
    triangulate: bool,
) -> Result<()> {
    match polygon.len() {
        0..=2 => Err(Error::NonTriangleFace {
            face: face_no,
            count: polygon.len(),
        }),
        3 => {
            faces.push([polygon[0], polygon[1], polygon[2]]);
            Ok(())
        }
        count if !triangulate => Err(Error::NonTriangleFace {
            face: face_no,
            count,
        }),
        _ => {
            for k in 1..polygon.len() - 1 {
                faces.push([polygon[0], polygon[k], polygon[k + 1]]);
            }
            Ok(())
        }
    }
}

pub fn parse_obj(text: &str, triangulate: bool) -> Result<Mesh> {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    let mut face_no = 0;
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("v") => {
                let mut p = [0.0; 3];
                for c in &mut p {
                    *c = tok
                        .next()
                        .ok_or_else(|| parse_err(line_no, "vertex needs 3 coordinates"))?
                        .parse()
                        .map_err(|_| parse_err(line_no, "bad vertex coordinate"))?;
                }
                vertices.push(p);
            }
            Some("f") => {
                let mut polygon = Vec::new();
                for t in tok {
                    let first = t.split('/').next().unwrap_or("");
                    let idx: i64 = first
                        .parse()
                        .map_err(|_| parse_err(line_no, format!("bad face index {t:?}")))?;
                    let n = vertices.len() as i64;
                    let resolved = match idx {
                        0 => {
                            return Err(Error::IndexOutOfRange {
                                face: face_no,
                                index: 0,
                                vertex_count: vertices.len(),
                            })
                        }
                        i if i > 0 => i - 1,
                        i => n + i,
                    };
                    if resolved < 0 || resolved >= n {
                        return Err(Error::IndexOutOfRange {
                            face: face_no,
                            index: idx,
                            vertex_count: vertices.len(),
                        });
                    }
                    polygon.push(resolved as usize);
                }
                push_polygon(&mut faces, &polygon, face_no, triangulate)?;
                face_no += 1;
            }
            _ => {}
        }
    }
    Mesh::new(vertices, faces)
}

struct PlyElement {
    name: String,
    count: usize,
    properties: Vec<String>,
    is_list: Vec<bool>,
}

pub fn parse_ply(text: &str, triangulate: bool) -> Result<Mesh> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, l)) if l.trim() == "ply" => {}
        _ => return Err(parse_err(1, "missing ply magic")),
    }
    let mut elements: Vec<PlyElement> = Vec::new();
    loop {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| parse_err(0, "unterminated ply header"))?;
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("format") => {
                if tok.next() != Some("ascii") {
                    return Err(parse_err(ln + 1, "only ascii ply is supported"));
                }
            }
            Some("element") => {
                let name = tok.next().unwrap_or_default().to_string();
                let count = tok
                    .next()
                    .and_then(|c| c.parse().ok())
                    .ok_or_else(|| parse_err(ln + 1, "bad element count"))?;
                elements.push(PlyElement {
                    name,
                    count,
                    properties: Vec::new(),
                    is_list: Vec::new(),
                });
            }
            Some("property") => {
                let el = elements
                    .last_mut()
                    .ok_or_else(|| parse_err(ln + 1, "property before element"))?;
                let rest: Vec<&str> = tok.collect();
                let list = rest.first() == Some(&"list");
                el.properties.push(rest.last().unwrap_or(&"").to_string());
                el.is_list.push(list);
            }
            Some("end_header") => break,
            _ => {}
        }
    }

    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for el in &elements {
        for face_no in 0..el.count {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| parse_err(0, format!("truncated {} element", el.name)))?;
            let line_no = ln + 1;
            let values: Vec<&str> = line.split_whitespace().collect();
            match el.name.as_str() {
                "vertex" => {
                    let mut p = [0.0; 3];
                    let mut cursor = 0;
                    for (prop, &list) in el.properties.iter().zip(&el.is_list) {
                        if list {
                            let len: usize = values
                                .get(cursor)
                                .and_then(|v| v.parse().ok())
                                .ok_or_else(|| parse_err(line_no, "bad list length"))?;
                            cursor += len + 1;
                            continue;
                        }
                        let axis = match prop.as_str() {
                            "x" => Some(0),
                            "y" => Some(1),
                            "z" => Some(2),
                            _ => None,
                        };
                        if let Some(axis) = axis {
                            p[axis] = values
                                .get(cursor)
                                .and_then(|v| v.parse().ok())
                                .ok_or_else(|| parse_err(line_no, "bad vertex coordinate"))?;
                        }
                        cursor += 1;
                    }
                    vertices.push(p);
                }
                "face" => {
                    let len: usize = values
                        .first()
                        .and_then(|v| v.parse().ok())
                        .ok_or_else(|| parse_err(line_no, "bad face list length"))?;
                    if values.len() < len + 1 {
                        return Err(parse_err(line_no, "face list too short"));
                    }
                    let mut polygon = Vec::with_capacity(len);
                    for v in &values[1..=len] {
                        let idx: i64 = v
                            .parse()
                            .map_err(|_| parse_err(line_no, format!("bad face index {v:?}")))?;
                        if idx < 0 || idx as usize >= vertices.len() {
                            return Err(Error::IndexOutOfRange {
                                face: face_no,
                                index: idx,
                                vertex_count: vertices.len(),
                            });
                        }
                        polygon.push(idx as usize);
                    }
                    push_polygon(&mut faces, &polygon, face_no, triangulate)?;
                }
                _ => {}
            }
        }
    }
    Mesh::new(vertices, faces)
}

pub fn to_obj(mesh: &Mesh) -> String {
    let mut s = String::with_capacity(mesh.num_vertices() * 48 + mesh.num_faces() * 24);
    for v in mesh.vertices() {
        let _ = writeln!(s, "v {} {} {}", v[0], v[1], v[2]);
    }
    for f in mesh.faces() {
        let _ = writeln!(s, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
    }
    s
}

pub fn to_ply(mesh: &Mesh) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        "ply\nformat ascii 1.0\nelement vertex {}\nproperty double x\nproperty double y\nproperty double z\n\
         element face {}\nproperty list uchar int vertex_indices\nend_header\n",
        mesh.num_vertices(),
        mesh.num_faces()
    );
    for v in mesh.vertices() {
        let _ = writeln!(s, "{} {} {}", v[0], v[1], v[2]);
    }
    for f in mesh.faces() {
        let _ = writeln!(s, "3 {} {} {}", f[0], f[1], f[2]);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const TET_OBJ: &str = "# tetrahedron\nv 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\n\
                           f 1 3 2\nf 1 2 4\nf 1 4 3\nf 2 3 4\n";

    const CUBE_PLY: &str = "ply\nformat ascii 1.0\ncomment unit cube\nelement vertex 8\n\
        property float x\nproperty float y\nproperty float z\nelement face 6\n\
        property list uchar int vertex_indices\nend_header\n\
        0 0 0\n1 0 0\n1 1 0\n0 1 0\n0 0 1\n1 0 1\n1 1 1\n0 1 1\n\
        4 0 3 2 1\n4 4 5 6 7\n4 0 1 5 4\n4 1 2 6 5\n4 2 3 7 6\n4 3 0 4 7\n";

    #[test]
    fn obj_tetrahedron() {
        let m = parse_obj(TET_OBJ, false).unwrap();
        assert_eq!((m.num_vertices(), m.num_faces()), (4, 4));
        assert_eq!(m.faces()[0], [0, 2, 1]);
    }

    #[test]
    fn obj_zero_index_is_rejected() {
        let err = parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 0 1 2\n", false).unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange { index: 0, .. }));
    }

    #[test]
    fn obj_slashes_and_negative_indices() {
        let m = parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3/1/1 -2/2/2 -1/3/3\n", false).unwrap();
        assert_eq!(m.faces(), &[[0, 1, 2]]);
    }

    #[test]
    fn ply_cube_fan_triangulated() {
        let m = parse_ply(CUBE_PLY, true).unwrap();
        assert_eq!((m.num_vertices(), m.num_faces()), (8, 12));
        assert!(matches!(
            parse_ply(CUBE_PLY, false),
            Err(Error::NonTriangleFace { count: 4, .. })
        ));
    }

    #[test]
    fn writers_round_trip_bit_exact() {
        let m = fixtures::random_blob(60, 3);
        assert_eq!(parse_obj(&to_obj(&m), false).unwrap(), m);
        assert_eq!(parse_ply(&to_ply(&m), false).unwrap(), m);
    }

    #[test]
    fn files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let m = fixtures::icosphere(1);
        for name in ["a.obj", "b.ply"] {
            let p = dir.path().join(name);
            save_mesh(&m, &p, MeshFormat::Auto).unwrap();
            assert_eq!(load_mesh(&p, MeshFormat::Auto, false).unwrap(), m);
        }
        assert!(load_mesh(dir.path().join("a.stl"), MeshFormat::Auto, false).is_err());
    }
}
