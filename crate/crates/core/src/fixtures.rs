//! Procedural meshes: platonic solids, icospheres, tori and seeded random
//! closed shapes.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mesh::vec3::{self, Vec3};
use crate::mesh::Mesh;

pub fn tetrahedron() -> Mesh {
    Mesh::new(
        vec![
            [1.0, 1.0, 1.0],
            [1.0, -1.0, -1.0],
            [-1.0, 1.0, -1.0],
            [-1.0, -1.0, 1.0],
        ],
        vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]],
    )
    .expect("valid fixture")
}

/// Unit cube `[0, 1]^3`, two triangles per side, outward orientation.
pub fn cube() -> Mesh {
    let v = vec![
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [1.0, 1.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [1.0, 0.0, 1.0],
        [1.0, 1.0, 1.0],
        [0.0, 1.0, 1.0],
    ];
    let quads = [
        [0, 3, 2, 1],
        [4, 5, 6, 7],
        [0, 1, 5, 4],
        [1, 2, 6, 5],
        [2, 3, 7, 6],
        [3, 0, 4, 7],
    ];
    let faces = quads
        .iter()
        .flat_map(|q| [[q[0], q[1], q[2]], [q[0], q[2], q[3]]])
        .collect();
    Mesh::new(v, faces).expect("valid fixture")
}

pub fn octahedron() -> Mesh {
    Mesh::new(
        vec![
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ],
        vec![
            [0, 2, 4],
            [2, 1, 4],
            [1, 3, 4],
            [3, 0, 4],
            [2, 0, 5],
            [1, 2, 5],
            [3, 1, 5],
            [0, 3, 5],
        ],
    )
    .expect("valid fixture")
}

/// Regular icosahedron with unit circumradius.
pub fn icosahedron() -> Mesh {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let raw = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ];
    let v = raw.iter().map(|&p| vec3::normalize(p).unwrap()).collect();
    let faces = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    Mesh::new(v, faces).expect("valid fixture")
}

/// Unit icosphere after `level` rounds of 1-to-4 subdivision
/// (`10 * 4^level + 2` vertices).
pub fn icosphere(level: usize) -> Mesh {
    let (mut v, mut faces) = icosahedron().into_parts();
    for _ in 0..level {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        let mut mid = |a: usize, b: usize, v: &mut Vec<Vec3>| -> usize {
            *midpoint.entry((a.min(b), a.max(b))).or_insert_with(|| {
                let m = vec3::normalize(vec3::add(v[a], v[b])).unwrap();
                v.push(m);
                v.len() - 1
            })
        };
        for f in &faces {
            let ab = mid(f[0], f[1], &mut v);
            let bc = mid(f[1], f[2], &mut v);
            let ca = mid(f[2], f[0], &mut v);
            next.push([f[0], ab, ca]);
            next.push([f[1], bc, ab]);
            next.push([f[2], ca, bc]);
            next.push([ab, bc, ca]);
        }
        faces = next;
    }
    Mesh::new(v, faces).expect("valid fixture")
}

/// Torus around the z axis with `rings * segments` vertices.
pub fn torus(major: f64, minor: f64, rings: usize, segments: usize) -> Mesh {
    let mut v = Vec::with_capacity(rings * segments);
    for i in 0..rings {
        let u = 2.0 * std::f64::consts::PI * i as f64 / rings as f64;
        for j in 0..segments {
            let w = 2.0 * std::f64::consts::PI * j as f64 / segments as f64;
            let r = major + minor * w.cos();
            v.push([r * u.cos(), r * u.sin(), minor * w.sin()]);
        }
    }
    let idx = |i: usize, j: usize| (i % rings) * segments + (j % segments);
    let mut faces = Vec::with_capacity(2 * rings * segments);
    for i in 0..rings {
        for j in 0..segments {
            let (a, b, c, d) = (idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    Mesh::new(v, faces).expect("valid fixture")
}

/// Icosphere with a seeded smooth radial deformation, a sum of a few random
/// low-order bumps. Closed, genus zero, no two vertices coincide.
pub fn bumpy_sphere(level: usize, seed: u64) -> Mesh {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bumps: Vec<(Vec3, f64, f64)> = (0..6)
        .map(|_| {
            let dir = loop {
                let d = [
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                ];
                if let Some(d) = vec3::normalize(d) {
                    break d;
                }
            };
            (
                dir,
                rng.random_range(-0.25..0.25),
                rng.random_range(1.0..4.0),
            )
        })
        .collect();
    let stretch = [
        rng.random_range(0.7..1.3),
        rng.random_range(0.7..1.3),
        rng.random_range(0.7..1.3),
    ];
    icosphere(level)
        .map_vertices(|p| {
            let r: f64 = 1.0
                + bumps
                    .iter()
                    .map(|(d, amp, sharp)| amp * (sharp * (vec3::dot(p, *d) - 1.0)).exp())
                    .sum::<f64>();
            [
                p[0] * r * stretch[0],
                p[1] * r * stretch[1],
                p[2] * r * stretch[2],
            ]
        })
        .expect("finite")
}

/// Seeded closed shape with irregular vertex positions: a bumpy sphere with
/// per-vertex jitter. `n` picks the subdivision level whose vertex count is
/// closest to `n`.
pub fn random_blob(n: usize, seed: u64) -> Mesh {
    let level = (0..6)
        .min_by_key(|&l| (10 * 4usize.pow(l as u32) + 2).abs_diff(n))
        .unwrap_or(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let base = bumpy_sphere(level, seed);
    base.map_vertices(|p| {
        let j = 0.02;
        [
            p[0] + rng.random_range(-j..j),
            p[1] + rng.random_range(-j..j),
            p[2] + rng.random_range(-j..j),
        ]
    })
    .expect("finite")
}

/// Convex hull of `n` seeded random points on an ellipsoid, built by
/// incremental hull insertion. Faces are outward oriented.
pub fn random_convex_hull(n: usize, seed: u64) -> Mesh {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let axes = [
        rng.random_range(0.6..1.4),
        rng.random_range(0.6..1.4),
        rng.random_range(0.6..1.4),
    ];
    let pts: Vec<Vec3> = (0..n.max(4))
        .map(|_| loop {
            let d = [
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ];
            let r2 = vec3::norm2(d);
            if r2 > 0.05 && r2 <= 1.0 {
                let u = vec3::scale(d, 1.0 / r2.sqrt());
                break [u[0] * axes[0], u[1] * axes[1], u[2] * axes[2]];
            }
        })
        .collect();
    convex_hull(&pts)
}

/// Incremental 3D convex hull. Points strictly inside the hull are dropped
/// from the output.
pub fn convex_hull(points: &[Vec3]) -> Mesh {
    assert!(points.len() >= 4, "hull needs at least 4 points");
    // initial tetrahedron from the first non-degenerate quadruple
    let a = 0;
    let b = (1..points.len())
        .max_by(|&i, &j| {
            vec3::dist2(points[a], points[i]).total_cmp(&vec3::dist2(points[a], points[j]))
        })
        .unwrap();
    let c = (0..points.len())
        .max_by(|&i, &j| {
            let ni = vec3::norm2(vec3::triangle_normal(points[a], points[b], points[i]));
            let nj = vec3::norm2(vec3::triangle_normal(points[a], points[b], points[j]));
            ni.total_cmp(&nj)
        })
        .unwrap();
    let nrm = vec3::triangle_normal(points[a], points[b], points[c]);
    let d = (0..points.len())
        .max_by(|&i, &j| {
            let di = vec3::dot(nrm, vec3::sub(points[i], points[a])).abs();
            let dj = vec3::dot(nrm, vec3::sub(points[j], points[a])).abs();
            di.total_cmp(&dj)
        })
        .unwrap();
    let mut faces: Vec<[usize; 3]> = if vec3::dot(nrm, vec3::sub(points[d], points[a])) < 0.0 {
        vec![[a, b, c], [a, d, b], [b, d, c], [c, d, a]]
    } else {
        vec![[a, c, b], [a, b, d], [b, c, d], [c, a, d]]
    };
    let eps = 1e-12;
    for (p, &pt) in points.iter().enumerate() {
        if [a, b, c, d].contains(&p) {
            continue;
        }
        let visible: Vec<bool> = faces
            .iter()
            .map(|f| {
                let n = vec3::triangle_normal(points[f[0]], points[f[1]], points[f[2]]);
                vec3::dot(n, vec3::sub(pt, points[f[0]])) > eps
            })
            .collect();
        if !visible.iter().any(|&x| x) {
            continue;
        }
        let mut directed: HashMap<(usize, usize), bool> = HashMap::new();
        for (f, &vis) in faces.iter().zip(&visible) {
            if vis {
                for k in 0..3 {
                    directed.insert((f[k], f[(k + 1) % 3]), true);
                }
            }
        }
        let mut next: Vec<[usize; 3]> = Vec::new();
        for (f, &vis) in faces.iter().zip(&visible) {
            if !vis {
                next.push(*f);
            }
        }
        for (f, &vis) in faces.iter().zip(&visible) {
            if vis {
                for k in 0..3 {
                    let (u, w) = (f[k], f[(k + 1) % 3]);
                    if !directed.contains_key(&(w, u)) {
                        next.push([u, w, p]);
                    }
                }
            }
        }
        faces = next;
    }
    let hull = Mesh::new(points.to_vec(), faces.clone()).expect("valid hull");
    if hull.signed_volume() < 0.0 {
        for f in &mut faces {
            f.swap(1, 2);
        }
    }
    Mesh::new(points.to_vec(), faces)
        .expect("valid hull")
        .without_unreferenced_vertices()
}

/// Seeded random rotation matrix (uniform over SO(3)).
pub fn random_rotation(seed: u64) -> [[f64; 3]; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u1: f64 = rng.random();
    let u2: f64 = rng.random::<f64>() * std::f64::consts::TAU;
    let u3: f64 = rng.random::<f64>() * std::f64::consts::TAU;
    let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
    vec3::rotation_from_quaternion([a * u2.sin(), a * u2.cos(), b * u3.sin(), b * u3.cos()])
}

/// Meshes exercised by the metric identity checks: a variety of
/// symmetric and asymmetric closed surfaces.
pub fn metric_fixtures() -> Vec<(&'static str, Mesh)> {
    vec![
        ("tetrahedron", tetrahedron()),
        ("cube", cube()),
        ("octahedron", octahedron()),
        ("icosahedron", icosahedron()),
        ("icosphere2", icosphere(2)),
        ("torus", torus(1.0, 0.35, 24, 12)),
        ("bumpy_sphere", bumpy_sphere(2, 11)),
        ("blob", random_blob(162, 5)),
        ("hull", random_convex_hull(120, 9)),
        ("appendix_c", crate::laplacian::appendix_c_mesh()),
    ]
}

/// Detailed surfaces for distortion-sensitivity checks; all have enough
/// vertices that noise and smoothing change the spectrum shape.
pub fn shape_fixtures() -> Vec<(&'static str, Mesh)> {
    vec![
        ("icosphere3", icosphere(3)),
        ("torus", torus(1.0, 0.4, 40, 20)),
        ("bumpy_sphere", bumpy_sphere(3, 2)),
        ("bumpy_sphere_b", bumpy_sphere(3, 17)),
    ]
}
