//! Greedy quadric-error-metric edge collapse.
//!
//! Each vertex carries the sum of the (area-weighted) plane quadrics of its
//! original faces. Edges are collapsed cheapest first into the point that
//! minimizes the merged quadric. A collapse is rejected when it breaks the
//! link condition, duplicates a face, pinches two boundary loops, or flips
//! or degenerates a surviving face.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::mesh::vec3::{self, Vec3};
use crate::{Error, Mesh, Result};

/// Symmetric 4x4 in upper-row order `aa ab ac ad bb bc bd cc cd dd`.
type Quadric = [f64; 10];

fn plane_quadric(n: Vec3, d: f64, w: f64) -> Quadric {
    let [a, b, c] = n;
    [
        a * a, a * b, a * c, a * d, b * b, b * c, b * d, c * c, c * d, d * d,
    ]
    .map(|x| x * w)
}

fn add_q(a: &Quadric, b: &Quadric) -> Quadric {
    std::array::from_fn(|k| a[k] + b[k])
}

fn eval_q(q: &Quadric, p: Vec3) -> f64 {
    let [x, y, z] = p;
    let e = q[0] * x * x
        + 2.0 * q[1] * x * y
        + 2.0 * q[2] * x * z
        + 2.0 * q[3] * x
        + q[4] * y * y
        + 2.0 * q[5] * y * z
        + 2.0 * q[6] * y
        + q[7] * z * z
        + 2.0 * q[8] * z
        + q[9];
    e.max(0.0)
}

/// Minimizer of `q`, if well conditioned and near the edge; otherwise the
/// best of the endpoints and the midpoint.
fn placement(q: &Quadric, a: Vec3, b: Vec3) -> (Vec3, f64) {
    let m = [[q[0], q[1], q[2]], [q[1], q[4], q[5]], [q[2], q[5], q[7]]];
    let rhs = [-q[3], -q[6], -q[8]];
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&m);
    let trace = q[0] + q[4] + q[7];
    let mid = vec3::scale(vec3::add(a, b), 0.5);
    if d.abs() > 1e-9 * trace.powi(3) {
        let solve = |k: usize| {
            let mut mk = m;
            for r in 0..3 {
                mk[r][k] = rhs[r];
            }
            det(&mk) / d
        };
        let p = [solve(0), solve(1), solve(2)];
        if vec3::dist(p, mid) <= vec3::dist(a, b) {
            return (p, eval_q(q, p));
        }
    }
    [a, b, mid]
        .into_iter()
        .map(|p| (p, eval_q(q, p)))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("three candidates")
}

/// Smallest accepted `2 area / longest_edge^2`.
const SLIVER: f64 = 1e-4;

#[derive(Debug, Clone, Copy)]
struct Candidate {
    cost: f64,
    u: usize,
    v: usize,
    stamp: (u32, u32),
    target: Vec3,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // reversed so the max-heap pops the cheapest edge; ties by indices
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| (other.u, other.v).cmp(&(self.u, self.v)))
    }
}

struct State {
    pos: Vec<Vec3>,
    quad: Vec<Quadric>,
    stamp: Vec<u32>,
    alive_v: Vec<bool>,
    faces: Vec<[usize; 3]>,
    alive_f: Vec<bool>,
    vfaces: Vec<Vec<usize>>,
    live_faces: usize,
}

impl State {
    fn new(mesh: &Mesh) -> Self {
        let n = mesh.num_vertices();
        let mut quad = vec![[0.0; 10]; n];
        let mut vfaces = vec![Vec::new(); n];
        for (fi, f) in mesh.faces().iter().enumerate() {
            let [a, b, c] = mesh.face_positions(fi);
            let cr = vec3::cross(vec3::sub(b, a), vec3::sub(c, a));
            let len = vec3::norm(cr);
            if len > 0.0 {
                let nrm = vec3::scale(cr, 1.0 / len);
                let q = plane_quadric(nrm, -vec3::dot(nrm, a), len / 2.0);
                for &i in f {
                    quad[i] = add_q(&quad[i], &q);
                }
            }
            for &i in f {
                vfaces[i].push(fi);
            }
        }
        State {
            pos: mesh.vertices().to_vec(),
            quad,
            stamp: vec![0; n],
            alive_v: vec![true; n],
            faces: mesh.faces().to_vec(),
            alive_f: vec![true; mesh.num_faces()],
            vfaces,
            live_faces: mesh.num_faces(),
        }
    }

    fn neighbors(&self, u: usize) -> Vec<usize> {
        let mut nb: Vec<usize> = self.vfaces[u]
            .iter()
            .flat_map(|&f| self.faces[f])
            .filter(|&w| w != u)
            .collect();
        nb.sort_unstable();
        nb.dedup();
        nb
    }

    fn shared_faces(&self, u: usize, v: usize) -> Vec<usize> {
        self.vfaces[u]
            .iter()
            .copied()
            .filter(|&f| self.faces[f].contains(&v))
            .collect()
    }

    fn on_boundary(&self, u: usize) -> bool {
        self.neighbors(u)
            .into_iter()
            .any(|w| self.shared_faces(u, w).len() == 1)
    }

    fn candidate(&self, u: usize, v: usize) -> Candidate {
        let (u, v) = (u.min(v), u.max(v));
        let q = add_q(&self.quad[u], &self.quad[v]);
        let (target, cost) = placement(&q, self.pos[u], self.pos[v]);
        Candidate {
            cost,
            u,
            v,
            stamp: (self.stamp[u], self.stamp[v]),
            target,
        }
    }

    fn push_around(&self, u: usize, heap: &mut BinaryHeap<Candidate>) {
        for w in self.neighbors(u) {
            heap.push(self.candidate(u, w));
        }
    }

    fn is_legal(&self, c: &Candidate) -> bool {
        let (u, v) = (c.u, c.v);
        let shared = self.shared_faces(u, v);
        if shared.is_empty() || shared.len() > 2 {
            return false;
        }
        // link condition: common neighbors are exactly the opposite corners
        let mut opposite: Vec<usize> = shared
            .iter()
            .flat_map(|&f| self.faces[f])
            .filter(|&w| w != u && w != v)
            .collect();
        opposite.sort_unstable();
        let nu = self.neighbors(u);
        let common: Vec<usize> = self
            .neighbors(v)
            .into_iter()
            .filter(|w| nu.binary_search(w).is_ok())
            .collect();
        if common != opposite {
            return false;
        }
        if shared.len() == 2 && self.on_boundary(u) && self.on_boundary(v) {
            return false;
        }
        // faces of v that survive must not duplicate faces of u
        for &f in &self.vfaces[v] {
            if shared.contains(&f) {
                continue;
            }
            let mut others: Vec<usize> = self.faces[f].into_iter().filter(|&w| w != v).collect();
            others.sort_unstable();
            let dup = self.vfaces[u].iter().any(|&g| {
                let mut o: Vec<usize> = self.faces[g].into_iter().filter(|&w| w != u).collect();
                o.sort_unstable();
                o == others
            });
            if dup {
                return false;
            }
        }
        for (moved, &f) in self.vfaces[u]
            .iter()
            .map(|f| (u, f))
            .chain(self.vfaces[v].iter().map(|f| (v, f)))
        {
            if shared.contains(&f) {
                continue;
            }
            let face = self.faces[f];
            let old: [Vec3; 3] = face.map(|i| self.pos[i]);
            let new: [Vec3; 3] = face.map(|i| if i == moved { c.target } else { self.pos[i] });
            let n_old = vec3::triangle_normal(old[0], old[1], old[2]);
            let n_new = vec3::triangle_normal(new[0], new[1], new[2]);
            let longest = (0..3)
                .map(|k| vec3::dist2(new[k], new[(k + 1) % 3]))
                .fold(0.0, f64::max);
            if !(vec3::norm(n_new) > SLIVER * longest) {
                return false;
            }
            if vec3::dot(n_old, n_new) <= 0.0 {
                return false;
            }
        }
        true
    }

    fn collapse(&mut self, c: &Candidate) {
        let (u, v) = (c.u, c.v);
        for f in self.shared_faces(u, v) {
            self.alive_f[f] = false;
            self.live_faces -= 1;
            for w in self.faces[f] {
                self.vfaces[w].retain(|&g| g != f);
            }
        }
        for f in std::mem::take(&mut self.vfaces[v]) {
            for w in &mut self.faces[f] {
                if *w == v {
                    *w = u;
                }
            }
            self.vfaces[u].push(f);
        }
        self.pos[u] = c.target;
        self.quad[u] = add_q(&self.quad[u], &self.quad[v]);
        self.alive_v[v] = false;
        self.stamp[u] += 1;
        self.stamp[v] += 1;
    }

    fn into_mesh(self) -> Result<Mesh> {
        let faces: Vec<[usize; 3]> = self
            .faces
            .iter()
            .zip(&self.alive_f)
            .filter(|(_, &a)| a)
            .map(|(f, _)| *f)
            .collect();
        Ok(Mesh::new(self.pos, faces)?.without_unreferenced_vertices())
    }
}

/// Collapses edges until at most `target_faces` faces remain.
pub fn decimate_edge_collapse(mesh: &Mesh, target_faces: usize) -> Result<Mesh> {
    if target_faces < 4 {
        return Err(Error::InvalidArgument(format!(
            "target face count must be >= 4, got {target_faces}"
        )));
    }
    if mesh.num_faces() <= target_faces {
        return Ok(mesh.clone());
    }
    let mut s = State::new(mesh);
    let mut heap = BinaryHeap::new();
    // a full sweep with no accepted collapse means the target is unreachable
    loop {
        heap.clear();
        for u in 0..s.pos.len() {
            if s.alive_v[u] {
                for w in s.neighbors(u) {
                    if u < w {
                        heap.push(s.candidate(u, w));
                    }
                }
            }
        }
        let mut progressed = false;
        while let Some(c) = heap.pop() {
            if s.live_faces <= target_faces {
                return s.into_mesh();
            }
            if !s.alive_v[c.u] || !s.alive_v[c.v] || (s.stamp[c.u], s.stamp[c.v]) != c.stamp {
                continue;
            }
            if !s.is_legal(&c) {
                continue;
            }
            s.collapse(&c);
            progressed = true;
            s.push_around(c.u, &mut heap);
        }
        if s.live_faces <= target_faces {
            return s.into_mesh();
        }
        if !progressed {
            return Err(Error::DecimationStuck {
                faces: s.live_faces,
                target: target_faces,
            });
        }
    }
}
