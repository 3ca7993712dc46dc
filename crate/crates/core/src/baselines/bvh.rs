use crate::mesh::vec3::{add, dot, scale, sub, Vec3};
use crate::Mesh;

/// Closest point to `p` on triangle `(a, b, c)`, by Voronoi-region
/// classification.
pub fn closest_point_on_triangle(p: Vec3, a: Vec3, b: Vec3, c: Vec3) -> Vec3 {
    let ab = sub(b, a);
    let ac = sub(c, a);
    let ap = sub(p, a);
    let d1 = dot(ab, ap);
    let d2 = dot(ac, ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return a;
    }
    let bp = sub(p, b);
    let d3 = dot(ab, bp);
    let d4 = dot(ac, bp);
    if d3 >= 0.0 && d4 <= d3 {
        return b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return add(a, scale(ab, v));
    }
    let cp = sub(p, c);
    let d5 = dot(ab, cp);
    let d6 = dot(ac, cp);
    if d6 >= 0.0 && d5 <= d6 {
        return c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return add(a, scale(ac, w));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return add(b, scale(sub(c, b), w));
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    add(a, add(scale(ab, v), scale(ac, w)))
}

pub fn point_triangle_distance2(p: Vec3, tri: &[Vec3; 3]) -> f64 {
    let q = closest_point_on_triangle(p, tri[0], tri[1], tri[2]);
    let d = sub(p, q);
    dot(d, d)
}

#[derive(Clone, Copy)]
struct Aabb {
    lo: Vec3,
    hi: Vec3,
}

impl Aabb {
    fn empty() -> Self {
        Aabb {
            lo: [f64::INFINITY; 3],
            hi: [f64::NEG_INFINITY; 3],
        }
    }

    fn grow(&mut self, p: Vec3) {
        for k in 0..3 {
            self.lo[k] = self.lo[k].min(p[k]);
            self.hi[k] = self.hi[k].max(p[k]);
        }
    }

    fn distance2(&self, p: Vec3) -> f64 {
        let mut d = 0.0;
        for k in 0..3 {
            let e = (self.lo[k] - p[k]).max(0.0).max(p[k] - self.hi[k]);
            d += e * e;
        }
        d
    }
}

const LEAF: usize = 4;

struct Node {
    bounds: Aabb,
    /// Leaf when `count > 0`: triangles `order[first..first + count]`;
    /// otherwise children at `first` and `first + 1`.
    first: usize,
    count: usize,
}

/// Bounding-volume hierarchy over the faces of a mesh for exact
/// point-to-surface queries.
pub struct TriangleBvh {
    tris: Vec<[Vec3; 3]>,
    order: Vec<usize>,
    nodes: Vec<Node>,
}

impl TriangleBvh {
    pub fn new(mesh: &Mesh) -> Self {
        let tris: Vec<[Vec3; 3]> = (0..mesh.num_faces()).map(|f| mesh.face_positions(f)).collect();
        let mut bvh = TriangleBvh {
            order: (0..tris.len()).collect(),
            tris,
            nodes: Vec::new(),
        };
        if !bvh.tris.is_empty() {
            bvh.nodes.push(Node {
                bounds: Aabb::empty(),
                first: 0,
                count: 0,
            });
            bvh.build(0, 0, bvh.tris.len());
        }
        bvh
    }

    fn centroid(&self, t: usize) -> Vec3 {
        let [a, b, c] = self.tris[t];
        scale(add(add(a, b), c), 1.0 / 3.0)
    }

    fn build(&mut self, node: usize, start: usize, end: usize) {
        let mut bounds = Aabb::empty();
        let mut cbox = Aabb::empty();
        for &t in &self.order[start..end] {
            for p in self.tris[t] {
                bounds.grow(p);
            }
            cbox.grow(self.centroid(t));
        }
        self.nodes[node].bounds = bounds;
        if end - start <= LEAF {
            self.nodes[node].first = start;
            self.nodes[node].count = end - start;
            return;
        }
        let axis = (0..3)
            .max_by(|&a, &b| (cbox.hi[a] - cbox.lo[a]).total_cmp(&(cbox.hi[b] - cbox.lo[b])))
            .expect("three axes");
        let mid = (start + end) / 2;
        let cent: Vec<f64> = (0..self.tris.len()).map(|t| self.centroid(t)[axis]).collect();
        self.order[start..end]
            .select_nth_unstable_by(mid - start, |&a, &b| cent[a].total_cmp(&cent[b]));
        let left = self.nodes.len();
        for _ in 0..2 {
            self.nodes.push(Node {
                bounds: Aabb::empty(),
                first: 0,
                count: 0,
            });
        }
        self.nodes[node].first = left;
        self.build(left, start, mid);
        self.build(left + 1, mid, end);
    }

    /// Squared distance from `p` to the nearest face, `None` without
    /// faces.
    pub fn distance2(&self, p: Vec3) -> Option<f64> {
        if self.tris.is_empty() {
            return None;
        }
        let mut best = f64::INFINITY;
        let mut stack = vec![0usize];
        while let Some(n) = stack.pop() {
            let node = &self.nodes[n];
            if node.bounds.distance2(p) > best {
                continue;
            }
            if node.count > 0 {
                for &t in &self.order[node.first..node.first + node.count] {
                    best = best.min(point_triangle_distance2(p, &self.tris[t]));
                }
            } else {
                let (l, r) = (node.first, node.first + 1);
                let (dl, dr) = (
                    self.nodes[l].bounds.distance2(p),
                    self.nodes[r].bounds.distance2(p),
                );
                // visit the nearer child first
                if dl <= dr {
                    stack.push(r);
                    stack.push(l);
                } else {
                    stack.push(l);
                    stack.push(r);
                }
            }
        }
        Some(best)
    }

    pub fn distance(&self, p: Vec3) -> Option<f64> {
        self.distance2(p).map(f64::sqrt)
    }
}
