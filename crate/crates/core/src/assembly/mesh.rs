use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::geometry::{triangle_normal, RigidMotion, Scalar, Vec3};

/// Closed, outward-oriented triangulated surface of one block.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMesh<S> {
    pub vertices: Vec<Vec3<S>>,
    /// Counterclockwise seen from outside.
    pub faces: Vec<[usize; 3]>,
    pub label: String,
}

/// Axis-aligned bounding box in floating point, used only for prefiltering.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Aabb {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl Aabb {
    pub fn of_points<'a, S: Scalar>(pts: impl IntoIterator<Item = &'a Vec3<S>>, pad: f64) -> Aabb {
        let mut min = [f64::INFINITY; 3];
        let mut max = [f64::NEG_INFINITY; 3];
        for p in pts {
            let a = p.to_f64();
            for k in 0..3 {
                min[k] = min[k].min(a[k]);
                max[k] = max[k].max(a[k]);
            }
        }
        // Exact coordinates may round when converted; pad relative to magnitude.
        for k in 0..3 {
            let slack = pad + 1e-12 * (min[k].abs().max(max[k].abs()) + 1.0);
            min[k] -= slack;
            max[k] += slack;
        }
        Aabb { min, max }
    }

    pub fn overlaps(&self, o: &Aabb) -> bool {
        (0..3).all(|k| self.min[k] <= o.max[k] && o.min[k] <= self.max[k])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MeshStats {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_characteristic: i64,
}

impl<S: Scalar> BlockMesh<S> {
    pub fn new(vertices: Vec<Vec3<S>>, faces: Vec<[usize; 3]>, label: impl Into<String>) -> Self {
        BlockMesh {
            vertices,
            faces,
            label: label.into(),
        }
    }

    pub fn triangle(&self, f: usize) -> [&Vec3<S>; 3] {
        let [a, b, c] = self.faces[f];
        [&self.vertices[a], &self.vertices[b], &self.vertices[c]]
    }

    /// Volume by the divergence theorem; positive for outward orientation.
    pub fn signed_volume(&self) -> S {
        let six = S::from_i64(6);
        self.faces
            .iter()
            .map(|&[a, b, c]| {
                let (a, b, c) = (&self.vertices[a], &self.vertices[b], &self.vertices[c]);
                a.dot(&b.cross(c))
            })
            .fold(S::zero(), |acc, v| acc + v)
            / six
    }

    pub fn stats(&self) -> MeshStats {
        let mut edges = std::collections::HashSet::new();
        let mut used = std::collections::HashSet::new();
        for f in &self.faces {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                edges.insert((a.min(b), a.max(b)));
                used.insert(a);
            }
        }
        let (v, e, f) = (used.len(), edges.len(), self.faces.len());
        MeshStats {
            vertices: v,
            edges: e,
            faces: f,
            euler_characteristic: v as i64 - e as i64 + f as i64,
        }
    }

    pub fn aabb(&self, pad: f64) -> Aabb {
        Aabb::of_points(&self.vertices, pad)
    }

    pub fn face_normal(&self, f: usize, eps: f64) -> Option<Vec3<S>> {
        let [a, b, c] = self.triangle(f);
        triangle_normal(a, b, c, eps).ok()
    }

    pub fn transformed(&self, g: &RigidMotion<S>) -> Self {
        BlockMesh {
            vertices: self.vertices.iter().map(|v| g.apply(v)).collect(),
            faces: self.faces.clone(),
            label: self.label.clone(),
        }
    }

    pub fn translated(&self, v: &Vec3<S>) -> Self {
        self.transformed(&RigidMotion::translation(v.clone()))
    }

    pub fn scaled(&self, k: &S) -> Self {
        BlockMesh {
            vertices: self.vertices.iter().map(|v| v.scale(k.clone())).collect(),
            faces: self.faces.clone(),
            label: self.label.clone(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Flips faces so that neighbours traverse shared edges in opposite
    /// directions, then flips everything if the enclosed volume is negative.
    /// Only meaningful for closed manifold input.
    pub fn with_consistent_orientation(mut self) -> Self {
        let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (fi, f) in self.faces.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                by_edge.entry((a.min(b), a.max(b))).or_default().push(fi);
            }
        }
        let directed = |f: &[usize; 3], a: usize, b: usize| (0..3).any(|k| f[k] == a && f[(k + 1) % 3] == b);
        let mut seen = vec![false; self.faces.len()];
        for start in 0..self.faces.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(fi) = queue.pop_front() {
                let f = self.faces[fi];
                for k in 0..3 {
                    let (a, b) = (f[k], f[(k + 1) % 3]);
                    for &gi in &by_edge[&(a.min(b), a.max(b))] {
                        if seen[gi] {
                            continue;
                        }
                        if directed(&self.faces[gi], a, b) {
                            self.faces[gi].swap(1, 2);
                        }
                        seen[gi] = true;
                        queue.push_back(gi);
                    }
                }
            }
        }
        if self.signed_volume().is_negative() {
            for f in &mut self.faces {
                f.swap(1, 2);
            }
        }
        self
    }

    pub fn to_float(&self) -> BlockMesh<f64> {
        BlockMesh {
            vertices: self
                .vertices
                .iter()
                .map(|v| {
                    let [x, y, z] = v.to_f64();
                    Vec3::new(x, y, z)
                })
                .collect(),
            faces: self.faces.clone(),
            label: self.label.clone(),
        }
    }
}

pub fn transform_block<S: Scalar>(m: &BlockMesh<S>, g: &RigidMotion<S>) -> BlockMesh<S> {
    m.transformed(g)
}

/// Axis-aligned box with the 12-triangle triangulation, outward oriented.
pub fn box_mesh<S: Scalar>(min: Vec3<S>, max: Vec3<S>, label: impl Into<String>) -> BlockMesh<S> {
    let pick = |bx: bool, by: bool, bz: bool| {
        Vec3::new(
            if bx { max.x.clone() } else { min.x.clone() },
            if by { max.y.clone() } else { min.y.clone() },
            if bz { max.z.clone() } else { min.z.clone() },
        )
    };
    // Vertex order of the unit cube listing used by the cube examples:
    // (0,0,1) (0,0,0) (0,1,0) (0,1,1) (1,1,1) (1,1,0) (1,0,0) (1,0,1).
    let vertices = vec![
        pick(false, false, true),
        pick(false, false, false),
        pick(false, true, false),
        pick(false, true, true),
        pick(true, true, true),
        pick(true, true, false),
        pick(true, false, false),
        pick(true, false, true),
    ];
    let quads: [[usize; 4]; 6] = [
        [0, 3, 2, 1], // x = min
        [0, 1, 6, 7], // y = min
        [2, 3, 4, 5], // y = max
        [4, 7, 6, 5], // x = max
        [1, 2, 5, 6], // z = min
        [0, 7, 4, 3], // z = max
    ];
    let faces = quads
        .iter()
        .flat_map(|q| [[q[0], q[1], q[2]], [q[0], q[2], q[3]]])
        .collect();
    BlockMesh::new(vertices, faces, label).with_consistent_orientation()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rational;

    fn unit_cube() -> BlockMesh<Rational> {
        box_mesh(Vec3::from_i64(0, 0, 0), Vec3::from_i64(1, 1, 1), "cube")
    }

    #[test]
    fn unit_cube_volume_and_euler() {
        let c = unit_cube();
        assert_eq!(c.signed_volume(), Rational::from_i64(1));
        let s = c.stats();
        assert_eq!(
            (s.vertices, s.edges, s.faces, s.euler_characteristic),
            (8, 18, 12, 2)
        );
    }

    #[test]
    fn orientation_repair_fixes_flipped_face() {
        let mut c = unit_cube();
        c.faces[3].swap(0, 1);
        c.faces[7].swap(1, 2);
        let fixed = c.with_consistent_orientation();
        assert_eq!(fixed.signed_volume(), Rational::from_i64(1));
    }

    #[test]
    fn transforms_preserve_volume() {
        let c = unit_cube();
        assert_eq!(transform_block(&c, &RigidMotion::identity()), c);
        let t = c.translated(&Vec3::from_i64(0, 0, 1));
        assert_eq!(t.vertices[1], Vec3::from_i64(0, 0, 1));
        assert_eq!(t.signed_volume(), Rational::from_i64(1));
        let r = c.transformed(&RigidMotion::quarter_turn_z(1));
        assert_eq!(r.signed_volume(), Rational::from_i64(1));
    }

    #[test]
    fn aabb_overlap_is_closed() {
        let a = Aabb::of_points(&unit_cube().vertices, 0.0);
        let b = Aabb::of_points(&unit_cube().translated(&Vec3::from_i64(1, 0, 0)).vertices, 0.0);
        let c = Aabb::of_points(&unit_cube().translated(&Vec3::from_i64(3, 0, 0)).vertices, 0.0);
        assert!(a.overlaps(&b));
        assert!(!a.overlaps(&c));
    }
}
