//! Block and assembly validity.
//!
//! Blocks must be closed, consistently oriented, connected manifolds with
//! positive volume. Two blocks of an assembly may share boundary (coplanar
//! faces with opposite outward normals) but their interiors must be
//! disjoint. Interpenetration is detected by four tests, in order:
//!
//! 1. a pair of non-coplanar triangles crossing each other transversally,
//! 2. coplanar overlapping triangles with equal outward normals,
//! 3. a vertex of one block strictly inside the other,
//! 4. a cell of a face of one block strictly inside the other, where the
//!    face is cut into cells by every plane of the other block touching it.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use super::mesh::{Aabb, BlockMesh};
use super::Assembly;
use crate::geometry::planar::{
    area_is_positive, centroid, clip_convex, signed_area2, split_by_plane, Projection,
};
use crate::geometry::{parallel_same_direction, triangle_normal, Backend, Plane, Scalar, Sign, Vec3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeshDefect {
    IndexOutOfRange,
    DegenerateFace,
    NotClosed,
    InconsistentOrientation,
    NonManifold,
    Disconnected,
    UnreferencedVertex,
    NonPositiveVolume,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "defect")]
pub enum ViolationKind {
    Interpenetration,
    DegenerateMesh(MeshDefect),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    None,
    Point([f64; 3]),
    Face(usize),
    Edge(usize, usize),
    TrianglePair(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub block: usize,
    pub other: Option<usize>,
    pub kind: ViolationKind,
    pub witness: Witness,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidityReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        ValidityReport {
            ok: violations.is_empty(),
            violations,
        }
    }
}

pub fn validate_block<S: Scalar>(m: &BlockMesh<S>, eps: f64) -> ValidityReport {
    ValidityReport::from_violations(block_violations(0, m, eps))
}

fn defect(block: usize, d: MeshDefect, witness: Witness) -> Violation {
    Violation {
        block,
        other: None,
        kind: ViolationKind::DegenerateMesh(d),
        witness,
    }
}

fn block_violations<S: Scalar>(block: usize, m: &BlockMesh<S>, eps: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    let nv = m.vertices.len();
    for (fi, f) in m.faces.iter().enumerate() {
        if f.iter().any(|&v| v >= nv) {
            out.push(defect(block, MeshDefect::IndexOutOfRange, Witness::Face(fi)));
        }
    }
    if !out.is_empty() {
        return out;
    }
    for (fi, f) in m.faces.iter().enumerate() {
        let degenerate = f[0] == f[1] || f[1] == f[2] || f[0] == f[2] || m.face_normal(fi, eps).is_none();
        if degenerate {
            out.push(defect(block, MeshDefect::DegenerateFace, Witness::Face(fi)));
        }
    }

    let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
    let mut undirected: HashMap<(usize, usize), usize> = HashMap::new();
    for f in &m.faces {
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            *directed.entry((a, b)).or_default() += 1;
            *undirected.entry((a.min(b), a.max(b))).or_default() += 1;
        }
    }
    let mut reported: HashSet<(usize, usize)> = HashSet::new();
    let mut edges: Vec<_> = directed.iter().collect();
    edges.sort();
    for (&(a, b), &count) in edges {
        let key = (a.min(b), a.max(b));
        if reported.contains(&key) {
            continue;
        }
        let kind = if undirected[&key] > 2 {
            Some(MeshDefect::NonManifold)
        } else if count > 1 {
            Some(MeshDefect::InconsistentOrientation)
        } else if !directed.contains_key(&(b, a)) {
            Some(MeshDefect::NotClosed)
        } else {
            None
        };
        if let Some(kind) = kind {
            reported.insert(key);
            out.push(defect(block, kind, Witness::Edge(a, b)));
        }
    }

    // Connectivity over vertices through face edges.
    let mut parent: Vec<usize> = (0..nv).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut used = vec![false; nv];
    for f in &m.faces {
        for k in 0..3 {
            used[f[k]] = true;
            let (ra, rb) = (find(&mut parent, f[k]), find(&mut parent, f[(k + 1) % 3]));
            parent[ra] = rb;
        }
    }
    if let Some(v) = used.iter().position(|u| !u) {
        out.push(defect(block, MeshDefect::UnreferencedVertex, Witness::Edge(v, v)));
    }
    let roots: HashSet<usize> = (0..nv)
        .filter(|&v| used[v])
        .map(|v| find(&mut parent, v))
        .collect();
    if roots.len() > 1 {
        out.push(defect(block, MeshDefect::Disconnected, Witness::None));
    }

    let volume = m.signed_volume();
    let positive = match S::BACKEND {
        Backend::Exact => volume.is_positive(),
        Backend::Float => volume.to_f64() > eps,
    };
    if !positive {
        out.push(defect(block, MeshDefect::NonPositiveVolume, Witness::None));
    }
    out
}

struct Tri<S> {
    v: [Vec3<S>; 3],
    normal: Vec3<S>,
    plane: Plane<S>,
    aabb: Aabb,
}

struct Prepared<S> {
    tris: Vec<Tri<S>>,
    aabb: Aabb,
}

fn prepare<S: Scalar>(m: &BlockMesh<S>, eps: f64) -> Prepared<S> {
    let tris = (0..m.faces.len())
        .filter_map(|f| {
            let [a, b, c] = m.triangle(f);
            let normal = triangle_normal(a, b, c, eps).ok()?;
            Some(Tri {
                v: [a.clone(), b.clone(), c.clone()],
                plane: Plane::new(normal.clone(), a.clone()).ok()?,
                normal,
                aabb: Aabb::of_points([a, b, c], eps),
            })
        })
        .collect();
    Prepared {
        tris,
        aabb: m.aabb(eps),
    }
}

pub fn validate_assembly<S: Scalar>(a: &Assembly<S>) -> ValidityReport {
    let eps = a.tolerance();
    let mut violations: Vec<Violation> = a
        .blocks()
        .iter()
        .enumerate()
        .flat_map(|(i, m)| block_violations(i, m, eps))
        .collect();
    if !violations.is_empty() {
        return ValidityReport::from_violations(violations);
    }
    let prepared: Vec<Prepared<S>> = a.blocks().par_iter().map(|m| prepare(m, eps)).collect();
    let n = prepared.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| prepared[i].aabb.overlaps(&prepared[j].aabb))
        .collect();
    let found: BTreeMap<(usize, usize), Violation> = pairs
        .par_iter()
        .filter_map(|&(i, j)| check_pair(&prepared, i, j, eps).map(|v| ((i, j), v)))
        .collect();
    violations.extend(found.into_values());
    ValidityReport::from_violations(violations)
}

fn interpenetration(i: usize, j: usize, witness: Witness) -> Violation {
    Violation {
        block: i,
        other: Some(j),
        kind: ViolationKind::Interpenetration,
        witness,
    }
}

fn check_pair<S: Scalar>(blocks: &[Prepared<S>], i: usize, j: usize, eps: f64) -> Option<Violation> {
    let (p, q) = (&blocks[i], &blocks[j]);
    for (ai, ta) in p.tris.iter().enumerate() {
        if !ta.aabb.overlaps(&q.aabb) {
            continue;
        }
        for (bi, tb) in q.tris.iter().enumerate() {
            if ta.aabb.overlaps(&tb.aabb) && triangles_interpenetrate(ta, tb, eps) {
                return Some(interpenetration(i, j, Witness::TrianglePair(ai, bi)));
            }
        }
    }
    for (inner, outer) in [(q, p), (p, q)] {
        for v in inner.tris.iter().flat_map(|t| t.v.iter()) {
            if classify_point(outer, v, eps) == Containment::Inside {
                return Some(interpenetration(i, j, Witness::Point(v.to_f64())));
            }
        }
    }
    for (inner, outer) in [(q, p), (p, q)] {
        for t in &inner.tris {
            if let Some(x) = face_cell_inside(t, outer, eps) {
                return Some(interpenetration(i, j, Witness::Point(x.to_f64())));
            }
        }
    }
    None
}

fn signs<S: Scalar>(t: &Tri<S>, plane: &Plane<S>, eps: f64) -> [Sign; 3] {
    [
        plane.side(&t.v[0], eps),
        plane.side(&t.v[1], eps),
        plane.side(&t.v[2], eps),
    ]
}

fn straddles(s: &[Sign; 3]) -> bool {
    s.contains(&Sign::Positive) && s.contains(&Sign::Negative)
}

fn triangles_interpenetrate<S: Scalar>(ta: &Tri<S>, tb: &Tri<S>, eps: f64) -> bool {
    let sb = signs(tb, &ta.plane, eps);
    if sb.iter().all(|s| *s == Sign::Zero) {
        // Coplanar: only same-facing overlap means shared interior.
        if !parallel_same_direction(&ta.normal, &tb.normal, eps) {
            return false;
        }
        let proj = Projection::for_normal(&ta.normal);
        let piece = clip_convex(&proj, &ta.v, &tb.v, eps);
        return area_is_positive(&signed_area2(&proj, &piece), eps);
    }
    let sa = signs(ta, &tb.plane, eps);
    if !straddles(&sa) || !straddles(&sb) {
        return false;
    }
    let dir = ta.normal.cross(&tb.normal);
    let (lo_a, hi_a) = line_interval(ta, &tb.plane, &sa, &dir);
    let (lo_b, hi_b) = line_interval(tb, &ta.plane, &sb, &dir);
    let lo = if lo_a > lo_b { lo_a } else { lo_b };
    let hi = if hi_a < hi_b { hi_a } else { hi_b };
    match S::BACKEND {
        Backend::Exact => hi > lo,
        Backend::Float => {
            let len = dir.norm_sq().to_f64().sqrt();
            (hi - lo).to_f64() / len > eps
        }
    }
}

/// Extent of `t ∩ plane` along `dir`, for a triangle straddling `plane`.
fn line_interval<S: Scalar>(t: &Tri<S>, plane: &Plane<S>, s: &[Sign; 3], dir: &Vec3<S>) -> (S, S) {
    let mut vals: Vec<S> = Vec::with_capacity(3);
    for k in 0..3 {
        let l = (k + 1) % 3;
        if s[k] == Sign::Zero {
            vals.push(t.v[k].dot(dir));
        }
        if (s[k] == Sign::Positive && s[l] == Sign::Negative)
            || (s[k] == Sign::Negative && s[l] == Sign::Positive)
        {
            let (ok, ol) = (plane.offset(&t.v[k]), plane.offset(&t.v[l]));
            let x = t.v[k].lerp(&t.v[l], ok.clone() / (ok - ol));
            vals.push(x.dot(dir));
        }
    }
    let mut lo = vals[0].clone();
    let mut hi = vals[0].clone();
    for v in vals.into_iter().skip(1) {
        if v < lo {
            lo = v.clone();
        }
        if v > hi {
            hi = v;
        }
    }
    (lo, hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Containment {
    Inside,
    Outside,
    Boundary,
}

fn point_in_triangle<S: Scalar>(t: &Tri<S>, p: &Vec3<S>, eps: f64) -> bool {
    if t.plane.side(p, eps) != Sign::Zero {
        return false;
    }
    let proj = Projection::for_normal(&t.normal);
    (0..3).all(|k| proj.side(&t.v[k], &t.v[(k + 1) % 3], p, eps) != Sign::Negative)
}

const RAY_DIRECTIONS: [(i64, i64, i64, i64); 8] = [
    (1, 3, 5, 17),
    (3, 17, 1, 11),
    (-5, 2, 13, 7),
    (7, -11, 3, 19),
    (-2, -9, 5, 23),
    (11, 4, -7, 29),
    (-13, 6, -3, 31),
    (5, -7, -11, 37),
];

enum RayHit {
    Miss,
    Hit,
    Degenerate,
}

fn ray_hit<S: Scalar>(t: &Tri<S>, o: &Vec3<S>, d: &Vec3<S>, eps: f64) -> RayHit {
    let e1 = &t.v[1] - &t.v[0];
    let e2 = &t.v[2] - &t.v[0];
    let h = d.cross(&e2);
    let det = e1.dot(&h);
    let det_zero = match S::BACKEND {
        Backend::Exact => det.is_zero(),
        Backend::Float => {
            let scale = (e1.norm_sq().to_f64() * e2.norm_sq().to_f64()).sqrt() * d.norm_sq().to_f64().sqrt();
            det.to_f64().abs() <= eps * scale.max(f64::MIN_POSITIVE)
        }
    };
    if det_zero {
        // Parallel; grazing the plane counts as degenerate.
        return if t.plane.side(o, eps) == Sign::Zero {
            RayHit::Degenerate
        } else {
            RayHit::Miss
        };
    }
    let s = o - &t.v[0];
    let u = s.dot(&h) / det.clone();
    let qv = s.cross(&e1);
    let v = d.dot(&qv) / det.clone();
    let tt = e2.dot(&qv) / det;
    let w = S::one() - u.clone() - v.clone();
    let st = tt.sign(eps);
    let bary = [u.sign(eps), v.sign(eps), w.sign(eps)];
    if bary.contains(&Sign::Negative) || st == Sign::Negative {
        return RayHit::Miss;
    }
    if st == Sign::Zero || bary.contains(&Sign::Zero) {
        return RayHit::Degenerate;
    }
    RayHit::Hit
}

fn classify_point<S: Scalar>(block: &Prepared<S>, p: &Vec3<S>, eps: f64) -> Containment {
    let a = p.to_f64();
    let outside_box = (0..3).any(|k| a[k] < block.aabb.min[k] || a[k] > block.aabb.max[k]);
    if outside_box {
        return Containment::Outside;
    }
    if block.tris.iter().any(|t| point_in_triangle(t, p, eps)) {
        return Containment::Boundary;
    }
    'dirs: for &(x, y, z, den) in &RAY_DIRECTIONS {
        let d = Vec3::new(
            S::from_ratio(x, den),
            S::from_ratio(y, den),
            S::from_ratio(z, den),
        );
        let mut crossings = 0usize;
        for t in &block.tris {
            match ray_hit(t, p, &d, eps) {
                RayHit::Miss => {}
                RayHit::Hit => crossings += 1,
                RayHit::Degenerate => continue 'dirs,
            }
        }
        return if crossings % 2 == 1 {
            Containment::Inside
        } else {
            Containment::Outside
        };
    }
    Containment::Boundary
}

/// Returns a point of `t` strictly inside `block`, if any.
fn face_cell_inside<S: Scalar>(t: &Tri<S>, block: &Prepared<S>, eps: f64) -> Option<Vec3<S>> {
    if !t.aabb.overlaps(&block.aabb) {
        return None;
    }
    let mut cutters: Vec<Plane<S>> = Vec::new();
    for other in block.tris.iter().filter(|o| o.aabb.overlaps(&t.aabb)) {
        let s = signs(t, &other.plane, eps);
        if s.iter().all(|x| *x == Sign::Zero) {
            for k in 0..3 {
                let edge = &other.v[(k + 1) % 3] - &other.v[k];
                if let Ok(pl) = Plane::new(other.normal.cross(&edge), other.v[k].clone()) {
                    cutters.push(pl);
                }
            }
        } else if s.contains(&Sign::Zero) || straddles(&s) {
            cutters.push(other.plane.clone());
        }
    }
    let mut cells: Vec<Vec<Vec3<S>>> = vec![t.v.to_vec()];
    for pl in &cutters {
        let mut next = Vec::with_capacity(cells.len() * 2);
        for cell in cells {
            let (neg, pos) = split_by_plane(&cell, pl, eps);
            next.extend([neg, pos].into_iter().filter(|c| !c.is_empty()));
        }
        cells = next;
    }
    let proj = Projection::for_normal(&t.normal);
    cells
        .into_iter()
        .filter(|c| area_is_positive(&signed_area2(&proj, c), eps))
        .map(|c| centroid(&c))
        .find(|x| classify_point(block, x, eps) == Containment::Inside)
}
