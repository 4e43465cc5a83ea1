//! Face-to-face contact detection between blocks.

use rayon::prelude::*;
use serde::Serialize;

use crate::assembly::Assembly;
use crate::geometry::planar::{
    area_is_positive, clip_convex, convex_hull, dedup_points, signed_area2, Projection,
};
use crate::geometry::{parallel_same_direction, triangle_normal, Backend, Plane, Scalar, Sign, Vec3};

/// Planar region where block `from_block` touches block `to_block`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactPatch<S> {
    pub from_block: usize,
    pub to_block: usize,
    pub plane: Plane<S>,
    /// Points from `from_block` into `to_block`; unit length in floating
    /// point, primitive integer direction when exact.
    pub normal: Vec3<S>,
    pub points: Vec<Vec3<S>>,
    /// Contributing (face of `from_block`, face of `to_block`) pairs.
    pub source: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PatchSummary {
    pub from_block: usize,
    pub to_block: usize,
    pub normal: [f64; 3],
    pub points: Vec<[f64; 3]>,
}

impl<S: Scalar> ContactPatch<S> {
    pub fn summary(&self) -> PatchSummary {
        PatchSummary {
            from_block: self.from_block,
            to_block: self.to_block,
            normal: self.normal.to_f64(),
            points: self.points.iter().map(|p| p.to_f64()).collect(),
        }
    }
}

struct Piece<S> {
    plane: Plane<S>,
    normal: Vec3<S>,
    polygons: Vec<Vec<Vec3<S>>>,
    source: Vec<(usize, usize)>,
}

/// All face-to-face contact patches, ordered by block pair and then by the
/// first contributing face of the lower-indexed block.
pub fn find_contacts<S: Scalar>(a: &Assembly<S>) -> Vec<ContactPatch<S>> {
    let eps = a.tolerance();
    let blocks = a.blocks();
    let boxes: Vec<_> = blocks.iter().map(|b| b.aabb(eps)).collect();
    let pairs: Vec<(usize, usize)> = (0..blocks.len())
        .flat_map(|i| (i + 1..blocks.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| boxes[i].overlaps(&boxes[j]))
        .collect();
    pairs
        .par_iter()
        .map(|&(i, j)| pair_contacts(a, i, j, eps))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn pair_contacts<S: Scalar>(a: &Assembly<S>, i: usize, j: usize, eps: f64) -> Vec<ContactPatch<S>> {
    let (bi, bj) = (&a.blocks()[i], &a.blocks()[j]);
    let box_j = bj.aabb(eps);
    let mut groups: Vec<Piece<S>> = Vec::new();
    for fi in 0..bi.faces.len() {
        let ti = bi.triangle(fi);
        let Ok(ni) = triangle_normal(ti[0], ti[1], ti[2], eps) else {
            continue;
        };
        let tbox = crate::assembly::Aabb::of_points(ti, eps);
        if !tbox.overlaps(&box_j) {
            continue;
        }
        let plane = Plane::new(ni.clone(), ti[0].clone()).expect("nonzero normal");
        let proj = Projection::for_normal(&ni);
        let clip: Vec<Vec3<S>> = ti.iter().map(|&v| v.clone()).collect();
        for fj in 0..bj.faces.len() {
            let tj = bj.triangle(fj);
            if tj.iter().any(|v| plane.side(v, eps) != Sign::Zero) {
                continue;
            }
            let Ok(nj) = triangle_normal(tj[0], tj[1], tj[2], eps) else {
                continue;
            };
            if !parallel_same_direction(&ni, &-nj, eps) {
                continue;
            }
            // Reverse so the subject is counterclockwise about `ni`.
            let subject = vec![tj[2].clone(), tj[1].clone(), tj[0].clone()];
            let piece = clip_convex(&proj, &subject, &clip, eps);
            if !area_is_positive(&signed_area2(&proj, &piece), eps) {
                continue;
            }
            match groups.iter_mut().find(|g| g.plane.same_as(&plane, eps)) {
                Some(g) => {
                    g.polygons.push(piece);
                    g.source.push((fi, fj));
                }
                None => groups.push(Piece {
                    plane: plane.clone(),
                    normal: ni.clone(),
                    polygons: vec![piece],
                    source: vec![(fi, fj)],
                }),
            }
        }
    }
    groups
        .into_iter()
        .filter_map(|g| {
            let proj = Projection::for_normal(&g.normal);
            let all: Vec<Vec3<S>> = g.polygons.iter().flatten().cloned().collect();
            let hull = convex_hull(&proj, &all, eps);
            let total = g
                .polygons
                .iter()
                .fold(S::zero(), |acc, p| acc + signed_area2(&proj, p));
            let hull_area = signed_area2(&proj, &hull);
            let convex = match S::BACKEND {
                Backend::Exact => hull_area == total,
                Backend::Float => {
                    (hull_area.to_f64() - total.to_f64()).abs() <= eps * total.to_f64().max(1.0)
                }
            };
            let points = if convex { hull } else { dedup_points(&all, eps) };
            (points.len() >= 3).then(|| ContactPatch {
                from_block: i,
                to_block: j,
                normal: S::normalize_direction(&g.normal),
                plane: g.plane,
                points,
                source: g.source,
            })
        })
        .collect()
}

/// Drops repeated points within each patch.
pub fn patch_points_dedup<S: Scalar>(patches: Vec<ContactPatch<S>>, eps: f64) -> Vec<ContactPatch<S>> {
    patches
        .into_iter()
        .map(|mut p| {
            p.points = dedup_points(&p.points, eps);
            p
        })
        .collect()
}

/// Patches involving block `b`, with normals flipped to point away from it.
pub fn patches_of_block<S: Scalar>(patches: &[ContactPatch<S>], b: usize) -> Vec<(usize, Vec3<S>)> {
    patches
        .iter()
        .filter_map(|p| {
            if p.from_block == b {
                Some((p.to_block, p.normal.clone()))
            } else if p.to_block == b {
                Some((p.from_block, -p.normal.clone()))
            } else {
                None
            }
        })
        .collect()
}
