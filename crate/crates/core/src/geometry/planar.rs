//! Coplanar polygon operations on 3D points.
//!
//! Polygons stay in 3D so that exact coordinates survive clipping; the
//! orientation predicates work on a projection that drops the dominant
//! axis of a reference normal, with the sign corrected so that "positive"
//! means counterclockwise when seen from the tip of that normal.

use std::cmp::Ordering;

use super::{Backend, Plane, Scalar, Sign, Vec3};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Projection {
    axis: usize,
    flip: bool,
}

impl Projection {
    pub fn for_normal<S: Scalar>(n: &Vec3<S>) -> Self {
        let mut axis = 0;
        for k in 1..3 {
            if n.get(k).abs() > n.get(axis).abs() {
                axis = k;
            }
        }
        Projection {
            axis,
            flip: n.get(axis).is_negative(),
        }
    }

    pub fn uv<S: Scalar>(&self, p: &Vec3<S>) -> (S, S) {
        (
            p.get((self.axis + 1) % 3).clone(),
            p.get((self.axis + 2) % 3).clone(),
        )
    }

    /// Twice the signed area of `abc` in the projection.
    pub fn orient<S: Scalar>(&self, a: &Vec3<S>, b: &Vec3<S>, c: &Vec3<S>) -> S {
        let (au, av) = self.uv(a);
        let (bu, bv) = self.uv(b);
        let (cu, cv) = self.uv(c);
        let v = (bu - au.clone()) * (cv - av.clone()) - (bv - av) * (cu - au);
        if self.flip {
            -v
        } else {
            v
        }
    }

    /// Side of `p` relative to the directed line `a → b`; the floating
    /// tolerance applies to the projected distance from the line.
    pub fn side<S: Scalar>(&self, a: &Vec3<S>, b: &Vec3<S>, p: &Vec3<S>, eps: f64) -> Sign {
        let v = self.orient(a, b, p);
        match S::BACKEND {
            Backend::Exact => v.sign(0.0),
            Backend::Float => {
                let (au, av) = self.uv(a);
                let (bu, bv) = self.uv(b);
                let du = (bu - au).to_f64();
                let dv = (bv - av).to_f64();
                let len = (du * du + dv * dv).sqrt();
                if len == 0.0 {
                    return Sign::Zero;
                }
                (v.to_f64() / len).sign(eps)
            }
        }
    }

    fn cmp_uv<S: Scalar>(&self, a: &Vec3<S>, b: &Vec3<S>) -> Ordering {
        let (au, av) = self.uv(a);
        let (bu, bv) = self.uv(b);
        au.partial_cmp(&bu)
            .unwrap_or(Ordering::Equal)
            .then(av.partial_cmp(&bv).unwrap_or(Ordering::Equal))
    }
}

pub fn signed_area2<S: Scalar>(proj: &Projection, poly: &[Vec3<S>]) -> S {
    if poly.len() < 3 {
        return S::zero();
    }
    let o = &poly[0];
    (1..poly.len() - 1).fold(S::zero(), |acc, k| acc + proj.orient(o, &poly[k], &poly[k + 1]))
}

/// Whether a projected doubled area counts as positive.
pub fn area_is_positive<S: Scalar>(area2: &S, eps: f64) -> bool {
    match S::BACKEND {
        Backend::Exact => area2.is_positive(),
        Backend::Float => area2.to_f64() > eps,
    }
}

/// Intersection of a convex polygon with a convex, counterclockwise clip
/// polygon (Sutherland–Hodgman).
pub fn clip_convex<S: Scalar>(
    proj: &Projection,
    subject: &[Vec3<S>],
    clip: &[Vec3<S>],
    eps: f64,
) -> Vec<Vec3<S>> {
    let mut out: Vec<Vec3<S>> = subject.to_vec();
    for k in 0..clip.len() {
        if out.is_empty() {
            break;
        }
        let a = &clip[k];
        let b = &clip[(k + 1) % clip.len()];
        let input = std::mem::take(&mut out);
        let vals: Vec<(S, Sign)> = input
            .iter()
            .map(|p| (proj.orient(a, b, p), proj.side(a, b, p, eps)))
            .collect();
        for i in 0..input.len() {
            let j = (i + 1) % input.len();
            let (ref vi, si) = vals[i];
            let (ref vj, sj) = vals[j];
            if si != Sign::Negative {
                out.push(input[i].clone());
            }
            if (si == Sign::Positive && sj == Sign::Negative)
                || (si == Sign::Negative && sj == Sign::Positive)
            {
                let t = vi.clone() / (vi.clone() - vj.clone());
                out.push(input[i].lerp(&input[j], t));
            }
        }
    }
    dedup_cyclic(out, eps)
}

fn dedup_cyclic<S: Scalar>(poly: Vec<Vec3<S>>, eps: f64) -> Vec<Vec3<S>> {
    let mut out: Vec<Vec3<S>> = Vec::with_capacity(poly.len());
    for p in poly {
        if out.last().is_some_and(|q| q.approx_eq(&p, eps)) {
            continue;
        }
        out.push(p);
    }
    while out.len() > 1 && out[0].approx_eq(out.last().unwrap(), eps) {
        out.pop();
    }
    out
}

/// Removes repeated points (exactly or within `eps`), keeping first occurrences.
pub fn dedup_points<S: Scalar>(points: &[Vec3<S>], eps: f64) -> Vec<Vec3<S>> {
    let mut out: Vec<Vec3<S>> = Vec::new();
    for p in points {
        if !out.iter().any(|q| q.approx_eq(p, eps)) {
            out.push(p.clone());
        }
    }
    out
}

/// Strictly convex hull (collinear points dropped), counterclockwise.
pub fn convex_hull<S: Scalar>(proj: &Projection, points: &[Vec3<S>], eps: f64) -> Vec<Vec3<S>> {
    let mut pts = dedup_points(points, eps);
    if pts.len() < 3 {
        return pts;
    }
    pts.sort_by(|a, b| proj.cmp_uv(a, b));
    let mut lower: Vec<Vec3<S>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && proj.side(&lower[lower.len() - 2], &lower[lower.len() - 1], p, eps) != Sign::Positive
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec3<S>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && proj.side(&upper[upper.len() - 2], &upper[upper.len() - 1], p, eps) != Sign::Positive
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Splits a convex polygon by a plane into its (negative, positive) parts.
/// Parts of zero area are returned empty.
pub fn split_by_plane<S: Scalar>(
    poly: &[Vec3<S>],
    plane: &Plane<S>,
    eps: f64,
) -> (Vec<Vec3<S>>, Vec<Vec3<S>>) {
    let vals: Vec<(S, Sign)> = poly
        .iter()
        .map(|p| (plane.offset(p), plane.side(p, eps)))
        .collect();
    let mut neg = Vec::new();
    let mut pos = Vec::new();
    for i in 0..poly.len() {
        let j = (i + 1) % poly.len();
        let (ref vi, si) = vals[i];
        let (ref vj, sj) = vals[j];
        match si {
            Sign::Negative => neg.push(poly[i].clone()),
            Sign::Positive => pos.push(poly[i].clone()),
            Sign::Zero => {
                neg.push(poly[i].clone());
                pos.push(poly[i].clone());
            }
        }
        if (si == Sign::Positive && sj == Sign::Negative) || (si == Sign::Negative && sj == Sign::Positive) {
            let t = vi.clone() / (vi.clone() - vj.clone());
            let x = poly[i].lerp(&poly[j], t);
            neg.push(x.clone());
            pos.push(x);
        }
    }
    let neg = dedup_cyclic(neg, eps);
    let pos = dedup_cyclic(pos, eps);
    let keep = |p: Vec<Vec3<S>>| if p.len() >= 3 { p } else { Vec::new() };
    (keep(neg), keep(pos))
}

pub fn centroid<S: Scalar>(points: &[Vec3<S>]) -> Vec3<S> {
    let n = S::from_i64(points.len() as i64);
    let sum = points.iter().fold(Vec3::zero(), |acc, p| acc + p.clone());
    Vec3::new(sum.x / n.clone(), sum.y / n.clone(), sum.z / n)
}
