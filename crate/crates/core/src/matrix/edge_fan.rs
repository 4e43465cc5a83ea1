//! The 9×6 matrix of three triangles fanning around an edge, and the rank
//! argument built on it.

use serde::Serialize;

use super::MatrixError;
use crate::geometry::{Backend, Scalar, Vec3};

/// Edge `v1 v2` in the plane `z = 0`, its lift `v1', v2'` to `z = 1`, and
/// an intermediate point `p` at height 1.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeFanInput<S> {
    pub v1: Vec3<S>,
    pub v2: Vec3<S>,
    pub p: Vec3<S>,
}

impl<S: Scalar> EdgeFanInput<S> {
    pub fn new(v1: [S; 2], v2: [S; 2], p: [S; 2], eps: f64) -> Result<Self, MatrixError> {
        let [a, b] = v1;
        let [c, d] = v2;
        let [x, y] = p;
        let e = EdgeFanInput {
            v1: Vec3::new(a, b, S::zero()),
            v2: Vec3::new(c, d, S::zero()),
            p: Vec3::new(x, y, S::one()),
        };
        let edge = &e.v2 - &e.v1;
        let off = &e.p - &e.v1;
        let cross2 = edge.x.clone() * off.y.clone() - edge.y.clone() * off.x.clone();
        if edge.is_zero(eps) || cross2.is_zero_eps(eps * edge.norm_sq().to_f64().sqrt()) {
            return Err(MatrixError::DegenerateEdgeFan);
        }
        Ok(e)
    }

    pub fn v1_lift(&self) -> Vec3<S> {
        &self.v1 + &Vec3::new(S::zero(), S::zero(), S::one())
    }

    pub fn v2_lift(&self) -> Vec3<S> {
        &self.v2 + &Vec3::new(S::zero(), S::zero(), S::one())
    }

    /// `(n1, n2, n3)` of the triangles `{v1,v2,p}`, `{v1,v1',p}`, `{v2,v2',p}`.
    pub fn normals(&self) -> [Vec3<S>; 3] {
        let pv1 = &self.p - &self.v1;
        let pv2 = &self.p - &self.v2;
        [
            (&self.v2 - &self.v1).cross(&pv1),
            (&self.v1_lift() - &self.v1).cross(&pv1),
            (&self.v2_lift() - &self.v2).cross(&pv2),
        ]
    }
}

/// Rows `(−(q×n_k), −n_k)` for the three defining points `q` of each triangle.
pub fn edge_fan_matrix<S: Scalar>(e: &EdgeFanInput<S>) -> Vec<Vec<S>> {
    let [n1, n2, n3] = e.normals();
    let triangles = [
        ([e.v1.clone(), e.v2.clone(), e.p.clone()], n1),
        ([e.v1.clone(), e.v1_lift(), e.p.clone()], n2),
        ([e.v2.clone(), e.v2_lift(), e.p.clone()], n3),
    ];
    triangles
        .iter()
        .flat_map(|(pts, n)| {
            pts.iter().map(move |q| {
                let m = -q.cross(n);
                let t = -n.clone();
                vec![m.x, m.y, m.z, t.x, t.y, t.z]
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeRankReport {
    pub rank: usize,
    pub normalized_p: [f64; 2],
    pub det_m1: f64,
    pub det_m2: f64,
    pub closed_form_m1: f64,
    pub closed_form_m2: f64,
    /// Exact backend: determinants equal the closed forms exactly.
    /// Floating backend: within the tolerance.
    pub closed_forms_match: bool,
}

fn det3<S: Scalar>(c: [Vec3<S>; 3]) -> S {
    c[0].cross(&c[1]).dot(&c[2])
}

pub fn matrix_rank<S: Scalar>(rows: &[Vec<S>], ncols: usize, eps: f64) -> usize {
    ncols - S::null_space(rows, ncols, eps).len()
}

/// Determinants of the two 3×3 matrices whose columns are
/// `M1 = ((v1−p)×n1, (v1−p)×n2, (v2−p)×n3)` and
/// `M2 = ((v2−p)×n1, (v1−p)×n2, (v2−p)×n3)` with the edge moved to
/// `v1 = (0,0)`, `v2 = (1,0)`.
pub fn edge_fan_determinants<S: Scalar>(p: [S; 2]) -> (S, S) {
    let e = EdgeFanInput {
        v1: Vec3::zero(),
        v2: Vec3::new(S::one(), S::zero(), S::zero()),
        p: Vec3::new(p[0].clone(), p[1].clone(), S::one()),
    };
    let [n1, n2, n3] = e.normals();
    let a = &e.v1 - &e.p;
    let b = &e.v2 - &e.p;
    let m1 = det3([a.cross(&n1), a.cross(&n2), b.cross(&n3)]);
    let m2 = det3([b.cross(&n1), a.cross(&n2), b.cross(&n3)]);
    (m1, m2)
}

/// `(−p₂(p₁−1)(p₁²+p₂²+1), −p₁p₂(p₁²+p₂²−2p₁+2))`.
pub fn edge_fan_closed_forms<S: Scalar>(p: [S; 2]) -> (S, S) {
    let [p1, p2] = p;
    let one = S::one();
    let two = S::from_i64(2);
    let sq = p1.clone() * p1.clone() + p2.clone() * p2.clone();
    let m1 = -(p2.clone() * (p1.clone() - one.clone()) * (sq.clone() + one));
    let m2 = -(p1.clone() * p2 * (sq - two.clone() * p1 + two));
    (m1, m2)
}

/// Moves the edge to `(0,0)–(1,0)` by a similarity and checks the
/// determinants against their closed forms. The rank is computed on the
/// original input.
pub fn edge_rank_check<S: Scalar>(
    v1: [S; 2],
    v2: [S; 2],
    p: [S; 2],
    eps: f64,
) -> Result<EdgeRankReport, MatrixError> {
    let e = EdgeFanInput::new(v1.clone(), v2.clone(), p.clone(), eps)?;
    let rank = matrix_rank(&edge_fan_matrix(&e), 6, eps);
    // p' = (p − v1) / (v2 − v1) as complex numbers.
    let (dx, dy) = (v2[0].clone() - v1[0].clone(), v2[1].clone() - v1[1].clone());
    let (qx, qy) = (p[0].clone() - v1[0].clone(), p[1].clone() - v1[1].clone());
    let den = dx.clone() * dx.clone() + dy.clone() * dy.clone();
    let np = [
        (qx.clone() * dx.clone() + qy.clone() * dy.clone()) / den.clone(),
        (qy * dx - qx * dy) / den,
    ];
    let (m1, m2) = edge_fan_determinants(np.clone());
    let (c1, c2) = edge_fan_closed_forms(np.clone());
    let closed_forms_match = match S::BACKEND {
        Backend::Exact => m1 == c1 && m2 == c2,
        Backend::Float => m1.approx_eq(&c1, eps) && m2.approx_eq(&c2, eps),
    };
    Ok(EdgeRankReport {
        rank,
        normalized_p: [np[0].to_f64(), np[1].to_f64()],
        det_m1: m1.to_f64(),
        det_m2: m2.to_f64(),
        closed_form_m1: c1.to_f64(),
        closed_form_m2: c2.to_f64(),
        closed_forms_match,
    })
}
