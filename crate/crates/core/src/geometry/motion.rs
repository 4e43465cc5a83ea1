use super::{GeometryError, Scalar, Sign, Vec3};

/// Infinitesimal rigid motion `(ω, t)`; acts on a point as `ω × p + t`.
#[derive(Clone, Debug, PartialEq)]
pub struct Twist<S> {
    pub omega: Vec3<S>,
    pub trans: Vec3<S>,
}

impl<S: Scalar> Twist<S> {
    pub fn new(omega: Vec3<S>, trans: Vec3<S>) -> Self {
        Twist { omega, trans }
    }

    pub fn translation(trans: Vec3<S>) -> Self {
        Twist {
            omega: Vec3::zero(),
            trans,
        }
    }

    /// Flattened `(ω₁, ω₂, ω₃, t₁, t₂, t₃)`.
    pub fn to_vec(&self) -> Vec<S> {
        let mut v = self.omega.to_array().to_vec();
        v.extend(self.trans.to_array());
        v
    }

    pub fn from_slice(v: &[S]) -> Self {
        Twist {
            omega: Vec3::new(v[0].clone(), v[1].clone(), v[2].clone()),
            trans: Vec3::new(v[3].clone(), v[4].clone(), v[5].clone()),
        }
    }

    pub fn velocity(&self, p: &Vec3<S>) -> Vec3<S> {
        self.omega.cross(p) + self.trans.clone()
    }
}

pub fn twist_velocity<S: Scalar>(g: &Twist<S>, p: &Vec3<S>) -> Vec3<S> {
    g.velocity(p)
}

/// Oriented plane through `point` with (unnormalized) `normal`.
#[derive(Clone, Debug, PartialEq)]
pub struct Plane<S> {
    normal: Vec3<S>,
    point: Vec3<S>,
}

impl<S: Scalar> Plane<S> {
    pub fn new(normal: Vec3<S>, point: Vec3<S>) -> Result<Self, GeometryError> {
        if normal.is_zero(0.0) {
            return Err(GeometryError::ZeroNormal);
        }
        Ok(Plane { normal, point })
    }

    pub fn normal(&self) -> &Vec3<S> {
        &self.normal
    }

    pub fn point(&self) -> &Vec3<S> {
        &self.point
    }

    /// Signed offset `(p - point) · normal`.
    pub fn offset(&self, p: &Vec3<S>) -> S {
        (p - &self.point).dot(&self.normal)
    }

    pub fn side(&self, p: &Vec3<S>, eps: f64) -> Sign {
        match S::BACKEND {
            super::Backend::Exact => self.offset(p).sign(0.0),
            // Tolerance applies to the Euclidean distance.
            super::Backend::Float => {
                let len = self.normal.norm_sq().to_f64().sqrt();
                (self.offset(p).to_f64() / len).sign(eps)
            }
        }
    }

    /// Same oriented plane up to positive rescaling of the normal.
    pub fn same_as(&self, other: &Plane<S>, eps: f64) -> bool {
        parallel_same_direction(&self.normal, &other.normal, eps)
            && self.side(&other.point, eps) == Sign::Zero
    }
}

pub fn side_of_plane<S: Scalar>(pl: &Plane<S>, p: &Vec3<S>, eps: f64) -> Sign {
    pl.side(p, eps)
}

/// `a` and `b` point the same way (`a = λ b`, λ > 0).
pub fn parallel_same_direction<S: Scalar>(a: &Vec3<S>, b: &Vec3<S>, eps: f64) -> bool {
    match S::BACKEND {
        super::Backend::Exact => a.cross(b).is_zero(0.0) && a.dot(b).sign(0.0) == Sign::Positive,
        super::Backend::Float => {
            let ua = a.unit_f64();
            let ub = b.unit_f64();
            let dot = ua[0] * ub[0] + ua[1] * ub[1] + ua[2] * ub[2];
            1.0 - dot <= eps
        }
    }
}

/// Proper rigid motion `x ↦ R x + v`.
#[derive(Clone, Debug, PartialEq)]
pub struct RigidMotion<S> {
    pub rotation: [[S; 3]; 3],
    pub translation: Vec3<S>,
}

impl<S: Scalar> RigidMotion<S> {
    pub fn identity() -> Self {
        RigidMotion {
            rotation: identity3(),
            translation: Vec3::zero(),
        }
    }

    pub fn translation(v: Vec3<S>) -> Self {
        RigidMotion {
            rotation: identity3(),
            translation: v,
        }
    }

    pub fn new(rotation: [[S; 3]; 3], translation: Vec3<S>, eps: f64) -> Result<Self, GeometryError> {
        let m = RigidMotion {
            rotation,
            translation,
        };
        if !m.is_proper(eps) {
            return Err(GeometryError::NotARotation);
        }
        Ok(m)
    }

    /// Rotation by `quarter_turns · 90°` about the z axis through the origin.
    pub fn quarter_turn_z(quarter_turns: i32) -> Self {
        let (c, s) = match quarter_turns.rem_euclid(4) {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        };
        let c = S::from_i64(c);
        let s = S::from_i64(s);
        let z = S::zero;
        RigidMotion {
            rotation: [[c.clone(), -s.clone(), z()], [s, c, z()], [z(), z(), S::one()]],
            translation: Vec3::zero(),
        }
    }

    pub fn apply(&self, p: &Vec3<S>) -> Vec3<S> {
        let r = &self.rotation;
        let row = |i: usize| {
            r[i][0].clone() * p.x.clone() + r[i][1].clone() * p.y.clone() + r[i][2].clone() * p.z.clone()
        };
        Vec3::new(row(0), row(1), row(2)) + self.translation.clone()
    }

    pub fn apply_linear(&self, v: &Vec3<S>) -> Vec3<S> {
        RigidMotion {
            rotation: self.rotation.clone(),
            translation: Vec3::zero(),
        }
        .apply(v)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let a = &self.rotation;
        let b = &other.rotation;
        let rotation = std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..3).fold(S::zero(), |acc, k| acc + a[i][k].clone() * b[k][j].clone()))
        });
        RigidMotion {
            rotation,
            translation: self.apply(&other.translation),
        }
    }

    pub fn determinant(&self) -> S {
        let r = &self.rotation;
        let c0 = Vec3::new(r[0][0].clone(), r[1][0].clone(), r[2][0].clone());
        let c1 = Vec3::new(r[0][1].clone(), r[1][1].clone(), r[2][1].clone());
        let c2 = Vec3::new(r[0][2].clone(), r[1][2].clone(), r[2][2].clone());
        c0.cross(&c1).dot(&c2)
    }

    /// `RᵀR = I` and `det R = 1`, exactly or within `eps`.
    pub fn is_proper(&self, eps: f64) -> bool {
        let r = &self.rotation;
        for i in 0..3 {
            for j in 0..3 {
                let dot = (0..3).fold(S::zero(), |acc, k| acc + r[k][i].clone() * r[k][j].clone());
                let expect = if i == j { S::one() } else { S::zero() };
                if !dot.approx_eq(&expect, eps) {
                    return false;
                }
            }
        }
        self.determinant().approx_eq(&S::one(), eps)
    }
}

impl RigidMotion<f64> {
    /// Rotation by `angle` radians about the vertical axis through `(cx, cy)`.
    pub fn rotation_z_about(angle: f64, cx: f64, cy: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let rot = RigidMotion {
            rotation: [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]],
            translation: Vec3::zero(),
        };
        let to_origin = RigidMotion::translation(Vec3::new(-cx, -cy, 0.0));
        let back = RigidMotion::translation(Vec3::new(cx, cy, 0.0));
        back.compose(&rot).compose(&to_origin)
    }
}

fn identity3<S: Scalar>() -> [[S; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { S::one() } else { S::zero() }))
}
