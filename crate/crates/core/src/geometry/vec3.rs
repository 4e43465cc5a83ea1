use std::ops::{Add, Neg, Sub};

use super::{GeometryError, Scalar, Sign};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vec3<S> {
    pub x: S,
    pub y: S,
    pub z: S,
}

impl<S: Scalar> Vec3<S> {
    pub fn new(x: S, y: S, z: S) -> Self {
        Vec3 { x, y, z }
    }

    pub fn zero() -> Self {
        Vec3::new(S::zero(), S::zero(), S::zero())
    }

    pub fn from_i64(x: i64, y: i64, z: i64) -> Self {
        Vec3::new(S::from_i64(x), S::from_i64(y), S::from_i64(z))
    }

    pub fn from_array(a: [S; 3]) -> Self {
        let [x, y, z] = a;
        Vec3 { x, y, z }
    }

    pub fn get(&self, axis: usize) -> &S {
        match axis {
            0 => &self.x,
            1 => &self.y,
            _ => &self.z,
        }
    }

    pub fn to_array(&self) -> [S; 3] {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [self.x.to_f64(), self.y.to_f64(), self.z.to_f64()]
    }

    pub fn dot(&self, o: &Self) -> S {
        self.x.clone() * o.x.clone() + self.y.clone() * o.y.clone() + self.z.clone() * o.z.clone()
    }

    /// Right-handed cross product.
    pub fn cross(&self, o: &Self) -> Self {
        Vec3::new(
            self.y.clone() * o.z.clone() - self.z.clone() * o.y.clone(),
            self.z.clone() * o.x.clone() - self.x.clone() * o.z.clone(),
            self.x.clone() * o.y.clone() - self.y.clone() * o.x.clone(),
        )
    }

    pub fn scale(&self, k: S) -> Self {
        Vec3::new(
            self.x.clone() * k.clone(),
            self.y.clone() * k.clone(),
            self.z.clone() * k,
        )
    }

    pub fn norm_sq(&self) -> S {
        self.dot(self)
    }

    pub fn is_zero(&self, eps: f64) -> bool {
        self.x.is_zero_eps(eps) && self.y.is_zero_eps(eps) && self.z.is_zero_eps(eps)
    }

    pub fn approx_eq(&self, o: &Self, eps: f64) -> bool {
        self.x.approx_eq(&o.x, eps) && self.y.approx_eq(&o.y, eps) && self.z.approx_eq(&o.z, eps)
    }

    /// Componentwise maximum absolute difference, in floating point.
    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        let a = self.to_f64();
        let b = o.to_f64();
        (0..3).map(|k| (a[k] - b[k]).abs()).fold(0.0, f64::max)
    }

    pub fn normalized(&self) -> Self {
        S::normalize_direction(self)
    }

    /// Unit vector in floating point, used for tolerance checks that must
    /// not depend on the magnitude of an unnormalized direction.
    pub fn unit_f64(&self) -> [f64; 3] {
        let a = self.to_f64();
        let len = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
        [a[0] / len, a[1] / len, a[2] / len]
    }

    pub fn lerp(&self, o: &Self, t: S) -> Self {
        self.clone() + (o.clone() - self.clone()).scale(t)
    }
}

impl<S: Scalar> Add for Vec3<S> {
    type Output = Vec3<S>;
    fn add(self, o: Self) -> Self {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<S: Scalar> Sub for Vec3<S> {
    type Output = Vec3<S>;
    fn sub(self, o: Self) -> Self {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<S: Scalar> Add for &Vec3<S> {
    type Output = Vec3<S>;
    fn add(self, o: Self) -> Vec3<S> {
        self.clone() + o.clone()
    }
}

impl<S: Scalar> Sub for &Vec3<S> {
    type Output = Vec3<S>;
    fn sub(self, o: Self) -> Vec3<S> {
        self.clone() - o.clone()
    }
}

impl<S: Scalar> Neg for Vec3<S> {
    type Output = Vec3<S>;
    fn neg(self) -> Self {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl<S: Scalar> Neg for &Vec3<S> {
    type Output = Vec3<S>;
    fn neg(self) -> Vec3<S> {
        -self.clone()
    }
}

pub fn cross<S: Scalar>(a: &Vec3<S>, b: &Vec3<S>) -> Vec3<S> {
    a.cross(b)
}

/// Winding normal `(v1 - v0) × (v2 - v0)`, left unnormalized.
pub fn triangle_normal<S: Scalar>(
    v0: &Vec3<S>,
    v1: &Vec3<S>,
    v2: &Vec3<S>,
    eps: f64,
) -> Result<Vec3<S>, GeometryError> {
    let n = (v1 - v0).cross(&(v2 - v0));
    let degenerate = match S::BACKEND {
        super::Backend::Exact => n.is_zero(0.0),
        // Compare twice the area against the edge lengths so that the
        // threshold is scale-aware.
        super::Backend::Float => {
            let e1 = (v1 - v0).norm_sq().to_f64().sqrt();
            let e2 = (v2 - v0).norm_sq().to_f64().sqrt();
            let area2 = n.norm_sq().to_f64().sqrt();
            area2 <= eps * e1.max(e2).max(1.0) || e1 == 0.0 || e2 == 0.0
        }
    };
    if degenerate {
        return Err(GeometryError::DegenerateTriangle);
    }
    Ok(n)
}

/// Sign of the determinant `det(b - a, c - a, d - a)`.
pub fn orient3d<S: Scalar>(a: &Vec3<S>, b: &Vec3<S>, c: &Vec3<S>, d: &Vec3<S>, eps: f64) -> Sign {
    (b - a).cross(&(c - a)).dot(&(d - a)).sign(eps)
}
