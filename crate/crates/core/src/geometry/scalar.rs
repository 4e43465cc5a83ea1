use std::cmp::Ordering;
use std::fmt::Debug;

use nalgebra::DMatrix;
use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::Vec3;

/// Exact rational coordinate type.
pub type Rational = BigRational;

/// Default tolerance of the floating backend.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// Numeric backend shared by every computation.
///
/// Values of one backend never mix with the other: every generic routine is
/// instantiated for a single `Scalar`, so a computation combining exact and
/// floating coordinates does not type-check. The tolerance argument `eps` is
/// honoured by the floating backend and ignored by the exact one.
pub trait Scalar: Clone + Debug + PartialEq + PartialOrd + Send + Sync + 'static + Signed {
    const BACKEND: Backend;

    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;

    fn sign(&self, eps: f64) -> Sign;

    fn is_zero_eps(&self, eps: f64) -> bool {
        self.sign(eps) == Sign::Zero
    }

    fn approx_eq(&self, other: &Self, eps: f64) -> bool {
        (self.clone() - other.clone()).is_zero_eps(eps)
    }

    /// Rescales a nonzero direction by a positive factor into canonical
    /// form: unit length (floating) or a primitive integer vector (exact).
    fn normalize_direction(v: &Vec3<Self>) -> Vec3<Self>;

    /// Basis of `{x : rows · x = 0}` for a dense matrix with `ncols` columns.
    fn null_space(rows: &[Vec<Self>], ncols: usize, eps: f64) -> Vec<Vec<Self>>;

    fn to_json(&self) -> serde_json::Value;
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sign(&self, eps: f64) -> Sign {
        if *self > eps {
            Sign::Positive
        } else if *self < -eps {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    fn normalize_direction(v: &Vec3<Self>) -> Vec3<Self> {
        let len = v.dot(v).sqrt();
        if len == 0.0 {
            return v.clone();
        }
        v.scale(1.0 / len)
    }

    fn null_space(rows: &[Vec<Self>], ncols: usize, eps: f64) -> Vec<Vec<Self>> {
        if ncols == 0 {
            return Vec::new();
        }
        let max_row_norm = rows
            .iter()
            .map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        if max_row_norm == 0.0 {
            return standard_basis(ncols);
        }
        // Pad with zero rows so the SVD exposes a full right factor.
        let nrows = rows.len().max(ncols);
        let mut dense = DMatrix::<f64>::zeros(nrows, ncols);
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                dense[(i, j)] = *v;
            }
        }
        let svd = dense.svd(false, true);
        let v_t = svd.v_t.expect("right singular vectors requested");
        let threshold = eps * max_row_norm;
        let mut basis = Vec::new();
        for (k, sigma) in svd.singular_values.iter().enumerate() {
            if *sigma <= threshold {
                let mut vec: Vec<f64> = v_t.row(k).iter().copied().collect();
                canonical_sign(&mut vec);
                basis.push(vec);
            }
        }
        basis
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(*self)
    }
}

fn canonical_sign(v: &mut [f64]) {
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap_or(Ordering::Equal))
        .unwrap_or(0.0);
    if pivot < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn standard_basis<S: Scalar>(n: usize) -> Vec<Vec<S>> {
    (0..n)
        .map(|k| {
            (0..n)
                .map(|j| if j == k { S::one() } else { S::zero() })
                .collect()
        })
        .collect()
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Exact;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sign(&self, _eps: f64) -> Sign {
        if self.is_positive() {
            Sign::Positive
        } else if self.is_negative() {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    fn normalize_direction(v: &Vec3<Self>) -> Vec3<Self> {
        let comps = [&v.x, &v.y, &v.z];
        let lcm = comps.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = comps.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        let gcd = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
        if gcd.is_zero() {
            return v.clone();
        }
        let mk = |n: &BigInt| Rational::from_integer(n / &gcd);
        Vec3::new(mk(&ints[0]), mk(&ints[1]), mk(&ints[2]))
    }

    fn null_space(rows: &[Vec<Self>], ncols: usize, _eps: f64) -> Vec<Vec<Self>> {
        let (reduced, pivots) = exact_row_echelon(rows, ncols);
        let mut basis = Vec::new();
        for free in (0..ncols).filter(|c| !pivots.contains(c)) {
            let mut vec = vec![Rational::zero(); ncols];
            vec[free] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                vec[pc] = -reduced[r][free].clone();
            }
            basis.push(primitive_integer_vector(vec));
        }
        basis
    }

    fn to_json(&self) -> serde_json::Value {
        if self.is_integer() {
            if let Some(i) = self.numer().to_i64() {
                return serde_json::Value::from(i);
            }
        }
        serde_json::Value::from(format!("{}/{}", self.numer(), self.denom()))
    }
}

/// Fraction-free (Bareiss) elimination on the integer-scaled matrix,
/// followed by back substitution into reduced row echelon form.
/// Returns the nonzero RREF rows and their pivot columns.
fn exact_row_echelon(rows: &[Vec<Rational>], ncols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let lcm = r.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            r.iter().map(|c| c.numer() * (&lcm / c.denom())).collect()
        })
        .filter(|r: &Vec<BigInt>| r.iter().any(|v| !v.is_zero()))
        .collect();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut row = 0;
    for col in 0..ncols {
        if row >= m.len() {
            break;
        }
        let Some(sel) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, sel);
        for r in row + 1..m.len() {
            for c in col + 1..ncols {
                let v = (&m[row][col] * &m[r][c] - &m[r][col] * &m[row][c]) / &prev;
                m[r][c] = v;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[row][col].clone();
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    let mut reduced: Vec<Vec<Rational>> = m
        .into_iter()
        .map(|r| r.into_iter().map(Rational::from_integer).collect())
        .collect();
    for r in (0..reduced.len()).rev() {
        let pc = pivots[r];
        let pv = reduced[r][pc].clone();
        for v in reduced[r].iter_mut() {
            *v = v.clone() / pv.clone();
        }
        let (upper, lower) = reduced.split_at_mut(r);
        let pivot_row = &lower[0];
        for row in upper {
            let factor = row[pc].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, p) in row.iter_mut().zip(pivot_row) {
                *v = v.clone() - factor.clone() * p.clone();
            }
        }
    }
    (reduced, pivots)
}

/// Exact rank of a rational matrix.
pub fn exact_rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    exact_row_echelon(rows, ncols).1.len()
}

fn primitive_integer_vector(v: Vec<Rational>) -> Vec<Rational> {
    let lcm = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
    if gcd.is_zero() {
        return v;
    }
    ints.into_iter()
        .map(|n| Rational::from_integer(n / &gcd))
        .collect()
}

/// Parses `"p/q"`, `"p"` or a decimal literal into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Ok(n) = text.parse::<BigInt>() {
        return Some(Rational::from_integer(n));
    }
    let (int_part, frac_part) = text.split_once('.')?;
    let negative = int_part.starts_with('-');
    let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
    let n: BigInt = digits.parse().ok()?;
    let d = num::pow(BigInt::from(10), frac_part.len());
    let r = Rational::new(n, d);
    Some(if negative { -r } else { r })
}
