//! Deciding whether the cone `{x : Ax ≥ 0}` is trivial.

mod fm;
mod simplex;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::assembly::Assembly;
use crate::geometry::{Backend, Scalar, Sign, Twist, Vec3};
use crate::matrix::{build_matrix, reduce_rows, InterlockingMatrix, MatrixError, Mode};

pub use fm::{fm_oracle, FmResult, FM_MAX_COLS, FM_MAX_ROWS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("simplex exceeded {iterations} iterations")]
    IterationCap { iterations: usize },
    #[error("simplex broke down numerically")]
    Numerical,
    #[error("oracle input {rows}x{cols} exceeds the size cap")]
    OracleTooLarge { rows: usize, cols: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A motion of every free block: a twist `(ω, t)` in full mode, a
/// translation in translational mode.
#[derive(Clone, Debug, PartialEq)]
pub struct MotionVector<S> {
    blocks: Vec<usize>,
    cols_per_block: usize,
    values: Vec<S>,
}

impl<S: Scalar> MotionVector<S> {
    pub fn new(m: &InterlockingMatrix<S>, values: Vec<S>) -> Result<Self, MatrixError> {
        if values.len() != m.ncols() {
            return Err(MatrixError::DimensionMismatch {
                expected: m.ncols(),
                got: values.len(),
            });
        }
        Ok(MotionVector {
            blocks: m.col_map().blocks(),
            cols_per_block: m.col_map().cols_per_block(),
            values,
        })
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn is_zero(&self, eps: f64) -> bool {
        self.values.iter().all(|v| v.is_zero_eps(eps))
    }

    /// Components of one block, in column order.
    pub fn block(&self, k: usize) -> &[S] {
        &self.values[k * self.cols_per_block..(k + 1) * self.cols_per_block]
    }

    /// Twists per free block (translational motions get `ω = 0`).
    pub fn twists(&self) -> Vec<(usize, Twist<S>)> {
        self.blocks
            .iter()
            .enumerate()
            .map(|(k, &b)| {
                let v = self.block(k);
                let twist = match v.len() {
                    6 => Twist::from_slice(v),
                    3 => Twist::translation(Vec3::new(v[0].clone(), v[1].clone(), v[2].clone())),
                    _ => Twist::translation(Vec3::zero()),
                };
                (b, twist)
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let arr = |v: &[S]| v.iter().map(|x| x.to_json()).collect::<Vec<_>>();
        let blocks: Vec<Value> = self
            .blocks
            .iter()
            .enumerate()
            .map(|(k, &b)| {
                let v = self.block(k);
                match v.len() {
                    6 => json!({"block": b, "omega": arr(&v[..3]), "t": arr(&v[3..])}),
                    3 => json!({"block": b, "t": arr(v)}),
                    _ => json!({"block": b, "values": arr(v)}),
                }
            })
            .collect();
        Value::Array(blocks)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Interlocked,
    Sliding,
    Escape,
    Vacuous,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Interlocked => "interlocked",
            Status::Sliding => "sliding",
            Status::Escape => "escape",
            Status::Vacuous => "vacuous",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    NotRun,
    Infeasible,
    Feasible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertLabel {
    Certified,
    Numerical,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub kernel_rank_defect: usize,
    pub lp_status: LpStatus,
    pub backend: Backend,
    pub tolerance: f64,
    pub label: CertLabel,
    pub mode: Mode,
    pub rows: usize,
    pub cols: usize,
    /// Relative error of the LP certificate recomputed from the matrix:
    /// `max|Aᵀy| / (max y · max row norm)` for a positive dependency `y`,
    /// `max(0, −min Ax) / (max|x| · max row norm)` for a strict motion `x`.
    pub lp_residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict<S> {
    pub status: Status,
    pub witness: Option<MotionVector<S>>,
    pub certificate: Certificate,
}

impl<S: Scalar> Verdict<S> {
    pub fn to_json(&self) -> Value {
        json!({
            "status": self.status,
            "witness": self.witness.as_ref().map(|w| w.to_json()),
            "certificate": self.certificate,
        })
    }
}

/// Basis of `ker A`; exact bases are primitive integer vectors.
pub fn kernel_basis<S: Scalar>(m: &InterlockingMatrix<S>) -> Vec<MotionVector<S>> {
    S::null_space(&m.dense(), m.ncols(), m.tolerance())
        .into_iter()
        .map(|v| MotionVector::new(m, v).expect("kernel vector has ncols entries"))
        .collect()
}

/// Outcome of the strict-motion search.
#[derive(Clone, Debug, PartialEq)]
pub enum StrictSearch<S> {
    /// `x` with `Ax ≥ 0` and `𝟙ᵀAx = 1`.
    Motion(MotionVector<S>),
    /// `y ≥ 𝟙` with `Aᵀy = 0`, which rules out any such `x`.
    Dependency(Vec<S>),
}

/// Decides whether some `x` has `Ax ≥ 0` and `Ax ≠ 0`.
pub fn strict_search<S: Scalar>(m: &InterlockingMatrix<S>) -> Result<StrictSearch<S>, SolverError> {
    Ok(
        match simplex::strict_feasible(&m.dense(), m.ncols(), m.tolerance())? {
            simplex::LpOutcome::Strict(x) => {
                StrictSearch::Motion(MotionVector::new(m, x).expect("simplex returns ncols entries"))
            }
            simplex::LpOutcome::Dependency(y) => StrictSearch::Dependency(y),
        },
    )
}

/// Some `x` with `Ax ≥ 0` and `Ax ≠ 0`, if one exists.
pub fn strict_motion_search<S: Scalar>(
    m: &InterlockingMatrix<S>,
) -> Result<Option<MotionVector<S>>, SolverError> {
    Ok(match strict_search(m)? {
        StrictSearch::Motion(x) => Some(x),
        StrictSearch::Dependency(_) => None,
    })
}

fn max_row_norm<S: Scalar>(dense: &[Vec<S>]) -> f64 {
    dense
        .iter()
        .map(|r| r.iter().map(|v| v.to_f64().powi(2)).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE)
}

/// Relative residual of a strict-search outcome, recomputed from `A`.
pub fn lp_residual<S: Scalar>(m: &InterlockingMatrix<S>, outcome: &StrictSearch<S>) -> f64 {
    let dense = m.dense();
    let norm = max_row_norm(&dense);
    match outcome {
        StrictSearch::Motion(x) => {
            let ax = m.apply(x.values()).expect("witness has ncols entries");
            let worst = ax.iter().map(|v| -v.to_f64()).fold(0.0, f64::max);
            let size = x
                .values()
                .iter()
                .map(|v| v.to_f64().abs())
                .fold(f64::MIN_POSITIVE, f64::max);
            worst / (size * norm)
        }
        StrictSearch::Dependency(y) => {
            let size = y.iter().map(|v| v.to_f64().abs()).fold(1.0, f64::max);
            let worst = (0..m.ncols())
                .map(|k| {
                    dense
                        .iter()
                        .zip(y)
                        .fold(S::zero(), |acc, (r, w)| acc + r[k].clone() * w.clone())
                        .to_f64()
                        .abs()
                })
                .fold(0.0, f64::max);
            worst / (size * norm)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MotionClass {
    ViolatingRow,
    AllZero,
    NonnegWithPositive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MotionCheck<S> {
    pub class: MotionClass,
    pub values: Vec<S>,
    /// Index of a smallest entry of `A·x` (`None` for a matrix with no rows).
    pub min_row: Option<usize>,
}

/// Classifies `A·x`; the floating backend compares against the tolerance
/// scaled by the motion's magnitude.
pub fn check_motion<S: Scalar>(m: &InterlockingMatrix<S>, x: &[S]) -> Result<MotionCheck<S>, MatrixError> {
    let values = m.apply(x)?;
    let scale = x.iter().map(|v| v.to_f64().abs()).fold(1.0, f64::max);
    let eps = m.tolerance() * scale;
    let signs: Vec<Sign> = values.iter().map(|v| v.sign(eps)).collect();
    let min_row = (0..values.len()).min_by(|&a, &b| {
        values[a]
            .partial_cmp(&values[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let class = if signs.contains(&Sign::Negative) {
        MotionClass::ViolatingRow
    } else if signs.contains(&Sign::Positive) {
        MotionClass::NonnegWithPositive
    } else {
        MotionClass::AllZero
    };
    Ok(MotionCheck {
        class,
        values,
        min_row,
    })
}

/// Full pipeline on an assembly: contacts, matrix, reduction, kernel, LP.
pub fn verify<S: Scalar>(a: &Assembly<S>, mode: Mode) -> Result<Verdict<S>, SolverError> {
    let m = reduce_rows(&build_matrix(a, mode));
    verify_matrix(&m)
}

/// Kernel and LP stages on a prepared matrix.
pub fn verify_matrix<S: Scalar>(m: &InterlockingMatrix<S>) -> Result<Verdict<S>, SolverError> {
    let mut certificate = Certificate {
        kernel_rank_defect: 0,
        lp_status: LpStatus::NotRun,
        backend: S::BACKEND,
        tolerance: m.tolerance(),
        label: match S::BACKEND {
            Backend::Exact => CertLabel::Certified,
            Backend::Float => CertLabel::Numerical,
        },
        mode: m.mode(),
        rows: m.nrows(),
        cols: m.ncols(),
        lp_residual: None,
    };
    if m.is_vacuous() {
        return Ok(Verdict {
            status: Status::Vacuous,
            witness: None,
            certificate,
        });
    }
    let kernel = kernel_basis(m);
    certificate.kernel_rank_defect = kernel.len();
    if let Some(w) = kernel.into_iter().next() {
        return Ok(Verdict {
            status: Status::Sliding,
            witness: Some(w),
            certificate,
        });
    }
    let outcome = strict_search(m)?;
    let residual = lp_residual(m, &outcome);
    certificate.lp_residual = Some(residual);
    if S::BACKEND == Backend::Float && residual > FLOAT_LP_ACCEPT {
        return Err(SolverError::Numerical);
    }
    Ok(match outcome {
        StrictSearch::Motion(w) => {
            certificate.lp_status = LpStatus::Feasible;
            Verdict {
                status: Status::Escape,
                witness: Some(w),
                certificate,
            }
        }
        StrictSearch::Dependency(_) => {
            certificate.lp_status = LpStatus::Infeasible;
            Verdict {
                status: Status::Interlocked,
                witness: None,
                certificate,
            }
        }
    })
}

/// Largest [`lp_residual`] accepted from the floating backend.
pub const FLOAT_LP_ACCEPT: f64 = 1e-6;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::box_mesh;
    use crate::geometry::Rational;
    use num::Signed;

    fn cube(x: i64, y: i64, z: i64) -> crate::assembly::BlockMesh<Rational> {
        box_mesh(Vec3::from_i64(x, y, z), Vec3::from_i64(x + 1, y + 1, z + 1), "c")
    }

    #[test]
    fn cube_on_floor_escapes_upward() {
        let floor = box_mesh(Vec3::from_i64(-1, -1, -1), Vec3::from_i64(2, 2, 0), "floor");
        let a = Assembly::new(vec![floor, cube(0, 0, 0)], [0], 0.0).unwrap();
        let m = reduce_rows(&build_matrix(&a, Mode::Full));
        // Horizontal translations keep every contact.
        let v = verify(&a, Mode::Full).unwrap();
        assert_eq!(v.status, Status::Sliding);
        let t = verify(&a, Mode::Translational).unwrap();
        assert_eq!(t.status, Status::Sliding);
        let lift = MotionVector::new(&m, [0, 0, 0, 0, 0, 1].map(Rational::from_i64).to_vec()).unwrap();
        assert_eq!(
            check_motion(&m, lift.values()).unwrap().class,
            MotionClass::NonnegWithPositive
        );
        let w = strict_motion_search(&m).unwrap().unwrap();
        assert_eq!(
            check_motion(&m, w.values()).unwrap().class,
            MotionClass::NonnegWithPositive
        );
    }

    #[test]
    fn floor_only_translational_escape() {
        let floor = box_mesh(Vec3::from_i64(-1, -1, -1), Vec3::from_i64(2, 2, 0), "floor");
        let a = Assembly::new(vec![floor, cube(0, 0, 0)], [0], 0.0).unwrap();
        let m = build_matrix(&a, Mode::Translational);
        let w = strict_motion_search(&m).unwrap().unwrap();
        assert!(w.values()[2].is_positive());
    }

    #[test]
    fn empty_matrix_has_no_strict_motion() {
        let m = InterlockingMatrix::<Rational>::from_dense(vec![], 6, 0.0);
        assert_eq!(strict_motion_search(&m).unwrap(), None);
        assert_eq!(kernel_basis(&m).len(), 6);
    }

    #[test]
    fn vacuous_without_free_blocks() {
        let a = Assembly::new(vec![cube(0, 0, 0), cube(1, 0, 0)], [0, 1], 0.0).unwrap();
        let v = verify(&a, Mode::Full).unwrap();
        assert_eq!(v.status, Status::Vacuous);
        assert_eq!(v.to_json()["status"], "vacuous");
    }

    #[test]
    fn empty_frame_slides() {
        let a = Assembly::new(vec![cube(0, 0, 0), cube(1, 0, 0)], [], 0.0).unwrap();
        let v = verify(&a, Mode::Full).unwrap();
        assert_eq!(v.status, Status::Sliding);
        assert_eq!(v.certificate.label, CertLabel::Certified);
    }

    #[test]
    fn check_motion_classes() {
        let m = InterlockingMatrix::from_dense(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]], 3, 1e-9);
        let c = check_motion(&m, &[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(c.class, MotionClass::AllZero);
        let c = check_motion(&m, &[1.0, -1.0, 0.0]).unwrap();
        assert_eq!((c.class, c.min_row), (MotionClass::ViolatingRow, Some(1)));
        assert!(check_motion(&m, &[1.0]).is_err());
    }
}
