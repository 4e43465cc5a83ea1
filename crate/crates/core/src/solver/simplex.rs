//! Phase-1 simplex with Bland's anti-cycling rule deciding `∃x: Ax ≥ 0, 𝟙ᵀAx > 0`.
//!
//! The search runs on the alternative system `Aᵀy = 0, y ≥ 𝟙`: exactly one
//! of the two is solvable. A feasible `y` certifies that no strict motion
//! exists; when phase 1 ends with positive infeasibility its simplex
//! multipliers are a strict motion.

use super::SolverError;
use crate::geometry::{Backend, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum LpOutcome<S> {
    /// `x` with `Ax ≥ 0` and `𝟙ᵀAx = 1`.
    Strict(Vec<S>),
    /// `y ≥ 𝟙` with `Aᵀy = 0`.
    Dependency(Vec<S>),
}

pub(crate) fn strict_feasible<S: Scalar>(
    a: &[Vec<S>],
    ncols: usize,
    eps: f64,
) -> Result<LpOutcome<S>, SolverError> {
    let m = a.len();
    let n = ncols;
    if m == 0 || n == 0 {
        return Ok(LpOutcome::Dependency(vec![S::one(); m]));
    }
    // Substituting y = w + z: Aᵀz = −Aᵀw, z ≥ 0. Columns: z (m), artificials
    // (n), rhs. The floating backend uses irregular weights w ∈ [1, 1.5) to
    // break the degeneracy of symmetric assemblies; any positive w is sound.
    let w: Vec<S> = (0..m)
        .map(|i| match S::BACKEND {
            Backend::Exact => S::one(),
            Backend::Float => {
                let k = (((i as f64 + 1.0) * GOLDEN).fract() * 1024.0) as i64;
                S::from_ratio(2048 + k, 2048)
            }
        })
        .collect();
    let art = m;
    let rhs = m + n;
    let width = rhs + 1;
    let zero = S::zero;
    let mut flip = vec![false; n];
    let mut t: Vec<Vec<S>> = Vec::with_capacity(n + 1);
    for k in 0..n {
        let b = a
            .iter()
            .zip(&w)
            .fold(zero(), |acc, (row, wi)| acc - row[k].clone() * wi.clone());
        flip[k] = b.is_negative();
        let mut r = vec![zero(); width];
        for (i, row) in a.iter().enumerate() {
            r[i] = if flip[k] { -row[k].clone() } else { row[k].clone() };
        }
        r[art + k] = S::one();
        r[rhs] = if flip[k] { -b } else { b };
        t.push(r);
    }
    // Reduced costs of `minimize Σ artificials`, with −value in the rhs.
    let mut obj = vec![zero(); width];
    for row in &t {
        for j in (0..art).chain([rhs]) {
            obj[j] = obj[j].clone() - row[j].clone();
        }
    }
    t.push(obj);
    let original = t.clone();
    let scale = t[n][rhs].to_f64().abs().max(1.0);

    let neg = |v: &S| match S::BACKEND {
        Backend::Exact => v.is_negative(),
        Backend::Float => v.to_f64() < -eps,
    };
    let pos = |v: &S| match S::BACKEND {
        Backend::Exact => v.is_positive(),
        Backend::Float => v.to_f64() > eps,
    };

    let mut basis: Vec<usize> = (0..n).map(|k| art + k).collect();
    let cap = 50_000 + 50 * (width + n);
    let mut iterations = 0usize;
    let mut since_reinversion = 0usize;
    let mut degenerate_run = 0usize;
    loop {
        // Phase 1 is done as soon as the artificials are all zero.
        let done = match S::BACKEND {
            Backend::Exact => t[n][rhs].is_zero(),
            Backend::Float => since_reinversion == 0 && t[n][rhs].to_f64().abs() <= eps * scale,
        };
        if done {
            break;
        }
        iterations += 1;
        if iterations > cap {
            return Err(SolverError::IterationCap { iterations: cap });
        }
        // Most negative reduced cost first; Bland's lowest index once a run
        // of degenerate pivots suggests stalling. A floating column whose
        // negative reduced cost is only roundoff has no valid pivot and is
        // passed over.
        let mut candidates: Vec<usize> = (0..rhs).filter(|&j| neg(&t[n][j])).collect();
        if degenerate_run < BLAND_AFTER {
            candidates.sort_by(|&a, &b| t[n][a].to_f64().total_cmp(&t[n][b].to_f64()).then(a.cmp(&b)));
        }
        let mut step = None;
        for enter in candidates {
            match leaving_row(&t, &basis, enter, rhs, eps, &pos) {
                Some(pr) => {
                    step = Some((pr, enter));
                    break;
                }
                None if S::BACKEND == Backend::Float => continue,
                None => return Err(SolverError::Numerical),
            }
        }
        let Some((pr, enter)) = step else {
            if S::BACKEND == Backend::Float && since_reinversion > 0 {
                // Confirm optimality on a freshly computed tableau.
                t = reinvert(&original, &basis)?;
                since_reinversion = 0;
                continue;
            }
            break;
        };
        let degenerate = match S::BACKEND {
            Backend::Exact => t[pr][rhs].is_zero(),
            Backend::Float => t[pr][rhs].to_f64() <= eps,
        };
        degenerate_run = if degenerate { degenerate_run + 1 } else { 0 };
        pivot(&mut t, pr, enter, eps);
        basis[pr] = enter;
        since_reinversion += 1;
        if S::BACKEND == Backend::Float && since_reinversion == REINVERT_EVERY {
            t = reinvert(&original, &basis)?;
            since_reinversion = 0;
        }
    }

    let value = -t[n][rhs].clone();
    let infeasible = match S::BACKEND {
        Backend::Exact => value.is_positive(),
        Backend::Float => value.to_f64() > eps * scale,
    };
    if infeasible {
        // Multiplier of constraint k is 1 − (reduced cost of its artificial),
        // up to the row flip; the strict motion is its negation.
        let mut x: Vec<S> = (0..n)
            .map(|k| {
                let pi = S::one() - t[n][art + k].clone();
                if flip[k] {
                    pi
                } else {
                    -pi
                }
            })
            .collect();
        let total = a.iter().fold(zero(), |acc, row| {
            let ax = row
                .iter()
                .zip(&x)
                .fold(zero(), |s, (r, v)| s + r.clone() * v.clone());
            acc + ax
        });
        if !pos(&total) {
            return Err(SolverError::Numerical);
        }
        for v in &mut x {
            *v = v.clone() / total.clone();
        }
        return Ok(LpOutcome::Strict(x));
    }
    let mut y = w;
    for (i, &b) in basis.iter().enumerate() {
        if b < art {
            y[b] = y[b].clone() + t[i][rhs].clone();
        }
    }
    Ok(LpOutcome::Dependency(y))
}

/// Leaving row for `enter`. Exact: minimum ratio, ties to the lowest basic
/// index. Floating: Harris's two passes, taking the largest pivot among rows
/// whose ratio is within tolerance of the minimum.
fn leaving_row<S: Scalar>(
    t: &[Vec<S>],
    basis: &[usize],
    enter: usize,
    rhs: usize,
    eps: f64,
    pos: &impl Fn(&S) -> bool,
) -> Option<usize> {
    let rows = 0..basis.len();
    if S::BACKEND == Backend::Float {
        let col: Vec<f64> = rows.clone().map(|i| t[i][enter].to_f64()).collect();
        let biggest = col.iter().cloned().fold(0.0, f64::max);
        let piv_tol = HARRIS_PIVOT * biggest.max(1.0);
        let eligible: Vec<usize> = rows.filter(|&i| col[i] > piv_tol).collect();
        let bound = eligible
            .iter()
            .map(|&i| (t[i][rhs].to_f64().max(0.0) + eps) / col[i])
            .fold(f64::INFINITY, f64::min);
        return eligible
            .into_iter()
            .filter(|&i| t[i][rhs].to_f64().max(0.0) / col[i] <= bound)
            .max_by(|&a, &b| col[a].total_cmp(&col[b]).then(basis[b].cmp(&basis[a])));
    }
    let mut leave: Option<(usize, S)> = None;
    for i in rows {
        let coef = &t[i][enter];
        if !pos(coef) {
            continue;
        }
        let ratio = t[i][rhs].clone() / coef.clone();
        let better = match &leave {
            None => true,
            Some((k, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*k]),
        };
        if better {
            leave = Some((i, ratio));
        }
    }
    leave.map(|(i, _)| i)
}

/// Floating pivots below this fraction of the column's largest entry (and
/// below it in absolute terms) are refused.
const HARRIS_PIVOT: f64 = 1e-7;

/// Consecutive degenerate pivots before switching to Bland's rule, which
/// cannot cycle.
const BLAND_AFTER: usize = 8;

/// Floating pivots between recomputations of the tableau.
const REINVERT_EVERY: usize = 50;

/// The tableau for `basis`, recomputed from the initial one by Gaussian
/// elimination with partial pivoting on the basis columns.
fn reinvert<S: Scalar>(original: &[Vec<S>], basis: &[usize]) -> Result<Vec<Vec<S>>, SolverError> {
    let n = basis.len();
    let mut t: Vec<Vec<S>> = original[..n].to_vec();
    for (k, &col) in basis.iter().enumerate() {
        let p = (k..n)
            .max_by(|&a, &b| t[a][col].to_f64().abs().total_cmp(&t[b][col].to_f64().abs()))
            .expect("nonempty range");
        if t[p][col].to_f64().abs() < f64::EPSILON {
            return Err(SolverError::Numerical);
        }
        t.swap(k, p);
        let inv = S::one() / t[k][col].clone();
        for v in t[k].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        let pivot_row = t[k].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == k || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v = v.clone() - f.clone() * pv.clone();
            }
        }
    }
    let obj0 = &original[n];
    let mut obj = obj0.clone();
    for (i, &col) in basis.iter().enumerate() {
        let f = obj0[col].clone();
        if f.is_zero() {
            continue;
        }
        for (v, tv) in obj.iter_mut().zip(&t[i]) {
            *v = v.clone() - f.clone() * tv.clone();
        }
    }
    t.push(obj);
    Ok(t)
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

fn pivot<S: Scalar>(t: &mut [Vec<S>], pr: usize, pc: usize, eps: f64) {
    let dust = eps * 1e-4;
    let p = t[pr][pc].clone();
    let inv = S::one() / p;
    for v in t[pr].iter_mut() {
        if !v.is_zero() {
            *v = v.clone() * inv.clone();
        }
    }
    t[pr][pc] = S::one();
    let pivot_row = t[pr].clone();
    let support: Vec<usize> = (0..pivot_row.len())
        .filter(|&j| !pivot_row[j].is_zero())
        .collect();
    for (i, row) in t.iter_mut().enumerate() {
        if i == pr {
            continue;
        }
        let f = row[pc].clone();
        if f.is_zero() {
            continue;
        }
        for &j in &support {
            row[j] = row[j].clone() - f.clone() * pivot_row[j].clone();
            if S::BACKEND == Backend::Float && row[j].to_f64().abs() < dust {
                row[j] = S::zero();
            }
        }
        row[pc] = S::zero();
    }
}
