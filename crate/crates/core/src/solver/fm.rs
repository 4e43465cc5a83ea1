//! Fourier–Motzkin elimination, used as an independent check of the simplex
//! pipeline on small matrices.

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use num::{BigInt, Integer, One, Signed, Zero};

use super::SolverError;
use crate::geometry::Rational;

pub const FM_MAX_COLS: usize = 8;
pub const FM_MAX_ROWS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FmResult {
    pub trivial_cone: bool,
}

/// `coef · x ≥ rhs` with integer entries.
#[derive(Clone)]
struct Ineq {
    coef: Vec<BigInt>,
    rhs: BigInt,
    origin: u64,
}

impl Ineq {
    /// Divides by the gcd of all entries.
    fn normalized(mut self) -> Self {
        let g = self
            .coef
            .iter()
            .chain(std::iter::once(&self.rhs))
            .fold(BigInt::zero(), |g, v| g.gcd(v));
        if !g.is_zero() && !g.is_one() {
            self.coef.iter_mut().for_each(|v| *v = &*v / &g);
            self.rhs = &self.rhs / &g;
        }
        self
    }
}

/// Clears the denominators of a rational row.
fn integer_row(r: &[Rational]) -> Vec<BigInt> {
    let l = r.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    r.iter().map(|v| v.numer() * (&l / v.denom())).collect()
}

/// Decides whether `{x : Ax ≥ 0} = {0}` by checking that each of the
/// systems `Ax ≥ 0, ±x_k ≥ 1` is infeasible.
pub fn fm_oracle(a: &[Vec<Rational>], ncols: usize) -> Result<FmResult, SolverError> {
    if ncols > FM_MAX_COLS || a.len() > FM_MAX_ROWS {
        return Err(SolverError::OracleTooLarge {
            rows: a.len(),
            cols: ncols,
        });
    }
    for k in 0..ncols {
        for sign in [1i64, -1] {
            let mut system: Vec<Ineq> = a
                .iter()
                .enumerate()
                .map(|(i, r)| Ineq {
                    coef: integer_row(r),
                    rhs: BigInt::zero(),
                    origin: 1 << i,
                })
                .collect();
            let mut unit = vec![BigInt::zero(); ncols];
            unit[k] = BigInt::from(sign);
            system.push(Ineq {
                coef: unit,
                rhs: BigInt::one(),
                origin: 1 << a.len(),
            });
            if feasible(system, ncols) {
                return Ok(FmResult { trivial_cone: false });
            }
        }
    }
    Ok(FmResult { trivial_cone: true })
}

fn feasible(mut system: Vec<Ineq>, ncols: usize) -> bool {
    let mut remaining: Vec<usize> = (0..ncols).collect();
    for eliminated in 0..ncols {
        // Eliminate the variable producing the fewest combinations.
        let cost = |v: usize| {
            let pos = system.iter().filter(|r| r.coef[v].is_positive()).count();
            let neg = system.iter().filter(|r| r.coef[v].is_negative()).count();
            pos * neg
        };
        let at = (0..remaining.len())
            .min_by_key(|&i| cost(remaining[i]))
            .expect("variables remain");
        let var = remaining.swap_remove(at);
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut next = Vec::new();
        for r in system {
            if r.coef[var].is_positive() {
                pos.push(r);
            } else if r.coef[var].is_negative() {
                neg.push(r);
            } else {
                next.push(r);
            }
        }
        for p in &pos {
            for q in &neg {
                let origin = p.origin | q.origin;
                // Chernikov's rule: a combination of more than
                // `eliminated + 2` original rows is redundant.
                if origin.count_ones() as usize > eliminated + 2 {
                    continue;
                }
                let (cp, cq) = (&p.coef[var], -&q.coef[var]);
                let coef = p
                    .coef
                    .iter()
                    .zip(&q.coef)
                    .map(|(x, y)| x * &cq + y * cp)
                    .collect();
                let rhs = &p.rhs * &cq + &q.rhs * cp;
                next.push(Ineq { coef, rhs, origin }.normalized());
            }
        }
        // Among identical rows keep the one built from the fewest original
        // rows, so that Chernikov's rule stays sound.
        let mut seen: HashMap<(Vec<BigInt>, BigInt), usize> = HashMap::new();
        let mut kept: Vec<Ineq> = Vec::with_capacity(next.len());
        for r in next {
            if r.coef.iter().all(|v| v.is_zero()) {
                if r.rhs.is_positive() {
                    return false;
                }
                continue;
            }
            match seen.entry((r.coef.clone(), r.rhs.clone())) {
                Entry::Occupied(e) => {
                    let k = &mut kept[*e.get()];
                    if r.origin.count_ones() < k.origin.count_ones() {
                        k.origin = r.origin;
                    }
                }
                Entry::Vacant(e) => {
                    e.insert(kept.len());
                    kept.push(r);
                }
            }
        }
        system = kept;
    }
    system.iter().all(|r| !r.rhs.is_positive())
}
