//! Verdict properties shared by the property suite and the acceptance run.

use std::collections::BTreeSet;

use interlock::assembly::{AnyAssembly, Assembly};
use interlock::generators::{
    cube_grid, cube_grid_on_floor, interlocked_cubes, interlocked_cubes_centered, rhomblock, FramePolicy,
    GridSpec,
};
use interlock::geometry::{Rational, Scalar, DEFAULT_TOLERANCE};
use interlock::lozenge::{assemble_rhomblocks, boundary_frame, brick_tiling, flip_shuffle, Variant};
use interlock::matrix::{build_matrix, reduce_rows, Mode};
use interlock::solver::{verify, Status};

pub type Check = Result<(), String>;

const MODES: [Mode; 2] = [Mode::Full, Mode::Translational];

/// Every generator, with its default frame and with the frame shrunk.
pub fn generator_set() -> Vec<(String, AnyAssembly)> {
    let mut out: Vec<(String, AnyAssembly)> = vec![
        (
            "cube_grid 3x3".into(),
            cube_grid(&GridSpec::new(3, 3, FramePolicy::Border)).into(),
        ),
        (
            "cube_grid 4x3".into(),
            cube_grid(&GridSpec::new(4, 3, FramePolicy::Border)).into(),
        ),
        (
            "cube_grid_on_floor 3x3".into(),
            cube_grid_on_floor(&GridSpec::new(3, 3, FramePolicy::Border)).into(),
        ),
        (
            "interlocked_cubes 3".into(),
            interlocked_cubes(3, &FramePolicy::Border).into(),
        ),
        (
            "interlocked_cubes 4".into(),
            interlocked_cubes(4, &FramePolicy::Border).into(),
        ),
        (
            "interlocked_cubes_centered 3".into(),
            interlocked_cubes_centered(3, &FramePolicy::Border).into(),
        ),
    ];
    let single = Assembly::new(vec![rhomblock()], BTreeSet::new(), DEFAULT_TOLERANCE).unwrap();
    out.push(("rhomblock".into(), single.into()));
    for (n, steps) in [(2usize, 0usize), (3, 150)] {
        let t = flip_shuffle(&brick_tiling(n, n, n).unwrap(), steps, n as u64);
        for v in [Variant::First, Variant::Second] {
            let a = assemble_rhomblocks(&t, v)
                .unwrap()
                .with_frame(boundary_frame(&t))
                .unwrap();
            out.push((format!("rhomblocks hex{n} {v}"), a.into()));
        }
    }
    let shrunk: Vec<(String, AnyAssembly)> = out
        .iter()
        .filter(|(_, a)| !a.frame().is_empty())
        .map(|(name, a)| {
            let mut f = a.frame().clone();
            let first = *f.iter().next().unwrap();
            f.remove(&first);
            (format!("{name} minus frame {first}"), a.with_frame(f).unwrap())
        })
        .collect();
    out.extend(shrunk);
    out
}

fn status_of<S: Scalar>(a: &Assembly<S>, mode: Mode) -> Result<Status, String> {
    verify(a, mode)
        .map(|v| v.status)
        .map_err(|e| format!("{mode}: {e}"))
}

/// Enlarging the frame never breaks interlocking.
pub fn frame_monotonicity<S: Scalar>(a: &Assembly<S>, extra: &BTreeSet<usize>) -> Check {
    let mut bigger = a.frame().clone();
    bigger.extend(extra.iter().copied().filter(|&i| i < a.len()));
    let b = a.with_frame(bigger).map_err(|e| e.to_string())?;
    for mode in MODES {
        let before = status_of(a, mode)?;
        let after = status_of(&b, mode)?;
        if before == Status::Interlocked && !matches!(after, Status::Interlocked | Status::Vacuous) {
            return Err(format!(
                "{mode}: interlocked became {after:?} with a larger frame"
            ));
        }
    }
    Ok(())
}

/// Interlocked in full mode implies interlocked in translational mode.
pub fn full_implies_translational<S: Scalar>(a: &Assembly<S>) -> Check {
    let full = status_of(a, Mode::Full)?;
    let trans = status_of(a, Mode::Translational)?;
    if full == Status::Interlocked && trans != Status::Interlocked {
        return Err(format!("full interlocked but translational {trans:?}"));
    }
    Ok(())
}

/// Verdicts do not change when the whole assembly is scaled by `k > 0`.
pub fn scale_invariance<S: Scalar>(a: &Assembly<S>, k: &S) -> Check {
    let b = a.scaled(k);
    for mode in MODES {
        let (x, y) = (status_of(a, mode)?, status_of(&b, mode)?);
        if x != y {
            return Err(format!(
                "{mode}: {x:?} before scaling, {y:?} after scaling by {}",
                k.to_f64()
            ));
        }
    }
    Ok(())
}

fn tol_for<S: Scalar>(scale: f64) -> f64 {
    match S::BACKEND {
        interlock::geometry::Backend::Exact => 0.0,
        interlock::geometry::Backend::Float => 1e-9 * scale.max(1.0),
    }
}

/// With no frame, the same twist applied to every block lies in the kernel.
pub fn uniform_twist_in_kernel<S: Scalar>(a: &Assembly<S>, twist: [i64; 6]) -> Check {
    let open = a.with_frame([]).map_err(|e| e.to_string())?;
    for mode in MODES {
        let m = build_matrix(&open, mode);
        let per: Vec<S> = match mode {
            Mode::Full => twist.iter().map(|&v| S::from_i64(v)).collect(),
            Mode::Translational => twist[3..].iter().map(|&v| S::from_i64(v)).collect(),
        };
        let x: Vec<S> = (0..open.len()).flat_map(|_| per.clone()).collect();
        let ax = m.apply(&x).map_err(|e| e.to_string())?;
        let scale = open
            .blocks()
            .iter()
            .flat_map(|b| b.vertices.iter())
            .flat_map(|p| p.to_f64())
            .fold(1.0f64, |acc, c| acc.max(c.abs()))
            * twist.iter().fold(1.0f64, |acc, &c| acc.max(c.abs() as f64));
        if let Some((i, v)) = ax
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_zero_eps(tol_for::<S>(scale)))
        {
            return Err(format!(
                "{mode}: row {i} gives {} for a uniform twist",
                v.to_f64()
            ));
        }
    }
    Ok(())
}

/// Sliding witnesses are nonzero kernel vectors; escape witnesses satisfy
/// `Ax ≥ 0` with a positive entry.
pub fn witness_soundness<S: Scalar>(a: &Assembly<S>) -> Check {
    for mode in MODES {
        let m = reduce_rows(&build_matrix(a, mode));
        let v = verify(a, mode).map_err(|e| e.to_string())?;
        let Some(w) = v.witness.as_ref() else {
            if matches!(v.status, Status::Sliding | Status::Escape) {
                return Err(format!("{mode}: {:?} without a witness", v.status));
            }
            continue;
        };
        let x = w.values();
        let xmax = x.iter().fold(0.0f64, |acc, c| acc.max(c.to_f64().abs()));
        if xmax == 0.0 {
            return Err(format!("{mode}: zero witness"));
        }
        let ax = m.apply(x).map_err(|e| e.to_string())?;
        let eps = tol_for::<S>(xmax * 100.0);
        match v.status {
            Status::Sliding => {
                if let Some(r) = ax.iter().find(|r| !r.is_zero_eps(eps)) {
                    return Err(format!("{mode}: sliding witness gives row value {}", r.to_f64()));
                }
            }
            Status::Escape => {
                if ax.iter().any(|r| r.to_f64() < -eps) {
                    return Err(format!("{mode}: escape witness violates a contact"));
                }
                if !ax.iter().any(|r| r.to_f64() > eps) {
                    return Err(format!("{mode}: escape witness separates nothing"));
                }
            }
            s => return Err(format!("{mode}: witness attached to {s:?}")),
        }
    }
    Ok(())
}

/// All five properties on one assembly.
pub fn all_properties(a: &AnyAssembly) -> Vec<(&'static str, Check)> {
    match a {
        AnyAssembly::Exact(e) => run_all(e, Rational::new(3.into(), 2.into())),
        AnyAssembly::Float(f) => run_all(f, 2.5),
    }
}

fn run_all<S: Scalar>(a: &Assembly<S>, k: S) -> Vec<(&'static str, Check)> {
    let extra: BTreeSet<usize> = a.free_blocks().into_iter().take(1).collect();
    vec![
        ("frame monotonicity", frame_monotonicity(a, &extra)),
        ("full implies translational", full_implies_translational(a)),
        ("positive-scale invariance", scale_invariance(a, &k)),
        (
            "empty-frame uniform twist in kernel",
            uniform_twist_in_kernel(a, [1, -2, 3, 2, 1, -1]),
        ),
        ("witness soundness", witness_soundness(a)),
    ]
}
