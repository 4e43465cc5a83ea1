//! One PASS/FAIL line per acceptance criterion.

mod common;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::props::{all_properties, generator_set};
use common::*;
use interlock::assembly::validate_block;
use interlock::generators::{
    cube_grid, interlocked_cubes, interlocked_cubes_centered, rhomblock, rhomblock_vertices,
    versatile_fixture, FramePolicy, GridSpec, RHOMBLOCK_FACES,
};
use interlock::geometry::{Backend, Rational, Scalar, Vec3};
use interlock::lozenge::{assemble_rhomblocks, boundary_frame, brick_tiling, flip_shuffle, Variant};
use interlock::matrix::{
    build_matrix, edge_fan_determinants, edge_fan_matrix, edge_rank_check, matrix_rank, reduce_rows,
    EdgeFanInput, InterlockingMatrix, Mode,
};
use interlock::solver::{fm_oracle, verify, verify_matrix, CertLabel, LpStatus, Status};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion(id: u32, name: &str, budget: Option<Duration>, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(p) => Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into())),
    };
    let elapsed = start.elapsed();
    let result = match (result, budget) {
        (Ok(_), Some(b)) if elapsed > b => Err(format!("took {elapsed:.2?}, budget {b:?}")),
        (r, _) => r,
    };
    let (tag, detail) = match &result {
        Ok(d) => ("PASS", d.clone()),
        Err(d) => ("FAIL", d.clone()),
    };
    let line = format!("[{tag}] criterion {id}: {name} ({elapsed:.2?}) {detail}\n");
    // Written to the real stdout so the line shows even when the test passes.
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
    result.is_ok()
}

fn reduced_full<S: Scalar>(a: &interlock::assembly::Assembly<S>) -> InterlockingMatrix<S> {
    reduce_rows(&build_matrix(a, Mode::Full))
}

fn c1_cube_grid_golden() -> Outcome {
    let m = reduced_full(&cube_grid(&GridSpec::new(3, 3, FramePolicy::Border)));
    ensure((m.nrows(), m.ncols()) == (16, 6), || {
        format!("shape {}x{}", m.nrows(), m.ncols())
    })?;
    let got = sorted_integer_rows(&m.dense());
    ensure(got == sorted_rows_of_transpose(&CUBE_GRID_AT), || {
        format!("rows differ: {got:?}")
    })?;
    Ok("16x6 reduced matrix equals the printed one up to row order".into())
}

fn c2_skew_golden() -> Outcome {
    let a = reduced_full(&interlocked_cubes(3, &FramePolicy::Border));
    let b = reduced_full(&interlocked_cubes_centered(3, &FramePolicy::Border));
    for (m, want, label) in [(&a, &SKEW_AT, "A"), (&b, &SKEW_BT, "B")] {
        ensure((m.nrows(), m.ncols()) == (24, 6), || {
            format!("{label} shape {}x{}", m.nrows(), m.ncols())
        })?;
        let got = sorted_integer_rows(&m.dense());
        ensure(got == sorted_rows_of_transpose(want), || {
            format!("{label} rows differ: {got:?}")
        })?;
    }
    Ok("A and centred B equal the printed 24x6 matrices up to row order".into())
}

fn c3_verdicts() -> Outcome {
    let grid = cube_grid(&GridSpec::new(3, 3, FramePolicy::Border));
    let v = verify(&grid, Mode::Full).map_err(|e| e.to_string())?;
    ensure(v.status == Status::Sliding, || {
        format!("cube grid {:?}", v.status)
    })?;
    ensure(v.certificate.label == CertLabel::Certified, || {
        "cube grid label".into()
    })?;
    let w = v.witness.as_ref().ok_or("no witness")?.values().to_vec();
    let zero = Rational::from_i64(0);
    ensure(
        w.len() == 6 && w[..5].iter().all(|x| *x == zero) && w[5] != zero,
        || format!("witness {w:?} is not a multiple of (0,0,0,0,0,1)"),
    )?;
    ensure(
        !fm_oracle(&reduced_full(&grid).dense(), 6).unwrap().trivial_cone,
        || "oracle disagrees on cube grid".into(),
    )?;

    let skew = interlocked_cubes(3, &FramePolicy::Border);
    let v = verify(&skew, Mode::Full).map_err(|e| e.to_string())?;
    ensure(v.status == Status::Interlocked, || {
        format!("skew cubes {:?}", v.status)
    })?;
    ensure(v.certificate.kernel_rank_defect == 0, || {
        "skew kernel nonempty".into()
    })?;
    ensure(v.certificate.lp_status == LpStatus::Infeasible, || {
        "strict LP not infeasible".into()
    })?;
    ensure(
        v.certificate.label == CertLabel::Certified && v.certificate.backend == Backend::Exact,
        || "skew label".into(),
    )?;
    ensure(
        fm_oracle(&reduced_full(&skew).dense(), 6).unwrap().trivial_cone,
        || "oracle disagrees on skew cubes".into(),
    )?;
    Ok("cube grid sliding along (0,0,0,0,0,1); skew cubes interlocked, certified".into())
}

fn c4_versatile() -> Outcome {
    let f = versatile_fixture();
    // Independent integer evaluation of ((p×n), n)·(ω, t).
    let to_i = |v: &Vec3<Rational>| v.to_f64().map(|c| c as i64);
    let (n, om, t) = (to_i(&f.normal), to_i(&f.twist.omega), to_i(&f.twist.trans));
    let oracle: Vec<i64> = f
        .points
        .iter()
        .map(|p| {
            let p = to_i(p);
            let pn = [
                p[1] * n[2] - p[2] * n[1],
                p[2] * n[0] - p[0] * n[2],
                p[0] * n[1] - p[1] * n[0],
            ];
            (0..3).map(|k| pn[k] * om[k] + n[k] * t[k]).sum()
        })
        .collect();
    let got = f.products().map(|r| r.to_f64() as i64);
    ensure(f.products().iter().all(|r| r.is_integer()), || {
        "non-integer product".into()
    })?;
    ensure(oracle == vec![1, 0, 0] && got == [1, 0, 0], || {
        format!("products {got:?}, oracle {oracle:?}")
    })?;
    Ok("products (1, 0, 0)".into())
}

/// Determinants of M1 and M2 evaluated from their column definitions in f64.
fn direct_dets(p: [f64; 2]) -> (f64, f64) {
    let cross = |a: [f64; 3], b: [f64; 3]| {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let sub = |a: [f64; 3], b: [f64; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    let det = |c: [[f64; 3]; 3]| {
        let x = cross(c[0], c[1]);
        x[0] * c[2][0] + x[1] * c[2][1] + x[2] * c[2][2]
    };
    let (v1, v2, pp) = ([0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [p[0], p[1], 1.0]);
    let up = [0.0, 0.0, 1.0];
    let n1 = cross(sub(v2, v1), sub(pp, v1));
    let n2 = cross(up, sub(pp, v1));
    let n3 = cross(up, sub(pp, v2));
    let (a, b) = (sub(v1, pp), sub(v2, pp));
    (
        det([cross(a, n1), cross(a, n2), cross(b, n3)]),
        det([cross(b, n1), cross(a, n2), cross(b, n3)]),
    )
}

fn c5_edge_fan() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut rat = |nonzero: bool| loop {
        let (n, d) = (rng.random_range(-60i64..=60), rng.random_range(1i64..=25));
        if !nonzero || n != 0 {
            return Rational::from_ratio(n, d);
        }
    };
    let v1 = [Rational::from_i64(0), Rational::from_i64(0)];
    let v2 = [Rational::from_i64(1), Rational::from_i64(0)];
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let p = [rat(false), rat(true)];
        let rep = edge_rank_check(v1.clone(), v2.clone(), p.clone(), 0.0).map_err(|e| e.to_string())?;
        ensure(rep.rank == 6, || format!("rank {} at {p:?}", rep.rank))?;
        // Closed forms, written out independently.
        let [p1, p2] = p.clone();
        let one = Rational::from_i64(1);
        let sq = p1.clone() * p1.clone() + p2.clone() * p2.clone();
        let want1 = -(p2.clone() * (p1.clone() - one.clone()) * (sq.clone() + one.clone()));
        let want2 =
            -(p1.clone() * p2.clone() * (sq - Rational::from_i64(2) * p1.clone() + Rational::from_i64(2)));
        let (m1, m2) = edge_fan_determinants(p.clone());
        ensure(m1 == want1 && m2 == want2 && rep.closed_forms_match, || {
            format!("exact determinants differ at {p:?}")
        })?;

        let pf = [p1.to_f64(), p2.to_f64()];
        let (f1, f2) = edge_fan_determinants(pf);
        let (d1, d2) = direct_dets(pf);
        for (lib, direct) in [(f1, d1), (f2, d2)] {
            let rel = (lib - direct).abs() / direct.abs().max(1.0);
            worst = worst.max(rel);
            ensure(rel <= 1e-9, || {
                format!("float determinant {lib} vs direct {direct} at {pf:?}")
            })?;
        }
    }
    for p1 in [-3, 0, 1, 2, 7] {
        let e = EdgeFanInput {
            v1: Vec3::<Rational>::from_i64(0, 0, 0),
            v2: Vec3::from_i64(1, 0, 0),
            p: Vec3::new(
                Rational::from_ratio(p1, 3),
                Rational::from_i64(0),
                Rational::from_i64(1),
            ),
        };
        let r = matrix_rank(&edge_fan_matrix(&e), 6, 0.0);
        ensure(r < 6, || format!("p2 = 0, p1 = {p1}/3 gives rank {r}"))?;
    }
    Ok(format!(
        "1000 samples rank 6, exact closed forms, float rel err <= {worst:.1e}; p2 = 0 drops rank"
    ))
}

fn c6_rhomblock() -> Outcome {
    let b = rhomblock();
    let s = b.stats();
    ensure(
        (s.vertices, s.faces, s.edges, s.euler_characteristic) == (10, 16, 24, 2),
        || format!("stats {s:?}"),
    )?;
    ensure(validate_block(&b, 1e-9).ok, || {
        "block is not a closed oriented manifold".into()
    })?;
    let vol = b.signed_volume();
    ensure(vol > 0.0, || format!("volume {vol}"))?;
    let (r3, h) = (3.0f64.sqrt(), (2.0f64 / 3.0).sqrt());
    let table = [
        [0.0, 0.0, 0.0],
        [0.5, r3 / 2.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.5, -r3 / 2.0, 0.0],
        [0.0, 0.0, h],
        [0.5, r3 / 6.0, h],
        [1.0, 0.0, h],
        [1.0, -r3 / 3.0, h],
        [0.5, -r3 / 2.0, h],
        [0.0, -r3 / 3.0, h],
    ];
    for (k, (v, want)) in b.vertices.iter().zip(table).enumerate() {
        let got = v.to_f64();
        ensure((0..3).all(|c| (got[c] - want[c]).abs() <= 1e-12), || {
            format!("v{} = {got:?}", k + 1)
        })?;
    }
    ensure(rhomblock_vertices().len() == 10, || "vertex table".into())?;
    let mut faces: Vec<[usize; 3]> = b
        .faces
        .iter()
        .map(|f| {
            let mut g = f.map(|i| i + 1);
            g.sort();
            g
        })
        .collect();
    faces.sort();
    let mut want: Vec<[usize; 3]> = RHOMBLOCK_FACES.to_vec();
    want.sort();
    ensure(faces == want, || "face list differs".into())?;
    Ok(format!("10/16/24, chi 2, closed and outward, volume {vol:.6}"))
}

fn c7_lozenge() -> Outcome {
    let mut summary = Vec::new();
    for n in [2usize, 3, 4] {
        let brick = brick_tiling(n, n, n).map_err(|e| e.to_string())?;
        let mut framed = 0;
        let mut worst = 0.0f64;
        for k in 0..50u64 {
            let t = flip_shuffle(&brick, 40 * n * n, 1000 * n as u64 + k);
            let frame = boundary_frame(&t);
            for variant in [Variant::First, Variant::Second] {
                let a = assemble_rhomblocks(&t, variant)
                    .map_err(|e| format!("hex{n} seed {k} {variant}: {e}"))?;
                for mode in [Mode::Translational, Mode::Full] {
                    let open =
                        verify(&a, mode).map_err(|e| format!("hex{n} {k} {variant} {mode} open: {e}"))?;
                    ensure(open.status == Status::Sliding, || {
                        format!(
                            "hex{n} seed {k} {variant} {mode}: empty frame gives {:?}",
                            open.status
                        )
                    })?;
                    if n >= 3 {
                        let fa = a.with_frame(frame.clone()).map_err(|e| e.to_string())?;
                        let v = verify(&fa, mode).map_err(|e| format!("hex{n} {k} {variant} {mode}: {e}"))?;
                        ensure(
                            v.status == Status::Interlocked
                                && v.certificate.label == CertLabel::Numerical
                                && v.certificate.tolerance == 1e-9,
                            || {
                                format!(
                                    "hex{n} seed {k} {variant} {mode}: {:?} {:?}",
                                    v.status, v.certificate
                                )
                            },
                        )?;
                        worst = worst.max(v.certificate.lp_residual.unwrap_or(f64::INFINITY));
                        framed += 1;
                    }
                }
            }
        }
        summary.push(if n >= 3 {
            format!("hex{n}: 50 tilings, {framed} framed verdicts interlocked (max residual {worst:.1e})")
        } else {
            format!("hex{n}: 50 tilings valid, open sliding")
        });
    }
    Ok(summary.join("; "))
}

fn c8_properties() -> Outcome {
    let set = generator_set();
    let mut checks = 0;
    let mut statuses = std::collections::BTreeMap::<&str, usize>::new();
    for (name, a) in &set {
        for (prop, check) in all_properties(a) {
            check.map_err(|e| format!("{name}: {prop}: {e}"))?;
            checks += 1;
        }
        let s = match a {
            interlock::assembly::AnyAssembly::Exact(e) => verify(e, Mode::Full).map(|v| v.status),
            interlock::assembly::AnyAssembly::Float(f) => verify(f, Mode::Full).map(|v| v.status),
        }
        .map_err(|e| e.to_string())?;
        *statuses.entry(s.as_str()).or_default() += 1;
    }
    Ok(format!(
        "{checks} checks over {} assemblies, zero failures (full-mode verdicts {statuses:?})",
        set.len()
    ))
}

fn random_matrix(rng: &mut ChaCha8Rng) -> (Vec<Vec<i64>>, usize) {
    let cols = rng.random_range(1..=8usize);
    let rows = rng.random_range(1..=24usize);
    let mut m: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.random_range(-3i64..=3)).collect())
        .collect();
    match rng.random_range(0..3) {
        // Make x0 a strict or weak motion by flipping offending rows.
        0 => {
            let x0: Vec<i64> = (0..cols).map(|_| rng.random_range(-2i64..=2)).collect();
            for r in &mut m {
                let d: i64 = r.iter().zip(&x0).map(|(a, b)| a * b).sum();
                if d < 0 {
                    r.iter_mut().for_each(|v| *v = -*v);
                }
            }
        }
        // Add the negation of some rows, which favours pointed cones.
        1 => {
            let extra: Vec<Vec<i64>> = m
                .iter()
                .take(24 - rows.min(24))
                .filter(|_| rng.random_bool(0.5))
                .map(|r| r.iter().map(|v| -v).collect())
                .collect();
            m.extend(extra);
        }
        _ => {}
    }
    (m, cols)
}

fn c9_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut trivial, mut nontrivial) = (0, 0);
    for k in 0..200 {
        let (ints, cols) = random_matrix(&mut rng);
        let exact: Vec<Vec<Rational>> = ints
            .iter()
            .map(|r| r.iter().map(|&v| Rational::from_i64(v)).collect())
            .collect();
        let oracle = fm_oracle(&exact, cols).map_err(|e| e.to_string())?.trivial_cone;
        let m = InterlockingMatrix::from_dense(exact, cols, 0.0);
        let v = verify_matrix(&m).map_err(|e| format!("matrix {k}: {e}"))?;
        let pipeline = v.status == Status::Interlocked;
        ensure(pipeline == oracle, || {
            format!(
                "matrix {k} {ints:?}: pipeline {:?}, oracle trivial {oracle}",
                v.status
            )
        })?;
        if oracle {
            trivial += 1;
        } else {
            nontrivial += 1;
        }
    }
    Ok(format!(
        "200 matrices agree ({trivial} trivial, {nontrivial} nontrivial cones)"
    ))
}

#[test]
fn acceptance_criteria() {
    let s = Duration::from_secs;
    let results = [
        criterion(1, "golden matrix, cube grid", Some(s(1)), c1_cube_grid_golden),
        criterion(2, "golden matrices, skew cubes", Some(s(1)), c2_skew_golden),
        criterion(3, "verdicts for the cube examples", None, c3_verdicts),
        criterion(4, "versatile fixture products", None, c4_versatile),
        criterion(5, "edge-fan lemma", Some(s(5)), c5_edge_fan),
        criterion(6, "RhomBlock mesh", None, c6_rhomblock),
        criterion(7, "lozenge pipeline", Some(s(60)), c7_lozenge),
        criterion(8, "property suite", None, c8_properties),
        criterion(9, "oracle equivalence", None, c9_oracle),
    ];
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| i + 1)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
