mod common;

use common::*;
use interlock::assembly::{load_assembly, save_assembly, validate_assembly, AnyAssembly};
use interlock::contacts::find_contacts;
use interlock::generators::{
    cube_grid, cube_grid_on_floor, interlocked_cubes, interlocked_cubes_centered, FramePolicy, GridSpec,
};
use interlock::geometry::{Rational, Scalar, Vec3};
use interlock::matrix::{build_matrix, reduce_rows, Mode};
use interlock::solver::{check_motion, kernel_basis, verify, CertLabel, LpStatus, MotionClass, Status};

fn grid3() -> interlock::assembly::Assembly<Rational> {
    cube_grid(&GridSpec::new(3, 3, FramePolicy::Border))
}

#[test]
fn cube_grid_center_has_four_square_patches() {
    let a = grid3();
    let patches: Vec<_> = find_contacts(&a)
        .into_iter()
        .filter(|p| p.from_block == 4 || p.to_block == 4)
        .collect();
    assert_eq!(patches.len(), 4);
    let mut outward: Vec<Vec3<Rational>> = patches
        .iter()
        .map(|p| {
            if p.from_block == 4 {
                p.normal.clone()
            } else {
                -p.normal.clone()
            }
        })
        .collect();
    outward.sort_by_key(|v| format!("{v:?}"));
    let mut expected = vec![
        Vec3::from_i64(-1, 0, 0),
        Vec3::from_i64(0, 1, 0),
        Vec3::from_i64(0, -1, 0),
        Vec3::from_i64(1, 0, 0),
    ];
    expected.sort_by_key(|v| format!("{v:?}"));
    assert_eq!(outward, expected);
    assert!(patches.iter().all(|p| p.points.len() == 4));
}

#[test]
fn cube_grid_reduced_matrix_matches_golden() {
    let m = reduce_rows(&build_matrix(&grid3(), Mode::Full));
    assert_eq!(m.ncols(), 6);
    assert_eq!(
        sorted_integer_rows(&m.dense()),
        sorted_rows_of_transpose(&CUBE_GRID_AT)
    );
}

#[test]
fn cube_grid_translational_rows() {
    let m = reduce_rows(&build_matrix(&grid3(), Mode::Translational));
    assert_eq!((m.nrows(), m.ncols()), (4, 3));
}

#[test]
fn skew_cube_matrices_match_golden() {
    let a = interlocked_cubes(3, &FramePolicy::Border);
    let m = build_matrix(&a, Mode::Full);
    assert_eq!(m.nrows(), 24);
    assert_eq!(
        sorted_integer_rows(&m.dense()),
        sorted_rows_of_transpose(&SKEW_AT)
    );
    let b = build_matrix(&interlocked_cubes_centered(3, &FramePolicy::Border), Mode::Full);
    assert_eq!(
        sorted_integer_rows(&b.dense()),
        sorted_rows_of_transpose(&SKEW_BT)
    );
}

#[test]
fn verdicts_for_cube_examples() {
    let v = verify(&grid3(), Mode::Full).unwrap();
    assert_eq!(v.status, Status::Sliding);
    let w = v.witness.unwrap();
    assert_eq!(w.values(), [0, 0, 0, 0, 0, 1].map(Rational::from_i64).as_slice());
    assert_eq!(v.certificate.label, CertLabel::Certified);

    let s = verify(&interlocked_cubes(3, &FramePolicy::Border), Mode::Full).unwrap();
    assert_eq!(s.status, Status::Interlocked);
    assert_eq!(s.certificate.kernel_rank_defect, 0);
    assert_eq!(s.certificate.lp_status, LpStatus::Infeasible);
}

#[test]
fn skew_cubes_five_by_five_interlock_in_both_modes() {
    for n in [3, 5] {
        let a = interlocked_cubes(n, &FramePolicy::Border);
        assert!(validate_assembly(&a).ok);
        for mode in [Mode::Full, Mode::Translational] {
            assert_eq!(
                verify(&a, mode).unwrap().status,
                Status::Interlocked,
                "n={n} {mode}"
            );
        }
    }
}

#[test]
fn downward_motion_violates_floor_contact() {
    let a = cube_grid_on_floor(&GridSpec::new(3, 3, FramePolicy::Border));
    let m = reduce_rows(&build_matrix(&a, Mode::Full));
    let down = [0, 0, 0, 0, 0, -1].map(Rational::from_i64);
    let c = check_motion(&m, &down).unwrap();
    assert_eq!(c.class, MotionClass::ViolatingRow);
    let row = c.min_row.unwrap();
    assert_eq!(m.meta()[row].normal, Vec3::from_i64(0, 0, -1));
    let up = [0, 0, 0, 0, 0, 1].map(Rational::from_i64);
    assert_eq!(
        check_motion(&m, &up).unwrap().class,
        MotionClass::NonnegWithPositive
    );
    let plain = reduce_rows(&build_matrix(&grid3(), Mode::Full));
    assert_eq!(check_motion(&plain, &up).unwrap().class, MotionClass::AllZero);
}

#[test]
fn kernel_of_cube_grid_is_vertical_translation() {
    let m = reduce_rows(&build_matrix(&grid3(), Mode::Full));
    let k = kernel_basis(&m);
    assert_eq!(k.len(), 1);
    assert_eq!(k[0].values()[5], Rational::from_i64(1));
}

#[test]
fn document_round_trip_of_skew_cubes() {
    let a = interlocked_cubes(3, &FramePolicy::Border);
    let back = load_assembly(&save_assembly(&a)).unwrap();
    assert_eq!(back.assembly, AnyAssembly::Exact(a));
}

#[test]
fn float_backend_agrees_on_cube_examples() {
    let g = grid3().to_float();
    assert_eq!(verify(&g, Mode::Full).unwrap().status, Status::Sliding);
    let s = interlocked_cubes(3, &FramePolicy::Border).to_float();
    let v = verify(&s, Mode::Full).unwrap();
    assert_eq!(v.status, Status::Interlocked);
    assert_eq!(v.certificate.label, CertLabel::Numerical);
    assert!(s.blocks().iter().all(|b| b.signed_volume().to_f64() > 0.0));
}
