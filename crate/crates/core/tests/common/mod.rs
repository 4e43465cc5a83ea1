#![allow(dead_code)]

pub mod props;

use interlock::geometry::{Rational, Scalar};

/// Reduced matrix of the 3×3 cube grid, printed transposed (columns are rows).
pub const CUBE_GRID_AT: [[i64; 16]; 6] = [
    [0, 0, 0, 0, 1, 0, 0, 1, 0, -1, 0, -1, 0, 0, 0, 0],
    [1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, -1, 0, 0, -1],
    [0, 0, -1, -1, 0, 0, -1, -1, 0, 0, 1, 1, 1, 1, 0, 0],
    [1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, -1, -1, -1, -1],
    [0, 0, 0, 0, -1, -1, -1, -1, 1, 1, 1, 1, 0, 0, 0, 0],
    [0; 16],
];

pub const SKEW_AT: [[i64; 24]; 6] = [
    [
        -3, -3, -4, -4, 4, 4, 5, 5, 0, 0, 0, 0, 0, 0, 0, 0, 4, 4, 3, 3, -5, -5, -4, -4,
    ],
    [
        0, 0, 0, 0, 0, 0, 0, 0, 3, 3, 4, 4, -4, -4, -5, -5, 0, -1, -1, 0, 1, 2, 2, 1,
    ],
    [
        1, 2, 2, 1, 0, -1, -1, 0, -5, -4, -4, -5, 4, 3, 3, 4, 0, 0, 0, 0, 0, 0, 0, 0,
    ],
    [
        0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, -1, -1, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0,
    ],
    [
        1, 1, 1, 1, -1, -1, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
    ],
    [
        0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, -1, -1, -1, -1,
    ],
];

pub const SKEW_BT: [[i64; 24]; 6] = [
    [
        1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -1, -1, -1, -1, 0, 0,
    ],
    [
        0, 0, 0, 0, 0, 0, 0, 0, -1, -1, 0, 0, 0, 0, -1, -1, 1, 0, 0, 1, 0, 1, 1, 0,
    ],
    [
        0, 1, 1, 0, 1, 0, 0, 1, -1, 0, 0, -1, 0, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0,
    ],
    [
        0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, -1, -1, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0,
    ],
    [
        1, 1, 1, 1, -1, -1, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0,
    ],
    [
        0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, -1, -1, -1, -1,
    ],
];

/// Rows of a matrix given by its transpose, sorted.
pub fn sorted_rows_of_transpose<const N: usize>(at: &[[i64; N]; 6]) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = (0..N).map(|r| (0..6).map(|c| at[c][r]).collect()).collect();
    rows.sort();
    rows
}

/// Sorted integer rows of an exact dense matrix; panics on non-integers.
pub fn sorted_integer_rows(dense: &[Vec<Rational>]) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = dense
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| {
                    assert!(v.is_integer(), "non-integer entry {v}");
                    v.to_f64() as i64
                })
                .collect()
        })
        .collect();
    rows.sort();
    rows
}
