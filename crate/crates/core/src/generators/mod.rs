//! Constructions of the concrete blocks and assemblies used as examples.

use std::collections::BTreeSet;

use crate::assembly::{box_mesh, Assembly, BlockMesh};
use crate::geometry::{Rational, Twist, Vec3, DEFAULT_TOLERANCE};

/// Which blocks of a generated assembly are fixed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum FramePolicy {
    /// Every block that is not surrounded on all sides.
    #[default]
    Border,
    None,
    Explicit(BTreeSet<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub frame: FramePolicy,
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize, frame: FramePolicy) -> Self {
        GridSpec { nx, ny, frame }
    }
}

fn grid_frame(nx: usize, ny: usize, policy: &FramePolicy) -> BTreeSet<usize> {
    match policy {
        FramePolicy::Border => (0..ny)
            .flat_map(|iy| (0..nx).map(move |ix| (ix, iy)))
            .enumerate()
            .filter(|(_, (ix, iy))| *ix == 0 || *iy == 0 || *ix + 1 == nx || *iy + 1 == ny)
            .map(|(k, _)| k)
            .collect(),
        FramePolicy::None => BTreeSet::new(),
        FramePolicy::Explicit(s) => s.clone(),
    }
}

fn frame_checked(blocks: Vec<BlockMesh<Rational>>, frame: BTreeSet<usize>) -> Assembly<Rational> {
    let n = blocks.len();
    let frame: BTreeSet<usize> = frame.into_iter().filter(|&i| i < n).collect();
    Assembly::new(blocks, frame, DEFAULT_TOLERANCE).expect("frame filtered to block range")
}

/// Unit cubes on an `nx × ny` grid, row by row; the cube with grid index
/// `((nx−1)/2, (ny−1)/2)` is `[0,1]³`.
pub fn cube_grid(spec: &GridSpec) -> Assembly<Rational> {
    let (cx, cy) = (
        ((spec.nx.max(1) - 1) / 2) as i64,
        ((spec.ny.max(1) - 1) / 2) as i64,
    );
    let mut blocks = Vec::with_capacity(spec.nx * spec.ny);
    for iy in 0..spec.ny as i64 {
        for ix in 0..spec.nx as i64 {
            let (x, y) = (ix - cx, iy - cy);
            blocks.push(box_mesh(
                Vec3::from_i64(x, y, 0),
                Vec3::from_i64(x + 1, y + 1, 1),
                format!("cube_{ix}_{iy}"),
            ));
        }
    }
    frame_checked(blocks, grid_frame(spec.nx, spec.ny, &spec.frame))
}

/// The cube grid on a fixed slab that supports every cube from below. The
/// slab is the last block and always belongs to the frame.
pub fn cube_grid_on_floor(spec: &GridSpec) -> Assembly<Rational> {
    let grid = cube_grid(spec);
    let (cx, cy) = (
        ((spec.nx.max(1) - 1) / 2) as i64,
        ((spec.ny.max(1) - 1) / 2) as i64,
    );
    let floor = box_mesh(
        Vec3::from_i64(-cx, -cy, -1),
        Vec3::from_i64(spec.nx as i64 - cx, spec.ny as i64 - cy, 0),
        "floor",
    );
    let mut frame = grid.frame().clone();
    frame.insert(grid.len());
    let mut blocks = grid.blocks().to_vec();
    blocks.push(floor);
    frame_checked(blocks, frame)
}

pub const SKEW_V1: [i64; 3] = [1, 1, 2];
pub const SKEW_V2: [i64; 3] = [-1, 2, 1];

/// Side-2 cubes translated by `i·v1 + j·v2` for `i, j ∈ {0..n−1}`, ordered
/// by `i` then `j`.
pub fn interlocked_cubes(n: usize, frame: &FramePolicy) -> Assembly<Rational> {
    let mut blocks = Vec::with_capacity(n * n);
    for i in 0..n as i64 {
        for j in 0..n as i64 {
            let o: [i64; 3] = std::array::from_fn(|k| i * SKEW_V1[k] + j * SKEW_V2[k]);
            blocks.push(box_mesh(
                Vec3::from_i64(o[0], o[1], o[2]),
                Vec3::from_i64(o[0] + 2, o[1] + 2, o[2] + 2),
                format!("cube_{i}_{j}"),
            ));
        }
    }
    frame_checked(blocks, grid_frame(n, n, frame))
}

/// [`interlocked_cubes`] translated so that the middle cube is `[−1,1]³`.
pub fn interlocked_cubes_centered(n: usize, frame: &FramePolicy) -> Assembly<Rational> {
    let c = ((n.max(1) - 1) / 2) as i64;
    let shift: [i64; 3] = std::array::from_fn(|k| -(c * SKEW_V1[k] + c * SKEW_V2[k] + 1));
    interlocked_cubes(n, frame).translated(&Vec3::from_i64(shift[0], shift[1], shift[2]))
}

/// Height of the RhomBlock, `√(2/3)`.
pub fn rhomblock_height() -> f64 {
    (2.0f64 / 3.0).sqrt()
}

/// 1-based face list of the RhomBlock.
pub const RHOMBLOCK_FACES: [[usize; 3]; 16] = [
    [1, 2, 3],
    [1, 3, 4],
    [1, 5, 6],
    [1, 2, 6],
    [2, 3, 6],
    [3, 6, 7],
    [3, 7, 8],
    [3, 4, 8],
    [4, 8, 9],
    [4, 9, 10],
    [1, 4, 10],
    [1, 5, 10],
    [5, 6, 7],
    [5, 9, 10],
    [7, 8, 9],
    [5, 7, 9],
];

pub fn rhomblock_vertices() -> [[f64; 3]; 10] {
    let s3 = 3.0f64.sqrt();
    let h = rhomblock_height();
    [
        [0.0, 0.0, 0.0],
        [0.5, s3 / 2.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.5, -s3 / 2.0, 0.0],
        [0.0, 0.0, h],
        [0.5, s3 / 6.0, h],
        [1.0, 0.0, h],
        [1.0, -s3 / 3.0, h],
        [0.5, -s3 / 2.0, h],
        [0.0, -s3 / 3.0, h],
    ]
}

/// The RhomBlock with outward-oriented, 0-based faces.
pub fn rhomblock() -> BlockMesh<f64> {
    let vertices = rhomblock_vertices()
        .iter()
        .map(|&[x, y, z]| Vec3::new(x, y, z))
        .collect();
    let faces = RHOMBLOCK_FACES
        .iter()
        .map(|f| [f[0] - 1, f[1] - 1, f[2] - 1])
        .collect();
    BlockMesh::new(vertices, faces, "rhomblock").with_consistent_orientation()
}

/// The contact triangle between two Versatile Blocks and the twist moving
/// the right block along its upper edge.
#[derive(Clone, Debug, PartialEq)]
pub struct VersatileFixture {
    pub points: [Vec3<Rational>; 3],
    pub normal: Vec3<Rational>,
    pub twist: Twist<Rational>,
}

pub fn versatile_fixture() -> VersatileFixture {
    VersatileFixture {
        points: [
            Vec3::from_i64(0, 0, 0),
            Vec3::from_i64(0, -1, 1),
            Vec3::from_i64(0, 1, 1),
        ],
        normal: Vec3::from_i64(1, 0, 0),
        twist: Twist::new(Vec3::from_i64(0, -1, 0), Vec3::from_i64(1, 0, 2)),
    }
}

impl VersatileFixture {
    /// `((p×n), n) · (ω, t)` for each contact point.
    pub fn products(&self) -> [Rational; 3] {
        let n = &self.normal;
        self.points
            .clone()
            .map(|p| p.cross(n).dot(&self.twist.omega) + n.dot(&self.twist.trans))
    }
}
