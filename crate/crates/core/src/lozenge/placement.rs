//! RhomBlock placement over lozenges.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{validate_tiling, LozengeError, Tiling};
use crate::assembly::{validate_assembly, Assembly, BlockMesh};
use crate::generators::{rhomblock, rhomblock_height};
use crate::geometry::{RigidMotion, Vec3, DEFAULT_TOLERANCE};

/// Which of the two RhomBlock placement rules to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    #[default]
    First,
    /// The first rule preceded by a half turn of the block about the
    /// vertical axis through the centre of its base rhombus.
    Second,
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::First => "first",
            Variant::Second => "second",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "first" => Ok(Variant::First),
            "second" => Ok(Variant::Second),
            other => Err(format!("unknown variant `{other}` (expected first or second)")),
        }
    }
}

/// Cartesian position of lattice point `(u, v)`.
pub fn lattice_point(u: i64, v: i64) -> (f64, f64) {
    (u as f64 + v as f64 / 2.0, v as f64 * 3.0f64.sqrt() / 2.0)
}

fn turn_z(k: u8, cx: f64, cy: f64) -> RigidMotion<f64> {
    let s3 = 3.0f64.sqrt() / 2.0;
    let (c, s) = match k % 3 {
        0 => (1.0, 0.0),
        1 => (-0.5, s3),
        _ => (-0.5, -s3),
    };
    let rot = RigidMotion {
        rotation: [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]],
        translation: Vec3::zero(),
    };
    RigidMotion::translation(Vec3::new(cx, cy, 0.0))
        .compose(&rot)
        .compose(&RigidMotion::translation(Vec3::new(-cx, -cy, 0.0)))
}

/// Motion carrying the reference RhomBlock (base up `(0,0)` ∪ down
/// `(0,−1)`) onto the lozenge `(u, v, orientation)`.
pub fn placement_motion(u: i64, v: i64, orientation: u8, variant: Variant) -> RigidMotion<f64> {
    let turns = (orientation + 2) % 3;
    let (px, py) = lattice_point(u, v);
    let direct =
        RigidMotion::translation(Vec3::new(px, py, 0.0)).compose(&turn_z(turns, 0.5, 3.0f64.sqrt() / 6.0));
    match variant {
        Variant::First => direct,
        Variant::Second => {
            let half = RigidMotion {
                rotation: [[-1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]],
                translation: Vec3::new(1.0, 0.0, 0.0),
            };
            direct.compose(&half)
        }
    }
}

/// Places one RhomBlock per lozenge. The frame is left empty. Fails if the
/// tiling is invalid or the blocks overlap.
pub fn assemble_rhomblocks(t: &Tiling, variant: Variant) -> Result<Assembly<f64>, LozengeError> {
    let a = place_unchecked(t, |l, base| {
        base.transformed(&placement_motion(l.u, l.v, l.orientation, variant))
    })?;
    let report = validate_assembly(&a);
    if !report.ok {
        return Err(LozengeError::InvalidAssembly(report));
    }
    Ok(a)
}

fn place_unchecked(
    t: &Tiling,
    place: impl Fn(&super::Lozenge, &BlockMesh<f64>) -> BlockMesh<f64>,
) -> Result<Assembly<f64>, LozengeError> {
    if !validate_tiling(t) {
        return Err(LozengeError::InvalidTiling);
    }
    let base = rhomblock();
    let blocks = t
        .lozenges
        .iter()
        .map(|l| place(l, &base).with_label(format!("rhomb_{}_{}_{}", l.u, l.v, l.orientation)))
        .collect();
    Ok(Assembly::new(blocks, BTreeSet::new(), DEFAULT_TOLERANCE).expect("empty frame"))
}

/// Symmetries of the base rhombus and of the block's slab, applied to the
/// reference block before the first placement rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Candidate {
    Identity,
    HalfTurn,
    /// Mirror in the short diagonal `y = 0`.
    MirrorShort,
    /// Mirror in the long diagonal `x = 1/2`.
    MirrorLong,
    /// Upside down: `z ↦ h − z`.
    VerticalFlip,
    VerticalFlipHalfTurn,
}

impl Candidate {
    pub const ALL: [Candidate; 6] = [
        Candidate::Identity,
        Candidate::HalfTurn,
        Candidate::MirrorShort,
        Candidate::MirrorLong,
        Candidate::VerticalFlip,
        Candidate::VerticalFlipHalfTurn,
    ];

    fn apply(&self, p: &Vec3<f64>) -> Vec3<f64> {
        let h = rhomblock_height();
        let (x, y, z) = (p.x, p.y, p.z);
        match self {
            Candidate::Identity => Vec3::new(x, y, z),
            Candidate::HalfTurn => Vec3::new(1.0 - x, -y, z),
            Candidate::MirrorShort => Vec3::new(x, -y, z),
            Candidate::MirrorLong => Vec3::new(1.0 - x, y, z),
            Candidate::VerticalFlip => Vec3::new(x, y, h - z),
            Candidate::VerticalFlipHalfTurn => Vec3::new(1.0 - x, -y, h - z),
        }
    }

    /// Whether the base rhombus stays on the `z = 0` plane.
    pub fn keeps_base(&self) -> bool {
        !matches!(self, Candidate::VerticalFlip | Candidate::VerticalFlipHalfTurn)
    }

    fn reshape(&self, m: &BlockMesh<f64>) -> BlockMesh<f64> {
        BlockMesh::new(
            m.vertices.iter().map(|p| self.apply(p)).collect(),
            m.faces.clone(),
            m.label.clone(),
        )
        .with_consistent_orientation()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateReport {
    pub candidate: Candidate,
    /// Every sampled tiling gave a valid assembly.
    pub valid: bool,
    /// Every sampled tiling gave the same blocks as the first rule.
    pub same_as_first: bool,
    pub keeps_base: bool,
}

fn same_point_sets(a: &Assembly<f64>, b: &Assembly<f64>) -> bool {
    let key = |m: &BlockMesh<f64>| {
        let mut pts: Vec<[i64; 3]> = m
            .vertices
            .iter()
            .map(|p| [p.x, p.y, p.z].map(|c| (c * 1e6).round() as i64))
            .collect();
        pts.sort();
        pts
    };
    a.blocks().iter().zip(b.blocks()).all(|(x, y)| key(x) == key(y))
}

/// Tries each [`Candidate`] on the given tilings.
pub fn discover_variants(tilings: &[Tiling]) -> Result<Vec<CandidateReport>, LozengeError> {
    let mut out = Vec::new();
    for c in Candidate::ALL {
        let mut valid = true;
        let mut same = true;
        for t in tilings {
            let first = place_unchecked(t, |l, base| {
                base.transformed(&placement_motion(l.u, l.v, l.orientation, Variant::First))
            })?;
            let a = place_unchecked(t, |l, base| {
                c.reshape(base)
                    .transformed(&placement_motion(l.u, l.v, l.orientation, Variant::First))
            })?;
            valid &= validate_assembly(&a).ok;
            same &= same_point_sets(&a, &first);
        }
        out.push(CandidateReport {
            candidate: c,
            valid,
            same_as_first: same,
            keeps_base: c.keeps_base(),
        });
    }
    Ok(out)
}
