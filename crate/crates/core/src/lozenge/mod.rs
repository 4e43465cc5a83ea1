//! Lozenge tilings of regions of the triangular lattice and the RhomBlock
//! assemblies built from them.
//!
//! Lattice point `(u, v)` sits at `u·(1,0) + v·(1/2, √3/2)`. The up
//! triangle `(u, v)` has corners `(u,v), (u+1,v), (u,v+1)`; the down
//! triangle `(u, v)` has corners `(u+1,v), (u,v+1), (u+1,v+1)`. A lozenge
//! is named by its up triangle and an orientation saying which neighbour
//! completes it:
//!
//! * 0: down `(u−1, v)`, across the edge `(u,v)–(u,v+1)`,
//! * 1: down `(u, v−1)`, across the edge `(u,v)–(u+1,v)`,
//! * 2: down `(u, v)`, across the edge `(u+1,v)–(u,v+1)`.

mod placement;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::assembly::ValidityReport;

pub use placement::{
    assemble_rhomblocks, discover_variants, lattice_point, placement_motion, Candidate, CandidateReport,
    Variant,
};

#[derive(Debug, Error)]
pub enum LozengeError {
    #[error("hexagon sides must be at least 1, got ({0}, {1}, {2})")]
    BadHexagon(i64, i64, i64),
    #[error("plane partition: {0}")]
    BadPartition(String),
    #[error("tiling does not cover its region exactly")]
    InvalidTiling,
    #[error("RhomBlock placement produced an invalid assembly ({} violations)", .0.violations.len())]
    InvalidAssembly(ValidityReport),
    #[error("schema violation: {0}")]
    Schema(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Up,
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TriCoord {
    pub u: i64,
    pub v: i64,
    pub parity: Parity,
}

impl TriCoord {
    pub fn up(u: i64, v: i64) -> Self {
        TriCoord {
            u,
            v,
            parity: Parity::Up,
        }
    }

    pub fn down(u: i64, v: i64) -> Self {
        TriCoord {
            u,
            v,
            parity: Parity::Down,
        }
    }

    pub fn corners(&self) -> [(i64, i64); 3] {
        let (u, v) = (self.u, self.v);
        match self.parity {
            Parity::Up => [(u, v), (u + 1, v), (u, v + 1)],
            Parity::Down => [(u + 1, v), (u, v + 1), (u + 1, v + 1)],
        }
    }

    /// The three edge-adjacent triangles.
    pub fn neighbours(&self) -> [TriCoord; 3] {
        let (u, v) = (self.u, self.v);
        match self.parity {
            Parity::Up => [
                TriCoord::down(u - 1, v),
                TriCoord::down(u, v - 1),
                TriCoord::down(u, v),
            ],
            Parity::Down => [TriCoord::up(u, v), TriCoord::up(u + 1, v), TriCoord::up(u, v + 1)],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Lozenge {
    pub u: i64,
    pub v: i64,
    pub orientation: u8,
}

impl Lozenge {
    pub fn new(u: i64, v: i64, orientation: u8) -> Self {
        Lozenge { u, v, orientation }
    }

    pub fn up(&self) -> TriCoord {
        TriCoord::up(self.u, self.v)
    }

    pub fn down(&self) -> TriCoord {
        let (u, v) = (self.u, self.v);
        match self.orientation {
            0 => TriCoord::down(u - 1, v),
            1 => TriCoord::down(u, v - 1),
            _ => TriCoord::down(u, v),
        }
    }

    pub fn triangles(&self) -> [TriCoord; 2] {
        [self.up(), self.down()]
    }

    /// The lozenge made of two edge-adjacent triangles, if they are.
    pub fn from_triangles(a: TriCoord, b: TriCoord) -> Option<Lozenge> {
        let (up, down) = match (a.parity, b.parity) {
            (Parity::Up, Parity::Down) => (a, b),
            (Parity::Down, Parity::Up) => (b, a),
            _ => return None,
        };
        (0..3)
            .map(|o| Lozenge::new(up.u, up.v, o))
            .find(|l| l.down() == down)
    }
}

/// How a region was described, kept for documents and fingerprints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionSpec {
    Hexagon([i64; 3]),
    Triangles(Vec<TriCoord>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tiling {
    pub region: BTreeSet<TriCoord>,
    pub spec: RegionSpec,
    pub lozenges: Vec<Lozenge>,
}

/// The hexagon with sides `a, b, c, a, b, c`: the shadow of the box
/// `[0,a]×[0,b]×[0,c]` under `(x,y,z) ↦ (x−y, y−z)`.
pub fn hexagon_region(a: i64, b: i64, c: i64) -> Result<BTreeSet<TriCoord>, LozengeError> {
    if a < 1 || b < 1 || c < 1 {
        return Err(LozengeError::BadHexagon(a, b, c));
    }
    let inside =
        |(u, v): (i64, i64)| (-b..=a).contains(&u) && (-c..=b).contains(&v) && (-c..=a).contains(&(u + v));
    let mut out = BTreeSet::new();
    for u in -b - 1..=a + 1 {
        for v in -c - 1..=b + 1 {
            for t in [TriCoord::up(u, v), TriCoord::down(u, v)] {
                if t.corners().into_iter().all(inside) {
                    out.insert(t);
                }
            }
        }
    }
    Ok(out)
}

/// Every region triangle is covered exactly once and nothing else is.
pub fn validate_tiling(t: &Tiling) -> bool {
    let mut covered = BTreeSet::new();
    for l in &t.lozenges {
        if l.orientation > 2 {
            return false;
        }
        for tri in l.triangles() {
            if !t.region.contains(&tri) || !covered.insert(tri) {
                return false;
            }
        }
    }
    covered.len() == t.region.len()
}

/// Tiling of `hexagon_region(a, b, c)` seen as the visible faces of the
/// stack of unit cubes with heights `pp[i][j]` in the box.
pub fn tiling_from_plane_partition(
    a: usize,
    b: usize,
    c: usize,
    pp: &[Vec<i64>],
) -> Result<Tiling, LozengeError> {
    let bad = |m: String| Err(LozengeError::BadPartition(m));
    if pp.len() != a || pp.iter().any(|r| r.len() != b) {
        return bad(format!("expected a {a}×{b} matrix"));
    }
    let ci = c as i64;
    for i in 0..a {
        for j in 0..b {
            let h = pp[i][j];
            if !(0..=ci).contains(&h) {
                return bad(format!("entry ({i},{j}) = {h} outside [0, {c}]"));
            }
            if (i > 0 && pp[i - 1][j] < h) || (j > 0 && pp[i][j - 1] < h) {
                return bad(format!("entry ({i},{j}) breaks monotonicity"));
            }
        }
    }
    let height = |i: i64, j: i64| -> i64 {
        if i < 0 || j < 0 {
            ci
        } else if i >= a as i64 || j >= b as i64 {
            0
        } else {
            pp[i as usize][j as usize]
        }
    };
    let mut lozenges = Vec::with_capacity(a * b + b * c + c * a);
    for i in 0..a as i64 {
        for j in 0..b as i64 {
            lozenges.push(Lozenge::new(i - j, j - height(i, j), 0));
        }
    }
    for i in 0..=a as i64 {
        for j in 0..b as i64 {
            for k in height(i, j)..height(i - 1, j) {
                lozenges.push(Lozenge::new(i - j - 1, j - k, 1));
            }
        }
    }
    for i in 0..a as i64 {
        for j in 0..=b as i64 {
            for k in height(i, j)..height(i, j - 1) {
                lozenges.push(Lozenge::new(i - j, j - k - 1, 2));
            }
        }
    }
    lozenges.sort();
    let (a, b, c) = (a as i64, b as i64, c as i64);
    let t = Tiling {
        region: hexagon_region(a, b, c)?,
        spec: RegionSpec::Hexagon([a, b, c]),
        lozenges,
    };
    debug_assert!(validate_tiling(&t));
    Ok(t)
}

/// The tiling of the empty box: all cubes at height 0.
pub fn brick_tiling(a: usize, b: usize, c: usize) -> Result<Tiling, LozengeError> {
    tiling_from_plane_partition(a, b, c, &vec![vec![0; b]; a])
}

/// Orientation pattern of the three lozenges around a lattice point, read
/// at the up triangles `(u,v), (u−1,v), (u,v−1)`.
const FLIP_A: [u8; 3] = [0, 1, 2];
const FLIP_B: [u8; 3] = [1, 2, 0];

fn flip_sites(t: &Tiling, index: &HashMap<(i64, i64), usize>) -> Vec<(i64, i64)> {
    t.lozenges
        .iter()
        .map(|l| (l.u, l.v))
        .filter(|&(u, v)| {
            let pattern =
                [(u, v), (u - 1, v), (u, v - 1)].map(|k| index.get(&k).map(|&i| t.lozenges[i].orientation));
            pattern == FLIP_A.map(Some) || pattern == FLIP_B.map(Some)
        })
        .collect()
}

/// Rotates the unit hexagon around lattice point `(u, v)` if its three
/// lozenges allow it.
pub fn flip_at(t: &mut Tiling, u: i64, v: i64) -> bool {
    let index: HashMap<(i64, i64), usize> = t
        .lozenges
        .iter()
        .enumerate()
        .map(|(i, l)| ((l.u, l.v), i))
        .collect();
    flip_with_index(t, &index, u, v)
}

fn flip_with_index(t: &mut Tiling, index: &HashMap<(i64, i64), usize>, u: i64, v: i64) -> bool {
    let keys = [(u, v), (u - 1, v), (u, v - 1)];
    let Some(ids) = keys
        .iter()
        .map(|k| index.get(k).copied())
        .collect::<Option<Vec<_>>>()
    else {
        return false;
    };
    let pattern = [0, 1, 2].map(|k| t.lozenges[ids[k]].orientation);
    let target = if pattern == FLIP_A {
        FLIP_B
    } else if pattern == FLIP_B {
        FLIP_A
    } else {
        return false;
    };
    for k in 0..3 {
        t.lozenges[ids[k]].orientation = target[k];
    }
    true
}

/// Applies `steps` hexagon flips at uniformly chosen flippable sites.
pub fn flip_shuffle(t: &Tiling, steps: usize, seed: u64) -> Tiling {
    let mut out = t.clone();
    let index: HashMap<(i64, i64), usize> = out
        .lozenges
        .iter()
        .enumerate()
        .map(|(i, l)| ((l.u, l.v), i))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..steps {
        let sites = flip_sites(&out, &index);
        if sites.is_empty() {
            break;
        }
        let (u, v) = sites[rng.random_range(0..sites.len())];
        flip_with_index(&mut out, &index, u, v);
    }
    out
}

/// Lattice points on the region boundary: endpoints of edges between a
/// region triangle and a triangle outside.
pub fn boundary_vertices(region: &BTreeSet<TriCoord>) -> BTreeSet<(i64, i64)> {
    let mut out = BTreeSet::new();
    for tri in region {
        for n in tri.neighbours() {
            if region.contains(&n) {
                continue;
            }
            let theirs = n.corners();
            out.extend(tri.corners().into_iter().filter(|c| theirs.contains(c)));
        }
    }
    out
}

/// Lozenges with a corner on the region boundary. RhomBlocks meet every
/// block around each of their base corners, so this is the smallest frame
/// that separates the free blocks from everything outside the region.
pub fn boundary_frame(t: &Tiling) -> BTreeSet<usize> {
    let boundary = boundary_vertices(&t.region);
    t.lozenges
        .iter()
        .enumerate()
        .filter(|(_, l)| {
            l.triangles()
                .iter()
                .any(|tri| tri.corners().iter().any(|c| boundary.contains(c)))
        })
        .map(|(i, _)| i)
        .collect()
}

/// Lozenges with an edge on the region boundary. Contained in
/// [`boundary_frame`].
pub fn edge_boundary_frame(t: &Tiling) -> BTreeSet<usize> {
    t.lozenges
        .iter()
        .enumerate()
        .filter(|(_, l)| {
            l.triangles()
                .iter()
                .any(|tri| tri.neighbours().iter().any(|n| !t.region.contains(n)))
        })
        .map(|(i, _)| i)
        .collect()
}

/// Counts of lozenges per orientation.
pub fn orientation_counts(t: &Tiling) -> [usize; 3] {
    let mut n = [0; 3];
    for l in &t.lozenges {
        n[l.orientation as usize % 3] += 1;
    }
    n
}

/// SHA-256 of the region description and the sorted lozenge list.
pub fn fingerprint(t: &Tiling) -> String {
    let mut text = match &t.spec {
        RegionSpec::Hexagon([a, b, c]) => format!("hexagon {a} {b} {c}\n"),
        RegionSpec::Triangles(_) => {
            let mut s = String::from("triangles");
            for tri in &t.region {
                s.push_str(&format!(" {},{},{:?}", tri.u, tri.v, tri.parity));
            }
            s.push('\n');
            s
        }
    };
    let mut ls = t.lozenges.clone();
    ls.sort();
    for l in ls {
        text.push_str(&format!("{} {} {}\n", l.u, l.v, l.orientation));
    }
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TilingDoc {
    region: RegionSpec,
    lozenges: Vec<Lozenge>,
}

pub fn tiling_to_json(t: &Tiling) -> serde_json::Value {
    serde_json::to_value(TilingDoc {
        region: t.spec.clone(),
        lozenges: t.lozenges.clone(),
    })
    .expect("tiling document serializes")
}

/// Parses a tiling document. The result is not validated.
pub fn tiling_from_json(value: &serde_json::Value) -> Result<Tiling, LozengeError> {
    let doc: TilingDoc =
        serde_json::from_value(value.clone()).map_err(|e| LozengeError::Schema(e.to_string()))?;
    let region = match &doc.region {
        RegionSpec::Hexagon([a, b, c]) => hexagon_region(*a, *b, *c)?,
        RegionSpec::Triangles(ts) => ts.iter().copied().collect(),
    };
    Ok(Tiling {
        region,
        spec: doc.region,
        lozenges: doc.lozenges,
    })
}

/// Lozenges grouped by orientation, for summaries.
pub fn lozenges_by_orientation(t: &Tiling) -> BTreeMap<u8, Vec<Lozenge>> {
    let mut m: BTreeMap<u8, Vec<Lozenge>> = BTreeMap::new();
    for l in &t.lozenges {
        m.entry(l.orientation).or_default().push(*l);
    }
    m
}
