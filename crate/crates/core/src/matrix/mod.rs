//! The infinitesimal interlocking matrix.

mod edge_fan;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::assembly::Assembly;
use crate::contacts::{find_contacts, ContactPatch};
use crate::geometry::{Backend, Scalar, Vec3};

pub use edge_fan::{
    edge_fan_closed_forms, edge_fan_determinants, edge_fan_matrix, edge_rank_check, matrix_rank,
    EdgeFanInput, EdgeRankReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("both blocks of a contact belong to the frame")]
    BothFrame,
    #[error("edge fan is degenerate: p lies on the line through v1 and v2")]
    DegenerateEdgeFan,
    #[error("motion has {got} components, matrix has {expected} columns")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Full,
    Translational,
}

impl Mode {
    pub fn cols_per_block(self) -> usize {
        match self {
            Mode::Full => 6,
            Mode::Translational => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Full => "full",
            Mode::Translational => "translational",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(Mode::Full),
            "translational" => Ok(Mode::Translational),
            _ => Err(format!("unknown mode {s:?} (expected full or translational)")),
        }
    }
}

/// Column offsets of the free blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColMap {
    offsets: BTreeMap<usize, usize>,
    mode: Mode,
    width: usize,
}

impl ColMap {
    pub fn new(free_blocks: impl IntoIterator<Item = usize>, mode: Mode) -> Self {
        let k = mode.cols_per_block();
        let offsets = free_blocks
            .into_iter()
            .enumerate()
            .map(|(pos, b)| (b, pos * k))
            .collect();
        ColMap {
            offsets,
            mode,
            width: k,
        }
    }

    pub fn for_assembly<S: Scalar>(a: &Assembly<S>, mode: Mode) -> Self {
        ColMap::new(a.free_blocks(), mode)
    }

    pub fn offset(&self, block: usize) -> Option<usize> {
        self.offsets.get(&block).copied()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn cols_per_block(&self) -> usize {
        self.width
    }

    pub fn ncols(&self) -> usize {
        self.offsets.len() * self.cols_per_block()
    }

    /// Free blocks in column order.
    pub fn blocks(&self) -> Vec<usize> {
        self.offsets.keys().copied().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }
}

pub type SparseRow<S> = Vec<(usize, S)>;

/// Non-penetration row for contact point `p` with normal `n` from block `i`
/// toward block `j`.
pub fn row_for<S: Scalar>(
    p: &Vec3<S>,
    n: &Vec3<S>,
    i: usize,
    j: usize,
    col_map: &ColMap,
) -> Result<SparseRow<S>, MatrixError> {
    let (oi, oj) = (col_map.offset(i), col_map.offset(j));
    if oi.is_none() && oj.is_none() {
        return Err(MatrixError::BothFrame);
    }
    let entries: Vec<S> = match col_map.mode() {
        Mode::Full => {
            let m = p.cross(n);
            vec![m.x, m.y, m.z, n.x.clone(), n.y.clone(), n.z.clone()]
        }
        Mode::Translational => n.to_array().to_vec(),
    };
    let mut row = Vec::with_capacity(2 * entries.len());
    for (offset, negate) in [(oi, true), (oj, false)] {
        if let Some(o) = offset {
            for (k, v) in entries.iter().enumerate() {
                let v = if negate { -v.clone() } else { v.clone() };
                if !v.is_zero() {
                    row.push((o + k, v));
                }
            }
        }
    }
    row.sort_by_key(|(c, _)| *c);
    Ok(row)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RowMeta<S> {
    pub block_i: usize,
    pub block_j: usize,
    pub point: Vec3<S>,
    pub normal: Vec3<S>,
    /// Every (patch index, point index) that produced this row.
    pub origins: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InterlockingMatrix<S> {
    rows: Vec<SparseRow<S>>,
    meta: Vec<RowMeta<S>>,
    col_map: ColMap,
    tolerance: f64,
}

impl<S: Scalar> InterlockingMatrix<S> {
    pub fn rows(&self) -> &[SparseRow<S>] {
        &self.rows
    }

    pub fn meta(&self) -> &[RowMeta<S>] {
        &self.meta
    }

    pub fn col_map(&self) -> &ColMap {
        &self.col_map
    }

    pub fn mode(&self) -> Mode {
        self.col_map.mode()
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_map.ncols()
    }

    /// No free blocks, hence no columns.
    pub fn is_vacuous(&self) -> bool {
        self.col_map.is_empty()
    }

    /// A matrix given directly by dense rows. Columns are grouped into
    /// anonymous blocks of 6 or 3 when the count allows, otherwise into a
    /// single block. Rows carry placeholder metadata.
    pub fn from_dense(rows: Vec<Vec<S>>, ncols: usize, tolerance: f64) -> Self {
        let col_map = if ncols.is_multiple_of(6) {
            ColMap::new(0..ncols / 6, Mode::Full)
        } else if ncols.is_multiple_of(3) {
            ColMap::new(0..ncols / 3, Mode::Translational)
        } else {
            ColMap {
                offsets: BTreeMap::from([(0, 0)]),
                mode: Mode::Full,
                width: ncols,
            }
        };
        let sparse = rows
            .into_iter()
            .map(|r| r.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect())
            .collect::<Vec<SparseRow<S>>>();
        let meta = (0..sparse.len())
            .map(|r| RowMeta {
                block_i: usize::MAX,
                block_j: usize::MAX,
                point: Vec3::zero(),
                normal: Vec3::zero(),
                origins: vec![(r, 0)],
            })
            .collect();
        InterlockingMatrix {
            rows: sparse,
            meta,
            col_map,
            tolerance,
        }
    }

    pub fn dense(&self) -> Vec<Vec<S>> {
        let n = self.ncols();
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![S::zero(); n];
                for (c, v) in r {
                    d[*c] = v.clone();
                }
                d
            })
            .collect()
    }

    /// `A·x`.
    pub fn apply(&self, x: &[S]) -> Result<Vec<S>, MatrixError> {
        if x.len() != self.ncols() {
            return Err(MatrixError::DimensionMismatch {
                expected: self.ncols(),
                got: x.len(),
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .fold(S::zero(), |acc, (c, v)| acc + v.clone() * x[*c].clone())
            })
            .collect())
    }

    /// Structured dump: `{mode, col_map, rows: [{block_i, block_j, p, n, entries}]}`.
    pub fn dump(&self) -> Value {
        let col_map: Vec<Value> = self
            .col_map
            .offsets
            .iter()
            .map(|(b, o)| json!({"block": b, "offset": o}))
            .collect();
        let rows: Vec<Value> = self
            .dense()
            .into_iter()
            .zip(&self.meta)
            .map(|(d, m)| {
                let vec_json = |v: &Vec3<S>| json!([v.x.to_json(), v.y.to_json(), v.z.to_json()]);
                json!({
                    "block_i": m.block_i,
                    "block_j": m.block_j,
                    "p": vec_json(&m.point),
                    "n": vec_json(&m.normal),
                    "entries": d.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "backend": S::BACKEND,
            "mode": self.mode(),
            "col_map": col_map,
            "rows": rows,
        })
    }
}

/// Interlocking matrix of an assembly, one row per contact point (full
/// mode) or per contact patch (translational mode).
pub fn build_matrix<S: Scalar>(a: &Assembly<S>, mode: Mode) -> InterlockingMatrix<S> {
    let patches = find_contacts(a);
    build_matrix_from_patches(&patches, &ColMap::for_assembly(a, mode), a.tolerance())
}

pub fn build_matrix_from_patches<S: Scalar>(
    patches: &[ContactPatch<S>],
    col_map: &ColMap,
    tolerance: f64,
) -> InterlockingMatrix<S> {
    let mut rows = Vec::new();
    let mut meta = Vec::new();
    for (pi, patch) in patches.iter().enumerate() {
        let (i, j) = (patch.from_block, patch.to_block);
        let points: Vec<(usize, &Vec3<S>)> = match col_map.mode() {
            Mode::Full => patch.points.iter().enumerate().collect(),
            Mode::Translational => vec![(0, &patch.points[0])],
        };
        for (k, p) in points {
            let Ok(row) = row_for(p, &patch.normal, i, j, col_map) else {
                break;
            };
            rows.push(row);
            meta.push(RowMeta {
                block_i: i,
                block_j: j,
                point: p.clone(),
                normal: patch.normal.clone(),
                origins: vec![(pi, k)],
            });
        }
    }
    InterlockingMatrix {
        rows,
        meta,
        col_map: col_map.clone(),
        tolerance,
    }
}

fn rows_equal<S: Scalar>(a: &SparseRow<S>, b: &SparseRow<S>, eps: f64) -> bool {
    match S::BACKEND {
        Backend::Exact => a == b,
        Backend::Float => {
            // Compare densely over the union of supports.
            let mut ia = a.iter().peekable();
            let mut ib = b.iter().peekable();
            loop {
                match (ia.peek(), ib.peek()) {
                    (None, None) => return true,
                    (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                        if !va.approx_eq(vb, eps) {
                            return false;
                        }
                        ia.next();
                        ib.next();
                    }
                    (Some((ca, va)), Some((cb, _))) if ca < cb => {
                        if !va.is_zero_eps(eps) {
                            return false;
                        }
                        ia.next();
                    }
                    (Some((_, va)), None) => {
                        if !va.is_zero_eps(eps) {
                            return false;
                        }
                        ia.next();
                    }
                    (_, Some((_, vb))) => {
                        if !vb.is_zero_eps(eps) {
                            return false;
                        }
                        ib.next();
                    }
                }
            }
        }
    }
}

/// Keeps the first of each group of identical rows, merging their origins.
pub fn reduce_rows<S: Scalar>(m: &InterlockingMatrix<S>) -> InterlockingMatrix<S> {
    let eps = m.tolerance;
    let mut rows: Vec<SparseRow<S>> = Vec::new();
    let mut meta: Vec<RowMeta<S>> = Vec::new();
    let mut exact_index: std::collections::HashMap<String, usize> = std::collections::HashMap::new();
    for (r, mt) in m.rows.iter().zip(&m.meta) {
        let found = match S::BACKEND {
            Backend::Exact => exact_index.get(&format!("{r:?}")).copied(),
            Backend::Float => rows.iter().position(|q| rows_equal(q, r, eps)),
        };
        match found {
            Some(k) => meta[k].origins.extend(mt.origins.iter().copied()),
            None => {
                if S::BACKEND == Backend::Exact {
                    exact_index.insert(format!("{r:?}"), rows.len());
                }
                rows.push(r.clone());
                meta.push(mt.clone());
            }
        }
    }
    InterlockingMatrix {
        rows,
        meta,
        col_map: m.col_map.clone(),
        tolerance: m.tolerance,
    }
}
