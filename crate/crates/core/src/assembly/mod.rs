//! Blocks, assemblies with frames, validity checks, documents and OBJ export.

mod io;
mod mesh;
mod obj;
mod validity;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::geometry::{Backend, Rational, RigidMotion, Scalar, Vec3};

pub use io::{load_assembly, parse_assembly, save_assembly, LoadedAssembly};
pub use mesh::{box_mesh, transform_block, Aabb, BlockMesh, MeshStats};
pub use obj::export_obj;
pub use validity::{
    validate_assembly, validate_block, MeshDefect, ValidityReport, Violation, ViolationKind, Witness,
};

#[derive(Debug, Error)]
pub enum AssemblyError {
    #[error("frame index {index} out of range for {blocks} blocks")]
    FrameIndex { index: usize, blocks: usize },
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Placed blocks plus the set of immovable (frame) block indices.
#[derive(Clone, Debug, PartialEq)]
pub struct Assembly<S> {
    blocks: Vec<BlockMesh<S>>,
    frame: BTreeSet<usize>,
    tolerance: f64,
}

impl<S: Scalar> Assembly<S> {
    pub fn new(
        blocks: Vec<BlockMesh<S>>,
        frame: impl IntoIterator<Item = usize>,
        tolerance: f64,
    ) -> Result<Self, AssemblyError> {
        let frame: BTreeSet<usize> = frame.into_iter().collect();
        if let Some(&index) = frame.iter().find(|&&i| i >= blocks.len()) {
            return Err(AssemblyError::FrameIndex {
                index,
                blocks: blocks.len(),
            });
        }
        Ok(Assembly {
            blocks,
            frame,
            tolerance,
        })
    }

    pub fn blocks(&self) -> &[BlockMesh<S>] {
        &self.blocks
    }

    pub fn frame(&self) -> &BTreeSet<usize> {
        &self.frame
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn backend(&self) -> Backend {
        S::BACKEND
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_frame(&self, i: usize) -> bool {
        self.frame.contains(&i)
    }

    /// Indices of non-frame blocks, in assembly order.
    pub fn free_blocks(&self) -> Vec<usize> {
        (0..self.blocks.len())
            .filter(|i| !self.frame.contains(i))
            .collect()
    }

    pub fn with_frame(&self, frame: impl IntoIterator<Item = usize>) -> Result<Self, AssemblyError> {
        Assembly::new(self.blocks.clone(), frame, self.tolerance)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn transformed(&self, g: &RigidMotion<S>) -> Self {
        Assembly {
            blocks: self.blocks.iter().map(|b| b.transformed(g)).collect(),
            frame: self.frame.clone(),
            tolerance: self.tolerance,
        }
    }

    pub fn translated(&self, v: &Vec3<S>) -> Self {
        self.transformed(&RigidMotion::translation(v.clone()))
    }

    pub fn scaled(&self, k: &S) -> Self {
        Assembly {
            blocks: self.blocks.iter().map(|b| b.scaled(k)).collect(),
            frame: self.frame.clone(),
            tolerance: self.tolerance,
        }
    }

    pub fn to_float(&self) -> Assembly<f64> {
        Assembly {
            blocks: self.blocks.iter().map(|b| b.to_float()).collect(),
            frame: self.frame.clone(),
            tolerance: self.tolerance,
        }
    }
}

/// An assembly whose backend is only known at run time.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyAssembly {
    Exact(Assembly<Rational>),
    Float(Assembly<f64>),
}

impl AnyAssembly {
    pub fn backend(&self) -> Backend {
        match self {
            AnyAssembly::Exact(_) => Backend::Exact,
            AnyAssembly::Float(_) => Backend::Float,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            AnyAssembly::Exact(a) => a.len(),
            AnyAssembly::Float(a) => a.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn frame(&self) -> &BTreeSet<usize> {
        match self {
            AnyAssembly::Exact(a) => a.frame(),
            AnyAssembly::Float(a) => a.frame(),
        }
    }

    pub fn with_frame(&self, frame: impl IntoIterator<Item = usize>) -> Result<Self, AssemblyError> {
        Ok(match self {
            AnyAssembly::Exact(a) => AnyAssembly::Exact(a.with_frame(frame)?),
            AnyAssembly::Float(a) => AnyAssembly::Float(a.with_frame(frame)?),
        })
    }

    pub fn with_tolerance(self, tolerance: f64) -> Self {
        match self {
            AnyAssembly::Exact(a) => AnyAssembly::Exact(a.with_tolerance(tolerance)),
            AnyAssembly::Float(a) => AnyAssembly::Float(a.with_tolerance(tolerance)),
        }
    }

    pub fn to_float(&self) -> Assembly<f64> {
        match self {
            AnyAssembly::Exact(a) => a.to_float(),
            AnyAssembly::Float(a) => a.clone(),
        }
    }

    pub fn validate(&self) -> ValidityReport {
        match self {
            AnyAssembly::Exact(a) => validate_assembly(a),
            AnyAssembly::Float(a) => validate_assembly(a),
        }
    }

    pub fn stats(&self) -> Vec<(String, MeshStats)> {
        match self {
            AnyAssembly::Exact(a) => a.blocks().iter().map(|b| (b.label.clone(), b.stats())).collect(),
            AnyAssembly::Float(a) => a.blocks().iter().map(|b| (b.label.clone(), b.stats())).collect(),
        }
    }
}

impl From<Assembly<Rational>> for AnyAssembly {
    fn from(a: Assembly<Rational>) -> Self {
        AnyAssembly::Exact(a)
    }
}

impl From<Assembly<f64>> for AnyAssembly {
    fn from(a: Assembly<f64>) -> Self {
        AnyAssembly::Float(a)
    }
}
