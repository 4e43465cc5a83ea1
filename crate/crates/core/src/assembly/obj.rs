use std::fmt::Write;

use super::Assembly;
use crate::geometry::Scalar;

/// Wavefront OBJ text with one named group per block.
pub fn export_obj<S: Scalar>(a: &Assembly<S>) -> String {
    let mut out = String::new();
    let mut offset = 1;
    for (i, b) in a.blocks().iter().enumerate() {
        let label = if b.label.is_empty() {
            format!("block{i}")
        } else {
            b.label.replace(char::is_whitespace, "_")
        };
        writeln!(out, "g {label}").unwrap();
        for v in &b.vertices {
            let [x, y, z] = v.to_f64();
            writeln!(out, "v {x} {y} {z}").unwrap();
        }
        for f in &b.faces {
            writeln!(out, "f {} {} {}", f[0] + offset, f[1] + offset, f[2] + offset).unwrap();
        }
        offset += b.vertices.len();
    }
    out
}
