use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{AnyAssembly, Assembly, AssemblyError, BlockMesh};
use crate::geometry::{parse_rational, Backend, Rational, Scalar, Vec3, DEFAULT_TOLERANCE};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssemblyDoc {
    backend: Backend,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tolerance: Option<f64>,
    blocks: Vec<BlockDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockDoc {
    #[serde(default)]
    label: String,
    #[serde(default)]
    frame: bool,
    vertices: Vec<[Value; 3]>,
    faces: Vec<[usize; 3]>,
}

/// A parsed assembly plus non-fatal diagnostics.
#[derive(Clone, Debug)]
pub struct LoadedAssembly {
    pub assembly: AnyAssembly,
    pub warnings: Vec<String>,
}

enum Coord {
    Exact(Rational),
    Float(f64),
}

fn parse_coord(v: &Value, backend: Backend) -> Result<Coord, AssemblyError> {
    match (v, backend) {
        (Value::Number(n), Backend::Exact) => {
            if let Some(i) = n.as_i64() {
                Ok(Coord::Exact(Rational::from_i64(i)))
            } else {
                Ok(Coord::Float(n.as_f64().unwrap_or(f64::NAN)))
            }
        }
        (Value::Number(n), Backend::Float) => Ok(Coord::Float(n.as_f64().unwrap_or(f64::NAN))),
        (Value::String(s), Backend::Exact) => parse_rational(s)
            .map(Coord::Exact)
            .ok_or_else(|| AssemblyError::Schema(format!("bad rational coordinate {s:?}"))),
        (Value::String(s), Backend::Float) => Err(AssemblyError::Schema(format!(
            "string coordinate {s:?} requires backend \"exact\""
        ))),
        (other, _) => Err(AssemblyError::Schema(format!(
            "coordinate must be a number or \"p/q\", got {other}"
        ))),
    }
}

/// Parses an assembly document; see [`save_assembly`] for the layout.
pub fn parse_assembly(text: &str) -> Result<LoadedAssembly, AssemblyError> {
    let doc: AssemblyDoc = serde_json::from_str(text).map_err(|e| AssemblyError::Schema(e.to_string()))?;
    load_assembly_doc(doc)
}

/// Loads an assembly document from a JSON value.
pub fn load_assembly(value: &Value) -> Result<LoadedAssembly, AssemblyError> {
    let doc: AssemblyDoc =
        serde_json::from_value(value.clone()).map_err(|e| AssemblyError::Schema(e.to_string()))?;
    load_assembly_doc(doc)
}

fn load_assembly_doc(doc: AssemblyDoc) -> Result<LoadedAssembly, AssemblyError> {
    let tolerance = doc.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    if !(tolerance.is_finite() && tolerance >= 0.0) {
        return Err(AssemblyError::Schema(format!(
            "tolerance must be finite and non-negative, got {tolerance}"
        )));
    }
    let mut warnings = Vec::new();
    let mut coords: Vec<Vec<[Coord; 3]>> = Vec::with_capacity(doc.blocks.len());
    for (bi, b) in doc.blocks.iter().enumerate() {
        let mut vs = Vec::with_capacity(b.vertices.len());
        for v in &b.vertices {
            let [x, y, z] = v;
            vs.push([
                parse_coord(x, doc.backend)?,
                parse_coord(y, doc.backend)?,
                parse_coord(z, doc.backend)?,
            ]);
        }
        for f in &b.faces {
            if f.iter().any(|&k| k >= vs.len()) {
                return Err(AssemblyError::Schema(format!(
                    "block {bi}: face {f:?} references a missing vertex"
                )));
            }
        }
        coords.push(vs);
    }
    let frame: Vec<usize> = doc
        .blocks
        .iter()
        .enumerate()
        .filter(|(_, b)| b.frame)
        .map(|(i, _)| i)
        .collect();
    let has_float = coords
        .iter()
        .flatten()
        .flatten()
        .any(|c| matches!(c, Coord::Float(_)));
    let any_nonfinite = coords
        .iter()
        .flatten()
        .flatten()
        .any(|c| matches!(c, Coord::Float(x) if !x.is_finite()));
    if any_nonfinite {
        return Err(AssemblyError::Schema("non-finite coordinate".into()));
    }
    let assembly = if doc.backend == Backend::Exact && !has_float {
        let blocks = build_blocks(&doc.blocks, coords, |c| match c {
            Coord::Exact(r) => r,
            Coord::Float(_) => unreachable!(),
        });
        AnyAssembly::Exact(Assembly::new(blocks, frame, tolerance)?)
    } else {
        if doc.backend == Backend::Exact {
            warnings.push(
                "non-integer numeric coordinates under backend \"exact\": resolved to floating backend"
                    .into(),
            );
        }
        let blocks = build_blocks(&doc.blocks, coords, |c| match c {
            Coord::Exact(r) => r.to_f64(),
            Coord::Float(x) => x,
        });
        AnyAssembly::Float(Assembly::new(blocks, frame, tolerance)?)
    };
    Ok(LoadedAssembly { assembly, warnings })
}

fn build_blocks<S: Scalar>(
    docs: &[BlockDoc],
    coords: Vec<Vec<[Coord; 3]>>,
    conv: impl Fn(Coord) -> S,
) -> Vec<BlockMesh<S>> {
    docs.iter()
        .zip(coords)
        .map(|(d, vs)| {
            let vertices = vs
                .into_iter()
                .map(|[x, y, z]| Vec3::new(conv(x), conv(y), conv(z)))
                .collect();
            BlockMesh::new(vertices, d.faces.clone(), d.label.clone())
        })
        .collect()
}

/// Serializes an assembly; exact coordinates are written as integers or
/// `"p/q"` strings.
pub fn save_assembly<S: Scalar>(a: &Assembly<S>) -> Value {
    let doc = AssemblyDoc {
        backend: S::BACKEND,
        tolerance: Some(a.tolerance()),
        blocks: a
            .blocks()
            .iter()
            .enumerate()
            .map(|(i, b)| BlockDoc {
                label: b.label.clone(),
                frame: a.is_frame(i),
                vertices: b
                    .vertices
                    .iter()
                    .map(|v| [v.x.to_json(), v.y.to_json(), v.z.to_json()])
                    .collect(),
                faces: b.faces.clone(),
            })
            .collect(),
    };
    serde_json::to_value(doc).expect("assembly document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::box_mesh;
    use serde_json::json;

    fn cube_doc(backend: &str, coords: Value) -> Value {
        json!({
            "backend": backend,
            "blocks": [{
                "label": "c",
                "frame": false,
                "vertices": coords,
                "faces": [[0, 1, 2], [0, 2, 3]]
            }]
        })
    }

    #[test]
    fn loads_single_block_without_frame() {
        let doc = cube_doc("exact", json!([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]]));
        let loaded = load_assembly(&doc).unwrap();
        assert!(loaded.warnings.is_empty());
        match loaded.assembly {
            AnyAssembly::Exact(a) => {
                assert_eq!(a.len(), 1);
                assert!(a.frame().is_empty());
                assert_eq!(a.tolerance(), DEFAULT_TOLERANCE);
            }
            _ => panic!("expected exact backend"),
        }
    }

    #[test]
    fn rational_strings_are_exact() {
        let doc = cube_doc("exact", json!([["1/3", 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]]));
        let AnyAssembly::Exact(a) = load_assembly(&doc).unwrap().assembly else {
            panic!("expected exact backend");
        };
        assert_eq!(a.blocks()[0].vertices[0].x, Rational::from_ratio(1, 3));
    }

    #[test]
    fn decimals_under_exact_fall_back_to_float() {
        let doc = cube_doc("exact", json!([["1/3", 0.5, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]]));
        let loaded = load_assembly(&doc).unwrap();
        assert_eq!(loaded.warnings.len(), 1);
        let AnyAssembly::Float(a) = loaded.assembly else {
            panic!("expected float backend");
        };
        assert_eq!(a.blocks()[0].vertices[0].y, 0.5);
    }

    #[test]
    fn schema_violations() {
        let strings_in_float = cube_doc("float", json!([["1/3", 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]]));
        assert!(matches!(
            load_assembly(&strings_in_float),
            Err(AssemblyError::Schema(_))
        ));
        let bad_face = json!({"backend": "exact", "blocks": [{"vertices": [[0,0,0]], "faces": [[0,1,2]]}]});
        assert!(matches!(load_assembly(&bad_face), Err(AssemblyError::Schema(_))));
        let bad_backend = json!({"backend": "quad", "blocks": []});
        assert!(matches!(
            load_assembly(&bad_backend),
            Err(AssemblyError::Schema(_))
        ));
        assert!(parse_assembly("{").is_err());
    }

    #[test]
    fn round_trip_exact_and_float() {
        let c = |x| {
            box_mesh(
                Vec3::<Rational>::from_i64(x, 0, 0),
                Vec3::from_i64(x + 1, 1, 1),
                "c",
            )
        };
        let a = Assembly::new(vec![c(0), c(1)], [1], 1e-9)
            .unwrap()
            .scaled(&Rational::from_ratio(2, 3));
        let back = load_assembly(&save_assembly(&a)).unwrap().assembly;
        assert_eq!(back, AnyAssembly::Exact(a.clone()));

        let f = a.to_float().translated(&Vec3::new(0.1, 1.0 / 3.0, -7.25));
        let back = parse_assembly(&save_assembly(&f).to_string()).unwrap().assembly;
        assert_eq!(back, AnyAssembly::Float(f));
    }
}
