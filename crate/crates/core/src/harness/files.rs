//! On-disk formats: the params file, the compile manifest and assignment
//! files.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::HarnessError;
use crate::geometry::{BoundarySpec, L1Params, L1};
use crate::logic::Assignment;
use crate::reduction::VariableManifest;

pub const SCHEMA: u32 = 1;

/// The params file: the constants of the construction and the assembled
/// boundary pieces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamsDoc {
    pub schema: u32,
    #[serde(flatten)]
    pub params: L1Params,
    #[serde(flatten)]
    pub boundary: BoundarySpec,
}

impl ParamsDoc {
    pub fn from_l1(l1: &L1) -> Self {
        ParamsDoc { schema: SCHEMA, params: l1.params.clone(), boundary: (*l1.boundary).clone() }
    }

    pub fn into_l1(self) -> L1 {
        L1::from_parts(self.params, self.boundary)
    }

    /// Pretty JSON with a trailing newline; the bytes the hash is taken of.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("params serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let doc: ParamsDoc = serde_json::from_str(text).map_err(|e| HarnessError::Params(e.to_string()))?;
        if doc.schema != SCHEMA {
            return Err(HarnessError::Params(format!("unsupported schema {}", doc.schema)));
        }
        Ok(doc)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        ParamsDoc::from_json(&text).map_err(|e| match e {
            HarnessError::Params(m) => HarnessError::Params(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Hex SHA-256 of [`ParamsDoc::to_json`].
    pub fn hash(&self) -> String {
        sha256_hex(self.to_json().as_bytes())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// The manifest written next to compiled sentence files.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompileManifest {
    pub schema: u32,
    pub input: String,
    pub dimension: usize,
    pub m: usize,
    pub k: usize,
    pub variables: VariableManifest,
    /// Sentence name to file name, relative to the manifest.
    pub files: BTreeMap<String, String>,
    pub params_hash: String,
    pub aia_shape: bool,
}

pub fn load_assignment(path: &Path) -> Result<Assignment, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| HarnessError::Usage(format!("{}: bad assignment: {e}", path.display())))
}

pub fn assignment_json(a: &Assignment) -> String {
    let mut s = serde_json::to_string_pretty(a).expect("assignment serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{construct_l1, ConstructionOptions, Vec2};

    #[test]
    fn params_round_trip_is_exact() {
        let l1 = construct_l1(1, &ConstructionOptions::default()).unwrap();
        let doc = ParamsDoc::from_l1(&l1);
        let text = doc.to_json();
        assert!(text.contains("\"schema\": 1") && text.contains("\"M\": 1") && text.contains("\"q\": \"1/8\""));
        let back = ParamsDoc::from_json(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json(), text);
        assert_eq!(back.hash().len(), 64);
        let rebuilt = back.into_l1();
        let v = Vec2::new(0.3, 0.7);
        assert_eq!(rebuilt.norm(v), l1.norm(v));
    }

    #[test]
    fn schema_is_checked() {
        let l1 = construct_l1(1, &ConstructionOptions::default()).unwrap();
        let text = ParamsDoc::from_l1(&l1).to_json().replace("\"schema\": 1", "\"schema\": 2");
        assert!(matches!(ParamsDoc::from_json(&text), Err(HarnessError::Params(_))));
    }

    #[test]
    fn sha256_known_value() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
