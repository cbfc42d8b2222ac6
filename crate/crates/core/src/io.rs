//! JSON documents for tilings and patches.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerator::Piece;
use crate::label::Label;
use crate::map::{validate, validate_arrays, MapError, Tiling, ValidationReport};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("cannot read or write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("corner `{0}` is not a letter a-h")]
    Corner(char),
    #[error("vertex_of has length {0}, expected {1}")]
    VertexLength(usize, usize),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("document violates map invariants: {0}")]
    Invalid(ValidationReport),
}

/// A tiling on disk. Corner labels are the letters `a` to `h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingDocument {
    pub version: u32,
    pub face_degree: Option<usize>,
    pub twin: Vec<usize>,
    pub next: Vec<usize>,
    pub corner: Vec<char>,
    pub vertex_of: Vec<usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub meta: BTreeMap<String, String>,
}

fn uniform_face_degree(t: &Tiling) -> Option<usize> {
    let faces = t.faces();
    let d = faces.first()?.len();
    faces.iter().all(|f| f.len() == d).then_some(d)
}

impl TilingDocument {
    pub fn from_tiling(t: &Tiling) -> TilingDocument {
        TilingDocument {
            version: FORMAT_VERSION,
            face_degree: uniform_face_degree(t),
            twin: t.twins().to_vec(),
            next: t.nexts().to_vec(),
            corner: t.corners().iter().map(|l| l.letter()).collect(),
            vertex_of: t.vertex_ids().to_vec(),
            meta: BTreeMap::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<String>) -> Self {
        self.meta.insert(key.to_string(), value.into());
        self
    }

    /// Rebuilds the tiling, checking the arrays against the sphere
    /// invariants and the stored vertex ids.
    pub fn to_tiling(&self) -> Result<Tiling, DocumentError> {
        if self.version != FORMAT_VERSION {
            return Err(DocumentError::Version(self.version));
        }
        let corner = self
            .corner
            .iter()
            .map(|&c| Label::from_letter(c).ok_or(DocumentError::Corner(c)))
            .collect::<Result<Vec<_>, _>>()?;
        if self.vertex_of.len() != self.twin.len() {
            return Err(DocumentError::VertexLength(self.vertex_of.len(), self.twin.len()));
        }
        let report = validate_arrays(&self.twin, &self.next, Some(&self.vertex_of), self.face_degree);
        if !report.is_valid() {
            return Err(DocumentError::Invalid(report));
        }
        let t = Tiling::from_permutations(self.twin.clone(), self.next.clone(), corner)?;
        let report = validate(&t, self.face_degree);
        if !report.is_valid() {
            return Err(DocumentError::Invalid(report));
        }
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_json(text: &str) -> Result<TilingDocument, DocumentError> {
        Ok(serde_json::from_str(text)?)
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> DocumentError + '_ {
    move |source| DocumentError::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn save_tiling(path: &Path, doc: &TilingDocument) -> Result<(), DocumentError> {
    fs::write(path, doc.to_json() + "\n").map_err(io_err(path))
}

pub fn load_document(path: &Path) -> Result<TilingDocument, DocumentError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    TilingDocument::from_json(&text)
}

pub fn load_tiling(path: &Path) -> Result<Tiling, DocumentError> {
    load_document(path)?.to_tiling()
}

/// A patch on disk: like a tiling document, with `null` twins on the
/// boundary.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PatchDocument {
    pub version: u32,
    pub face_count: usize,
    pub twin: Vec<Option<usize>>,
    pub next: Vec<usize>,
    pub corner: Vec<char>,
    pub face_of: Vec<usize>,
    pub boundary_word: String,
}

impl PatchDocument {
    pub fn from_piece(p: &Piece, boundary_word: String) -> PatchDocument {
        PatchDocument {
            version: FORMAT_VERSION,
            face_count: p.face_count,
            twin: p.twin.clone(),
            next: p.next.clone(),
            corner: p.corner.iter().map(|l| l.letter()).collect(),
            face_of: p.face_of.clone(),
            boundary_word,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructors::{pp, Chirality};
    use crate::map::{canonical_code, MirrorPolicy};

    #[test]
    fn round_trip_keeps_code() {
        let t = pp("cube", Chirality::Right).unwrap();
        let doc = TilingDocument::from_tiling(&t).with_meta("source", "test");
        let back = TilingDocument::from_json(&doc.to_json()).unwrap().to_tiling().unwrap();
        assert_eq!(
            canonical_code(&back, MirrorPolicy::Oriented),
            canonical_code(&t, MirrorPolicy::Oriented)
        );
        assert!(doc.to_json().contains("\"corner\""));
    }

    #[test]
    fn corrupt_documents_are_rejected() {
        let t = pp("cube", Chirality::Right).unwrap();
        let mut doc = TilingDocument::from_tiling(&t);
        doc.twin.swap(0, 1);
        assert!(doc.to_tiling().is_err());
        let mut doc = TilingDocument::from_tiling(&t);
        doc.corner[0] = 'z';
        assert!(matches!(doc.to_tiling(), Err(DocumentError::Corner('z'))));
        assert!(TilingDocument::from_json("{").is_err());
    }
}
