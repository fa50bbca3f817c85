//! JSON documents for frames, maps, formations and algebra diagrams.
//!
//! Frame: `{"nodes": [..], "le": [[a, b], ..], "r": [[a, b], ..]}` where
//! `le` lists order generators (any generating set is accepted; the
//! covering pairs are written). A frame may also be given by a path to a
//! frame file, resolved relative to the referring document.
//!
//! Map: `{"from": <frame>, "to": <frame>, "map": {"x": "y", ..}}`, plus
//! optional `from_sha256`/`to_sha256` content hashes of the two frames.
//! Formation: `{"base", "left", "right", "f", "g", "mode"}` where `f` and
//! `g` are bare map objects. Superamalgam diagram: `{"a", "b1", "b2", "c",
//! "h1", "h2", "p1", "p2"}` with algebra tables and map tables.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::FiniteAlgebra;
use crate::amalgam::{AlgebraHom, AmalgamError, CoVFormation, Mode};
use crate::frame::{Frame, FrameError};
use crate::morphism::{FrameMap, MorphismError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}:{line}:{column}: {message}")]
    Json {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{origin}: {source}")]
    Frame {
        origin: String,
        #[source]
        source: FrameError,
    },
    #[error("{origin}: {source}")]
    Morphism {
        origin: String,
        #[source]
        source: MorphismError,
    },
    #[error("{origin}: {source}")]
    Amalgam {
        origin: String,
        #[source]
        source: AmalgamError,
    },
    #[error("{origin}: {message}")]
    Invalid { origin: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameDoc {
    pub nodes: Vec<String>,
    #[serde(default)]
    pub le: Vec<(String, String)>,
    #[serde(default)]
    pub r: Vec<(String, String)>,
}

impl FrameDoc {
    pub fn of(frame: &Frame) -> Self {
        Self {
            nodes: frame.nodes().to_vec(),
            le: frame.le_generators_named(),
            r: frame.r_edges_named(),
        }
    }

    pub fn build(&self) -> Result<Frame, FrameError> {
        Frame::from_edges(&self.nodes, &self.le, &self.r)
    }
}

/// A frame given inline or by path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FrameRef {
    Path(String),
    Inline(FrameDoc),
}

pub type MapDoc = IndexMap<String, String>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDoc {
    pub from: FrameRef,
    pub to: FrameRef,
    pub map: MapDoc,
    /// Content hash of the source frame, checked on load when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from_sha256: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to_sha256: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormationDoc {
    pub base: FrameRef,
    pub left: FrameRef,
    pub right: FrameRef,
    pub f: MapDoc,
    pub g: MapDoc,
    #[serde(default)]
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperamalgamDoc {
    pub a: FiniteAlgebra,
    pub b1: FiniteAlgebra,
    pub b2: FiniteAlgebra,
    pub c: FiniteAlgebra,
    pub h1: Vec<usize>,
    pub h2: Vec<usize>,
    pub p1: Vec<usize>,
    pub p2: Vec<usize>,
}

/// The four maps of a superamalgam diagram.
pub struct Diagram {
    pub h1: AlgebraHom,
    pub h2: AlgebraHom,
    pub p1: AlgebraHom,
    pub p2: AlgebraHom,
}

/// Where a document came from, for diagnostics and relative paths.
#[derive(Debug, Clone)]
pub struct Origin {
    pub label: String,
    pub dir: Option<PathBuf>,
}

impl Origin {
    pub fn file(path: &Path) -> Self {
        Self {
            label: path.display().to_string(),
            dir: path.parent().map(Path::to_path_buf),
        }
    }

    pub fn inline(label: &str) -> Self {
        Self {
            label: label.into(),
            dir: None,
        }
    }
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::Read {
        path: path.display().to_string(),
        source,
    })
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, origin: &Origin) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Json {
        origin: origin.label.clone(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn frame_err(origin: &Origin) -> impl Fn(FrameError) -> IoError + '_ {
    move |source| IoError::Frame {
        origin: origin.label.clone(),
        source,
    }
}

fn morph_err(origin: &Origin) -> impl Fn(MorphismError) -> IoError + '_ {
    move |source| IoError::Morphism {
        origin: origin.label.clone(),
        source,
    }
}

pub fn parse_frame(text: &str, origin: &Origin) -> Result<Frame, IoError> {
    let doc: FrameDoc = parse_json(text, origin)?;
    doc.build().map_err(frame_err(origin))
}

pub fn load_frame(path: &Path) -> Result<Frame, IoError> {
    parse_frame(&read_text(path)?, &Origin::file(path))
}

pub fn resolve_frame(r: &FrameRef, origin: &Origin) -> Result<Arc<Frame>, IoError> {
    match r {
        FrameRef::Inline(doc) => doc.build().map(Arc::new).map_err(frame_err(origin)),
        FrameRef::Path(p) => {
            let path = match &origin.dir {
                Some(dir) => dir.join(p),
                None => PathBuf::from(p),
            };
            load_frame(&path).map(Arc::new)
        }
    }
}

pub fn map_from_doc(from: Arc<Frame>, to: Arc<Frame>, map: &MapDoc, origin: &Origin) -> Result<FrameMap, IoError> {
    let pairs: Vec<(&str, &str)> = map.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    FrameMap::from_pairs(from, to, &pairs).map_err(morph_err(origin))
}

pub fn map_to_doc(m: &FrameMap) -> MapDoc {
    m.pairs_named().into_iter().collect()
}

pub fn parse_morphism(text: &str, origin: &Origin) -> Result<FrameMap, IoError> {
    let doc: MorphismDoc = parse_json(text, origin)?;
    let from = resolve_frame(&doc.from, origin)?;
    let to = resolve_frame(&doc.to, origin)?;
    for (side, frame, expected) in [("from", &from, &doc.from_sha256), ("to", &to, &doc.to_sha256)] {
        if let Some(expected) = expected {
            let actual = frame_hash(frame);
            if !actual.eq_ignore_ascii_case(expected) {
                return Err(IoError::Invalid {
                    origin: origin.label.clone(),
                    message: format!("`{side}` frame has hash {actual}, document expects {expected}"),
                });
            }
        }
    }
    map_from_doc(from, to, &doc.map, origin)
}

pub fn load_morphism(path: &Path) -> Result<FrameMap, IoError> {
    parse_morphism(&read_text(path)?, &Origin::file(path))
}

/// Builds a map from separately given frames and a bare map object.
pub fn load_map_between(from: &Path, to: &Path, map: &Path) -> Result<FrameMap, IoError> {
    let origin = Origin::file(map);
    let doc: MapDoc = parse_json(&read_text(map)?, &origin)?;
    map_from_doc(Arc::new(load_frame(from)?), Arc::new(load_frame(to)?), &doc, &origin)
}

pub fn parse_formation(text: &str, origin: &Origin) -> Result<(CoVFormation, Mode), IoError> {
    let doc: FormationDoc = parse_json(text, origin)?;
    let base = resolve_frame(&doc.base, origin)?;
    let left = resolve_frame(&doc.left, origin)?;
    let right = resolve_frame(&doc.right, origin)?;
    let f = map_from_doc(left, base.clone(), &doc.f, origin)?;
    let g = map_from_doc(right, base, &doc.g, origin)?;
    let c = CoVFormation::new(f, g).map_err(|source| IoError::Amalgam {
        origin: origin.label.clone(),
        source,
    })?;
    Ok((c, doc.mode))
}

pub fn load_formation(path: &Path) -> Result<(CoVFormation, Mode), IoError> {
    parse_formation(&read_text(path)?, &Origin::file(path))
}

pub fn parse_algebra(text: &str, origin: &Origin) -> Result<FiniteAlgebra, IoError> {
    let a: FiniteAlgebra = parse_json(text, origin)?;
    a.validate_shape().map_err(|e| IoError::Invalid {
        origin: origin.label.clone(),
        message: e.to_string(),
    })?;
    Ok(a)
}

pub fn load_algebra(path: &Path) -> Result<FiniteAlgebra, IoError> {
    parse_algebra(&read_text(path)?, &Origin::file(path))
}

pub fn parse_diagram(text: &str, origin: &Origin) -> Result<Diagram, IoError> {
    let doc: SuperamalgamDoc = parse_json(text, origin)?;
    let invalid = |message: String| IoError::Invalid {
        origin: origin.label.clone(),
        message,
    };
    for (name, alg) in [("a", &doc.a), ("b1", &doc.b1), ("b2", &doc.b2), ("c", &doc.c)] {
        alg.validate_shape()
            .map_err(|e| invalid(format!("algebra {name}: {e}")))?;
    }
    let [a, b1, b2, c] = [doc.a, doc.b1, doc.b2, doc.c].map(Arc::new);
    let hom = |name: &str, s: &Arc<FiniteAlgebra>, t: &Arc<FiniteAlgebra>, table: Vec<usize>| {
        AlgebraHom::new(s.clone(), t.clone(), table).map_err(|e| invalid(format!("map {name}: {e}")))
    };
    Ok(Diagram {
        h1: hom("h1", &a, &b1, doc.h1)?,
        h2: hom("h2", &a, &b2, doc.h2)?,
        p1: hom("p1", &b1, &c, doc.p1)?,
        p2: hom("p2", &b2, &c, doc.p2)?,
    })
}

pub fn load_diagram(path: &Path) -> Result<Diagram, IoError> {
    parse_diagram(&read_text(path)?, &Origin::file(path))
}

fn pretty<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

pub fn frame_to_json(frame: &Frame) -> String {
    pretty(&FrameDoc::of(frame))
}

/// SHA-256 of the canonical serialization, as lowercase hex. Equal frames
/// hash equally however their documents were written.
pub fn frame_hash(frame: &Frame) -> String {
    format!("{:x}", Sha256::digest(frame_to_json(frame).as_bytes()))
}

/// A self-contained map document with both frames inline.
pub fn morphism_to_json(m: &FrameMap) -> String {
    pretty(&MorphismDoc {
        from: FrameRef::Inline(FrameDoc::of(m.source())),
        to: FrameRef::Inline(FrameDoc::of(m.target())),
        map: map_to_doc(m),
        from_sha256: Some(frame_hash(m.source())),
        to_sha256: Some(frame_hash(m.target())),
    })
}

pub fn formation_to_json(c: &CoVFormation, mode: Mode) -> String {
    pretty(&FormationDoc {
        base: FrameRef::Inline(FrameDoc::of(c.base())),
        left: FrameRef::Inline(FrameDoc::of(c.left())),
        right: FrameRef::Inline(FrameDoc::of(c.right())),
        f: map_to_doc(c.f()),
        g: map_to_doc(c.g()),
        mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_round_trip() {
        let f = Frame::from_edges(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("a", "c")], &[("a", "c")]).unwrap();
        let text = frame_to_json(&f);
        let back = parse_frame(&text, &Origin::inline("t")).unwrap();
        assert_eq!(back, f);
        assert_eq!(frame_to_json(&back), text);
        // the redundant generator a <= c is not written
        assert_eq!(FrameDoc::of(&f).le.len(), 2);
    }

    #[test]
    fn json_errors_carry_positions() {
        let err = parse_frame("{\"nodes\": [\"a\",]}", &Origin::inline("t")).unwrap_err();
        match err {
            IoError::Json { line, column, .. } => assert_eq!((line, column), (1, 16)),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(parse_frame("{\"nodes\": [], \"edges\": []}", &Origin::inline("t")).is_err());
    }

    #[test]
    fn empty_frame_parses() {
        let f = parse_frame("{\"nodes\": []}", &Origin::inline("t")).unwrap();
        assert!(f.is_empty());
    }
}
