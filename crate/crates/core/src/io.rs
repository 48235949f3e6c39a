//! JSON file formats: disjointness graph export, thrackle, structure,
//! family, certificate, and family statistics.
//!
//! Writers emit compact JSON with a fixed key order and a trailing newline,
//! so equal values always give equal bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bounds::{verify_edge_bound, FamilyStats, ThrackleFamily};
use crate::chromatic::{verify_certificate, ColoringCertificate};
use crate::convex::{build_disjointness_graph, Chord, DisjointnessGraph};
use crate::error::{Error, Result};
use crate::thrackle::{is_thrackle, MaximalThrackleStructure, Thrackle};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub n: usize,
    pub vertices: Vec<Chord>,
    pub edges: Vec<[usize; 2]>,
}

impl From<&DisjointnessGraph> for GraphFile {
    fn from(g: &DisjointnessGraph) -> Self {
        Self {
            n: g.n(),
            vertices: g.vertices().to_vec(),
            edges: g.edges().map(|(i, j)| [i, j]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThrackleFile {
    pub n: usize,
    pub edges: Vec<Chord>,
}

impl From<&Thrackle> for ThrackleFile {
    fn from(t: &Thrackle) -> Self {
        Self { n: t.n(), edges: t.edges().iter().copied().collect() }
    }
}

impl ThrackleFile {
    pub fn to_thrackle(&self) -> Result<Thrackle> {
        Thrackle::new(self.n, self.edges.iter().copied())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub n: usize,
    pub edges: Vec<Chord>,
    pub cycle: Vec<usize>,
    pub pendants: BTreeMap<usize, usize>,
}

impl From<&MaximalThrackleStructure> for StructureFile {
    fn from(s: &MaximalThrackleStructure) -> Self {
        Self {
            n: s.n(),
            edges: s.to_thrackle().edges().iter().copied().collect(),
            cycle: s.cycle().to_vec(),
            pendants: s.pendants().clone(),
        }
    }
}

impl StructureFile {
    pub fn to_structure(&self) -> Result<MaximalThrackleStructure> {
        MaximalThrackleStructure::from_parts(self.n, self.cycle.clone(), self.pendants.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub n: usize,
    pub thrackles: Vec<ThrackleFile>,
}

impl From<&ThrackleFamily> for FamilyFile {
    fn from(f: &ThrackleFamily) -> Self {
        Self { n: f.n(), thrackles: f.members().iter().map(ThrackleFile::from).collect() }
    }
}

impl FamilyFile {
    pub fn to_family(&self) -> Result<ThrackleFamily> {
        let members = self.thrackles.iter().map(ThrackleFile::to_thrackle).collect::<Result<Vec<_>>>()?;
        ThrackleFamily::new(self.n, members)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub n: usize,
    pub k: usize,
    pub classes: Vec<Vec<Chord>>,
}

impl From<&ColoringCertificate> for CertificateFile {
    fn from(c: &ColoringCertificate) -> Self {
        Self { n: c.n, k: c.k(), classes: c.classes.clone() }
    }
}

impl CertificateFile {
    pub fn to_certificate(&self) -> ColoringCertificate {
        ColoringCertificate { n: self.n, classes: self.classes.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsFile {
    pub union_edges: usize,
    pub r: usize,
    pub bound: i64,
    pub tight: bool,
}

impl From<FamilyStats> for StatsFile {
    fn from(s: FamilyStats) -> Self {
        Self { union_edges: s.union_edges, r: s.r, bound: s.bound, tight: s.tight }
    }
}

/// Compact JSON plus newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("file types always serialize");
    s.push('\n');
    s
}

/// Any of the file kinds, recognised by their keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Graph(GraphFile),
    Thrackle(ThrackleFile),
    Structure(StructureFile),
    Family(FamilyFile),
    Certificate(CertificateFile),
}

fn malformed(e: impl std::fmt::Display) -> Error {
    Error::Malformed(e.to_string())
}

pub fn parse_document(text: &str) -> Result<Document> {
    let v: Value = serde_json::from_str(text).map_err(malformed)?;
    let obj = v.as_object().ok_or_else(|| malformed("top level is not an object"))?;
    let has = |k: &str| obj.contains_key(k);
    let doc = if has("classes") {
        Document::Certificate(serde_json::from_value(v).map_err(malformed)?)
    } else if has("thrackles") {
        Document::Family(serde_json::from_value(v).map_err(malformed)?)
    } else if has("cycle") {
        Document::Structure(serde_json::from_value(v).map_err(malformed)?)
    } else if has("vertices") {
        Document::Graph(serde_json::from_value(v).map_err(malformed)?)
    } else if has("edges") {
        Document::Thrackle(serde_json::from_value(v).map_err(malformed)?)
    } else {
        return Err(malformed("unrecognised file kind"));
    };
    Ok(doc)
}

impl Document {
    pub fn to_json(&self) -> String {
        match self {
            Document::Graph(g) => to_json(g),
            Document::Thrackle(t) => to_json(t),
            Document::Structure(s) => to_json(s),
            Document::Family(f) => to_json(f),
            Document::Certificate(c) => to_json(c),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Document::Graph(_) => "graph",
            Document::Thrackle(_) => "thrackle",
            Document::Structure(_) => "structure",
            Document::Family(_) => "family",
            Document::Certificate(_) => "certificate",
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Document::Graph(g) => g.n,
            Document::Thrackle(t) => t.n,
            Document::Structure(s) => s.n,
            Document::Family(f) => f.n,
            Document::Certificate(c) => c.n,
        }
    }
}

/// Outcome of checking a document against its invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub ok: bool,
    pub detail: String,
}

impl Verdict {
    fn pass(detail: impl Into<String>) -> Self {
        Self { ok: true, detail: detail.into() }
    }

    fn fail(detail: impl Into<String>) -> Self {
        Self { ok: false, detail: detail.into() }
    }
}

/// Checks a parsed document. Bad indices and other shape problems are
/// `Err(Malformed)`; a well-formed document that breaks an invariant gives a
/// failing verdict.
pub fn verify_document(doc: &Document) -> Result<Verdict> {
    match doc {
        Document::Graph(g) => {
            let expected = GraphFile::from(&build_disjointness_graph(g.n).map_err(malformed)?);
            Ok(if &expected == g {
                Verdict::pass(format!("D_{} with {} vertices and {} edges", g.n, g.vertices.len(), g.edges.len()))
            } else {
                Verdict::fail("graph differs from the disjointness graph")
            })
        }
        Document::Thrackle(t) => {
            if !is_thrackle(t.n, &t.edges).map_err(malformed)? {
                return Ok(Verdict::fail("edges contain a disjoint pair"));
            }
            let th = t.to_thrackle()?;
            let maximal = crate::thrackle::is_maximal(&th)?;
            Ok(Verdict::pass(format!("thrackle with {} edges, maximal = {maximal}", th.len())))
        }
        Document::Structure(s) => {
            if s.cycle.iter().chain(s.pendants.keys()).chain(s.pendants.values()).any(|&v| v >= s.n) {
                return Err(malformed("structure index out of range"));
            }
            match s.to_structure() {
                Ok(st) if StructureFile::from(&st) == *s => {
                    Ok(Verdict::pass(format!("cycle of length {}", st.cycle().len())))
                }
                Ok(_) => Ok(Verdict::fail("edges do not match cycle and pendants")),
                Err(Error::MalformedStructure(m)) => Ok(Verdict::fail(m)),
                Err(e) => Err(e),
            }
        }
        Document::Family(f) => {
            for t in &f.thrackles {
                if t.n != f.n {
                    return Err(malformed("member point count differs from family"));
                }
                if !is_thrackle(t.n, &t.edges).map_err(malformed)? {
                    return Ok(Verdict::fail("a member contains a disjoint pair"));
                }
                if !crate::thrackle::is_maximal(&t.to_thrackle()?)? {
                    return Ok(Verdict::fail("a member is not maximal"));
                }
            }
            let fam = f.to_family()?;
            match verify_edge_bound(&fam) {
                Ok(s) => Ok(Verdict::pass(format!(
                    "k = {}, union edges {} <= {}, r = {}",
                    fam.k(),
                    s.union_edges,
                    s.bound,
                    s.r
                ))),
                Err(Error::Falsified(m)) => Ok(Verdict::fail(m)),
                Err(e) => Err(e),
            }
        }
        Document::Certificate(c) => {
            let cert = c.to_certificate();
            if !verify_certificate(&cert)? {
                return Ok(Verdict::fail("classes are not a partition into thrackles"));
            }
            if c.k != cert.k() {
                return Ok(Verdict::fail(format!("k = {} but {} classes", c.k, cert.k())));
            }
            Ok(Verdict::pass(format!("{} classes cover all chords of D_{}", c.k, c.n)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::tight_family;
    use crate::thrackle::{from_cycle_support, structure_from_cycle_support};

    #[test]
    fn graph_export_shape() {
        let g = build_disjointness_graph(4).unwrap();
        assert_eq!(
            to_json(&GraphFile::from(&g)),
            "{\"n\":4,\"vertices\":[[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]],\"edges\":[[0,5],[2,3]]}\n"
        );
    }

    #[test]
    fn structure_file_shape() {
        let s = structure_from_cycle_support(5, &[0, 1, 2]).unwrap();
        assert_eq!(
            to_json(&StructureFile::from(&s)),
            "{\"n\":5,\"edges\":[[0,1],[0,2],[1,2],[1,3],[1,4]],\"cycle\":[0,1,2],\"pendants\":{\"3\":1,\"4\":1}}\n"
        );
    }

    #[test]
    fn documents_round_trip_bytes() {
        let docs = [
            to_json(&GraphFile::from(&build_disjointness_graph(5).unwrap())),
            to_json(&ThrackleFile::from(&from_cycle_support(12, &[0, 3, 4, 9, 10]).unwrap())),
            to_json(&StructureFile::from(&structure_from_cycle_support(12, &[0, 3, 4, 9, 10]).unwrap())),
            to_json(&FamilyFile::from(&tight_family(10, 3).unwrap())),
        ];
        for text in docs {
            let doc = parse_document(&text).unwrap();
            assert_eq!(doc.to_json(), text);
            assert!(verify_document(&doc).unwrap().ok, "{}", doc.kind());
        }
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(parse_document("{\"n\":5,\"edges\":[[0,1]"), Err(Error::Malformed(_))));
        assert!(matches!(parse_document("[1,2]"), Err(Error::Malformed(_))));
        assert!(matches!(parse_document("{\"n\":5}"), Err(Error::Malformed(_))));
        assert!(matches!(parse_document("{\"n\":5,\"edges\":[[1,1]]}"), Err(Error::Malformed(_))));
        let doc = parse_document("{\"n\":5,\"edges\":[[0,7]]}").unwrap();
        assert!(matches!(verify_document(&doc), Err(Error::Malformed(_))));
    }

    #[test]
    fn failing_verdicts() {
        let doc = parse_document("{\"n\":5,\"edges\":[[0,1],[2,3]]}").unwrap();
        assert!(!verify_document(&doc).unwrap().ok);
        let doc = parse_document("{\"n\":4,\"k\":2,\"classes\":[[[0,1],[2,3]],[[0,2],[1,3],[1,2],[0,3]]]}").unwrap();
        assert!(!verify_document(&doc).unwrap().ok);
        let doc = parse_document("{\"n\":5,\"thrackles\":[{\"n\":5,\"edges\":[[0,1],[0,2]]}]}").unwrap();
        assert!(!verify_document(&doc).unwrap().ok);
        let doc = parse_document("{\"n\":4,\"vertices\":[[0,1]],\"edges\":[]}").unwrap();
        assert!(!verify_document(&doc).unwrap().ok);
    }
}
