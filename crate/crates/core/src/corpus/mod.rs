//! Input corpus: documents, journal category weights, citation edges and the
//! journal-era taxonomy.
//!
//! Documents are addressed by a dense index in load order. A corpus is
//! immutable once built and can be shared freely across threads.

mod load;
mod taxonomy;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::labels::{LabelIndex, LabelWeights};
use crate::{Error, Result};

pub use load::{load_corpus, load_taxonomy, parse_corpus, CorpusPaths, CorpusText, LoadOptions};
pub use taxonomy::{Category, CategorySpec, Discipline, Taxonomy};

pub type DocIndex = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum DocType {
    Article,
    Review,
    ConferenceProceeding,
    Other,
}

impl DocType {
    /// Article, review and proceedings make up the statistics perimeter.
    pub fn in_perimeter(self) -> bool {
        !matches!(self, DocType::Other)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DocType::Article => "article",
            DocType::Review => "review",
            DocType::ConferenceProceeding => "proceedings",
            DocType::Other => "other",
        }
    }
}

impl fmt::Display for DocType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl TryFrom<String> for DocType {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

impl From<DocType> for String {
    fn from(t: DocType) -> String {
        t.as_str().to_string()
    }
}

impl FromStr for DocType {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let norm: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_lowercase())
            .collect();
        Ok(match norm.as_str() {
            "article" => DocType::Article,
            "review" => DocType::Review,
            "conferenceproceeding" | "conferenceproceedings" | "proceedings" | "proceedingspaper" => {
                DocType::ConferenceProceeding
            }
            "" => return Err("empty document type".into()),
            _ => DocType::Other,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub id: String,
    pub pub_year: i32,
    pub doc_type: DocType,
    pub journal_id: String,
    pub citation_count: u64,
    /// Address-fractional country weights as (country index, weight).
    pub countries: Vec<(usize, f64)>,
}

/// Directed citing → cited edges between corpus documents, stored as sorted
/// adjacency rows.
#[derive(Clone, Debug, Default)]
pub struct CitationGraph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl CitationGraph {
    fn from_sorted_pairs(doc_count: usize, pairs: &[(u32, u32)]) -> Self {
        let mut offsets = vec![0usize; doc_count + 1];
        for &(s, _) in pairs {
            offsets[s as usize + 1] += 1;
        }
        for i in 0..doc_count {
            offsets[i + 1] += offsets[i];
        }
        let targets = pairs.iter().map(|p| p.1).collect();
        Self { offsets, targets }
    }

    /// Graph over `doc_count` nodes from arbitrary pairs; self-loops and
    /// duplicates are dropped.
    pub fn from_edges(doc_count: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut pairs: Vec<(u32, u32)> = edges.into_iter().filter(|e| e.0 != e.1).collect();
        pairs.sort_unstable();
        pairs.dedup();
        Self::from_sorted_pairs(doc_count, &pairs)
    }

    pub fn doc_count(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    /// In-corpus references of `doc`, sorted by document index.
    pub fn references(&self, doc: DocIndex) -> &[u32] {
        &self.targets[self.offsets[doc]..self.offsets[doc + 1]]
    }

    pub fn reference_count(&self, doc: DocIndex) -> usize {
        self.offsets[doc + 1] - self.offsets[doc]
    }

    pub fn edges(&self) -> impl Iterator<Item = (DocIndex, DocIndex)> + '_ {
        (0..self.doc_count()).flat_map(move |d| self.references(d).iter().map(move |&t| (d, t as usize)))
    }

    /// Undirected simple edge list restricted to documents admitted by
    /// `keep`; reciprocal citations collapse to one edge. Pairs are `(lo, hi)`
    /// and sorted.
    pub fn undirected_edges(&self, keep: impl Fn(DocIndex) -> bool) -> Vec<(u32, u32)> {
        let mut pairs: Vec<(u32, u32)> = self
            .edges()
            .filter(|&(a, b)| keep(a) && keep(b))
            .map(|(a, b)| (a.min(b) as u32, a.max(b) as u32))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LoadReport {
    pub documents: usize,
    pub category_links: usize,
    pub edges: usize,
    pub dropped_self_citations: usize,
    pub dangling_edges: usize,
    pub duplicate_edges: usize,
    pub other_doc_types: usize,
}

impl LoadReport {
    pub fn warning_count(&self) -> usize {
        self.dropped_self_citations + self.dangling_edges + self.duplicate_edges
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain struct serializes")
    }
}

impl fmt::Display for LoadReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "docs: {}, category links: {}, edges: {}, dropped self-citations: {}, dangling: {}, duplicates: {}",
            self.documents,
            self.category_links,
            self.edges,
            self.dropped_self_citations,
            self.dangling_edges,
            self.duplicate_edges
        )
    }
}

#[derive(Debug)]
pub struct Corpus {
    documents: Vec<Document>,
    index: HashMap<String, DocIndex>,
    countries: Vec<String>,
    taxonomy: Taxonomy,
    categories: LabelWeights,
    graph: CitationGraph,
}

impl Corpus {
    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn document(&self, doc: DocIndex) -> &Document {
        &self.documents[doc]
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn doc_index(&self, id: &str) -> Option<DocIndex> {
        self.index.get(id).copied()
    }

    pub fn countries(&self) -> &[String] {
        &self.countries
    }

    pub fn taxonomy(&self) -> &Taxonomy {
        &self.taxonomy
    }

    /// Journal category weights, indexed by taxonomy category index.
    pub fn category_weights(&self) -> &LabelWeights {
        &self.categories
    }

    pub fn graph(&self) -> &CitationGraph {
        &self.graph
    }

    pub fn in_perimeter(&self, doc: DocIndex) -> bool {
        self.documents[doc].doc_type.in_perimeter()
    }

    /// Journal-era discipline weights: a category mapped to k disciplines
    /// passes 1/k of its weight to each.
    pub fn discipline_weights(&self) -> LabelWeights {
        let tax = &self.taxonomy;
        LabelWeights::from_rows((0..self.len()).map(|d| {
            self.categories
                .row(d)
                .iter()
                .flat_map(|&(cat, w)| {
                    let discs = &tax.category(cat as usize).disciplines;
                    let share = w / discs.len() as f64;
                    discs.iter().map(move |&disc| (disc as LabelIndex, share))
                })
                .collect::<Vec<_>>()
        }))
    }

    /// Splits documents by in-corpus reference count: Z has at least two,
    /// W has fewer.
    pub fn split_by_reference_count(&self) -> ReferenceSplit {
        let (z, w) = (0..self.len()).partition(|&d| self.graph.reference_count(d) >= 2);
        ReferenceSplit { z, w }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReferenceSplit {
    pub z: Vec<DocIndex>,
    pub w: Vec<DocIndex>,
}

/// Programmatic corpus construction; the TSV loader goes through it as well.
pub struct CorpusBuilder {
    taxonomy: Taxonomy,
    documents: Vec<Document>,
    index: HashMap<String, DocIndex>,
    countries: Vec<String>,
    country_index: HashMap<String, usize>,
    links: Vec<Vec<(LabelIndex, Option<f64>)>>,
    link_count: usize,
    edges: Vec<(u32, u32)>,
    report: LoadReport,
}

#[derive(Clone, Debug)]
pub struct NewDocument<'a> {
    pub id: &'a str,
    pub pub_year: i32,
    pub doc_type: DocType,
    pub journal_id: &'a str,
    pub citation_count: u64,
    pub countries: Vec<(&'a str, f64)>,
}

impl CorpusBuilder {
    pub fn new(taxonomy: Taxonomy) -> Self {
        Self {
            taxonomy,
            documents: Vec::new(),
            index: HashMap::new(),
            countries: Vec::new(),
            country_index: HashMap::new(),
            links: Vec::new(),
            link_count: 0,
            edges: Vec::new(),
            report: LoadReport::default(),
        }
    }

    pub fn taxonomy(&self) -> &Taxonomy {
        &self.taxonomy
    }

    pub fn add_document(&mut self, doc: NewDocument<'_>) -> Result<DocIndex> {
        if self.index.contains_key(doc.id) {
            return Err(Error::DuplicateDocument(doc.id.to_string()));
        }
        let mut total = 0.0;
        let mut countries = Vec::with_capacity(doc.countries.len());
        for (code, w) in doc.countries {
            if !(w > 0.0 && w <= 1.0) {
                return Err(Error::Invalid(format!(
                    "country weight {w} for `{code}` outside (0, 1]"
                )));
            }
            total += w;
            let next = self.countries.len();
            let idx = *self.country_index.entry(code.to_string()).or_insert(next);
            if idx == next {
                self.countries.push(code.to_string());
            }
            if countries.iter().any(|&(c, _)| c == idx) {
                return Err(Error::Invalid(format!("country `{code}` listed twice")));
            }
            countries.push((idx, w));
        }
        if total > 1.0 + 1e-9 {
            return Err(Error::Invalid(format!("country weights sum to {total} > 1")));
        }
        if doc.doc_type == DocType::Other {
            self.report.other_doc_types += 1;
        }
        let idx = self.documents.len();
        self.index.insert(doc.id.to_string(), idx);
        self.documents.push(Document {
            id: doc.id.to_string(),
            pub_year: doc.pub_year,
            doc_type: doc.doc_type,
            journal_id: doc.journal_id.to_string(),
            citation_count: doc.citation_count,
            countries,
        });
        self.links.push(Vec::new());
        Ok(idx)
    }

    pub fn doc_index(&self, id: &str) -> Option<DocIndex> {
        self.index.get(id).copied()
    }

    /// Links a document to a journal category; `weight = None` asks for an
    /// equal split across the document's links.
    pub fn add_category(&mut self, doc: &str, code: &str, weight: Option<f64>) -> Result<()> {
        let d = self
            .doc_index(doc)
            .ok_or_else(|| Error::Invalid(format!("category link for unknown document `{doc}`")))?;
        let cat = self
            .taxonomy
            .category_index(code)
            .ok_or_else(|| Error::Invalid(format!("unknown category code `{code}`")))?;
        if let Some(w) = weight {
            if !(w > 0.0 && w <= 1.0) {
                return Err(Error::Invalid(format!("category weight {w} outside (0, 1]")));
            }
        }
        let row = &mut self.links[d];
        if row.iter().any(|l| l.0 == cat as LabelIndex) {
            return Err(Error::Invalid(format!("document `{doc}` linked to `{code}` twice")));
        }
        row.push((cat as LabelIndex, weight));
        self.link_count += 1;
        Ok(())
    }

    /// Adds a citing → cited edge. Self-citations and edges with an unknown
    /// endpoint are dropped and counted in the load report.
    pub fn add_edge(&mut self, citing: &str, cited: &str) {
        match (self.index.get(citing), self.index.get(cited)) {
            (Some(&a), Some(&b)) if a == b => self.report.dropped_self_citations += 1,
            (Some(&a), Some(&b)) => self.edges.push((a as u32, b as u32)),
            _ => self.report.dangling_edges += 1,
        }
    }

    pub(crate) fn add_edge_indices(&mut self, citing: Option<DocIndex>, cited: Option<DocIndex>) {
        match (citing, cited) {
            (Some(a), Some(b)) if a == b => self.report.dropped_self_citations += 1,
            (Some(a), Some(b)) => self.edges.push((a as u32, b as u32)),
            _ => self.report.dangling_edges += 1,
        }
    }

    pub fn build(mut self) -> Result<(Corpus, LoadReport)> {
        let mut rows = Vec::with_capacity(self.links.len());
        for (d, links) in self.links.iter().enumerate() {
            let id = &self.documents[d].id;
            if links.is_empty() {
                return Err(Error::Invalid(format!("document `{id}` has no journal category")));
            }
            let explicit = links.iter().filter(|l| l.1.is_some()).count();
            let row: Vec<(LabelIndex, f64)> = if explicit == 0 {
                let share = 1.0 / links.len() as f64;
                links.iter().map(|l| (l.0, share)).collect()
            } else if explicit == links.len() {
                let row: Vec<_> = links.iter().map(|l| (l.0, l.1.unwrap())).collect();
                let sum: f64 = row.iter().map(|r| r.1).sum();
                if (sum - 1.0).abs() > 1e-9 {
                    return Err(Error::Invalid(format!(
                        "category weights of document `{id}` sum to {sum}, expected 1"
                    )));
                }
                row
            } else {
                return Err(Error::Invalid(format!(
                    "document `{id}` mixes explicit and implicit category weights"
                )));
            };
            rows.push(row);
        }
        let categories = LabelWeights::from_rows(rows);

        self.edges.sort_unstable();
        let before = self.edges.len();
        self.edges.dedup();
        self.report.duplicate_edges += before - self.edges.len();

        let graph = CitationGraph::from_sorted_pairs(self.documents.len(), &self.edges);
        self.report.documents = self.documents.len();
        self.report.category_links = self.link_count;
        self.report.edges = graph.edge_count();

        Ok((
            Corpus {
                documents: self.documents,
                index: self.index,
                countries: self.countries,
                taxonomy: self.taxonomy,
                categories,
                graph,
            },
            self.report,
        ))
    }
}

/// Three categories A, B and multidisciplinary M, all in one discipline.
#[cfg(test)]
pub(crate) fn test_taxonomy() -> Taxonomy {
    let cat = |code: &str, multi: bool| CategorySpec {
        code: code.into(),
        name: code.into(),
        multidisciplinary: multi,
        disciplines: vec!["01".into()],
    };
    Taxonomy::new(
        vec![cat("A", false), cat("B", false), cat("M", true)],
        vec![("01".into(), "LIFE".into())],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: &str) -> NewDocument<'_> {
        NewDocument {
            id,
            pub_year: 2019,
            doc_type: DocType::Article,
            journal_id: "J",
            citation_count: 0,
            countries: vec![],
        }
    }

    fn fixture(edges: &[(&str, &str)]) -> (Corpus, LoadReport) {
        let mut b = CorpusBuilder::new(test_taxonomy());
        for id in ["d1", "d2", "d3"] {
            b.add_document(doc(id)).unwrap();
            b.add_category(id, "A", None).unwrap();
        }
        for (a, c) in edges {
            b.add_edge(a, c);
        }
        b.build().unwrap()
    }

    #[test]
    fn counts_edges_and_documents() {
        let (c, r) = fixture(&[("d1", "d2"), ("d2", "d3")]);
        assert_eq!((r.documents, r.edges, r.dropped_self_citations), (3, 2, 0));
        assert_eq!(c.graph().references(0), &[1]);
    }

    #[test]
    fn drops_self_citations_and_dangling_edges() {
        let (c, r) = fixture(&[("d1", "d1"), ("d1", "X"), ("d1", "d2"), ("d1", "d2")]);
        assert_eq!(r.dropped_self_citations, 1);
        assert_eq!(r.dangling_edges, 1);
        assert_eq!(r.duplicate_edges, 1);
        assert_eq!(c.graph().edge_count(), 1);
    }

    #[test]
    fn equal_split_and_explicit_weights() {
        let mut b = CorpusBuilder::new(test_taxonomy());
        b.add_document(doc("x")).unwrap();
        b.add_category("x", "A", None).unwrap();
        b.add_category("x", "B", None).unwrap();
        b.add_document(doc("y")).unwrap();
        b.add_category("y", "A", Some(0.25)).unwrap();
        b.add_category("y", "B", Some(0.75)).unwrap();
        let (c, _) = b.build().unwrap();
        assert_eq!(c.category_weights().row(0), &[(0, 0.5), (1, 0.5)]);
        assert_eq!(c.category_weights().row(1), &[(0, 0.25), (1, 0.75)]);
    }

    #[test]
    fn rejects_inconsistent_weights() {
        let mut b = CorpusBuilder::new(test_taxonomy());
        b.add_document(doc("x")).unwrap();
        b.add_category("x", "A", Some(0.5)).unwrap();
        b.add_category("x", "B", None).unwrap();
        assert!(b.build().is_err());

        let mut b = CorpusBuilder::new(test_taxonomy());
        b.add_document(doc("x")).unwrap();
        b.add_category("x", "A", Some(0.5)).unwrap();
        assert!(b.build().is_err());

        let mut b = CorpusBuilder::new(test_taxonomy());
        b.add_document(doc("x")).unwrap();
        assert!(b.add_category("x", "ZZ", None).is_err());
        assert!(matches!(b.add_document(doc("x")), Err(Error::DuplicateDocument(_))));
    }

    #[test]
    fn country_weight_validation() {
        let mut b = CorpusBuilder::new(test_taxonomy());
        let mut d = doc("x");
        d.countries = vec![("FR", 0.7), ("DE", 0.4)];
        assert!(b.add_document(d).is_err());
        let mut d = doc("y");
        d.countries = vec![("FR", 0.0)];
        assert!(b.add_document(d).is_err());
    }

    #[test]
    fn reference_split_boundaries() {
        let (c, _) = fixture(&[("d1", "d2"), ("d1", "d3"), ("d2", "d3")]);
        let s = c.split_by_reference_count();
        assert_eq!(s.z, vec![0]);
        assert_eq!(s.w, vec![1, 2]);
        assert_eq!(s.z.len() + s.w.len(), c.len());
    }

    #[test]
    fn empty_corpus_splits_to_empty_sets() {
        let (c, _) = CorpusBuilder::new(test_taxonomy()).build().unwrap();
        assert_eq!(c.split_by_reference_count(), ReferenceSplit::default());
    }

    #[test]
    fn undirected_edges_collapse_reciprocal_pairs() {
        let (c, _) = fixture(&[("d1", "d2"), ("d2", "d1"), ("d2", "d3")]);
        assert_eq!(c.graph().undirected_edges(|_| true), vec![(0, 1), (1, 2)]);
        assert_eq!(c.graph().undirected_edges(|d| d != 2), vec![(0, 1)]);
    }

    #[test]
    fn doc_type_parsing() {
        assert_eq!("Article".parse::<DocType>().unwrap(), DocType::Article);
        assert_eq!("Proceedings Paper".parse::<DocType>().unwrap(), DocType::ConferenceProceeding);
        assert_eq!("Letter".parse::<DocType>().unwrap(), DocType::Other);
        assert!("".parse::<DocType>().is_err());
    }
}
