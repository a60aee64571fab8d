//! Partition quality: modularity over the undirected citation graph and
//! reference concentration (mean Herfindahl index) of gold-standard papers.

use std::collections::HashMap;

use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{CitationGraph, Corpus, DocIndex};
use crate::{Error, Result};

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.576;

/// A hard partition of (part of) the corpus. Documents without a class are
/// outside the evaluated set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionView {
    codes: Vec<String>,
    classes: Vec<Option<u32>>,
}

impl PartitionView {
    /// `classes[d]` indexes `codes`.
    pub fn new(codes: Vec<String>, classes: Vec<Option<u32>>) -> Self {
        assert!(classes.iter().flatten().all(|&c| (c as usize) < codes.len()));
        Self { codes, classes }
    }

    /// Builds a view from per-document class codes.
    pub fn from_codes<'a>(docs: impl IntoIterator<Item = Option<&'a str>>) -> Self {
        let docs: Vec<Option<&str>> = docs.into_iter().collect();
        let mut codes: Vec<String> = docs.iter().flatten().map(|c| c.to_string()).collect();
        codes.sort();
        codes.dedup();
        let index: HashMap<&str, u32> = codes.iter().enumerate().map(|(i, c)| (c.as_str(), i as u32)).collect();
        let classes = docs.iter().map(|c| c.map(|c| index[c])).collect();
        Self { codes, classes }
    }

    /// Journal view: each document in its largest-weight non-excluded
    /// category; documents with nothing but excluded categories are dropped.
    pub fn journal_categories(corpus: &Corpus) -> Self {
        let labels = corpus.taxonomy().category_labels();
        let w = corpus.category_weights();
        let classes = (0..corpus.len())
            .map(|d| w.primary(d, |l| !labels.is_excluded(l)))
            .collect();
        Self::new(labels.codes().to_vec(), classes)
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn codes(&self) -> &[String] {
        &self.codes
    }

    pub fn class(&self, doc: DocIndex) -> Option<u32> {
        self.classes[doc]
    }

    /// Number of classes holding at least one evaluated document.
    pub fn class_count(&self) -> usize {
        let mut seen = vec![false; self.codes.len()];
        for c in self.classes.iter().flatten() {
            seen[*c as usize] = true;
        }
        seen.into_iter().filter(|s| *s).count()
    }

    /// Drops documents outside `keep` from the evaluated set.
    pub fn restrict(mut self, keep: impl Fn(DocIndex) -> bool) -> Self {
        for (d, c) in self.classes.iter_mut().enumerate() {
            if !keep(d) {
                *c = None;
            }
        }
        self
    }

    /// Errors when an evaluated document cites, or is cited by, a document
    /// that has no class while `expected` says it should.
    pub fn require(&self, graph: &CitationGraph, expected: impl Fn(DocIndex) -> bool, ids: impl Fn(DocIndex) -> String) -> Result<()> {
        for (a, b) in graph.edges() {
            for d in [a, b] {
                if expected(d) && self.classes[d].is_none() {
                    return Err(Error::MissingClass(ids(d)));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModularityResult {
    pub h: f64,
    /// (class code, e_C/2m − (K_C/2m)²) for every class with a document.
    pub per_class: Vec<(String, f64)>,
    pub std_error: Option<f64>,
    pub ci99: Option<(f64, f64)>,
    /// Undirected simple edges between evaluated documents.
    pub m: usize,
    pub classes: usize,
}

/// Modularity of the partition over the undirected simple graph induced by
/// the evaluated documents.
///
/// `e_C` counts ordered internal pairs (twice the internal edges), so
/// `H = Σ_C e_C/2m − (K_C/2m)²`, the one-class partition scores zero and the
/// value equals Newman modularity. The standard error is a delete-one-class
/// jackknife.
pub fn modularity(partition: &PartitionView, graph: &CitationGraph) -> Result<ModularityResult> {
    assert_eq!(partition.len(), graph.doc_count());
    let edges = graph.undirected_edges(|d| partition.class(d).is_some());
    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let k = partition.codes.len();
    let mut internal = vec![0u64; k];
    let mut degree = vec![0u64; k];
    let mut cross: HashMap<(u32, u32), u64> = HashMap::new();
    for &(a, b) in &edges {
        let ca = partition.class(a as usize).unwrap();
        let cb = partition.class(b as usize).unwrap();
        degree[ca as usize] += 1;
        degree[cb as usize] += 1;
        if ca == cb {
            internal[ca as usize] += 1;
        } else {
            *cross.entry((ca.min(cb), ca.max(cb))).or_default() += 1;
        }
    }
    let present: Vec<bool> = {
        let mut p = vec![false; k];
        for c in partition.classes.iter().flatten() {
            p[*c as usize] = true;
        }
        p
    };
    let m = edges.len() as u64;
    let two_m = 2.0 * m as f64;
    let term = |e: u64, kc: u64| 2.0 * e as f64 / two_m - (kc as f64 / two_m).powi(2);
    let per: Vec<(usize, f64)> = (0..k).filter(|&c| present[c]).map(|c| (c, term(internal[c], degree[c]))).collect();
    let h: f64 = per.iter().map(|p| p.1).sum();

    let std_error = jackknife(&per.iter().map(|p| p.0).collect::<Vec<_>>(), &internal, &degree, &cross, m);
    Ok(ModularityResult {
        h,
        per_class: per.iter().map(|&(c, t)| (partition.codes[c].clone(), t)).collect(),
        std_error,
        ci99: std_error.map(|se| (h - Z_99 * se, h + Z_99 * se)),
        m: m as usize,
        classes: per.len(),
    })
}

/// Delete-one-class jackknife. Removing class j deletes its internal and
/// cross edges; every other class keeps `e_C` and loses its cross degree to j.
fn jackknife(classes: &[usize], internal: &[u64], degree: &[u64], cross: &HashMap<(u32, u32), u64>, m: u64) -> Option<f64> {
    let n = classes.len();
    if n < 2 {
        return None;
    }
    let mut neighbours: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
    let mut cross_sorted: Vec<(&(u32, u32), &u64)> = cross.iter().collect();
    cross_sorted.sort();
    for (&(a, b), &x) in cross_sorted {
        neighbours.entry(a as usize).or_default().push((b as usize, x));
        neighbours.entry(b as usize).or_default().push((a as usize, x));
    }
    let e_total: u64 = classes.iter().map(|&c| internal[c]).sum();
    let k2_total: f64 = classes.iter().map(|&c| (degree[c] as f64).powi(2)).sum();
    let mut replicates = Vec::with_capacity(n);
    for &j in classes {
        let nb = neighbours.get(&j).map(Vec::as_slice).unwrap_or(&[]);
        let cross_j: u64 = nb.iter().map(|x| x.1).sum();
        let m_j = m - internal[j] - cross_j;
        if m_j == 0 {
            return None;
        }
        let two_mj = 2.0 * m_j as f64;
        // Σ_{C≠j} (K_C − x_Cj)², expanded so only j's neighbours are visited
        let mut k2 = k2_total - (degree[j] as f64).powi(2);
        for &(c, x) in nb {
            let kc = degree[c] as f64;
            k2 += (kc - x as f64).powi(2) - kc * kc;
        }
        let e = (e_total - internal[j]) as f64;
        replicates.push(2.0 * e / two_mj - k2 / (two_mj * two_mj));
    }
    let mean = replicates.iter().sum::<f64>() / n as f64;
    let ss: f64 = replicates.iter().map(|r| (r - mean).powi(2)).sum();
    Some(((n - 1) as f64 / n as f64 * ss).sqrt())
}

/// Documents of corpus Z in the statistics perimeter with at least
/// `min_refs` in-corpus references.
pub fn select_gold_standard(corpus: &Corpus, min_refs: usize) -> Vec<DocIndex> {
    let g = corpus.graph();
    (0..corpus.len())
        .filter(|&d| corpus.in_perimeter(d) && g.reference_count(d) >= 2 && g.reference_count(d) >= min_refs)
        .collect()
}

/// Herfindahl index of a histogram of whole counts; `None` when empty.
pub fn herfindahl(counts: &[u64]) -> Option<f64> {
    let n: u64 = counts.iter().sum();
    if n == 0 {
        return None;
    }
    let n = n as f64;
    Some(counts.iter().map(|&c| (c as f64 / n).powi(2)).sum())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AccuracyResult {
    pub he: f64,
    pub per_paper: Vec<(DocIndex, f64)>,
    pub n: usize,
    /// Gold papers whose every reference is unclassified.
    pub skipped: usize,
    /// Sample standard deviation of HE(s).
    pub sd: Option<f64>,
    /// Standard error of the mean.
    pub std_error: Option<f64>,
    pub ci99: Option<(f64, f64)>,
}

/// Mean reference concentration of the gold papers under `partition`.
/// References without a class are ignored.
pub fn accuracy(partition: &PartitionView, graph: &CitationGraph, gold: &[DocIndex]) -> Result<AccuracyResult> {
    if gold.is_empty() {
        return Err(Error::EmptyGoldSet);
    }
    let scores: Vec<Option<f64>> = gold
        .par_iter()
        .map(|&s| {
            let mut counts: HashMap<u32, u64> = HashMap::new();
            for &r in graph.references(s) {
                if let Some(c) = partition.class(r as usize) {
                    *counts.entry(c).or_default() += 1;
                }
            }
            let mut counts: Vec<(u32, u64)> = counts.into_iter().collect();
            counts.sort_unstable();
            herfindahl(&counts.iter().map(|c| c.1).collect::<Vec<_>>())
        })
        .collect();
    let per_paper: Vec<(DocIndex, f64)> = gold
        .iter()
        .zip(&scores)
        .filter_map(|(&d, s)| s.map(|s| (d, s)))
        .collect();
    let skipped = gold.len() - per_paper.len();
    if skipped > 0 {
        warn!("{skipped} gold paper(s) have no classified reference and were skipped");
    }
    if per_paper.is_empty() {
        return Err(Error::EmptyGoldSet);
    }
    let n = per_paper.len();
    let he = per_paper.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let sd = (n >= 2).then(|| {
        let ss: f64 = per_paper.iter().map(|p| (p.1 - he).powi(2)).sum();
        (ss / (n - 1) as f64).sqrt()
    });
    let std_error = sd.map(|sd| sd / (n as f64).sqrt());
    Ok(AccuracyResult {
        he,
        per_paper,
        n,
        skipped,
        sd,
        std_error,
        ci99: std_error.map(|se| (he - Z_99 * se, he + Z_99 * se)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{CorpusBuilder, DocType, NewDocument};

    /// Graph-only corpus over the small test taxonomy.
    fn graph(n: usize, edges: &[(usize, usize)]) -> Corpus {
        let mut b = CorpusBuilder::new(crate::corpus::test_taxonomy());
        let ids: Vec<String> = (0..n).map(|i| format!("d{i}")).collect();
        for id in &ids {
            b.add_document(NewDocument {
                id,
                pub_year: 2020,
                doc_type: DocType::Article,
                journal_id: "j",
                citation_count: 0,
                countries: vec![],
            })
            .unwrap();
            b.add_category(id, "A", None).unwrap();
        }
        for &(a, c) in edges {
            b.add_edge(&ids[a], &ids[c]);
        }
        b.build().unwrap().0
    }

    fn view(classes: &[&str]) -> PartitionView {
        PartitionView::from_codes(classes.iter().map(|c| Some(*c)))
    }

    #[test]
    fn one_class_scores_zero() {
        let c = graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]);
        let r = modularity(&view(&["x"; 4]), c.graph()).unwrap();
        assert_eq!(r.h, 0.0);
        assert_eq!(r.std_error, None);
    }

    #[test]
    fn two_triangles_with_bridge() {
        let c = graph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]);
        let r = modularity(&view(&["a", "a", "a", "b", "b", "b"]), c.graph()).unwrap();
        assert_eq!(r.m, 7);
        assert!((r.h - 5.0 / 14.0).abs() < 1e-15);
        // both replicates are a single triangle, H = 0, so the jackknife is 0
        assert_eq!(r.std_error, Some(0.0));
    }

    #[test]
    fn reciprocal_and_parallel_edges_collapse() {
        let c = graph(3, &[(0, 1), (1, 0), (1, 2)]);
        let r = modularity(&view(&["a", "a", "b"]), c.graph()).unwrap();
        assert_eq!(r.m, 2);
    }

    #[test]
    fn singletons_are_negative() {
        let c = graph(3, &[(0, 1), (1, 2)]);
        let r = modularity(&view(&["a", "b", "c"]), c.graph()).unwrap();
        // −(1 + 4 + 1) / 16
        assert!((r.h + 6.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn edgeless_graph_is_an_error() {
        let c = graph(2, &[]);
        assert!(matches!(modularity(&view(&["a", "b"]), c.graph()), Err(Error::EmptyGraph)));
    }

    #[test]
    fn unclassified_documents_are_cut_out() {
        let c = graph(3, &[(0, 1), (1, 2)]);
        let v = PartitionView::from_codes([Some("a"), Some("a"), None]);
        let r = modularity(&v, c.graph()).unwrap();
        assert_eq!(r.m, 1);
        assert!(v.require(c.graph(), |_| true, |d| format!("d{d}")).is_err());
        assert!(v.require(c.graph(), |d| d != 2, |d| format!("d{d}")).is_ok());
    }

    #[test]
    fn herfindahl_fixtures() {
        assert_eq!(herfindahl(&[7]), Some(1.0));
        assert_eq!(herfindahl(&[2, 2, 2, 2]), Some(0.25));
        assert_eq!(herfindahl(&[3, 1]), Some(0.625));
        assert_eq!(herfindahl(&[]), None);
    }

    #[test]
    fn gold_selection_boundaries() {
        let mut edges = vec![];
        for r in 1..=4 {
            edges.push((0, r));
        }
        edges.push((1, 2));
        edges.push((1, 3));
        edges.push((2, 3));
        let c = graph(5, &edges);
        assert_eq!(select_gold_standard(&c, 4), vec![0]);
        assert_eq!(select_gold_standard(&c, 0), vec![0, 1]);
        assert_eq!(select_gold_standard(&c, 5), Vec::<usize>::new());
    }

    #[test]
    fn accuracy_mean_and_skip() {
        let c = graph(6, &[(0, 2), (0, 3), (0, 4), (0, 5), (1, 2), (1, 5)]);
        let v = PartitionView::from_codes([Some("a"), Some("a"), Some("a"), Some("a"), Some("a"), Some("b")]);
        let r = accuracy(&v, c.graph(), &[0, 1]).unwrap();
        assert_eq!(r.per_paper, vec![(0, 0.625), (1, 0.5)]);
        assert!((r.he - 0.5625).abs() < 1e-15);
        let sd = (2.0 * 0.0625f64.powi(2)).sqrt();
        assert!((r.sd.unwrap() - sd).abs() < 1e-15);
        let v = PartitionView::from_codes([Some("a"), Some("a"), None, None, None, None]);
        assert!(matches!(accuracy(&v, c.graph(), &[0, 1]), Err(Error::EmptyGoldSet)));
        assert!(matches!(accuracy(&v, c.graph(), &[]), Err(Error::EmptyGoldSet)));
    }
}
