//! Reading and writing the tabular outputs.
//!
//! TSV outputs start with a `#` column line, which every reader here (and
//! the corpus loader) skips like any other comment. CSV outputs carry a
//! regular header row.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::corpus::{CitationGraph, Corpus};
use crate::indicators::MncsRow;
use crate::labels::{LabelIndex, LabelSpace};
use crate::quality::{AccuracyResult, ModularityResult, PartitionView};
use crate::reclassify::{Classification, StageCounts};
use crate::surgery::{Hierarchy, HierarchyEntry};
use crate::{Error, Result};

pub fn assignments_tsv(corpus: &Corpus, labels: &LabelSpace, classification: &Classification) -> String {
    let mut out = String::from("#doc_id\tp_category\tassigned_in_run\n");
    for (d, a) in classification.table.iter().enumerate() {
        let a = a.expect("finalized table is total");
        let _ = writeln!(out, "{}\t{}\t{}", corpus.document(d).id, labels.code(a.label), a.provenance);
    }
    out
}

pub fn stage_counts_tsv(stages: &[StageCounts]) -> String {
    let mut out = String::from("#stage\tto_classify\tassigned\tunassigned\tunassigned_tied\tunassigned_all_multi\n");
    for s in stages {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            s.stage, s.to_classify, s.assigned, s.unassigned, s.unassigned_tied, s.unassigned_all_multi
        );
    }
    out
}

pub fn hierarchy_tsv(hierarchy: &Hierarchy) -> String {
    let mut out = String::from("#final_category\tdiscipline\torigin\n");
    for e in hierarchy.entries() {
        let _ = writeln!(out, "{}\t{}\t{}", e.code, e.discipline, e.origin);
    }
    out
}

/// `assignments[d]` indexes `hierarchy`.
pub fn final_assignments_tsv(corpus: &Corpus, hierarchy: &Hierarchy, assignments: &[u32]) -> String {
    let mut out = String::from("#doc_id\tfinal_category\n");
    for (d, &a) in assignments.iter().enumerate() {
        let _ = writeln!(out, "{}\t{}", corpus.document(d).id, hierarchy.entry(a as usize).code);
    }
    out
}

fn finish(writer: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Invalid(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Invalid(format!("csv: {e}")))
}

fn csv_error(e: csv::Error) -> Error {
    Error::Invalid(format!("csv: {e}"))
}

/// Any flat serializable rows, one per line, with a header from the field
/// names. `None` becomes an empty cell.
pub fn rows_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    finish(w)
}

#[derive(Serialize)]
struct ModularityLine<'a> {
    taxonomy: &'a str,
    classes: usize,
    links: usize,
    h: f64,
    std_error: Option<f64>,
    ci99_low: Option<f64>,
    ci99_high: Option<f64>,
}

pub fn modularity_csv(rows: &[(&str, &ModularityResult)]) -> Result<String> {
    let lines: Vec<_> = rows
        .iter()
        .map(|(name, r)| ModularityLine {
            taxonomy: name,
            classes: r.classes,
            links: r.m,
            h: r.h,
            std_error: r.std_error,
            ci99_low: r.ci99.map(|c| c.0),
            ci99_high: r.ci99.map(|c| c.1),
        })
        .collect();
    rows_csv(&lines)
}

#[derive(Serialize)]
struct AccuracyLine<'a> {
    taxonomy: &'a str,
    gold_papers: usize,
    skipped: usize,
    he: Option<f64>,
    sd: Option<f64>,
    std_error: Option<f64>,
    ci99_low: Option<f64>,
    ci99_high: Option<f64>,
}

/// `None` results (empty gold set) still get a row with empty statistics.
pub fn accuracy_csv(rows: &[(&str, Option<&AccuracyResult>)]) -> Result<String> {
    let lines: Vec<_> = rows
        .iter()
        .map(|(name, r)| AccuracyLine {
            taxonomy: name,
            gold_papers: r.map_or(0, |r| r.n),
            skipped: r.map_or(0, |r| r.skipped),
            he: r.map(|r| r.he),
            sd: r.and_then(|r| r.sd),
            std_error: r.and_then(|r| r.std_error),
            ci99_low: r.and_then(|r| r.ci99).map(|c| c.0),
            ci99_high: r.and_then(|r| r.ci99).map(|c| c.1),
        })
        .collect();
    rows_csv(&lines)
}

/// Tab-separated rows of a file: comment and blank lines skipped, the first
/// remaining line too when `header` is set.
pub fn read_tsv(path: &Path, header: bool) -> Result<Vec<(usize, Vec<String>)>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .skip(usize::from(header))
        .map(|(i, l)| {
            let l = l.strip_suffix('\r').unwrap_or(l);
            (i + 1, l.split('\t').map(|c| c.trim().to_string()).collect())
        })
        .collect())
}

fn parse_error(path: &Path, line: usize, column: usize, message: String) -> Error {
    Error::Parse {
        file: path.to_path_buf(),
        line,
        column,
        message,
    }
}

/// `doc_id ⟶ code` table covering every corpus document exactly once, with
/// `resolve` turning codes into indices. Extra columns are ignored.
pub fn read_doc_codes(
    path: &Path,
    header: bool,
    corpus: &Corpus,
    resolve: impl Fn(&str) -> Option<u32>,
) -> Result<Vec<u32>> {
    let mut out: Vec<Option<u32>> = vec![None; corpus.len()];
    for (line, cols) in read_tsv(path, header)? {
        if cols.len() < 2 {
            return Err(parse_error(path, line, cols.len() + 1, "expected doc_id and code".into()));
        }
        let doc = corpus
            .doc_index(&cols[0])
            .ok_or_else(|| parse_error(path, line, 1, format!("unknown doc_id `{}`", cols[0])))?;
        let code = resolve(&cols[1]).ok_or_else(|| parse_error(path, line, 2, format!("unknown code `{}`", cols[1])))?;
        if out[doc].replace(code).is_some() {
            return Err(Error::DuplicateDocument(cols[0].clone()));
        }
    }
    let missing: Vec<String> = out
        .iter()
        .enumerate()
        .filter(|(_, a)| a.is_none())
        .map(|(d, _)| corpus.document(d).id.clone())
        .collect();
    if !missing.is_empty() {
        return Err(Error::Unassigned(missing));
    }
    Ok(out.into_iter().map(Option::unwrap).collect())
}

/// P-categories from an assignments file, as indices into `labels`.
pub fn read_assignments(path: &Path, header: bool, corpus: &Corpus, labels: &LabelSpace) -> Result<Vec<LabelIndex>> {
    read_doc_codes(path, header, corpus, |c| labels.index(c))
}

pub fn read_hierarchy(path: &Path, header: bool) -> Result<Hierarchy> {
    let mut entries = Vec::new();
    for (line, cols) in read_tsv(path, header)? {
        if cols.len() != 3 {
            return Err(parse_error(path, line, cols.len().min(3) + 1, "expected 3 columns".into()));
        }
        let origin = cols[2].parse().map_err(|e: String| parse_error(path, line, 3, e))?;
        entries.push(HierarchyEntry {
            code: cols[0].clone(),
            discipline: cols[1].clone(),
            origin,
        });
    }
    Hierarchy::new(entries)
}

/// Final categories from an `assignments_final` file, as hierarchy indices.
pub fn read_final_assignments(path: &Path, header: bool, corpus: &Corpus, hierarchy: &Hierarchy) -> Result<Vec<u32>> {
    read_doc_codes(path, header, corpus, |c| hierarchy.index(c).map(|i| i as u32))
}

/// A partition file (`doc_id ⟶ class`, extra columns ignored) and a citation
/// edge list read without a corpus. Nodes are the partition's documents
/// followed by any document that only appears in the edges, which is left
/// without a class. Returns the view, the graph and the node ids.
pub fn read_partition_graph(
    partition: &Path,
    edges: &Path,
    header: bool,
) -> Result<(PartitionView, CitationGraph, Vec<String>)> {
    let mut ids: Vec<String> = Vec::new();
    let mut index: HashMap<String, u32> = HashMap::new();
    let mut classes: Vec<Option<&str>> = Vec::new();
    let rows = read_tsv(partition, header)?;
    for (line, cols) in &rows {
        if cols.len() < 2 || cols[1].is_empty() {
            return Err(parse_error(partition, *line, 2, "expected doc_id and class".into()));
        }
        if index.insert(cols[0].clone(), ids.len() as u32).is_some() {
            return Err(Error::DuplicateDocument(cols[0].clone()));
        }
        ids.push(cols[0].clone());
    }
    classes.extend(rows.iter().map(|(_, c)| Some(c[1].as_str())));
    let mut pairs = Vec::new();
    for (line, cols) in read_tsv(edges, header)? {
        if cols.len() != 2 {
            return Err(parse_error(edges, line, cols.len().min(2) + 1, "expected 2 columns".into()));
        }
        let mut node = |id: &str| {
            *index.entry(id.to_string()).or_insert_with(|| {
                ids.push(id.to_string());
                ids.len() as u32 - 1
            })
        };
        pairs.push((node(&cols[0]), node(&cols[1])));
    }
    classes.resize(ids.len(), None);
    let view = PartitionView::from_codes(classes);
    Ok((view, CitationGraph::from_edges(ids.len(), pairs), ids))
}

/// MNCS row without the decomposition columns.
#[derive(Serialize)]
pub struct MncsSummary<'a> {
    pub entity: &'a str,
    pub discipline: &'a str,
    pub wos_count: f64,
    pub ost_count: f64,
    pub mncs_wos: Option<f64>,
    pub mncs_ost: Option<f64>,
    pub d: Option<f64>,
}

impl<'a> From<&'a MncsRow> for MncsSummary<'a> {
    fn from(r: &'a MncsRow) -> Self {
        Self {
            entity: &r.entity,
            discipline: &r.discipline,
            wos_count: r.wos_count,
            ost_count: r.ost_count,
            mncs_wos: r.mncs_wos,
            mncs_ost: r.mncs_ost,
            d: r.d,
        }
    }
}
