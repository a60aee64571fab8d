//! Tab-separated corpus files.
//!
//! ```text
//! documents.tsv           doc_id  pub_year  doc_type  journal_id  citation_count  [country_weights]
//! journal_categories.tsv  doc_id  category_code  [weight]
//! edges.tsv               citing_doc_id  cited_doc_id
//! taxonomy.tsv            category_code  name  multidisciplinary_flag  discipline_codes
//! disciplines.tsv         discipline_code  domain_code
//! ```
//!
//! Blank lines and lines starting with `#` are skipped. With
//! [`LoadOptions::header`] the first remaining line of every file is skipped.

use std::path::{Path, PathBuf};

use super::{Corpus, CorpusBuilder, DocType, LoadReport, NewDocument, Taxonomy};
use crate::corpus::CategorySpec;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusPaths {
    pub documents: PathBuf,
    pub journal_categories: PathBuf,
    pub edges: PathBuf,
    pub taxonomy: PathBuf,
    pub disciplines: PathBuf,
}

impl CorpusPaths {
    pub fn in_dir(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref();
        Self {
            documents: dir.join("documents.tsv"),
            journal_categories: dir.join("journal_categories.tsv"),
            edges: dir.join("edges.tsv"),
            taxonomy: dir.join("taxonomy.tsv"),
            disciplines: dir.join("disciplines.tsv"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoadOptions {
    pub header: bool,
}

struct Rows<'a> {
    file: &'a Path,
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
    skip_header: bool,
}

struct Row<'a> {
    file: &'a Path,
    line: usize,
    cols: Vec<&'a str>,
}

impl<'a> Rows<'a> {
    fn new(file: &'a Path, text: &'a str, header: bool) -> Self {
        Self {
            file,
            lines: text.lines().enumerate(),
            skip_header: header,
        }
    }
}

impl<'a> Iterator for Rows<'a> {
    type Item = Row<'a>;

    fn next(&mut self) -> Option<Row<'a>> {
        for (i, line) in self.lines.by_ref() {
            let line = line.strip_suffix('\r').unwrap_or(line);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            if self.skip_header {
                self.skip_header = false;
                continue;
            }
            return Some(Row {
                file: self.file,
                line: i + 1,
                cols: line.split('\t').collect(),
            });
        }
        None
    }
}

impl<'a> Row<'a> {
    fn error(&self, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            file: self.file.to_path_buf(),
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn require(&self, min: usize, max: usize) -> Result<()> {
        if self.cols.len() < min || self.cols.len() > max {
            let expected = if min == max {
                format!("{min}")
            } else {
                format!("{min}-{max}")
            };
            return Err(self.error(
                self.cols.len().min(min) + 1,
                format!("expected {expected} columns, found {}", self.cols.len()),
            ));
        }
        Ok(())
    }

    fn get(&self, column: usize) -> Option<&'a str> {
        self.cols.get(column - 1).map(|s| s.trim()).filter(|s| !s.is_empty())
    }

    fn field(&self, column: usize) -> Result<&'a str> {
        self.get(column).ok_or_else(|| self.error(column, "empty field"))
    }

    fn parse<T: std::str::FromStr>(&self, column: usize, what: &str) -> Result<T> {
        let raw = self.field(column)?;
        raw.parse()
            .map_err(|_| self.error(column, format!("invalid {what} `{raw}`")))
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse_flag(row: &Row<'_>, column: usize) -> Result<bool> {
    match row.field(column)?.to_ascii_lowercase().as_str() {
        "1" | "true" | "yes" | "y" => Ok(true),
        "0" | "false" | "no" | "n" => Ok(false),
        other => Err(row.error(column, format!("invalid multidisciplinary flag `{other}`"))),
    }
}

/// Loads `taxonomy.tsv` and `disciplines.tsv`.
pub fn load_taxonomy(taxonomy_path: &Path, disciplines_path: &Path, options: LoadOptions) -> Result<Taxonomy> {
    let (tax_text, disc_text) = rayon::join(|| read(taxonomy_path), || read(disciplines_path));
    parse_taxonomy(taxonomy_path, &tax_text?, disciplines_path, &disc_text?, options)
}

fn parse_taxonomy(
    taxonomy_path: &Path,
    tax_text: &str,
    disciplines_path: &Path,
    disc_text: &str,
    options: LoadOptions,
) -> Result<Taxonomy> {
    let mut disciplines = Vec::new();
    for row in Rows::new(disciplines_path, disc_text, options.header) {
        row.require(2, 2)?;
        disciplines.push((row.field(1)?.to_string(), row.field(2)?.to_string()));
    }
    let mut categories = Vec::new();
    for row in Rows::new(taxonomy_path, tax_text, options.header) {
        row.require(4, 4)?;
        categories.push(CategorySpec {
            code: row.field(1)?.to_string(),
            name: row.get(2).unwrap_or_default().to_string(),
            multidisciplinary: parse_flag(&row, 3)?,
            disciplines: row
                .field(4)?
                .split(';')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect(),
        });
    }
    Taxonomy::new(categories, disciplines)
}

fn parse_countries<'a>(row: &Row<'a>, column: usize) -> Result<Vec<(&'a str, f64)>> {
    let Some(raw) = row.get(column) else {
        return Ok(Vec::new());
    };
    raw.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| {
            let (code, w) = item
                .split_once(':')
                .ok_or_else(|| row.error(column, format!("country weight `{item}` is not CODE:WEIGHT")))?;
            let w: f64 = w
                .trim()
                .parse()
                .map_err(|_| row.error(column, format!("invalid country weight `{item}`")))?;
            Ok((code.trim(), w))
        })
        .collect()
}

/// Contents of the five corpus files.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorpusText {
    pub documents: String,
    pub journal_categories: String,
    pub edges: String,
    pub taxonomy: String,
    pub disciplines: String,
}

/// Loads and validates a corpus.
pub fn load_corpus(paths: &CorpusPaths, options: LoadOptions) -> Result<(Corpus, LoadReport)> {
    let ((taxonomy, documents), ((journal_categories, edges), disciplines)) = rayon::join(
        || rayon::join(|| read(&paths.taxonomy), || read(&paths.documents)),
        || {
            rayon::join(
                || rayon::join(|| read(&paths.journal_categories), || read(&paths.edges)),
                || read(&paths.disciplines),
            )
        },
    );
    let text = CorpusText {
        documents: documents?,
        journal_categories: journal_categories?,
        edges: edges?,
        taxonomy: taxonomy?,
        disciplines: disciplines?,
    };
    parse_corpus(paths, &text, options)
}

/// Parses corpus tables already held in memory; `paths` only labels errors.
pub fn parse_corpus(paths: &CorpusPaths, text: &CorpusText, options: LoadOptions) -> Result<(Corpus, LoadReport)> {
    let taxonomy = parse_taxonomy(&paths.taxonomy, &text.taxonomy, &paths.disciplines, &text.disciplines, options);
    let docs_text = &text.documents;
    let mut builder = CorpusBuilder::new(taxonomy?);

    for row in Rows::new(&paths.documents, docs_text, options.header) {
        row.require(5, 6)?;
        let id = row.field(1)?;
        let doc_type: DocType = row
            .field(3)?
            .parse()
            .map_err(|e: String| row.error(3, e))?;
        let doc = NewDocument {
            id,
            pub_year: row.parse(2, "year")?,
            doc_type,
            journal_id: row.get(4).unwrap_or_default(),
            citation_count: row.parse(5, "citation count")?,
            countries: parse_countries(&row, 6)?,
        };
        builder.add_document(doc).map_err(|e| match e {
            Error::DuplicateDocument(_) => e,
            other => row.error(6, other.to_string()),
        })?;
    }

    for row in Rows::new(&paths.journal_categories, &text.journal_categories, options.header) {
        row.require(2, 3)?;
        let doc = row.field(1)?;
        let code = row.field(2)?;
        if builder.taxonomy().category_index(code).is_none() {
            return Err(Error::UnknownCategory {
                code: code.to_string(),
                file: paths.journal_categories.clone(),
                line: row.line,
            });
        }
        if builder.doc_index(doc).is_none() {
            return Err(row.error(1, format!("unknown doc_id `{doc}`")));
        }
        let weight = match row.get(3) {
            Some(_) => Some(row.parse::<f64>(3, "weight")?),
            None => None,
        };
        builder
            .add_category(doc, code, weight)
            .map_err(|e| row.error(3, e.to_string()))?;
    }

    for row in Rows::new(&paths.edges, &text.edges, options.header) {
        row.require(2, 2)?;
        let citing = builder.doc_index(row.field(1)?);
        let cited = builder.doc_index(row.field(2)?);
        builder.add_edge_indices(citing, cited);
    }

    builder.build()
}
