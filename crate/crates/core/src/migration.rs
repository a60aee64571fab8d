//! How far documents moved between the journal classification and the
//! reclassification: stability, per-category dispersion and attraction, and
//! label-to-label flow matrices.
//!
//! Comparisons use nominal codes: a sub-category produced by a split counts
//! as its parent category.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{Corpus, DocIndex};
use crate::labels::{LabelIndex, LabelWeights};
use crate::surgery::Hierarchy;
use crate::{Error, Result};

/// Documents per partial accumulator; fixed so results do not depend on the
/// number of worker threads.
const CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Level {
    Category,
    Discipline,
}

impl std::str::FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "category" => Ok(Level::Category),
            "discipline" => Ok(Level::Discipline),
            _ => Err(format!("unknown level `{s}`, expected `category` or `discipline`")),
        }
    }
}

/// Journal weights and reclassified label of the documents in scope, at one
/// level, over a shared code list.
#[derive(Clone, Debug)]
pub struct LevelView {
    pub level: Level,
    codes: Vec<String>,
    journal: LabelWeights,
    reclassified: Vec<LabelIndex>,
    docs: Vec<DocIndex>,
}

impl LevelView {
    /// `assignments[d]` indexes `hierarchy`; `scope` selects the documents
    /// (typically corpus Y, possibly a year range).
    pub fn new(
        corpus: &Corpus,
        hierarchy: &Hierarchy,
        assignments: &[u32],
        level: Level,
        scope: impl Fn(DocIndex) -> bool,
    ) -> Result<Self> {
        let tax = corpus.taxonomy();
        let (codes, journal, mapping): (Vec<String>, LabelWeights, Vec<LabelIndex>) = match level {
            Level::Category => {
                let mapping = hierarchy
                    .entries()
                    .iter()
                    .map(|e| {
                        tax.category_index(e.nominal()).map(|i| i as LabelIndex).ok_or_else(|| {
                            Error::Hierarchy(format!("final category `{}` has no journal-era category", e.code))
                        })
                    })
                    .collect::<Result<_>>()?;
                let codes = tax.categories().iter().map(|c| c.code.clone()).collect();
                (codes, corpus.category_weights().clone(), mapping)
            }
            Level::Discipline => {
                let mapping = hierarchy
                    .entries()
                    .iter()
                    .map(|e| {
                        tax.discipline_index(&e.discipline)
                            .map(|i| i as LabelIndex)
                            .ok_or_else(|| Error::Hierarchy(format!("unknown discipline `{}`", e.discipline)))
                    })
                    .collect::<Result<_>>()?;
                let codes = tax.disciplines().iter().map(|d| d.code.clone()).collect();
                (codes, corpus.discipline_weights(), mapping)
            }
        };
        if assignments.len() != corpus.len() {
            return Err(Error::Invalid(format!(
                "{} assignments for {} documents",
                assignments.len(),
                corpus.len()
            )));
        }
        let reclassified = assignments.iter().map(|&a| mapping[a as usize]).collect();
        let docs = (0..corpus.len()).filter(|&d| scope(d)).collect();
        Ok(Self {
            level,
            codes,
            journal,
            reclassified,
            docs,
        })
    }

    /// Direct construction, mainly for tests and custom label sets.
    pub fn from_parts(level: Level, codes: Vec<String>, journal: LabelWeights, reclassified: Vec<LabelIndex>) -> Self {
        assert_eq!(journal.len(), reclassified.len());
        let docs = (0..reclassified.len()).collect();
        Self {
            level,
            codes,
            journal,
            reclassified,
            docs,
        }
    }

    pub fn codes(&self) -> &[String] {
        &self.codes
    }

    pub fn docs(&self) -> &[DocIndex] {
        &self.docs
    }

    pub fn journal_row(&self, doc: DocIndex) -> &[(LabelIndex, f64)] {
        self.journal.row(doc)
    }

    pub fn reclassified(&self, doc: DocIndex) -> LabelIndex {
        self.reclassified[doc]
    }

    fn stays(&self, doc: DocIndex) -> bool {
        let p = self.reclassified[doc];
        self.journal.row(doc).iter().any(|&(l, w)| l == p && w > 0.0)
    }

    /// Chunked deterministic reduction of a per-document accumulator.
    fn accumulate<T: Send>(
        &self,
        init: impl Fn() -> T + Sync,
        add: impl Fn(&mut T, DocIndex) + Sync,
        merge: impl Fn(&mut T, T),
    ) -> T {
        let parts: Vec<T> = self
            .docs
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut acc = init();
                for &d in chunk {
                    add(&mut acc, d);
                }
                acc
            })
            .collect();
        let mut total = init();
        for p in parts {
            merge(&mut total, p);
        }
        total
    }
}

/// Share of documents whose reclassified label is one of their journal
/// labels (whole counts). `None` on an empty scope.
pub fn stability_rate(view: &LevelView) -> Option<f64> {
    if view.docs.is_empty() {
        return None;
    }
    let stable = view.docs.iter().filter(|&&d| view.stays(d)).count();
    Some(stable as f64 / view.docs.len() as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CategoryChurn {
    pub code: String,
    /// Fractional journal-side size.
    pub j_size: f64,
    /// Whole reclassified size.
    pub p_size: usize,
    /// Share of the journal mass that left for another label.
    pub ratio_j: Option<f64>,
    /// Share of reclassified documents that do not carry the label in their
    /// journal set.
    pub ratio_p: Option<f64>,
}

pub fn churn(view: &LevelView) -> Vec<CategoryChurn> {
    let k = view.codes.len();
    // (journal mass, departing mass, p size, foreign arrivals)
    let acc = view.accumulate(
        || (vec![0.0f64; k], vec![0.0f64; k], vec![0usize; k], vec![0usize; k]),
        |acc, d| {
            let p = view.reclassified[d];
            for &(l, w) in view.journal.row(d) {
                acc.0[l as usize] += w;
                if l != p {
                    acc.1[l as usize] += w;
                }
            }
            acc.2[p as usize] += 1;
            if !view.stays(d) {
                acc.3[p as usize] += 1;
            }
        },
        |t, p| {
            for i in 0..k {
                t.0[i] += p.0[i];
                t.1[i] += p.1[i];
                t.2[i] += p.2[i];
                t.3[i] += p.3[i];
            }
        },
    );
    (0..k)
        .map(|i| CategoryChurn {
            code: view.codes[i].clone(),
            j_size: acc.0[i],
            p_size: acc.2[i],
            ratio_j: (acc.0[i] > 0.0).then(|| acc.1[i] / acc.0[i]),
            ratio_p: (acc.2[i] > 0).then(|| acc.3[i] as f64 / acc.2[i] as f64),
        })
        .collect()
}

/// Square flow matrix: cell (a, b) is the journal mass in `a` of documents
/// reclassified in `b`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MigrationMatrix {
    pub level: Level,
    pub codes: Vec<String>,
    cells: Vec<f64>,
}

impl MigrationMatrix {
    pub fn size(&self) -> usize {
        self.codes.len()
    }

    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.cells[from * self.size() + to]
    }

    pub fn row_sum(&self, from: usize) -> f64 {
        (0..self.size()).map(|t| self.get(from, t)).sum()
    }

    pub fn column_sum(&self, to: usize) -> f64 {
        (0..self.size()).map(|f| self.get(f, to)).sum()
    }

    pub fn total(&self) -> f64 {
        (0..self.size()).map(|f| self.row_sum(f)).sum()
    }

    pub fn index(&self, code: &str) -> Option<usize> {
        self.codes.iter().position(|c| c == code)
    }

    /// CSV with a labelled header row and first column.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("from\\to");
        for c in &self.codes {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for (f, code) in self.codes.iter().enumerate() {
            out.push_str(code);
            for t in 0..self.size() {
                let _ = write!(out, ",{}", self.get(f, t));
            }
            out.push('\n');
        }
        out
    }
}

pub fn migration_matrix(view: &LevelView) -> MigrationMatrix {
    let k = view.codes.len();
    let cells = view.accumulate(
        || vec![0.0f64; k * k],
        |acc, d| {
            let p = view.reclassified[d] as usize;
            for &(l, w) in view.journal.row(d) {
                acc[l as usize * k + p] += w;
            }
        },
        |t, p| {
            for (a, b) in t.iter_mut().zip(p) {
                *a += b;
            }
        },
    );
    MigrationMatrix {
        level: view.level,
        codes: view.codes.clone(),
        cells,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BreakdownRow {
    pub source: String,
    pub mass: f64,
    pub percent: f64,
    pub cumulative: f64,
}

/// Journal categories feeding one discipline flow cell, largest first.
///
/// A document reclassified into discipline `to` contributes, for each of its
/// journal categories mapped to discipline `from`, its category weight split
/// equally over that category's disciplines.
pub fn migration_breakdown(
    corpus: &Corpus,
    view: &LevelView,
    from: &str,
    to: &str,
) -> Result<Vec<BreakdownRow>> {
    if view.level != Level::Discipline {
        return Err(Error::Invalid("breakdowns are computed on a discipline-level view".into()));
    }
    let tax = corpus.taxonomy();
    let from_i = tax
        .discipline_index(from)
        .ok_or_else(|| Error::Invalid(format!("unknown discipline `{from}`")))?;
    let to_i = tax
        .discipline_index(to)
        .ok_or_else(|| Error::Invalid(format!("unknown discipline `{to}`")))? as LabelIndex;
    let k = tax.categories().len();
    let weights = corpus.category_weights();
    let mass = view.accumulate(
        || vec![0.0f64; k],
        |acc, d| {
            if view.reclassified[d] != to_i {
                return;
            }
            for &(c, w) in weights.row(d) {
                let discs = &tax.category(c as usize).disciplines;
                if discs.contains(&from_i) {
                    acc[c as usize] += w / discs.len() as f64;
                }
            }
        },
        |t, p| {
            for (a, b) in t.iter_mut().zip(p) {
                *a += b;
            }
        },
    );
    Ok(ranked(
        mass.into_iter()
            .enumerate()
            .map(|(c, m)| (tax.category(c).code.clone(), m))
            .collect(),
    ))
}

/// Percent shares with a cumulative column, largest first, ties by code.
pub fn ranked(items: Vec<(String, f64)>) -> Vec<BreakdownRow> {
    let mut items: Vec<(String, f64)> = items.into_iter().filter(|i| i.1 > 0.0).collect();
    items.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let total: f64 = items.iter().map(|i| i.1).sum();
    let mut cumulative = 0.0;
    items
        .into_iter()
        .map(|(source, mass)| {
            let percent = 100.0 * mass / total;
            cumulative += percent;
            BreakdownRow {
                source,
                mass,
                percent,
                cumulative,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabelSizes {
    pub code: String,
    pub journal_fractional: f64,
    /// Documents carrying the label anywhere in their journal set.
    pub journal_whole: usize,
    pub reclassified: usize,
}

/// Sizes of every label on both sides, journal side in both counting modes.
pub fn label_sizes(view: &LevelView) -> Vec<LabelSizes> {
    let k = view.codes.len();
    let acc = view.accumulate(
        || (vec![0.0f64; k], vec![0usize; k], vec![0usize; k]),
        |acc, d| {
            for &(l, w) in view.journal.row(d) {
                acc.0[l as usize] += w;
                if w > 0.0 {
                    acc.1[l as usize] += 1;
                }
            }
            acc.2[view.reclassified[d] as usize] += 1;
        },
        |t, p| {
            for i in 0..k {
                t.0[i] += p.0[i];
                t.1[i] += p.1[i];
                t.2[i] += p.2[i];
            }
        },
    );
    (0..k)
        .map(|i| LabelSizes {
            code: view.codes[i].clone(),
            journal_fractional: acc.0[i],
            journal_whole: acc.1[i],
            reclassified: acc.2[i],
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn view(rows: Vec<Vec<(u32, f64)>>, p: Vec<u32>) -> LevelView {
        let codes = vec!["a".into(), "b".into(), "c".into()];
        LevelView::from_parts(Level::Category, codes, LabelWeights::from_rows(rows), p)
    }

    #[test]
    fn membership_rule() {
        let v = view(vec![vec![(0, 0.5), (1, 0.5)], vec![(0, 1.0)]], vec![1, 1]);
        assert_eq!(stability_rate(&v), Some(0.5));
        let v = view(vec![vec![(0, 1.0)], vec![(2, 1.0)]], vec![0, 2]);
        assert_eq!(stability_rate(&v), Some(1.0));
    }

    #[test]
    fn ratios_joint_rules() {
        // doc 0: J={a:.5,b:.5} -> b; doc 1: J={a} -> a; doc 2: J={c} -> b
        let v = view(vec![vec![(0, 0.5), (1, 0.5)], vec![(0, 1.0)], vec![(2, 1.0)]], vec![1, 0, 1]);
        let c = churn(&v);
        assert_eq!(c[0].ratio_j, Some(0.5 / 1.5));
        assert_eq!(c[0].ratio_p, Some(0.0));
        assert_eq!(c[1].ratio_j, Some(0.0));
        assert_eq!(c[1].ratio_p, Some(0.5));
        assert_eq!(c[2].ratio_j, Some(1.0));
        assert_eq!(c[2].ratio_p, None);
    }

    #[test]
    fn matrix_cells_and_csv() {
        let v = view(vec![vec![(0, 1.0)], vec![(0, 0.5), (2, 0.5)]], vec![1, 2]);
        let m = migration_matrix(&v);
        assert_eq!(m.get(0, 1), 1.0);
        assert_eq!(m.get(0, 2), 0.5);
        assert_eq!(m.get(2, 2), 0.5);
        assert_eq!(m.total(), 2.0);
        assert_eq!(m.to_csv().lines().next(), Some("from\\to,a,b,c"));
        assert_eq!(m.to_csv().lines().nth(1), Some("a,0,1,0.5"));
    }

    #[test]
    fn ranked_shares() {
        let r = ranked(vec![("x".into(), 1.0), ("y".into(), 1.0), ("z".into(), 0.0)]);
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].percent, 50.0);
        assert_eq!(r[1].cumulative, 100.0);
        assert!(ranked(vec![]).is_empty());
    }

    #[test]
    fn sizes_both_modes() {
        let v = view(vec![vec![(0, 0.5), (1, 0.5)], vec![(0, 1.0)]], vec![1, 1]);
        let s = label_sizes(&v);
        assert_eq!((s[0].journal_fractional, s[0].journal_whole, s[0].reclassified), (1.5, 2, 0));
        assert_eq!((s[1].journal_fractional, s[1].journal_whole, s[1].reclassified), (0.5, 1, 2));
    }
}
