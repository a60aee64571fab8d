//! Label spaces and fractional label weights.
//!
//! The reclassifier runs unchanged at two granularities (categories and
//! disciplines), so everything it touches is expressed over a dense label
//! index into a [`LabelSpace`] whose codes are sorted. Index order is
//! therefore lexicographic code order, which the final tie-break relies on.

use std::collections::HashMap;

/// Absolute tolerance under which two accumulated weights are considered tied.
///
/// Equal fractional splits (1/k) produce exact ties in real arithmetic which
/// float summation can perturb by a few ulps. Comparisons of histogram
/// weights and of global label sizes all go through this constant.
pub const TIE_TOLERANCE: f64 = 1e-9;

pub type LabelIndex = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelSpace {
    codes: Vec<String>,
    excluded: Vec<bool>,
    by_code: HashMap<String, LabelIndex>,
}

impl LabelSpace {
    /// Builds a label space from `(code, excluded)` pairs. Codes are sorted;
    /// duplicates are rejected.
    pub fn new<I, S>(labels: I) -> crate::Result<Self>
    where
        I: IntoIterator<Item = (S, bool)>,
        S: Into<String>,
    {
        let mut pairs: Vec<(String, bool)> =
            labels.into_iter().map(|(c, e)| (c.into(), e)).collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(crate::Error::Invalid(format!("duplicate label `{}`", w[0].0)));
            }
        }
        let by_code = pairs
            .iter()
            .enumerate()
            .map(|(i, (c, _))| (c.clone(), i as LabelIndex))
            .collect();
        let (codes, excluded) = pairs.into_iter().unzip();
        Ok(Self {
            codes,
            excluded,
            by_code,
        })
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn code(&self, label: LabelIndex) -> &str {
        &self.codes[label as usize]
    }

    pub fn codes(&self) -> &[String] {
        &self.codes
    }

    pub fn index(&self, code: &str) -> Option<LabelIndex> {
        self.by_code.get(code).copied()
    }

    pub fn is_excluded(&self, label: LabelIndex) -> bool {
        self.excluded[label as usize]
    }
}

/// Per-document fractional label weights in compressed row form.
///
/// Rows are sorted by label and each row sums to one (or is empty when a
/// document carries no mass at this granularity).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LabelWeights {
    offsets: Vec<usize>,
    entries: Vec<(LabelIndex, f64)>,
}

impl LabelWeights {
    pub fn from_rows<I, R>(rows: I) -> Self
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = (LabelIndex, f64)>,
    {
        let mut offsets = vec![0];
        let mut entries = Vec::new();
        for row in rows {
            let start = entries.len();
            entries.extend(row);
            let slice = &mut entries[start..];
            slice.sort_by_key(|e| e.0);
            // merge repeated labels
            let mut write = start;
            for read in start..entries.len() {
                if write > start && entries[write - 1].0 == entries[read].0 {
                    entries[write - 1].1 += entries[read].1;
                } else {
                    entries[write] = entries[read];
                    write += 1;
                }
            }
            entries.truncate(write);
            offsets.push(entries.len());
        }
        Self { offsets, entries }
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn row(&self, doc: usize) -> &[(LabelIndex, f64)] {
        &self.entries[self.offsets[doc]..self.offsets[doc + 1]]
    }

    /// Sum of every row, per label: the fractional size of each label.
    pub fn label_totals(&self, label_count: usize) -> Vec<f64> {
        let mut totals = vec![0.0; label_count];
        for &(label, w) in &self.entries {
            totals[label as usize] += w;
        }
        totals
    }

    /// Label carrying the largest weight in a row, ties to the smallest index.
    pub fn primary(&self, doc: usize, admit: impl Fn(LabelIndex) -> bool) -> Option<LabelIndex> {
        let mut best: Option<(LabelIndex, f64)> = None;
        for &(label, w) in self.row(doc) {
            if !admit(label) {
                continue;
            }
            match best {
                Some((_, bw)) if w <= bw + TIE_TOLERANCE => {}
                _ => best = Some((label, w)),
            }
        }
        best.map(|b| b.0)
    }
}

/// Outcome of looking for a strict maximum.
#[derive(Clone, Debug, PartialEq)]
pub enum Argmax {
    Unique(LabelIndex),
    Tie(Vec<LabelIndex>),
    Empty,
}

/// Fractional label counts, sorted by label, strictly positive entries only.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Histogram {
    entries: Vec<(LabelIndex, f64)>,
}

impl Histogram {
    /// Sums contributions per label. Contributions for the same label are
    /// added in the order given, so identical inputs give identical sums.
    pub fn from_contributions(mut contributions: Vec<(LabelIndex, f64)>) -> Self {
        contributions.sort_by_key(|c| c.0);
        let mut entries: Vec<(LabelIndex, f64)> = Vec::with_capacity(contributions.len());
        for (label, w) in contributions {
            match entries.last_mut() {
                Some(last) if last.0 == label => last.1 += w,
                _ => entries.push((label, w)),
            }
        }
        entries.retain(|e| e.1 > 0.0);
        Self { entries }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, label: LabelIndex) -> f64 {
        self.entries
            .binary_search_by_key(&label, |e| e.0)
            .map(|i| self.entries[i].1)
            .unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (LabelIndex, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    /// Adds another histogram's mass into this one.
    pub fn merged(&self, other: &Histogram) -> Histogram {
        let mut all = self.entries.clone();
        all.extend_from_slice(&other.entries);
        Histogram::from_contributions(all)
    }

    pub fn argmax_unique(&self) -> Argmax {
        let Some(max) = self.entries.iter().map(|e| e.1).reduce(f64::max) else {
            return Argmax::Empty;
        };
        let tied: Vec<LabelIndex> = self
            .entries
            .iter()
            .filter(|e| e.1 >= max - TIE_TOLERANCE)
            .map(|e| e.0)
            .collect();
        if tied.len() == 1 {
            Argmax::Unique(tied[0])
        } else {
            Argmax::Tie(tied)
        }
    }
}

/// Picks the candidate with the largest `size`, comparing under
/// [`TIE_TOLERANCE`]. Returns the winner and whether a residual tie had to be
/// resolved by taking the smallest label index.
pub fn largest_by(candidates: &[LabelIndex], size: impl Fn(LabelIndex) -> f64) -> Option<(LabelIndex, bool)> {
    let max = candidates.iter().map(|&c| size(c)).reduce(f64::max)?;
    let mut best: Vec<LabelIndex> = candidates
        .iter()
        .copied()
        .filter(|&c| size(c) >= max - TIE_TOLERANCE)
        .collect();
    best.sort_unstable();
    Some((best[0], best.len() > 1))
}
