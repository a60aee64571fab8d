//! Reference-majority reclassification.
//!
//! Every document gets the single label that is most frequent among its
//! references, with fractional counting and excluded (multidisciplinary)
//! labels ignored. The cascade is:
//!
//! 1. step 1, `step1_runs` passes over corpus Z. The first pass reads the
//!    references' own weights; later passes read each reference's current
//!    assignment when it has one. A pass only assigns where the maximum is
//!    unique, and may move an already assigned document.
//! 2. step 2 for what is still open: add the document's own weights to its
//!    reference count, then settle remaining ties by global label size.
//! 3. corpus W keeps its own label (largest global size if several).
//! 4. documents with nothing but excluded mass on both sides take the
//!    majority assignment of their peers in the same excluded label.
//!
//! Each pass is a parallel map over a frozen snapshot of the previous table.
//! Ties are decided with [`TIE_TOLERANCE`](crate::labels::TIE_TOLERANCE).

use std::collections::BTreeMap;
use std::fmt;

use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::{CitationGraph, Corpus, DocIndex};
use crate::labels::{largest_by, Argmax, Histogram, LabelIndex, LabelSpace, LabelWeights};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Provenance {
    /// Numbered pass: step-1 runs first, then the two step-2 runs.
    Run(u8),
    MultiDFallback,
    FewRefsRule,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Run(n) => write!(f, "Run{n}"),
            Provenance::MultiDFallback => f.write_str("MultiDFallback"),
            Provenance::FewRefsRule => f.write_str("FewRefsRule"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub label: LabelIndex,
    pub provenance: Provenance,
}

/// Per-document assignment, `None` while unassigned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssignmentTable {
    slots: Vec<Option<Assignment>>,
}

impl AssignmentTable {
    pub fn empty(doc_count: usize) -> Self {
        Self {
            slots: vec![None; doc_count],
        }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn get(&self, doc: DocIndex) -> Option<Assignment> {
        self.slots[doc]
    }

    pub fn label(&self, doc: DocIndex) -> Option<LabelIndex> {
        self.slots[doc].map(|a| a.label)
    }

    pub fn set(&mut self, doc: DocIndex, label: LabelIndex, provenance: Provenance) {
        self.slots[doc] = Some(Assignment { label, provenance });
    }

    pub fn assigned_count(&self) -> usize {
        self.slots.iter().filter(|s| s.is_some()).count()
    }

    pub fn unassigned(&self) -> impl Iterator<Item = DocIndex> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_none())
            .map(|(d, _)| d)
    }

    pub fn iter(&self) -> impl Iterator<Item = Option<Assignment>> + '_ {
        self.slots.iter().copied()
    }

    /// Labels of a complete table.
    pub fn labels(&self) -> Option<Vec<LabelIndex>> {
        self.slots.iter().map(|s| s.map(|a| a.label)).collect()
    }
}

/// One row of the stage report: how a stage left its to-classify set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StageCounts {
    pub stage: String,
    pub to_classify: usize,
    pub assigned: usize,
    pub unassigned: usize,
    pub unassigned_tied: usize,
    pub unassigned_all_multi: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ReclassWarnings {
    /// Ties that survived every rule and went to the smallest code.
    pub lexicographic_ties: usize,
    /// Documents whose own tie went to the smallest code (fallback group
    /// ties are only counted).
    #[serde(skip)]
    pub tied_documents: Vec<DocIndex>,
    /// Fallback documents whose excluded label had no classified peer.
    pub fallback_without_peers: usize,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub table: AssignmentTable,
    pub stages: Vec<StageCounts>,
    pub warnings: ReclassWarnings,
}

impl Classification {
    /// Complete label vector (finalized tables are total).
    pub fn labels(&self) -> Vec<LabelIndex> {
        self.table.labels().expect("finalized table is total")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReclassConfig {
    pub step1_runs: u8,
}

impl Default for ReclassConfig {
    fn default() -> Self {
        Self { step1_runs: 3 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Assigned,
    Tied,
    Empty,
}

/// The reclassification engine over one label granularity.
pub struct Reclassifier<'a> {
    labels: &'a LabelSpace,
    weights: &'a LabelWeights,
    graph: &'a CitationGraph,
    perimeter: Vec<bool>,
    in_z: Vec<bool>,
    global_size: Vec<f64>,
    config: ReclassConfig,
}

impl<'a> Reclassifier<'a> {
    /// `perimeter` selects the documents counted in the stage report; every
    /// document is classified regardless.
    pub fn new(
        labels: &'a LabelSpace,
        weights: &'a LabelWeights,
        graph: &'a CitationGraph,
        perimeter: Vec<bool>,
        config: ReclassConfig,
    ) -> Self {
        assert_eq!(weights.len(), graph.doc_count());
        assert_eq!(perimeter.len(), graph.doc_count());
        assert!(config.step1_runs >= 1, "at least one step-1 run");
        let in_z = (0..graph.doc_count()).map(|d| graph.reference_count(d) >= 2).collect();
        let global_size = weights.label_totals(labels.len());
        Self {
            labels,
            weights,
            graph,
            perimeter,
            in_z,
            global_size,
            config,
        }
    }

    /// Category-level engine for a corpus, stage counts over the statistics
    /// perimeter.
    pub fn for_categories(corpus: &'a Corpus, labels: &'a LabelSpace, config: ReclassConfig) -> Self {
        let perimeter = (0..corpus.len()).map(|d| corpus.in_perimeter(d)).collect();
        Self::new(labels, corpus.category_weights(), corpus.graph(), perimeter, config)
    }

    pub fn doc_count(&self) -> usize {
        self.in_z.len()
    }

    pub fn in_z(&self, doc: DocIndex) -> bool {
        self.in_z[doc]
    }

    /// Fractional weighted size of every label over the whole corpus.
    pub fn global_size(&self, label: LabelIndex) -> f64 {
        self.global_size[label as usize]
    }

    fn own_mass(&self, doc: DocIndex) -> impl Iterator<Item = (LabelIndex, f64)> + '_ {
        self.weights
            .row(doc)
            .iter()
            .copied()
            .filter(|&(l, _)| !self.labels.is_excluded(l))
    }

    /// Histogram of a document's references. A reference counts with weight
    /// one on its label in `snapshot` when it has one, otherwise with its own
    /// non-excluded weights.
    pub fn reference_histogram(&self, doc: DocIndex, snapshot: &AssignmentTable) -> Histogram {
        let mut contributions = Vec::with_capacity(self.graph.reference_count(doc) * 2);
        for &r in self.graph.references(doc) {
            let r = r as usize;
            match snapshot.label(r) {
                Some(label) => contributions.push((label, 1.0)),
                None => contributions.extend(self.own_mass(r)),
            }
        }
        Histogram::from_contributions(contributions)
    }

    fn counts(&self, stage: String, docs: &[DocIndex], status: &[Status]) -> StageCounts {
        let mut row = StageCounts {
            stage,
            ..Default::default()
        };
        for (&d, &s) in docs.iter().zip(status) {
            if !self.perimeter[d] {
                continue;
            }
            row.to_classify += 1;
            match s {
                Status::Assigned => row.assigned += 1,
                Status::Tied => row.unassigned_tied += 1,
                Status::Empty => row.unassigned_all_multi += 1,
            }
        }
        row.unassigned = row.unassigned_tied + row.unassigned_all_multi;
        row
    }

    fn z_docs(&self) -> Vec<DocIndex> {
        (0..self.doc_count()).filter(|&d| self.in_z[d]).collect()
    }

    /// Step 1: `step1_runs` majority passes over corpus Z.
    pub fn run_step1(&self) -> (AssignmentTable, Vec<StageCounts>) {
        let z = self.z_docs();
        let mut table = AssignmentTable::empty(self.doc_count());
        let mut stages = Vec::new();
        for run in 1..=self.config.step1_runs {
            let snapshot = &table;
            let results: Vec<(Option<Assignment>, Status)> = z
                .par_iter()
                .map(|&d| {
                    let prev = snapshot.get(d);
                    match self.reference_histogram(d, snapshot).argmax_unique() {
                        Argmax::Unique(label) => {
                            let next = match prev {
                                Some(a) if a.label == label => a,
                                _ => Assignment {
                                    label,
                                    provenance: Provenance::Run(run),
                                },
                            };
                            (Some(next), Status::Assigned)
                        }
                        Argmax::Tie(_) if prev.is_some() => (prev, Status::Assigned),
                        Argmax::Empty if prev.is_some() => (prev, Status::Assigned),
                        Argmax::Tie(_) => (None, Status::Tied),
                        Argmax::Empty => (None, Status::Empty),
                    }
                })
                .collect();
            let mut next = AssignmentTable::empty(self.doc_count());
            for (&d, (slot, _)) in z.iter().zip(&results) {
                next.slots[d] = *slot;
            }
            let status: Vec<Status> = results.iter().map(|r| r.1).collect();
            stages.push(self.counts(format!("Run{run}"), &z, &status));
            table = next;
        }
        (table, stages)
    }

    /// Step 2 on the documents of Z left open by step 1: own weights are
    /// added to the reference count, then ties go to the label with the
    /// largest global size. Documents with no mass at all stay open.
    pub fn run_step2(
        &self,
        table: &AssignmentTable,
        warnings: &mut ReclassWarnings,
    ) -> (AssignmentTable, Vec<StageCounts>) {
        let own_run = self.config.step1_runs + 1;
        let size_run = self.config.step1_runs + 2;
        let open: Vec<DocIndex> = self.z_docs().into_iter().filter(|&d| table.get(d).is_none()).collect();

        let outcomes: Vec<Argmax> = open
            .par_iter()
            .map(|&d| {
                let own = Histogram::from_contributions(self.own_mass(d).collect());
                self.reference_histogram(d, table).merged(&own).argmax_unique()
            })
            .collect();

        let mut next = table.clone();
        let mut run4_status = Vec::with_capacity(open.len());
        let mut tied = Vec::new();
        for (&d, outcome) in open.iter().zip(&outcomes) {
            match outcome {
                Argmax::Unique(label) => {
                    next.set(d, *label, Provenance::Run(own_run));
                    run4_status.push(Status::Assigned);
                }
                Argmax::Tie(labels) => {
                    tied.push((d, labels));
                    run4_status.push(Status::Tied);
                }
                Argmax::Empty => run4_status.push(Status::Empty),
            }
        }
        let mut stages = vec![self.counts(format!("Run{own_run}"), &open, &run4_status)];

        let still_open: Vec<DocIndex> = open
            .iter()
            .zip(&run4_status)
            .filter(|(_, s)| **s != Status::Assigned)
            .map(|(&d, _)| d)
            .collect();
        for (d, labels) in tied {
            let (label, residual) = largest_by(labels, |l| self.global_size(l)).expect("a tie has candidates");
            if residual {
                warnings.lexicographic_ties += 1;
                warnings.tied_documents.push(d);
            }
            next.set(d, label, Provenance::Run(size_run));
        }
        let run5_status: Vec<Status> = still_open
            .iter()
            .map(|&d| {
                if next.get(d).is_some() {
                    Status::Assigned
                } else {
                    Status::Empty
                }
            })
            .collect();
        stages.push(self.counts(format!("Run{size_run}"), &still_open, &run5_status));
        (next, stages)
    }

    /// Corpus W keeps its own non-excluded label, the one with the largest
    /// global size if there are several. Documents whose own mass is all
    /// excluded are left for the fallback.
    pub fn few_refs_rule(&self, table: &AssignmentTable, warnings: &mut ReclassWarnings) -> AssignmentTable {
        let mut next = table.clone();
        for d in 0..self.doc_count() {
            if self.in_z[d] || next.get(d).is_some() {
                continue;
            }
            let own: Vec<LabelIndex> = self.own_mass(d).map(|(l, _)| l).collect();
            if let Some((label, residual)) = largest_by(&own, |l| self.global_size(l)) {
                if residual {
                    warnings.lexicographic_ties += 1;
                    warnings.tied_documents.push(d);
                }
                next.set(d, label, Provenance::FewRefsRule);
            }
        }
        next
    }

    /// Assigns every document still open to the majority label among the
    /// classified documents sharing its largest (excluded) own label.
    pub fn multidisciplinary_fallback(
        &self,
        table: &AssignmentTable,
        doc_ids: impl Fn(DocIndex) -> String,
        warnings: &mut ReclassWarnings,
    ) -> Result<AssignmentTable> {
        let open: Vec<DocIndex> = table.unassigned().collect();
        if open.is_empty() {
            return Ok(table.clone());
        }
        let mut groups: BTreeMap<LabelIndex, Vec<(LabelIndex, f64)>> = BTreeMap::new();
        let mut keys = Vec::with_capacity(open.len());
        for &d in &open {
            let key = self.weights.primary(d, |_| true);
            if let Some(k) = key {
                if !self.labels.is_excluded(k) {
                    return Err(Error::FallbackPrecondition {
                        doc: doc_ids(d),
                        category: self.labels.code(k).to_string(),
                    });
                }
                groups.entry(k).or_default();
            }
            keys.push(key);
        }

        let mut assigned_counts = vec![0usize; self.labels.len()];
        for d in 0..self.doc_count() {
            let Some(p) = table.label(d) else { continue };
            assigned_counts[p as usize] += 1;
            for &(l, w) in self.weights.row(d) {
                if let Some(scores) = groups.get_mut(&l) {
                    scores.push((p, w));
                }
            }
        }
        let overall: Vec<LabelIndex> = {
            let max = assigned_counts.iter().copied().max().unwrap_or(0);
            if max == 0 {
                return Err(Error::Invalid("no classified document to fall back on".into()));
            }
            (0..self.labels.len() as LabelIndex)
                .filter(|&l| assigned_counts[l as usize] == max)
                .collect()
        };

        let mut winners: BTreeMap<LabelIndex, Option<LabelIndex>> = BTreeMap::new();
        for (&g, scores) in &groups {
            let winner = match Histogram::from_contributions(scores.clone()).argmax_unique() {
                Argmax::Unique(l) => Some(l),
                Argmax::Tie(labels) => {
                    let (l, residual) = largest_by(&labels, |l| self.global_size(l)).unwrap();
                    if residual {
                        warnings.lexicographic_ties += 1;
                    }
                    Some(l)
                }
                Argmax::Empty => None,
            };
            winners.insert(g, winner);
        }

        let mut next = table.clone();
        for (&d, key) in open.iter().zip(keys) {
            let label = match key.and_then(|k| winners[&k]) {
                Some(l) => l,
                None => {
                    warnings.fallback_without_peers += 1;
                    warn!("document `{}` has no classified peer, using the largest label", doc_ids(d));
                    overall[0]
                }
            };
            next.set(d, label, Provenance::MultiDFallback);
        }
        Ok(next)
    }

    /// Runs the whole cascade and checks the table is total.
    pub fn run(&self, doc_ids: impl Fn(DocIndex) -> String) -> Result<Classification> {
        let mut warnings = ReclassWarnings::default();
        let (table, mut stages) = self.run_step1();
        let (table, step2) = self.run_step2(&table, &mut warnings);
        stages.extend(step2);

        let z = self.z_docs();
        let z_status: Vec<Status> = z
            .iter()
            .map(|&d| if table.get(d).is_some() { Status::Assigned } else { Status::Empty })
            .collect();
        let mut total = self.counts("Steps1+2".into(), &z, &z_status);
        total.unassigned_tied = 0;

        let after_w = self.few_refs_rule(&table, &mut warnings);
        let w: Vec<DocIndex> = (0..self.doc_count()).filter(|&d| !self.in_z[d]).collect();
        let w_status: Vec<Status> = w
            .iter()
            .map(|&d| if after_w.get(d).is_some() { Status::Assigned } else { Status::Empty })
            .collect();
        let few = self.counts("FewRefsRule".into(), &w, &w_status);

        let open: Vec<DocIndex> = after_w.unassigned().collect();
        let finalized = self.multidisciplinary_fallback(&after_w, &doc_ids, &mut warnings)?;
        let fallback = self.counts(
            "MultiDFallback".into(),
            &open,
            &vec![Status::Assigned; open.len()],
        );
        stages.extend([total, few, fallback]);
        for &d in &warnings.tied_documents {
            if let Some(label) = finalized.label(d) {
                warn!(
                    "document `{}`: global sizes tie, taking smallest code `{}`",
                    doc_ids(d),
                    self.labels.code(label)
                );
            }
        }
        self.finalize(finalized, stages, warnings, doc_ids)
    }

    /// Checks coverage and that no excluded label was assigned.
    pub fn finalize(
        &self,
        table: AssignmentTable,
        stages: Vec<StageCounts>,
        warnings: ReclassWarnings,
        doc_ids: impl Fn(DocIndex) -> String,
    ) -> Result<Classification> {
        let missing: Vec<String> = table.unassigned().map(&doc_ids).collect();
        if !missing.is_empty() {
            return Err(Error::Unassigned(missing));
        }
        if let Some(d) = (0..table.len()).find(|&d| self.labels.is_excluded(table.label(d).unwrap())) {
            return Err(Error::Invalid(format!(
                "document `{}` was assigned excluded label `{}`",
                doc_ids(d),
                self.labels.code(table.label(d).unwrap())
            )));
        }
        Ok(Classification {
            table,
            stages,
            warnings,
        })
    }
}

/// Category-level classification of a corpus with the default report
/// perimeter.
pub fn reclassify_categories(corpus: &Corpus, config: ReclassConfig) -> Result<(LabelSpace, Classification)> {
    let labels = corpus.taxonomy().category_labels();
    let result = Reclassifier::for_categories(corpus, &labels, config).run(|d| corpus.document(d).id.clone())?;
    Ok((labels, result))
}
