//! Entity indicators under both classifications.
//!
//! The journal side ("WoS") spreads a document over its journal categories
//! and their disciplines; the reclassified side ("OST") puts it whole in its
//! final category and that category's discipline. Entities are countries,
//! weighted by address fractions (or whole counts), plus the world.
//!
//! Discipline set sizes use [`Mass`], an exact fixed-point type, so that
//! `#OST = #WoS + #NewOST − #OldWoS` holds bit for bit whatever the
//! summation order.

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Sub};

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, DocIndex, DocType};
use crate::labels::LabelWeights;
use crate::surgery::Hierarchy;
use crate::{Error, Result};

pub const WORLD: &str = "WORLD";

const CHUNK: usize = 4096;

/// Exact non-negative mass in units of 2^-80: the product of two weights each
/// rounded to 2^-40.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mass(i128);

impl Mass {
    pub const ZERO: Mass = Mass(0);
    const FRACTION_BITS: i32 = 40;

    fn quantize(x: f64) -> i128 {
        debug_assert!((0.0..=1.0 + 1e-9).contains(&x), "weight {x} outside [0, 1]");
        (x * 2f64.powi(Self::FRACTION_BITS)).round() as i128
    }

    /// `a · b` for weights in [0, 1].
    pub fn product(a: f64, b: f64) -> Mass {
        Mass(Self::quantize(a) * Self::quantize(b))
    }

    /// `a · (1 − b)`, with the complement taken after rounding `b` so that
    /// `product(a, b) + complement(a, b) == product(a, 1)` exactly.
    pub fn complement(a: f64, b: f64) -> Mass {
        let one = 1i128 << Self::FRACTION_BITS;
        Mass(Self::quantize(a) * (one - Self::quantize(b)))
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2f64.powi(2 * Self::FRACTION_BITS)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Add for Mass {
    type Output = Mass;
    fn add(self, o: Mass) -> Mass {
        Mass(self.0 + o.0)
    }
}

impl Sub for Mass {
    type Output = Mass;
    fn sub(self, o: Mass) -> Mass {
        Mass(self.0 - o.0)
    }
}

impl AddAssign for Mass {
    fn add_assign(&mut self, o: Mass) {
        self.0 += o.0;
    }
}

impl std::iter::Sum for Mass {
    fn sum<I: Iterator<Item = Mass>>(iter: I) -> Mass {
        iter.fold(Mass::ZERO, Add::add)
    }
}

/// Sizes of the discipline sets of one entity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DisciplineSets {
    /// In the discipline for the journal classification.
    pub wos: Mass,
    /// In the discipline for the reclassification.
    pub ost: Mass,
    /// In the discipline under both.
    pub both: Mass,
    /// Reclassified into the discipline from other journal disciplines.
    pub new_ost: Mass,
    /// Left the journal discipline for another.
    pub old_wos: Mass,
}

impl DisciplineSets {
    pub fn identity_holds(&self) -> bool {
        self.ost == self.wos + self.new_ost - self.old_wos
            && self.wos == self.both + self.old_wos
            && self.ost == self.both + self.new_ost
    }

    fn merge(&mut self, o: &DisciplineSets) {
        self.wos += o.wos;
        self.ost += o.ost;
        self.both += o.both;
        self.new_ost += o.new_ost;
        self.old_wos += o.old_wos;
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Counting {
    #[default]
    Fractional,
    Whole,
}

impl std::str::FromStr for Counting {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fractional" => Ok(Counting::Fractional),
            "whole" => Ok(Counting::Whole),
            _ => Err(format!("unknown counting mode `{s}`")),
        }
    }
}

/// Both classifications of the same corpus.
pub struct Classifications<'a> {
    corpus: &'a Corpus,
    hierarchy: &'a Hierarchy,
    /// Final category per document, into `hierarchy`.
    ost: &'a [u32],
    /// Journal-side category weights over taxonomy categories.
    wos: Cow<'a, LabelWeights>,
    ost_discipline: Vec<u32>,
    counting: Counting,
}

impl<'a> Classifications<'a> {
    pub fn new(corpus: &'a Corpus, hierarchy: &'a Hierarchy, ost: &'a [u32], counting: Counting) -> Result<Self> {
        Self::with_journal_side(corpus, hierarchy, ost, Cow::Borrowed(corpus.category_weights()), counting)
    }

    /// Uses explicit journal-side category weights (for instance a hard
    /// one-category-per-document table) instead of the corpus weights.
    pub fn with_journal_side(
        corpus: &'a Corpus,
        hierarchy: &'a Hierarchy,
        ost: &'a [u32],
        wos: Cow<'a, LabelWeights>,
        counting: Counting,
    ) -> Result<Self> {
        if ost.len() != corpus.len() || wos.len() != corpus.len() {
            return Err(Error::Invalid("classification tables do not cover the corpus".into()));
        }
        let tax = corpus.taxonomy();
        let disc_of_final: Vec<u32> = hierarchy
            .entries()
            .iter()
            .map(|e| {
                tax.discipline_index(&e.discipline)
                    .map(|d| d as u32)
                    .ok_or_else(|| Error::Hierarchy(format!("unknown discipline `{}`", e.discipline)))
            })
            .collect::<Result<_>>()?;
        let ost_discipline = ost.iter().map(|&f| disc_of_final[f as usize]).collect();
        Ok(Self {
            corpus,
            hierarchy,
            ost,
            wos,
            ost_discipline,
            counting,
        })
    }

    /// Entity codes: the corpus countries in order, then the world.
    pub fn entities(&self) -> Vec<String> {
        let mut e = self.corpus.countries().to_vec();
        e.push(WORLD.to_string());
        e
    }

    pub fn disciplines(&self) -> Vec<String> {
        self.corpus.taxonomy().disciplines().iter().map(|d| d.code.clone()).collect()
    }

    fn entity_weights(&self, doc: DocIndex, out: &mut Vec<(usize, f64)>) {
        out.clear();
        for &(c, w) in &self.corpus.document(doc).countries {
            let w = match self.counting {
                Counting::Fractional => w,
                Counting::Whole => 1.0,
            };
            out.push((c, w));
        }
        out.push((self.corpus.countries().len(), 1.0));
    }

    /// Journal-side (category, discipline, share) triples of a document.
    fn wos_shares(&self, doc: DocIndex, out: &mut Vec<(u32, u32, f64)>) {
        out.clear();
        let tax = self.corpus.taxonomy();
        for &(c, w) in self.wos.row(doc) {
            let discs = &tax.category(c as usize).disciplines;
            let share = w / discs.len() as f64;
            for &d in discs {
                out.push((c, d as u32, share));
            }
        }
    }

    /// Journal-side discipline weights of a document, dense.
    fn wos_disciplines(&self, shares: &[(u32, u32, f64)], out: &mut Vec<f64>) {
        out.clear();
        out.resize(self.corpus.taxonomy().disciplines().len(), 0.0);
        for &(_, d, s) in shares {
            out[d as usize] += s;
        }
    }
}

/// Discipline sets of every entity, row-major by entity then discipline.
#[derive(Clone, Debug, PartialEq)]
pub struct SetTable {
    pub entities: Vec<String>,
    pub disciplines: Vec<String>,
    sets: Vec<DisciplineSets>,
}

impl SetTable {
    pub fn get(&self, entity: usize, discipline: usize) -> &DisciplineSets {
        &self.sets[entity * self.disciplines.len() + discipline]
    }

    pub fn entity_index(&self, code: &str) -> Option<usize> {
        self.entities.iter().position(|e| e == code)
    }

    pub fn world(&self) -> usize {
        self.entities.len() - 1
    }
}

/// Accumulates the discipline sets over `scope`. Exact integer sums make the
/// result independent of chunking and thread count.
pub fn discipline_sets(cls: &Classifications<'_>, scope: &[DocIndex]) -> SetTable {
    let entities = cls.entities();
    let disciplines = cls.disciplines();
    let (ne, nd) = (entities.len(), disciplines.len());
    let parts: Vec<Vec<DisciplineSets>> = scope
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = vec![DisciplineSets::default(); ne * nd];
            let (mut ew, mut shares, mut jd) = (Vec::new(), Vec::new(), Vec::new());
            for &doc in chunk {
                cls.entity_weights(doc, &mut ew);
                cls.wos_shares(doc, &mut shares);
                cls.wos_disciplines(&shares, &mut jd);
                let p = cls.ost_discipline[doc] as usize;
                for &(e, w) in &ew {
                    let row = &mut acc[e * nd..(e + 1) * nd];
                    for (d, &j) in jd.iter().enumerate() {
                        if j > 0.0 {
                            let m = Mass::product(w, j);
                            row[d].wos += m;
                            if d == p {
                                row[d].both += m;
                            } else {
                                row[d].old_wos += m;
                            }
                        }
                    }
                    row[p].ost += Mass::product(w, 1.0);
                    row[p].new_ost += Mass::complement(w, jd[p]);
                }
            }
            acc
        })
        .collect();
    let mut sets = vec![DisciplineSets::default(); ne * nd];
    for part in parts {
        for (s, p) in sets.iter_mut().zip(&part) {
            s.merge(p);
        }
    }
    SetTable {
        entities,
        disciplines,
        sets,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpecializationRow {
    pub entity: String,
    pub discipline: String,
    pub new_ost: f64,
    pub old_wos: f64,
    pub wos: f64,
    pub ost: f64,
    pub spec_index_wos: Option<f64>,
    pub spec_index_ost: Option<f64>,
    pub a_entity: f64,
    pub b_entity: f64,
    pub a_world: f64,
    pub b_world: f64,
    pub rho_exact: f64,
    /// First-order form `1 + (A − A_world) − (B − B_world)`.
    pub rho_approx: f64,
    pub epsilon: f64,
}

impl SpecializationRow {
    /// Ratio of specialization indexes and its first-order decomposition from
    /// raw set sizes. `None` when the entity or the world has an empty
    /// journal-side discipline.
    #[allow(clippy::too_many_arguments)]
    pub fn from_counts(
        entity: &str,
        discipline: &str,
        new_ost: f64,
        old_wos: f64,
        wos: f64,
        world_new_ost: f64,
        world_old_wos: f64,
        world_wos: f64,
    ) -> Option<Self> {
        if wos <= 0.0 || world_wos <= 0.0 {
            return None;
        }
        let a_entity = new_ost / wos;
        let b_entity = old_wos / wos;
        let a_world = world_new_ost / world_wos;
        let b_world = world_old_wos / world_wos;
        let rho_exact = (1.0 + a_entity - b_entity) / (1.0 + a_world - b_world);
        let rho_approx = 1.0 + (a_entity - a_world) - (b_entity - b_world);
        Some(Self {
            entity: entity.to_string(),
            discipline: discipline.to_string(),
            new_ost,
            old_wos,
            wos,
            ost: wos + new_ost - old_wos,
            spec_index_wos: None,
            spec_index_ost: None,
            a_entity,
            b_entity,
            a_world,
            b_world,
            rho_exact,
            rho_approx,
            epsilon: rho_exact - rho_approx,
        })
    }
}

/// Specialization index of every entity and discipline under both
/// classifications, with the ratio decomposition. Rows whose journal-side
/// discipline is empty for the entity are omitted.
pub fn specialization(table: &SetTable) -> Vec<SpecializationRow> {
    let nd = table.disciplines.len();
    let w = table.world();
    let total = |e: usize, side: fn(&DisciplineSets) -> Mass| -> f64 {
        (0..nd).map(|d| side(table.get(e, d))).sum::<Mass>().to_f64()
    };
    let world_wos_total = total(w, |s| s.wos);
    let world_ost_total = total(w, |s| s.ost);
    let mut rows = Vec::new();
    for e in 0..table.entities.len() {
        let wos_total = total(e, |s| s.wos);
        let ost_total = total(e, |s| s.ost);
        for d in 0..nd {
            let s = table.get(e, d);
            let ws = table.get(w, d);
            let Some(mut row) = SpecializationRow::from_counts(
                &table.entities[e],
                &table.disciplines[d],
                s.new_ost.to_f64(),
                s.old_wos.to_f64(),
                s.wos.to_f64(),
                ws.new_ost.to_f64(),
                ws.old_wos.to_f64(),
                ws.wos.to_f64(),
            ) else {
                continue;
            };
            row.ost = s.ost.to_f64();
            let index = |x: f64, t: f64, wx: f64, wt: f64| (t > 0.0 && wx > 0.0).then(|| (x / t) / (wx / wt));
            row.spec_index_wos = index(s.wos.to_f64(), wos_total, ws.wos.to_f64(), world_wos_total);
            row.spec_index_ost = index(s.ost.to_f64(), ost_total, ws.ost.to_f64(), world_ost_total);
            if let (Some(a), Some(b)) = (row.spec_index_wos, row.spec_index_ost) {
                row.rho_exact = b / a;
                row.epsilon = row.rho_exact - row.rho_approx;
            }
            rows.push(row);
        }
    }
    rows
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DocFilter {
    /// Publication years kept; empty keeps every year.
    pub years: Vec<i32>,
    pub doc_types: Vec<DocType>,
}

impl Default for DocFilter {
    fn default() -> Self {
        Self {
            years: vec![2019],
            doc_types: vec![DocType::Article],
        }
    }
}

impl DocFilter {
    pub fn keeps(&self, corpus: &Corpus, doc: DocIndex) -> bool {
        let d = corpus.document(doc);
        (self.years.is_empty() || self.years.contains(&d.pub_year)) && self.doc_types.contains(&d.doc_type)
    }
}

/// Mean citations per (category, year) cell under each classification.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Normalizers {
    /// Journal side: weight-averaged over the documents of the category.
    pub wos: BTreeMap<(u32, i32), f64>,
    /// Reclassified side: plain mean over the documents of the final category.
    pub ost: BTreeMap<(u32, i32), f64>,
}

impl Normalizers {
    pub fn compute(cls: &Classifications<'_>, docs: &[DocIndex]) -> Self {
        let mut wos: BTreeMap<(u32, i32), (f64, f64)> = BTreeMap::new();
        let mut ost: BTreeMap<(u32, i32), (f64, f64)> = BTreeMap::new();
        for &doc in docs {
            let d = cls.corpus.document(doc);
            let c = d.citation_count as f64;
            for &(cat, w) in cls.wos.row(doc) {
                let cell = wos.entry((cat, d.pub_year)).or_default();
                cell.0 += w * c;
                cell.1 += w;
            }
            let cell = ost.entry((cls.ost[doc], d.pub_year)).or_default();
            cell.0 += c;
            cell.1 += 1.0;
        }
        let mean = |m: BTreeMap<(u32, i32), (f64, f64)>| m.into_iter().map(|(k, (s, n))| (k, s / n)).collect();
        Self {
            wos: mean(wos),
            ost: mean(ost),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MncsRow {
    pub entity: String,
    /// Discipline code, or `ALL` for the entity's whole output.
    pub discipline: String,
    pub wos_count: f64,
    pub ost_count: f64,
    pub mncs_wos: Option<f64>,
    pub mncs_ost: Option<f64>,
    pub d: Option<f64>,
    pub d1: Option<f64>,
    pub d2: Option<f64>,
    pub da: Option<f64>,
    pub db: Option<f64>,
}

pub const ALL_DISCIPLINES: &str = "ALL";

/// Per (entity, discipline) sums, all in document-share units.
#[derive(Clone, Copy, Debug, Default)]
struct Cell {
    wos_n: f64,
    wos_both: f64,
    wos_old: f64,
    ost_n: f64,
    ost_both: f64,
    ost_new: f64,
}

impl Cell {
    fn merge(&mut self, o: &Cell) {
        self.wos_n += o.wos_n;
        self.wos_both += o.wos_both;
        self.wos_old += o.wos_old;
        self.ost_n += o.ost_n;
        self.ost_both += o.ost_both;
        self.ost_new += o.ost_new;
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MncsWarnings {
    /// Journal-side shares dropped for a zero normalizer.
    pub excluded_wos_shares: usize,
    /// Documents dropped on the reclassified side for a zero normalizer.
    pub excluded_ost_docs: usize,
}

#[derive(Clone, Debug)]
pub struct MncsReport {
    pub rows: Vec<MncsRow>,
    pub normalizers: Normalizers,
    pub warnings: MncsWarnings,
}

/// MNCS of every entity per discipline and overall, with the intra/inter
/// discipline decomposition of the difference.
///
/// A journal-side share of a document is `w · j_c / |disciplines(c)|` and
/// scores `citations / μ_wos(c, year)`; on the reclassified side the
/// document counts `w` and scores `citations / μ_ost(final, year)`. Shares
/// with a zero normalizer are left out of both numerator and count.
pub fn mncs(cls: &Classifications<'_>, filter: &DocFilter) -> MncsReport {
    let docs: Vec<DocIndex> = (0..cls.corpus.len()).filter(|&d| filter.keeps(cls.corpus, d)).collect();
    let normalizers = Normalizers::compute(cls, &docs);
    let entities = cls.entities();
    let disciplines = cls.disciplines();
    let (ne, nd) = (entities.len(), disciplines.len());
    // one extra column per entity for ALL
    let width = nd + 1;

    let parts: Vec<(Vec<Cell>, MncsWarnings)> = docs
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = vec![Cell::default(); ne * width];
            let mut warn = MncsWarnings::default();
            let (mut ew, mut shares, mut jd) = (Vec::new(), Vec::new(), Vec::new());
            for &doc in chunk {
                let d = cls.corpus.document(doc);
                let c = d.citation_count as f64;
                cls.entity_weights(doc, &mut ew);
                cls.wos_shares(doc, &mut shares);
                cls.wos_disciplines(&shares, &mut jd);
                let p = cls.ost_discipline[doc] as usize;
                let mu_ost = normalizers.ost[&(cls.ost[doc], d.pub_year)];
                let ncs_ost = (mu_ost > 0.0).then(|| c / mu_ost);
                if ncs_ost.is_none() {
                    warn.excluded_ost_docs += 1;
                }
                for &(cat, _, _) in &shares {
                    if normalizers.wos[&(cat, d.pub_year)] <= 0.0 {
                        warn.excluded_wos_shares += 1;
                    }
                }
                for &(e, w) in &ew {
                    let row = &mut acc[e * width..(e + 1) * width];
                    for &(cat, disc, share) in &shares {
                        let mu = normalizers.wos[&(cat, d.pub_year)];
                        if mu <= 0.0 {
                            continue;
                        }
                        let s = w * share;
                        let score = s * c / mu;
                        let cell = &mut row[disc as usize];
                        cell.wos_n += s;
                        if disc as usize == p {
                            cell.wos_both += score;
                        } else {
                            cell.wos_old += score;
                        }
                        row[nd].wos_n += s;
                        row[nd].wos_both += score;
                    }
                    if let Some(ncs) = ncs_ost {
                        let cell = &mut row[p];
                        cell.ost_n += w;
                        cell.ost_both += w * jd[p] * ncs;
                        cell.ost_new += w * (1.0 - jd[p]) * ncs;
                        row[nd].ost_n += w;
                        row[nd].ost_both += w * ncs;
                    }
                }
            }
            (acc, warn)
        })
        .collect();

    let mut cells = vec![Cell::default(); ne * width];
    let mut warnings = MncsWarnings::default();
    for (part, w) in parts {
        for (a, b) in cells.iter_mut().zip(&part) {
            a.merge(b);
        }
        warnings.excluded_wos_shares += w.excluded_wos_shares;
        warnings.excluded_ost_docs += w.excluded_ost_docs;
    }
    if warnings.excluded_ost_docs + warnings.excluded_wos_shares > 0 {
        warn!(
            "zero normalizers: {} journal-side share(s) and {} document(s) excluded from MNCS",
            warnings.excluded_wos_shares, warnings.excluded_ost_docs
        );
    }

    let mut rows = Vec::with_capacity(ne * width);
    for (e, entity) in entities.iter().enumerate() {
        for k in 0..width {
            let cell = &cells[e * width + k];
            let discipline = if k == nd { ALL_DISCIPLINES } else { &disciplines[k] };
            rows.push(decompose(entity, discipline, cell));
        }
    }
    MncsReport {
        rows,
        normalizers,
        warnings,
    }
}

fn decompose(entity: &str, discipline: &str, c: &Cell) -> MncsRow {
    let defined = c.wos_n > 0.0 && c.ost_n > 0.0;
    let mncs_wos = (c.wos_n > 0.0).then(|| (c.wos_both + c.wos_old) / c.wos_n);
    let mncs_ost = (c.ost_n > 0.0).then(|| (c.ost_both + c.ost_new) / c.ost_n);
    let (d, d1, d2, da, db) = if defined {
        let d1 = c.ost_both / c.ost_n - c.wos_both / c.wos_n;
        let da = c.ost_new / c.ost_n;
        let db = c.wos_old / c.wos_n;
        (
            Some(mncs_ost.unwrap() - mncs_wos.unwrap()),
            Some(d1),
            Some(da - db),
            Some(da),
            Some(db),
        )
    } else {
        (None, None, None, None, None)
    };
    MncsRow {
        entity: entity.to_string(),
        discipline: discipline.to_string(),
        wos_count: c.wos_n,
        ost_count: c.ost_n,
        mncs_wos,
        mncs_ost,
        d,
        d1,
        d2,
        da,
        db,
    }
}

/// MNCS of one entity over one discipline (or [`ALL_DISCIPLINES`]).
pub fn mncs_of(report: &MncsReport, entity: &str, discipline: &str, ost: bool) -> Option<f64> {
    let row = report.rows.iter().find(|r| r.entity == entity && r.discipline == discipline)?;
    if ost {
        row.mncs_ost
    } else {
        row.mncs_wos
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NewDocsRow {
    pub wos_discipline: String,
    pub ost_category: String,
    pub mass: f64,
    pub percent: f64,
    pub cumulative: f64,
}

/// Where the documents newly in `discipline` for `entity` came from: their
/// journal-side discipline mass outside `discipline`, by final category.
pub fn new_docs_breakdown(
    cls: &Classifications<'_>,
    scope: &[DocIndex],
    entity: &str,
    discipline: &str,
) -> Result<Vec<NewDocsRow>> {
    let entities = cls.entities();
    let e = entities
        .iter()
        .position(|x| x == entity)
        .ok_or_else(|| Error::Invalid(format!("unknown entity `{entity}`")))?;
    let target = cls
        .corpus
        .taxonomy()
        .discipline_index(discipline)
        .ok_or_else(|| Error::Invalid(format!("unknown discipline `{discipline}`")))?;
    let mut cells: BTreeMap<(usize, u32), f64> = BTreeMap::new();
    let (mut ew, mut shares, mut jd) = (Vec::new(), Vec::new(), Vec::new());
    for &doc in scope {
        if cls.ost_discipline[doc] as usize != target {
            continue;
        }
        cls.entity_weights(doc, &mut ew);
        let Some(&(_, w)) = ew.iter().find(|x| x.0 == e) else { continue };
        cls.wos_shares(doc, &mut shares);
        cls.wos_disciplines(&shares, &mut jd);
        for (d, &j) in jd.iter().enumerate() {
            if d != target && j > 0.0 {
                *cells.entry((d, cls.ost[doc])).or_default() += w * j;
            }
        }
    }
    let tax = cls.corpus.taxonomy();
    let named: Vec<(String, f64)> = cells
        .iter()
        .map(|(&(d, f), &m)| (format!("{}\t{}", tax.discipline(d).code, cls.hierarchy.entry(f as usize).code), m))
        .collect();
    Ok(crate::migration::ranked(named)
        .into_iter()
        .map(|r| {
            let (d, c) = r.source.split_once('\t').unwrap();
            NewDocsRow {
                wos_discipline: d.to_string(),
                ost_category: c.to_string(),
                mass: r.mass,
                percent: r.percent,
                cumulative: r.cumulative,
            }
        })
        .collect())
}
