//! Taxonomy surgery: from reclassified categories to a strict two-level
//! hierarchy.
//!
//! Each P-category takes the predominant P-discipline of its documents, or is
//! split into mono-discipline sub-categories (`GM-02`, `GM-SS`) when its
//! discipline mix spans domains. Categories left with too few documents are
//! then removed and their documents move to the most frequent remaining
//! category among their references.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{CategorySpec, Corpus, DocIndex, Taxonomy};
use crate::labels::{largest_by, Argmax, Histogram, LabelIndex};
use crate::reclassify::{Classification, ReclassConfig, Reclassifier};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SurgeryConfig {
    /// A split needs the predominant discipline strictly below this share.
    pub predominant_max: f64,
    /// Minor disciplines need a share strictly above this.
    pub minor_share: f64,
    /// ... and at least this many documents.
    pub minor_docs: usize,
    /// Categories with fewer corpus-Y documents are merged away.
    pub small_threshold: usize,
    pub max_merge_rounds: usize,
}

impl Default for SurgeryConfig {
    fn default() -> Self {
        Self {
            predominant_max: 0.80,
            minor_share: 0.15,
            minor_docs: 5000,
            small_threshold: 3000,
            max_merge_rounds: 10,
        }
    }
}

impl SurgeryConfig {
    pub fn validate(&self) -> Result<()> {
        let share = |v: f64| (0.0..=1.0).contains(&v);
        if !share(self.predominant_max) || !share(self.minor_share) {
            return Err(Error::Config("split shares must lie in [0, 1]".into()));
        }
        if self.max_merge_rounds == 0 {
            return Err(Error::Config("max_merge_rounds must be at least 1".into()));
        }
        Ok(())
    }
}

/// Corpus-Y discipline breakdown of one P-category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryProfile {
    pub category: usize,
    pub y_docs: usize,
    /// (discipline, documents), every discipline with at least one document,
    /// in discipline order.
    pub disciplines: Vec<(usize, usize)>,
}

impl CategoryProfile {
    pub fn share(&self, discipline: usize) -> f64 {
        if self.y_docs == 0 {
            return 0.0;
        }
        let n = self.disciplines.iter().find(|d| d.0 == discipline).map_or(0, |d| d.1);
        n as f64 / self.y_docs as f64
    }

    /// Most common discipline, smallest index on ties.
    pub fn predominant(&self) -> Option<usize> {
        let max = self.disciplines.iter().map(|d| d.1).max()?;
        self.disciplines.iter().find(|d| d.1 == max).map(|d| d.0)
    }

    pub fn count(&self, discipline: usize) -> usize {
        self.disciplines.iter().find(|d| d.0 == discipline).map_or(0, |d| d.1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CategoryOutcome {
    /// Multidisciplinary categories take no part in the final hierarchy.
    Excluded,
    Single(usize),
    /// Predominant discipline first.
    Split(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitRecord {
    pub original: String,
    /// (sub-category code, discipline code), predominant first.
    pub subs: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MergeRecord {
    pub removed: String,
    pub y_count: usize,
    pub round: usize,
    /// Where each of its documents went.
    pub documents: Vec<(DocIndex, String)>,
}

impl MergeRecord {
    /// Destination codes by number of documents received, largest first.
    pub fn flows(&self) -> Vec<(String, usize)> {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for (_, code) in &self.documents {
            *counts.entry(code).or_default() += 1;
        }
        let mut flows: Vec<(String, usize)> = counts.into_iter().map(|(c, n)| (c.to_string(), n)).collect();
        flows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        flows
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Origin {
    Kept,
    Split { parent: String },
    MergeTarget,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Kept => f.write_str("kept"),
            Origin::Split { parent } => write!(f, "split:{parent}"),
            Origin::MergeTarget => f.write_str("merge-target"),
        }
    }
}

impl std::str::FromStr for Origin {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "kept" => Ok(Origin::Kept),
            "merge-target" => Ok(Origin::MergeTarget),
            _ => match s.strip_prefix("split:") {
                Some(p) if !p.is_empty() => Ok(Origin::Split { parent: p.to_string() }),
                _ => Err(format!("unknown origin `{s}`")),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HierarchyEntry {
    pub code: String,
    pub discipline: String,
    pub origin: Origin,
}

impl HierarchyEntry {
    /// Journal-era category this final category descends from.
    pub fn nominal(&self) -> &str {
        match &self.origin {
            Origin::Split { parent } => parent,
            _ => &self.code,
        }
    }
}

/// Final categories, sorted by code, each in exactly one discipline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hierarchy {
    entries: Vec<HierarchyEntry>,
    index: HashMap<String, usize>,
}

impl Hierarchy {
    pub fn new(mut entries: Vec<HierarchyEntry>) -> Result<Self> {
        entries.sort_by(|a, b| a.code.cmp(&b.code));
        let mut index = HashMap::with_capacity(entries.len());
        for (i, e) in entries.iter().enumerate() {
            if e.discipline.is_empty() || e.discipline.contains(';') {
                return Err(Error::Hierarchy(format!(
                    "category `{}` must have exactly one discipline, found `{}`",
                    e.code, e.discipline
                )));
            }
            if index.insert(e.code.clone(), i).is_some() {
                return Err(Error::Hierarchy(format!("category `{}` listed twice", e.code)));
            }
        }
        Ok(Self { entries, index })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[HierarchyEntry] {
        &self.entries
    }

    pub fn entry(&self, index: usize) -> &HierarchyEntry {
        &self.entries[index]
    }

    pub fn index(&self, code: &str) -> Option<usize> {
        self.index.get(code).copied()
    }

    pub fn disciplines(&self) -> BTreeSet<&str> {
        self.entries.iter().map(|e| e.discipline.as_str()).collect()
    }
}

/// Builds the final category list and checks the count identity
/// `final = non-multidisciplinary + extra split codes - removed`.
///
/// `removed` holds codes that disappear (originals or sub-categories);
/// `merge_targets` marks the categories that absorbed them.
pub fn emit_final_taxonomy(
    taxonomy: &Taxonomy,
    outcomes: &[CategoryOutcome],
    removed: &BTreeSet<String>,
    merge_targets: &BTreeSet<String>,
) -> Result<Hierarchy> {
    if outcomes.len() != taxonomy.categories().len() {
        return Err(Error::Hierarchy(format!(
            "{} outcomes for {} categories",
            outcomes.len(),
            taxonomy.categories().len()
        )));
    }
    let mut kept_codes = 0usize;
    let mut extra = 0usize;
    let mut entries = Vec::new();
    for (cat, outcome) in taxonomy.categories().iter().zip(outcomes) {
        let disc = |d: usize| taxonomy.discipline(d).code.clone();
        match outcome {
            CategoryOutcome::Excluded => {
                if !cat.multidisciplinary {
                    return Err(Error::Hierarchy(format!("category `{}` is not multidisciplinary", cat.code)));
                }
            }
            _ if cat.multidisciplinary => {
                return Err(Error::Hierarchy(format!(
                    "multidisciplinary category `{}` cannot enter the hierarchy",
                    cat.code
                )));
            }
            CategoryOutcome::Single(d) => {
                kept_codes += 1;
                let origin = if merge_targets.contains(&cat.code) {
                    Origin::MergeTarget
                } else {
                    Origin::Kept
                };
                entries.push(HierarchyEntry {
                    code: cat.code.clone(),
                    discipline: disc(*d),
                    origin,
                });
            }
            CategoryOutcome::Split(discs) => {
                if !(2..=3).contains(&discs.len()) {
                    return Err(Error::Hierarchy(format!(
                        "split of `{}` must have 2 or 3 sub-categories, found {}",
                        cat.code,
                        discs.len()
                    )));
                }
                kept_codes += 1;
                extra += discs.len() - 1;
                for &d in discs {
                    entries.push(HierarchyEntry {
                        code: sub_code(&cat.code, &taxonomy.discipline(d).code),
                        discipline: disc(d),
                        origin: Origin::Split {
                            parent: cat.code.clone(),
                        },
                    });
                }
            }
        }
    }
    let present: BTreeSet<&str> = entries.iter().map(|e| e.code.as_str()).collect();
    for code in removed {
        if !present.contains(code.as_str()) {
            return Err(Error::Hierarchy(format!("removed category `{code}` is not in the hierarchy")));
        }
    }
    for code in merge_targets {
        if !present.contains(code.as_str()) || removed.contains(code) {
            return Err(Error::Hierarchy(format!("merge target `{code}` is not a final category")));
        }
    }
    entries.retain(|e| !removed.contains(&e.code));
    let expected = kept_codes + extra - removed.len();
    let hierarchy = Hierarchy::new(entries)?;
    if hierarchy.len() != expected {
        return Err(Error::Hierarchy(format!(
            "count identity broken: {} final categories, expected {expected}",
            hierarchy.len()
        )));
    }
    Ok(hierarchy)
}

pub fn sub_code(parent: &str, discipline: &str) -> String {
    format!("{parent}-{discipline}")
}

/// Split decision for one category from its corpus-Y discipline breakdown.
///
/// The predominant discipline is kept alone unless its share is below
/// `predominant_max` and some other discipline, from another domain, has a
/// share above `minor_share` and at least `minor_docs` documents. Only the
/// largest qualifying discipline per domain is kept, so a split has at most
/// one sub-category per domain.
pub fn decide_split(profile: &CategoryProfile, taxonomy: &Taxonomy, config: &SurgeryConfig) -> Option<Vec<usize>> {
    let pred = profile.predominant()?;
    if profile.share(pred) >= config.predominant_max {
        return None;
    }
    let pred_domain = taxonomy.domain_of(pred);
    let mut by_domain: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for &(d, n) in &profile.disciplines {
        if d == pred || taxonomy.domain_of(d) == pred_domain {
            continue;
        }
        if profile.share(d) <= config.minor_share || n < config.minor_docs {
            continue;
        }
        let slot = by_domain.entry(taxonomy.domain_of(d)).or_insert((d, n));
        if n > slot.1 {
            *slot = (d, n);
        }
    }
    if by_domain.is_empty() {
        return None;
    }
    let mut discs = vec![pred];
    let mut minors: Vec<(usize, usize)> = by_domain.into_values().collect();
    minors.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    discs.extend(minors.into_iter().map(|m| m.0));
    Some(discs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Own,
    SameDomain,
    Predominant,
}

/// Sub-category for a document of a split category: its own discipline if
/// present, else the largest sub-category of the same domain, else the
/// predominant one.
pub fn route_split_document(
    discipline: usize,
    subs: &[usize],
    profile: &CategoryProfile,
    taxonomy: &Taxonomy,
) -> (usize, Route) {
    if subs.contains(&discipline) {
        return (discipline, Route::Own);
    }
    let domain = taxonomy.domain_of(discipline);
    let same: Option<usize> = subs
        .iter()
        .copied()
        .filter(|&s| taxonomy.domain_of(s) == domain)
        .max_by(|&a, &b| profile.count(a).cmp(&profile.count(b)).then(b.cmp(&a)));
    match same {
        Some(s) => (s, Route::SameDomain),
        None => (subs[0], Route::Predominant),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SurgeryWarnings {
    /// Split documents with no sub-category in their domain.
    pub routed_to_predominant: usize,
    /// Merged documents with no remaining reference mass.
    pub merge_empty_residual: usize,
    pub lexicographic_ties: usize,
}

#[derive(Clone, Debug)]
pub struct Surgery {
    pub hierarchy: Hierarchy,
    /// Final category of every document, as an index into the hierarchy.
    pub assignments: Vec<u32>,
    pub profiles: Vec<CategoryProfile>,
    pub outcomes: Vec<CategoryOutcome>,
    pub splits: Vec<SplitRecord>,
    pub merges: Vec<MergeRecord>,
    pub warnings: SurgeryWarnings,
}

impl Surgery {
    pub fn final_code(&self, doc: DocIndex) -> &str {
        &self.hierarchy.entry(self.assignments[doc] as usize).code
    }
}

/// Reruns the reclassifier with disciplines as labels: journal discipline
/// weights replace category weights, nothing is excluded.
pub fn assign_p_disciplines(corpus: &Corpus, config: ReclassConfig) -> Result<Classification> {
    let labels = corpus.taxonomy().discipline_labels();
    let weights = corpus.discipline_weights();
    let perimeter = (0..corpus.len()).map(|d| corpus.in_perimeter(d)).collect();
    Reclassifier::new(&labels, &weights, corpus.graph(), perimeter, config).run(|d| corpus.document(d).id.clone())
}

/// Discipline breakdown of every category over corpus Y.
pub fn category_profiles(corpus: &Corpus, p_categories: &[LabelIndex], p_disciplines: &[LabelIndex]) -> Vec<CategoryProfile> {
    let tax = corpus.taxonomy();
    let mut counts = vec![vec![0usize; tax.disciplines().len()]; tax.categories().len()];
    for d in 0..corpus.len() {
        if corpus.in_perimeter(d) {
            counts[p_categories[d] as usize][p_disciplines[d] as usize] += 1;
        }
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(category, row)| CategoryProfile {
            category,
            y_docs: row.iter().sum(),
            disciplines: row.into_iter().enumerate().filter(|e| e.1 > 0).collect(),
        })
        .collect()
}

/// Splits, routes and merges. `p_categories` index taxonomy categories,
/// `p_disciplines` index taxonomy disciplines.
pub fn run_surgery(
    corpus: &Corpus,
    p_categories: &[LabelIndex],
    p_disciplines: &[LabelIndex],
    config: &SurgeryConfig,
) -> Result<Surgery> {
    config.validate()?;
    let tax = corpus.taxonomy();
    let mut warnings = SurgeryWarnings::default();
    let profiles = category_profiles(corpus, p_categories, p_disciplines);

    let outcomes: Vec<CategoryOutcome> = tax
        .categories()
        .iter()
        .zip(&profiles)
        .map(|(cat, profile)| {
            if cat.multidisciplinary {
                CategoryOutcome::Excluded
            } else if let Some(discs) = decide_split(profile, tax, config) {
                CategoryOutcome::Split(discs)
            } else {
                // a category without corpus-Y documents keeps its first journal discipline
                CategoryOutcome::Single(profile.predominant().unwrap_or(cat.disciplines[0]))
            }
        })
        .collect();

    // working codes in lexicographic order: the tie-break relies on it
    let mut working: Vec<String> = Vec::new();
    let mut splits = Vec::new();
    for (cat, outcome) in tax.categories().iter().zip(&outcomes) {
        match outcome {
            CategoryOutcome::Excluded => {}
            CategoryOutcome::Single(_) => working.push(cat.code.clone()),
            CategoryOutcome::Split(discs) => {
                let subs: Vec<(String, String)> = discs
                    .iter()
                    .map(|&d| {
                        let dc = tax.discipline(d).code.clone();
                        (sub_code(&cat.code, &dc), dc)
                    })
                    .collect();
                working.extend(subs.iter().map(|s| s.0.clone()));
                splits.push(SplitRecord {
                    original: cat.code.clone(),
                    subs,
                });
            }
        }
    }
    working.sort();
    let working_index: HashMap<&str, u32> = working.iter().enumerate().map(|(i, c)| (c.as_str(), i as u32)).collect();

    let mut current: Vec<u32> = Vec::with_capacity(corpus.len());
    for d in 0..corpus.len() {
        let cat = tax.category(p_categories[d] as usize);
        let code = match &outcomes[p_categories[d] as usize] {
            CategoryOutcome::Excluded => {
                return Err(Error::Invalid(format!(
                    "document `{}` is assigned multidisciplinary category `{}`",
                    corpus.document(d).id,
                    cat.code
                )))
            }
            CategoryOutcome::Single(_) => cat.code.clone(),
            CategoryOutcome::Split(discs) => {
                let profile = &profiles[p_categories[d] as usize];
                let (sub, route) = route_split_document(p_disciplines[d] as usize, discs, profile, tax);
                if route == Route::Predominant {
                    warnings.routed_to_predominant += 1;
                    warn!(
                        "document `{}` of split category `{}`: no sub-category in its domain",
                        corpus.document(d).id,
                        cat.code
                    );
                }
                sub_code(&cat.code, &tax.discipline(sub).code)
            }
        };
        current.push(working_index[code.as_str()]);
    }

    let merges = merge_small_categories(corpus, &working, &mut current, config, &mut warnings)?;

    let removed: BTreeSet<String> = merges.iter().map(|m| m.removed.clone()).collect();
    let targets: BTreeSet<String> = merges
        .iter()
        .flat_map(|m| m.documents.iter().map(|d| d.1.clone()))
        .filter(|c| !removed.contains(c))
        .collect();
    let hierarchy = emit_final_taxonomy(tax, &outcomes, &removed, &targets)?;
    let to_final: Vec<u32> = working
        .iter()
        .map(|c| hierarchy.index(c).map_or(u32::MAX, |i| i as u32))
        .collect();
    let assignments = current.iter().map(|&w| to_final[w as usize]).collect::<Vec<_>>();
    debug_assert!(assignments.iter().all(|&a| a != u32::MAX));

    Ok(Surgery {
        hierarchy,
        assignments,
        profiles,
        outcomes,
        splits,
        merges,
        warnings,
    })
}

/// Removes every working category with fewer than `small_threshold` corpus-Y
/// documents, moving its documents to the most frequent surviving category
/// among their references (whole counts). Ties go to the larger category,
/// then the smaller code; no surviving mass means the largest category.
/// Repeats until no category is below threshold.
pub fn merge_small_categories(
    corpus: &Corpus,
    codes: &[String],
    current: &mut [u32],
    config: &SurgeryConfig,
    warnings: &mut SurgeryWarnings,
) -> Result<Vec<MergeRecord>> {
    let mut removed = vec![false; codes.len()];
    let mut records = Vec::new();
    for round in 1..=config.max_merge_rounds + 1 {
        let mut sizes = vec![0usize; codes.len()];
        for d in 0..corpus.len() {
            if corpus.in_perimeter(d) {
                sizes[current[d] as usize] += 1;
            }
        }
        let victims: Vec<usize> = (0..codes.len())
            .filter(|&c| !removed[c] && sizes[c] < config.small_threshold)
            .collect();
        if victims.is_empty() {
            return Ok(records);
        }
        if round > config.max_merge_rounds {
            return Err(Error::MergeCascade(config.max_merge_rounds));
        }
        for &v in &victims {
            removed[v] = true;
        }
        let survivors: Vec<LabelIndex> = (0..codes.len() as LabelIndex).filter(|&c| !removed[c as usize]).collect();
        if survivors.is_empty() {
            return Err(Error::Invalid(format!(
                "small-category threshold {} removes every category",
                config.small_threshold
            )));
        }
        let size = |c: LabelIndex| sizes[c as usize] as f64;
        let (largest, _) = largest_by(&survivors, size).expect("survivors is not empty");

        let snapshot: &[u32] = current;
        let moving: Vec<DocIndex> = (0..corpus.len()).filter(|&d| removed[snapshot[d] as usize]).collect();
        let moves: Vec<(u32, u8)> = moving
            .par_iter()
            .map(|&d| {
                let contributions = corpus
                    .graph()
                    .references(d)
                    .iter()
                    .map(|&r| snapshot[r as usize])
                    .filter(|&c| !removed[c as usize])
                    .map(|c| (c, 1.0))
                    .collect();
                match Histogram::from_contributions(contributions).argmax_unique() {
                    Argmax::Unique(c) => (c, 0),
                    Argmax::Tie(tied) => {
                        let (c, residual) = largest_by(&tied, size).unwrap();
                        (c, if residual { 2 } else { 0 })
                    }
                    Argmax::Empty => (largest, 1),
                }
            })
            .collect();

        let mut per_victim: BTreeMap<u32, Vec<(DocIndex, String)>> = BTreeMap::new();
        for (&d, &(dest, flag)) in moving.iter().zip(&moves) {
            match flag {
                1 => {
                    warnings.merge_empty_residual += 1;
                    warn!(
                        "document `{}` of removed category `{}` has no surviving reference category, using `{}`",
                        corpus.document(d).id,
                        codes[current[d] as usize],
                        codes[dest as usize]
                    );
                }
                2 => warnings.lexicographic_ties += 1,
                _ => {}
            }
            per_victim.entry(current[d]).or_default().push((d, codes[dest as usize].clone()));
            current[d] = dest;
        }
        for v in victims {
            records.push(MergeRecord {
                removed: codes[v].clone(),
                y_count: sizes[v],
                round,
                documents: per_victim.remove(&(v as u32)).unwrap_or_default(),
            });
        }
    }
    unreachable!("the loop returns on its last round")
}

/// The shipped default taxonomy with its published split and merge lists.
#[derive(Clone, Debug)]
pub struct DefaultTaxonomy {
    pub taxonomy: Taxonomy,
    pub discipline_names: Vec<(String, String)>,
    /// (category, sub-category disciplines, predominant first).
    pub splits: Vec<(String, Vec<String>)>,
    /// (removed category, corpus-Y size, merge target).
    pub merges: Vec<(String, usize, String)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DefaultFile {
    domains: Vec<String>,
    fillers: Fillers,
    disciplines: Vec<DisciplineRow>,
    categories: Vec<CategoryRow>,
    splits: Vec<SplitRow>,
    merges: Vec<MergeRow>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Fillers {
    count: usize,
    prefix: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DisciplineRow {
    code: String,
    name: String,
    domain: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CategoryRow {
    code: String,
    name: String,
    #[serde(default)]
    multidisciplinary: bool,
    disciplines: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SplitRow {
    code: String,
    disciplines: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MergeRow {
    removed: String,
    y_count: usize,
    target: String,
}

const DEFAULT_TAXONOMY: &str = include_str!("../data/default_taxonomy.toml");

impl DefaultTaxonomy {
    pub fn load() -> Result<Self> {
        let file: DefaultFile =
            toml::from_str(DEFAULT_TAXONOMY).map_err(|e| Error::Config(format!("default taxonomy: {e}")))?;
        for d in &file.disciplines {
            if !file.domains.contains(&d.domain) {
                return Err(Error::Config(format!("discipline `{}` has unknown domain `{}`", d.code, d.domain)));
            }
        }
        let mut specs: Vec<CategorySpec> = file
            .categories
            .into_iter()
            .map(|c| CategorySpec {
                code: c.code,
                name: c.name,
                multidisciplinary: c.multidisciplinary,
                disciplines: c.disciplines,
            })
            .collect();
        for i in 0..file.fillers.count {
            let disc = &file.disciplines[i % file.disciplines.len()];
            specs.push(CategorySpec {
                code: format!("{}{:03}", file.fillers.prefix, i + 1),
                name: format!("UNNAMED CATEGORY {}", i + 1),
                multidisciplinary: false,
                disciplines: vec![disc.code.clone()],
            });
        }
        let taxonomy = Taxonomy::new(
            specs,
            file.disciplines.iter().map(|d| (d.code.clone(), d.domain.clone())).collect(),
        )?;
        Ok(Self {
            taxonomy,
            discipline_names: file.disciplines.into_iter().map(|d| (d.code, d.name)).collect(),
            splits: file.splits.into_iter().map(|s| (s.code, s.disciplines)).collect(),
            merges: file.merges.into_iter().map(|m| (m.removed, m.y_count, m.target)).collect(),
        })
    }

    /// Category outcomes implied by the published split list; every other
    /// non-multidisciplinary category keeps its first journal discipline.
    pub fn outcomes(&self) -> Result<Vec<CategoryOutcome>> {
        let tax = &self.taxonomy;
        let splits: HashMap<&str, &Vec<String>> = self.splits.iter().map(|(c, d)| (c.as_str(), d)).collect();
        tax.categories()
            .iter()
            .map(|cat| {
                if cat.multidisciplinary {
                    return Ok(CategoryOutcome::Excluded);
                }
                match splits.get(cat.code.as_str()) {
                    Some(discs) => discs
                        .iter()
                        .map(|d| {
                            tax.discipline_index(d)
                                .ok_or_else(|| Error::Config(format!("split of `{}`: unknown discipline `{d}`", cat.code)))
                        })
                        .collect::<Result<Vec<_>>>()
                        .map(CategoryOutcome::Split),
                    None => Ok(CategoryOutcome::Single(cat.disciplines[0])),
                }
            })
            .collect()
    }

    pub fn hierarchy(&self) -> Result<Hierarchy> {
        let removed = self.merges.iter().map(|m| m.0.clone()).collect();
        let targets = self.merges.iter().map(|m| m.2.clone()).collect();
        emit_final_taxonomy(&self.taxonomy, &self.outcomes()?, &removed, &targets)
    }
}
