//! Synthetic corpora with a planted category structure.
//!
//! Every document has a planted category. Its journal belongs to that
//! category (optionally to a second one as well, or to a multidisciplinary
//! category instead), and its references go to earlier documents of the same
//! category with probability `1 − mixing`. Documents only cite strictly
//! earlier years, so the graph is acyclic.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{parse_corpus, Corpus, CorpusPaths, CorpusText, DocType, LoadOptions, LoadReport};
use crate::{Error, Result};

pub const GENERATOR_VERSION: &str = "refclass-synth 1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountryShare {
    pub code: String,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SynthConfig {
    pub seed: u64,
    pub categories: usize,
    pub disciplines: usize,
    pub domains: usize,
    pub multidisciplinary_categories: usize,
    pub docs_per_category: usize,
    pub first_year: i32,
    pub last_year: i32,
    pub journals_per_category: usize,
    /// Probability that a reference leaves the planted category.
    pub mixing: f64,
    /// Share of journals filed under a multidisciplinary category.
    pub multidisciplinary_journal_share: f64,
    /// Share of journals filed under their category and the next one.
    pub multi_category_journal_share: f64,
    pub refs_min: usize,
    pub refs_max: usize,
    /// Citation count = in-degree + uniform noise in `0..=citation_noise`.
    pub citation_noise: u64,
    pub countries: Vec<CountryShare>,
    /// Probability that a document has a second country (half address each).
    pub collaboration: f64,
    pub review_share: f64,
    pub other_share: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            categories: 8,
            disciplines: 4,
            domains: 2,
            multidisciplinary_categories: 1,
            docs_per_category: 250,
            first_year: 2015,
            last_year: 2020,
            journals_per_category: 4,
            mixing: 0.2,
            multidisciplinary_journal_share: 0.1,
            multi_category_journal_share: 0.2,
            refs_min: 2,
            refs_max: 12,
            citation_noise: 5,
            countries: ["US", "CN", "FR", "BR"]
                .iter()
                .zip([0.4, 0.3, 0.2, 0.1])
                .map(|(c, w)| CountryShare {
                    code: c.to_string(),
                    weight: w,
                })
                .collect(),
            collaboration: 0.2,
            review_share: 0.1,
            other_share: 0.05,
        }
    }
}

impl SynthConfig {
    /// Separable configuration: no mixing, no multidisciplinary journals,
    /// single-category journals.
    pub fn separable(seed: u64) -> Self {
        Self {
            seed,
            mixing: 0.0,
            multidisciplinary_categories: 0,
            multidisciplinary_journal_share: 0.0,
            multi_category_journal_share: 0.0,
            ..Self::default()
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("synth config: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        for (name, p) in [
            ("mixing", self.mixing),
            ("multidisciplinary_journal_share", self.multidisciplinary_journal_share),
            ("multi_category_journal_share", self.multi_category_journal_share),
            ("collaboration", self.collaboration),
            ("review_share", self.review_share),
            ("other_share", self.other_share),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} = {p} is not a probability"));
            }
        }
        if self.review_share + self.other_share > 1.0 {
            return bad("review_share + other_share exceeds 1".into());
        }
        if self.categories == 0 || self.docs_per_category == 0 || self.journals_per_category == 0 {
            return bad("categories, docs_per_category and journals_per_category must be positive".into());
        }
        if self.disciplines == 0 || self.domains == 0 || self.domains > self.disciplines {
            return bad("need 1 <= domains <= disciplines".into());
        }
        if self.multidisciplinary_journal_share > 0.0 && self.multidisciplinary_categories == 0 {
            return bad("multidisciplinary journals need a multidisciplinary category".into());
        }
        if self.first_year > self.last_year {
            return bad("first_year after last_year".into());
        }
        if self.refs_min > self.refs_max {
            return bad("refs_min exceeds refs_max".into());
        }
        if self.countries.is_empty() || self.countries.iter().any(|c| c.weight <= 0.0) {
            return bad("countries need positive weights".into());
        }
        if self.collaboration > 0.0 && self.countries.len() < 2 {
            return bad("collaboration needs at least two countries".into());
        }
        Ok(())
    }
}

struct Doc {
    id: String,
    year: i32,
    doc_type: DocType,
    journal: usize,
    category: usize,
    countries: Vec<(usize, f64)>,
    refs: Vec<usize>,
    citations: u64,
}

/// Generated tables, each with a version comment on its first line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthOutput {
    pub documents: String,
    pub journal_categories: String,
    pub edges: String,
    pub taxonomy: String,
    pub disciplines: String,
    pub ground_truth: String,
    pub edge_count: usize,
}

pub const FILES: [&str; 6] = [
    "documents.tsv",
    "journal_categories.tsv",
    "edges.tsv",
    "taxonomy.tsv",
    "disciplines.tsv",
    "ground_truth.tsv",
];

impl SynthOutput {
    fn tables(&self) -> [&str; 6] {
        [
            &self.documents,
            &self.journal_categories,
            &self.edges,
            &self.taxonomy,
            &self.disciplines,
            &self.ground_truth,
        ]
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (name, table) in FILES.iter().zip(self.tables()) {
            let path = dir.join(name);
            std::fs::write(&path, table).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }

    /// Builds the corpus directly, without going through files.
    pub fn build_corpus(&self) -> Result<(Corpus, LoadReport)> {
        let text = CorpusText {
            documents: self.documents.clone(),
            journal_categories: self.journal_categories.clone(),
            edges: self.edges.clone(),
            taxonomy: self.taxonomy.clone(),
            disciplines: self.disciplines.clone(),
        };
        parse_corpus(&CorpusPaths::in_dir("<synth>"), &text, LoadOptions::default())
    }

    /// Planted category per document id, in document order.
    pub fn planted(&self) -> Vec<(String, String)> {
        self.ground_truth
            .lines()
            .filter(|l| !l.starts_with('#'))
            .filter_map(|l| l.split_once('\t'))
            .map(|(d, c)| (d.to_string(), c.to_string()))
            .collect()
    }
}

pub fn category_code(i: usize) -> String {
    format!("C{i:03}")
}

pub fn discipline_code(i: usize) -> String {
    format!("D{i:02}")
}

/// Draws one element of `pick(0..n)` that passes `accept` and is not yet taken.
fn draw_one(
    rng: &mut ChaCha8Rng,
    n: usize,
    pick: impl Fn(usize) -> usize,
    accept: impl Fn(usize) -> bool,
    taken: &mut HashSet<usize>,
) -> Option<usize> {
    for _ in 0..64 {
        let x = pick(rng.random_range(0..n));
        if accept(x) && taken.insert(x) {
            return Some(x);
        }
    }
    // dense pools: fall back to an explicit candidate list
    let pool: Vec<usize> = (0..n).map(&pick).filter(|&x| accept(x) && !taken.contains(&x)).collect();
    let x = *pool.get(rng.random_range(0..pool.len().max(1)))?;
    taken.insert(x);
    Some(x)
}

pub fn generate(config: &SynthConfig) -> Result<SynthOutput> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let nc = config.categories;
    let n_multi = config.multidisciplinary_categories;

    // journals: (categories as indices; multidisciplinary ones come after nc)
    let mut journals: Vec<Vec<usize>> = Vec::with_capacity(nc * config.journals_per_category);
    for c in 0..nc {
        for _ in 0..config.journals_per_category {
            let cats = if rng.random_bool(config.multidisciplinary_journal_share) {
                vec![nc + rng.random_range(0..n_multi)]
            } else if nc > 1 && rng.random_bool(config.multi_category_journal_share) {
                vec![c, (c + 1) % nc]
            } else {
                vec![c]
            };
            journals.push(cats);
        }
    }

    let type_dist = WeightedIndex::new([
        (1.0 - config.review_share - config.other_share).max(0.0),
        config.review_share,
        config.other_share,
    ])
    .map_err(|e| Error::Config(format!("document type shares: {e}")))?;
    let country_dist = WeightedIndex::new(config.countries.iter().map(|c| c.weight))
        .map_err(|e| Error::Config(format!("country weights: {e}")))?;

    let mut docs: Vec<Doc> = Vec::with_capacity(nc * config.docs_per_category);
    for c in 0..nc {
        for _ in 0..config.docs_per_category {
            let year = rng.random_range(config.first_year..=config.last_year);
            let journal = c * config.journals_per_category + rng.random_range(0..config.journals_per_category);
            let doc_type = [DocType::Article, DocType::Review, DocType::Other][type_dist.sample(&mut rng)];
            let first = country_dist.sample(&mut rng);
            let countries = if rng.random_bool(config.collaboration) {
                let mut second = country_dist.sample(&mut rng);
                while second == first {
                    second = country_dist.sample(&mut rng);
                }
                let mut pair = vec![(first, 0.5), (second, 0.5)];
                pair.sort_by_key(|p| p.0);
                pair
            } else {
                vec![(first, 1.0)]
            };
            docs.push(Doc {
                id: String::new(),
                year,
                doc_type,
                journal,
                category: c,
                countries,
                refs: Vec::new(),
                citations: 0,
            });
        }
    }
    // document order: by year, then generation order
    docs.sort_by_key(|d| d.year);
    for (i, d) in docs.iter_mut().enumerate() {
        d.id = format!("d{i:07}");
    }

    // earlier[i] = number of documents strictly before doc i's year
    let mut earlier = vec![0usize; docs.len()];
    let mut start = 0;
    for i in 0..docs.len() {
        if docs[i].year != docs[start].year {
            start = i;
        }
        earlier[i] = start;
    }
    // per-category positions in document order
    let mut by_category: Vec<Vec<usize>> = vec![Vec::new(); nc];
    for (i, d) in docs.iter().enumerate() {
        by_category[d.category].push(i);
    }
    let first_year = docs.first().map(|d| d.year);
    for i in 0..docs.len() {
        if Some(docs[i].year) == first_year {
            continue;
        }
        let pool = earlier[i];
        let c = docs[i].category;
        let same = by_category[c].partition_point(|&j| j < pool);
        if same < config.refs_min || pool < config.refs_min {
            return Err(Error::Config(format!(
                "infeasible: document {} ({}) has {same} earlier documents in its category, refs_min is {}",
                docs[i].id, docs[i].year, config.refs_min
            )));
        }
        let k = rng.random_range(config.refs_min..=config.refs_max);
        let mut taken = HashSet::new();
        let mut refs = Vec::with_capacity(k);
        let others = pool - same;
        let members = &by_category[c][..same];
        for _ in 0..k {
            let got = if others > 0 && rng.random_bool(config.mixing) {
                draw_one(&mut rng, pool, |j| j, |j| docs[j].category != c, &mut taken)
            } else {
                draw_one(&mut rng, same, |p| members[p], |_| true, &mut taken)
            };
            refs.extend(got);
        }
        refs.sort_unstable();
        docs[i].refs = refs;
    }

    let mut in_degree = vec![0u64; docs.len()];
    for d in &docs {
        for &r in &d.refs {
            in_degree[r] += 1;
        }
    }
    for (i, d) in docs.iter_mut().enumerate() {
        d.citations = in_degree[i] + rng.random_range(0..=config.citation_noise);
    }

    Ok(render(config, &docs, &journals))
}

fn render(config: &SynthConfig, docs: &[Doc], journals: &[Vec<usize>]) -> SynthOutput {
    let nc = config.categories;
    let header = format!("# {GENERATOR_VERSION} seed={}\n", config.seed);
    let cat_code = |c: usize| {
        if c < nc {
            category_code(c)
        } else {
            format!("M{:02}", c - nc)
        }
    };

    let mut disciplines = header.clone();
    for d in 0..config.disciplines {
        let _ = writeln!(disciplines, "{}\tDOM{}", discipline_code(d), d % config.domains);
    }
    let mut taxonomy = header.clone();
    for c in 0..nc {
        let _ = writeln!(taxonomy, "{}\tCategory {c}\t0\t{}", category_code(c), discipline_code(c % config.disciplines));
    }
    for m in 0..config.multidisciplinary_categories {
        let _ = writeln!(taxonomy, "{}\tMultidisciplinary {m}\t1\t{}", cat_code(nc + m), discipline_code(m % config.disciplines));
    }

    let mut documents = header.clone();
    let mut journal_categories = header.clone();
    let mut edges = header.clone();
    let mut ground_truth = header;
    let mut edge_count = 0;
    for d in docs {
        let countries: Vec<String> = d
            .countries
            .iter()
            .map(|&(c, w)| format!("{}:{w}", config.countries[c].code))
            .collect();
        let _ = writeln!(
            documents,
            "{}\t{}\t{}\t{}\t{}\t{}",
            d.id,
            d.year,
            d.doc_type,
            format_args!("J{:05}", d.journal),
            d.citations,
            countries.join(";")
        );
        for &c in &journals[d.journal] {
            let _ = writeln!(journal_categories, "{}\t{}", d.id, cat_code(c));
        }
        for &r in &d.refs {
            let _ = writeln!(edges, "{}\t{}", d.id, docs[r].id);
            edge_count += 1;
        }
        let _ = writeln!(ground_truth, "{}\t{}", d.id, category_code(d.category));
    }
    SynthOutput {
        documents,
        journal_categories,
        edges,
        taxonomy,
        disciplines,
        ground_truth,
        edge_count,
    }
}
