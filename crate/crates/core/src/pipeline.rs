//! End-to-end run: load, reclassify, taxonomy surgery, quality metrics,
//! migrations and indicators, with a hashed manifest of every output.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::artifacts;
use crate::corpus::{load_corpus, Corpus, CorpusPaths, LoadOptions};
use crate::indicators::{discipline_sets, mncs, specialization, Classifications, Counting, DocFilter};
use crate::migration::{migration_matrix, Level, LevelView};
use crate::quality::{accuracy, modularity, select_gold_standard, PartitionView};
use crate::reclassify::{reclassify_categories, ReclassConfig};
use crate::surgery::{assign_p_disciplines, run_surgery, SurgeryConfig};
use crate::{Error, Result};

/// Output files of a full run, in production order.
pub const ARTIFACTS: [&str; 9] = [
    "assignments.tsv",
    "stage_counts.tsv",
    "hierarchy.tsv",
    "assignments_final.tsv",
    "modularity.csv",
    "accuracy.csv",
    "matrix.csv",
    "spec.csv",
    "mncs.csv",
];

pub const MANIFEST: &str = "manifest.json";
const PARTIAL: &str = ".partial";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub output: PathBuf,
    pub step1_runs: u8,
    pub surgery: SurgeryConfig,
    /// Minimum in-corpus references of a gold-standard paper.
    pub min_refs: usize,
    pub mncs: DocFilter,
    pub counting: Counting,
    pub header: bool,
    /// Worker threads; 0 lets the runtime decide.
    pub threads: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            input: PathBuf::from("."),
            output: PathBuf::from("out"),
            step1_runs: ReclassConfig::default().step1_runs,
            surgery: SurgeryConfig::default(),
            min_refs: 100,
            mncs: DocFilter::default(),
            counting: Counting::Fractional,
            header: false,
            threads: 0,
        }
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=32).contains(&self.step1_runs) {
            return Err(Error::Config(format!("step1_runs = {} outside 1..=32", self.step1_runs)));
        }
        if self.mncs.doc_types.is_empty() {
            return Err(Error::Config("mncs.doc_types is empty".into()));
        }
        self.surgery.validate()
    }

    pub fn reclass(&self) -> ReclassConfig {
        ReclassConfig {
            step1_runs: self.step1_runs,
        }
    }

    pub fn load_options(&self) -> LoadOptions {
        LoadOptions { header: self.header }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub generator: String,
    pub artifacts: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes") + "\n"
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Runs `f` on a pool of `threads` workers (0 = runtime default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Writes artifacts under a `.partial` suffix; [`Outputs::commit`] renames
/// them once every stage has succeeded.
struct Outputs {
    dir: PathBuf,
    written: Vec<ManifestEntry>,
}

impl Outputs {
    fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for name in ARTIFACTS.iter().chain([&MANIFEST]) {
            for path in [dir.join(name), dir.join(format!("{name}{PARTIAL}"))] {
                if path.exists() {
                    std::fs::remove_file(&path).map_err(|e| Error::io(&path, e))?;
                }
            }
        }
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, content: &str) -> Result<()> {
        let path = self.dir.join(format!("{name}{PARTIAL}"));
        std::fs::write(&path, content).map_err(|e| Error::io(&path, e))?;
        self.written.push(ManifestEntry {
            name: name.to_string(),
            bytes: content.len() as u64,
            sha256: sha256_hex(content.as_bytes()),
        });
        Ok(())
    }

    fn commit(self) -> Result<Manifest> {
        for e in &self.written {
            let from = self.dir.join(format!("{}{PARTIAL}", e.name));
            let to = self.dir.join(&e.name);
            std::fs::rename(&from, &to).map_err(|err| Error::io(&to, err))?;
        }
        let manifest = Manifest {
            generator: format!("refclass {}", env!("CARGO_PKG_VERSION")),
            artifacts: self.written,
        };
        let path = self.dir.join(MANIFEST);
        std::fs::write(&path, manifest.to_json()).map_err(|e| Error::io(&path, e))?;
        Ok(manifest)
    }
}

/// Loads the input directory and runs every stage on it.
pub fn run_pipeline(config: &PipelineConfig) -> Result<Manifest> {
    config.validate()?;
    with_threads(config.threads, || {
        let (corpus, report) =
            load_corpus(&CorpusPaths::in_dir(&config.input), config.load_options()).map_err(|e| e.in_stage("load"))?;
        if report.warning_count() > 0 {
            log::warn!("load: {}", report.to_json());
        }
        log::info!("load: {} documents, {} edges", report.documents, report.edges);
        run_stages(&corpus, config)
    })?
}

/// Every stage after loading, on an already built corpus.
pub fn run_stages(corpus: &Corpus, config: &PipelineConfig) -> Result<Manifest> {
    let mut out = Outputs::new(&config.output)?;

    let (labels, p_cat) = reclassify_categories(corpus, config.reclass()).map_err(|e| e.in_stage("reclassify"))?;
    log::info!("reclassify: {:?}", p_cat.warnings);
    out.write(ARTIFACTS[0], &artifacts::assignments_tsv(corpus, &labels, &p_cat))?;
    out.write(ARTIFACTS[1], &artifacts::stage_counts_tsv(&p_cat.stages))?;

    let p_disc = assign_p_disciplines(corpus, config.reclass()).map_err(|e| e.in_stage("taxonomy"))?;
    let surgery = run_surgery(corpus, &p_cat.labels(), &p_disc.labels(), &config.surgery)
        .map_err(|e| e.in_stage("taxonomy"))?;
    log::info!(
        "taxonomy: {} final categories, {} splits, {} merges, {:?}",
        surgery.hierarchy.len(),
        surgery.splits.len(),
        surgery.merges.len(),
        surgery.warnings
    );
    out.write(ARTIFACTS[2], &artifacts::hierarchy_tsv(&surgery.hierarchy))?;
    out.write(
        ARTIFACTS[3],
        &artifacts::final_assignments_tsv(corpus, &surgery.hierarchy, &surgery.assignments),
    )?;

    // quality of three partitions over corpus Y
    let metrics = || -> Result<(String, String)> {
        let y = |d: usize| corpus.in_perimeter(d);
        let p_codes = p_cat.labels();
        let views = [
            ("journal", PartitionView::journal_categories(corpus).restrict(y)),
            (
                "reclassified",
                PartitionView::new(labels.codes().to_vec(), p_codes.iter().map(|&l| Some(l)).collect()).restrict(y),
            ),
            (
                "final",
                PartitionView::new(
                    surgery.hierarchy.entries().iter().map(|e| e.code.clone()).collect(),
                    surgery.assignments.iter().map(|&a| Some(a)).collect(),
                )
                .restrict(y),
            ),
        ];
        let gold = select_gold_standard(corpus, config.min_refs);
        let mut h = Vec::new();
        let mut he = Vec::new();
        for (name, view) in &views {
            h.push((*name, modularity(view, corpus.graph())?));
            he.push((
                *name,
                match accuracy(view, corpus.graph(), &gold) {
                    Ok(r) => Some(r),
                    Err(Error::EmptyGoldSet) => None,
                    Err(e) => return Err(e),
                },
            ));
        }
        if he.iter().any(|r| r.1.is_none()) {
            log::warn!("metrics: no usable gold-standard paper with at least {} references", config.min_refs);
        }
        let h_rows: Vec<_> = h.iter().map(|(n, r)| (*n, r)).collect();
        let he_rows: Vec<_> = he.iter().map(|(n, r)| (*n, r.as_ref())).collect();
        Ok((artifacts::modularity_csv(&h_rows)?, artifacts::accuracy_csv(&he_rows)?))
    };
    let (h_csv, he_csv) = metrics().map_err(|e| e.in_stage("metrics"))?;
    out.write(ARTIFACTS[4], &h_csv)?;
    out.write(ARTIFACTS[5], &he_csv)?;

    let view = LevelView::new(corpus, &surgery.hierarchy, &surgery.assignments, Level::Discipline, |d| {
        corpus.in_perimeter(d)
    })
    .map_err(|e| e.in_stage("migrations"))?;
    out.write(ARTIFACTS[6], &migration_matrix(&view).to_csv())?;

    let indicators = || -> Result<(String, String)> {
        let cls = Classifications::new(corpus, &surgery.hierarchy, &surgery.assignments, config.counting)?;
        let scope: Vec<usize> = (0..corpus.len()).filter(|&d| config.mncs.keeps(corpus, d)).collect();
        let spec = specialization(&discipline_sets(&cls, &scope));
        let report = mncs(&cls, &config.mncs);
        log::info!("indicators: {:?}", report.warnings);
        Ok((artifacts::rows_csv(&spec)?, artifacts::rows_csv(&report.rows)?))
    };
    let (spec_csv, mncs_csv) = indicators().map_err(|e| e.in_stage("indicators"))?;
    out.write(ARTIFACTS[7], &spec_csv)?;
    out.write(ARTIFACTS[8], &mncs_csv)?;

    out.commit()
}
