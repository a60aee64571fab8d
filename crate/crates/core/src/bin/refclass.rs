use std::borrow::Cow;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use refclass::artifacts;
use refclass::corpus::{load_corpus, Corpus, CorpusPaths};
use refclass::indicators::{self, Classifications, Counting, DocFilter};
use refclass::labels::LabelWeights;
use refclass::migration::{self, Level, LevelView};
use refclass::pipeline::{run_pipeline, with_threads, PipelineConfig};
use refclass::quality::{self, PartitionView};
use refclass::reclassify::reclassify_categories;
use refclass::surgery::{assign_p_disciplines, run_surgery};
use refclass::synth::{self, SynthConfig};
use refclass::{Error, Result};

#[derive(Parser)]
#[command(name = "refclass", version, about = "Reference-based reclassification of citation corpora")]
struct Cli {
    /// Pipeline TOML config (for `synth`, a generator config); flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads, 0 for all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Skip one header line in every input file.
    #[arg(long, global = true)]
    header: bool,
    /// -v for progress, -vv for debug output.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic corpus with planted categories.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Reclassify every document from its references.
    Reclassify {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "assignments.tsv")]
        out: PathBuf,
        #[arg(long)]
        step1_runs: Option<u8>,
        /// Stage-count table.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Split and merge categories into a strict hierarchy.
    Taxonomy {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "assignments.tsv")]
        assignments: PathBuf,
        #[arg(long, default_value = "hierarchy.tsv")]
        out: PathBuf,
        /// Final assignments; defaults to assignments_final.tsv next to --out.
        #[arg(long)]
        final_out: Option<PathBuf>,
        #[arg(long)]
        split_threshold: Option<f64>,
        #[arg(long)]
        minor_share: Option<f64>,
        #[arg(long)]
        minor_docs: Option<usize>,
        #[arg(long)]
        small_threshold: Option<usize>,
    },
    /// Partition quality.
    Metrics {
        #[command(subcommand)]
        metric: Metric,
    },
    /// Migration matrix, or one flow's breakdown by source category.
    Migrations {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        final_side: FinalSide,
        #[arg(long, default_value = "discipline")]
        level: Level,
        /// FROM:TO discipline codes; writes the breakdown instead of the matrix.
        #[arg(long)]
        breakdown: Option<String>,
        /// Per-category exit and entry ratios.
        #[arg(long)]
        churn: Option<PathBuf>,
        /// Restrict to publication years FIRST:LAST.
        #[arg(long)]
        year_range: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Specialization ratios and normalized citation scores.
    Indicators {
        #[command(subcommand)]
        indicator: Indicator,
    },
    /// Every stage end to end, with a hashed manifest.
    Pipeline {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        step1_runs: Option<u8>,
        #[arg(long)]
        small_threshold: Option<usize>,
        #[arg(long)]
        min_refs: Option<usize>,
        #[arg(long)]
        counting: Option<Counting>,
    },
}

#[derive(Subcommand)]
enum Metric {
    Modularity {
        /// doc_id and class per line.
        #[arg(long)]
        partition: PathBuf,
        #[arg(long)]
        edges: PathBuf,
        #[arg(long, default_value = "modularity.csv")]
        out: PathBuf,
    },
    Accuracy {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        partition: PathBuf,
        #[arg(long)]
        min_refs: Option<usize>,
        #[arg(long, default_value = "accuracy.csv")]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum Indicator {
    Spec {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        sides: Sides,
        #[command(flatten)]
        filter: FilterArgs,
        #[arg(long, default_value = "spec.csv")]
        out: PathBuf,
    },
    Mncs {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        sides: Sides,
        #[command(flatten)]
        filter: FilterArgs,
        /// Add the D1, D2, DA and DB columns.
        #[arg(long)]
        decompose: bool,
        #[arg(long, default_value = "mncs.csv")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Input {
    /// Corpus directory.
    #[arg(long = "in")]
    dir: Option<PathBuf>,
}

#[derive(Args)]
struct FinalSide {
    #[arg(long, default_value = "hierarchy.tsv")]
    hierarchy: PathBuf,
    #[arg(long, default_value = "assignments_final.tsv")]
    assignments: PathBuf,
}

#[derive(Args)]
struct Sides {
    #[arg(long, default_value = "hierarchy.tsv")]
    hierarchy: PathBuf,
    #[arg(long, default_value = "assignments_final.tsv")]
    assignments_ost: PathBuf,
    /// One journal category per document, replacing the corpus weights.
    #[arg(long)]
    assignments_wos: Option<PathBuf>,
}

#[derive(Args)]
struct FilterArgs {
    #[arg(long = "year")]
    years: Vec<i32>,
    /// Comma-separated document types.
    #[arg(long, value_delimiter = ',')]
    doc_types: Vec<String>,
    #[arg(long)]
    counting: Option<Counting>,
}

struct Context {
    config: PipelineConfig,
}

impl Context {
    fn corpus(&self, input: &Input) -> Result<Corpus> {
        let dir = input.dir.as_deref().unwrap_or(&self.config.input);
        let (corpus, report) = load_corpus(&CorpusPaths::in_dir(dir), self.config.load_options())?;
        if report.warning_count() > 0 {
            log::warn!("load: {}", report.to_json());
        }
        Ok(corpus)
    }

    fn filter(&self, args: &FilterArgs) -> Result<DocFilter> {
        let mut f = self.config.mncs.clone();
        if !args.years.is_empty() {
            f.years = args.years.clone();
        }
        if !args.doc_types.is_empty() {
            f.doc_types = args
                .doc_types
                .iter()
                .map(|t| t.parse().map_err(Error::Config))
                .collect::<Result<_>>()?;
        }
        Ok(f)
    }
}

fn write(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::Io {
            path: parent.to_path_buf(),
            source: e,
        })?;
    }
    std::fs::write(path, content).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn year_range(raw: &str) -> Result<(i32, i32)> {
    let bad = || Error::Config(format!("year range `{raw}` is not FIRST:LAST"));
    let (a, b) = raw.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn run(cli: Cli) -> Result<()> {
    if let Command::Synth { out, seed } = &cli.command {
        let mut config = match &cli.config {
            Some(p) => SynthConfig::from_toml(
                &std::fs::read_to_string(p).map_err(|e| Error::Io {
                    path: p.clone(),
                    source: e,
                })?,
            )?,
            None => SynthConfig::default(),
        };
        if let Some(s) = seed {
            config.seed = *s;
        }
        let generated = synth::generate(&config)?;
        generated.write(out)?;
        log::info!("synth: {} edges written to {}", generated.edge_count, out.display());
        return Ok(());
    }

    let mut config = match &cli.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    if let Some(t) = cli.threads {
        config.threads = t;
    }
    config.header |= cli.header;
    let threads = config.threads;
    let ctx = Context { config };
    with_threads(threads, move || command(ctx, cli.command))?
}

fn command(mut ctx: Context, command: Command) -> Result<()> {
    let header = ctx.config.header;
    match command {
        Command::Synth { .. } => unreachable!("handled before config loading"),
        Command::Reclassify {
            input,
            out,
            step1_runs,
            report,
        } => {
            if let Some(n) = step1_runs {
                ctx.config.step1_runs = n;
            }
            ctx.config.validate()?;
            let corpus = ctx.corpus(&input)?;
            let (labels, cls) = reclassify_categories(&corpus, ctx.config.reclass())?;
            log::info!("reclassify: {:?}", cls.warnings);
            write(&out, &artifacts::assignments_tsv(&corpus, &labels, &cls))?;
            if let Some(r) = report {
                write(&r, &artifacts::stage_counts_tsv(&cls.stages))?;
            }
        }
        Command::Taxonomy {
            input,
            assignments,
            out,
            final_out,
            split_threshold,
            minor_share,
            minor_docs,
            small_threshold,
        } => {
            let s = &mut ctx.config.surgery;
            s.predominant_max = split_threshold.unwrap_or(s.predominant_max);
            s.minor_share = minor_share.unwrap_or(s.minor_share);
            s.minor_docs = minor_docs.unwrap_or(s.minor_docs);
            s.small_threshold = small_threshold.unwrap_or(s.small_threshold);
            ctx.config.validate()?;
            let corpus = ctx.corpus(&input)?;
            let labels = corpus.taxonomy().category_labels();
            let p_cat = artifacts::read_assignments(&assignments, header, &corpus, &labels)?;
            if let Some(d) = p_cat.iter().find(|&&l| labels.is_excluded(l)) {
                return Err(Error::Invalid(format!(
                    "assignments use the multidisciplinary category `{}`",
                    labels.code(*d)
                )));
            }
            let p_disc = assign_p_disciplines(&corpus, ctx.config.reclass())?;
            let surgery = run_surgery(&corpus, &p_cat, &p_disc.labels(), &ctx.config.surgery)?;
            log::info!("taxonomy: {:?}", surgery.warnings);
            write(&out, &artifacts::hierarchy_tsv(&surgery.hierarchy))?;
            let final_out = final_out.unwrap_or_else(|| out.with_file_name("assignments_final.tsv"));
            write(
                &final_out,
                &artifacts::final_assignments_tsv(&corpus, &surgery.hierarchy, &surgery.assignments),
            )?;
        }
        Command::Metrics {
            metric: Metric::Modularity { partition, edges, out },
        } => {
            let (view, graph, ids) = artifacts::read_partition_graph(&partition, &edges, header)?;
            view.require(&graph, |_| true, |d| ids[d].clone())?;
            let r = quality::modularity(&view, &graph)?;
            write(&out, &artifacts::modularity_csv(&[("partition", &r)])?)?;
        }
        Command::Metrics {
            metric:
                Metric::Accuracy {
                    input,
                    partition,
                    min_refs,
                    out,
                },
        } => {
            let corpus = ctx.corpus(&input)?;
            let rows = artifacts::read_tsv(&partition, header)?;
            let mut classes: Vec<Option<String>> = vec![None; corpus.len()];
            for (_, cols) in rows {
                if let (Some(d), Some(c)) = (cols.first().and_then(|id| corpus.doc_index(id)), cols.get(1)) {
                    classes[d] = Some(c.clone());
                }
            }
            let view = PartitionView::from_codes(classes.iter().map(|c| c.as_deref()));
            let gold = quality::select_gold_standard(&corpus, min_refs.unwrap_or(ctx.config.min_refs));
            let r = quality::accuracy(&view, corpus.graph(), &gold)?;
            write(&out, &artifacts::accuracy_csv(&[("partition", Some(&r))])?)?;
        }
        Command::Migrations {
            input,
            final_side,
            level,
            breakdown,
            churn,
            year_range: range,
            out,
        } => {
            let corpus = ctx.corpus(&input)?;
            let hierarchy = artifacts::read_hierarchy(&final_side.hierarchy, header)?;
            let assignments = artifacts::read_final_assignments(&final_side.assignments, header, &corpus, &hierarchy)?;
            let years = range.as_deref().map(year_range).transpose()?;
            let scope = |d: usize| {
                corpus.in_perimeter(d)
                    && years.is_none_or(|(a, b)| (a..=b).contains(&corpus.document(d).pub_year))
            };
            let view = LevelView::new(&corpus, &hierarchy, &assignments, level, scope)?;
            match breakdown {
                Some(flow) => {
                    let (from, to) = flow
                        .split_once(':')
                        .ok_or_else(|| Error::Config(format!("breakdown `{flow}` is not FROM:TO")))?;
                    let rows = migration::migration_breakdown(&corpus, &view, from, to)?;
                    write(&out, &artifacts::rows_csv(&rows)?)?;
                }
                None => write(&out, &migration::migration_matrix(&view).to_csv())?,
            }
            if let Some(path) = churn {
                write(&path, &artifacts::rows_csv(&migration::churn(&view))?)?;
            }
            if let Some(rate) = migration::stability_rate(&view) {
                log::info!("migrations: stability rate {rate}");
            }
        }
        Command::Indicators { indicator } => {
            let (input, sides, filter, out) = match &indicator {
                Indicator::Spec {
                    input,
                    sides,
                    filter,
                    out,
                }
                | Indicator::Mncs {
                    input,
                    sides,
                    filter,
                    out,
                    ..
                } => (input, sides, filter, out),
            };
            let doc_filter = ctx.filter(filter)?;
            let counting = filter.counting.unwrap_or(ctx.config.counting);
            let corpus = ctx.corpus(input)?;
            let hierarchy = artifacts::read_hierarchy(&sides.hierarchy, header)?;
            let ost = artifacts::read_final_assignments(&sides.assignments_ost, header, &corpus, &hierarchy)?;
            let wos = match &sides.assignments_wos {
                Some(path) => {
                    let labels = corpus.taxonomy().category_labels();
                    let hard = artifacts::read_assignments(path, header, &corpus, &labels)?;
                    Cow::Owned(LabelWeights::from_rows(hard.into_iter().map(|l| [(l, 1.0)])))
                }
                None => Cow::Borrowed(corpus.category_weights()),
            };
            let cls = Classifications::with_journal_side(&corpus, &hierarchy, &ost, wos, counting)?;
            match indicator {
                Indicator::Spec { .. } => {
                    let scope: Vec<usize> = (0..corpus.len()).filter(|&d| doc_filter.keeps(&corpus, d)).collect();
                    let rows = indicators::specialization(&indicators::discipline_sets(&cls, &scope));
                    write(out, &artifacts::rows_csv(&rows)?)?;
                }
                Indicator::Mncs { decompose, .. } => {
                    let report = indicators::mncs(&cls, &doc_filter);
                    log::info!("indicators: {:?}", report.warnings);
                    let csv = if decompose {
                        artifacts::rows_csv(&report.rows)?
                    } else {
                        artifacts::rows_csv(&report.rows.iter().map(artifacts::MncsSummary::from).collect::<Vec<_>>())?
                    };
                    write(out, &csv)?;
                }
            }
        }
        Command::Pipeline {
            input,
            out,
            step1_runs,
            small_threshold,
            min_refs,
            counting,
        } => {
            let c = &mut ctx.config;
            c.input = input.unwrap_or(c.input.clone());
            c.output = out.unwrap_or(c.output.clone());
            c.step1_runs = step1_runs.unwrap_or(c.step1_runs);
            c.surgery.small_threshold = small_threshold.unwrap_or(c.surgery.small_threshold);
            c.min_refs = min_refs.unwrap_or(c.min_refs);
            c.counting = counting.unwrap_or(c.counting);
            let manifest = run_pipeline(c)?;
            log::info!("pipeline: {} artifacts in {}", manifest.artifacts.len(), c.output.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
