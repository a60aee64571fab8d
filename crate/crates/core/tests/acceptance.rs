//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs without the libtest harness so the lines always show.

mod support;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use refclass::corpus::{Corpus, DocIndex};
use refclass::indicators::{
    discipline_sets, mncs, specialization, Classifications, Counting, DocFilter, SpecializationRow, ALL_DISCIPLINES,
    WORLD,
};
use refclass::migration::{churn, stability_rate, Level, LevelView};
use refclass::quality::{accuracy, herfindahl, modularity};
use refclass::reclassify::{reclassify_categories, ReclassConfig};
use refclass::surgery::{DefaultTaxonomy, SurgeryConfig};
use refclass::synth::{generate, SynthConfig, SynthOutput};
use support::{
    classify_and_cut, gold_fixture, gold_graph, graph, naive_reclassify, newman_modularity, no_merge, partition_view,
    random_graph, SmallCorpus, CODES,
};

type Outcome = Result<String, String>;
type Criterion = (u8, &'static str, fn() -> Outcome, u64);

/// Negated on purpose: a NaN comparison fails the check.
macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol
}

/// (entity, discipline, new_ost, old_wos, wos, A, B, ratio) as published,
/// with the world rows of each discipline last.
type PublishedRow = (&'static str, &'static str, f64, f64, f64, f64, f64, f64);

const TABLES: [PublishedRow; 10] = [
    ("JAPAN", "03", 14_245.7, 36_361.54, 73_483.88, 0.19, 0.49, 0.81),
    ("KOREA", "03", 10_476.0, 24_248.79, 46_867.38, 0.22, 0.52, 0.82),
    ("TAIWAN", "03", 4_101.7, 8_475.84, 14_467.26, 0.28, 0.59, 0.81),
    ("BRAZIL", "03", 27_728.6, 34_755.65, 134_909.64, 0.21, 0.26, 1.06),
    ("IRAN", "SS", 7_068.0, 13_124.9, 24_641.9, 0.29, 0.53, 0.83),
    ("CANADA", "SS", 22_498.2, 40_039.7, 106_952.0, 0.21, 0.37, 0.92),
    ("BRAZIL", "SS", 10_393.6, 28_059.5, 86_408.1, 0.12, 0.32, 0.88),
    ("CHINA", "SS", 77_376.1, 51_527.8, 200_841.5, 0.39, 0.26, 1.21),
    ("WORLD", "03", 574_714.9, 812_085.38, 2_121_009.45, 0.27, 0.38, 1.00),
    ("WORLD", "SS", 664_703.2, 894_063.6, 2_866_640.4, 0.23, 0.31, 1.00),
];

fn table_arithmetic() -> Outcome {
    let world = |disc: &str| TABLES.iter().find(|r| r.0 == "WORLD" && r.1 == disc).unwrap();
    let mut highlighted = Vec::new();
    for &(entity, disc, new_ost, old_wos, wos, a, b, ratio) in &TABLES {
        let w = world(disc);
        let r = SpecializationRow::from_counts(entity, disc, new_ost, old_wos, wos, w.2, w.3, w.4)
            .ok_or("empty journal-side discipline")?;
        ensure!(close(r.a_entity, a, 0.005), "{entity} {disc}: A = {:.4}, published {a}", r.a_entity);
        ensure!(close(r.b_entity, b, 0.005), "{entity} {disc}: B = {:.4}, published {b}", r.b_entity);
        ensure!(close(r.rho_approx, ratio, 0.01), "{entity} {disc}: ratio = {:.4}, published {ratio}", r.rho_approx);
        if (entity, disc) == ("BRAZIL", "03") || (entity, disc) == ("CHINA", "SS") {
            highlighted.push(format!("{entity} {disc} A={:.3} B={:.3} ratio={:.3}", r.a_entity, r.b_entity, r.rho_approx));
        }
    }
    Ok(format!("{}; all 10 rows within rounding", highlighted.join(", ")))
}

fn count_identity() -> Outcome {
    let def = DefaultTaxonomy::load().map_err(|e| e.to_string())?;
    let tax = &def.taxonomy;
    let total = tax.categories().len();
    let multi = tax.multidisciplinary_codes().count();
    let extra: usize = def.splits.iter().map(|(_, discs)| discs.len() - 1).sum();
    let merged = def.merges.len();
    let h = def.hierarchy().map_err(|e| e.to_string())?;
    ensure!(
        (total, multi, extra, merged) == (254, 10, 12, 14),
        "inputs {total} - {multi} + {extra} - {merged}"
    );
    ensure!(h.len() == 242, "{} final categories", h.len());
    Ok(format!("{total} - {multi} + {extra} - {merged} = {}", h.len()))
}

fn modularity_oracle() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..1000u64 {
        let (n, edges, classes) = random_graph(seed, 1 + (seed % 8) as usize);
        let g = graph(n, &edges);
        let (view, _) = partition_view(&classes);
        let got = modularity(&view, &g).map_err(|e| e.to_string())?.h;
        let want = newman_modularity(n, &edges, &classes);
        worst = worst.max((got - want).abs());
        ensure!((got - want).abs() <= 1e-12, "graph {seed}: {got} vs {want}");
        let (one, _) = partition_view(&vec![0; n]);
        let h = modularity(&one, &g).map_err(|e| e.to_string())?.h;
        ensure!(h == 0.0, "graph {seed}: one class scores {h}");
    }
    Ok(format!("1000 graphs, max |diff| {worst:.1e}, one-class partitions exactly 0"))
}

fn accuracy_arithmetic() -> Outcome {
    let fixtures = [(vec![7u64], 1.0), (vec![2, 2, 2, 2], 0.25), (vec![3, 1], 0.625)];
    for (counts, want) in &fixtures {
        ensure!(herfindahl(counts) == Some(*want), "HE{counts:?} = {:?}", herfindahl(counts));
    }
    let fixture = gold_fixture();
    let (view, g, gold) = gold_graph(&fixture.papers());
    let r = accuracy(&view, &g, &gold).map_err(|e| e.to_string())?;
    ensure!(r.n == 100, "{} gold papers", r.n);
    ensure!(close(r.he, fixture.mean, 1e-12), "mean {} vs {}", r.he, fixture.mean);
    let se = r.std_error.ok_or("no standard error")?;
    ensure!(close(se, fixture.std_error, 1e-12), "std error {se} vs {}", fixture.std_error);
    ensure!(close(r.sd.unwrap_or(f64::NAN), fixture.sd, 1e-12), "sd {:?} vs {}", r.sd, fixture.sd);
    Ok(format!("HE 1.0/0.25/0.625, mean {:.6} and std error {se:.6} match the script", r.he))
}

fn reclassifier_oracle() -> Outcome {
    let (mut ties, mut lexicographic, mut fallback, mut no_peers, mut errors) = (0, 0, 0, 0, 0);
    for seed in 0..500u64 {
        let c = SmallCorpus::random(seed);
        let engine = reclassify_categories(&c.build(), ReclassConfig::default()).map(|(labels, cls)| {
            cls.table
                .iter()
                .map(|a| {
                    let a = a.unwrap();
                    (labels.code(a.label).to_string(), a.provenance.to_string())
                })
                .collect::<Vec<_>>()
        });
        match (engine, naive_reclassify(&c, 3)) {
            (Ok(got), Ok((want, trace))) => {
                let want: Vec<_> = want.into_iter().map(|(l, p)| (CODES[l].to_string(), p)).collect();
                if let Some(d) = (0..got.len()).find(|&d| got[d] != want[d]) {
                    return Err(format!("corpus {seed}, document {}: {:?} vs {:?}", SmallCorpus::id(d), got[d], want[d]));
                }
                ties += trace.run4_ties;
                lexicographic += trace.lexicographic;
                fallback += trace.fallback;
                no_peers += trace.fallback_without_peers;
            }
            (Err(_), Err(_)) => errors += 1,
            (got, want) => return Err(format!("corpus {seed}: engine {got:?}, oracle {want:?}")),
        }
    }
    ensure!(ties > 0 && fallback > 0, "coverage: {ties} ties, {fallback} fallbacks");
    Ok(format!(
        "500 corpora; {ties} tie-breaks ({lexicographic} lexicographic), {fallback} all-multidisciplinary fallbacks \
         ({no_peers} without peers), {errors} unclassifiable corpora rejected by both"
    ))
}

fn y_docs(corpus: &Corpus) -> Vec<DocIndex> {
    (0..corpus.len()).filter(|&d| corpus.in_perimeter(d)).collect()
}

fn planted_recovery() -> Outcome {
    let config = SynthConfig {
        docs_per_category: 3400,
        ..SynthConfig::separable(21)
    };
    let corpus = generate(&config).map_err(|e| e.to_string())?.build_corpus().map_err(|e| e.to_string())?.0;
    let s = classify_and_cut(&corpus, &SurgeryConfig::default());
    ensure!(s.merges.is_empty() && s.splits.is_empty(), "{} merges, {} splits", s.merges.len(), s.splits.len());
    let view = LevelView::new(&corpus, &s.hierarchy, &s.assignments, Level::Category, |d| corpus.in_perimeter(d))
        .map_err(|e| e.to_string())?;
    let rate = stability_rate(&view).ok_or("empty scope")?;
    ensure!(rate == 1.0, "stability {rate}");
    let rows = churn(&view);
    for r in &rows {
        ensure!(r.ratio_j == Some(0.0) && r.ratio_p == Some(0.0), "{}: {:?} {:?}", r.code, r.ratio_j, r.ratio_p);
    }
    Ok(format!("{} documents, stability 1.0, ratios 0 on all {} categories", corpus.len(), rows.len()))
}

fn synth(seed: u64, mixing: f64) -> SynthOutput {
    let config = SynthConfig {
        seed,
        categories: 6,
        disciplines: 4,
        domains: 2,
        docs_per_category: 150,
        mixing,
        refs_min: 3,
        refs_max: 9,
        ..SynthConfig::default()
    };
    generate(&config).expect("generator config is feasible")
}

fn mncs_identities() -> Outcome {
    let filter = DocFilter {
        years: vec![],
        ..DocFilter::default()
    };
    let (mut cells, mut worst_d, mut worst_world) = (0, 0.0f64, 0.0f64);
    for seed in 0..5 {
        let mut out = synth(seed, 0.1 * seed as f64);
        let corpus = out.build_corpus().map_err(|e| e.to_string())?.0;
        let s = classify_and_cut(&corpus, &no_merge());
        let cls = Classifications::new(&corpus, &s.hierarchy, &s.assignments, Counting::Fractional)
            .map_err(|e| e.to_string())?;
        let report = mncs(&cls, &filter);
        for r in &report.rows {
            if let (Some(d), Some(d1), Some(d2)) = (r.d, r.d1, r.d2) {
                worst_d = worst_d.max((d - d1 - d2).abs());
                ensure!(close(d, d1 + d2, 1e-9), "{} {}: D {d} vs {}", r.entity, r.discipline, d1 + d2);
                cells += 1;
            }
        }
        let world = report
            .rows
            .iter()
            .find(|r| r.entity == WORLD && r.discipline == ALL_DISCIPLINES)
            .ok_or("no world row")?;
        for v in [world.mncs_wos, world.mncs_ost] {
            let v = v.ok_or("empty world")?;
            worst_world = worst_world.max((v - 1.0).abs());
            ensure!(close(v, 1.0, 1e-9), "overall world MNCS {v}");
        }
        // per final category, and per journal category on the journal side
        let mut ost: BTreeMap<u32, (f64, f64)> = BTreeMap::new();
        let mut wos: BTreeMap<u32, (f64, f64)> = BTreeMap::new();
        for d in (0..corpus.len()).filter(|&d| filter.keeps(&corpus, d)) {
            let doc = corpus.document(d);
            let c = doc.citation_count as f64;
            let mu = report.normalizers.ost[&(s.assignments[d], doc.pub_year)];
            if mu > 0.0 {
                let cell = ost.entry(s.assignments[d]).or_default();
                cell.0 += c / mu;
                cell.1 += 1.0;
            }
            for &(cat, w) in corpus.category_weights().row(d) {
                let mu = report.normalizers.wos[&(cat, doc.pub_year)];
                if mu > 0.0 {
                    let cell = wos.entry(cat).or_default();
                    cell.0 += w * c / mu;
                    cell.1 += w;
                }
            }
        }
        for (sum, n) in ost.values().chain(wos.values()) {
            worst_world = worst_world.max((sum / n - 1.0).abs());
            ensure!(close(sum / n, 1.0, 1e-9), "category world MNCS {}", sum / n);
        }
        // doubling every citation count
        let before = report.rows;
        out.documents = double_citations(&out.documents);
        let doubled = out.build_corpus().map_err(|e| e.to_string())?.0;
        let cls = Classifications::new(&doubled, &s.hierarchy, &s.assignments, Counting::Fractional)
            .map_err(|e| e.to_string())?;
        ensure!(mncs(&cls, &filter).rows == before, "seed {seed}: MNCS moved under doubled citations");
    }
    ensure!(cells >= 100, "only {cells} defined cells");
    Ok(format!(
        "{cells} cells, max |D - D1 - D2| {worst_d:.1e}, max |world - 1| {worst_world:.1e}, x2 citations bitwise equal"
    ))
}

/// Doubles the citation column of a documents file.
fn double_citations(documents: &str) -> String {
    let mut out = String::new();
    for line in documents.lines() {
        let mut cols: Vec<String> = line.split('\t').map(str::to_string).collect();
        if let Some(c) = cols.get(4).and_then(|c| c.parse::<u64>().ok()) {
            cols[4] = (2 * c).to_string();
        }
        out.push_str(&cols.join("\t"));
        out.push('\n');
    }
    out
}

fn set_identity() -> Outcome {
    let (mut cells, mut small, mut worst) = (0, 0, 0.0f64);
    for seed in 0..8 {
        let mixing = if seed % 2 == 0 { 0.01 } else { 0.3 };
        let corpus = synth(seed, mixing).build_corpus().map_err(|e| e.to_string())?.0;
        let s = classify_and_cut(&corpus, &no_merge());
        for counting in [Counting::Fractional, Counting::Whole] {
            let cls =
                Classifications::new(&corpus, &s.hierarchy, &s.assignments, counting).map_err(|e| e.to_string())?;
            let table = discipline_sets(&cls, &y_docs(&corpus));
            for e in 0..table.entities.len() {
                for d in 0..table.disciplines.len() {
                    ensure!(table.get(e, d).identity_holds(), "{} {}", table.entities[e], table.disciplines[d]);
                    cells += 1;
                }
            }
            for r in specialization(&table) {
                if [r.a_entity, r.b_entity, r.a_world, r.b_world].iter().all(|&x| x <= 0.05) {
                    ensure!(r.epsilon.abs() <= 0.01, "{} {}: epsilon {}", r.entity, r.discipline, r.epsilon);
                    worst = worst.max(r.epsilon.abs());
                    small += 1;
                }
            }
        }
    }
    ensure!(small > 0, "no row with A, B <= 0.05");
    Ok(format!("identity exact on {cells} cells; {small} small-migration rows, max |epsilon| {worst:.1e}"))
}

const SCALE: &str = "seed = 7
categories = 20
disciplines = 6
domains = 3
docs_per_category = 5000
first_year = 2010
last_year = 2020
refs_min = 14
refs_max = 31
";

fn refclass(dir: &Path, args: &[&str]) -> Result<Duration, String> {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_refclass"))
        .current_dir(dir)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    Ok(start.elapsed())
}

fn determinism_and_scale() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir = tmp.path();
    std::fs::write(dir.join("scale.toml"), SCALE).map_err(|e| e.to_string())?;
    refclass(dir, &["synth", "--config", "scale.toml", "--out", "corpus"])?;
    let edges = std::fs::read_to_string(dir.join("corpus/edges.tsv")).map_err(|e| e.to_string())?;
    let edges = edges.lines().filter(|l| !l.starts_with('#')).count();
    ensure!(edges >= 2_000_000, "{edges} edges");
    let mut manifests = Vec::new();
    let mut slowest = Duration::ZERO;
    for (run, threads) in [("a", "1"), ("b", "4"), ("c", "4")] {
        let out = format!("run_{run}");
        let t = refclass(dir, &["pipeline", "--in", "corpus", "--out", &out, "--threads", threads, "--min-refs", "25"])?;
        ensure!(t < Duration::from_secs(60), "pipeline took {t:?}");
        slowest = slowest.max(t);
        manifests.push(std::fs::read(dir.join(&out).join("manifest.json")).map_err(|e| e.to_string())?);
    }
    ensure!(manifests[0] == manifests[1], "manifest differs between 1 and 4 threads");
    ensure!(manifests[1] == manifests[2], "manifest differs between two runs");
    Ok(format!(
        "100000 documents, {edges} edges, slowest run {:.1}s, manifests identical (1 vs 4 threads, repeat)",
        slowest.as_secs_f64()
    ))
}

fn main() -> ExitCode {
    // (number, name, check, time budget in seconds)
    let criteria: [Criterion; 9] = [
        (1, "specialization table arithmetic", table_arithmetic, 1),
        (2, "default taxonomy count identity", count_identity, 1),
        (3, "modularity oracle", modularity_oracle, 30),
        (4, "accuracy arithmetic", accuracy_arithmetic, 5),
        (5, "reclassifier oracle equivalence", reclassifier_oracle, 60),
        (6, "planted structure recovery", planted_recovery, 60),
        (7, "MNCS identities", mncs_identities, 60),
        (8, "discipline set identity and first-order ratio", set_identity, 60),
        (9, "determinism and scale", determinism_and_scale, 300),
    ];
    let mut failed = 0;
    for (n, name, check, budget) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed().as_secs_f64();
        let outcome = outcome.and_then(|detail| {
            if elapsed < budget as f64 {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {elapsed:.1}s, budget {budget}s"))
            }
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {n} ({name}): {detail} [{elapsed:.2}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {n} ({name}): {why} [{elapsed:.2}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion/criteria failed");
        ExitCode::FAILURE
    }
}
