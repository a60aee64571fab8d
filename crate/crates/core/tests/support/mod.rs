//! Independent oracles and random fixtures shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use refclass::corpus::{CategorySpec, CitationGraph, Corpus, CorpusBuilder, DocType, NewDocument, Taxonomy};
use refclass::quality::PartitionView;

/// Sorted codes; the last `MULTI` are multidisciplinary.
pub const CODES: [&str; 5] = ["A", "B", "C", "M", "N"];
pub const MULTI: usize = 2;

pub fn excluded(label: usize) -> bool {
    label >= CODES.len() - MULTI
}

/// A tiny corpus in plain form: category indices and references per doc.
#[derive(Clone, Debug)]
pub struct SmallCorpus {
    pub cats: Vec<Vec<usize>>,
    pub refs: Vec<Vec<usize>>,
    pub other_type: Vec<bool>,
}

impl SmallCorpus {
    /// Up to 20 documents. `tie_mode` restricts regular labels to A and B
    /// and favours even reference counts so exact ties are frequent.
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=20);
        let tie_mode = seed.is_multiple_of(3);
        let regular = if tie_mode { 2 } else { 3 };
        let mut cats = Vec::with_capacity(n);
        for _ in 0..n {
            let pool: Vec<usize> = if rng.random_bool(0.25) {
                (CODES.len() - MULTI..CODES.len()).collect()
            } else {
                let mut p: Vec<usize> = (0..regular).collect();
                if rng.random_bool(0.3) {
                    p.push(3 + rng.random_range(0..MULTI));
                }
                p
            };
            let k = rng.random_range(1..=pool.len().min(3));
            let mut chosen = Vec::new();
            while chosen.len() < k {
                let c = pool[rng.random_range(0..pool.len())];
                if !chosen.contains(&c) {
                    chosen.push(c);
                }
            }
            chosen.sort_unstable();
            cats.push(chosen);
        }
        let refs = (0..n)
            .map(|d| {
                if n == 1 {
                    return Vec::new();
                }
                let k = if tie_mode { 2 * rng.random_range(0..=2) } else { rng.random_range(0..=5) };
                let mut r = Vec::new();
                for _ in 0..k {
                    let t = rng.random_range(0..n);
                    if t != d {
                        r.push(t);
                    }
                }
                r.sort_unstable();
                r.dedup();
                r
            })
            .collect();
        let other_type = (0..n).map(|_| rng.random_bool(0.15)).collect();
        Self { cats, refs, other_type }
    }

    pub fn len(&self) -> usize {
        self.cats.len()
    }

    pub fn id(d: usize) -> String {
        format!("p{d:02}")
    }

    pub fn build(&self) -> Corpus {
        let categories = CODES
            .iter()
            .enumerate()
            .map(|(i, c)| CategorySpec {
                code: c.to_string(),
                name: c.to_string(),
                multidisciplinary: excluded(i),
                disciplines: vec!["01".into()],
            })
            .collect();
        let tax = Taxonomy::new(categories, vec![("01".into(), "LIFE".into())]).unwrap();
        let mut b = CorpusBuilder::new(tax);
        let ids: Vec<String> = (0..self.len()).map(Self::id).collect();
        for d in 0..self.len() {
            b.add_document(NewDocument {
                id: &ids[d],
                pub_year: 2019,
                doc_type: if self.other_type[d] { DocType::Other } else { DocType::Article },
                journal_id: "j",
                citation_count: 0,
                countries: vec![],
            })
            .unwrap();
            for &c in &self.cats[d] {
                b.add_category(&ids[d], CODES[c], None).unwrap();
            }
        }
        for (d, refs) in self.refs.iter().enumerate() {
            for &r in refs {
                b.add_edge(&ids[d], &ids[r]);
            }
        }
        b.build().unwrap().0
    }
}

/// What the naive cascade did, for coverage accounting.
#[derive(Clone, Debug, Default)]
pub struct OracleTrace {
    pub run4_ties: usize,
    pub lexicographic: usize,
    pub fallback: usize,
    pub fallback_without_peers: usize,
    pub reassigned_in_later_runs: usize,
}

/// `(label, provenance)` per document, provenance rendered like the engine
/// (`Run3`, `FewRefsRule`, `MultiDFallback`).
pub type OracleTable = Vec<(usize, String)>;

/// Straight reimplementation of the cascade: every histogram recomputed
/// from scratch, weights held as exact multiples of 1/6.
pub fn naive_reclassify(c: &SmallCorpus, step1_runs: u8) -> Result<(OracleTable, OracleTrace), String> {
    let n = c.len();
    let labels = CODES.len();
    let mut trace = OracleTrace::default();
    // weights times six; rows hold 1, 2 or 3 labels
    let w6 = |d: usize, l: usize| -> i64 {
        if c.cats[d].contains(&l) {
            6 / c.cats[d].len() as i64
        } else {
            0
        }
    };
    let size6 = |l: usize| -> i64 { (0..n).map(|d| w6(d, l)).sum() };
    let in_z = |d: usize| c.refs[d].len() >= 2;

    let hist = |d: usize, snap: &Vec<Option<(usize, String)>>| -> Vec<i64> {
        let mut h = vec![0i64; labels];
        for &r in &c.refs[d] {
            match &snap[r] {
                Some((p, _)) => h[*p] += 6,
                None => {
                    for (l, slot) in h.iter_mut().enumerate() {
                        if !excluded(l) {
                            *slot += w6(r, l);
                        }
                    }
                }
            }
        }
        h
    };
    let winners = |h: &[i64]| -> Vec<usize> {
        let max = *h.iter().max().unwrap();
        if max <= 0 {
            return Vec::new();
        }
        (0..labels).filter(|&l| h[l] == max).collect()
    };
    // largest global size, then smallest index
    let by_size = |cands: &[usize], trace: &mut OracleTrace| -> usize {
        let best = cands.iter().map(|&l| size6(l)).max().unwrap();
        let top: Vec<usize> = cands.iter().copied().filter(|&l| size6(l) == best).collect();
        if top.len() > 1 {
            trace.lexicographic += 1;
        }
        top[0]
    };

    let mut table: Vec<Option<(usize, String)>> = vec![None; n];
    for run in 1..=step1_runs {
        let snap = table.clone();
        for d in 0..n {
            if !in_z(d) {
                continue;
            }
            let win = winners(&hist(d, &snap));
            if win.len() == 1 {
                let keep = matches!(&snap[d], Some((p, _)) if *p == win[0]);
                if !keep {
                    if run > 1 && snap[d].is_some() {
                        trace.reassigned_in_later_runs += 1;
                    }
                    table[d] = Some((win[0], format!("Run{run}")));
                }
            }
        }
    }

    let snap = table.clone();
    for d in 0..n {
        if !in_z(d) || snap[d].is_some() {
            continue;
        }
        let mut h = hist(d, &snap);
        for (l, slot) in h.iter_mut().enumerate() {
            if !excluded(l) {
                *slot += w6(d, l);
            }
        }
        let win = winners(&h);
        match win.len() {
            0 => {}
            1 => table[d] = Some((win[0], format!("Run{}", step1_runs + 1))),
            _ => {
                trace.run4_ties += 1;
                let l = by_size(&win, &mut trace);
                table[d] = Some((l, format!("Run{}", step1_runs + 2)));
            }
        }
    }

    for d in 0..n {
        if in_z(d) || table[d].is_some() {
            continue;
        }
        let own: Vec<usize> = c.cats[d].iter().copied().filter(|&l| !excluded(l)).collect();
        if !own.is_empty() {
            let l = by_size(&own, &mut trace);
            table[d] = Some((l, "FewRefsRule".into()));
        }
    }

    let open: Vec<usize> = (0..n).filter(|&d| table[d].is_none()).collect();
    if !open.is_empty() {
        let assigned: Vec<usize> = (0..n).filter(|&d| table[d].is_some()).collect();
        if assigned.is_empty() {
            return Err("nothing classified".into());
        }
        let mut count = vec![0usize; labels];
        for &d in &assigned {
            count[table[d].as_ref().unwrap().0] += 1;
        }
        let most = *count.iter().max().unwrap();
        let most_assigned = (0..labels).find(|&l| count[l] == most).unwrap();
        let before = table.clone();
        for &d in &open {
            // largest raw label, ties to the smallest index
            let key = (0..labels).filter(|&l| w6(d, l) > 0).max_by_key(|&l| (w6(d, l), std::cmp::Reverse(l))).unwrap();
            if !excluded(key) {
                return Err(format!("precondition: {key}"));
            }
            let mut score = vec![0i64; labels];
            for &p in &assigned {
                score[before[p].as_ref().unwrap().0] += w6(p, key);
            }
            let win = winners(&score);
            let l = match win.len() {
                0 => {
                    trace.fallback_without_peers += 1;
                    most_assigned
                }
                1 => win[0],
                _ => by_size(&win, &mut trace),
            };
            trace.fallback += 1;
            table[d] = Some((l, "MultiDFallback".into()));
        }
    }
    Ok((table.into_iter().map(Option::unwrap).collect(), trace))
}

/// Random multigraph on at most 50 nodes (self-loops and both directions
/// allowed) with a random partition into at most `max_classes` classes.
pub fn random_graph(seed: u64, max_classes: usize) -> (usize, Vec<(u32, u32)>, Vec<u32>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(2..=50);
    let density: f64 = rng.random_range(0.02..0.4);
    let mut edges = Vec::new();
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            if rng.random_bool(density / 2.0) {
                edges.push((a, b));
            }
        }
    }
    if edges.iter().all(|e| e.0 == e.1) {
        edges.push((0, 1));
    }
    let k = rng.random_range(1..=max_classes.min(n));
    let classes = (0..n).map(|_| rng.random_range(0..k as u32)).collect();
    (n, edges, classes)
}

pub fn partition_view(classes: &[u32]) -> (PartitionView, usize) {
    let k = classes.iter().max().map_or(0, |m| *m as usize + 1);
    let codes = (0..k).map(|c| format!("c{c:02}")).collect();
    (PartitionView::new(codes, classes.iter().map(|&c| Some(c)).collect()), k)
}

pub fn graph(n: usize, edges: &[(u32, u32)]) -> CitationGraph {
    CitationGraph::from_edges(n, edges.iter().copied())
}

/// Newman modularity from the dense adjacency matrix of the undirected
/// simple graph: Q = 1/2m Σ_ij (A_ij − k_i k_j / 2m) δ(c_i, c_j).
pub fn newman_modularity(n: usize, edges: &[(u32, u32)], classes: &[u32]) -> f64 {
    let mut a = vec![vec![0u8; n]; n];
    for &(x, y) in edges {
        if x != y {
            a[x as usize][y as usize] = 1;
            a[y as usize][x as usize] = 1;
        }
    }
    let k: Vec<f64> = a.iter().map(|row| row.iter().map(|&v| v as f64).sum()).collect();
    let two_m: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if classes[i] == classes[j] {
                q += a[i][j] as f64 - k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Reclassification and surgery with the given surgery knobs.
pub fn classify_and_cut(corpus: &Corpus, config: &refclass::surgery::SurgeryConfig) -> refclass::surgery::Surgery {
    use refclass::reclassify::{reclassify_categories, ReclassConfig};
    use refclass::surgery::{assign_p_disciplines, run_surgery};
    let (_, p_cat) = reclassify_categories(corpus, ReclassConfig::default()).unwrap();
    let p_disc = assign_p_disciplines(corpus, ReclassConfig::default()).unwrap();
    run_surgery(corpus, &p_cat.labels(), &p_disc.labels(), config).unwrap()
}

/// Surgery knobs that leave a desk-sized corpus alone except for splits.
pub fn no_merge() -> refclass::surgery::SurgeryConfig {
    refclass::surgery::SurgeryConfig {
        minor_docs: 10,
        small_threshold: 0,
        ..Default::default()
    }
}

/// Gold papers first, then one reference node per cited item; unclassified
/// references get no class.
pub fn gold_graph(papers: &[(Vec<u32>, u32)]) -> (PartitionView, CitationGraph, Vec<usize>) {
    let classes = papers.iter().map(|p| p.0.len()).max().unwrap_or(0);
    let mut nodes: Vec<Option<u32>> = vec![None; papers.len()];
    let mut edges = Vec::new();
    for (s, (counts, unclassified)) in papers.iter().enumerate() {
        for (c, &k) in counts.iter().enumerate() {
            for _ in 0..k {
                edges.push((s as u32, nodes.len() as u32));
                nodes.push(Some(c as u32));
            }
        }
        for _ in 0..*unclassified {
            edges.push((s as u32, nodes.len() as u32));
            nodes.push(None);
        }
    }
    let codes = (0..classes).map(|c| format!("k{c}")).collect();
    let n = nodes.len();
    (PartitionView::new(codes, nodes), CitationGraph::from_edges(n, edges), (0..papers.len()).collect())
}

#[derive(serde::Deserialize)]
pub struct GoldPaper {
    pub counts: Vec<u32>,
    pub unclassified: u32,
}

/// 100 gold papers and their statistics, computed by `fixtures/accuracy_oracle.py`.
#[derive(serde::Deserialize)]
pub struct GoldFixture {
    pub papers: Vec<GoldPaper>,
    pub he: Vec<f64>,
    pub mean: f64,
    pub sd: f64,
    pub std_error: f64,
    pub ci99: [f64; 2],
}

pub fn gold_fixture() -> GoldFixture {
    serde_json::from_str(include_str!("../fixtures/accuracy_gold.json")).expect("fixture parses")
}

impl GoldFixture {
    pub fn papers(&self) -> Vec<(Vec<u32>, u32)> {
        self.papers.iter().map(|p| (p.counts.clone(), p.unclassified)).collect()
    }
}
