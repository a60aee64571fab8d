//! Modularity and reference-concentration accuracy of the journal
//! partition, the reclassified one and the planted truth.

use refclass::quality::{accuracy, modularity, select_gold_standard, PartitionView};
use refclass::reclassify::{reclassify_categories, ReclassConfig};
use refclass::synth::{generate, SynthConfig};

fn main() -> refclass::Result<()> {
    let out = generate(&SynthConfig {
        mixing: 0.25,
        refs_min: 10,
        refs_max: 40,
        ..SynthConfig::default()
    })?;
    let corpus = out.build_corpus()?.0;
    let (labels, cls) = reclassify_categories(&corpus, ReclassConfig::default())?;

    // compare on the same documents: corpus Y with a non-multidisciplinary journal category
    let journal = PartitionView::journal_categories(&corpus);
    let keep: Vec<bool> = (0..corpus.len()).map(|d| corpus.in_perimeter(d) && journal.class(d).is_some()).collect();
    let keep = |d: usize| keep[d];
    let planted = out.planted();
    let views = [
        ("journal", journal.restrict(keep)),
        (
            "reclassified",
            PartitionView::new(labels.codes().to_vec(), cls.labels().into_iter().map(Some).collect()).restrict(keep),
        ),
        ("planted", PartitionView::from_codes(planted.iter().map(|(_, c)| Some(c.as_str()))).restrict(keep)),
    ];
    let gold = select_gold_standard(&corpus, 30);

    for (name, view) in &views {
        let h = modularity(view, corpus.graph())?;
        print!("{name:<13} H = {:.4} ± {:.4} over {} links", h.h, h.std_error.unwrap_or(0.0), h.m);
        match accuracy(view, corpus.graph(), &gold) {
            Ok(r) => println!(", HE = {:.4} ± {:.4} on {} gold papers", r.he, r.std_error.unwrap_or(0.0), r.n),
            Err(e) => println!(", no accuracy: {e}"),
        }
    }
    Ok(())
}
