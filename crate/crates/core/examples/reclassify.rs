//! Reference-based reclassification of a generated corpus, stage by stage.

use refclass::reclassify::{reclassify_categories, ReclassConfig};
use refclass::synth::{generate, SynthConfig};

fn main() -> refclass::Result<()> {
    let corpus = generate(&SynthConfig {
        mixing: 0.3,
        ..SynthConfig::default()
    })?
    .build_corpus()?
    .0;
    let (labels, cls) = reclassify_categories(&corpus, ReclassConfig { step1_runs: 3 })?;

    println!("{:<16}{:>10}{:>10}{:>12}{:>8}{:>8}", "stage", "todo", "assigned", "unassigned", "tied", "multi");
    for s in &cls.stages {
        println!(
            "{:<16}{:>10}{:>10}{:>12}{:>8}{:>8}",
            s.stage.to_string(),
            s.to_classify,
            s.assigned,
            s.unassigned,
            s.unassigned_tied,
            s.unassigned_all_multi
        );
    }

    // how many documents left their journal category
    let moved = (0..corpus.len())
        .filter(|&d| {
            let p = cls.table.label(d).unwrap();
            corpus.category_weights().row(d).iter().all(|&(c, _)| c != p)
        })
        .count();
    println!("{moved} of {} documents left every journal category", corpus.len());
    println!("labels in use: {}", labels.codes().len());
    println!("warnings: {:?}", cls.warnings);
    Ok(())
}
