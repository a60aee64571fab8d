//! Split and merge rules, first on the shipped default taxonomy with its
//! published lists, then computed from scratch on a generated corpus.

use refclass::reclassify::{reclassify_categories, ReclassConfig};
use refclass::surgery::{assign_p_disciplines, run_surgery, DefaultTaxonomy, SurgeryConfig};
use refclass::synth::{generate, SynthConfig};

fn main() -> refclass::Result<()> {
    let def = DefaultTaxonomy::load()?;
    let h = def.hierarchy()?;
    println!(
        "default taxonomy: {} categories, {} splits, {} merges -> {} final categories",
        def.taxonomy.categories().len(),
        def.splits.len(),
        def.merges.len(),
        h.len()
    );

    let corpus = generate(&SynthConfig {
        categories: 10,
        disciplines: 6,
        domains: 3,
        docs_per_category: 300,
        mixing: 0.4,
        ..SynthConfig::default()
    })?
    .build_corpus()?
    .0;
    let (_, p_cat) = reclassify_categories(&corpus, ReclassConfig::default())?;
    let p_disc = assign_p_disciplines(&corpus, ReclassConfig::default())?;
    let config = SurgeryConfig {
        minor_docs: 20,
        small_threshold: 200,
        ..SurgeryConfig::default()
    };
    let s = run_surgery(&corpus, &p_cat.labels(), &p_disc.labels(), &config)?;
    for split in &s.splits {
        println!("split {split:?}");
    }
    for m in &s.merges {
        println!("merged {} ({} documents) into {:?}", m.removed, m.y_count, m.flows());
    }
    for e in s.hierarchy.entries() {
        println!("{}\t{}\t{}", e.code, e.discipline, e.origin);
    }
    println!("warnings: {:?}", s.warnings);
    Ok(())
}
