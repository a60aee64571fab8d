//! Stability, dispersion and attraction of categories and the discipline
//! flow matrix, with the journal categories behind one flow.

use refclass::migration::{churn, migration_breakdown, migration_matrix, stability_rate, Level, LevelView};
use refclass::reclassify::{reclassify_categories, ReclassConfig};
use refclass::surgery::{assign_p_disciplines, run_surgery, SurgeryConfig};
use refclass::synth::{generate, SynthConfig};

fn main() -> refclass::Result<()> {
    let corpus = generate(&SynthConfig {
        categories: 6,
        disciplines: 3,
        mixing: 0.3,
        ..SynthConfig::default()
    })?
    .build_corpus()?
    .0;
    let (_, p_cat) = reclassify_categories(&corpus, ReclassConfig::default())?;
    let p_disc = assign_p_disciplines(&corpus, ReclassConfig::default())?;
    let config = SurgeryConfig {
        small_threshold: 0,
        ..SurgeryConfig::default()
    };
    let s = run_surgery(&corpus, &p_cat.labels(), &p_disc.labels(), &config)?;
    let y = |d: usize| corpus.in_perimeter(d);

    let categories = LevelView::new(&corpus, &s.hierarchy, &s.assignments, Level::Category, y)?;
    let disciplines = LevelView::new(&corpus, &s.hierarchy, &s.assignments, Level::Discipline, y)?;
    println!("stability: categories {:?}, disciplines {:?}", stability_rate(&categories), stability_rate(&disciplines));
    for r in churn(&categories) {
        println!("{}: J {:.1}, P {}, ratio J {:?}, ratio P {:?}", r.code, r.j_size, r.p_size, r.ratio_j, r.ratio_p);
    }

    let m = migration_matrix(&disciplines);
    print!("{}", m.to_csv());
    let codes = disciplines.codes();
    if let Some((a, b)) = (0..m.size())
        .flat_map(|a| (0..m.size()).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b)
        .max_by(|x, y| m.get(x.0, x.1).total_cmp(&m.get(y.0, y.1)))
    {
        println!("largest flow {} -> {}:", codes[a], codes[b]);
        for row in migration_breakdown(&corpus, &disciplines, &codes[a], &codes[b])? {
            println!("  {}\t{:.1}\t{:.1}%\t{:.1}%", row.source, row.mass, row.percent, row.cumulative);
        }
    }
    Ok(())
}
