//! Field-normalized citation scores under both classifications, with the
//! difference split into intra- and inter-discipline parts.

use refclass::indicators::{mncs, Classifications, Counting, DocFilter};
use refclass::reclassify::{reclassify_categories, ReclassConfig};
use refclass::surgery::{assign_p_disciplines, run_surgery, SurgeryConfig};
use refclass::synth::{generate, SynthConfig};

fn main() -> refclass::Result<()> {
    let corpus = generate(&SynthConfig {
        mixing: 0.3,
        collaboration: 0.4,
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

    let cls = Classifications::new(&corpus, &s.hierarchy, &s.assignments, Counting::Fractional)?;
    let filter = DocFilter {
        years: vec![2019, 2020],
        ..DocFilter::default()
    };
    let report = mncs(&cls, &filter);
    println!("entity\tdisc\tMNCS wos\tMNCS ost\tD\tD1\tD2");
    let fmt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.3}"));
    for r in &report.rows {
        println!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.entity,
            r.discipline,
            fmt(r.mncs_wos),
            fmt(r.mncs_ost),
            fmt(r.d),
            fmt(r.d1),
            fmt(r.d2)
        );
    }
    Ok(())
}
