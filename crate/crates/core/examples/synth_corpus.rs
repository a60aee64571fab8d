//! Generates a planted-partition corpus and writes its six files.
//!
//!     cargo run --example synth_corpus -- /tmp/corpus 42

use std::path::PathBuf;

use refclass::synth::{generate, SynthConfig};

fn main() -> refclass::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "synth_corpus".into()));
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(1);

    let config = SynthConfig {
        seed,
        mixing: 0.15,
        ..SynthConfig::default()
    };
    let out = generate(&config)?;
    out.write(&dir)?;
    let (corpus, report) = out.build_corpus()?;
    println!(
        "{} documents, {} citation links, {} countries, written to {}",
        corpus.len(),
        out.edge_count,
        corpus.countries().len(),
        dir.display()
    );
    println!("load report: {report:?}");
    Ok(())
}
