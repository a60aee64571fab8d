//! End to end: generate a corpus on disk, run every stage, print the
//! manifest. Set `RUST_LOG=info` to follow the stages.

use refclass::pipeline::{run_pipeline, PipelineConfig};
use refclass::surgery::SurgeryConfig;
use refclass::synth::{generate, SynthConfig};

fn main() -> refclass::Result<()> {
    env_logger::init();
    let root = std::env::temp_dir().join("refclass-pipeline-example");
    let input = root.join("corpus");
    generate(&SynthConfig {
        mixing: 0.2,
        ..SynthConfig::default()
    })?
    .write(&input)?;

    let config = PipelineConfig {
        input,
        output: root.join("out"),
        surgery: SurgeryConfig {
            small_threshold: 100,
            ..SurgeryConfig::default()
        },
        min_refs: 10,
        ..PipelineConfig::default()
    };
    let manifest = run_pipeline(&config)?;
    print!("{}", manifest.to_json());
    println!("artifacts in {}", config.output.display());
    Ok(())
}
