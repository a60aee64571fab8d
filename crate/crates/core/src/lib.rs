//! Reference-based reclassification of a citation corpus.
//!
//! Documents inherit categories from their journals. This crate moves each
//! one to the single category most frequent among its references, rebuilds a
//! strict category → discipline hierarchy, and measures what changed:
//! partition quality, migration flows, specialization ratios and
//! field-normalized citation scores.
//!
//! The `examples/` directory has one runnable program per capability; the
//! `refclass` binary exposes the same stages as subcommands.

mod error;

pub mod artifacts;
pub mod corpus;
pub mod indicators;
pub mod labels;
pub mod migration;
pub mod pipeline;
pub mod reclassify;
pub mod quality;
pub mod surgery;
pub mod synth;

pub use error::{Error, Result};
