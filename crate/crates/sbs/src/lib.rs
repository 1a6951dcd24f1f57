//! File formats, calendar slicing, parallel drivers and the `sbs` command
//! line on top of [`sbs_core`].

pub mod analytics;
pub mod cli;
pub mod config;
pub mod error;
pub mod export;
pub mod ingest;
pub mod parallel;
pub mod pipeline;
pub mod timeslice;

pub use error::{Result, SbsError};
pub use parallel::{par_betweenness, par_build_graph, score_period, PeriodResult, ScoringConfig};
pub use pipeline::{build_pipeline, preprocess, preprocess_corpus, SnowballStemmer};
pub use timeslice::{period_label, time_slice, Granularity};
