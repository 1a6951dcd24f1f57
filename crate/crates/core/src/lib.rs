//! Semantic brand scoring over word co-occurrence networks.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the pure
//! algorithms: text normalization, co-occurrence graph construction,
//! centrality kernels, brand score metrics, threshold sweeps and the
//! Granger causality test. File formats, calendar slicing, parallel
//! drivers and the command line live in the `sbs` crate.
//!
//! A brand's score combines three dimensions computed on the period's
//! co-occurrence network:
//!
//! - prevalence: how often the brand token occurs,
//! - diversity: how many distinct words it co-occurs with (degree),
//! - connectivity: how often it lies on shortest paths between other
//!   words (betweenness).
//!
//! Each dimension is standardized over all nodes of the network and the
//! standardized values are summed.

#![no_std]

#[cfg(test)]
extern crate std;

extern crate alloc;

pub mod centrality;
pub mod error;
pub mod granger;
pub mod graph;
pub mod metrics;
pub mod series;
pub mod stats;
pub mod sweep;
pub mod text;

pub use centrality::{betweenness_all, degree, weighted_degree, CentralityReport};
pub use error::{Error, Result};
pub use granger::{granger_test, GrangerOptions, LagResult};
pub use graph::{build_graph, filter_edges, merge_nodes, CoocGraph, PairCounts, Vocabulary};
pub use metrics::{
    association_profile, connectivity, cooccurrence_polarity, diversity, prevalence, rescale, sbs,
    Association, BrandScores, Polarity, PolarityLexicon, RescaleMethod, SbsOptions,
    Standardization,
};
pub use series::SeriesTable;
pub use sweep::{threshold_sweep, SweepReport};
pub use text::{
    detect_bigrams, english_stopwords, DictionaryLemmatizer, Document, Pipeline, PipelineConfig,
    Stemmer, StemmerKind, Timestamp,
    TokenizedDocument,
};
