//! Corpus preprocessing with the Snowball stemmer wired in.

use rayon::prelude::*;

use sbs_core::text::detect_bigrams;
use sbs_core::{Document, Pipeline, PipelineConfig, Stemmer, StemmerKind, TokenizedDocument};

use crate::error::Result;

/// English Snowball (Porter2) stemmer.
pub struct SnowballStemmer(rust_stemmers::Stemmer);

impl SnowballStemmer {
    pub fn english() -> Self {
        SnowballStemmer(rust_stemmers::Stemmer::create(rust_stemmers::Algorithm::English))
    }
}

impl Default for SnowballStemmer {
    fn default() -> Self {
        Self::english()
    }
}

impl Stemmer for SnowballStemmer {
    fn stem(&self, word: &str) -> String {
        self.0.stem(word).into_owned()
    }
}

/// Builds a pipeline for any [`StemmerKind`].
pub fn build_pipeline(cfg: PipelineConfig) -> Result<Pipeline> {
    Ok(match cfg.stemmer {
        StemmerKind::Snowball => Pipeline::with_stemmer(cfg, Box::new(SnowballStemmer::english()))?,
        _ => Pipeline::new(cfg)?,
    })
}

pub fn preprocess(doc: &Document, cfg: &PipelineConfig) -> Result<TokenizedDocument> {
    Ok(build_pipeline(cfg.clone())?.preprocess(doc))
}

/// Preprocesses every document (in parallel, order kept), then fuses
/// frequent bigrams corpus-wide when the config asks for it.
pub fn preprocess_corpus(pipeline: &Pipeline, docs: &[Document]) -> Vec<TokenizedDocument> {
    let tokenized: Vec<TokenizedDocument> = docs.par_iter().map(|d| pipeline.preprocess(d)).collect();
    let min_count = pipeline.config().bigram_min_count;
    if min_count == 0 {
        tokenized
    } else {
        detect_bigrams(&tokenized, min_count, pipeline.protected())
    }
}
