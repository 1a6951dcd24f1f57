//! Multi-threaded graph construction, betweenness and per-period scoring.
//!
//! Work is split into pieces whose boundaries depend only on the input, and
//! combined either exactly (integer counts) or in a fixed order (floating
//! sums), so results are bit-identical for any thread count.

use std::collections::BTreeSet;

use rayon::prelude::*;

use sbs_core::centrality::{betweenness_partial, combine_partials, source_chunks};
use sbs_core::graph::{filter_edges, PairCounts};
use sbs_core::metrics::{rescale_values, score_brands, NodeDimensions};
use sbs_core::{
    cooccurrence_polarity, BrandScores, CentralityReport, CoocGraph, Polarity, PolarityLexicon,
    RescaleMethod, SbsOptions, Standardization, TokenizedDocument, Vocabulary,
};

use crate::error::Result;

const DOC_BATCH: usize = 1024;

/// Same graph as [`sbs_core::build_graph`], built from document batches in parallel.
pub fn par_build_graph(corpus: &[TokenizedDocument], window: usize) -> Result<CoocGraph> {
    if window == 0 {
        return Err(sbs_core::Error::InvalidParameter("window must be at least 1".into()).into());
    }
    let words: BTreeSet<&str> = corpus
        .par_chunks(DOC_BATCH)
        .map(|batch| {
            batch
                .iter()
                .flat_map(|d| d.tokens.iter().map(String::as_str))
                .collect::<BTreeSet<&str>>()
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    let vocab = Vocabulary::from_words(words);
    let counts = corpus
        .par_chunks(DOC_BATCH)
        .map(|batch| PairCounts::from_documents(&vocab, batch, window))
        .reduce(PairCounts::default, PairCounts::merge_two);
    Ok(CoocGraph::from_pair_counts(vocab, counts, window))
}

/// Same values as [`sbs_core::betweenness_all`], bit for bit.
pub fn par_betweenness(g: &CoocGraph) -> Vec<f64> {
    let partials: Vec<Vec<f64>> = source_chunks(g.node_count())
        .into_par_iter()
        .map(|chunk| betweenness_partial(g, chunk))
        .collect();
    combine_partials(g.node_count(), partials)
}

/// Settings shared by every scoring run.
#[derive(Debug, Clone)]
pub struct ScoringConfig {
    pub window: usize,
    pub min_edge_weight: u64,
    pub sbs: SbsOptions,
    pub rescale: Option<RescaleMethod>,
    pub lexicon: Option<PolarityLexicon>,
}

impl Default for ScoringConfig {
    fn default() -> Self {
        ScoringConfig {
            window: 5,
            min_edge_weight: 1,
            sbs: SbsOptions::default(),
            rescale: None,
            lexicon: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PeriodResult {
    pub graph: CoocGraph,
    pub scores: Vec<BrandScores>,
    /// `None` when no lexicon is configured.
    pub polarity: Vec<Option<Polarity>>,
}

/// Builds, filters and scores one sub-corpus.
pub fn score_period(
    corpus: &[TokenizedDocument],
    brands: &[&str],
    period: &str,
    cfg: &ScoringConfig,
) -> Result<PeriodResult> {
    let mut graph = par_build_graph(corpus, cfg.window)?;
    if cfg.min_edge_weight > 1 {
        graph = filter_edges(&graph, cfg.min_edge_weight);
    }
    let report = CentralityReport::with_betweenness(&graph, par_betweenness(&graph));
    let dims = NodeDimensions::collect(corpus, &graph, &report);
    let mut scores = score_brands(&graph, &dims, brands, &cfg.sbs)?;
    for s in &mut scores {
        s.period = period.to_string();
    }
    if let Some(method) = cfg.rescale {
        apply_rescale(&graph, &dims, &mut scores, method, &cfg.sbs);
    }
    let polarity = scores
        .iter()
        .map(|s| match (&cfg.lexicon, graph.contains(&s.brand)) {
            (None, _) => None,
            (Some(_), false) => Some(Polarity::NoCoverage),
            (Some(lex), true) => cooccurrence_polarity(&graph, &s.brand, lex).ok(),
        })
        .collect();
    Ok(PeriodResult {
        graph,
        scores,
        polarity,
    })
}

/// Replaces each brand's score by its rescaled value. The reference set is
/// every graph node (plus brands absent from the graph), or the brands
/// alone under brands-only standardization.
fn apply_rescale(
    graph: &CoocGraph,
    dims: &NodeDimensions,
    scores: &mut [BrandScores],
    method: RescaleMethod,
    opts: &SbsOptions,
) {
    match opts.standardization {
        Standardization::BrandsOnly => {
            let values: Vec<f64> = scores.iter().map(|s| s.sbs).collect();
            for (s, v) in scores.iter_mut().zip(rescale_values(&values, method)) {
                s.sbs = v;
            }
        }
        Standardization::AllNodes => {
            let mut values = dims.node_sbs(opts.weights);
            let absent: Vec<usize> = scores
                .iter()
                .enumerate()
                .filter(|(_, s)| !graph.contains(&s.brand))
                .map(|(i, _)| i)
                .collect();
            values.extend(absent.iter().map(|&i| scores[i].sbs));
            let rescaled = rescale_values(&values, method);
            let n = graph.node_count();
            for (i, s) in scores.iter_mut().enumerate() {
                s.sbs = match graph.node_id(&s.brand) {
                    Some(id) => rescaled[id as usize],
                    None => rescaled[n + absent.iter().position(|&a| a == i).unwrap()],
                };
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use sbs_core::{betweenness_all, build_graph, sbs};

    fn corpus() -> Vec<TokenizedDocument> {
        (0..300)
            .map(|i| {
                let tokens: Vec<String> = (0..12).map(|j| format!("w{}", (i * 7 + j * j * 3) % 97)).collect();
                TokenizedDocument::new(i.to_string(), sbs_core::Timestamp(0), tokens)
            })
            .collect()
    }

    #[test]
    fn parallel_graph_equals_sequential() {
        let c = corpus();
        for w in [1, 3, 5] {
            assert_eq!(par_build_graph(&c, w).unwrap(), build_graph(&c, w).unwrap());
        }
        assert!(par_build_graph(&c, 0).is_err());
    }

    #[test]
    fn parallel_betweenness_is_bit_identical() {
        let g = build_graph(&corpus(), 2).unwrap();
        let seq = betweenness_all(&g);
        for threads in [1, 3, 8] {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let par = pool.install(|| par_betweenness(&g));
            assert_eq!(par, seq);
        }
    }

    #[test]
    fn score_period_matches_core_scoring() {
        let c = corpus();
        let brands = ["w0", "w5", "w42"];
        let r = score_period(&c, &brands, "all", &ScoringConfig::default()).unwrap();
        let g = build_graph(&c, 5).unwrap();
        let mut direct = sbs(&c, &g, &brands, &SbsOptions::default()).unwrap();
        for s in &mut direct {
            s.period = "all".into();
        }
        assert_eq!(r.scores, direct);
        assert!(r.polarity.iter().all(Option::is_none));
    }

    #[test]
    fn rescaled_scores_lie_in_unit_interval() {
        let c = corpus();
        let cfg = ScoringConfig {
            rescale: Some(RescaleMethod::MinMax),
            ..ScoringConfig::default()
        };
        let r = score_period(&c, &["w0", "absent"], "all", &cfg).unwrap();
        assert!(r.scores.iter().all(|s| (0.0..=1.0).contains(&s.sbs)));
        let pct = ScoringConfig {
            rescale: Some(RescaleMethod::PercentileRank),
            ..ScoringConfig::default()
        };
        let r = score_period(&c, &["w0", "absent"], "all", &pct).unwrap();
        assert!(r.scores.iter().all(|s| s.sbs > 0.0 && s.sbs < 1.0));
    }

    #[test]
    fn edge_filter_keeps_nodes() {
        let c = corpus();
        let cfg = ScoringConfig {
            min_edge_weight: 3,
            ..ScoringConfig::default()
        };
        let r = score_period(&c, &["w0"], "all", &cfg).unwrap();
        assert_eq!(r.graph.node_count(), build_graph(&c, 5).unwrap().node_count());
        assert!(r.graph.edges().all(|(_, _, w)| w >= 3));
    }
}
