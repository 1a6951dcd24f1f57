//! Re-scoring brands across co-occurrence windows.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::build_graph;
use crate::metrics::{sbs, BrandScores, SbsOptions};
use crate::text::TokenizedDocument;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub thresholds: Vec<usize>,
    pub brands: Vec<String>,
    /// `scores[t][b]`: brand `b` at threshold `thresholds[t]`.
    pub scores: Vec<Vec<BrandScores>>,
    /// `ranks[t][b]`, 1 = highest score; ties share the lowest rank.
    pub ranks: Vec<Vec<usize>>,
    /// Every threshold yields the same brand ordering.
    pub stable: bool,
}

impl SweepReport {
    pub fn from_scores(thresholds: Vec<usize>, brands: Vec<String>, scores: Vec<Vec<BrandScores>>) -> Self {
        let ranks: Vec<Vec<usize>> = scores
            .iter()
            .map(|row| competition_ranks(&row.iter().map(|s| s.sbs).collect::<Vec<_>>()))
            .collect();
        let stable = ranks.windows(2).all(|w| w[0] == w[1]);
        SweepReport {
            thresholds,
            brands,
            scores,
            ranks,
            stable,
        }
    }

    pub fn sbs(&self, threshold_index: usize, brand_index: usize) -> f64 {
        self.scores[threshold_index][brand_index].sbs
    }
}

/// Rank 1 for the largest value; equal values share the smallest rank.
pub fn competition_ranks(values: &[f64]) -> Vec<usize> {
    values
        .iter()
        .map(|v| 1 + values.iter().filter(|&&o| o > *v).count())
        .collect()
}

pub(crate) fn check_sweep_args(brands: &[&str], thresholds: &[usize]) -> Result<()> {
    if thresholds.is_empty() {
        return Err(Error::invalid("threshold list is empty"));
    }
    if thresholds.contains(&0) {
        return Err(Error::invalid("thresholds must be at least 1"));
    }
    if brands.is_empty() {
        return Err(Error::invalid("brand set is empty"));
    }
    Ok(())
}

/// Rebuilds the graph at each window in `thresholds` and scores `brands`.
pub fn threshold_sweep(
    corpus: &[TokenizedDocument],
    brands: &[&str],
    thresholds: &[usize],
    opts: &SbsOptions,
) -> Result<SweepReport> {
    check_sweep_args(brands, thresholds)?;
    let scores = thresholds
        .iter()
        .map(|&w| {
            let g = build_graph(corpus, w)?;
            sbs(corpus, &g, brands, opts)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport::from_scores(
        thresholds.to_vec(),
        brands.iter().map(|b| b.to_string()).collect(),
        scores,
    ))
}
