//! Brand score dimensions, their normalized forms and the combined score.
//!
//! - prevalence: term frequency; relative prevalence divides by the corpus
//!   token count.
//! - diversity: degree; normalized by `n - 1`.
//! - connectivity: betweenness; normalized by `(n - 1)(n - 2) / 2`, the
//!   number of node pairs not involving the word itself.
//!
//! The combined score standardizes each dimension (population standard
//! deviation) and sums the z-values. By default the standardization
//! population is every node of the period's graph, which makes the score
//! read as importance relative to the whole discourse and keeps it defined
//! for a single brand. A dimension whose values are all equal contributes 0.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::centrality::{betweenness_all, CentralityReport};
use crate::error::{Error, Result};
use crate::graph::CoocGraph;
use crate::text::TokenizedDocument;

/// Occurrence count of `word` and its share of all corpus tokens.
pub fn prevalence(corpus: &[TokenizedDocument], word: &str) -> (u64, f64) {
    let mut count = 0u64;
    let mut total = 0u64;
    for doc in corpus {
        total += doc.tokens.len() as u64;
        count += doc.tokens.iter().filter(|t| *t == word).count() as u64;
    }
    let relative = if total == 0 {
        0.0
    } else {
        count as f64 / total as f64
    };
    (count, relative)
}

pub fn diversity(g: &CoocGraph, word: &str, normalized: bool) -> Result<f64> {
    let d = g.degree_of(g.require(word)?) as f64;
    if !normalized {
        return Ok(d);
    }
    let n = g.node_count();
    if n < 2 {
        return Err(Error::invalid("normalized diversity needs at least 2 nodes"));
    }
    Ok(d / (n - 1) as f64)
}

/// Betweenness of `word`, optionally normalized. Recomputes betweenness for
/// the whole graph; use [`connectivity_from`] when a report is at hand.
pub fn connectivity(g: &CoocGraph, word: &str, normalized: bool) -> Result<f64> {
    let id = g.require(word)?;
    let bc = betweenness_all(g);
    normalize_connectivity(bc[id as usize], g.node_count(), normalized)
}

pub fn connectivity_from(
    g: &CoocGraph,
    report: &CentralityReport,
    word: &str,
    normalized: bool,
) -> Result<f64> {
    let id = g.require(word)?;
    normalize_connectivity(report.betweenness[id as usize], g.node_count(), normalized)
}

fn normalize_connectivity(b: f64, n: usize, normalized: bool) -> Result<f64> {
    if !normalized {
        return Ok(b);
    }
    if n < 3 {
        return Err(Error::invalid("normalized connectivity needs at least 3 nodes"));
    }
    Ok(b / pair_count(n))
}

fn pair_count(n: usize) -> f64 {
    ((n - 1) * (n - 2)) as f64 / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Standardization {
    #[default]
    AllNodes,
    /// Mean and deviation taken over the scored brands only. Experimental.
    BrandsOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SbsOptions {
    /// Coefficients for (prevalence, diversity, connectivity).
    pub weights: [f64; 3],
    pub standardization: Standardization,
}

impl Default for SbsOptions {
    fn default() -> Self {
        SbsOptions {
            weights: [1.0, 1.0, 1.0],
            standardization: Standardization::AllNodes,
        }
    }
}

impl SbsOptions {
    pub fn validate(&self) -> Result<()> {
        if self.weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::invalid("dimension weights must be finite and nonnegative"));
        }
        if self.weights.iter().all(|&w| w == 0.0) {
            return Err(Error::invalid("dimension weights must not all be zero"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BrandScores {
    pub brand: String,
    pub period: String,
    pub prevalence: u64,
    pub prevalence_rel: f64,
    pub diversity: u64,
    pub diversity_norm: f64,
    pub connectivity: f64,
    pub connectivity_norm: f64,
    pub sbs: f64,
    pub n_nodes: usize,
    pub tot_words: u64,
}

/// z-scores with population standard deviation; all-equal input gives zeros.
pub fn standardize(values: &[f64]) -> Vec<f64> {
    match moments(values) {
        Some((mean, std)) => values.iter().map(|v| (v - mean) / std).collect(),
        None => vec![0.0; values.len()],
    }
}

/// Mean and population std, or `None` when the values do not vary.
fn moments(values: &[f64]) -> Option<(f64, f64)> {
    let first = *values.first()?;
    if values.iter().all(|&v| v == first) {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let std = libm::sqrt(var);
    (std > 0.0).then_some((mean, std))
}

fn z(value: f64, m: Option<(f64, f64)>) -> f64 {
    match m {
        Some((mean, std)) => (value - mean) / std,
        None => 0.0,
    }
}

/// Raw per-node dimension vectors of one period, indexed by node id.
#[derive(Debug, Clone)]
pub struct NodeDimensions {
    pub prevalence: Vec<f64>,
    pub diversity: Vec<f64>,
    pub connectivity: Vec<f64>,
    pub tot_words: u64,
}

impl NodeDimensions {
    pub fn collect(corpus: &[TokenizedDocument], g: &CoocGraph, report: &CentralityReport) -> Self {
        let mut counts = vec![0u64; g.node_count()];
        let mut tot_words = 0u64;
        for doc in corpus {
            tot_words += doc.tokens.len() as u64;
            for t in &doc.tokens {
                if let Some(id) = g.node_id(t) {
                    counts[id as usize] += 1;
                }
            }
        }
        NodeDimensions {
            prevalence: counts.iter().map(|&c| c as f64).collect(),
            diversity: report.degree.iter().map(|&d| d as f64).collect(),
            connectivity: report.betweenness.clone(),
            tot_words,
        }
    }

    /// Combined score of every node, standardized over all nodes.
    pub fn node_sbs(&self, weights: [f64; 3]) -> Vec<f64> {
        let zs = [
            standardize(&self.prevalence),
            standardize(&self.diversity),
            standardize(&self.connectivity),
        ];
        (0..self.prevalence.len())
            .map(|i| (0..3).map(|d| weights[d] * zs[d][i]).sum())
            .collect()
    }
}

/// Scores `brands` on graph `g` built from `corpus`.
pub fn sbs(
    corpus: &[TokenizedDocument],
    g: &CoocGraph,
    brands: &[&str],
    opts: &SbsOptions,
) -> Result<Vec<BrandScores>> {
    let report = CentralityReport::compute(g);
    sbs_with_report(corpus, g, &report, brands, opts)
}

pub fn sbs_with_report(
    corpus: &[TokenizedDocument],
    g: &CoocGraph,
    report: &CentralityReport,
    brands: &[&str],
    opts: &SbsOptions,
) -> Result<Vec<BrandScores>> {
    let dims = NodeDimensions::collect(corpus, g, report);
    score_brands(g, &dims, brands, opts)
}

pub fn score_brands(
    g: &CoocGraph,
    dims: &NodeDimensions,
    brands: &[&str],
    opts: &SbsOptions,
) -> Result<Vec<BrandScores>> {
    if brands.is_empty() {
        return Err(Error::invalid("brand set is empty"));
    }
    opts.validate()?;
    let n = g.node_count();

    // Raw (prevalence, diversity, connectivity) per brand; absent brands are zeros.
    let raw: Vec<[f64; 3]> = brands
        .iter()
        .map(|b| match g.node_id(b) {
            Some(id) => {
                let i = id as usize;
                [dims.prevalence[i], dims.diversity[i], dims.connectivity[i]]
            }
            None => [0.0; 3],
        })
        .collect();

    let population: [Option<(f64, f64)>; 3] = match opts.standardization {
        Standardization::AllNodes => [
            moments(&dims.prevalence),
            moments(&dims.diversity),
            moments(&dims.connectivity),
        ],
        Standardization::BrandsOnly => {
            let col = |d: usize| raw.iter().map(|r| r[d]).collect::<Vec<_>>();
            [moments(&col(0)), moments(&col(1)), moments(&col(2))]
        }
    };

    Ok(brands
        .iter()
        .zip(&raw)
        .map(|(brand, r)| {
            let sbs = (0..3)
                .map(|d| opts.weights[d] * z(r[d], population[d]))
                .sum();
            BrandScores {
                brand: brand.to_string(),
                period: String::new(),
                prevalence: r[0] as u64,
                prevalence_rel: if dims.tot_words == 0 {
                    0.0
                } else {
                    r[0] / dims.tot_words as f64
                },
                diversity: r[1] as u64,
                diversity_norm: if n >= 2 { r[1] / (n - 1) as f64 } else { 0.0 },
                connectivity: r[2],
                connectivity_norm: if n >= 3 { r[2] / pair_count(n) } else { 0.0 },
                sbs,
                n_nodes: n,
                tot_words: dims.tot_words,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RescaleMethod {
    MinMax,
    PercentileRank,
}

/// Min-max maps onto [0, 1] (all-equal input maps to 0.5). Percentile rank
/// is `(values strictly below + 0.5 * values equal) / N`.
pub fn rescale_values(values: &[f64], method: RescaleMethod) -> Vec<f64> {
    match method {
        RescaleMethod::MinMax => {
            let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if hi > lo {
                values.iter().map(|v| (v - lo) / (hi - lo)).collect()
            } else {
                vec![0.5; values.len()]
            }
        }
        RescaleMethod::PercentileRank => {
            let mut sorted = values.to_vec();
            sorted.sort_by(f64::total_cmp);
            let n = values.len() as f64;
            values
                .iter()
                .map(|v| {
                    let below = sorted.partition_point(|x| x < v);
                    let upto = sorted.partition_point(|x| x <= v);
                    (below as f64 + 0.5 * (upto - below) as f64) / n
                })
                .collect()
        }
    }
}

pub fn rescale(scores: &BTreeMap<String, f64>, method: RescaleMethod) -> BTreeMap<String, f64> {
    let values: Vec<f64> = scores.values().copied().collect();
    scores
        .keys()
        .cloned()
        .zip(rescale_values(&values, method))
        .collect()
}

/// Word polarities in [-1, 1].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PolarityLexicon {
    entries: BTreeMap<String, f64>,
}

impl PolarityLexicon {
    pub fn new(entries: BTreeMap<String, f64>) -> Result<Self> {
        for (word, &p) in &entries {
            if !(-1.0..=1.0).contains(&p) {
                return Err(Error::invalid(format!(
                    "polarity of `{word}` is {p}, outside [-1, 1]"
                )));
            }
        }
        Ok(PolarityLexicon { entries })
    }

    pub fn get(&self, word: &str) -> Option<f64> {
        self.entries.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Polarity {
    Score(f64),
    /// No neighbor of the brand appears in the lexicon.
    NoCoverage,
}

/// Edge-weighted mean polarity of the brand's lexicon-covered neighbors.
pub fn cooccurrence_polarity(g: &CoocGraph, brand: &str, lex: &PolarityLexicon) -> Result<Polarity> {
    let id = g.require(brand)?;
    let mut num = 0.0;
    let mut den = 0u64;
    for (nb, w) in g.adjacent(id) {
        if let Some(p) = lex.get(g.word(nb)) {
            num += w as f64 * p;
            den += w;
        }
    }
    Ok(if den == 0 {
        Polarity::NoCoverage
    } else {
        Polarity::Score((num / den as f64).clamp(-1.0, 1.0))
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Association {
    pub word: String,
    pub weight: u64,
    /// Not adjacent to any of the competitor brands.
    pub unique: bool,
}

/// Strongest neighbors of `brand`, by descending weight then word.
pub fn association_profile(
    g: &CoocGraph,
    brand: &str,
    top_k: usize,
    competitors: &[&str],
) -> Result<Vec<Association>> {
    let id = g.require(brand)?;
    if top_k == 0 {
        return Err(Error::invalid("top_k must be at least 1"));
    }
    let rivals: BTreeSet<u32> = competitors
        .iter()
        .filter_map(|c| g.node_id(c))
        .filter(|&c| c != id)
        .collect();
    let mut out: Vec<Association> = g
        .adjacent(id)
        .map(|(nb, w)| Association {
            word: g.word(nb).to_string(),
            weight: w,
            unique: !rivals
                .iter()
                .any(|&r| g.neighbor_ids(r).binary_search(&nb).is_ok()),
        })
        .collect();
    out.sort_by(|a, b| b.weight.cmp(&a.weight).then_with(|| a.word.cmp(&b.word)));
    out.truncate(top_k);
    Ok(out)
}
