//! Period scoring, score trajectories, window sweeps and Granger tests on
//! exported scores.

use sbs_core::{granger_test, GrangerOptions, LagResult, SeriesTable, SweepReport, TokenizedDocument};

use crate::error::{Result, SbsError};
use crate::export::ScoreRecord;
use crate::parallel::{score_period, PeriodResult, ScoringConfig};
use crate::timeslice::{time_slice, Granularity};

/// Period label used when the corpus is scored as a whole.
pub const WHOLE_CORPUS: &str = "all";

/// Scores every period (or the whole corpus when `granularity` is `None`).
pub fn score_periods(
    corpus: &[TokenizedDocument],
    brands: &[&str],
    granularity: Option<Granularity>,
    cfg: &ScoringConfig,
) -> Result<Vec<(String, PeriodResult)>> {
    match granularity {
        None => Ok(vec![(
            WHOLE_CORPUS.to_string(),
            score_period(corpus, brands, WHOLE_CORPUS, cfg)?,
        )]),
        Some(g) => time_slice(corpus, g)
            .into_iter()
            .map(|(label, docs)| {
                let r = score_period(&docs, brands, &label, cfg)?;
                Ok((label, r))
            })
            .collect(),
    }
}

/// Per-brand columns `{brand}.prevalence`, `.diversity`, `.connectivity`
/// and `.sbs`. Periods whose graph has fewer than 3 nodes only carry
/// prevalence.
pub fn trajectory(periods: &[(String, PeriodResult)], brands: &[&str]) -> Result<SeriesTable> {
    let mut table = SeriesTable::new(periods.iter().map(|(p, _)| p.clone()).collect())?;
    for (b, brand) in brands.iter().enumerate() {
        let column = |f: &dyn Fn(&sbs_core::BrandScores) -> f64, always: bool| -> Vec<Option<f64>> {
            periods
                .iter()
                .map(|(_, r)| {
                    let s = &r.scores[b];
                    (always || s.n_nodes >= 3).then(|| f(s))
                })
                .collect()
        };
        table.insert(format!("{brand}.prevalence"), column(&|s| s.prevalence as f64, true))?;
        table.insert(format!("{brand}.diversity"), column(&|s| s.diversity as f64, false))?;
        table.insert(format!("{brand}.connectivity"), column(&|s| s.connectivity, false))?;
        table.insert(format!("{brand}.sbs"), column(&|s| s.sbs, false))?;
    }
    Ok(table)
}

pub fn sbs_trajectory(
    corpus: &[TokenizedDocument],
    brands: &[&str],
    granularity: Granularity,
    cfg: &ScoringConfig,
) -> Result<SeriesTable> {
    trajectory(&score_periods(corpus, brands, Some(granularity), cfg)?, brands)
}

/// Scores the whole corpus at each window in `thresholds`. Every other
/// setting of `cfg` (edge filter, weights, rescaling) applies unchanged.
pub fn sweep(
    corpus: &[TokenizedDocument],
    brands: &[&str],
    thresholds: &[usize],
    cfg: &ScoringConfig,
) -> Result<SweepReport> {
    if thresholds.is_empty() {
        return Err(SbsError::Config("threshold list is empty".into()));
    }
    if thresholds.contains(&0) {
        return Err(SbsError::Config("thresholds must be at least 1".into()));
    }
    if brands.is_empty() {
        return Err(SbsError::Config("brand set is empty".into()));
    }
    let scores = thresholds
        .iter()
        .map(|&w| {
            let c = ScoringConfig { window: w, ..cfg.clone() };
            Ok(score_period(corpus, brands, WHOLE_CORPUS, &c)?.scores)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport::from_scores(
        thresholds.to_vec(),
        brands.iter().map(|b| b.to_string()).collect(),
        scores,
    ))
}

/// Score columns usable as the Granger `y` series.
pub const GRANGER_METRICS: [&str; 7] = [
    "prevalence",
    "prevalence_rel",
    "diversity",
    "diversity_norm",
    "connectivity",
    "connectivity_norm",
    "sbs",
];

fn metric_value(r: &ScoreRecord, metric: &str) -> Option<f64> {
    Some(match metric {
        "prevalence" => r.prevalence as f64,
        "prevalence_rel" => r.prevalence_rel,
        "diversity" => r.diversity as f64,
        "diversity_norm" => r.diversity_norm,
        "connectivity" => r.connectivity,
        "connectivity_norm" => r.connectivity_norm,
        "sbs" => r.sbs,
        _ => return None,
    })
}

/// Aligns one brand's metric with an external series on shared period
/// labels (in period order) and tests whether the metric Granger-causes
/// the external series.
pub fn granger_on_scores(
    records: &[ScoreRecord],
    brand: &str,
    metric: &str,
    external: &[(String, f64)],
    opts: &GrangerOptions,
) -> Result<Vec<LagResult>> {
    if !GRANGER_METRICS.contains(&metric) {
        return Err(SbsError::Config(format!(
            "unknown metric {metric:?}; expected one of {}",
            GRANGER_METRICS.join(", ")
        )));
    }
    let mut rows: Vec<&ScoreRecord> = records.iter().filter(|r| r.brand == brand).collect();
    if rows.is_empty() {
        return Err(SbsError::Config(format!("brand {brand:?} not found in scores")));
    }
    rows.sort_by(|a, b| a.period.cmp(&b.period));
    let ext: std::collections::BTreeMap<&str, f64> =
        external.iter().map(|(p, v)| (p.as_str(), *v)).collect();
    let (x, y): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter_map(|r| ext.get(r.period.as_str()).map(|&v| (metric_value(r, metric).unwrap(), v)))
        .unzip();
    Ok(granger_test(&y, &x, opts)?)
}
