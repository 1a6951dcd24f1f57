//! Run settings: a flat `key = value` file overlaid by command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use sbs_core::{RescaleMethod, SbsOptions, Standardization, StemmerKind};

use crate::error::{Result, SbsError};
use crate::ingest::CorpusFormat;
use crate::parallel::ScoringConfig;
use crate::timeslice::Granularity;

const KEYS: [&str; 19] = [
    "corpus",
    "format",
    "brands",
    "alias_file",
    "stopwords",
    "lexicon",
    "window",
    "min_edge_weight",
    "granularity",
    "weights",
    "standardization",
    "rescale",
    "export_graphs",
    "threads",
    "output",
    "stemmer",
    "bigram_min_count",
    "thresholds",
    "top_k",
];

/// Raw settings before validation. Keys use underscores; dashes are
/// accepted and normalized.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings(BTreeMap<String, String>);

impl Settings {
    /// Parses `key = value` lines; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Settings::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| SbsError::Config(format!("config line {}: expected key = value", i + 1)))?;
            s.set(k.trim(), v.trim().trim_matches('"'))?;
        }
        Ok(s)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SbsError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            SbsError::Config(m) => SbsError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        let key = key.replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(SbsError::Config(format!("unknown setting {key:?}")));
        }
        self.0.insert(key, value.into());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    /// Later settings win.
    pub fn overlay(mut self, other: Settings) -> Self {
        self.0.extend(other.0);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub format: Option<CorpusFormat>,
    pub brands: Vec<String>,
    pub alias_file: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub window: usize,
    pub min_edge_weight: u64,
    pub granularity: Option<Granularity>,
    pub weights: [f64; 3],
    pub standardization: Standardization,
    pub rescale: Option<RescaleMethod>,
    pub export_graphs: bool,
    pub threads: Option<usize>,
    pub output: PathBuf,
    pub stemmer: StemmerKind,
    pub bigram_min_count: usize,
    pub thresholds: Vec<usize>,
    pub top_k: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus: None,
            format: None,
            brands: Vec::new(),
            alias_file: None,
            stopwords: None,
            lexicon: None,
            window: 5,
            min_edge_weight: 1,
            granularity: None,
            weights: [1.0, 1.0, 1.0],
            standardization: Standardization::AllNodes,
            rescale: None,
            export_graphs: false,
            threads: None,
            output: PathBuf::from("."),
            stemmer: StemmerKind::None,
            bigram_min_count: 0,
            thresholds: Vec::new(),
            top_k: 10,
        }
    }
}

fn bad(key: &str, value: &str, expected: &str) -> SbsError {
    SbsError::Config(format!("{key} = {value:?}: expected {expected}"))
}

fn positive(key: &str, v: &str) -> Result<usize> {
    match v.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(bad(key, v, "an integer >= 1")),
    }
}

fn boolean(key: &str, v: &str) -> Result<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(bad(key, v, "true or false")),
    }
}

/// Comma-separated integers and inclusive ranges, e.g. `1,3,5-8`.
pub fn parse_thresholds(v: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in v.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (positive("thresholds", a.trim())?, positive("thresholds", b.trim())?);
                if a > b {
                    return Err(bad("thresholds", part, "an increasing range"));
                }
                out.extend(a..=b);
            }
            None => out.push(positive("thresholds", part)?),
        }
    }
    Ok(out)
}

impl RunConfig {
    pub fn from_settings(s: &Settings) -> Result<Self> {
        let mut c = RunConfig::default();
        let path = |k: &str| s.get(k).filter(|v| !v.is_empty()).map(PathBuf::from);
        c.corpus = path("corpus");
        c.alias_file = path("alias_file");
        c.stopwords = path("stopwords");
        c.lexicon = path("lexicon");
        if let Some(o) = path("output") {
            c.output = o;
        }
        if let Some(v) = s.get("format") {
            c.format = Some(CorpusFormat::parse(v).ok_or_else(|| bad("format", v, "jsonl or csv"))?);
        }
        if let Some(v) = s.get("brands") {
            c.brands = v
                .split(',')
                .map(str::trim)
                .filter(|b| !b.is_empty())
                .map(String::from)
                .collect();
        }
        if let Some(v) = s.get("window") {
            c.window = positive("window", v)?;
        }
        if let Some(v) = s.get("min_edge_weight") {
            c.min_edge_weight = positive("min_edge_weight", v)? as u64;
        }
        if let Some(v) = s.get("granularity") {
            c.granularity = match v.to_ascii_lowercase().as_str() {
                "" | "none" => None,
                _ => Some(Granularity::parse(v).ok_or_else(|| bad("granularity", v, "day, week, month or quarter"))?),
            };
        }
        if let Some(v) = s.get("weights") {
            let w: Vec<f64> = v
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad("weights", v, "three comma-separated numbers"))?;
            c.weights = w
                .try_into()
                .map_err(|_| bad("weights", v, "three comma-separated numbers"))?;
        }
        if let Some(v) = s.get("standardization") {
            c.standardization = match v.to_ascii_lowercase().as_str() {
                "all" | "all_nodes" | "all-nodes" => Standardization::AllNodes,
                "brands" | "brands_only" | "brands-only" => Standardization::BrandsOnly,
                _ => return Err(bad("standardization", v, "all_nodes or brands_only")),
            };
        }
        if let Some(v) = s.get("rescale") {
            c.rescale = match v.to_ascii_lowercase().as_str() {
                "" | "none" => None,
                "minmax" => Some(RescaleMethod::MinMax),
                "percentile" => Some(RescaleMethod::PercentileRank),
                _ => return Err(bad("rescale", v, "none, minmax or percentile")),
            };
        }
        if let Some(v) = s.get("export_graphs") {
            c.export_graphs = boolean("export_graphs", v)?;
        }
        if let Some(v) = s.get("threads") {
            c.threads = Some(positive("threads", v)?);
        }
        if let Some(v) = s.get("stemmer") {
            c.stemmer = match v.to_ascii_lowercase().as_str() {
                "none" => StemmerKind::None,
                "snowball" => StemmerKind::Snowball,
                "lemmatizer" | "lemma" => StemmerKind::Lemmatizer,
                _ => return Err(bad("stemmer", v, "none, snowball or lemmatizer")),
            };
        }
        if let Some(v) = s.get("bigram_min_count") {
            c.bigram_min_count = v
                .parse()
                .map_err(|_| bad("bigram_min_count", v, "a nonnegative integer"))?;
        }
        if let Some(v) = s.get("thresholds") {
            c.thresholds = parse_thresholds(v)?;
        }
        if let Some(v) = s.get("top_k") {
            c.top_k = positive("top_k", v)?;
        }
        c.sbs_options()
            .validate()
            .map_err(|e| SbsError::Config(e.to_string()))?;
        Ok(c)
    }

    pub fn sbs_options(&self) -> SbsOptions {
        SbsOptions {
            weights: self.weights,
            standardization: self.standardization,
        }
    }

    /// Scoring settings; the lexicon is loaded separately.
    pub fn scoring(&self) -> ScoringConfig {
        ScoringConfig {
            window: self.window,
            min_edge_weight: self.min_edge_weight,
            sbs: self.sbs_options(),
            rescale: self.rescale,
            lexicon: None,
        }
    }

    pub fn require_corpus(&self) -> Result<&Path> {
        self.corpus
            .as_deref()
            .ok_or_else(|| SbsError::Config("no corpus given (--corpus)".into()))
    }

    pub fn require_brands(&self) -> Result<()> {
        if self.brands.is_empty() {
            return Err(SbsError::Config("brand set is empty (--brands)".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = RunConfig::from_settings(&Settings::default()).unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!(c.window, 5);
        assert_eq!(c.scoring().sbs, SbsOptions::default());
    }

    #[test]
    fn file_then_flags() {
        let file = Settings::parse(
            "# run\nwindow = 3\nbrands = Acme, Globex\nrescale = minmax\nmin-edge-weight = 2\n",
        )
        .unwrap();
        let mut flags = Settings::default();
        flags.set("window", "7").unwrap();
        let c = RunConfig::from_settings(&file.overlay(flags)).unwrap();
        assert_eq!(c.window, 7);
        assert_eq!(c.min_edge_weight, 2);
        assert_eq!(c.brands, ["Acme", "Globex"]);
        assert_eq!(c.rescale, Some(RescaleMethod::MinMax));
    }

    #[test]
    fn invalid_values_are_config_errors() {
        for (k, v) in [
            ("window", "0"),
            ("window", "x"),
            ("min_edge_weight", "0"),
            ("weights", "1,2"),
            ("weights", "0,0,0"),
            ("weights", "-1,1,1"),
            ("rescale", "zscore"),
            ("granularity", "year"),
            ("threads", "0"),
            ("thresholds", "5-2"),
            ("export_graphs", "maybe"),
        ] {
            let mut s = Settings::default();
            s.set(k, v).unwrap();
            assert!(
                matches!(RunConfig::from_settings(&s), Err(SbsError::Config(_))),
                "{k}={v}"
            );
        }
        assert!(Settings::default().set("colour", "red").is_err());
        assert!(Settings::parse("window 5").is_err());
    }

    #[test]
    fn threshold_lists() {
        assert_eq!(parse_thresholds("1,3,5-7").unwrap(), [1, 3, 5, 6, 7]);
        assert_eq!(parse_thresholds("").unwrap(), Vec::<usize>::new());
        assert!(parse_thresholds("0").is_err());
    }
}
