//! Command-line front end.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use sbs_core::{
    association_profile, GrangerOptions, PipelineConfig, RescaleMethod, TokenizedDocument,
};

use crate::analytics::{granger_on_scores, score_periods, sweep, trajectory, WHOLE_CORPUS};
use crate::config::{RunConfig, Settings};
use crate::error::{Result, SbsError};
use crate::export::{self, fmt_real, PolarityCell, ScoreRecord};
use crate::ingest::{self, CorpusFormat};
use crate::parallel::score_period;
use crate::pipeline::{build_pipeline, preprocess_corpus};

#[derive(Debug, Parser)]
#[command(name = "sbs", version, about = "Semantic brand scoring over word co-occurrence networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score brands per period and write scores.csv.
    Score(RunArgs),
    /// Re-score at several co-occurrence windows and write sweep.csv.
    Sweep(RunArgs),
    /// Side-by-side brand comparison over the whole corpus (compare.csv).
    Compare(RunArgs),
    /// Granger test of a brand metric against an external series (granger.csv).
    Granger(GrangerArgs),
}

/// Every option may also be given in the `--config` file (`key = value`,
/// with underscores); flags take precedence.
#[derive(Debug, Args, Default)]
pub struct RunArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// JSONL or CSV corpus with id, text and RFC 3339 timestamp.
    #[arg(long)]
    pub corpus: Option<String>,
    /// jsonl or csv; guessed from the extension by default.
    #[arg(long)]
    pub format: Option<String>,
    /// Comma-separated brand names.
    #[arg(long)]
    pub brands: Option<String>,
    /// Tab-separated `alias phrase<TAB>brand` lines.
    #[arg(long)]
    pub alias_file: Option<String>,
    /// Replaces the built-in English stopword list.
    #[arg(long)]
    pub stopwords: Option<String>,
    /// Tab-separated `word<TAB>polarity` lines; adds the polarity column.
    #[arg(long)]
    pub lexicon: Option<String>,
    /// Co-occurrence window (default 5).
    #[arg(long)]
    pub window: Option<String>,
    /// Drop edges lighter than this (default 1).
    #[arg(long)]
    pub min_edge_weight: Option<String>,
    /// day, week, month or quarter; whole corpus when unset.
    #[arg(long)]
    pub granularity: Option<String>,
    /// Prevalence, diversity, connectivity coefficients (default 1,1,1).
    #[arg(long)]
    pub weights: Option<String>,
    /// all_nodes (default) or brands_only.
    #[arg(long)]
    pub standardization: Option<String>,
    /// none, minmax or percentile.
    #[arg(long)]
    pub rescale: Option<String>,
    /// Write each period's graph as an edge list under graphs/.
    #[arg(long)]
    pub export_graphs: bool,
    #[arg(long)]
    pub threads: Option<String>,
    /// Output directory (default: current directory).
    #[arg(long)]
    pub output: Option<String>,
    /// none, snowball or lemmatizer.
    #[arg(long)]
    pub stemmer: Option<String>,
    /// Fuse adjacent word pairs seen at least this often; 0 disables.
    #[arg(long)]
    pub bigram_min_count: Option<String>,
    /// Windows for `sweep`, e.g. `1-10` or `2,5,8`.
    #[arg(long)]
    pub thresholds: Option<String>,
    /// Associations listed per brand by `compare` (default 10).
    #[arg(long)]
    pub top_k: Option<String>,
}

#[derive(Debug, Args)]
pub struct GrangerArgs {
    /// A scores.csv written by `sbs score`.
    #[arg(long)]
    pub scores: PathBuf,
    /// `period,value` CSV aligned on the score period labels.
    #[arg(long)]
    pub external: PathBuf,
    #[arg(long)]
    pub brand: String,
    #[arg(long, default_value = "sbs")]
    pub metric: String,
    #[arg(long, default_value_t = 4)]
    pub max_lag: usize,
    /// Difference the external series before testing.
    #[arg(long)]
    pub difference_y: bool,
    /// Difference the brand metric before testing.
    #[arg(long)]
    pub difference_x: bool,
    #[arg(long, default_value = ".")]
    pub output: PathBuf,
}

impl RunArgs {
    /// Config file settings overlaid with the flags that were given.
    pub fn settings(&self) -> Result<Settings> {
        let base = match &self.config {
            Some(p) => Settings::from_file(p)?,
            None => Settings::default(),
        };
        let mut flags = Settings::default();
        let pairs = [
            ("corpus", &self.corpus),
            ("format", &self.format),
            ("brands", &self.brands),
            ("alias_file", &self.alias_file),
            ("stopwords", &self.stopwords),
            ("lexicon", &self.lexicon),
            ("window", &self.window),
            ("min_edge_weight", &self.min_edge_weight),
            ("granularity", &self.granularity),
            ("weights", &self.weights),
            ("standardization", &self.standardization),
            ("rescale", &self.rescale),
            ("threads", &self.threads),
            ("output", &self.output),
            ("stemmer", &self.stemmer),
            ("bigram_min_count", &self.bigram_min_count),
            ("thresholds", &self.thresholds),
            ("top_k", &self.top_k),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                flags.set(k, v.clone())?;
            }
        }
        if self.export_graphs {
            flags.set("export_graphs", "true")?;
        }
        Ok(base.overlay(flags))
    }

    pub fn resolve(&self) -> Result<RunConfig> {
        RunConfig::from_settings(&self.settings()?)
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Score(a) => with_threads(a.resolve()?, run_score),
        Command::Sweep(a) => with_threads(a.resolve()?, run_sweep),
        Command::Compare(a) => with_threads(a.resolve()?, run_compare),
        Command::Granger(a) => run_granger(&a),
    }
}

fn with_threads(cfg: RunConfig, f: fn(&RunConfig) -> Result<()>) -> Result<()> {
    match cfg.threads {
        None => f(&cfg),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| SbsError::Config(format!("cannot start {n} threads: {e}")))?
            .install(|| f(&cfg)),
    }
}

/// Reads and preprocesses the corpus; returns it with the brand tokens as
/// they appear after preprocessing.
pub fn load_corpus(cfg: &RunConfig) -> Result<(Vec<TokenizedDocument>, Vec<String>)> {
    let path = cfg.require_corpus()?;
    cfg.require_brands()?;
    let mut pc = PipelineConfig {
        stemmer: cfg.stemmer,
        bigram_min_count: cfg.bigram_min_count,
        ..PipelineConfig::default()
    };
    if let Some(p) = &cfg.stopwords {
        pc.stopwords = ingest::read_stopwords(p)?;
    }
    if let Some(p) = &cfg.alias_file {
        for (phrase, canonical) in ingest::read_aliases(p)? {
            pc.add_alias(&phrase, &canonical);
        }
    }
    for b in &cfg.brands {
        pc.add_brand(b);
    }
    let brands: Vec<String> = cfg
        .brands
        .iter()
        .map(|b| if pc.lowercase { b.to_lowercase() } else { b.clone() })
        .collect();
    let pipeline = build_pipeline(pc).map_err(|e| SbsError::Config(e.to_string()))?;
    let format = cfg.format.unwrap_or_else(|| CorpusFormat::from_path(path));
    let docs = ingest::read_corpus(path, format)?;
    Ok((preprocess_corpus(&pipeline, &docs), brands))
}

fn scoring(cfg: &RunConfig) -> Result<crate::parallel::ScoringConfig> {
    let mut s = cfg.scoring();
    if let Some(p) = &cfg.lexicon {
        s.lexicon = Some(ingest::read_lexicon(p)?);
    }
    Ok(s)
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    std::fs::create_dir_all(dir).map_err(|e| SbsError::io(dir, e))?;
    let path = dir.join(name);
    File::create(&path)
        .map(BufWriter::new)
        .map_err(|e| SbsError::io(path, e))
}

fn run_score(cfg: &RunConfig) -> Result<()> {
    let scoring = scoring(cfg)?;
    let (corpus, brands) = load_corpus(cfg)?;
    let brand_refs: Vec<&str> = brands.iter().map(String::as_str).collect();
    let periods = score_periods(&corpus, &brand_refs, cfg.granularity, &scoring)?;

    let rows: Vec<ScoreRecord> = periods
        .iter()
        .flat_map(|(_, r)| {
            r.scores
                .iter()
                .zip(&r.polarity)
                .map(|(s, p)| ScoreRecord::new(s, PolarityCell::from(*p)))
        })
        .collect();
    export::write_scores(create(&cfg.output, "scores.csv")?, &rows)?;

    if cfg.granularity.is_some() {
        let table = trajectory(&periods, &brand_refs)?;
        export::write_series(create(&cfg.output, "trajectory.csv")?, &table)?;
    }
    if cfg.export_graphs {
        let dir = cfg.output.join("graphs");
        for (label, r) in &periods {
            let name = format!("{label}.tsv");
            let mut w = create(&dir, &name)?;
            export::write_edge_list(&mut w, &r.graph)
                .and_then(|_| w.flush())
                .map_err(|e| SbsError::io(dir.join(&name), e))?;
        }
    }
    Ok(())
}

fn run_sweep(cfg: &RunConfig) -> Result<()> {
    if cfg.thresholds.is_empty() {
        return Err(SbsError::Config("threshold list is empty (--thresholds)".into()));
    }
    let scoring = scoring(cfg)?;
    let (corpus, brands) = load_corpus(cfg)?;
    let brand_refs: Vec<&str> = brands.iter().map(String::as_str).collect();
    let report = sweep(&corpus, &brand_refs, &cfg.thresholds, &scoring)?;
    export::write_sweep(create(&cfg.output, "sweep.csv")?, &report)
}

pub const COMPARE_COLUMNS: [&str; 11] = [
    "brand",
    "prevalence",
    "diversity",
    "connectivity",
    "sbs",
    "sbs_minmax",
    "sbs_percentile",
    "rank",
    "polarity",
    "unique_associations",
    "top_associations",
];

fn run_compare(cfg: &RunConfig) -> Result<()> {
    let mut scoring = scoring(cfg)?;
    // The rescaled columns are reported separately, relative to the compared brands.
    scoring.rescale = None;
    let (corpus, brands) = load_corpus(cfg)?;
    let brand_refs: Vec<&str> = brands.iter().map(String::as_str).collect();
    let r = score_period(&corpus, &brand_refs, WHOLE_CORPUS, &scoring)?;
    let raw: Vec<f64> = r.scores.iter().map(|s| s.sbs).collect();
    let minmax = sbs_core::metrics::rescale_values(&raw, RescaleMethod::MinMax);
    let pct = sbs_core::metrics::rescale_values(&raw, RescaleMethod::PercentileRank);
    let ranks = sbs_core::sweep::competition_ranks(&raw);

    let mut out = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(create(&cfg.output, "compare.csv")?);
    let csv_err = |e: csv::Error| SbsError::io(cfg.output.join("compare.csv"), e.into());
    out.write_record(COMPARE_COLUMNS).map_err(csv_err)?;
    for (i, s) in r.scores.iter().enumerate() {
        let (unique, top) = if r.graph.contains(&s.brand) {
            let assoc = association_profile(&r.graph, &s.brand, cfg.top_k, &brand_refs)?;
            (
                assoc.iter().filter(|a| a.unique).count().to_string(),
                assoc
                    .iter()
                    .map(|a| format!("{}:{}", a.word, a.weight))
                    .collect::<Vec<_>>()
                    .join(";"),
            )
        } else {
            ("0".to_string(), String::new())
        };
        let polarity = match PolarityCell::from(r.polarity[i]) {
            PolarityCell::NotComputed => String::new(),
            PolarityCell::NoCoverage => "NA".to_string(),
            PolarityCell::Value(v) => fmt_real(v),
        };
        out.write_record([
            s.brand.clone(),
            s.prevalence.to_string(),
            s.diversity.to_string(),
            fmt_real(s.connectivity),
            fmt_real(s.sbs),
            fmt_real(minmax[i]),
            fmt_real(pct[i]),
            ranks[i].to_string(),
            polarity,
            unique,
            top,
        ])
        .map_err(csv_err)?;
    }
    out.flush().map_err(|e| SbsError::io(cfg.output.join("compare.csv"), e))
}

fn run_granger(a: &GrangerArgs) -> Result<()> {
    if a.max_lag == 0 {
        return Err(SbsError::Config("max_lag must be at least 1".into()));
    }
    let file = File::open(&a.scores).map_err(|e| SbsError::ingest(&a.scores, 0, e.to_string()))?;
    let records = export::read_scores(file, &a.scores)?;
    let external = ingest::read_external_series(&a.external)?;
    let opts = GrangerOptions {
        max_lag: a.max_lag,
        difference_y: a.difference_y,
        difference_x: a.difference_x,
    };
    let results = granger_on_scores(&records, &a.brand, &a.metric, &external, &opts)?;
    export::write_granger(create(&a.output, "granger.csv")?, &results)
}
