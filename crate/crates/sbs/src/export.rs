//! Output formats.
//!
//! All CSV files are UTF-8 with LF line endings, `.` as decimal separator
//! and reals printed with exactly six decimals, so identical inputs give
//! byte-identical files on every platform.

use std::io::{BufRead, Write};
use std::path::Path;

use sbs_core::{BrandScores, CoocGraph, LagResult, Polarity, SeriesTable};

use crate::error::{Result, SbsError};

/// Six-decimal rendering; negative zero prints as `0.000000`.
pub fn fmt_real(v: f64) -> String {
    let s = format!("{v:.6}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn round6(v: f64) -> f64 {
    fmt_real(v).parse().expect("formatted real parses")
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn csv_err(e: csv::Error) -> SbsError {
    SbsError::Io {
        path: "<csv>".into(),
        source: e.into(),
    }
}

/// Polarity column of `scores.csv`: empty when no lexicon was given,
/// `NA` when no neighbor of the brand is in the lexicon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolarityCell {
    NotComputed,
    NoCoverage,
    Value(f64),
}

impl PolarityCell {
    fn render(self) -> String {
        match self {
            PolarityCell::NotComputed => String::new(),
            PolarityCell::NoCoverage => "NA".to_string(),
            PolarityCell::Value(v) => fmt_real(v),
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "" => Some(PolarityCell::NotComputed),
            "NA" => Some(PolarityCell::NoCoverage),
            v => v.parse().ok().map(PolarityCell::Value),
        }
    }
}

impl From<Option<Polarity>> for PolarityCell {
    fn from(p: Option<Polarity>) -> Self {
        match p {
            None => PolarityCell::NotComputed,
            Some(Polarity::NoCoverage) => PolarityCell::NoCoverage,
            Some(Polarity::Score(v)) => PolarityCell::Value(round6(v)),
        }
    }
}

pub const SCORE_COLUMNS: [&str; 12] = [
    "brand",
    "period",
    "prevalence",
    "prevalence_rel",
    "diversity",
    "diversity_norm",
    "connectivity",
    "connectivity_norm",
    "sbs",
    "polarity",
    "n_nodes",
    "tot_words",
];

/// One `scores.csv` row, with reals already rounded to the written precision.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRecord {
    pub brand: String,
    pub period: String,
    pub prevalence: u64,
    pub prevalence_rel: f64,
    pub diversity: u64,
    pub diversity_norm: f64,
    pub connectivity: f64,
    pub connectivity_norm: f64,
    pub sbs: f64,
    pub polarity: PolarityCell,
    pub n_nodes: usize,
    pub tot_words: u64,
}

impl ScoreRecord {
    pub fn new(s: &BrandScores, polarity: PolarityCell) -> Self {
        ScoreRecord {
            brand: s.brand.clone(),
            period: s.period.clone(),
            prevalence: s.prevalence,
            prevalence_rel: round6(s.prevalence_rel),
            diversity: s.diversity,
            diversity_norm: round6(s.diversity_norm),
            connectivity: round6(s.connectivity),
            connectivity_norm: round6(s.connectivity_norm),
            sbs: round6(s.sbs),
            polarity: match polarity {
                PolarityCell::Value(v) => PolarityCell::Value(round6(v)),
                other => other,
            },
            n_nodes: s.n_nodes,
            tot_words: s.tot_words,
        }
    }

    fn fields(&self) -> [String; 12] {
        [
            self.brand.clone(),
            self.period.clone(),
            self.prevalence.to_string(),
            fmt_real(self.prevalence_rel),
            self.diversity.to_string(),
            fmt_real(self.diversity_norm),
            fmt_real(self.connectivity),
            fmt_real(self.connectivity_norm),
            fmt_real(self.sbs),
            self.polarity.render(),
            self.n_nodes.to_string(),
            self.tot_words.to_string(),
        ]
    }
}

pub fn write_scores<W: Write>(w: W, rows: &[ScoreRecord]) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(SCORE_COLUMNS).map_err(csv_err)?;
    for row in rows {
        out.write_record(row.fields()).map_err(csv_err)?;
    }
    out.flush().map_err(|e| SbsError::io("<csv>", e))
}

pub fn read_scores(reader: impl std::io::Read, path: &Path) -> Result<Vec<ScoreRecord>> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| SbsError::ingest(path, 1, e.to_string()))?
        .clone();
    if headers.iter().ne(SCORE_COLUMNS) {
        return Err(SbsError::ingest(path, 1, "unexpected scores.csv header"));
    }
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| SbsError::ingest(path, 0, e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let bad = |col: &str| SbsError::ingest(path, line, format!("invalid `{col}` value"));
        let int = |i: usize| record[i].parse::<u64>().map_err(|_| bad(SCORE_COLUMNS[i]));
        let real = |i: usize| record[i].parse::<f64>().map_err(|_| bad(SCORE_COLUMNS[i]));
        rows.push(ScoreRecord {
            brand: record[0].to_string(),
            period: record[1].to_string(),
            prevalence: int(2)?,
            prevalence_rel: real(3)?,
            diversity: int(4)?,
            diversity_norm: real(5)?,
            connectivity: real(6)?,
            connectivity_norm: real(7)?,
            sbs: real(8)?,
            polarity: PolarityCell::parse(&record[9]).ok_or_else(|| bad("polarity"))?,
            n_nodes: int(10)? as usize,
            tot_words: int(11)?,
        });
    }
    Ok(rows)
}

/// `threshold,brand,sbs,rank` rows followed by `# stable: true|false`.
pub fn write_sweep<W: Write>(mut w: W, report: &sbs_core::SweepReport) -> Result<()> {
    {
        let mut out = csv_writer(&mut w);
        out.write_record(["threshold", "brand", "sbs", "rank"]).map_err(csv_err)?;
        for (t, &threshold) in report.thresholds.iter().enumerate() {
            for (b, brand) in report.brands.iter().enumerate() {
                out.write_record([
                    threshold.to_string(),
                    brand.clone(),
                    fmt_real(report.sbs(t, b)),
                    report.ranks[t][b].to_string(),
                ])
                .map_err(csv_err)?;
            }
        }
        out.flush().map_err(|e| SbsError::io("<csv>", e))?;
    }
    writeln!(w, "# stable: {}", report.stable).map_err(|e| SbsError::io("<csv>", e))
}

pub fn write_granger<W: Write>(w: W, results: &[LagResult]) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(["lag", "chi2", "df", "p_value", "nobs"]).map_err(csv_err)?;
    for r in results {
        out.write_record([
            r.lag.to_string(),
            fmt_real(r.chi2),
            r.df.to_string(),
            fmt_real(r.p_value),
            r.nobs.to_string(),
        ])
        .map_err(csv_err)?;
    }
    out.flush().map_err(|e| SbsError::io("<csv>", e))
}

/// Wide table: `period` then one column per series; missing values are empty.
pub fn write_series<W: Write>(w: W, table: &SeriesTable) -> Result<()> {
    let mut out = csv_writer(w);
    let names: Vec<&str> = table.columns().map(|(n, _)| n).collect();
    out.write_record(std::iter::once("period").chain(names.iter().copied()))
        .map_err(csv_err)?;
    for (i, period) in table.periods().iter().enumerate() {
        let mut row = vec![period.clone()];
        for (_, values) in table.columns() {
            row.push(values[i].map(fmt_real).unwrap_or_default());
        }
        out.write_record(row).map_err(csv_err)?;
    }
    out.flush().map_err(|e| SbsError::io("<csv>", e))
}

/// `word_a<TAB>word_b<TAB>weight` per edge, then a `#nodes` line followed
/// by the isolated nodes, one per line.
pub fn write_edge_list<W: Write>(mut w: W, g: &CoocGraph) -> std::io::Result<()> {
    for (a, b, weight) in g.edges() {
        writeln!(w, "{a}\t{b}\t{weight}")?;
    }
    writeln!(w, "#nodes")?;
    for id in 0..g.node_count() as u32 {
        if g.degree_of(id) == 0 {
            writeln!(w, "{}", g.word(id))?;
        }
    }
    Ok(())
}

pub fn read_edge_list(reader: impl BufRead, path: &Path, window: usize) -> Result<CoocGraph> {
    let mut edges: Vec<(String, String, u64)> = Vec::new();
    let mut isolated: Vec<String> = Vec::new();
    let mut in_nodes = false;
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| SbsError::ingest(path, i + 1, e.to_string()))?;
        if line.is_empty() {
            continue;
        }
        if line == "#nodes" {
            in_nodes = true;
            continue;
        }
        if in_nodes {
            isolated.push(line);
            continue;
        }
        let parts: Vec<&str> = line.split('\t').collect();
        let [a, b, w] = parts[..] else {
            return Err(SbsError::ingest(path, i + 1, "expected `a<TAB>b<TAB>weight`"));
        };
        let w: u64 = w
            .parse()
            .map_err(|_| SbsError::ingest(path, i + 1, format!("invalid weight `{w}`")))?;
        edges.push((a.to_string(), b.to_string(), w));
    }
    CoocGraph::from_weighted_edges(
        isolated.iter().map(String::as_str),
        edges.iter().map(|(a, b, w)| (a.as_str(), b.as_str(), *w)),
        window,
    )
    .map_err(|e| SbsError::ingest(path, 0, e.to_string()))
}
