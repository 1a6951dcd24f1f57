//! Input files: corpora (JSONL or CSV), stopword lists, alias tables,
//! polarity lexicons and external period series.
//!
//! Every parse error carries the file path and 1-based line number.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use chrono::DateTime;
use serde::Deserialize;

use sbs_core::{Document, PolarityLexicon, Timestamp};

use crate::error::{Result, SbsError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Jsonl,
    Csv,
}

impl CorpusFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" | "ndjson" => Some(CorpusFormat::Jsonl),
            "csv" => Some(CorpusFormat::Csv),
            _ => None,
        }
    }

    /// Guesses from the file extension; anything but `.csv` is JSONL.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => CorpusFormat::Csv,
            _ => CorpusFormat::Jsonl,
        }
    }
}

#[derive(Deserialize)]
struct RawDocument {
    id: serde_json::Value,
    text: String,
    timestamp: String,
}

pub fn parse_timestamp(s: &str) -> std::result::Result<Timestamp, String> {
    DateTime::parse_from_rfc3339(s.trim())
        .map(|dt| Timestamp(dt.timestamp()))
        .map_err(|e| format!("invalid RFC 3339 timestamp `{s}`: {e}"))
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| SbsError::ingest(path, 0, format!("cannot open: {e}")))
}

pub fn read_corpus(path: &Path, format: CorpusFormat) -> Result<Vec<Document>> {
    let file = open(path)?;
    match format {
        CorpusFormat::Jsonl => parse_jsonl(BufReader::new(file), path),
        CorpusFormat::Csv => parse_csv(file, path),
    }
}

struct IdCheck<'a> {
    path: &'a Path,
    seen: HashSet<String>,
}

impl IdCheck<'_> {
    fn admit(&mut self, id: &str, line: usize) -> Result<()> {
        if !self.seen.insert(id.to_string()) {
            return Err(SbsError::ingest(self.path, line, format!("duplicate document id `{id}`")));
        }
        Ok(())
    }
}

pub fn parse_jsonl(reader: impl BufRead, path: &Path) -> Result<Vec<Document>> {
    let mut ids = IdCheck { path, seen: HashSet::new() };
    let mut docs = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| SbsError::ingest(path, lineno, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawDocument = serde_json::from_str(&line)
            .map_err(|e| SbsError::ingest(path, lineno, format!("invalid JSON record: {e}")))?;
        let id = match raw.id {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(n) => n.to_string(),
            other => {
                return Err(SbsError::ingest(path, lineno, format!("unsupported id value {other}")))
            }
        };
        let timestamp = parse_timestamp(&raw.timestamp).map_err(|m| SbsError::ingest(path, lineno, m))?;
        ids.admit(&id, lineno)?;
        docs.push(Document { id, text: raw.text, timestamp });
    }
    Ok(docs)
}

pub fn parse_csv(reader: impl Read, path: &Path) -> Result<Vec<Document>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| SbsError::ingest(path, 1, format!("unreadable header: {e}")))?
        .clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| SbsError::ingest(path, 1, format!("missing `{name}` column")))
    };
    let (id_col, text_col, ts_col) = (col("id")?, col("text")?, col("timestamp")?);

    let mut ids = IdCheck { path, seen: HashSet::new() };
    let mut docs = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            SbsError::ingest(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| record.get(i).unwrap_or_default();
        let timestamp = parse_timestamp(field(ts_col)).map_err(|m| SbsError::ingest(path, line, m))?;
        let id = field(id_col).to_string();
        ids.admit(&id, line)?;
        docs.push(Document {
            id,
            text: field(text_col).to_string(),
            timestamp,
        });
    }
    Ok(docs)
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn content_lines(path: &Path) -> Result<Vec<(usize, String)>> {
    let reader = BufReader::new(open(path)?);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| SbsError::ingest(path, i + 1, e.to_string()))?;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
            continue;
        }
        out.push((i + 1, trimmed.to_string()));
    }
    Ok(out)
}

/// One stopword per line; `#` starts a comment line.
pub fn read_stopwords(path: &Path) -> Result<BTreeSet<String>> {
    Ok(content_lines(path)?
        .into_iter()
        .map(|(_, l)| l.trim().to_lowercase())
        .collect())
}

/// `alias phrase<TAB>canonical` per line.
pub fn read_aliases(path: &Path) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (line, text) in content_lines(path)? {
        let (phrase, canonical) = text
            .split_once('\t')
            .ok_or_else(|| SbsError::ingest(path, line, "expected `alias<TAB>canonical`"))?;
        let (phrase, canonical) = (phrase.trim(), canonical.trim());
        if phrase.is_empty() || canonical.is_empty() {
            return Err(SbsError::ingest(path, line, "empty alias or canonical token"));
        }
        out.insert(phrase.to_string(), canonical.to_string());
    }
    Ok(out)
}

/// `word<TAB>polarity` per line, polarity in [-1, 1].
pub fn read_lexicon(path: &Path) -> Result<PolarityLexicon> {
    let mut entries = BTreeMap::new();
    for (line, text) in content_lines(path)? {
        let (word, value) = text
            .split_once('\t')
            .ok_or_else(|| SbsError::ingest(path, line, "expected `word<TAB>polarity`"))?;
        let p: f64 = value
            .trim()
            .parse()
            .map_err(|_| SbsError::ingest(path, line, format!("invalid polarity `{}`", value.trim())))?;
        if !(-1.0..=1.0).contains(&p) {
            return Err(SbsError::ingest(path, line, format!("polarity {p} outside [-1, 1]")));
        }
        entries.insert(word.trim().to_string(), p);
    }
    PolarityLexicon::new(entries).map_err(|e| SbsError::ingest(path, 0, e.to_string()))
}

/// `period,value` rows; a leading header row is skipped.
pub fn read_external_series(path: &Path) -> Result<Vec<(String, f64)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(open(path)?);
    let mut out = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| SbsError::ingest(path, i + 1, e.to_string()))?;
        let line = record.position().map_or(i + 1, |p| p.line() as usize);
        if record.len() != 2 {
            return Err(SbsError::ingest(path, line, "expected `period,value`"));
        }
        let (period, value) = (record[0].trim(), record[1].trim());
        match value.parse::<f64>() {
            Ok(v) => out.push((period.to_string(), v)),
            Err(_) if i == 0 => continue,
            Err(_) => {
                return Err(SbsError::ingest(path, line, format!("invalid value `{value}`")))
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn jsonl_records() {
        let text = r#"{"id": "a", "text": "hello world", "timestamp": "2017-07-01T10:00:00Z"}

{"id": 7, "text": "again", "timestamp": "2017-07-02T00:00:00+02:00"}
"#;
        let docs = parse_jsonl(text.as_bytes(), Path::new("c.jsonl")).unwrap();
        assert_eq!(docs.len(), 2);
        assert_eq!(docs[1].id, "7");
        assert_eq!(docs[1].timestamp, Timestamp(1498946400));
    }

    #[test]
    fn jsonl_errors_name_the_line() {
        let text = "{\"id\":\"a\",\"text\":\"x\",\"timestamp\":\"2017-07-01T00:00:00Z\"}\n{\"id\":\"b\",\"text\":\"y\",\"timestamp\":\"yesterday\"}\n";
        let err = parse_jsonl(text.as_bytes(), Path::new("c.jsonl")).unwrap_err();
        assert!(err.to_string().starts_with("c.jsonl:2:"), "{err}");
        assert_eq!(err.exit_code(), 3);

        let dup = "{\"id\":\"a\",\"text\":\"x\",\"timestamp\":\"2017-07-01T00:00:00Z\"}\n{\"id\":\"a\",\"text\":\"y\",\"timestamp\":\"2017-07-01T00:00:00Z\"}\n";
        let err = parse_jsonl(dup.as_bytes(), Path::new("c.jsonl")).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn csv_records() {
        let text = "timestamp,id,text\n2017-07-01T00:00:00Z,d1,\"quoted, text\"\n2017-07-02T00:00:00Z,d2,plain\n";
        let docs = parse_csv(text.as_bytes(), Path::new("c.csv")).unwrap();
        assert_eq!(docs[0].text, "quoted, text");
        assert_eq!(docs[1].id, "d2");
        let bad = "id,text\nd1,x\n";
        assert!(parse_csv(bad.as_bytes(), Path::new("c.csv")).is_err());
        let bad_ts = "id,text,timestamp\nd1,x,2017-07-01T00:00:00Z\nd2,y,nope\n";
        let err = parse_csv(bad_ts.as_bytes(), Path::new("c.csv")).unwrap_err();
        assert!(err.to_string().starts_with("c.csv:3:"), "{err}");
    }

    #[test]
    fn auxiliary_files() {
        let dir = tempfile::tempdir().unwrap();
        let write = |name: &str, body: &str| {
            let p = dir.path().join(name);
            std::fs::File::create(&p).unwrap().write_all(body.as_bytes()).unwrap();
            p
        };
        let stop = write("stop.txt", "# comment\nThe\n\nand\n");
        assert_eq!(read_stopwords(&stop).unwrap(), ["and".to_string(), "the".to_string()].into());

        let alias = write("alias.tsv", "acme cola\tacmecola\n# x\nGeneral Electric\tge\n");
        let a = read_aliases(&alias).unwrap();
        assert_eq!(a["General Electric"], "ge");
        let bad = write("bad.tsv", "no tab here\n");
        assert!(read_aliases(&bad).unwrap_err().to_string().contains(":1:"));

        let lex = write("lex.tsv", "good\t1\nbad\t-0.5\n");
        assert_eq!(read_lexicon(&lex).unwrap().get("bad"), Some(-0.5));
        let lex_bad = write("lex2.tsv", "good\t1\nawful\t-3\n");
        assert!(read_lexicon(&lex_bad).unwrap_err().to_string().contains(":2:"));

        let ext = write("ext.csv", "period,value\n2017-W01,1.5\n2017-W02,-2\n");
        assert_eq!(
            read_external_series(&ext).unwrap(),
            vec![("2017-W01".to_string(), 1.5), ("2017-W02".to_string(), -2.0)]
        );

        let missing = dir.path().join("nope.jsonl");
        let err = read_corpus(&missing, CorpusFormat::Jsonl).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}
