//! Text normalization: documents in, ordered token lists out.
//!
//! Stages run in a fixed order:
//!
//! 1. html tags and entities are blanked out,
//! 2. the text is split on unicode whitespace; hashtags are dropped and
//!    leading/trailing punctuation is trimmed (intra-word `-` and `'` stay),
//! 3. brand alias phrases are replaced by their canonical token,
//! 4. numbers and stopwords are removed and the remaining words are
//!    lowercased and stemmed.
//!
//! Canonical brand tokens are exempt from step 4, so a brand that collides
//! with a stopword or a stemming rule survives intact.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Seconds since the unix epoch, UTC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Timestamp(pub i64);

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub id: String,
    pub text: String,
    pub timestamp: Timestamp,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>, timestamp: Timestamp) -> Self {
        Document {
            id: id.into(),
            text: text.into(),
            timestamp,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenizedDocument {
    pub id: String,
    pub timestamp: Timestamp,
    pub tokens: Vec<String>,
}

impl TokenizedDocument {
    pub fn new(id: impl Into<String>, timestamp: Timestamp, tokens: Vec<String>) -> Self {
        TokenizedDocument {
            id: id.into(),
            timestamp,
            tokens,
        }
    }

    /// Convenience for tests and fixtures: an untimed document.
    pub fn from_tokens<S: AsRef<str>>(id: impl Into<String>, tokens: &[S]) -> Self {
        TokenizedDocument {
            id: id.into(),
            timestamp: Timestamp::default(),
            tokens: tokens.iter().map(|t| t.as_ref().to_string()).collect(),
        }
    }
}

/// Reduces an inflected word to a stem or lemma.
pub trait Stemmer {
    fn stem(&self, word: &str) -> String;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StemmerKind {
    #[default]
    None,
    /// Snowball (Porter2) English suffix stripping. The implementation
    /// lives outside this crate and is handed to [`Pipeline::with_stemmer`].
    Snowball,
    /// Dictionary lookup, see [`DictionaryLemmatizer`].
    Lemmatizer,
}

/// Replaces known word forms with their lemma; unknown words pass through.
#[derive(Debug, Clone, Default)]
pub struct DictionaryLemmatizer {
    lemmas: BTreeMap<String, String>,
}

const ENGLISH_LEMMAS: &[(&str, &str)] = &[
    ("am", "be"),
    ("are", "be"),
    ("is", "be"),
    ("was", "be"),
    ("were", "be"),
    ("been", "be"),
    ("being", "be"),
    ("has", "have"),
    ("had", "have"),
    ("having", "have"),
    ("does", "do"),
    ("did", "do"),
    ("done", "do"),
    ("went", "go"),
    ("gone", "go"),
    ("goes", "go"),
    ("made", "make"),
    ("said", "say"),
    ("took", "take"),
    ("taken", "take"),
    ("came", "come"),
    ("bought", "buy"),
    ("sold", "sell"),
    ("thought", "think"),
    ("better", "good"),
    ("best", "good"),
    ("worse", "bad"),
    ("worst", "bad"),
    ("children", "child"),
    ("men", "man"),
    ("women", "woman"),
    ("people", "person"),
    ("mice", "mouse"),
    ("feet", "foot"),
    ("teeth", "tooth"),
    ("geese", "goose"),
    ("stars", "star"),
    ("dreams", "dream"),
    ("nights", "night"),
    ("mysteries", "mystery"),
    ("products", "product"),
    ("brands", "brand"),
    ("customers", "customer"),
    ("prices", "price"),
    ("companies", "company"),
];

impl DictionaryLemmatizer {
    pub fn english() -> Self {
        Self::from_pairs(ENGLISH_LEMMAS.iter().copied())
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        DictionaryLemmatizer {
            lemmas: pairs
                .into_iter()
                .map(|(form, lemma)| (form.to_string(), lemma.to_string()))
                .collect(),
        }
    }

    pub fn insert(&mut self, form: impl Into<String>, lemma: impl Into<String>) {
        self.lemmas.insert(form.into(), lemma.into());
    }
}

impl Stemmer for DictionaryLemmatizer {
    fn stem(&self, word: &str) -> String {
        self.lemmas
            .get(word)
            .cloned()
            .unwrap_or_else(|| word.to_string())
    }
}

/// The common English stopword list (the one shipped with NLTK).
pub const ENGLISH_STOPWORDS: &[&str] = &[
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "you're", "you've",
    "you'll", "you'd", "your", "yours", "yourself", "yourselves", "he", "him", "his", "himself",
    "she", "she's", "her", "hers", "herself", "it", "it's", "its", "itself", "they", "them",
    "their", "theirs", "themselves", "what", "which", "who", "whom", "this", "that", "that'll",
    "these", "those", "am", "is", "are", "was", "were", "be", "been", "being", "have", "has",
    "had", "having", "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if", "or",
    "because", "as", "until", "while", "of", "at", "by", "for", "with", "about", "against",
    "between", "into", "through", "during", "before", "after", "above", "below", "to", "from",
    "up", "down", "in", "out", "on", "off", "over", "under", "again", "further", "then", "once",
    "here", "there", "when", "where", "why", "how", "all", "any", "both", "each", "few", "more",
    "most", "other", "some", "such", "no", "nor", "not", "only", "own", "same", "so", "than",
    "too", "very", "s", "t", "can", "will", "just", "don", "don't", "should", "should've", "now",
    "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren", "aren't", "couldn", "couldn't", "didn",
    "didn't", "doesn", "doesn't", "hadn", "hadn't", "hasn", "hasn't", "haven", "haven't", "isn",
    "isn't", "ma", "mightn", "mightn't", "mustn", "mustn't", "needn", "needn't", "shan", "shan't",
    "shouldn", "shouldn't", "wasn", "wasn't", "weren", "weren't", "won", "won't", "wouldn",
    "wouldn't",
];

pub fn english_stopwords() -> BTreeSet<String> {
    ENGLISH_STOPWORDS.iter().map(|s| s.to_string()).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// Lowercase stopwords.
    pub stopwords: BTreeSet<String>,
    pub remove_numbers: bool,
    pub remove_punctuation: bool,
    pub remove_hashtags: bool,
    pub strip_html: bool,
    pub lowercase: bool,
    pub stemmer: StemmerKind,
    /// Minimum corpus-wide count for an adjacent pair to be fused; 0 disables.
    pub bigram_min_count: usize,
    /// Alias phrase → canonical brand token.
    pub brand_aliases: BTreeMap<String, String>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            stopwords: english_stopwords(),
            remove_numbers: true,
            remove_punctuation: true,
            remove_hashtags: true,
            strip_html: true,
            lowercase: true,
            stemmer: StemmerKind::None,
            bigram_min_count: 0,
            brand_aliases: BTreeMap::new(),
        }
    }
}

impl PipelineConfig {
    /// Registers `brand` as a protected canonical token that also matches itself.
    pub fn add_brand(&mut self, brand: &str) {
        let canonical = self.normalize_case(brand);
        self.brand_aliases.insert(canonical.clone(), canonical);
    }

    pub fn add_alias(&mut self, phrase: &str, canonical: &str) {
        self.brand_aliases
            .insert(phrase.to_string(), self.normalize_case(canonical));
    }

    fn normalize_case(&self, word: &str) -> String {
        if self.lowercase {
            word.to_lowercase()
        } else {
            word.to_string()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (phrase, canonical) in &self.brand_aliases {
            if split_phrase(phrase).is_empty() {
                return Err(Error::invalid(format!("alias phrase `{phrase}` has no tokens")));
            }
            if canonical.is_empty() || canonical.chars().any(char::is_whitespace) {
                return Err(Error::invalid(format!(
                    "canonical brand token `{canonical}` must be a single nonempty word"
                )));
            }
            if self.stopwords.contains(&canonical.to_lowercase()) {
                return Err(Error::invalid(format!(
                    "canonical brand token `{canonical}` is listed as a stopword"
                )));
            }
        }
        Ok(())
    }
}

/// A validated, ready-to-run preprocessing pipeline.
pub struct Pipeline {
    cfg: PipelineConfig,
    /// (lowercased phrase tokens, canonical), longest phrase first.
    aliases: Vec<(Vec<String>, String)>,
    protected: BTreeSet<String>,
    stemmer: Option<Box<dyn Stemmer + Send + Sync>>,
}

impl core::fmt::Debug for Pipeline {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Pipeline")
            .field("cfg", &self.cfg)
            .field("stemmed", &self.stemmer.is_some())
            .finish()
    }
}

impl Pipeline {
    /// Builds a pipeline for `StemmerKind::None` or `StemmerKind::Lemmatizer`.
    /// Snowball stemming needs an external implementation, see [`Pipeline::with_stemmer`].
    pub fn new(cfg: PipelineConfig) -> Result<Self> {
        let stemmer: Option<Box<dyn Stemmer + Send + Sync>> = match cfg.stemmer {
            StemmerKind::None => None,
            StemmerKind::Lemmatizer => Some(Box::new(DictionaryLemmatizer::english())),
            StemmerKind::Snowball => {
                return Err(Error::invalid(
                    "snowball stemming requires an explicit stemmer implementation",
                ))
            }
        };
        Self::build(cfg, stemmer)
    }

    pub fn with_stemmer(cfg: PipelineConfig, stemmer: Box<dyn Stemmer + Send + Sync>) -> Result<Self> {
        Self::build(cfg, Some(stemmer))
    }

    fn build(cfg: PipelineConfig, stemmer: Option<Box<dyn Stemmer + Send + Sync>>) -> Result<Self> {
        cfg.validate()?;
        let mut aliases: Vec<(Vec<String>, String)> = cfg
            .brand_aliases
            .iter()
            .map(|(phrase, canonical)| {
                let tokens = split_phrase(phrase)
                    .into_iter()
                    .map(|t| t.to_lowercase())
                    .collect();
                (tokens, canonical.clone())
            })
            .collect();
        aliases.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
        let protected = cfg.brand_aliases.values().cloned().collect();
        Ok(Pipeline {
            cfg,
            aliases,
            protected,
            stemmer,
        })
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.cfg
    }

    /// Canonical brand tokens; exempt from stopword removal, stemming and bigram fusion.
    pub fn protected(&self) -> &BTreeSet<String> {
        &self.protected
    }

    pub fn preprocess(&self, doc: &Document) -> TokenizedDocument {
        TokenizedDocument {
            id: doc.id.clone(),
            timestamp: doc.timestamp,
            tokens: self.tokenize(&doc.text),
        }
    }

    pub fn tokenize(&self, text: &str) -> Vec<String> {
        let cleaned;
        let text = if self.cfg.strip_html {
            cleaned = strip_html(text);
            cleaned.as_str()
        } else {
            text
        };

        let raw: Vec<&str> = text
            .split_whitespace()
            .filter(|piece| !(self.cfg.remove_hashtags && is_hashtag(piece)))
            .map(|piece| {
                if self.cfg.remove_punctuation {
                    trim_punctuation(piece)
                } else {
                    piece
                }
            })
            .filter(|piece| !piece.is_empty())
            .collect();

        let mut out = Vec::with_capacity(raw.len());
        let mut i = 0;
        while i < raw.len() {
            if let Some((len, canonical)) = self.match_alias(&raw[i..]) {
                out.push(canonical.to_owned());
                i += len;
                continue;
            }
            if let Some(word) = self.normalize_word(raw[i]) {
                out.push(word);
            }
            i += 1;
        }
        out
    }

    fn match_alias(&self, rest: &[&str]) -> Option<(usize, &str)> {
        self.aliases.iter().find_map(|(phrase, canonical)| {
            let len = phrase.len();
            let hit = rest.len() >= len
                && phrase
                    .iter()
                    .zip(rest)
                    .all(|(p, r)| eq_ignore_case(p, r));
            hit.then_some((len, canonical.as_str()))
        })
    }

    fn normalize_word(&self, word: &str) -> Option<String> {
        let lower = word.to_lowercase();
        if self.protected.contains(&lower) || self.protected.contains(word) {
            return Some(if self.protected.contains(word) {
                word.to_string()
            } else {
                lower
            });
        }
        if self.cfg.remove_numbers && is_number(word) {
            return None;
        }
        if self.cfg.remove_punctuation && !word.chars().any(char::is_alphanumeric) {
            return None;
        }
        if self.cfg.stopwords.contains(&lower) {
            return None;
        }
        let word = if self.cfg.lowercase { lower } else { word.to_string() };
        let word = match &self.stemmer {
            Some(stemmer) => stemmer.stem(&word),
            None => word,
        };
        (!word.is_empty()).then_some(word)
    }
}

fn eq_ignore_case(lowered: &str, raw: &str) -> bool {
    lowered == raw || lowered == raw.to_lowercase()
}

fn is_hashtag(piece: &str) -> bool {
    let mut chars = piece.chars();
    chars.next() == Some('#') && chars.next().is_some_and(|c| c.is_alphanumeric())
}

pub(crate) fn trim_punctuation(piece: &str) -> &str {
    piece.trim_matches(|c: char| !c.is_alphanumeric())
}

fn is_number(word: &str) -> bool {
    word.chars().any(|c| c.is_ascii_digit())
        && word
            .chars()
            .all(|c| c.is_ascii_digit() || matches!(c, '.' | ',' | ':' | '%' | '/' | '-' | '+'))
}

fn split_phrase(phrase: &str) -> Vec<&str> {
    phrase
        .split_whitespace()
        .map(trim_punctuation)
        .filter(|t| !t.is_empty())
        .collect()
}

/// Blanks out `<tag ...>` spans and `&entity;` references.
pub(crate) fn strip_html(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    while let Some(pos) = rest.find(['<', '&']) {
        out.push_str(&rest[..pos]);
        let tail = &rest[pos..];
        let skip = if let Some(after) = tail.strip_prefix('<') {
            let opens_tag = after
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '/' || c == '!');
            match tail.find('>') {
                Some(end) if opens_tag => Some(end + 1),
                _ => None,
            }
        } else {
            entity_len(tail)
        };
        match skip {
            Some(n) => {
                out.push(' ');
                rest = &tail[n..];
            }
            None => {
                out.push_str(&tail[..1]);
                rest = &tail[1..];
            }
        }
    }
    out.push_str(rest);
    out
}

fn entity_len(tail: &str) -> Option<usize> {
    let body = &tail[1..];
    let end = body.find(';')?;
    let name = &body[..end];
    let valid = !name.is_empty()
        && name.len() <= 10
        && (name.chars().all(|c| c.is_ascii_alphanumeric())
            || (name.starts_with('#') && name[1..].chars().all(|c| c.is_ascii_alphanumeric())));
    valid.then_some(end + 2)
}

/// Fuses adjacent pairs that occur at least `min_count` times corpus-wide
/// into a single `a_b` token. Fusion scans left to right and never overlaps;
/// pairs involving a `protected` token are never fused. `min_count == 0`
/// leaves the corpus unchanged.
pub fn detect_bigrams(
    corpus: &[TokenizedDocument],
    min_count: usize,
    protected: &BTreeSet<String>,
) -> Vec<TokenizedDocument> {
    if min_count == 0 {
        return corpus.to_vec();
    }
    let fusable = |a: &str, b: &str| !protected.contains(a) && !protected.contains(b);

    let mut counts: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for doc in corpus {
        for pair in doc.tokens.windows(2) {
            if fusable(&pair[0], &pair[1]) {
                *counts.entry((&pair[0], &pair[1])).or_default() += 1;
            }
        }
    }
    let frequent: BTreeSet<(&str, &str)> = counts
        .into_iter()
        .filter(|&(_, n)| n >= min_count)
        .map(|(pair, _)| pair)
        .collect();
    if frequent.is_empty() {
        return corpus.to_vec();
    }

    corpus
        .iter()
        .map(|doc| {
            let tokens = &doc.tokens;
            let mut out = Vec::with_capacity(tokens.len());
            let mut i = 0;
            while i < tokens.len() {
                if i + 1 < tokens.len()
                    && frequent.contains(&(tokens[i].as_str(), tokens[i + 1].as_str()))
                {
                    out.push(format!("{}_{}", tokens[i], tokens[i + 1]));
                    i += 2;
                } else {
                    out.push(tokens[i].clone());
                    i += 1;
                }
            }
            TokenizedDocument {
                id: doc.id.clone(),
                timestamp: doc.timestamp,
                tokens: out,
            }
        })
        .collect()
}
