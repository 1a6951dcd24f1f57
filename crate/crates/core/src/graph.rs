//! Undirected weighted word co-occurrence networks.
//!
//! Within each document, every token at position `p` emits a directed arc
//! to each token at position `q` with `1 <= q - p <= window`. Arcs between
//! identical words (loops) are discarded, direction is dropped, and parallel
//! arcs collapse into a single edge whose weight is the arc count. Windows
//! never cross document boundaries.
//!
//! Nodes are stored in lexicographic order and addressed by dense `u32`
//! ids; adjacency is kept in compressed sparse rows with sorted neighbor
//! lists, so every traversal is deterministic.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::text::TokenizedDocument;

/// Sorted, deduplicated word list shared by the graph and its builders.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    words: Vec<String>,
}

impl Vocabulary {
    pub fn from_corpus(corpus: &[TokenizedDocument]) -> Self {
        let set: BTreeSet<&str> = corpus
            .iter()
            .flat_map(|d| d.tokens.iter().map(String::as_str))
            .collect();
        Vocabulary {
            words: set.into_iter().map(str::to_string).collect(),
        }
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut words: Vec<String> = words.into_iter().map(Into::into).collect();
        words.sort_unstable();
        words.dedup();
        Vocabulary { words }
    }

    pub fn id(&self, word: &str) -> Option<u32> {
        self.words
            .binary_search_by(|w| w.as_str().cmp(word))
            .ok()
            .map(|i| i as u32)
    }

    pub fn word(&self, id: u32) -> &str {
        &self.words[id as usize]
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }
}

#[inline]
fn pair_key(a: u32, b: u32) -> u64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    ((lo as u64) << 32) | hi as u64
}

#[inline]
fn split_key(key: u64) -> (u32, u32) {
    ((key >> 32) as u32, key as u32)
}

/// Collapsed undirected arc counts keyed by node-id pair, sorted by key.
///
/// Counts from disjoint document batches can be computed independently and
/// combined with [`PairCounts::merge`]; the result does not depend on how
/// the corpus was split.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairCounts {
    entries: Vec<(u64, u64)>,
}

impl PairCounts {
    pub fn from_documents(vocab: &Vocabulary, docs: &[TokenizedDocument], window: usize) -> Self {
        let mut keys = Vec::new();
        let mut ids = Vec::new();
        for doc in docs {
            ids.clear();
            ids.extend(doc.tokens.iter().map(|t| {
                vocab
                    .id(t)
                    .expect("vocabulary must cover every corpus token")
            }));
            if ids.len() < 2 {
                continue;
            }
            for (p, &a) in ids.iter().enumerate() {
                let end = (p + window).min(ids.len() - 1);
                for &b in &ids[p + 1..=end] {
                    if a != b {
                        keys.push(pair_key(a, b));
                    }
                }
            }
        }
        keys.sort_unstable();
        let mut entries: Vec<(u64, u64)> = Vec::new();
        for key in keys {
            match entries.last_mut() {
                Some((k, n)) if *k == key => *n += 1,
                _ => entries.push((key, 1)),
            }
        }
        PairCounts { entries }
    }

    pub fn merge(parts: impl IntoIterator<Item = PairCounts>) -> Self {
        let mut all: Vec<(u64, u64)> = parts.into_iter().flat_map(|p| p.entries).collect();
        all.sort_unstable_by_key(|e| e.0);
        let mut entries: Vec<(u64, u64)> = Vec::with_capacity(all.len());
        for (key, n) in all {
            match entries.last_mut() {
                Some((k, m)) if *k == key => *m += n,
                _ => entries.push((key, n)),
            }
        }
        PairCounts { entries }
    }

    /// Linear merge of two count lists; associative and commutative.
    pub fn merge_two(a: PairCounts, b: PairCounts) -> Self {
        if a.is_empty() {
            return b;
        }
        if b.is_empty() {
            return a;
        }
        let mut entries = Vec::with_capacity(a.len() + b.len());
        let (mut x, mut y) = (a.entries.into_iter().peekable(), b.entries.into_iter().peekable());
        loop {
            let next = match (x.peek(), y.peek()) {
                (Some(&(ka, na)), Some(&(kb, nb))) => {
                    if ka < kb {
                        x.next();
                        (ka, na)
                    } else if kb < ka {
                        y.next();
                        (kb, nb)
                    } else {
                        x.next();
                        y.next();
                        (ka, na + nb)
                    }
                }
                (Some(_), None) => x.next().unwrap(),
                (None, Some(_)) => y.next().unwrap(),
                (None, None) => break,
            };
            entries.push(next);
        }
        PairCounts { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoocGraph {
    vocab: Vocabulary,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
    weights: Vec<u64>,
    window: usize,
}

impl CoocGraph {
    /// Assembles a graph from collapsed pair counts over `vocab`.
    pub fn from_pair_counts(vocab: Vocabulary, counts: PairCounts, window: usize) -> Self {
        Self::from_sorted_entries(vocab, &counts.entries, window)
    }

    fn from_sorted_entries(vocab: Vocabulary, entries: &[(u64, u64)], window: usize) -> Self {
        let n = vocab.len();
        let mut degree = vec![0usize; n];
        for &(key, _) in entries {
            let (a, b) = split_key(key);
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor: Vec<usize> = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; offsets[n]];
        let mut weights = vec![0u64; offsets[n]];
        for &(key, w) in entries {
            let (a, b) = split_key(key);
            for (from, to) in [(a, b), (b, a)] {
                let slot = &mut cursor[from as usize];
                neighbors[*slot] = to;
                weights[*slot] = w;
                *slot += 1;
            }
        }
        CoocGraph {
            vocab,
            offsets,
            neighbors,
            weights,
            window,
        }
    }

    /// Builds a graph from an explicit node and edge list. Endpoints are added
    /// as nodes, repeated pairs have their weights summed.
    pub fn from_weighted_edges<'a>(
        nodes: impl IntoIterator<Item = &'a str>,
        edges: impl IntoIterator<Item = (&'a str, &'a str, u64)>,
        window: usize,
    ) -> Result<Self> {
        let edges: Vec<(&str, &str, u64)> = edges.into_iter().collect();
        for &(a, b, w) in &edges {
            if a == b {
                return Err(Error::invalid(format!("self-loop on `{a}`")));
            }
            if w == 0 {
                return Err(Error::invalid(format!("edge ({a}, {b}) has weight 0")));
            }
        }
        let vocab = Vocabulary::from_words(
            nodes
                .into_iter()
                .chain(edges.iter().flat_map(|&(a, b, _)| [a, b])),
        );
        let mut entries: Vec<(u64, u64)> = edges
            .iter()
            .map(|&(a, b, w)| (pair_key(vocab.id(a).unwrap(), vocab.id(b).unwrap()), w))
            .collect();
        entries.sort_unstable_by_key(|e| e.0);
        Ok(Self::from_sorted_entries(
            vocab,
            &merge_sorted(entries),
            window,
        ))
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn words(&self) -> &[String] {
        self.vocab.words()
    }

    pub fn node_count(&self) -> usize {
        self.vocab.len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn node_id(&self, word: &str) -> Option<u32> {
        self.vocab.id(word)
    }

    pub(crate) fn require(&self, word: &str) -> Result<u32> {
        self.node_id(word)
            .ok_or_else(|| Error::NotFound(word.to_string()))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.node_id(word).is_some()
    }

    pub fn word(&self, id: u32) -> &str {
        self.vocab.word(id)
    }

    /// Neighbor ids of `id`, ascending.
    pub fn neighbor_ids(&self, id: u32) -> &[u32] {
        let i = id as usize;
        &self.neighbors[self.offsets[i]..self.offsets[i + 1]]
    }

    /// `(neighbor id, weight)` pairs of `id`, ascending by neighbor id.
    pub fn adjacent(&self, id: u32) -> impl Iterator<Item = (u32, u64)> + '_ {
        let i = id as usize;
        let range = self.offsets[i]..self.offsets[i + 1];
        self.neighbors[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    pub fn degree_of(&self, id: u32) -> usize {
        let i = id as usize;
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn weighted_degree_of(&self, id: u32) -> u64 {
        let i = id as usize;
        self.weights[self.offsets[i]..self.offsets[i + 1]].iter().sum()
    }

    /// Weight of the edge between `a` and `b`, in either order.
    pub fn weight(&self, a: &str, b: &str) -> Option<u64> {
        let (a, b) = (self.node_id(a)?, self.node_id(b)?);
        let start = self.offsets[a as usize];
        self.neighbor_ids(a)
            .binary_search(&b)
            .ok()
            .map(|pos| self.weights[start + pos])
    }

    /// Each undirected edge once, as `(a, b, weight)` with `a < b`, in
    /// lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, u64)> + '_ {
        (0..self.node_count() as u32).flat_map(move |a| {
            self.adjacent(a)
                .filter(move |&(b, _)| b > a)
                .map(move |(b, w)| (self.word(a), self.word(b), w))
        })
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum::<u64>() / 2
    }

    fn entries(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for a in 0..self.node_count() as u32 {
            for (b, w) in self.adjacent(a) {
                if b > a {
                    out.push((pair_key(a, b), w));
                }
            }
        }
        out
    }
}

fn merge_sorted(entries: Vec<(u64, u64)>) -> Vec<(u64, u64)> {
    let mut out: Vec<(u64, u64)> = Vec::with_capacity(entries.len());
    for (key, w) in entries {
        match out.last_mut() {
            Some((k, m)) if *k == key => *m += w,
            _ => out.push((key, w)),
        }
    }
    out
}

/// Builds the co-occurrence network of `corpus` with the given positional window.
pub fn build_graph(corpus: &[TokenizedDocument], window: usize) -> Result<CoocGraph> {
    if window == 0 {
        return Err(Error::invalid("window must be at least 1"));
    }
    let vocab = Vocabulary::from_corpus(corpus);
    let counts = PairCounts::from_documents(&vocab, corpus, window);
    Ok(CoocGraph::from_pair_counts(vocab, counts, window))
}

/// Drops edges lighter than `min_weight`. Nodes left isolated are kept.
pub fn filter_edges(g: &CoocGraph, min_weight: u64) -> CoocGraph {
    let kept: Vec<(u64, u64)> = g
        .entries()
        .into_iter()
        .filter(|&(_, w)| w >= min_weight)
        .collect();
    CoocGraph::from_sorted_entries(g.vocab.clone(), &kept, g.window)
}

/// Contracts `group` into a single node named `merged_name`. Edges from the
/// group to an outside word are summed; edges inside the group disappear.
pub fn merge_nodes(g: &CoocGraph, group: &[&str], merged_name: &str) -> Result<CoocGraph> {
    if group.is_empty() {
        return Err(Error::invalid("merge group is empty"));
    }
    let members: BTreeSet<u32> = group
        .iter()
        .map(|w| g.require(w))
        .collect::<Result<_>>()?;
    if let Some(id) = g.node_id(merged_name) {
        if !members.contains(&id) {
            return Err(Error::invalid(format!(
                "merged name `{merged_name}` already names a node outside the group"
            )));
        }
    }

    let vocab = Vocabulary::from_words(
        g.words()
            .iter()
            .enumerate()
            .filter(|(i, _)| !members.contains(&(*i as u32)))
            .map(|(_, w)| w.clone())
            .chain([merged_name.to_string()]),
    );
    let merged = vocab.id(merged_name).unwrap();
    let remap = |old: u32| {
        if members.contains(&old) {
            merged
        } else {
            vocab.id(g.word(old)).unwrap()
        }
    };
    let mut entries: Vec<(u64, u64)> = g
        .entries()
        .into_iter()
        .filter_map(|(key, w)| {
            let (a, b) = split_key(key);
            let (a, b) = (remap(a), remap(b));
            (a != b).then(|| (pair_key(a, b), w))
        })
        .collect();
    entries.sort_unstable_by_key(|e| e.0);
    Ok(CoocGraph::from_sorted_entries(
        vocab,
        &merge_sorted(entries),
        g.window,
    ))
}
