//! Degree, weighted degree and exact betweenness centrality.
//!
//! Betweenness uses hop-count shortest paths (edge weights are association
//! strengths, not distances). Each source runs one BFS followed by the
//! usual dependency back-propagation; pairs in different components
//! contribute nothing.
//!
//! Per-source contributions are summed inside fixed source chunks whose
//! size depends only on the node count, then the chunk totals are added in
//! chunk order. Callers that evaluate the chunks concurrently
//! ([`source_chunks`], [`betweenness_partial`], [`combine_partials`]) get
//! results bit-identical to [`betweenness_all`].

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::Result;
use crate::graph::CoocGraph;

pub fn degree(g: &CoocGraph, word: &str) -> Result<usize> {
    Ok(g.degree_of(g.require(word)?))
}

pub fn weighted_degree(g: &CoocGraph, word: &str) -> Result<u64> {
    Ok(g.weighted_degree_of(g.require(word)?))
}

/// Source ranges whose partial sums make up the betweenness vector.
pub fn source_chunks(n: usize) -> Vec<Range<u32>> {
    let size = (n.div_ceil(64)).max(32);
    (0..n)
        .step_by(size)
        .map(|start| start as u32..(start + size).min(n) as u32)
        .collect()
}

struct Workspace {
    sigma: Vec<f64>,
    dist: Vec<u32>,
    delta: Vec<f64>,
    order: Vec<u32>,
    queue: VecDeque<u32>,
}

const UNSEEN: u32 = u32::MAX;

impl Workspace {
    fn new(n: usize) -> Self {
        Workspace {
            sigma: vec![0.0; n],
            dist: vec![UNSEEN; n],
            delta: vec![0.0; n],
            order: Vec::with_capacity(n),
            queue: VecDeque::with_capacity(n),
        }
    }

    fn single_source(&mut self, g: &CoocGraph, s: u32, out: &mut [f64]) {
        for &v in &self.order {
            let v = v as usize;
            self.sigma[v] = 0.0;
            self.dist[v] = UNSEEN;
            self.delta[v] = 0.0;
        }
        self.order.clear();

        self.sigma[s as usize] = 1.0;
        self.dist[s as usize] = 0;
        self.queue.push_back(s);
        while let Some(v) = self.queue.pop_front() {
            self.order.push(v);
            let next = self.dist[v as usize] + 1;
            for &w in g.neighbor_ids(v) {
                let w = w as usize;
                if self.dist[w] == UNSEEN {
                    self.dist[w] = next;
                    self.queue.push_back(w as u32);
                }
                if self.dist[w] == next {
                    self.sigma[w] += self.sigma[v as usize];
                }
            }
        }

        for &w in self.order.iter().rev() {
            let w = w as usize;
            let dw = self.dist[w];
            if dw == 0 {
                continue;
            }
            let coeff = (1.0 + self.delta[w]) / self.sigma[w];
            for &v in g.neighbor_ids(w as u32) {
                let v = v as usize;
                if self.dist[v] + 1 == dw {
                    self.delta[v] += self.sigma[v] * coeff;
                }
            }
            out[w] += self.delta[w];
        }
    }
}

/// Sum of single-source dependencies for the sources in `chunk`.
/// Every unordered pair is counted from both ends; [`combine_partials`] halves.
pub fn betweenness_partial(g: &CoocGraph, chunk: Range<u32>) -> Vec<f64> {
    let n = g.node_count();
    let mut out = vec![0.0; n];
    let mut ws = Workspace::new(n);
    for s in chunk {
        ws.single_source(g, s, &mut out);
    }
    out
}

/// Adds chunk partials in the order given and halves the result.
pub fn combine_partials(n: usize, partials: impl IntoIterator<Item = Vec<f64>>) -> Vec<f64> {
    let mut total = vec![0.0; n];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    for t in &mut total {
        *t *= 0.5;
    }
    total
}

/// Exact (unnormalized) betweenness of every node, indexed by node id.
pub fn betweenness_all(g: &CoocGraph) -> Vec<f64> {
    let n = g.node_count();
    combine_partials(
        n,
        source_chunks(n)
            .into_iter()
            .map(|chunk| betweenness_partial(g, chunk)),
    )
}

/// Per-node centralities of one graph, indexed by node id.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityReport {
    pub degree: Vec<usize>,
    pub weighted_degree: Vec<u64>,
    pub betweenness: Vec<f64>,
}

impl CentralityReport {
    pub fn compute(g: &CoocGraph) -> Self {
        Self::with_betweenness(g, betweenness_all(g))
    }

    /// Uses a betweenness vector computed elsewhere (e.g. in parallel).
    pub fn with_betweenness(g: &CoocGraph, betweenness: Vec<f64>) -> Self {
        assert_eq!(betweenness.len(), g.node_count());
        let ids = 0..g.node_count() as u32;
        CentralityReport {
            degree: ids.clone().map(|i| g.degree_of(i)).collect(),
            weighted_degree: ids.map(|i| g.weighted_degree_of(i)).collect(),
            betweenness,
        }
    }

    pub fn betweenness_by_word(&self, g: &CoocGraph) -> BTreeMap<String, f64> {
        g.words()
            .iter()
            .cloned()
            .zip(self.betweenness.iter().copied())
            .collect()
    }
}
