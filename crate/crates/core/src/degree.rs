//! Degree functions and the spanning trees of `K_{m,n}` with prescribed
//! source degrees.
//!
//! Sources and destinations carry 0-based labels. Inside graph routines the
//! two sides share one vertex numbering: source `s` is vertex `s` and
//! destination `t` is vertex `m + t`.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::union_find::UnionFind;

/// The prescribed degree excess `d(s)` of every source. Source `s` has
/// degree `1 + d(s)` in every tree, and there are `1 + sum(d)` destinations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DegreeFunction {
    degrees: Vec<usize>,
    destinations: usize,
}

impl DegreeFunction {
    pub fn new(degrees: Vec<usize>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::EmptyDegrees);
        }
        let destinations = 1 + degrees.iter().sum::<usize>();
        Ok(Self {
            degrees,
            destinations,
        })
    }

    /// Validates a raw integer sequence, rejecting negative entries by index.
    pub fn from_signed(degrees: &[i64]) -> Result<Self> {
        let checked = degrees
            .iter()
            .enumerate()
            .map(|(index, &value)| {
                usize::try_from(value).map_err(|_| Error::InvalidDegree {
                    index,
                    value: value.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(checked)
    }

    /// `d ≡ value` on `sources` sources.
    pub fn constant(sources: usize, value: usize) -> Result<Self> {
        Self::new(vec![value; sources])
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Degree excess `d(s)`; the tree degree of `s` is one more.
    pub fn degree(&self, source: usize) -> usize {
        self.degrees[source]
    }

    pub fn num_sources(&self) -> usize {
        self.degrees.len()
    }

    pub fn num_destinations(&self) -> usize {
        self.destinations
    }

    /// Number of edges of every tree, `m + n - 1`.
    pub fn num_edges(&self) -> usize {
        self.num_sources() + self.destinations - 1
    }

    pub fn degree_sum(&self) -> usize {
        self.destinations - 1
    }

    pub fn is_constant(&self, value: usize) -> bool {
        self.degrees.iter().all(|&d| d == value)
    }

    /// Upper estimate on the search space of [`enumerate_trees`]: the number
    /// of ways to pick each source's destination set independently.
    pub fn candidate_estimate(&self) -> u128 {
        self.degrees
            .iter()
            .map(|&d| binomial_u128(self.destinations, d + 1))
            .fold(1u128, |acc, c| acc.saturating_mul(c))
    }
}

impl fmt::Display for DegreeFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.degrees.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for DegreeFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::EmptyDegrees);
        }
        let raw = s
            .split(',')
            .enumerate()
            .map(|(index, part)| {
                part.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::InvalidDegree {
                        index,
                        value: part.trim().to_string(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_signed(&raw)
    }
}

fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// An edge of `K_{m,n}`, ordered by source first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub source: usize,
    pub dest: usize,
}

impl Edge {
    pub const fn new(source: usize, dest: usize) -> Self {
        Self { source, dest }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.source, self.dest)
    }
}

impl FromStr for Edge {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected `source:dest`, got `{s}`")))?;
        let parse = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad index `{x}` in `{s}`")))
        };
        Ok(Edge::new(parse(a)?, parse(b)?))
    }
}

impl From<(usize, usize)> for Edge {
    fn from((source, dest): (usize, usize)) -> Self {
        Edge::new(source, dest)
    }
}

/// Parses the `s:t,s:t,...` edge list format. Order is not significant.
pub fn parse_edges(s: &str) -> Result<Vec<Edge>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(str::parse).collect()
}

/// A spanning tree of `K_{m,n}` where source `s` has degree `1 + d(s)`.
///
/// The edge list is kept sorted, so it doubles as the canonical encoding:
/// two trees are equal exactly when their edge lists are.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BipartiteTree {
    edges: Vec<Edge>,
    sources: usize,
    destinations: usize,
}

impl BipartiteTree {
    /// Validates `edges` against `df`: range, duplicates, source degrees and
    /// acyclicity (which, with `m + n - 1` edges, means spanning).
    pub fn new(df: &DegreeFunction, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let (m, n) = (df.num_sources(), df.num_destinations());
        let mut edges: Vec<Edge> = edges.into_iter().collect();
        edges.sort_unstable();
        if let Some(e) = edges.iter().find(|e| e.source >= m || e.dest >= n) {
            return Err(Error::EdgeOutOfRange(e.to_string()));
        }
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidTree(format!("duplicate edge {}", w[0])));
        }
        if edges.len() != df.num_edges() {
            return Err(Error::InvalidTree(format!(
                "expected {} edges, got {}",
                df.num_edges(),
                edges.len()
            )));
        }
        let mut degree = vec![0usize; m];
        for e in &edges {
            degree[e.source] += 1;
        }
        for (s, &deg) in degree.iter().enumerate() {
            if deg != df.degree(s) + 1 {
                return Err(Error::InvalidTree(format!(
                    "source {s} has degree {deg}, expected {}",
                    df.degree(s) + 1
                )));
            }
        }
        let mut uf = UnionFind::new(m + n);
        for e in &edges {
            if !uf.union(e.source, m + e.dest) {
                return Err(Error::InvalidTree(format!("edge {e} closes a cycle")));
            }
        }
        Ok(Self::from_sorted_unchecked(m, n, edges))
    }

    pub fn parse(df: &DegreeFunction, s: &str) -> Result<Self> {
        Self::new(df, parse_edges(s)?)
    }

    pub(crate) fn from_sorted_unchecked(
        sources: usize,
        destinations: usize,
        edges: Vec<Edge>,
    ) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        Self {
            edges,
            sources,
            destinations,
        }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_sources(&self) -> usize {
        self.sources
    }

    pub fn num_destinations(&self) -> usize {
        self.destinations
    }

    pub fn contains(&self, edge: Edge) -> bool {
        self.edges.binary_search(&edge).is_ok()
    }

    /// The edges at `source`, sorted by destination.
    pub fn source_edges(&self, source: usize) -> &[Edge] {
        let lo = self.edges.partition_point(|e| e.source < source);
        let hi = self.edges.partition_point(|e| e.source <= source);
        &self.edges[lo..hi]
    }

    /// Degree excesses read off the tree, i.e. the degree function it lies in.
    pub fn degree_function(&self) -> DegreeFunction {
        let degrees = (0..self.sources)
            .map(|s| self.source_edges(s).len().saturating_sub(1))
            .collect();
        DegreeFunction::new(degrees).expect("trees have at least one source")
    }

    /// Canonical text encoding, e.g. `0:0,0:1,1:1,1:2`.
    pub fn encoding(&self) -> String {
        self.to_string()
    }

    /// Adjacency lists on the shared vertex numbering (destination `t` is
    /// vertex `m + t`).
    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        let m = self.sources;
        let mut adj = vec![Vec::new(); m + self.destinations];
        for e in &self.edges {
            adj[e.source].push(m + e.dest);
            adj[m + e.dest].push(e.source);
        }
        adj
    }

    /// The unique tree path between two vertices (shared numbering),
    /// endpoints included.
    pub(crate) fn vertex_path(&self, from: usize, to: usize) -> Vec<usize> {
        tree_path(&self.adjacency(), from, to)
    }

    /// Replaces `removed` by `inserted`, keeping the list sorted.
    pub(crate) fn exchange(&self, removed: Edge, inserted: Edge) -> Self {
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .copied()
            .filter(|&e| e != removed)
            .collect();
        let pos = edges.partition_point(|&e| e < inserted);
        edges.insert(pos, inserted);
        Self::from_sorted_unchecked(self.sources, self.destinations, edges)
    }
}

impl fmt::Display for BipartiteTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// BFS path in a forest given by adjacency lists. Panics if disconnected.
pub(crate) fn tree_path(adj: &[Vec<usize>], from: usize, to: usize) -> Vec<usize> {
    let mut prev = vec![usize::MAX; adj.len()];
    prev[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            break;
        }
        for &w in &adj[v] {
            if prev[w] == usize::MAX {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    assert!(
        prev[to] != usize::MAX,
        "vertices {from} and {to} are not connected"
    );
    let mut path = vec![to];
    let mut v = to;
    while v != from {
        v = prev[v];
        path.push(v);
    }
    path.reverse();
    path
}

/// Refuses enumeration when the estimated search space is above a limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeGuard {
    pub limit: u128,
}

impl SizeGuard {
    pub const DEFAULT_LIMIT: u128 = 10_000_000;

    pub const fn new(limit: u128) -> Self {
        Self { limit }
    }

    pub const fn unlimited() -> Self {
        Self { limit: u128::MAX }
    }

    pub fn check(&self, estimate: u128) -> Result<()> {
        if estimate > self.limit {
            Err(Error::TooLarge {
                estimate,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }
}

impl Default for SizeGuard {
    fn default() -> Self {
        Self::new(Self::DEFAULT_LIMIT)
    }
}

/// All trees of `T_d` in canonical order.
///
/// Sources are filled in index order, each choosing an increasing set of
/// `1 + d(s)` destinations; a choice is pruned as soon as it would join two
/// vertices already connected. A forest with `m + n - 1` edges on `m + n`
/// vertices is spanning, so every completed assignment is a tree.
pub fn enumerate_trees(df: &DegreeFunction, guard: SizeGuard) -> Result<Vec<BipartiteTree>> {
    guard.check(df.candidate_estimate())?;
    let (m, n) = (df.num_sources(), df.num_destinations());
    let mut out = Vec::new();
    let mut edges = Vec::with_capacity(df.num_edges());
    let uf = UnionFind::new(m + n);
    fill_source(df, 0, 0, df.degree(0) + 1, &uf, &mut edges, &mut out);
    Ok(out)
}

fn fill_source(
    df: &DegreeFunction,
    source: usize,
    next_dest: usize,
    remaining: usize,
    uf: &UnionFind,
    edges: &mut Vec<Edge>,
    out: &mut Vec<BipartiteTree>,
) {
    let (m, n) = (df.num_sources(), df.num_destinations());
    if remaining == 0 {
        if source + 1 == m {
            out.push(BipartiteTree::from_sorted_unchecked(m, n, edges.clone()));
        } else {
            let next = source + 1;
            fill_source(df, next, 0, df.degree(next) + 1, uf, edges, out);
        }
        return;
    }
    // leave room for the remaining picks
    for dest in next_dest..=(n - remaining) {
        let mut uf = uf.clone();
        if !uf.union(source, m + dest) {
            continue;
        }
        edges.push(Edge::new(source, dest));
        fill_source(df, source, dest + 1, remaining - 1, &uf, edges, out);
        edges.pop();
    }
}

/// `|T_d| = (n-1)! n^(m-1) / prod d(s)!`, evaluated exactly.
pub fn count_trees(df: &DegreeFunction) -> BigUint {
    let m = df.num_sources();
    let n = df.num_destinations();
    let numerator = factorial(n - 1) * BigUint::from(n).pow((m - 1) as u32);
    let denominator = df
        .degrees()
        .iter()
        .fold(BigUint::one(), |acc, &d| acc * factorial(d));
    let (quotient, remainder) = (&numerator / &denominator, &numerator % &denominator);
    assert!(
        remainder.is_zero(),
        "tree count formula must divide exactly"
    );
    quotient
}

pub(crate) fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// `count_trees` as a machine integer, if it fits.
pub fn count_trees_u64(df: &DegreeFunction) -> Option<u64> {
    count_trees(df).to_u64()
}

/// Two trees of `T_d` with no common edge, if any exist.
///
/// For `d ≡ 1` with `m >= 3` the pair is built directly from two
/// destination-cyclic Hamiltonian paths; otherwise all pairs of enumerated
/// trees are searched.
pub fn edge_disjoint_pair(
    df: &DegreeFunction,
    guard: SizeGuard,
) -> Result<Option<(BipartiteTree, BipartiteTree)>> {
    let m = df.num_sources();
    if df.is_constant(1) && m >= 3 {
        let n = df.num_destinations();
        let first = (0..m).flat_map(|i| [Edge::new(i, i), Edge::new(i, i + 1)]);
        let second = (0..m).flat_map(|i| [Edge::new(i, (i + 2) % n), Edge::new(i, (i + 3) % n)]);
        let pair = (
            BipartiteTree::new(df, first)?,
            BipartiteTree::new(df, second)?,
        );
        debug_assert!(pair.0.edges().iter().all(|&e| !pair.1.contains(e)));
        return Ok(Some(pair));
    }
    let trees = enumerate_trees(df, guard)?;
    let width = m * df.num_destinations();
    let masks: Vec<Vec<u64>> = trees
        .iter()
        .map(|t| {
            let mut words = vec![0u64; width.div_ceil(64)];
            for e in t.edges() {
                let bit = e.source * df.num_destinations() + e.dest;
                words[bit / 64] |= 1 << (bit % 64);
            }
            words
        })
        .collect();
    for i in 0..trees.len() {
        for j in (i + 1)..trees.len() {
            if masks[i].iter().zip(&masks[j]).all(|(a, b)| a & b == 0) {
                return Ok(Some((trees[i].clone(), trees[j].clone())));
            }
        }
    }
    Ok(None)
}
