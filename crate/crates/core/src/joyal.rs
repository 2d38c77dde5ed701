//! Joyal-style bijection between functional digraphs and marked rooted trees.
//!
//! Both classes share one representation: every source points at a
//! destination and every destination other than the root `t0` points at a
//! source. A functional digraph may contain cycles; a rooted tree has none,
//! and carries a marked destination in addition. `phi` opens the cycles and
//! chains them onto the root; `psi` cuts the root-to-mark path at its
//! left-to-right maxima and closes the pieces back into cycles.

use crate::degree::{enumerate_trees, BipartiteTree, DegreeFunction, Edge, SizeGuard};
use crate::error::{Error, Result};

/// The root destination `ν_*`.
pub const ROOT: usize = 0;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Arcs {
    /// Out-neighbour (a destination) of each source.
    source_out: Vec<usize>,
    /// Out-neighbour (a source) of each destination; `None` only at the root.
    dest_out: Vec<Option<usize>>,
}

impl Arcs {
    fn validate(&self, df: &DegreeFunction) -> Result<()> {
        let (m, n) = (df.num_sources(), df.num_destinations());
        if self.source_out.len() != m || self.dest_out.len() != n {
            return Err(Error::Structure(format!(
                "expected {m} sources and {n} destinations"
            )));
        }
        if let Some(s) = self.source_out.iter().position(|&t| t >= n) {
            return Err(Error::Structure(format!("source {s} points out of range")));
        }
        if self.dest_out[ROOT].is_some() {
            return Err(Error::Structure("root destination has an out-arc".into()));
        }
        let mut indegree = vec![0usize; m];
        for (t, out) in self.dest_out.iter().enumerate().skip(1) {
            match *out {
                Some(s) if s < m => indegree[s] += 1,
                Some(_) => {
                    return Err(Error::Structure(format!(
                        "destination {t} points out of range"
                    )))
                }
                None => return Err(Error::Structure(format!("destination {t} has no out-arc"))),
            }
        }
        for (s, &deg) in indegree.iter().enumerate() {
            if deg != df.degree(s) {
                return Err(Error::Structure(format!(
                    "source {s} has in-degree {deg}, expected {}",
                    df.degree(s)
                )));
            }
        }
        Ok(())
    }

    fn num_sources(&self) -> usize {
        self.source_out.len()
    }

    /// Successor on the shared vertex numbering (destination `t` is `m + t`).
    fn next(&self, v: usize) -> Option<usize> {
        let m = self.num_sources();
        if v < m {
            Some(m + self.source_out[v])
        } else {
            self.dest_out[v - m]
        }
    }

    fn edges(&self) -> Vec<Edge> {
        let mut edges: Vec<Edge> = self
            .source_out
            .iter()
            .enumerate()
            .map(|(s, &t)| Edge::new(s, t))
            .chain(
                self.dest_out
                    .iter()
                    .enumerate()
                    .filter_map(|(t, s)| s.map(|s| Edge::new(s, t))),
            )
            .collect();
        edges.sort_unstable();
        edges
    }

    /// The vertex cycles of the functional graph, each listed once.
    fn cycles(&self) -> Vec<Vec<usize>> {
        const FRESH: u8 = 0;
        const ACTIVE: u8 = 1;
        const DONE: u8 = 2;
        let total = self.num_sources() + self.dest_out.len();
        let mut state = vec![FRESH; total];
        let mut cycles = Vec::new();
        for start in 0..total {
            if state[start] != FRESH {
                continue;
            }
            let mut walk = Vec::new();
            let mut v = Some(start);
            while let Some(u) = v {
                match state[u] {
                    FRESH => {
                        state[u] = ACTIVE;
                        walk.push(u);
                        v = self.next(u);
                    }
                    ACTIVE => {
                        let at = walk.iter().position(|&w| w == u).unwrap();
                        cycles.push(walk[at..].to_vec());
                        break;
                    }
                    _ => break,
                }
            }
            for w in walk {
                state[w] = DONE;
            }
        }
        cycles
    }
}

/// A member of `S_d`: sources have out-degree 1 and in-degree `d(s)`, every
/// destination except the root has out-degree 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FunctionalDigraph {
    arcs: Arcs,
}

impl FunctionalDigraph {
    pub fn new(
        df: &DegreeFunction,
        source_out: Vec<usize>,
        dest_out: Vec<Option<usize>>,
    ) -> Result<Self> {
        let arcs = Arcs {
            source_out,
            dest_out,
        };
        arcs.validate(df)?;
        Ok(Self { arcs })
    }

    pub fn source_target(&self, source: usize) -> usize {
        self.arcs.source_out[source]
    }

    pub fn dest_target(&self, dest: usize) -> Option<usize> {
        self.arcs.dest_out[dest]
    }

    /// Underlying undirected edges, sorted.
    pub fn edges(&self) -> Vec<Edge> {
        self.arcs.edges()
    }

    pub fn num_cycles(&self) -> usize {
        self.arcs.cycles().len()
    }
}

/// A member of `R_d`: a tree of `T_d` oriented towards the root, plus a
/// marked destination (possibly the root).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MarkedRootedTree {
    arcs: Arcs,
    mark: usize,
}

impl MarkedRootedTree {
    pub fn new(
        df: &DegreeFunction,
        source_out: Vec<usize>,
        dest_out: Vec<Option<usize>>,
        mark: usize,
    ) -> Result<Self> {
        let arcs = Arcs {
            source_out,
            dest_out,
        };
        arcs.validate(df)?;
        if mark >= df.num_destinations() {
            return Err(Error::Structure(format!("mark {mark} out of range")));
        }
        if !arcs.cycles().is_empty() {
            return Err(Error::Structure("orientation contains a cycle".into()));
        }
        Ok(Self { arcs, mark })
    }

    /// Orients `tree` towards the root and marks `mark`.
    pub fn from_tree(df: &DegreeFunction, tree: &BipartiteTree, mark: usize) -> Result<Self> {
        let (m, n) = (df.num_sources(), df.num_destinations());
        if tree.num_sources() != m || tree.num_destinations() != n {
            return Err(Error::Mismatch);
        }
        let adj = tree.adjacency();
        let mut parent = vec![usize::MAX; m + n];
        let root = m + ROOT;
        parent[root] = root;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    stack.push(w);
                }
            }
        }
        let source_out = (0..m).map(|s| parent[s] - m).collect();
        let dest_out = (0..n).map(|t| (t != ROOT).then(|| parent[m + t])).collect();
        Self::new(df, source_out, dest_out, mark)
    }

    pub fn mark(&self) -> usize {
        self.mark
    }

    pub fn source_parent(&self, source: usize) -> usize {
        self.arcs.source_out[source]
    }

    pub fn dest_parent(&self, dest: usize) -> Option<usize> {
        self.arcs.dest_out[dest]
    }

    /// The underlying unoriented tree.
    pub fn tree(&self) -> BipartiteTree {
        BipartiteTree::from_sorted_unchecked(
            self.arcs.num_sources(),
            self.arcs.dest_out.len(),
            self.arcs.edges(),
        )
    }

    /// Vertices from the root to the mark (shared numbering), i.e. the
    /// mark's ancestor chain reversed.
    fn root_to_mark(&self) -> Vec<usize> {
        let m = self.arcs.num_sources();
        let mut path = vec![m + self.mark];
        let mut v = m + self.mark;
        while let Some(u) = self.arcs.next(v) {
            path.push(u);
            v = u;
        }
        path.reverse();
        path
    }
}

/// All members of `S_d`, i.e. `(n-1)! n^m / prod d(s)!` digraphs.
pub fn enumerate_functional_digraphs(
    df: &DegreeFunction,
    guard: SizeGuard,
) -> Result<Vec<FunctionalDigraph>> {
    let n = df.num_destinations();
    guard.check(df.candidate_estimate().saturating_mul(n as u128))?;
    let m = df.num_sources();
    let mut dest_assignments = Vec::new();
    let mut remaining = df.degrees().to_vec();
    let mut current = vec![None; n];
    assign_destinations(1, &mut remaining, &mut current, &mut dest_assignments);

    let mut out = Vec::with_capacity(dest_assignments.len() * n.pow(m as u32));
    let mut source_out = vec![0usize; m];
    loop {
        for dest_out in &dest_assignments {
            out.push(FunctionalDigraph {
                arcs: Arcs {
                    source_out: source_out.clone(),
                    dest_out: dest_out.clone(),
                },
            });
        }
        // odometer over n^m source choices
        let mut i = m;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            source_out[i] += 1;
            if source_out[i] < n {
                break;
            }
            source_out[i] = 0;
        }
    }
}

fn assign_destinations(
    dest: usize,
    remaining: &mut [usize],
    current: &mut Vec<Option<usize>>,
    out: &mut Vec<Vec<Option<usize>>>,
) {
    if dest == current.len() {
        out.push(current.clone());
        return;
    }
    for s in 0..remaining.len() {
        if remaining[s] > 0 {
            remaining[s] -= 1;
            current[dest] = Some(s);
            assign_destinations(dest + 1, remaining, current, out);
            remaining[s] += 1;
        }
    }
    current[dest] = None;
}

/// All members of `R_d`: every tree of `T_d` with each of its `n` marks.
pub fn enumerate_marked_trees(
    df: &DegreeFunction,
    guard: SizeGuard,
) -> Result<Vec<MarkedRootedTree>> {
    let trees = enumerate_trees(df, guard)?;
    let mut out = Vec::with_capacity(trees.len() * df.num_destinations());
    for tree in &trees {
        let oriented = MarkedRootedTree::from_tree(df, tree, ROOT)?;
        for mark in 0..df.num_destinations() {
            out.push(MarkedRootedTree {
                arcs: oriented.arcs.clone(),
                mark,
            });
        }
    }
    Ok(out)
}

/// `Φ`: opens every cycle at the arc leaving its largest source and chains
/// the opened cycles onto the root in increasing order of that source.
pub fn phi(df: &DegreeFunction, digraph: &FunctionalDigraph) -> Result<MarkedRootedTree> {
    digraph.arcs.validate(df)?;
    let m = df.num_sources();
    let mut openings: Vec<(usize, usize)> = digraph
        .arcs
        .cycles()
        .into_iter()
        .map(|cycle| {
            let top = cycle
                .iter()
                .copied()
                .filter(|&v| v < m)
                .max()
                .expect("cycles alternate sides");
            (top, digraph.arcs.source_out[top])
        })
        .collect();
    openings.sort_unstable();

    let mut arcs = digraph.arcs.clone();
    let mut previous = ROOT;
    for &(top, follower) in &openings {
        arcs.source_out[top] = previous;
        previous = follower;
    }
    MarkedRootedTree::new(df, arcs.source_out, arcs.dest_out, previous)
}

/// `Ψ`: splits the root-to-mark path at its left-to-right source maxima and
/// closes each piece into a cycle.
pub fn psi(df: &DegreeFunction, tree: &MarkedRootedTree) -> Result<FunctionalDigraph> {
    tree.arcs.validate(df)?;
    let m = df.num_sources();
    let path = tree.root_to_mark();
    // (record source, destination preceding it on the path)
    let mut records: Vec<(usize, usize)> = Vec::new();
    for (i, &v) in path.iter().enumerate() {
        if v < m && records.last().is_none_or(|&(top, _)| v > top) {
            records.push((v, path[i - 1] - m));
        }
    }
    let mut arcs = tree.arcs.clone();
    for (k, &(source, _)) in records.iter().enumerate() {
        let closing = records.get(k + 1).map_or(tree.mark, |&(_, before)| before);
        arcs.source_out[source] = closing;
    }
    FunctionalDigraph::new(df, arcs.source_out, arcs.dest_out)
}
