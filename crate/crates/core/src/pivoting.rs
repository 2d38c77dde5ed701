//! Pivots between trees of `T_d` and the pivoting graph `G_d`, which is the
//! 1-skeleton of `P_d`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use rayon::prelude::*;

use crate::degree::{enumerate_trees, BipartiteTree, DegreeFunction, Edge, SizeGuard};
use crate::error::{Error, Result};

/// One pivot: `inserted` enters the tree and `removed`, the other edge at
/// the same source on the created cycle, leaves it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PivotMove {
    pub inserted: Edge,
    pub removed: Edge,
}

impl PivotMove {
    /// The move undoing this one.
    pub fn inverse(self) -> Self {
        Self {
            inserted: self.removed,
            removed: self.inserted,
        }
    }
}

impl fmt::Display for PivotMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "+{} -{}", self.inserted, self.removed)
    }
}

/// Pivots `tree` on the non-tree edge `inserted`.
///
/// The cycle of `tree + inserted` is `inserted` followed by the tree path
/// from its destination back to its source; the removed edge is the last
/// edge of that path.
pub fn pivot(tree: &BipartiteTree, inserted: Edge) -> Result<(BipartiteTree, PivotMove)> {
    let m = tree.num_sources();
    if inserted.source >= m || inserted.dest >= tree.num_destinations() {
        return Err(Error::EdgeOutOfRange(inserted.to_string()));
    }
    if tree.contains(inserted) {
        return Err(Error::EdgeInTree(inserted.to_string()));
    }
    let path = tree.vertex_path(inserted.source, m + inserted.dest);
    let removed = Edge::new(inserted.source, path[1] - m);
    let mv = PivotMove { inserted, removed };
    Ok((tree.exchange(removed, inserted), mv))
}

/// Applies a fully specified move, checking that it is the pivot on
/// `mv.inserted`.
pub fn apply_move(tree: &BipartiteTree, mv: PivotMove) -> Result<BipartiteTree> {
    let (next, actual) = pivot(tree, mv.inserted)?;
    if actual.removed != mv.removed {
        return Err(Error::Structure(format!(
            "pivot on {} removes {}, not {}",
            mv.inserted, actual.removed, mv.removed
        )));
    }
    Ok(next)
}

/// All trees one pivot away, one per non-tree edge, in edge order.
pub fn neighbors(tree: &BipartiteTree) -> Vec<BipartiteTree> {
    neighbor_moves(tree).into_iter().map(|(t, _)| t).collect()
}

pub fn neighbor_moves(tree: &BipartiteTree) -> Vec<(BipartiteTree, PivotMove)> {
    let (m, n) = (tree.num_sources(), tree.num_destinations());
    let mut out = Vec::with_capacity((m - 1) * (n - 1));
    for source in 0..m {
        for dest in 0..n {
            let e = Edge::new(source, dest);
            if !tree.contains(e) {
                out.push(pivot(tree, e).expect("non-tree edge in range"));
            }
        }
    }
    out
}

/// The graph on `T_d` whose edges are single pivots. Vertices are indices
/// into the canonically ordered tree list.
#[derive(Debug, Clone)]
pub struct PivotingGraph {
    trees: Vec<BipartiteTree>,
    index: HashMap<BipartiteTree, usize>,
    adjacency: Vec<Vec<usize>>,
}

impl PivotingGraph {
    pub fn vertex_count(&self) -> usize {
        self.trees.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn trees(&self) -> &[BipartiteTree] {
        &self.trees
    }

    pub fn tree(&self, v: usize) -> &BipartiteTree {
        &self.trees[v]
    }

    pub fn adjacency(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn index_of(&self, tree: &BipartiteTree) -> Result<usize> {
        self.index
            .get(tree)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(tree.encoding()))
    }

    /// BFS distances from `start` (`usize::MAX` when unreachable).
    pub fn distances_from(&self, start: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.trees.len()];
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn eccentricity(&self, v: usize) -> usize {
        self.distances_from(v).into_iter().max().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        self.trees.is_empty() || self.distances_from(0).iter().all(|&d| d != usize::MAX)
    }

    /// Exact diameter by BFS from every vertex, without any bound check.
    pub fn exact_diameter(&self) -> usize {
        (0..self.trees.len())
            .into_par_iter()
            .map(|v| self.eccentricity(v))
            .max()
            .unwrap_or(0)
    }

    /// Graphviz rendering with vertices labelled by tree encoding.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph pivoting {\n");
        for (v, tree) in self.trees.iter().enumerate() {
            out.push_str(&format!("  {v} [label=\"{tree}\"];\n"));
        }
        for (v, adj) in self.adjacency.iter().enumerate() {
            for &w in adj.iter().filter(|&&w| w > v) {
                out.push_str(&format!("  {v} -- {w};\n"));
            }
        }
        out.push_str("}\n");
        out
    }
}

pub fn build_graph(df: &DegreeFunction, guard: SizeGuard) -> Result<PivotingGraph> {
    let trees = enumerate_trees(df, guard)?;
    let index: HashMap<BipartiteTree, usize> = trees
        .iter()
        .enumerate()
        .map(|(i, t)| (t.clone(), i))
        .collect();
    let adjacency = trees
        .par_iter()
        .map(|t| {
            let mut adj: Vec<usize> = neighbors(t).iter().map(|u| index[u]).collect();
            adj.sort_unstable();
            adj
        })
        .collect();
    Ok(PivotingGraph {
        trees,
        index,
        adjacency,
    })
}

/// Length of a shortest pivot path between two trees of `graph`.
pub fn bfs_distance(graph: &PivotingGraph, a: &BipartiteTree, b: &BipartiteTree) -> Result<usize> {
    let (ia, ib) = (graph.index_of(a)?, graph.index_of(b)?);
    Ok(graph.distances_from(ia)[ib])
}

/// Exact diameter of `G_d`, checked against `2(n - 1)`.
///
/// A violation is reported as [`Error::BoundExceeded`] carrying the exact
/// value.
pub fn diameter(graph: &PivotingGraph) -> Result<usize> {
    let value = graph.exact_diameter();
    let bound = graph
        .trees
        .first()
        .map_or(0, |t| 2 * (t.num_destinations() - 1));
    if value > bound {
        return Err(Error::BoundExceeded {
            what: "diameter",
            value,
            bound,
        });
    }
    Ok(value)
}
