//! Constructive pivot paths between two trees of `T_d`.
//!
//! Both trees are transformed towards a common tree, one source at a time.
//! A source is *consistent* when its incident edges agree in both trees.
//! At each stage the inconsistent source farthest from the anchor (source
//! 0) in `S` is made consistent; everything hanging below it in `S` is
//! already consistent, which is what makes the per-source pivot budget work.

use std::collections::VecDeque;

use crate::degree::{BipartiteTree, Edge};
use crate::error::{Error, Result};
use crate::pivoting::{apply_move, pivot, PivotMove};

/// Anchor source from which stage order is measured.
pub const ANCHOR: usize = 0;

/// Which of the two trees a move was applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    S,
    T,
}

/// Bookkeeping for one processed source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub source: usize,
    pub moves_on_s: usize,
    pub moves_on_t: usize,
    /// Whether `T` already contained one of the edges from the source to
    /// the subtrees hanging below it in `S` when the stage started.
    pub shared_initially: bool,
    /// Consistent sources after the stage, sorted.
    pub consistent_after: Vec<usize>,
}

impl Stage {
    pub fn moves(&self) -> usize {
        self.moves_on_s + self.moves_on_t
    }
}

/// Two one-sided pivot sequences meeting in a common tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCertificate {
    pub start: BipartiteTree,
    pub target: BipartiteTree,
    pub moves_on_s: Vec<PivotMove>,
    pub moves_on_t: Vec<PivotMove>,
    pub meeting_tree: BipartiteTree,
    pub stages: Vec<Stage>,
}

impl PathCertificate {
    pub fn total_length(&self) -> usize {
        self.moves_on_s.len() + self.moves_on_t.len()
    }

    /// A single walk from `start` to `target`: the `S` moves, then the `T`
    /// moves undone in reverse order.
    pub fn walk(&self) -> Vec<PivotMove> {
        self.moves_on_s
            .iter()
            .copied()
            .chain(self.moves_on_t.iter().rev().map(|mv| mv.inverse()))
            .collect()
    }

    /// Replays both sides and the combined walk.
    pub fn verify(&self) -> Result<()> {
        let from_s = apply_path(&self.start, &self.moves_on_s)?;
        let from_t = apply_path(&self.target, &self.moves_on_t)?;
        if from_s != self.meeting_tree || from_t != self.meeting_tree {
            return Err(Error::Structure(
                "sides do not meet in the recorded tree".into(),
            ));
        }
        if apply_path(&self.start, &self.walk())? != self.target {
            return Err(Error::Structure(
                "combined walk does not reach the target".into(),
            ));
        }
        Ok(())
    }
}

fn check_same_family(s: &BipartiteTree, t: &BipartiteTree) -> Result<()> {
    if s.num_sources() != t.num_sources()
        || s.num_destinations() != t.num_destinations()
        || (0..s.num_sources()).any(|v| s.source_edges(v).len() != t.source_edges(v).len())
    {
        return Err(Error::Mismatch);
    }
    Ok(())
}

fn is_consistent(s: &BipartiteTree, t: &BipartiteTree, source: usize) -> bool {
    s.source_edges(source) == t.source_edges(source)
}

/// Sources whose incident edges coincide in `s` and `t`, sorted.
pub fn consistent_sources(s: &BipartiteTree, t: &BipartiteTree) -> Result<Vec<usize>> {
    check_same_family(s, t)?;
    Ok((0..s.num_sources())
        .filter(|&v| is_consistent(s, t, v))
        .collect())
}

/// Result of making one source consistent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsistencyStep {
    pub s: BipartiteTree,
    pub t: BipartiteTree,
    pub moves_on_s: Vec<PivotMove>,
    pub moves_on_t: Vec<PivotMove>,
    pub shared_initially: bool,
}

/// Makes `source` consistent in `(s, t)` with pivots that only touch
/// inconsistent sources.
///
/// Removing `source` from `s` splits it into `1 + d(source)` components.
/// The one holding the anchor (or, when `source` is the anchor, the one
/// holding its smallest `s`-neighbour) is the upper component; all sources
/// in the other, lower, components must already be consistent, otherwise
/// [`Error::Structure`] is returned.
///
/// Phase one inserts each edge from `source` to a lower component into `t`,
/// in increasing destination order. If the cycle closes through another
/// lower edge, an inconsistent source `σ` on the cycle is first re-hung on
/// a spare `t`-neighbour `τ` of `source`. Phase two pivots the one remaining
/// `t`-edge (into the upper component) into `s`.
pub fn make_source_consistent(
    s: &BipartiteTree,
    t: &BipartiteTree,
    source: usize,
) -> Result<ConsistencyStep> {
    check_same_family(s, t)?;
    let m = s.num_sources();
    if source >= m {
        return Err(Error::EdgeOutOfRange(format!("source {source}")));
    }
    let mut step = ConsistencyStep {
        s: s.clone(),
        t: t.clone(),
        moves_on_s: Vec::new(),
        moves_on_t: Vec::new(),
        shared_initially: false,
    };
    if is_consistent(s, t, source) {
        return Ok(step);
    }

    // components of s - source, labelled by vertex
    let adj = s.adjacency();
    let mut component = vec![usize::MAX; adj.len()];
    component[source] = source;
    for &start in &adj[source] {
        let mut queue = VecDeque::from([start]);
        component[start] = start;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if component[w] == usize::MAX {
                    component[w] = start;
                    queue.push_back(w);
                }
            }
        }
    }
    let s_neighbors: Vec<usize> = s.source_edges(source).iter().map(|e| e.dest).collect();
    let upper_root = if source == ANCHOR {
        m + s_neighbors[0]
    } else {
        component[ANCHOR]
    };
    let upper = upper_root - m;
    let lower: Vec<usize> = s_neighbors
        .iter()
        .copied()
        .filter(|&d| d != upper)
        .collect();
    debug_assert_eq!(lower.len() + 1, s_neighbors.len());

    for (v, &c) in component.iter().enumerate().take(m) {
        if v != source && c != upper_root && !is_consistent(s, t, v) {
            return Err(Error::Structure(format!(
                "source {v} below {source} is not consistent"
            )));
        }
    }

    step.shared_initially = lower.iter().any(|&d| t.contains(Edge::new(source, d)));

    for &target in &lower {
        let wanted = Edge::new(source, target);
        if step.t.contains(wanted) {
            continue;
        }
        let path = step.t.vertex_path(source, m + target);
        let exit = path[1] - m;
        if lower.contains(&exit) {
            let sigma = path
                .iter()
                .copied()
                .skip(1)
                .filter(|&v| v < m)
                .find(|&v| !is_consistent(&step.s, &step.t, v))
                .ok_or_else(|| Error::Structure("cycle has no inconsistent source".into()))?;
            let tau = step
                .t
                .source_edges(source)
                .iter()
                .map(|e| e.dest)
                .find(|d| !lower.contains(d))
                .ok_or_else(|| Error::Structure("no spare neighbour".into()))?;
            let (next, mv) = pivot(&step.t, Edge::new(sigma, tau))?;
            step.t = next;
            step.moves_on_t.push(mv);
            let (next, mv) = pivot(&step.t, wanted)?;
            if mv.removed != Edge::new(source, tau) {
                return Err(Error::Structure(format!(
                    "re-hanging {sigma} did not route the cycle through {source}:{tau}"
                )));
            }
            step.t = next;
            step.moves_on_t.push(mv);
        } else {
            let (next, mv) = pivot(&step.t, wanted)?;
            step.t = next;
            step.moves_on_t.push(mv);
        }
    }

    if !is_consistent(&step.s, &step.t, source) {
        let extra: Vec<Edge> = step
            .t
            .source_edges(source)
            .iter()
            .copied()
            .filter(|&e| !step.s.contains(e))
            .collect();
        if extra.len() != 1 {
            return Err(Error::Structure(format!(
                "{} unshared edges remain at source {source}",
                extra.len()
            )));
        }
        let (next, mv) = pivot(&step.s, extra[0])?;
        if mv.removed != Edge::new(source, upper) {
            return Err(Error::Structure(format!(
                "closing pivot removed {}, expected {source}:{upper}",
                mv.removed
            )));
        }
        step.s = next;
        step.moves_on_s.push(mv);
    }
    debug_assert!(is_consistent(&step.s, &step.t, source));
    Ok(step)
}

/// The inconsistent source farthest from the anchor in `s` (smallest index
/// on ties), or `None` when the trees are equal.
fn next_source(s: &BipartiteTree, t: &BipartiteTree) -> Option<usize> {
    let adj = s.adjacency();
    let mut dist = vec![usize::MAX; adj.len()];
    dist[ANCHOR] = 0;
    let mut queue = VecDeque::from([ANCHOR]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    (0..s.num_sources())
        .filter(|&v| !is_consistent(s, t, v))
        .max_by_key(|&v| (dist[v], std::cmp::Reverse(v)))
}

/// Builds the two-sided certificate without enforcing a length bound.
pub fn pivot_path_certificate(s: &BipartiteTree, t: &BipartiteTree) -> Result<PathCertificate> {
    check_same_family(s, t)?;
    let mut cert = PathCertificate {
        start: s.clone(),
        target: t.clone(),
        moves_on_s: Vec::new(),
        moves_on_t: Vec::new(),
        meeting_tree: s.clone(),
        stages: Vec::new(),
    };
    let (mut cur_s, mut cur_t) = (s.clone(), t.clone());
    while let Some(source) = next_source(&cur_s, &cur_t) {
        let before = consistent_sources(&cur_s, &cur_t)?;
        let step = make_source_consistent(&cur_s, &cur_t, source)?;
        let after = consistent_sources(&step.s, &step.t)?;
        if !after.contains(&source) || before.iter().any(|v| !after.contains(v)) {
            return Err(Error::Structure(format!(
                "stage for source {source} lost consistency"
            )));
        }
        cert.stages.push(Stage {
            source,
            moves_on_s: step.moves_on_s.len(),
            moves_on_t: step.moves_on_t.len(),
            shared_initially: step.shared_initially,
            consistent_after: after,
        });
        cert.moves_on_s.extend(step.moves_on_s);
        cert.moves_on_t.extend(step.moves_on_t);
        cur_s = step.s;
        cur_t = step.t;
    }
    debug_assert_eq!(cur_s, cur_t);
    cert.meeting_tree = cur_s;
    Ok(cert)
}

/// Certificate whose total length is checked against `2(n - 1)`.
pub fn bounded_pivot_path(s: &BipartiteTree, t: &BipartiteTree) -> Result<PathCertificate> {
    let cert = pivot_path_certificate(s, t)?;
    let bound = 2 * (s.num_destinations() - 1);
    if cert.total_length() > bound {
        return Err(Error::BoundExceeded {
            what: "pivot path length",
            value: cert.total_length(),
            bound,
        });
    }
    Ok(cert)
}

/// Replays `moves` from `start`, validating every intermediate tree.
pub fn apply_path(start: &BipartiteTree, moves: &[PivotMove]) -> Result<BipartiteTree> {
    let df = start.degree_function();
    let mut tree = start.clone();
    for (step, &mv) in moves.iter().enumerate() {
        tree = apply_move(&tree, mv).map_err(|e| Error::IllegalMove {
            step,
            reason: e.to_string(),
        })?;
        BipartiteTree::new(&df, tree.edges().iter().copied()).map_err(|e| Error::IllegalMove {
            step,
            reason: e.to_string(),
        })?;
    }
    Ok(tree)
}

/// Which side each move of the certificate belongs to, in application order.
pub fn sided_moves(cert: &PathCertificate) -> Vec<(Side, PivotMove)> {
    cert.moves_on_s
        .iter()
        .map(|&mv| (Side::S, mv))
        .chain(cert.moves_on_t.iter().map(|&mv| (Side::T, mv)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::{enumerate_trees, DegreeFunction, SizeGuard};

    fn df(d: &[usize]) -> DegreeFunction {
        DegreeFunction::new(d.to_vec()).unwrap()
    }

    #[test]
    fn consistency_examples() {
        let f = df(&[1, 1]);
        let s = BipartiteTree::parse(&f, "0:0,0:1,1:1,1:2").unwrap();
        let t = BipartiteTree::parse(&f, "0:0,0:2,1:1,1:2").unwrap();
        assert_eq!(consistent_sources(&s, &t), Ok(vec![1]));
        assert_eq!(consistent_sources(&s, &s), Ok(vec![0, 1]));
        let other = BipartiteTree::parse(&df(&[2, 0]), "0:0,0:1,0:2,1:0").unwrap();
        assert_eq!(consistent_sources(&s, &other), Err(Error::Mismatch));
    }

    #[test]
    fn single_pivot_difference() {
        let f = df(&[1, 1]);
        let s = BipartiteTree::parse(&f, "0:0,0:1,1:1,1:2").unwrap();
        let t = BipartiteTree::parse(&f, "0:0,0:2,1:1,1:2").unwrap();
        let step = make_source_consistent(&s, &t, 0).unwrap();
        assert_eq!(step.moves_on_s.len() + step.moves_on_t.len(), 1);
        let cert = bounded_pivot_path(&s, &t).unwrap();
        assert_eq!(cert.total_length(), 1);
        cert.verify().unwrap();
    }

    #[test]
    fn consistent_source_is_noop() {
        let f = df(&[1, 1]);
        let s = BipartiteTree::parse(&f, "0:0,0:1,1:1,1:2").unwrap();
        let t = BipartiteTree::parse(&f, "0:0,0:2,1:1,1:2").unwrap();
        let step = make_source_consistent(&s, &t, 1).unwrap();
        assert!(step.moves_on_s.is_empty() && step.moves_on_t.is_empty());
        assert_eq!((step.s, step.t), (s, t));
    }

    #[test]
    fn leaf_source_takes_one_pivot() {
        let f = df(&[2, 0]);
        let trees = enumerate_trees(&f, SizeGuard::default()).unwrap();
        for s in &trees {
            for t in &trees {
                if s == t {
                    continue;
                }
                let step = make_source_consistent(s, t, 1).unwrap();
                assert_eq!(step.moves_on_s.len() + step.moves_on_t.len(), 1);
            }
        }
    }

    #[test]
    fn identical_trees() {
        let f = df(&[1, 1, 1]);
        let s = enumerate_trees(&f, SizeGuard::default())
            .unwrap()
            .swap_remove(7);
        let cert = bounded_pivot_path(&s, &s).unwrap();
        assert_eq!(cert.total_length(), 0);
        assert_eq!(cert.meeting_tree, s);
    }

    #[test]
    fn replay_errors_name_the_step() {
        let f = df(&[1, 1]);
        let s = BipartiteTree::parse(&f, "0:0,0:1,1:1,1:2").unwrap();
        let good = PivotMove {
            inserted: Edge::new(0, 2),
            removed: Edge::new(0, 1),
        };
        assert_eq!(apply_path(&s, &[]), Ok(s.clone()));
        let err = apply_path(&s, &[good, good]).unwrap_err();
        assert!(matches!(err, Error::IllegalMove { step: 1, .. }));
        let wrong = PivotMove {
            inserted: Edge::new(0, 2),
            removed: Edge::new(0, 0),
        };
        assert!(matches!(
            apply_path(&s, &[wrong]),
            Err(Error::IllegalMove { step: 0, .. })
        ));
    }
}
