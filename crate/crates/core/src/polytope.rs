//! The transportation polytope `P_d`: supplies `1 + m d(s)`, demands `m`.
//!
//! Everything here is exact integer arithmetic; the vertices of `P_d` are
//! integral.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::ops::Deref;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::degree::{count_trees, BipartiteTree, DegreeFunction, Edge};
use crate::error::{Error, Result};
use crate::union_find::UnionFind;

/// Row and column totals of a transportation polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Margins {
    pub supply: Vec<u64>,
    pub demand: Vec<u64>,
}

impl Margins {
    pub fn new(supply: Vec<u64>, demand: Vec<u64>) -> Result<Self> {
        if supply.is_empty() || demand.is_empty() {
            return Err(Error::Margins("no sources or no destinations".into()));
        }
        let (a, b) = (supply.iter().sum::<u64>(), demand.iter().sum::<u64>());
        if a != b {
            return Err(Error::Margins(format!(
                "supply total {a} != demand total {b}"
            )));
        }
        Ok(Self { supply, demand })
    }

    pub fn total(&self) -> u64 {
        self.supply.iter().sum()
    }

    /// Non-empty proper subsets `M'`, `N'` with equal totals, if any. Their
    /// absence is exactly simplicity of the polytope.
    pub fn degeneracy_witness(&self) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
        let (m, n) = (self.supply.len(), self.demand.len());
        if m > 24 || n > 24 {
            return Err(Error::TooLarge {
                estimate: (1u128 << m.min(127)) + (1u128 << n.min(127)),
                limit: 1 << 25,
            });
        }
        let mut demand_sums: HashMap<u64, u32> = HashMap::new();
        for mask in 1..(1u32 << n) - 1 {
            demand_sums
                .entry(subset_sum(&self.demand, mask))
                .or_insert(mask);
        }
        for mask in 1..(1u32 << m) - 1 {
            if let Some(&dmask) = demand_sums.get(&subset_sum(&self.supply, mask)) {
                return Ok(Some((bits(mask, m), bits(dmask, n))));
            }
        }
        Ok(None)
    }
}

fn subset_sum(values: &[u64], mask: u32) -> u64 {
    values
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, v)| v)
        .sum()
}

fn bits(mask: u32, len: usize) -> Vec<usize> {
    (0..len).filter(|i| mask & (1 << i) != 0).collect()
}

pub fn margins(df: &DegreeFunction) -> Margins {
    let m = df.num_sources() as u64;
    let supply = df.degrees().iter().map(|&d| 1 + m * d as u64).collect();
    let demand = vec![m; df.num_destinations()];
    Margins::new(supply, demand).expect("P_d margins balance")
}

/// Outcome of the simplicity scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Simplicity {
    Simple,
    Degenerate {
        sources: Vec<usize>,
        dests: Vec<usize>,
    },
}

impl Simplicity {
    pub fn is_simple(&self) -> bool {
        matches!(self, Simplicity::Simple)
    }

    fn from_witness(witness: Option<(Vec<usize>, Vec<usize>)>) -> Self {
        match witness {
            None => Simplicity::Simple,
            Some((sources, dests)) => Simplicity::Degenerate { sources, dests },
        }
    }
}

pub fn check_simplicity(df: &DegreeFunction) -> Result<Simplicity> {
    check_margins_simplicity(&margins(df))
}

pub fn check_margins_simplicity(margins: &Margins) -> Result<Simplicity> {
    margins.degeneracy_witness().map(Simplicity::from_witness)
}

/// A non-negative integer point of a transportation polytope, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point {
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl Point {
    /// Validates the row and column sums against `margins`.
    pub fn new(margins: &Margins, rows: Vec<Vec<u64>>) -> Result<Self> {
        let (m, n) = (margins.supply.len(), margins.demand.len());
        if rows.len() != m || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Margins(format!("expected a {m}x{n} matrix")));
        }
        let entries: Vec<u64> = rows.into_iter().flatten().collect();
        let point = Self {
            rows: m,
            cols: n,
            entries,
        };
        for s in 0..m {
            let sum: u64 = (0..n).map(|t| point.get(s, t)).sum();
            if sum != margins.supply[s] {
                return Err(Error::Margins(format!(
                    "row {s} sums to {sum}, supply is {}",
                    margins.supply[s]
                )));
            }
        }
        for t in 0..n {
            let sum: u64 = (0..m).map(|s| point.get(s, t)).sum();
            if sum != margins.demand[t] {
                return Err(Error::Margins(format!(
                    "column {t} sums to {sum}, demand is {}",
                    margins.demand[t]
                )));
            }
        }
        Ok(point)
    }

    pub fn num_sources(&self) -> usize {
        self.rows
    }

    pub fn num_destinations(&self) -> usize {
        self.cols
    }

    pub fn get(&self, source: usize, dest: usize) -> u64 {
        self.entries[source * self.cols + dest]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries
            .chunks(self.cols)
            .map(<[u64]>::to_vec)
            .collect()
    }

    /// Edges with a strictly positive entry, sorted.
    pub fn positive_edges(&self) -> Vec<Edge> {
        (0..self.rows)
            .flat_map(|s| (0..self.cols).map(move |t| Edge::new(s, t)))
            .filter(|e| self.get(e.source, e.dest) > 0)
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.entries.chunks(self.cols) {
            let line: Vec<String> = row.iter().map(u64::to_string).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }
}

/// A vertex of `P_d`: a point whose support is a tree of `T_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexPoint(Point);

impl VertexPoint {
    pub fn into_point(self) -> Point {
        self.0
    }
}

impl Deref for VertexPoint {
    type Target = Point;

    fn deref(&self) -> &Point {
        &self.0
    }
}

/// The vertex of `P_d` supported on `tree`, by leaf elimination: a leaf's
/// only entry equals its residual margin, which is then charged to its
/// neighbour.
pub fn tree_to_vertex(df: &DegreeFunction, tree: &BipartiteTree) -> Result<VertexPoint> {
    let (m, n) = (df.num_sources(), df.num_destinations());
    if tree.num_sources() != m || tree.num_destinations() != n || tree.degree_function() != *df {
        return Err(Error::Mismatch);
    }
    let mg = margins(df);
    let mut residual: Vec<i64> = mg
        .supply
        .iter()
        .chain(&mg.demand)
        .map(|&v| v as i64)
        .collect();
    let mut degree = vec![0usize; m + n];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); m + n];
    for (i, e) in tree.edges().iter().enumerate() {
        degree[e.source] += 1;
        degree[m + e.dest] += 1;
        incident[e.source].push(i);
        incident[m + e.dest].push(i);
    }
    let mut value = vec![None::<i64>; tree.edges().len()];
    let mut leaves: Vec<usize> = (0..m + n).filter(|&v| degree[v] == 1).collect();
    while let Some(leaf) = leaves.pop() {
        if degree[leaf] != 1 {
            continue;
        }
        let i = *incident[leaf]
            .iter()
            .find(|&&i| value[i].is_none())
            .expect("a leaf has one open edge");
        let e = tree.edges()[i];
        let other = if leaf == e.source {
            m + e.dest
        } else {
            e.source
        };
        let amount = residual[leaf];
        value[i] = Some(amount);
        residual[leaf] = 0;
        residual[other] -= amount;
        degree[leaf] = 0;
        degree[other] -= 1;
        if degree[other] == 1 {
            leaves.push(other);
        }
    }
    let mut rows = vec![vec![0u64; n]; m];
    for (e, v) in tree.edges().iter().zip(&value) {
        match v {
            Some(x) if *x > 0 => rows[e.source][e.dest] = *x as u64,
            other => {
                return Err(Error::Structure(format!(
                    "edge {e} received {other:?}, not a positive entry"
                )))
            }
        }
    }
    let point = Point::new(&mg, rows)?;
    debug_assert_eq!(point.positive_edges(), tree.edges());
    Ok(VertexPoint(point))
}

/// Classification of a feasible point by its support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SupportClass {
    /// The support is a spanning tree in `T_d`: the point is a vertex.
    Vertex(BipartiteTree),
    /// Any other support; the point is not a vertex.
    NonVertex { edges: Vec<Edge>, reason: String },
}

impl SupportClass {
    pub fn is_vertex(&self) -> bool {
        matches!(self, SupportClass::Vertex(_))
    }
}

pub fn support(df: &DegreeFunction, point: &Point) -> Result<SupportClass> {
    let (m, n) = (df.num_sources(), df.num_destinations());
    if point.num_sources() != m || point.num_destinations() != n {
        return Err(Error::Mismatch);
    }
    let edges = point.positive_edges();
    let mut uf = UnionFind::new(m + n);
    let acyclic = edges.iter().all(|e| uf.union(e.source, m + e.dest));
    let reason = if !acyclic {
        Some("support contains a cycle".to_string())
    } else if uf.components() != 1 {
        Some("support is not connected".to_string())
    } else {
        None
    };
    if let Some(reason) = reason {
        return Ok(SupportClass::NonVertex { edges, reason });
    }
    match BipartiteTree::new(df, edges.iter().copied()) {
        Ok(tree) => Ok(SupportClass::Vertex(tree)),
        Err(err) => Ok(SupportClass::NonVertex {
            edges,
            reason: err.to_string(),
        }),
    }
}

fn lemma_scope(df: &DegreeFunction) -> Result<()> {
    let (m, n) = (df.num_sources(), df.num_destinations());
    if m * n <= 4 {
        Err(Error::LemmaScope { m, n })
    } else {
        Ok(())
    }
}

/// Whether `x[s][t] >= 0` is facet-defining: `supply(s) + demand(t)` is
/// below the total. Only meaningful for `m n > 4`.
pub fn is_facet(df: &DegreeFunction, source: usize, dest: usize) -> Result<bool> {
    lemma_scope(df)?;
    if source >= df.num_sources() || dest >= df.num_destinations() {
        return Err(Error::EdgeOutOfRange(format!("{source}:{dest}")));
    }
    let mg = margins(df);
    Ok(mg.supply[source] + mg.demand[dest] < mg.total())
}

pub fn facet_count(df: &DegreeFunction) -> Result<usize> {
    lemma_scope(df)?;
    let mut count = 0;
    for s in 0..df.num_sources() {
        for t in 0..df.num_destinations() {
            count += usize::from(is_facet(df, s, t)?);
        }
    }
    Ok(count)
}

/// `(m-1)(n-1)`.
pub fn dimension(df: &DegreeFunction) -> usize {
    (df.num_sources() - 1) * (df.num_destinations() - 1)
}

/// Facets minus dimension, `m + n - 1`, when all `m n` inequalities are
/// facet-defining.
pub fn hirsch_bound(df: &DegreeFunction) -> Result<usize> {
    let (m, n) = (df.num_sources(), df.num_destinations());
    let facets = facet_count(df)?;
    if facets != m * n {
        return Err(Error::Structure(format!(
            "only {facets} of {} inequalities are facets",
            m * n
        )));
    }
    Ok(facets - dimension(df))
}

/// Vertex and edge counts of `P_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FVector01 {
    pub f0: BigUint,
    pub f1: BigUint,
}

pub fn f_vector(df: &DegreeFunction) -> FVector01 {
    let f0 = count_trees(df);
    let twice = &f0 * BigUint::from(dimension(df));
    assert!((&twice % 2u32).is_zero(), "edge count must be integral");
    FVector01 {
        f1: twice / 2u32,
        f0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn df(d: &[usize]) -> DegreeFunction {
        DegreeFunction::new(d.to_vec()).unwrap()
    }

    #[test]
    fn margin_examples() {
        let a = margins(&df(&[1, 1]));
        assert_eq!((a.supply, a.demand), (vec![3, 3], vec![2, 2, 2]));
        let b = margins(&df(&[2, 0]));
        assert_eq!((b.supply, b.demand), (vec![5, 1], vec![2, 2, 2]));
        let c = margins(&df(&[1, 1, 1]));
        assert_eq!((c.supply, c.demand), (vec![4, 4, 4], vec![3, 3, 3, 3]));
    }

    #[test]
    fn simplicity() {
        assert!(check_simplicity(&df(&[1, 1])).unwrap().is_simple());
        assert!(check_simplicity(&df(&[2, 0])).unwrap().is_simple());
        let birkhoff = Margins::new(vec![4, 4], vec![2, 2, 2, 2]).unwrap();
        match check_margins_simplicity(&birkhoff).unwrap() {
            Simplicity::Degenerate { sources, dests } => {
                assert_eq!(sources.len(), 1);
                assert_eq!(dests.len(), 2);
            }
            Simplicity::Simple => panic!("B_2,4 is degenerate"),
        }
        assert!(Margins::new(vec![1], vec![2]).is_err());
    }

    #[test]
    fn vertex_examples() {
        let star = BipartiteTree::parse(&df(&[2]), "0:0,0:1,0:2").unwrap();
        assert_eq!(
            tree_to_vertex(&df(&[2]), &star).unwrap().rows(),
            vec![vec![1, 1, 1]]
        );
        let f = df(&[1, 1]);
        let t = BipartiteTree::parse(&f, "0:0,0:1,1:1,1:2").unwrap();
        let x = tree_to_vertex(&f, &t).unwrap();
        assert_eq!(x.rows(), vec![vec![2, 1, 0], vec![0, 1, 2]]);
        assert_eq!(x.to_csv(), "2,1,0\n0,1,2\n");
        assert_eq!(support(&f, &x).unwrap(), SupportClass::Vertex(t));
    }

    #[test]
    fn full_support_is_not_a_vertex() {
        let f = df(&[1, 1]);
        let p = Point::new(&margins(&f), vec![vec![1, 1, 1], vec![1, 1, 1]]).unwrap();
        match support(&f, &p).unwrap() {
            SupportClass::NonVertex { edges, .. } => assert_eq!(edges.len(), 6),
            SupportClass::Vertex(_) => panic!("full support is not a tree"),
        }
        assert!(Point::new(&margins(&f), vec![vec![3, 0, 0], vec![0, 1, 2]]).is_err());
    }

    #[test]
    fn facets() {
        assert_eq!(is_facet(&df(&[1, 1]), 0, 0), Ok(true));
        assert_eq!(is_facet(&df(&[2, 0]), 0, 1), Ok(false));
        assert_eq!(is_facet(&df(&[2, 0]), 1, 1), Ok(true));
        assert_eq!(facet_count(&df(&[1, 1])), Ok(6));
        assert_eq!(facet_count(&df(&[1, 1, 1])), Ok(12));
        assert_eq!(facet_count(&df(&[2, 0])), Ok(3));
        assert_eq!(
            is_facet(&df(&[1]), 0, 0),
            Err(Error::LemmaScope { m: 1, n: 2 })
        );
        assert_eq!(
            facet_count(&df(&[1, 0])),
            Err(Error::LemmaScope { m: 2, n: 2 })
        );
    }

    #[test]
    fn hirsch_and_fvector() {
        assert_eq!(hirsch_bound(&df(&[1, 1])), Ok(4));
        assert_eq!(hirsch_bound(&df(&[1, 1, 1])), Ok(6));
        assert_eq!(hirsch_bound(&df(&[1, 1, 1, 1])), Ok(8));
        assert!(hirsch_bound(&df(&[2, 0])).is_err());
        let fv = f_vector(&df(&[1, 1]));
        assert_eq!((fv.f0, fv.f1), (6u32.into(), 6u32.into()));
        let fv = f_vector(&df(&[1, 1, 1]));
        assert_eq!((fv.f0, fv.f1), (96u32.into(), 288u32.into()));
        let fv = f_vector(&df(&[2, 0]));
        assert_eq!((fv.f0, fv.f1), (3u32.into(), 3u32.into()));
    }
}
