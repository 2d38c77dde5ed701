//! Independent oracles shared by the integration tests. Nothing here calls
//! into the enumeration, pivot or vertex routines it is used to check.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use itertools::Itertools;
use pd_skeleton::{BipartiteTree, DegreeFunction, Edge};

pub fn df(d: &[usize]) -> DegreeFunction {
    DegreeFunction::new(d.to_vec()).unwrap()
}

/// Every degree sequence with the given numbers of sources and destinations.
pub fn compositions(m: usize, n: usize) -> Vec<DegreeFunction> {
    fn rec(left: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for v in 0..=left {
            cur.push(v);
            rec(left - v, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n - 1, m, &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|d| DegreeFunction::new(d).unwrap())
        .collect()
}

/// Every degree function with `m + n <= total`.
pub fn all_up_to(total: usize) -> Vec<DegreeFunction> {
    let mut out = Vec::new();
    for m in 1..total {
        for n in 1..=(total - m) {
            out.extend(compositions(m, n));
        }
    }
    out
}

pub fn has_zero(df: &DegreeFunction) -> bool {
    df.degrees().contains(&0)
}

/// Spanning-tree test by graph search plus a degree recount.
pub fn is_valid_tree(df: &DegreeFunction, edges: &[Edge]) -> bool {
    let (m, n) = (df.num_sources(), df.num_destinations());
    if edges.len() != m + n - 1 {
        return false;
    }
    let mut deg = vec![0; m];
    let mut adj = vec![Vec::new(); m + n];
    for e in edges {
        if e.source >= m || e.dest >= n {
            return false;
        }
        deg[e.source] += 1;
        adj[e.source].push(m + e.dest);
        adj[m + e.dest].push(e.source);
    }
    if (0..m).any(|s| deg[s] != df.degree(s) + 1) {
        return false;
    }
    let mut seen = vec![false; m + n];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    // connected with |V| - 1 edges, hence acyclic
    seen.iter().all(|&s| s)
}

/// All `e`-subsets of the edges of `K_{m,n}` that are trees of `T_d`, as
/// sorted edge lists.
pub fn brute_force_trees(df: &DegreeFunction) -> Vec<Vec<Edge>> {
    let (m, n) = (df.num_sources(), df.num_destinations());
    let all: Vec<Edge> = (0..m)
        .flat_map(|s| (0..n).map(move |t| Edge::new(s, t)))
        .collect();
    all.iter()
        .copied()
        .combinations(m + n - 1)
        .filter(|edges| is_valid_tree(df, edges))
        .collect()
}

/// Every assignment of out-arcs (sources to destinations, non-root
/// destinations to sources) whose source in-degrees match `d`.
pub fn brute_force_digraphs(df: &DegreeFunction) -> Vec<(Vec<usize>, Vec<usize>)> {
    let (m, n) = (df.num_sources(), df.num_destinations());
    let mut out = Vec::new();
    let source_choices = n.pow(m as u32);
    let dest_choices = m.pow((n - 1) as u32);
    for a in 0..source_choices {
        let source_out: Vec<usize> = (0..m).map(|i| a / n.pow(i as u32) % n).collect();
        for b in 0..dest_choices {
            let dest_out: Vec<usize> = (0..n - 1).map(|i| b / m.pow(i as u32) % m).collect();
            let mut indeg = vec![0; m];
            for &s in &dest_out {
                indeg[s] += 1;
            }
            if (0..m).all(|s| indeg[s] == df.degree(s)) {
                out.push((source_out.clone(), dest_out));
            }
        }
    }
    out
}

/// The edge a pivot on `inserted` must remove: the unique edge at the same
/// source whose exchange yields another tree of `T_d`.
pub fn pivot_oracle(df: &DegreeFunction, tree: &[Edge], inserted: Edge) -> Edge {
    let candidates: Vec<Edge> = tree
        .iter()
        .copied()
        .filter(|e| e.source == inserted.source)
        .filter(|&e| {
            let mut edges: Vec<Edge> = tree.iter().copied().filter(|&x| x != e).collect();
            edges.push(inserted);
            is_valid_tree(df, &edges)
        })
        .collect();
    assert_eq!(candidates.len(), 1, "exactly one exchange must be a tree");
    candidates[0]
}

/// Graph on trees joined when their edge sets differ in exactly two edges.
pub fn symmetric_difference_graph(trees: &[Vec<Edge>]) -> Vec<Vec<usize>> {
    let sets: Vec<HashSet<Edge>> = trees.iter().map(|t| t.iter().copied().collect()).collect();
    let mut adj = vec![Vec::new(); trees.len()];
    for i in 0..trees.len() {
        for j in i + 1..trees.len() {
            if sets[i].symmetric_difference(&sets[j]).count() == 2 {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    adj
}

pub fn bfs(adj: &[Vec<usize>], start: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[start] = 0;
    let mut q = VecDeque::from([start]);
    while let Some(v) = q.pop_front() {
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                q.push_back(w);
            }
        }
    }
    dist
}

/// Vertex coordinates by the two-case induction: strip a destination leaf
/// (its entry is the full demand `m`, and its source loses one degree), or
/// strip a source leaf (its entry is 1, and the smaller solution is shifted
/// by +1 on every edge oriented from destination to source when the tree is
/// rooted at the leaf's neighbour).
pub fn lemma_vertex(df: &DegreeFunction, tree: &BipartiteTree) -> Vec<Vec<u64>> {
    let sources: Vec<usize> = (0..df.num_sources()).collect();
    let degrees: HashMap<usize, usize> = sources.iter().map(|&s| (s, df.degree(s))).collect();
    let values = lemma_rec(&sources, &degrees, tree.edges());
    let mut rows = vec![vec![0u64; df.num_destinations()]; df.num_sources()];
    for (e, v) in values {
        rows[e.source][e.dest] = v;
    }
    rows
}

fn lemma_rec(
    sources: &[usize],
    degrees: &HashMap<usize, usize>,
    edges: &[Edge],
) -> HashMap<Edge, u64> {
    let m = sources.len() as u64;
    if edges.len() == 1 {
        return HashMap::from([(edges[0], m)]);
    }
    let mut dest_deg: HashMap<usize, usize> = HashMap::new();
    let mut source_deg: HashMap<usize, usize> = HashMap::new();
    for e in edges {
        *dest_deg.entry(e.dest).or_default() += 1;
        *source_deg.entry(e.source).or_default() += 1;
    }
    if let Some(leaf) = edges.iter().find(|e| dest_deg[&e.dest] == 1).copied() {
        let rest: Vec<Edge> = edges.iter().copied().filter(|&e| e != leaf).collect();
        let mut sub_degrees = degrees.clone();
        *sub_degrees.get_mut(&leaf.source).unwrap() -= 1;
        let mut x = lemma_rec(sources, &sub_degrees, &rest);
        x.insert(leaf, m);
        return x;
    }
    let leaf = edges
        .iter()
        .find(|e| source_deg[&e.source] == 1)
        .copied()
        .expect("a tree with two or more edges has a leaf");
    let rest: Vec<Edge> = edges.iter().copied().filter(|&e| e != leaf).collect();
    let sub_sources: Vec<usize> = sources
        .iter()
        .copied()
        .filter(|&s| s != leaf.source)
        .collect();
    let mut sub_degrees = degrees.clone();
    sub_degrees.remove(&leaf.source);
    let sub = lemma_rec(&sub_sources, &sub_degrees, &rest);

    // root the remaining tree at the leaf's destination; parent pointers
    // tell each edge's orientation
    let mut parent_of_source: HashMap<usize, usize> = HashMap::new();
    let mut seen_dest: HashSet<usize> = HashSet::from([leaf.dest]);
    let mut queue = VecDeque::from([leaf.dest]);
    while let Some(t) = queue.pop_front() {
        for e in rest.iter().filter(|e| e.dest == t) {
            if parent_of_source.contains_key(&e.source) {
                continue;
            }
            parent_of_source.insert(e.source, t);
            for f in rest.iter().filter(|f| f.source == e.source && f.dest != t) {
                if seen_dest.insert(f.dest) {
                    queue.push_back(f.dest);
                }
            }
        }
    }
    let mut x: HashMap<Edge, u64> = sub
        .into_iter()
        .map(|(e, v)| {
            // source -> destination arcs point at the root and keep their value
            let towards_root = parent_of_source[&e.source] == e.dest;
            (e, if towards_root { v } else { v + 1 })
        })
        .collect();
    x.insert(leaf, 1);
    x
}
