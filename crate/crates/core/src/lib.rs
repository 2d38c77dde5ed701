//! Exact combinatorics of the transportation polytopes `P_d` with prescribed
//! source degrees.
//!
//! A degree function `d` on `m` sources fixes `n = 1 + sum(d)` destinations.
//! The vertices of `P_d` are the spanning trees of `K_{m,n}` in which source
//! `i` has degree `1 + d[i]`, and its edges are single pivots between such
//! trees. This crate enumerates and counts those trees, builds the pivot
//! graph, computes exact diameters, constructs explicit bounded pivot paths,
//! and reconstructs the integer vertex coordinates.

pub mod bounded_path;
pub mod cli;
pub mod degree;
pub mod error;
pub mod joyal;
pub mod pivoting;
pub mod polytope;
pub mod union_find;

pub use bounded_path::{
    apply_path, bounded_pivot_path, consistent_sources, make_source_consistent,
    pivot_path_certificate, PathCertificate,
};
pub use degree::{
    count_trees, edge_disjoint_pair, enumerate_trees, BipartiteTree, DegreeFunction, Edge,
    SizeGuard,
};
pub use error::{Error, Result};
pub use joyal::{
    enumerate_functional_digraphs, enumerate_marked_trees, phi, psi, FunctionalDigraph,
    MarkedRootedTree,
};
pub use pivoting::{
    bfs_distance, build_graph, diameter, neighbors, pivot, PivotMove, PivotingGraph,
};
pub use polytope::{
    check_simplicity, f_vector, facet_count, hirsch_bound, is_facet, margins, support,
    tree_to_vertex, FVector01, Margins, Point, SupportClass, VertexPoint,
};
