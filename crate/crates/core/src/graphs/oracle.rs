//! Ground-truth counts by exhaustive enumeration of edge subsets.

use num_bigint::BigInt;
use rayon::prelude::*;

use super::graph::{is_connected, DisjointSets, SimpleGraph};
use crate::error::{Error, Result};
use crate::poly::{Rational, SpanningForm};

/// Largest edge count accepted by the `2^m` enumerations.
pub const MAX_BRUTE_FORCE_EDGES: usize = 24;

fn check_size(g: &SimpleGraph) -> Result<()> {
    if g.edge_count() > MAX_BRUTE_FORCE_EDGES {
        return Err(Error::TooManyEdges { edges: g.edge_count(), max: MAX_BRUTE_FORCE_EDGES });
    }
    Ok(())
}

fn spans(g: &SimpleGraph, mask: u32) -> bool {
    let mut ds = DisjointSets::new(g.vertex_count());
    for (i, &(u, w)) in g.edges().iter().enumerate() {
        if mask >> i & 1 == 1 {
            ds.union(u, w);
        }
    }
    ds.components() == 1
}

/// Connectivity bit for every edge subset, indexed by mask.
fn connected_masks(g: &SimpleGraph) -> Vec<bool> {
    let total = 1u32 << g.edge_count();
    (0..total).into_par_iter().map(|mask| spans(g, mask)).collect()
}

/// `N_i` = number of connected spanning subgraphs with `i` edges, by enumeration.
pub fn brute_force_spanning_counts(g: &SimpleGraph) -> Result<SpanningForm> {
    check_size(g)?;
    let m = g.edge_count();
    let total = 1u32 << m;
    let counts = (0..total)
        .into_par_iter()
        .fold(
            || vec![0u64; m + 1],
            |mut acc, mask| {
                if spans(g, mask) {
                    acc[mask.count_ones() as usize] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; m + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(SpanningForm::new(m, counts.into_iter().map(|c| Rational::from_integer(BigInt::from(c))).collect()))
}

/// Entry `i` sums, over connected spanning subgraphs with `i + 1` edges, the number of
/// bridges of that subgraph.
pub fn bridge_pair_counts(g: &SimpleGraph) -> Result<Vec<BigInt>> {
    check_size(g)?;
    let m = g.edge_count();
    if m == 0 {
        return Ok(Vec::new());
    }
    let conn = connected_masks(g);
    let counts = (0..conn.len() as u32)
        .into_par_iter()
        .filter(|&mask| conn[mask as usize])
        .fold(
            || vec![0u64; m],
            |mut acc, mask| {
                let size = mask.count_ones() as usize;
                if size == 0 {
                    return acc;
                }
                let bridges = (0..m)
                    .filter(|&e| mask >> e & 1 == 1 && !conn[(mask ^ (1 << e)) as usize])
                    .count() as u64;
                acc[size - 1] += bridges;
                acc
            },
        )
        .reduce(
            || vec![0u64; m],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(counts.into_iter().map(BigInt::from).collect())
}

/// Every connected labelled simple graph on exactly `v` vertices, edges in lexicographic
/// order of the vertex pairs.
pub fn connected_graphs_on(v: usize) -> Vec<SimpleGraph> {
    let pairs: Vec<(usize, usize)> = (0..v).flat_map(|u| (u + 1..v).map(move |w| (u, w))).collect();
    assert!(pairs.len() <= 20, "labelled enumeration is limited to 6 vertices");
    (0u32..1 << pairs.len())
        .map(|mask| {
            let edges = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| *e).collect();
            SimpleGraph::new(v, edges).expect("pairs are distinct")
        })
        .filter(is_connected)
        .collect()
}

/// Connected labelled graphs on `1..=max_vertices` vertices.
pub fn connected_graphs_up_to(max_vertices: usize) -> Vec<SimpleGraph> {
    (1..=max_vertices).flat_map(connected_graphs_on).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::spanning_derivative;

    #[test]
    fn spanning_count_examples() {
        assert_eq!(brute_force_spanning_counts(&SimpleGraph::complete(3)).unwrap(), SpanningForm::from_ints(&[0, 0, 3, 1]));
        assert_eq!(
            brute_force_spanning_counts(&SimpleGraph::complete(4)).unwrap(),
            SpanningForm::from_ints(&[0, 0, 0, 16, 15, 6, 1])
        );
        assert_eq!(brute_force_spanning_counts(&SimpleGraph::complete(2)).unwrap(), SpanningForm::from_ints(&[0, 1]));
        assert_eq!(brute_force_spanning_counts(&SimpleGraph::empty(1)).unwrap(), SpanningForm::from_ints(&[1]));
        let big = SimpleGraph::complete(8);
        assert!(matches!(brute_force_spanning_counts(&big), Err(Error::TooManyEdges { edges: 28, .. })));
    }

    #[test]
    fn bridge_pair_examples() {
        let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(bridge_pair_counts(&SimpleGraph::complete(3)).unwrap(), ints(&[0, 6, 0]));
        assert_eq!(bridge_pair_counts(&SimpleGraph::complete(2)).unwrap(), ints(&[1]));
        let k4 = bridge_pair_counts(&SimpleGraph::complete(4)).unwrap();
        assert_eq!(k4[5], BigInt::from(0));
    }

    #[test]
    fn bridge_pairs_match_negated_spanning_derivative_on_cycle() {
        let g = SimpleGraph::cycle(5);
        let d = spanning_derivative(&brute_force_spanning_counts(&g).unwrap()).unwrap();
        let pairs = bridge_pair_counts(&g).unwrap();
        for (c, b) in d.counts().iter().zip(&pairs) {
            assert_eq!(-c, Rational::from_integer(b.clone()));
        }
    }

    #[test]
    fn corpus_sizes() {
        // connected labelled graphs on n vertices: 1, 1, 4, 38, 728 (OEIS A001187)
        let sizes: Vec<usize> = (1..=5).map(|v| connected_graphs_on(v).len()).collect();
        assert_eq!(sizes, vec![1, 1, 4, 38, 728]);
    }
}
