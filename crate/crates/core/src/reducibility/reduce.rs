//! Series-parallel reduction of the spring graph.

use crate::hysteresis::LoadingCurve;
use crate::network::SpringNetwork;

struct Edge {
    ends: (usize, usize),
    curve: LoadingCurve,
}

/// Reduces the network to a single edge between nodes 1 and N by merging
/// parallel edges, eliminating interior vertices of degree 2 and deleting
/// interior vertices of degree 1. Returns the loading curve of that edge,
/// or `None` if the topology does not reduce.
pub fn reduce_graph(net: &SpringNetwork) -> Option<LoadingCurve> {
    let n = net.node_count();
    let mut edges: Vec<Edge> = net
        .springs()
        .iter()
        .map(|s| Edge {
            ends: (s.i, s.j),
            curve: LoadingCurve::single_stop(s.a, s.rho()),
        })
        .collect();

    loop {
        if edges.len() == 1 && edges[0].ends == (1, n) {
            return edges.pop().map(|e| e.curve);
        }
        if merge_parallel(&mut edges) || drop_leaf(&mut edges, n) || merge_series(&mut edges, n) {
            continue;
        }
        return None;
    }
}

fn merge_parallel(edges: &mut Vec<Edge>) -> bool {
    for p in 0..edges.len() {
        for q in p + 1..edges.len() {
            if edges[p].ends == edges[q].ends {
                let other = edges.remove(q);
                edges[p].curve = edges[p].curve.sum(&other.curve);
                return true;
            }
        }
    }
    false
}

fn incident(edges: &[Edge], v: usize) -> Vec<usize> {
    (0..edges.len())
        .filter(|&k| edges[k].ends.0 == v || edges[k].ends.1 == v)
        .collect()
}

fn interior_vertices(edges: &[Edge], n: usize) -> Vec<usize> {
    let mut vs: Vec<usize> = edges
        .iter()
        .flat_map(|e| [e.ends.0, e.ends.1])
        .filter(|&v| v != 1 && v != n)
        .collect();
    vs.sort_unstable();
    vs.dedup();
    vs
}

fn drop_leaf(edges: &mut Vec<Edge>, n: usize) -> bool {
    for v in interior_vertices(edges, n) {
        if let [k] = incident(edges, v)[..] {
            edges.remove(k);
            return true;
        }
    }
    false
}

fn merge_series(edges: &mut Vec<Edge>, n: usize) -> bool {
    for v in interior_vertices(edges, n) {
        let [p, q] = incident(edges, v)[..] else {
            continue;
        };
        let far = |e: &Edge| if e.ends.0 == v { e.ends.1 } else { e.ends.0 };
        let (x, y) = (far(&edges[p]), far(&edges[q]));
        if x == y {
            // a 2-cycle hanging off x; parallel merging handles it first
            continue;
        }
        let Ok(curve) = edges[p].curve.series(&edges[q].curve) else {
            continue;
        };
        edges.remove(q);
        edges[p] = Edge {
            ends: (x.min(y), x.max(y)),
            curve,
        };
        return true;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_reduces_to_series_stop() {
        let net = SpringNetwork::new(3, &[(1, 2, 1.0, 1.0), (2, 3, 1.0, 2.0)]).unwrap();
        let c = reduce_graph(&net).unwrap();
        assert!(c.max_abs_diff(&LoadingCurve::single_stop(0.5, 2.0)) < 1e-14);
    }

    #[test]
    fn dangling_subgraph_is_removed() {
        // triangle 2-4-5 hangs off the chain 1-2-3
        let net = SpringNetwork::new(
            5,
            &[
                (1, 2, 1.0, 1.0),
                (2, 5, 1.0, 2.0),
                (2, 3, 1.0, 1.0),
                (3, 4, 2.0, 1.0),
                (2, 4, 1.0, 1.0),
            ],
        )
        .unwrap();
        let c = reduce_graph(&net).unwrap();
        assert!(c.max_abs_diff(&LoadingCurve::single_stop(0.5, 2.0)) < 1e-14);
    }

    #[test]
    fn parallel_branches_add() {
        let net = SpringNetwork::new(
            4,
            &[
                (1, 2, 1.0, 1.0),
                (2, 4, 1.0, 1.0),
                (1, 3, 2.0, 1.0),
                (3, 4, 2.0, 3.0),
            ],
        )
        .unwrap();
        let c = reduce_graph(&net).unwrap();
        let expected =
            LoadingCurve::single_stop(0.5, 2.0).sum(&LoadingCurve::single_stop(1.0, 1.0));
        assert!(c.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn bridge_is_irreducible() {
        let net = SpringNetwork::new(
            4,
            &[
                (1, 2, 1.0, 1.0),
                (1, 3, 1.0, 1.0),
                (2, 3, 1.0, 1.0),
                (2, 4, 1.0, 1.0),
                (3, 4, 1.0, 1.0),
            ],
        )
        .unwrap();
        assert!(reduce_graph(&net).is_none());
    }
}
