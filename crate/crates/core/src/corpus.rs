//! Named small graphs used as ground-truth fixtures in tests and the
//! lemma-verification suites.

use crate::graph::Graph;
use crate::rng::stream;
use rand::Rng;

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Star with `leaves` leaves; the center is vertex 0.
pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    Graph::from_edges(leaves + 1, &edges).unwrap()
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..a {
        for v in 0..b {
            edges.push((u, a + v));
        }
    }
    Graph::from_edges(a + b, &edges).unwrap()
}

/// Complete multipartite graph with the given part sizes.
pub fn complete_multipartite(parts: &[usize]) -> Graph {
    let n: usize = parts.iter().sum();
    let mut part_of = Vec::with_capacity(n);
    for (i, &s) in parts.iter().enumerate() {
        part_of.extend(std::iter::repeat(i).take(s));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if part_of[u] != part_of[v] {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5)); // outer cycle
        edges.push((5 + i, 5 + (i + 2) % 5)); // inner pentagram
        edges.push((i, 5 + i)); // spokes
    }
    Graph::from_edges(10, &edges).unwrap()
}

pub fn hypercube(dim: usize) -> Graph {
    let n = 1usize << dim;
    let mut edges = Vec::new();
    for u in 0..n {
        for b in 0..dim {
            let v = u ^ (1 << b);
            if u < v {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// Octahedron K_{2,2,2}.
pub fn octahedron() -> Graph {
    complete_multipartite(&[2, 2, 2])
}

/// Two triangles joined by a single bridge edge.
pub fn two_triangles_bridge() -> Graph {
    Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3)]).unwrap()
}

/// Wheel: hub 0 plus a rim cycle of length `rim`.
pub fn wheel(rim: usize) -> Graph {
    let mut edges: Vec<_> = (1..=rim).map(|v| (0, v)).collect();
    for i in 0..rim {
        edges.push((1 + i, 1 + (i + 1) % rim));
    }
    Graph::from_edges(rim + 1, &edges).unwrap()
}

/// Erdos-Renyi G(n, p), seeded; retried until connected.
pub fn gnp_connected(n: usize, p: f64, seed: u64) -> Graph {
    for attempt in 0..1000 {
        let mut rng = stream(seed, &format!("gnp/{attempt}"));
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, &edges).unwrap();
        if g.check_min_degree().is_ok() && g.is_connected() {
            return g;
        }
    }
    panic!("gnp_connected: no connected sample in 1000 attempts (n={n}, p={p})");
}

/// The fixed n <= 13 corpus behind the exact lemma checks: named graphs plus
/// seeded dense random graphs. Every entry is simple and connected.
pub fn desk_corpus() -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = Vec::new();
    for n in 3..=13 {
        out.push((format!("K{n}"), complete(n)));
    }
    for n in [4, 5, 6, 7, 8, 9, 10, 11, 12, 13] {
        out.push((format!("C{n}"), cycle(n)));
    }
    for (a, b) in [(1, 1), (2, 2), (2, 3), (3, 3), (3, 4), (4, 4), (5, 5), (6, 6), (6, 7)] {
        out.push((format!("K{a},{b}"), complete_bipartite(a, b)));
    }
    out.push(("petersen".into(), petersen()));
    out.push(("Q3".into(), hypercube(3)));
    out.push(("octahedron".into(), octahedron()));
    out.push(("K2,2,2,2".into(), complete_multipartite(&[2, 2, 2, 2])));
    out.push(("K3,3,3".into(), complete_multipartite(&[3, 3, 3])));
    out.push(("K4,4,4".into(), complete_multipartite(&[4, 4, 4])));
    out.push(("two-triangles".into(), two_triangles_bridge()));
    out.push(("wheel6".into(), wheel(6)));
    out.push(("wheel9".into(), wheel(9)));
    out.push(("star5".into(), star(5)));
    out.push(("path6".into(), path(6)));
    for (i, (n, p)) in [(8, 0.6), (9, 0.6), (10, 0.55), (11, 0.5), (12, 0.5), (13, 0.45)]
        .iter()
        .enumerate()
    {
        out.push((
            format!("gnp{n}-{i}"),
            gnp_connected(*n, *p, 90_000 + i as u64),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_shapes() {
        assert_eq!(petersen().m(), 15);
        assert_eq!(hypercube(3).m(), 12);
        assert_eq!(octahedron().m(), 12);
        assert_eq!(complete(13).m(), 78);
        for (name, g) in desk_corpus() {
            assert!(g.n() <= 13, "{name} too big");
            g.check_simple().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(g.is_connected(), "{name} disconnected");
        }
    }
}
