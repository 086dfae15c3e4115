//! Named graphs used as fixtures by tests, benches and the corpus.

use crate::graph::{subdivide, Graph, Vertex};

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs at least three vertices");
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

/// Path on `n` vertices `0 - 1 - ... - n-1`.
pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
}

/// `K_{1,leaves}` with center 0.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
}

pub fn complete(n: usize) -> Graph {
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    Graph::from_edges(n, edges).unwrap()
}

/// Star with every edge subdivided `t` times.
pub fn spider(legs: usize, t: usize) -> Graph {
    subdivide(&star(legs), t)
}

pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, edges).unwrap()
}

/// The 7-regular Moore graph of diameter two on 50 vertices
/// (pentagons and pentagrams construction).
pub fn hoffman_singleton() -> Graph {
    let p = |h: usize, j: usize| 5 * h + j;
    let q = |i: usize, j: usize| 25 + 5 * i + j;
    let mut edges = Vec::new();
    for h in 0..5 {
        for j in 0..5 {
            edges.push((p(h, j), p(h, (j + 1) % 5)));
            edges.push((q(h, j), q(h, (j + 2) % 5)));
            for i in 0..5 {
                edges.push((p(h, j), q(i, (h * i + j) % 5)));
            }
        }
    }
    Graph::from_edges(50, edges).unwrap()
}

/// Two hubs `0` and `1` joined by a run of `k` 2-vertices; each hub is
/// padded with pendant leaves up to degree `hub_degree`.
pub fn path_between_hubs(k: usize, hub_degree: usize) -> Graph {
    assert!(hub_degree >= 1);
    let mut edges = Vec::new();
    let mut prev = 0;
    for i in 0..k {
        edges.push((prev, 2 + i));
        prev = 2 + i;
    }
    edges.push((prev, 1));
    let mut next = 2 + k;
    for hub in [0, 1] {
        for _ in 1..hub_degree {
            edges.push((hub, next));
            next += 1;
        }
    }
    Graph::from_edges(next, edges).unwrap()
}

/// How [`hubs`] fills the degree a hub has left over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Padding {
    /// Pendant leaves.
    Leaves,
    /// One edge to a fresh `K4` per missing unit of degree, which keeps the
    /// minimum degree at least three outside the runs.
    Cliques,
}

/// Hubs `0..degrees.len()` joined by runs of `k` 2-vertices given as
/// `(a, b, k)`, then padded up to the requested degrees.
pub fn hubs(degrees: &[usize], runs: &[(Vertex, Vertex, usize)], padding: Padding) -> Graph {
    let mut edges = Vec::new();
    let mut next = degrees.len();
    let mut deg = vec![0; degrees.len()];
    for &(a, b, k) in runs {
        deg[a] += 1;
        deg[b] += 1;
        let mut prev = a;
        for _ in 0..k {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, b));
    }
    for (h, &d) in degrees.iter().enumerate() {
        assert!(deg[h] <= d, "hub {h} is over its degree");
        for _ in deg[h]..d {
            edges.push((h, next));
            if padding == Padding::Cliques {
                for i in 0..4 {
                    for j in i + 1..4 {
                        edges.push((next + i, next + j));
                    }
                }
                next += 4;
            } else {
                next += 1;
            }
        }
    }
    Graph::from_edges(next, edges).unwrap()
}

/// Triangle `x, y, z` (ids 0, 1, 2) plus common neighbours for each pair,
/// sized so every degree stays at most `delta`. All vertices are pairwise
/// within distance two, so the square is complete.
pub fn close_triangle_gadget(delta: usize) -> Graph {
    assert!(delta >= 2);
    let half = (delta - 2) / 2;
    let (xy, yz, zx) = (half, delta - 2 - half, half);
    let mut edges = vec![(0, 1), (1, 2), (0, 2)];
    let mut next: Vertex = 3;
    for (a, b, count) in [(0, 1, xy), (1, 2, yz), (2, 0, zx)] {
        for _ in 0..count {
            edges.push((a, next));
            edges.push((b, next));
            next += 1;
        }
    }
    Graph::from_edges(next, edges).unwrap()
}
