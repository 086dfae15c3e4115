//! Vertex classes used by the discharging rules: small, medium and large
//! 2-vertices, bridges, roots and sponsors of 3-paths.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::rho_star_minus;
use crate::graph::{all_runs, Graph, PathDescriptor, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TwoVertexClass {
    /// Two neighbors of degree at least three.
    Large,
    /// Exactly one 2-neighbor.
    Medium,
    /// Two 2-neighbors.
    Small,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexClasses {
    pub two: Vec<Option<TwoVertexClass>>,
    /// Large 2-vertex with a 3-neighbor and a 6+-neighbor.
    pub one_path_bridge: Vec<bool>,
    /// For a medium 2-vertex in a 2-path bridge, its partner.
    pub two_path_bridge: Vec<Option<Vertex>>,
    /// For a sponsor, the middle vertex of its 3-path.
    pub sponsor: Vec<Option<Vertex>>,
    pub root: Vec<bool>,
    /// Open 3-paths, oriented from sponsor to root.
    pub three_paths: Vec<PathDescriptor>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("3-path from {0} back to itself")]
    ClosedThreePath(Vertex),
    #[error("3-paths close a cycle through {0:?}")]
    Cycle(Vec<Vertex>),
    #[error("three consecutive 3-paths through {0:?}")]
    Chain(Vec<Vertex>),
}

fn find(parent: &mut [Vertex], mut x: Vertex) -> Vertex {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Classifies every vertex. The 3-paths must form a forest of stars; a
/// single 3-path is rooted at the end of larger `rho*` once its internal
/// vertices are removed, ties going to the smaller id.
pub fn classify_vertices(g: &Graph) -> Result<VertexClasses, ClassifyError> {
    let n = g.n();
    let d = |v: Vertex| g.degree(v);
    let mut two = vec![None; n];
    let mut one_path_bridge = vec![false; n];
    for v in g.vertices().filter(|&v| d(v) == 2) {
        let nb = g.neighbors(v);
        let twos = nb.iter().filter(|&&x| d(x) == 2).count();
        two[v] = Some(match twos {
            0 => TwoVertexClass::Large,
            1 => TwoVertexClass::Medium,
            _ => TwoVertexClass::Small,
        });
        if twos == 0 {
            let (a, b) = (d(nb[0]), d(nb[1]));
            one_path_bridge[v] = (a == 3 && b >= 6) || (b == 3 && a >= 6);
        }
    }

    let runs = all_runs(g);
    let mut two_path_bridge = vec![None; n];
    for p in runs.iter().filter(|p| p.k() == 2 && !p.is_closed()) {
        let (a, b) = (d(p.u), d(p.v));
        if (a <= 5 && b == 7) || (b <= 5 && a == 7) {
            two_path_bridge[p.internal[0]] = Some(p.internal[1]);
            two_path_bridge[p.internal[1]] = Some(p.internal[0]);
        }
    }

    let threes: Vec<&PathDescriptor> = runs.iter().filter(|p| p.k() == 3).collect();
    if let Some(p) = threes.iter().find(|p| p.is_closed()) {
        return Err(ClassifyError::ClosedThreePath(p.u));
    }
    let mut parent: Vec<Vertex> = (0..n).collect();
    let mut count = vec![0usize; n];
    for p in &threes {
        let (a, b) = (find(&mut parent, p.u), find(&mut parent, p.v));
        if a == b {
            return Err(ClassifyError::Cycle(vec![p.u, p.v]));
        }
        parent[a] = b;
        count[p.u] += 1;
        count[p.v] += 1;
    }
    if let Some(mid) = threes.iter().find(|p| count[p.u] >= 2 && count[p.v] >= 2) {
        let other = |end: Vertex| {
            threes.iter().find(|q| q.internal != mid.internal && (q.u == end || q.v == end)).map(|q| q.other_end(end))
        };
        let chain = [other(mid.u), Some(mid.u), Some(mid.v), other(mid.v)].into_iter().flatten().collect();
        return Err(ClassifyError::Chain(chain));
    }

    let mut sponsor = vec![None; n];
    let mut root = vec![false; n];
    let mut three_paths = Vec::new();
    for p in threes {
        let (s, r) = if count[p.u] >= 2 {
            (p.v, p.u)
        } else if count[p.v] >= 2 {
            (p.u, p.v)
        } else {
            let pu = rho_star_minus(g, &[p.u], &p.internal);
            let pv = rho_star_minus(g, &[p.v], &p.internal);
            // p.u < p.v, so ties root at p.u.
            if pv > pu {
                (p.u, p.v)
            } else {
                (p.v, p.u)
            }
        };
        root[r] = true;
        sponsor[s] = Some(p.internal[1]);
        three_paths.push(p.from_end(s));
    }
    Ok(VertexClasses { two, one_path_bridge, two_path_bridge, sponsor, root, three_paths })
}
