//! Dinic max-flow with integer capacities.

use std::collections::VecDeque;

#[derive(Clone, Debug)]
struct Arc {
    to: usize,
    cap: i64,
}

/// Flow network with paired forward/backward arcs (`arcs[e ^ 1]` is the
/// reverse of `arcs[e]`).
#[derive(Clone, Debug)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork { arcs: Vec::new(), out: vec![Vec::new(); nodes] }
    }

    pub fn nodes(&self) -> usize {
        self.out.len()
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: i64) {
        assert!(cap >= 0, "negative capacity");
        self.out[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap });
        self.out[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0 });
    }

    fn levels(&self, s: usize, t: usize) -> Option<Vec<u32>> {
        let mut level = vec![u32::MAX; self.nodes()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &e in &self.out[x] {
                let a = &self.arcs[e];
                if a.cap > 0 && level[a.to] == u32::MAX {
                    level[a.to] = level[x] + 1;
                    queue.push_back(a.to);
                }
            }
        }
        (level[t] != u32::MAX).then_some(level)
    }

    /// Iterative blocking-flow DFS along the level graph.
    fn augment(&mut self, s: usize, t: usize, level: &[u32], iter: &mut [usize]) -> i64 {
        let mut total = 0i64;
        loop {
            let mut path: Vec<usize> = Vec::new();
            let mut x = s;
            loop {
                if x == t {
                    break;
                }
                let mut advanced = false;
                while iter[x] < self.out[x].len() {
                    let e = self.out[x][iter[x]];
                    let a = &self.arcs[e];
                    if a.cap > 0 && level[a.to] == level[x] + 1 {
                        path.push(e);
                        x = a.to;
                        advanced = true;
                        break;
                    }
                    iter[x] += 1;
                }
                if !advanced {
                    if x == s {
                        return total;
                    }
                    // Dead end: retreat and skip the arc that led here.
                    let e = path.pop().expect("non-source node has an entry arc");
                    x = self.arcs[e ^ 1].to;
                    iter[x] += 1;
                }
            }
            let push = path.iter().map(|&e| self.arcs[e].cap).min().unwrap_or(0);
            for &e in &path {
                self.arcs[e].cap -= push;
                self.arcs[e ^ 1].cap += push;
            }
            total = total.checked_add(push).expect("flow value overflow");
        }
    }

    /// Maximum `s`-`t` flow value; the network keeps the residual capacities.
    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0i64;
        while let Some(level) = self.levels(s, t) {
            let mut iter = vec![0; self.nodes()];
            flow = flow.checked_add(self.augment(s, t, &level, &mut iter)).expect("flow value overflow");
        }
        flow
    }

    /// Nodes reachable from `s` in the residual network: the source side of
    /// a minimum cut once `max_flow` has run.
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.nodes()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &e in &self.out[x] {
                let a = &self.arcs[e];
                if a.cap > 0 && !seen[a.to] {
                    seen[a.to] = true;
                    stack.push(a.to);
                }
            }
        }
        seen
    }
}
