//! Hopcroft-Karp maximum bipartite matching.

use std::collections::VecDeque;

/// Maximum matching between `left` vertices `0..adj.len()` and right
/// vertices `0..right`. Returns `mate[l] = Some(r)`.
pub fn hopcroft_karp(adj: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    const INF: u32 = u32::MAX;
    let left = adj.len();
    let mut mate_l: Vec<Option<usize>> = vec![None; left];
    let mut mate_r: Vec<Option<usize>> = vec![None; right];
    let mut dist = vec![INF; left];
    loop {
        let mut queue = VecDeque::new();
        for l in 0..left {
            if mate_l[l].is_none() {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = INF;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &adj[l] {
                match mate_r[r] {
                    None => found = true,
                    Some(l2) if dist[l2] == INF => {
                        dist[l2] = dist[l] + 1;
                        queue.push_back(l2);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            return mate_l;
        }
        for l in 0..left {
            if mate_l[l].is_none() {
                augment(l, adj, &mut mate_l, &mut mate_r, &mut dist);
            }
        }
    }
}

fn augment(
    l: usize,
    adj: &[Vec<usize>],
    mate_l: &mut [Option<usize>],
    mate_r: &mut [Option<usize>],
    dist: &mut [u32],
) -> bool {
    for &r in &adj[l] {
        let ok = match mate_r[r] {
            None => true,
            Some(l2) => dist[l2] == dist[l] + 1 && augment(l2, adj, mate_l, mate_r, dist),
        };
        if ok {
            mate_l[l] = Some(r);
            mate_r[r] = Some(l);
            return true;
        }
    }
    dist[l] = u32::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_and_deficient() {
        let m = hopcroft_karp(&[vec![0, 1], vec![1, 2], vec![0, 2]], 3);
        assert!(m.iter().all(Option::is_some));
        let m = hopcroft_karp(&[vec![0], vec![0]], 1);
        assert_eq!(m.iter().filter(|x| x.is_some()).count(), 1);
    }
}
