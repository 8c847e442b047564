//! Perfect matching in a bipartite threshold graph.
//!
//! Used to decide equality of two finite multisets whose elements are only
//! known up to a tolerance: the multisets are equal iff the graph with an edge
//! for every ε-close pair has a perfect matching.

use std::collections::VecDeque;

/// Adjacency lists from left vertices to right vertices, with edge weights.
pub(crate) type Adjacency = Vec<Vec<(usize, f64)>>;

/// Extends `partner` (left → right) to a maximum matching of `adj` by
/// repeated BFS augmentation. Returns `true` when every left vertex is matched.
///
/// `partner` may hold a partial matching to start from; it must be consistent
/// with `adj`.
pub(crate) fn complete_matching(adj: &Adjacency, right_len: usize, partner: &mut [Option<usize>]) -> bool {
    let mut owner: Vec<Option<usize>> = vec![None; right_len];
    for (l, p) in partner.iter().enumerate() {
        if let Some(r) = *p {
            owner[r] = Some(l);
        }
    }
    let mut all = true;
    for root in 0..adj.len() {
        if partner[root].is_some() {
            continue;
        }
        if !augment_from(root, adj, partner, &mut owner) {
            all = false;
        }
    }
    all
}

/// BFS over alternating paths from a free left vertex.
fn augment_from(root: usize, adj: &Adjacency, partner: &mut [Option<usize>], owner: &mut [Option<usize>]) -> bool {
    // came_from[r] = left vertex from which right vertex r was reached.
    let mut came_from: Vec<Option<usize>> = vec![None; owner.len()];
    let mut queue = VecDeque::from([root]);
    while let Some(l) = queue.pop_front() {
        for &(r, _) in &adj[l] {
            if came_from[r].is_some() {
                continue;
            }
            came_from[r] = Some(l);
            match owner[r] {
                Some(next) => queue.push_back(next),
                None => {
                    // Flip the path ending at the free vertex r.
                    let mut r = r;
                    loop {
                        let l = came_from[r].expect("path vertex");
                        let previous = partner[l];
                        partner[l] = Some(r);
                        owner[r] = Some(l);
                        match previous {
                            Some(p) if l != root => r = p,
                            _ => return true,
                        }
                    }
                }
            }
        }
    }
    false
}
