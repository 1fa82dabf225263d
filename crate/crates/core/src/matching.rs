//! Maximum bipartite matching by augmenting paths.
//!
//! Right vertices are tried in the order they appear in each adjacency list;
//! callers pass ascending machine indices so ties go to the lowest machine.

/// `adj[l]` lists the right vertices adjacent to left vertex `l`.
/// Returns the partner of every left vertex.
pub fn max_matching(right_count: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let mut right_match: Vec<Option<usize>> = vec![None; right_count];
    let mut seen = vec![0usize; right_count];
    for l in 0..adj.len() {
        augment(l, l + 1, adj, &mut right_match, &mut seen);
    }
    let mut left_match = vec![None; adj.len()];
    for (r, l) in right_match.iter().enumerate() {
        if let Some(l) = *l {
            left_match[l] = Some(r);
        }
    }
    left_match
}

fn augment(
    l: usize,
    stamp: usize,
    adj: &[Vec<usize>],
    right_match: &mut [Option<usize>],
    seen: &mut [usize],
) -> bool {
    for &r in &adj[l] {
        if seen[r] == stamp {
            continue;
        }
        seen[r] = stamp;
        let free = match right_match[r] {
            None => true,
            Some(other) => augment(other, stamp, adj, right_match, seen),
        };
        if free {
            right_match[r] = Some(l);
            return true;
        }
    }
    false
}
