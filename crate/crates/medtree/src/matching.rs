//! Maximum bipartite matching with deficiency-witness extraction.
//!
//! Augmenting-path matching over adjacency lists. When the left side cannot
//! be saturated, the set of left vertices reachable from the unmatched ones
//! by alternating paths has a neighborhood strictly smaller than itself;
//! that set is returned as the witness.

/// Result of [`max_bipartite_matching`].
#[derive(Clone, Debug)]
pub struct MatchingOutcome {
    /// Matched right vertex per left vertex.
    pub left_match: Vec<Option<usize>>,
    /// Number of matched pairs.
    pub size: usize,
    /// When the matching leaves the left side unsaturated: a set of left
    /// vertices whose joint neighborhood is smaller than the set.
    pub deficiency_witness: Option<Vec<usize>>,
}

/// Computes a maximum matching between `left_count` left vertices and
/// `right_count` right vertices joined by `edges`.
pub fn max_bipartite_matching(
    left_count: usize,
    right_count: usize,
    edges: &[(usize, usize)],
) -> MatchingOutcome {
    let mut adj = vec![Vec::new(); left_count];
    for &(u, v) in edges {
        assert!(u < left_count && v < right_count, "edge out of range");
        adj[u].push(v as u32);
    }
    for nbrs in &mut adj {
        nbrs.sort_unstable();
        nbrs.dedup();
    }

    let mut state = MatchState::new(left_count, right_count);
    for u in 0..left_count {
        state.augment(&adj, u as u32, None);
    }
    let size = state.left_match.iter().flatten().count();
    let deficiency_witness = if size < left_count {
        let unmatched: Vec<u32> = (0..left_count as u32)
            .filter(|&u| state.left_match[u as usize].is_none())
            .collect();
        let mut reach = state.alternating_reach(&adj, &unmatched, None);
        reach.sort_unstable();
        Some(reach.into_iter().map(|u| u as usize).collect())
    } else {
        None
    };
    MatchingOutcome {
        left_match: state
            .left_match
            .iter()
            .map(|m| m.map(|r| r as usize))
            .collect(),
        size,
        deficiency_witness,
    }
}

/// Matching state reusable across repeated augmentations; cloning it is the
/// cheap way to explore "what if these right vertices were banned".
#[derive(Clone)]
pub(crate) struct MatchState {
    pub(crate) left_match: Vec<Option<u32>>,
    pub(crate) right_owner: Vec<Option<u32>>,
    visited: Vec<u32>,
    stamp: u32,
}

impl MatchState {
    pub(crate) fn new(left_count: usize, right_count: usize) -> MatchState {
        MatchState {
            left_match: vec![None; left_count],
            right_owner: vec![None; right_count],
            visited: vec![0; left_count],
            stamp: 0,
        }
    }

    pub(crate) fn unmatch_right(&mut self, r: u32) -> Option<u32> {
        let owner = self.right_owner[r as usize].take();
        if let Some(u) = owner {
            self.left_match[u as usize] = None;
        }
        owner
    }

    fn banned(banned: Option<[u32; 2]>, r: u32) -> bool {
        matches!(banned, Some([a, b]) if r == a || r == b)
    }

    /// Tries to match `u`, rerouting existing matches along an alternating
    /// path. Right vertices in `banned` are off limits.
    pub(crate) fn augment(&mut self, adj: &[Vec<u32>], u: u32, banned: Option<[u32; 2]>) -> bool {
        self.stamp += 1;
        self.try_augment(adj, u, banned)
    }

    fn try_augment(&mut self, adj: &[Vec<u32>], u: u32, banned: Option<[u32; 2]>) -> bool {
        if self.visited[u as usize] == self.stamp {
            return false;
        }
        self.visited[u as usize] = self.stamp;
        // First pass: a free right vertex wins immediately.
        for &r in &adj[u as usize] {
            if !Self::banned(banned, r) && self.right_owner[r as usize].is_none() {
                self.left_match[u as usize] = Some(r);
                self.right_owner[r as usize] = Some(u);
                return true;
            }
        }
        for &r in &adj[u as usize] {
            if Self::banned(banned, r) {
                continue;
            }
            let owner = self.right_owner[r as usize].expect("free vertices handled above");
            if self.try_augment(adj, owner, banned) {
                self.left_match[u as usize] = Some(r);
                self.right_owner[r as usize] = Some(u);
                return true;
            }
        }
        false
    }

    /// Left vertices reachable from `starts` by alternating paths
    /// (left-to-right along any edge, right-to-left along matching edges).
    pub(crate) fn alternating_reach(
        &self,
        adj: &[Vec<u32>],
        starts: &[u32],
        banned: Option<[u32; 2]>,
    ) -> Vec<u32> {
        let mut seen_left = vec![false; self.left_match.len()];
        let mut stack: Vec<u32> = Vec::new();
        for &u in starts {
            if !seen_left[u as usize] {
                seen_left[u as usize] = true;
                stack.push(u);
            }
        }
        while let Some(u) = stack.pop() {
            for &r in &adj[u as usize] {
                if Self::banned(banned, r) {
                    continue;
                }
                if let Some(owner) = self.right_owner[r as usize] {
                    if !seen_left[owner as usize] {
                        seen_left[owner as usize] = true;
                        stack.push(owner);
                    }
                }
            }
        }
        (0..self.left_match.len() as u32)
            .filter(|&u| seen_left[u as usize])
            .collect()
    }
}
