//! Rooted dependency trees over the word tokens of a sentence.

use alloc::vec;
use alloc::vec::Vec;

use crate::conllu::{Sentence, Token};
use crate::error::TreeError;

/// Word tokens plus, for each, its dependents in word order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepTree {
    pub nodes: Vec<Token>,
    pub children: Vec<Vec<usize>>,
    pub root: usize,
}

impl DepTree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.children.iter().map(Vec::len).sum()
    }

    /// Distance from the root to the deepest node.
    pub fn depth(&self) -> usize {
        let mut best = 0;
        let mut stack = vec![(self.root, 0usize)];
        while let Some((n, d)) = stack.pop() {
            best = best.max(d);
            stack.extend(self.children[n].iter().map(|&c| (c, d + 1)));
        }
        best
    }
}

/// Builds the tree from the head column. Multiword ranges and empty nodes
/// are not part of the tree.
pub fn build_dep_tree(s: &Sentence) -> Result<DepTree, TreeError> {
    let n = s.tokens.len();
    if n == 0 {
        return Err(TreeError::Empty);
    }
    let mut roots = Vec::new();
    for tok in &s.tokens {
        if tok.head == 0 {
            roots.push(tok.id);
        } else if tok.head > n {
            return Err(TreeError::DanglingHead {
                id: tok.id,
                head: tok.head,
            });
        }
    }

    // Cycles first: a self-loop or cycle also leaves the root count wrong,
    // and the cycle is the more useful diagnosis.
    if let Some(cycle) = find_cycle(&s.tokens) {
        return Err(TreeError::Cycle(cycle));
    }
    let root = match roots.as_slice() {
        [] => return Err(TreeError::NoRoot),
        [r] => r - 1,
        _ => return Err(TreeError::MultipleRoots(roots)),
    };

    let mut children = vec![Vec::new(); n];
    // ids are 1..=n in order, so pushing in token order keeps word order
    for (i, tok) in s.tokens.iter().enumerate() {
        if tok.head != 0 {
            children[tok.head - 1].push(i);
        }
    }
    Ok(DepTree {
        nodes: s.tokens.clone(),
        children,
        root,
    })
}

/// Follows head pointers from every token; returns the ids on the first
/// cycle found, in head-pointer order starting from the smallest id.
fn find_cycle(tokens: &[Token]) -> Option<Vec<usize>> {
    const UNSEEN: u8 = 0;
    const ACTIVE: u8 = 1;
    const DONE: u8 = 2;
    let n = tokens.len();
    let mut state = vec![UNSEEN; n + 1];
    for start in 1..=n {
        if state[start] != UNSEEN {
            continue;
        }
        let mut path = Vec::new();
        let mut cur = start;
        loop {
            if cur == 0 || cur > n || state[cur] == DONE {
                break;
            }
            if state[cur] == ACTIVE {
                let pos = path.iter().position(|&p| p == cur).unwrap_or(0);
                let mut cycle = path[pos..].to_vec();
                let min_pos = cycle
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, &v)| v)
                    .map(|(i, _)| i)
                    .unwrap_or(0);
                cycle.rotate_left(min_pos);
                return Some(cycle);
            }
            state[cur] = ACTIVE;
            path.push(cur);
            cur = tokens[cur - 1].head;
        }
        for p in path {
            state[p] = DONE;
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sent(heads: &[usize]) -> Sentence {
        Sentence::from_tokens(
            heads
                .iter()
                .enumerate()
                .map(|(i, &h)| Token::new(i + 1, "w", "X", h, if h == 0 { "root" } else { "dep" }))
                .collect(),
        )
    }

    #[test]
    fn two_tokens() {
        let t = build_dep_tree(&sent(&[0, 1])).unwrap();
        assert_eq!(t.root, 0);
        assert_eq!(t.children[0], vec![1]);
        assert_eq!(t.edge_count(), 1);
    }

    #[test]
    fn self_loop_is_a_cycle() {
        assert_eq!(
            build_dep_tree(&sent(&[0, 2])).unwrap_err(),
            TreeError::Cycle(vec![2])
        );
    }

    #[test]
    fn chain_has_depth_two() {
        // 3 -> 2 -> 1 -> 0
        let t = build_dep_tree(&sent(&[0, 1, 2])).unwrap();
        assert_eq!(t.root, 0);
        assert_eq!(t.children, vec![vec![1], vec![2], vec![]]);
        assert_eq!(t.depth(), 2);
    }

    #[test]
    fn longer_cycle_is_reported_in_order() {
        // 1 root; 2 -> 4 -> 3 -> 2
        assert_eq!(
            build_dep_tree(&sent(&[0, 4, 2, 3])).unwrap_err(),
            TreeError::Cycle(vec![2, 4, 3])
        );
    }

    #[test]
    fn root_count_errors() {
        assert_eq!(
            build_dep_tree(&sent(&[0, 0])).unwrap_err(),
            TreeError::MultipleRoots(vec![1, 2])
        );
        assert_eq!(
            build_dep_tree(&sent(&[2, 1])).unwrap_err(),
            TreeError::Cycle(vec![1, 2])
        );
        assert_eq!(
            build_dep_tree(&sent(&[0, 7])).unwrap_err(),
            TreeError::DanglingHead { id: 2, head: 7 }
        );
    }

    #[test]
    fn children_are_in_word_order() {
        let t = build_dep_tree(&sent(&[3, 3, 0, 3, 3])).unwrap();
        assert_eq!(t.root, 2);
        assert_eq!(t.children[2], vec![0, 1, 3, 4]);
    }
}
