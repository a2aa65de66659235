#![allow(dead_code)]

use proptest::prelude::*;
use proptest::sample::Index;
use udconsist_core::grct::{GrctTree, NodeKind, TreeBuilder};
use udconsist_core::{Sentence, Token};

const DEPRELS: [&str; 3] = ["nsubj", "obj", "det"];
const UPOS: [&str; 2] = ["NOUN", "VERB"];
const FEATS: [&str; 2] = ["_", "Number=Sing"];
const FORMS: [&str; 2] = ["a", "b"];

/// Random single-rooted sentence over small label alphabets, so that equal
/// trees come up often.
pub fn sentence(max_tokens: usize) -> impl Strategy<Value = Sentence> {
    (1..=max_tokens)
        .prop_flat_map(|n| {
            (
                Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
                proptest::collection::vec(any::<Index>(), n),
                proptest::collection::vec((0..3usize, 0..2usize, 0..2usize, 0..2usize), n),
            )
        })
        .prop_map(|(order, picks, labels)| {
            let n = order.len();
            let mut heads = vec![0usize; n];
            for k in 1..n {
                let parent = order[picks[k].index(k)];
                heads[order[k]] = parent + 1;
            }
            let tokens = (0..n)
                .map(|i| {
                    let (d, u, f, w) = labels[i];
                    let deprel = if heads[i] == 0 { "root" } else { DEPRELS[d] };
                    Token::new(i + 1, FORMS[w], UPOS[u], heads[i], deprel).with_feats(FEATS[f])
                })
                .collect();
            Sentence::from_tokens(tokens)
        })
}

/// Random ordered labelled tree with arbitrary node kinds, built in preorder.
pub fn labeled_tree(max_nodes: usize) -> impl Strategy<Value = GrctTree> {
    (1..=max_nodes)
        .prop_flat_map(|n| {
            (
                proptest::collection::vec(any::<Index>(), n),
                proptest::collection::vec((0..3usize, 0..3usize), n),
            )
        })
        .prop_map(|(parents, labels)| {
            let n = parents.len();
            let mut children = vec![Vec::new(); n];
            for i in 1..n {
                children[parents[i].index(i)].push(i);
            }
            let mut b = TreeBuilder::default();
            emit(&mut b, None, 0, &children, &labels);
            b.finish()
        })
}

fn emit(
    b: &mut TreeBuilder,
    parent: Option<usize>,
    node: usize,
    children: &[Vec<usize>],
    labels: &[(usize, usize)],
) {
    let (k, l) = labels[node];
    let kind = [NodeKind::Relation, NodeKind::Pos, NodeKind::Lexical][k];
    let id = b.push(parent, kind, ["x", "y", "z"][l]);
    for &c in &children[node] {
        emit(b, Some(id), c, children, labels);
    }
}

/// Every maximal clique of a graph given as an adjacency test, by checking
/// all vertex subsets.
pub fn brute_force_maximal_cliques(
    n: usize,
    adj: impl Fn(usize, usize) -> bool,
) -> Vec<Vec<usize>> {
    let is_clique = |mask: u32| {
        (0..n).all(|a| {
            (0..n).all(|b| a == b || mask & (1 << a) == 0 || mask & (1 << b) == 0 || adj(a, b))
        })
    };
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        if !is_clique(mask) {
            continue;
        }
        let maximal = (0..n).all(|v| mask & (1 << v) != 0 || !is_clique(mask | (1 << v)));
        if maximal {
            out.push((0..n).filter(|v| mask & (1 << v) != 0).collect::<Vec<_>>());
        }
    }
    out.sort();
    out
}
