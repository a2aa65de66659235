//! Grammatical Relation Centered Trees.
//!
//! Every token becomes the chain `RELATION(deprel) -> POS(upos) ->
//! LEXICAL(form | feats)`, and a dependent's RELATION node hangs under its
//! head's RELATION node. The children of a RELATION node are ordered by the
//! word index of their source token, with the POS chain taking the head
//! token's own index.
//!
//! Trees are stored as a preorder arena; node 0 is the root.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::deptree::DepTree;
use crate::error::BracketError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Relation,
    Pos,
    Lexical,
}

/// Which token column fills the lexical layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LexMode {
    #[default]
    Form,
    Feats,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GrctNode {
    pub kind: NodeKind,
    pub label: String,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GrctTree {
    nodes: Vec<GrctNode>,
}

impl GrctTree {
    /// A single-node tree.
    pub fn leaf(kind: NodeKind, label: &str) -> Self {
        let mut b = TreeBuilder::default();
        b.push(None, kind, label);
        b.finish()
    }

    pub fn nodes(&self) -> &[GrctNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &GrctNode {
        &self.nodes[id]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn root(&self) -> usize {
        0
    }

    /// Copy of the subtree rooted at `id`.
    pub fn subtree(&self, id: usize) -> GrctTree {
        let mut b = TreeBuilder::default();
        self.copy_into(&mut b, None, id);
        b.finish()
    }

    fn copy_into(&self, b: &mut TreeBuilder, parent: Option<usize>, id: usize) {
        let n = &self.nodes[id];
        let new = b.push(parent, n.kind, &n.label);
        for &c in &n.children {
            self.copy_into(b, Some(new), c);
        }
    }

    /// Checks the layer structure produced by [`to_grct`].
    pub fn is_well_formed(&self) -> bool {
        if self.nodes.first().map(|n| n.kind) != Some(NodeKind::Relation) {
            return false;
        }
        self.nodes.iter().all(|n| {
            let kinds = n.children.iter().map(|&c| self.nodes[c].kind);
            match n.kind {
                NodeKind::Relation => {
                    let mut pos = 0;
                    for k in kinds {
                        match k {
                            NodeKind::Pos => pos += 1,
                            NodeKind::Relation => {}
                            NodeKind::Lexical => return false,
                        }
                    }
                    pos == 1
                }
                NodeKind::Pos => {
                    n.children.len() == 1 && self.nodes[n.children[0]].kind == NodeKind::Lexical
                }
                NodeKind::Lexical => n.children.is_empty(),
            }
        })
    }

    /// Reads the bracketed form written by `Display`.
    ///
    /// Node kinds are inferred from shape: a leaf is LEXICAL, a node whose
    /// only child is a leaf is POS, anything else is RELATION.
    pub fn from_bracketed(input: &str) -> Result<GrctTree, BracketError> {
        let mut p = BracketParser {
            src: input.as_bytes(),
            text: input,
            pos: 0,
        };
        let raw = p.node()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(BracketError {
                pos: p.pos,
                msg: "trailing input",
            });
        }
        let mut b = TreeBuilder::default();
        raw.emit(&mut b, None);
        Ok(b.finish())
    }

    fn fmt_node(&self, f: &mut fmt::Formatter<'_>, id: usize) -> fmt::Result {
        let n = &self.nodes[id];
        if n.children.is_empty() {
            return write_atom(f, &n.label);
        }
        f.write_str("(")?;
        write_atom(f, &n.label)?;
        for &c in &n.children {
            f.write_str(" ")?;
            self.fmt_node(f, c)?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for GrctTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.nodes.is_empty() {
            return Ok(());
        }
        self.fmt_node(f, 0)
    }
}

fn needs_quotes(label: &str) -> bool {
    label.is_empty()
        || label
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | '"' | '\\'))
}

fn write_atom(f: &mut fmt::Formatter<'_>, label: &str) -> fmt::Result {
    if !needs_quotes(label) {
        return f.write_str(label);
    }
    f.write_str("\"")?;
    for c in label.chars() {
        if matches!(c, '"' | '\\') {
            f.write_str("\\")?;
        }
        fmt::Write::write_char(f, c)?;
    }
    f.write_str("\"")
}

/// Appends nodes in preorder; a child must be pushed after its parent and
/// before any later sibling subtree.
#[derive(Default)]
pub struct TreeBuilder {
    nodes: Vec<GrctNode>,
}

impl TreeBuilder {
    pub fn push(&mut self, parent: Option<usize>, kind: NodeKind, label: &str) -> usize {
        let id = self.nodes.len();
        self.nodes.push(GrctNode {
            kind,
            label: label.to_string(),
            children: Vec::new(),
        });
        if let Some(p) = parent {
            self.nodes[p].children.push(id);
        }
        id
    }

    pub fn finish(self) -> GrctTree {
        GrctTree { nodes: self.nodes }
    }
}

/// Transforms a dependency tree into its GRCT.
pub fn to_grct(t: &DepTree, mode: LexMode) -> GrctTree {
    let mut b = TreeBuilder::default();
    // explicit stack keeps very deep trees off the call stack
    enum Step {
        Token(usize, Option<usize>),
        Pos(usize, usize),
    }
    let mut stack = alloc::vec![Step::Token(t.root, None)];
    while let Some(step) = stack.pop() {
        match step {
            Step::Pos(tok, parent) => {
                let node = &t.nodes[tok];
                let pos = b.push(Some(parent), NodeKind::Pos, &node.upos);
                let lex = match mode {
                    LexMode::Form => &node.form,
                    LexMode::Feats => &node.feats,
                };
                b.push(Some(pos), NodeKind::Lexical, lex);
            }
            Step::Token(tok, parent) => {
                let rel = b.push(parent, NodeKind::Relation, &t.nodes[tok].deprel);
                let deps = &t.children[tok];
                let split = deps.partition_point(|&d| d < tok);
                // pushed in reverse so they pop in word order
                for &d in deps[split..].iter().rev() {
                    stack.push(Step::Token(d, Some(rel)));
                }
                stack.push(Step::Pos(tok, rel));
                for &d in deps[..split].iter().rev() {
                    stack.push(Step::Token(d, Some(rel)));
                }
            }
        }
    }
    b.finish()
}

/// Structural equality: same kinds, labels and child order everywhere.
pub fn grct_equal(a: &GrctTree, b: &GrctTree) -> bool {
    fn eq(a: &GrctTree, x: usize, b: &GrctTree, y: usize) -> bool {
        let (n, m) = (&a.nodes[x], &b.nodes[y]);
        n.kind == m.kind
            && n.label == m.label
            && n.children.len() == m.children.len()
            && n.children
                .iter()
                .zip(&m.children)
                .all(|(&c, &d)| eq(a, c, b, d))
    }
    match (a.nodes.is_empty(), b.nodes.is_empty()) {
        (true, true) => true,
        (false, false) => eq(a, 0, b, 0),
        _ => false,
    }
}

enum RawNode {
    Leaf(String),
    Inner(String, Vec<RawNode>),
}

impl RawNode {
    fn emit(&self, b: &mut TreeBuilder, parent: Option<usize>) {
        match self {
            RawNode::Leaf(l) => {
                b.push(parent, NodeKind::Lexical, l);
            }
            RawNode::Inner(l, kids) => {
                let kind = match kids.as_slice() {
                    [RawNode::Leaf(_)] => NodeKind::Pos,
                    _ => NodeKind::Relation,
                };
                let id = b.push(parent, kind, l);
                for k in kids {
                    k.emit(b, Some(id));
                }
            }
        }
    }
}

struct BracketParser<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
}

impl BracketParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err(&self, msg: &'static str) -> BracketError {
        BracketError { pos: self.pos, msg }
    }

    fn node(&mut self) -> Result<RawNode, BracketError> {
        self.skip_ws();
        match self.src.get(self.pos) {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let label = self.atom()?;
                let mut kids = Vec::new();
                loop {
                    self.skip_ws();
                    match self.src.get(self.pos) {
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        None => return Err(self.err("unclosed parenthesis")),
                        _ => kids.push(self.node()?),
                    }
                }
                if kids.is_empty() {
                    return Err(self.err("parenthesised node without children"));
                }
                Ok(RawNode::Inner(label, kids))
            }
            Some(b')') => Err(self.err("unexpected ')'")),
            _ => Ok(RawNode::Leaf(self.atom()?)),
        }
    }

    fn atom(&mut self) -> Result<String, BracketError> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&b'"') {
            self.pos += 1;
            let mut out = String::new();
            let mut chars = self.text[self.pos..].char_indices();
            while let Some((i, c)) = chars.next() {
                match c {
                    '"' => {
                        self.pos += i + 1;
                        return Ok(out);
                    }
                    '\\' => match chars.next() {
                        Some((_, e)) => out.push(e),
                        None => break,
                    },
                    c => out.push(c),
                }
            }
            self.pos = self.src.len();
            return Err(self.err("unterminated quoted label"));
        }
        let start = self.pos;
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            if c.is_ascii_whitespace() || c == b'(' || c == b')' || c == b'"' {
                break;
            }
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a label"));
        }
        // stopped only on ASCII bytes, so this is a char boundary
        Ok(self.text[start..self.pos].to_string())
    }
}
