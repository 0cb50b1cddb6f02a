//! Newick reading and canonical Newick writing.
//!
//! The canonical form is deterministic: the serialization root is the
//! neighbor of the lexicographically smallest leaf (so an unrooted binary
//! tree prints with a trifurcating root), and children are ordered by the
//! smallest leaf label in their subtree. Branch lengths are accepted on
//! input and discarded; output never carries them.

use crate::error::{Error, Result};
use crate::set_system::Element;
use crate::tree::Tree;

/// Parses a Newick string into an unrooted tree. A root of degree >= 3 is
/// kept as an ordinary interior vertex; an unlabeled degree-2 root is
/// suppressed.
pub fn parse_newick(text: &str) -> Result<Tree> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        adj: Vec::new(),
        labels: Vec::new(),
    };
    p.skip_ws();
    if p.at_end() {
        return Err(Error::EmptyNewick);
    }
    let root = p.subtree()?;
    p.skip_ws();
    if !p.eat(b';') {
        return Err(Error::NewickSyntax("missing trailing semicolon".into()));
    }
    p.skip_ws();
    if !p.at_end() {
        return Err(Error::NewickSyntax("trailing input after semicolon".into()));
    }

    let mut tree = Tree::from_parts(p.adj, p.labels)?;
    if tree.degree(root) == 2 && tree.label_of(root).is_none() {
        tree = suppress_root(tree, root)?;
    }
    Ok(tree)
}

fn suppress_root(t: Tree, root: usize) -> Result<Tree> {
    let nbrs: Vec<usize> = t.neighbors(root).to_vec();
    let n = t.vertex_count();
    let remap = |v: usize| if v > root { v - 1 } else { v };
    let mut adj = vec![Vec::new(); n - 1];
    let mut labels = vec![None; n - 1];
    for v in 0..n {
        if v == root {
            continue;
        }
        labels[remap(v)] = t.label_of(v).cloned();
        for &w in t.neighbors(v) {
            if w == root {
                let other = if nbrs[0] == v { nbrs[1] } else { nbrs[0] };
                adj[remap(v)].push(remap(other));
            } else {
                adj[remap(v)].push(remap(w));
            }
        }
    }
    Tree::from_parts(adj, labels)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    adj: Vec<Vec<usize>>,
    labels: Vec<Option<Element>>,
}

impl<'a> Parser<'a> {
    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn new_vertex(&mut self, label: Option<Element>) -> Result<usize> {
        if let Some(l) = &label {
            if self.labels.iter().flatten().any(|e| e == l) {
                return Err(Error::DuplicateLeafLabel(l.as_str().to_owned()));
            }
        }
        self.adj.push(Vec::new());
        self.labels.push(label);
        Ok(self.adj.len() - 1)
    }

    fn subtree(&mut self) -> Result<usize> {
        self.skip_ws();
        if self.eat(b'(') {
            let mut children = Vec::new();
            loop {
                children.push(self.subtree()?);
                self.skip_ws();
                if self.eat(b',') {
                    continue;
                }
                if self.eat(b')') {
                    break;
                }
                return Err(Error::UnbalancedParens);
            }
            let label = self.label()?;
            self.branch_length()?;
            let v = self.new_vertex(label)?;
            for c in children {
                self.adj[v].push(c);
                self.adj[c].push(v);
            }
            Ok(v)
        } else {
            let label = self.label()?;
            if label.is_none() {
                return Err(Error::NewickSyntax(format!(
                    "expected a label or '(' at byte {}",
                    self.pos
                )));
            }
            self.branch_length()?;
            self.new_vertex(label)
        }
    }

    fn label(&mut self) -> Result<Option<Element>> {
        self.skip_ws();
        let start = self.pos;
        while let Some(b) = self.peek() {
            if b.is_ascii_whitespace() || matches!(b, b'(' | b')' | b',' | b':' | b';') {
                break;
            }
            self.pos += 1;
        }
        if self.pos == start {
            return Ok(None);
        }
        let raw = std::str::from_utf8(&self.bytes[start..self.pos])
            .map_err(|_| Error::NewickSyntax("invalid UTF-8 in label".into()))?;
        Ok(Some(Element::new(raw)?))
    }

    fn branch_length(&mut self) -> Result<()> {
        self.skip_ws();
        if self.eat(b':') {
            self.skip_ws();
            let start = self.pos;
            while matches!(self.peek(), Some(b) if b.is_ascii_digit() || matches!(b, b'.' | b'-' | b'+' | b'e' | b'E'))
            {
                self.pos += 1;
            }
            let raw = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap_or("");
            raw.parse::<f64>()
                .map_err(|_| Error::NewickSyntax("invalid branch length".into()))?;
        }
        Ok(())
    }
}

/// Serializes a tree to its canonical Newick form. Every degree-1 vertex
/// must carry a label.
pub fn serialize_newick(t: &Tree) -> Result<String> {
    Ok(canonical_traversal(t)?.0)
}

/// Stable vertex names derived from the canonical traversal: leaves are
/// named by their label, interior vertices `i0, i1, ...` in visit order.
pub fn canonical_vertex_names(t: &Tree) -> Result<Vec<String>> {
    Ok(canonical_traversal(t)?.1)
}

fn canonical_traversal(t: &Tree) -> Result<(String, Vec<String>)> {
    if t.vertex_count() == 0 {
        return Err(Error::EmptyTree);
    }
    for v in 0..t.vertex_count() {
        if t.is_leaf(v) && t.label_of(v).is_none() {
            return Err(Error::UnlabeledLeaf);
        }
    }
    let mut names = vec![String::new(); t.vertex_count()];
    for v in 0..t.vertex_count() {
        if let Some(l) = t.label_of(v) {
            names[v] = l.as_str().to_owned();
        }
    }

    if t.vertex_count() == 1 {
        let label = t.label_of(0).ok_or(Error::UnlabeledLeaf)?;
        return Ok((format!("{label};"), names));
    }
    if t.vertex_count() == 2 {
        let mut ls: Vec<&Element> = vec![
            t.label_of(0).ok_or(Error::UnlabeledLeaf)?,
            t.label_of(1).ok_or(Error::UnlabeledLeaf)?,
        ];
        ls.sort();
        return Ok((format!("({},{});", ls[0], ls[1]), names));
    }

    let leaf_vertex = t
        .labeled_leaves()
        .next()
        .map(|(_, v)| v)
        .ok_or(Error::UnlabeledLeaf)?;
    let root = t.neighbors(leaf_vertex)[0];

    let mut counter = 0usize;
    let rendered = render(t, root, usize::MAX, &mut names, &mut counter);
    Ok((format!("{rendered};"), names))
}

/// Smallest leaf label in the subtree at `v` seen from `parent`.
fn min_leaf(t: &Tree, v: usize, parent: usize) -> Element {
    let mut best: Option<Element> = None;
    for &w in t.neighbors(v) {
        if w != parent {
            let m = min_leaf(t, w, v);
            if best.as_ref().is_none_or(|b| m < *b) {
                best = Some(m);
            }
        }
    }
    match best {
        Some(b) => b,
        None => t.label_of(v).expect("leaves are labeled").clone(),
    }
}

/// Renders the subtree at `v` (coming from `parent`), visiting children in
/// canonical order and assigning interior names in preorder.
fn render(t: &Tree, v: usize, parent: usize, names: &mut [String], counter: &mut usize) -> String {
    let children: Vec<usize> = t.neighbors(v).iter().copied().filter(|&w| w != parent).collect();
    if children.is_empty() {
        return t.label_of(v).expect("leaves are labeled").as_str().to_owned();
    }
    if t.label_of(v).is_none() {
        names[v] = format!("i{}", *counter);
        *counter += 1;
    }
    let mut keyed: Vec<(Element, usize)> = children
        .into_iter()
        .map(|c| (min_leaf(t, c, v), c))
        .collect();
    keyed.sort();
    let body: Vec<String> = keyed
        .into_iter()
        .map(|(_, c)| render(t, c, v, names, counter))
        .collect();
    let own = t.label_of(v).map(|l| l.as_str().to_owned()).unwrap_or_default();
    format!("({}){}", body.join(","), own)
}
