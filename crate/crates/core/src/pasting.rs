//! Batanin trees and labelled pasting diagrams: the cells of the free strict
//! globular category on a globular set.
//!
//! A pasting diagram is stored as a [`Node`] tree. Each node at depth `k`
//! with `c` children carries `c + 1` labelled `k`-cells ("gaps"); every cell
//! inside child `i` runs from gap `i` to gap `i + 1` of its parent. Positions
//! are geometric: in `(()())` the first 1-cell ends where the second begins.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::glob::{cell, GlobularSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PastingError {
    #[error("tree height {height} exceeds dimension {dim}")]
    HeightExceedsDim { height: usize, dim: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("cannot glue at level {p}: diagrams have dimension {dim}")]
    GlueLevel { p: usize, dim: usize },
    #[error("dimensions differ: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("boundary mismatch at level {p}: {left} vs {right}")]
    GlueMismatch { p: usize, left: String, right: String },
    #[error("cannot lower dimension from {from} to {to}")]
    Degenerate { from: usize, to: usize },
    #[error("boundary level {k} must be below dimension {dim}")]
    BoundaryLevel { k: usize, dim: usize },
    #[error("incompatible labels: {0}")]
    Incompatible(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Source,
    Target,
}

/// How a written `a ⋆_p b` is placed: diagrammatic puts `a` first, applicative puts `b` first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StarOrder {
    Diagrammatic,
    Applicative,
}

impl StarOrder {
    pub fn name(self) -> &'static str {
        match self {
            StarOrder::Diagrammatic => "diagrammatic",
            StarOrder::Applicative => "applicative",
        }
    }
}

impl FromStr for StarOrder {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "diagrammatic" => Ok(StarOrder::Diagrammatic),
            "applicative" => Ok(StarOrder::Applicative),
            _ => Err(format!("unknown star order {s:?}")),
        }
    }
}

/// An ordered rooted tree; `()` is the point, `(())` the 1-globe.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Tree(pub Vec<Tree>);

impl Tree {
    pub fn leaf() -> Tree {
        Tree(Vec::new())
    }

    /// The linear tree of height `m`.
    pub fn linear(m: usize) -> Tree {
        (0..m).fold(Tree::leaf(), |t, _| Tree(vec![t]))
    }

    pub fn height(&self) -> usize {
        self.0.iter().map(|c| 1 + c.height()).max().unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self.0.iter().map(Tree::node_count).sum::<usize>()
    }

    pub fn leaf_count(&self) -> usize {
        if self.0.is_empty() {
            1
        } else {
            self.0.iter().map(Tree::leaf_count).sum()
        }
    }

    /// Every cell of the realized scheme labelled with `l`.
    pub fn labelled<L: Clone>(&self, l: &L) -> Node<L> {
        Node { gaps: vec![l.clone(); self.0.len() + 1], children: self.0.iter().map(|c| c.labelled(l)).collect() }
    }

    /// All trees of height at most `h` with at most `nodes` nodes.
    pub fn all_up_to(h: usize, nodes: usize) -> Vec<Tree> {
        fn forests(h: usize, budget: usize) -> Vec<(Vec<Tree>, usize)> {
            let mut out = vec![(Vec::new(), 0)];
            if h == 0 {
                return out;
            }
            let mut i = 0;
            while i < out.len() {
                let (f, used) = out[i].clone();
                for t in Tree::all_up_to(h - 1, budget - used) {
                    let n = t.node_count();
                    if used + n <= budget {
                        let mut g = f.clone();
                        g.push(t);
                        out.push((g, used + n));
                    }
                }
                i += 1;
            }
            out
        }
        if nodes == 0 {
            return Vec::new();
        }
        let mut out: Vec<Tree> = forests(h, nodes - 1).into_iter().map(|(f, _)| Tree(f)).collect();
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for Tree {
    type Err = PastingError;
    fn from_str(s: &str) -> Result<Tree, PastingError> {
        let mut cur = Cursor::new(s);
        let t = cur.tree()?;
        cur.end()?;
        Ok(t)
    }
}

/// Position of a scheme cell: child indices from the root, then the gap index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Address {
    pub path: Vec<usize>,
    pub gap: usize,
}

impl Address {
    pub fn dim(&self) -> usize {
        self.path.len()
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.path.iter().map(|i| i.to_string()).collect();
        write!(f, "{}#{}", p.join("."), self.gap)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Node<L> {
    pub gaps: Vec<L>,
    pub children: Vec<Node<L>>,
}

impl<L> Node<L> {
    pub fn point(l: L) -> Self {
        Node { gaps: vec![l], children: Vec::new() }
    }

    pub fn shape(&self) -> Tree {
        Tree(self.children.iter().map(Node::shape).collect())
    }

    pub fn height(&self) -> usize {
        self.children.iter().map(|c| 1 + c.height()).max().unwrap_or(0)
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn map<M>(&self, f: &mut impl FnMut(&L) -> M) -> Node<M> {
        Node {
            gaps: self.gaps.iter().map(&mut *f).collect(),
            children: self.children.iter().map(|c| c.map(f)).collect(),
        }
    }

    pub fn try_map<M, E>(&self, f: &mut impl FnMut(&L) -> Result<M, E>) -> Result<Node<M>, E> {
        Ok(Node {
            gaps: self.gaps.iter().map(&mut *f).collect::<Result<_, _>>()?,
            children: self.children.iter().map(|c| c.try_map(f)).collect::<Result<_, _>>()?,
        })
    }

    /// Maps with the depth of each label.
    pub fn map_depth<M>(&self, f: &mut impl FnMut(usize, &L) -> M) -> Node<M> {
        self.map_depth_from(0, f)
    }

    fn map_depth_from<M>(&self, d: usize, f: &mut impl FnMut(usize, &L) -> M) -> Node<M> {
        Node {
            gaps: self.gaps.iter().map(|g| f(d, g)).collect(),
            children: self.children.iter().map(|c| c.map_depth_from(d + 1, f)).collect(),
        }
    }

    pub fn try_map_depth<M, E>(&self, f: &mut impl FnMut(usize, &L) -> Result<M, E>) -> Result<Node<M>, E> {
        self.try_map_depth_from(0, f)
    }

    fn try_map_depth_from<M, E>(&self, d: usize, f: &mut impl FnMut(usize, &L) -> Result<M, E>) -> Result<Node<M>, E> {
        Ok(Node {
            gaps: self.gaps.iter().map(|g| f(d, g)).collect::<Result<_, _>>()?,
            children: self.children.iter().map(|c| c.try_map_depth_from(d + 1, f)).collect::<Result<_, _>>()?,
        })
    }

    /// Every label in depth-first order with its depth.
    pub fn labels(&self) -> Vec<(usize, &L)> {
        let mut out = Vec::new();
        self.collect_labels(0, &mut out);
        out
    }

    fn collect_labels<'a>(&'a self, d: usize, out: &mut Vec<(usize, &'a L)>) {
        out.extend(self.gaps.iter().map(|g| (d, g)));
        for c in &self.children {
            c.collect_labels(d + 1, out);
        }
    }

    /// Labels of leaves (the maximal cells), left to right, with their depth.
    pub fn leaf_labels(&self) -> Vec<(usize, &L)> {
        let mut out = Vec::new();
        self.collect_leaves(0, &mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, d: usize, out: &mut Vec<(usize, &'a L)>) {
        if self.children.is_empty() {
            out.push((d, &self.gaps[0]));
        }
        for c in &self.children {
            c.collect_leaves(d + 1, out);
        }
    }

    /// Cells of dimension `k` in canonical order.
    pub fn cells_at(&self, k: usize) -> Vec<(Address, &L)> {
        let mut out = Vec::new();
        self.collect_at(k, &mut Vec::new(), &mut out);
        out
    }

    fn collect_at<'a>(&'a self, k: usize, path: &mut Vec<usize>, out: &mut Vec<(Address, &'a L)>) {
        if path.len() == k {
            for (j, g) in self.gaps.iter().enumerate() {
                out.push((Address { path: path.clone(), gap: j }, g));
            }
            return;
        }
        for (i, c) in self.children.iter().enumerate() {
            path.push(i);
            c.collect_at(k, path, out);
            path.pop();
        }
    }

    /// All cells, dimension-major, each dimension in canonical order.
    pub fn cells(&self) -> Vec<(Address, &L)> {
        (0..=self.height()).flat_map(|k| self.cells_at(k)).collect()
    }
}

impl<L: Clone> Node<L> {
    pub fn boundary(&self, side: Side, k: usize) -> Node<L> {
        if k == 0 {
            let g = match side {
                Side::Source => self.gaps.first(),
                Side::Target => self.gaps.last(),
            };
            return Node::point(g.expect("nodes have a gap").clone());
        }
        Node { gaps: self.gaps.clone(), children: self.children.iter().map(|c| c.boundary(side, k - 1)).collect() }
    }

    /// Rebuilds the labels from a canonical-order list of a given shape.
    pub fn from_shape(shape: &Tree, labels: &[L]) -> Option<Node<L>> {
        let mut skeleton = shape.labelled(&0usize);
        let cells: Vec<Address> = skeleton.cells().into_iter().map(|(a, _)| a).collect();
        if cells.len() != labels.len() {
            return None;
        }
        for (i, a) in cells.iter().enumerate() {
            *skeleton.at_mut(a) = i;
        }
        Some(skeleton.map(&mut |i| labels[*i].clone()))
    }
}

impl<L> Node<L> {
    pub fn at(&self, a: &Address) -> &L {
        let mut n = self;
        for &i in &a.path {
            n = &n.children[i];
        }
        &n.gaps[a.gap]
    }

    fn at_mut(&mut self, a: &Address) -> &mut L {
        let mut n = self;
        for &i in &a.path {
            n = &mut n.children[i];
        }
        &mut n.gaps[a.gap]
    }
}

impl<L: Clone + PartialEq + fmt::Debug> Node<L> {
    fn glue(&self, other: &Node<L>, p: usize) -> Node<L> {
        if p == 0 {
            let mut gaps = self.gaps.clone();
            gaps.extend(other.gaps[1..].iter().cloned());
            let mut children = self.children.clone();
            children.extend(other.children.iter().cloned());
            return Node { gaps, children };
        }
        Node {
            gaps: self.gaps.clone(),
            children: self.children.iter().zip(&other.children).map(|(a, b)| a.glue(b, p - 1)).collect(),
        }
    }

    /// Checks that every cell inside child `i` runs from gap `i` to gap `i + 1`,
    /// given the boundary of each label.
    pub fn check_incidence(&self, bounds: &mut impl FnMut(&L) -> Option<(L, L)>) -> Result<(), String> {
        for (i, c) in self.children.iter().enumerate() {
            for g in &c.gaps {
                let Some((s, t)) = bounds(g) else {
                    return Err(format!("label {g:?} has no boundary"));
                };
                if s != self.gaps[i] {
                    return Err(format!("source of {g:?} is {s:?}, expected {:?}", self.gaps[i]));
                }
                if t != self.gaps[i + 1] {
                    return Err(format!("target of {g:?} is {t:?}, expected {:?}", self.gaps[i + 1]));
                }
            }
            c.check_incidence(bounds)?;
        }
        Ok(())
    }
}

/// A labelled pasting diagram of a given dimension; the tree height may be lower (degenerate cell).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PastingDiagram<L> {
    dim: usize,
    root: Node<L>,
}

impl<L> PastingDiagram<L> {
    pub fn new(dim: usize, root: Node<L>) -> Result<Self, PastingError> {
        let height = root.height();
        if height > dim {
            return Err(PastingError::HeightExceedsDim { height, dim });
        }
        Ok(PastingDiagram { dim, root })
    }

    pub fn point(l: L) -> Self {
        PastingDiagram { dim: 0, root: Node::point(l) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn root(&self) -> &Node<L> {
        &self.root
    }

    pub fn into_root(self) -> Node<L> {
        self.root
    }

    pub fn tree(&self) -> Tree {
        self.root.shape()
    }

    pub fn map<M>(&self, mut f: impl FnMut(&L) -> M) -> PastingDiagram<M> {
        PastingDiagram { dim: self.dim, root: self.root.map(&mut f) }
    }

    pub fn try_map<M, E>(&self, mut f: impl FnMut(&L) -> Result<M, E>) -> Result<PastingDiagram<M>, E> {
        Ok(PastingDiagram { dim: self.dim, root: self.root.try_map(&mut f)? })
    }

    /// The label of a globe's top cell (the single leaf), if the diagram is a globe.
    pub fn globe_top(&self) -> Option<&L> {
        let leaves = self.root.leaf_labels();
        (leaves.len() == 1 && self.root.height() == self.dim).then(|| leaves[0].1)
    }

    pub fn labels(&self) -> impl Iterator<Item = &L> {
        self.root.labels().into_iter().map(|(_, l)| l)
    }
}

impl<L: Clone> PastingDiagram<L> {
    /// The globe on `x`, given the source and target at each level below `m`
    /// (index `k` holds the `k`-dimensional pair).
    pub fn globe(x: L, tower: Vec<(L, L)>) -> Self {
        let dim = tower.len();
        let mut node = Node::point(x);
        for (s, t) in tower.into_iter().rev() {
            node = Node { gaps: vec![s, t], children: vec![node] };
        }
        PastingDiagram { dim, root: node }
    }

    /// The globe on an `m`-cell using a boundary function.
    pub fn globe_by(x: L, m: usize, mut bounds: impl FnMut(&L) -> (L, L)) -> Self {
        let mut tower = Vec::with_capacity(m);
        if m > 0 {
            tower.push(bounds(&x));
            for _ in 1..m {
                let (s, t) = tower.last().expect("non-empty");
                let next = (bounds(s).0, bounds(t).1);
                tower.push(next);
            }
        }
        tower.reverse();
        PastingDiagram::globe(x, tower)
    }

    /// Same tree and labels, dimension raised.
    pub fn degenerate(&self, to_dim: usize) -> Result<Self, PastingError> {
        if to_dim < self.dim {
            return Err(PastingError::Degenerate { from: self.dim, to: to_dim });
        }
        Ok(PastingDiagram { dim: to_dim, root: self.root.clone() })
    }

    pub fn boundary(&self, side: Side, k: usize) -> Result<Self, PastingError> {
        if k >= self.dim {
            return Err(PastingError::BoundaryLevel { k, dim: self.dim });
        }
        Ok(PastingDiagram { dim: k, root: self.root.boundary(side, k) })
    }

    /// Every cell of `tree` labelled `l`, at dimension `dim`.
    pub fn uniform(tree: &Tree, dim: usize, l: &L) -> Result<Self, PastingError> {
        PastingDiagram::new(dim, tree.labelled(l))
    }
}

impl<L: Clone + PartialEq + fmt::Debug> PastingDiagram<L> {
    /// Geometric gluing: the target `p`-boundary of `self` meets the source `p`-boundary of `other`.
    pub fn glue(&self, other: &Self, p: usize) -> Result<Self, PastingError> {
        if self.dim != other.dim {
            return Err(PastingError::DimMismatch(self.dim, other.dim));
        }
        if p >= self.dim {
            return Err(PastingError::GlueLevel { p, dim: self.dim });
        }
        let left = self.root.boundary(Side::Target, p);
        let right = other.root.boundary(Side::Source, p);
        if left != right {
            return Err(PastingError::GlueMismatch { p, left: format!("{left:?}"), right: format!("{right:?}") });
        }
        Ok(PastingDiagram { dim: self.dim, root: self.root.glue(&other.root, p) })
    }

    /// `a ⋆_p b` as written, placed according to `order`.
    pub fn star(a: &Self, b: &Self, p: usize, order: StarOrder) -> Result<Self, PastingError> {
        match order {
            StarOrder::Diagrammatic => a.glue(b, p),
            StarOrder::Applicative => b.glue(a, p),
        }
    }

    /// Left-nested `x1 ⋆_p x2 ⋆_p … ⋆_p xn` as written.
    pub fn star_all(items: &[Self], p: usize, order: StarOrder) -> Result<Self, PastingError> {
        let mut it = items.iter();
        let first = it.next().ok_or_else(|| PastingError::Incompatible("empty composite".into()))?;
        it.try_fold(first.clone(), |acc, x| PastingDiagram::star(&acc, x, p, order))
    }
}

impl<L: Clone + PartialEq + fmt::Debug> PastingDiagram<PastingDiagram<L>> {
    /// Flattens a diagram of diagrams (the multiplication of the monad).
    pub fn substitute(&self) -> Result<PastingDiagram<L>, PastingError> {
        for (d, lab) in self.root.labels() {
            if lab.dim != d {
                return Err(PastingError::Incompatible(format!(
                    "a {d}-cell is labelled by a diagram of dimension {}",
                    lab.dim
                )));
            }
        }
        let inner = self.root.map(&mut |p| p.root.clone());
        Ok(PastingDiagram { dim: self.dim, root: substitute_nodes(&inner)? })
    }
}

/// Grafting on bare nodes: each label is the root node of an inner diagram.
pub fn substitute_nodes<L: Clone + PartialEq + fmt::Debug>(outer: &Node<Node<L>>) -> Result<Node<L>, PastingError> {
    let pts = outer
        .gaps
        .iter()
        .map(|g| {
            if g.children.is_empty() && g.gaps.len() == 1 {
                Ok(g.gaps[0].clone())
            } else {
                Err(PastingError::Incompatible(format!("{g:?} is not a point")))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut gaps = vec![pts[0].clone()];
    let mut children = Vec::new();
    for (i, child) in outer.children.iter().enumerate() {
        let ys = child.gaps[0].gaps.clone();
        for (_, lab) in child.labels() {
            if lab.gaps != ys {
                return Err(PastingError::Incompatible(format!(
                    "0-cells {:?} and {:?} of neighbouring labels differ",
                    lab.gaps, ys
                )));
            }
        }
        if ys.first() != Some(&pts[i]) || ys.last() != Some(&pts[i + 1]) {
            return Err(PastingError::Incompatible(format!(
                "labels run from {:?} to {:?} but sit between {:?} and {:?}",
                ys.first(),
                ys.last(),
                pts[i],
                pts[i + 1]
            )));
        }
        gaps.extend(ys[1..].iter().cloned());
        for j in 0..ys.len() - 1 {
            let comp = child.map(&mut |lab| lab.children[j].clone());
            children.push(substitute_nodes(&comp)?);
        }
    }
    Ok(Node { gaps, children })
}

/// Inverse of grafting: cuts `flat` into the pieces that the labels of an
/// outer diagram occupy, given the shape of each outer label.
pub fn unflatten<L: Clone>(shapes: &Node<Tree>, flat: &Node<L>) -> Result<Node<Node<L>>, PastingError> {
    let mut off = 0;
    let mut gaps = vec![Node::point(flat.gaps[0].clone())];
    let mut children = Vec::new();
    for child in &shapes.children {
        let r = child.gaps[0].0.len();
        if off + r >= flat.gaps.len() {
            return Err(PastingError::Incompatible("flat diagram too small for the outer shape".into()));
        }
        let ys = &flat.gaps[off..=off + r];
        let parts = (0..r)
            .map(|j| unflatten(&child.map(&mut |t| t.0.get(j).cloned().unwrap_or_default()), &flat.children[off + j]))
            .collect::<Result<Vec<_>, _>>()?;
        let refs: Vec<&Node<Node<L>>> = parts.iter().collect();
        children.push(assemble(child, ys, &refs));
        off += r;
        gaps.push(Node::point(flat.gaps[off].clone()));
    }
    if off != flat.children.len() {
        return Err(PastingError::Incompatible("flat diagram larger than the outer shape".into()));
    }
    Ok(Node { gaps, children })
}

fn assemble<L: Clone>(template: &Node<Tree>, ys: &[L], parts: &[&Node<Node<L>>]) -> Node<Node<L>> {
    Node {
        gaps: (0..template.gaps.len())
            .map(|g| Node { gaps: ys.to_vec(), children: parts.iter().map(|p| p.gaps[g].clone()).collect() })
            .collect(),
        children: template
            .children
            .iter()
            .enumerate()
            .map(|(c, t)| {
                let sub: Vec<&Node<Node<L>>> = parts.iter().map(|p| &p.children[c]).collect();
                assemble(t, ys, &sub)
            })
            .collect(),
    }
}

/// The pasting scheme of a tree as a globular set; cells are named by address.
pub fn realize(tree: &Tree, dim: usize) -> Result<GlobularSet, PastingError> {
    let height = tree.height();
    if height > dim {
        return Err(PastingError::HeightExceedsDim { height, dim });
    }
    let node = tree.labelled(&());
    let mut g = GlobularSet::new(dim);
    for k in 0..=height {
        for (a, _) in node.cells_at(k) {
            let id = cell(&a.to_string());
            let bounds = a.path.split_last().map(|(&i, parent)| {
                let s = Address { path: parent.to_vec(), gap: i };
                let t = Address { path: parent.to_vec(), gap: i + 1 };
                (cell(&s.to_string()), cell(&t.to_string()))
            });
            g.insert(k, id, bounds).expect("fresh address");
        }
    }
    Ok(g)
}

impl<L: fmt::Display> fmt::Display for Node<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.gaps[0])?;
        for (c, g) in self.children.iter().zip(&self.gaps[1..]) {
            write!(f, ",{c},{g}")?;
        }
        f.write_str(")")
    }
}

impl<L: fmt::Display> fmt::Display for PastingDiagram<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.dim, self.root)
    }
}

/// A byte cursor shared by the text parsers.
pub struct Cursor<'a> {
    pub src: &'a str,
    pub pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub fn err<T>(&self, msg: impl Into<String>) -> Result<T, PastingError> {
        Err(PastingError::Parse { pos: self.pos, msg: msg.into() })
    }

    pub fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    pub fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b == b' ') {
            self.pos += 1;
        }
    }

    pub fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, b: u8) -> Result<(), PastingError> {
        if self.eat(b) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", b as char))
        }
    }

    pub fn eat_str(&mut self, s: &str) -> bool {
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    pub fn end(&self) -> Result<(), PastingError> {
        if self.pos == self.src.len() {
            Ok(())
        } else {
            self.err("trailing input")
        }
    }

    pub fn number(&mut self) -> Result<usize, PastingError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos].parse().or_else(|_| self.err("expected a number"))
    }

    /// Letters, digits, `_`, `^` and `'`.
    pub fn ident(&mut self) -> Result<&'a str, PastingError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'^' || b == b'\'') {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a name");
        }
        Ok(&self.src[start..self.pos])
    }

    pub fn tree(&mut self) -> Result<Tree, PastingError> {
        self.expect(b'(')?;
        let mut children = Vec::new();
        while self.peek() == Some(b'(') {
            children.push(self.tree()?);
        }
        self.expect(b')')?;
        Ok(Tree(children))
    }

    /// A labelled node `(g0,child,g1,…)` with labels read by `label`.
    pub fn node<L>(
        &mut self,
        label: &mut impl FnMut(&mut Cursor<'a>) -> Result<L, PastingError>,
    ) -> Result<Node<L>, PastingError> {
        self.expect(b'(')?;
        self.skip_ws();
        let mut gaps = vec![label(self)?];
        let mut children = Vec::new();
        self.skip_ws();
        while self.eat(b',') {
            self.skip_ws();
            children.push(self.node(label)?);
            self.skip_ws();
            self.expect(b',')?;
            self.skip_ws();
            gaps.push(label(self)?);
            self.skip_ws();
        }
        self.expect(b')')?;
        Ok(Node { gaps, children })
    }

    /// `DIM:node`.
    pub fn pasting<L>(
        &mut self,
        label: &mut impl FnMut(&mut Cursor<'a>) -> Result<L, PastingError>,
    ) -> Result<PastingDiagram<L>, PastingError> {
        let dim = self.number()?;
        self.expect(b':')?;
        let root = self.node(label)?;
        PastingDiagram::new(dim, root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    fn chain(labels: &[&str], objs: &[&str]) -> PastingDiagram<String> {
        let gaps = objs.iter().map(|s| s.to_string()).collect();
        let children = labels.iter().map(|l| Node::point(l.to_string())).collect();
        PastingDiagram::new(1, Node { gaps, children }).unwrap()
    }

    #[test]
    fn tree_text_round_trip() {
        for s in ["()", "(())", "(()())", "((()()))", "((())())"] {
            assert_eq!(t(s).to_string(), s);
        }
        assert_eq!(Tree::linear(2).to_string(), "((()))");
        assert!("(()".parse::<Tree>().is_err());
        assert_eq!(t("((()()))").height(), 2);
    }

    #[test]
    fn realize_counts() {
        let g = realize(&t("(())"), 1).unwrap();
        assert_eq!((g.count(0), g.count(1)), (2, 1));
        let g = realize(&t("(()())"), 1).unwrap();
        assert_eq!((g.count(0), g.count(1)), (3, 2));
        assert_eq!(g.boundary(1, "0#0").map(|(s, t)| (s.to_string(), t.to_string())), Some(("#0".into(), "#1".into())));
        assert_eq!(g.boundary(1, "1#0").map(|(s, t)| (s.to_string(), t.to_string())), Some(("#1".into(), "#2".into())));
        let g = realize(&t("((()()))"), 2).unwrap();
        assert_eq!((g.count(0), g.count(1), g.count(2)), (2, 3, 2));
        assert_eq!(g.tgt(2, "0.0#0").unwrap().as_ref(), "0#1");
        assert_eq!(g.src(2, "0.1#0").unwrap().as_ref(), "0#1");
        assert!(g.is_valid());
        assert!(realize(&t("((()))"), 1).is_err());
    }

    #[test]
    fn globe_and_boundary() {
        let g = PastingDiagram::globe("a".to_string(), vec![("x".into(), "y".into()), ("f".into(), "g".into())]);
        assert_eq!(g.tree(), t("((()))"));
        assert_eq!(g.globe_top().unwrap(), "a");
        let s = g.boundary(Side::Source, 1).unwrap();
        assert_eq!(s.globe_top().unwrap(), "f");
        assert_eq!(g.boundary(Side::Target, 0).unwrap(), PastingDiagram::point("y".to_string()));
        let c = chain(&["f", "g"], &["x", "y", "z"]);
        assert_eq!(c.boundary(Side::Source, 0).unwrap(), PastingDiagram::point("x".to_string()));
        assert_eq!(c.boundary(Side::Target, 0).unwrap(), PastingDiagram::point("z".to_string()));
        let d = c.degenerate(2).unwrap();
        assert_eq!(d.boundary(Side::Source, 1).unwrap(), c);
        assert_eq!(c.degenerate(1).unwrap(), c);
        assert!(d.degenerate(1).is_err());
    }

    #[test]
    fn glue_grafts_trees() {
        let one = |c: u8| PastingDiagram::uniform(&Tree::linear(1), 1, &c).unwrap();
        assert_eq!(one(1).glue(&one(1), 0).unwrap().tree(), t("(()())"));
        let two = PastingDiagram::uniform(&Tree::linear(2), 2, &1u8).unwrap();
        assert_eq!(two.glue(&two, 1).unwrap().tree(), t("((()()))"));
        assert!(matches!(one(1).glue(&one(2), 0), Err(PastingError::GlueMismatch { .. })));
        assert!(one(1).glue(&one(1), 1).is_err());
    }

    #[test]
    fn star_orientation() {
        let f = chain(&["f"], &["x", "y"]);
        let g = chain(&["g"], &["y", "z"]);
        let d = PastingDiagram::star(&f, &g, 0, StarOrder::Diagrammatic).unwrap();
        let a = PastingDiagram::star(&g, &f, 0, StarOrder::Applicative).unwrap();
        assert_eq!(d, a);
        assert!(PastingDiagram::star(&f, &g, 0, StarOrder::Applicative).is_err());
    }

    #[test]
    fn substitution_examples() {
        let one = PastingDiagram::uniform(&Tree::linear(1), 1, &1u8).unwrap();
        let pt = PastingDiagram::point(1u8);
        let two = one.glue(&one, 0).unwrap();
        // outer (()()) labelled by two 1-globes
        let outer = PastingDiagram::new(
            1,
            Node { gaps: vec![pt.clone(); 3], children: vec![Node::point(one.clone()), Node::point(one.clone())] },
        )
        .unwrap();
        assert_eq!(outer.substitute().unwrap().tree(), t("(()())"));
        let outer = PastingDiagram::new(
            1,
            Node { gaps: vec![pt.clone(); 3], children: vec![Node::point(two), Node::point(one.clone())] },
        )
        .unwrap();
        assert_eq!(outer.substitute().unwrap().tree(), t("(()()())"));
        let g = PastingDiagram::globe(one.clone(), vec![(pt.clone(), pt)]);
        assert_eq!(g.substitute().unwrap(), one);
    }

    #[test]
    fn substitution_of_degenerate_labels_collapses() {
        let ab = chain(&["f", "g"], &["x", "y", "z"]);
        let pt = |s: &str| PastingDiagram::point(s.to_string());
        // 1-globe whose 1-cell is labelled by the identity on x
        let idx = pt("x").degenerate(1).unwrap();
        let outer = PastingDiagram::new(
            1,
            Node { gaps: vec![pt("x"), pt("x"), pt("z")], children: vec![Node::point(idx), Node::point(ab.clone())] },
        )
        .unwrap();
        assert_eq!(outer.substitute().unwrap(), ab);
    }

    #[test]
    fn unflatten_inverts_substitute() {
        let pt = |s: &str| PastingDiagram::point(s.to_string());
        let ab = chain(&["f", "g"], &["x", "y", "z"]);
        let c = chain(&["h"], &["z", "w"]);
        let outer = PastingDiagram::new(
            1,
            Node { gaps: vec![pt("x"), pt("z"), pt("w")], children: vec![Node::point(ab), Node::point(c)] },
        )
        .unwrap();
        let flat = outer.substitute().unwrap();
        let shapes = outer.root().map(&mut |p| p.tree());
        let back = unflatten(&shapes, flat.root()).unwrap();
        assert_eq!(back, outer.root().map(&mut |p| p.root().clone()));
    }

    #[test]
    fn labelled_text_round_trip() {
        let c = chain(&["f", "g"], &["x", "y", "z"]);
        assert_eq!(c.to_string(), "1:(x,(f),y,(g),z)");
        let mut cur = Cursor::new("1:(x,(f),y,(g),z)");
        let back = cur.pasting(&mut |c: &mut Cursor| Ok(c.ident()?.to_string())).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn from_shape_uses_canonical_order() {
        let shape = t("(()())");
        let n = Node::from_shape(&shape, &["a", "b", "c", "f", "g"]).unwrap();
        assert_eq!(n.gaps, ["a", "b", "c"]);
        assert_eq!(n.children[1].gaps, ["g"]);
        assert_eq!(Tree::all_up_to(1, 3).len(), 3);
    }
}
