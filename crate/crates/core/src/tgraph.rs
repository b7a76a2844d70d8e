//! T-graphs `T(G) ← C → G`, pointings, the tensor product over a fixed
//! arity graph, parallel pairs and contractions.

use std::collections::{BTreeMap, HashMap};

use indexmap::IndexMap;
use thiserror::Error;

use crate::collections::CollectionSpec;
use crate::glob::{cell, CellId, GlobularSet};
use crate::pasting::{Node, PastingDiagram, Side};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TGraphError {
    #[error("arity graphs differ")]
    ArityGraphMismatch,
    #[error("cell {id} has dimension {dim} above truncation {max_dim}")]
    DimOutOfRange { dim: usize, id: CellId, max_dim: usize },
    #[error("duplicate {dim}-cell {id}")]
    Duplicate { dim: usize, id: CellId },
    #[error("arity of {id} has dimension {got}, expected {dim}")]
    ArityDim { dim: usize, id: CellId, got: usize },
    #[error("parallel {k}-cells {a} and {b} have different coarities")]
    Coarity { k: usize, a: CellId, b: CellId },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TCell {
    pub bounds: Option<(CellId, CellId)>,
    pub d: PastingDiagram<CellId>,
    pub c: CellId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TGraph {
    pub arity_graph: GlobularSet,
    cells: Vec<IndexMap<CellId, TCell>>,
}

/// The globe on the `k`-cell `x` of `g`.
pub fn globe_in(g: &GlobularSet, k: usize, x: &CellId) -> PastingDiagram<CellId> {
    let mut tower = Vec::with_capacity(k);
    let (mut s, mut t) = (x.clone(), x.clone());
    for j in (1..=k).rev() {
        let ns = g.src(j, &s).cloned().unwrap_or_else(|| s.clone());
        let nt = g.tgt(j, &t).cloned().unwrap_or_else(|| t.clone());
        tower.push((ns.clone(), nt.clone()));
        (s, t) = (ns, nt);
    }
    tower.reverse();
    PastingDiagram::globe(x.clone(), tower)
}

impl TGraph {
    pub fn new(arity_graph: GlobularSet) -> Self {
        let n = arity_graph.max_dim() + 1;
        TGraph { arity_graph, cells: vec![IndexMap::new(); n] }
    }

    pub fn max_dim(&self) -> usize {
        self.arity_graph.max_dim()
    }

    pub fn add(
        &mut self,
        dim: usize,
        id: &str,
        bounds: Option<(&str, &str)>,
        d: PastingDiagram<CellId>,
        c: &str,
    ) -> Result<(), TGraphError> {
        let id = cell(id);
        if dim > self.max_dim() {
            return Err(TGraphError::DimOutOfRange { dim, id, max_dim: self.max_dim() });
        }
        if d.dim() != dim {
            return Err(TGraphError::ArityDim { dim, id, got: d.dim() });
        }
        if self.cells[dim].contains_key(&id) {
            return Err(TGraphError::Duplicate { dim, id });
        }
        let bounds = bounds.map(|(s, t)| (cell(s), cell(t)));
        self.cells[dim].insert(id, TCell { bounds, d, c: cell(c) });
        Ok(())
    }

    pub fn get(&self, dim: usize, id: &str) -> Option<&TCell> {
        self.cells.get(dim)?.get(id)
    }

    pub fn cells(&self, dim: usize) -> impl Iterator<Item = (&CellId, &TCell)> {
        self.cells.get(dim).into_iter().flatten()
    }

    pub fn count(&self, dim: usize) -> usize {
        self.cells.get(dim).map_or(0, IndexMap::len)
    }

    pub fn carrier(&self) -> GlobularSet {
        let mut g = GlobularSet::new(self.max_dim());
        for (k, level) in self.cells.iter().enumerate() {
            for (id, c) in level {
                g.insert(k, id.clone(), c.bounds.clone()).expect("cells are distinct per level");
            }
        }
        g
    }

    /// Globularity of the carrier, plus `d` and `c` commuting with source and target.
    pub fn validate(&self) -> Vec<String> {
        let mut out: Vec<String> = self.carrier().validate().iter().map(|v| v.to_string()).collect();
        let g = &self.arity_graph;
        for (k, level) in self.cells.iter().enumerate() {
            for (id, x) in level {
                if !g.contains(k, &x.c) {
                    out.push(format!("{id}: coarity {} is not a {k}-cell of the arity graph", x.c));
                }
                for (j, lab) in x.d.root().labels() {
                    if !g.contains(j, lab) {
                        out.push(format!("{id}: arity label {lab} is not a {j}-cell of the arity graph"));
                    }
                }
                if !incident(g, x.d.root(), 0) {
                    out.push(format!("{id}: arity is not a pasting in the arity graph"));
                }
                let (Some((s, t)), true) = (&x.bounds, k > 0) else { continue };
                for (side, b) in [(Side::Source, s), (Side::Target, t)] {
                    let Some(bx) = self.get(k - 1, b) else { continue };
                    if x.d.boundary(side, k - 1).ok().as_ref() != Some(&bx.d) {
                        out.push(format!("{id}: d does not commute with the {side:?} of {b}"));
                    }
                    let gb = match side {
                        Side::Source => g.src(k, &x.c),
                        Side::Target => g.tgt(k, &x.c),
                    };
                    if gb != Some(&bx.c) {
                        out.push(format!("{id}: c does not commute with the {side:?} of {b}"));
                    }
                }
            }
        }
        out
    }

    /// `D_k`: pairs with equal source, target and arity. Coarities must agree too;
    /// above level 0 a disagreement is an error, at level 0 such pairs are skipped.
    pub fn parallel_pairs(&self, k: usize) -> Result<Vec<(CellId, CellId)>, TGraphError> {
        let mut out = Vec::new();
        for (a, x) in self.cells(k) {
            for (b, y) in self.cells(k) {
                if x.bounds != y.bounds || x.d != y.d {
                    continue;
                }
                if x.c != y.c {
                    if k == 0 {
                        continue;
                    }
                    return Err(TGraphError::Coarity { k, a: a.clone(), b: b.clone() });
                }
                out.push((a.clone(), b.clone()));
            }
        }
        Ok(out)
    }
}

/// Every cell inside child `i` of a depth-`depth` node runs from gap `i` to gap `i + 1` in `g`.
pub fn incident(g: &GlobularSet, node: &Node<CellId>, depth: usize) -> bool {
    node.children.iter().enumerate().all(|(i, ch)| {
        ch.gaps
            .iter()
            .all(|l| g.boundary(depth + 1, l).is_some_and(|(s, t)| *s == node.gaps[i] && *t == node.gaps[i + 1]))
            && incident(g, ch, depth + 1)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedTGraph {
    pub base: TGraph,
    pub p: HashMap<(usize, CellId), CellId>,
}

impl PointedTGraph {
    pub fn point(&self, k: usize, g: &str) -> Option<&CellId> {
        self.p.get(&(k, cell(g)))
    }

    /// Base laws plus `dp = η`, `cp = 1` and `p` commuting with boundaries.
    pub fn validate(&self) -> Vec<String> {
        let mut out = self.base.validate();
        let g = &self.base.arity_graph;
        for k in 0..=g.max_dim() {
            for x in g.cells(k) {
                let Some(px) = self.p.get(&(k, x.clone())) else {
                    out.push(format!("no pointing for {k}-cell {x}"));
                    continue;
                };
                let Some(c) = self.base.get(k, px) else {
                    out.push(format!("pointing of {x} names unknown {px}"));
                    continue;
                };
                if c.d != globe_in(g, k, x) {
                    out.push(format!("dp ≠ η at {x}"));
                }
                if &c.c != x {
                    out.push(format!("cp ≠ 1 at {x}"));
                }
                if k > 0 {
                    let (gs, gt) = g.boundary(k, x).expect("valid arity graph");
                    let want = (self.p.get(&(k - 1, gs.clone())), self.p.get(&(k - 1, gt.clone())));
                    if c.bounds.as_ref().map(|(s, t)| (Some(s), Some(t))) != Some(want) {
                        out.push(format!("pointing does not commute with boundaries at {x}"));
                    }
                }
            }
        }
        out
    }
}

/// `I(G)`: the arity graph itself, with globes as arities.
pub fn unit_tgraph(g: &GlobularSet) -> PointedTGraph {
    let mut base = TGraph::new(g.clone());
    let mut p = HashMap::new();
    for k in 0..=g.max_dim() {
        for x in g.cells(k) {
            let b = g.boundary(k, x).map(|(s, t)| (s.as_ref(), t.as_ref()));
            base.add(k, x, b, globe_in(g, k, x), x).expect("cells of a globular set are distinct");
            p.insert((k, x.clone()), x.clone());
        }
    }
    PointedTGraph { base, p }
}

/// The constant graph on the colors of a collection.
pub fn color_graph(n_colors: u8, max_dim: usize) -> GlobularSet {
    let names: Vec<String> = (1..=n_colors).map(|c| c.to_string()).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    GlobularSet::constant(&refs, max_dim)
}

/// A collection as a pointed T-graph over its constant color graph.
pub fn from_collection(spec: &CollectionSpec) -> PointedTGraph {
    let g = color_graph(spec.n_colors, spec.max_dim);
    let mut base = TGraph::new(g);
    for gen in spec.generators() {
        let d = gen.arity.map(|c| cell(&c.to_string()));
        let b = gen.bounds.as_ref().map(|(s, t)| (s.as_ref(), t.as_ref()));
        base.add(gen.dim, &gen.name, b, d, &gen.coarity.to_string()).expect("collection names are distinct");
    }
    let p = spec.pointing().iter().map(|((c, m), n)| ((*m, cell(&c.to_string())), cell(n))).collect();
    PointedTGraph { base, p }
}

fn product<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for opts in choices {
        out = out.iter().flat_map(|pre| opts.iter().map(move |o| [pre.clone(), vec![o.clone()]].concat())).collect();
    }
    out
}

/// All labellings of `target`'s shape by cells of `a` whose coarities are `target`'s labels.
fn lifts(a: &TGraph, target: &Node<CellId>, depth: usize, bounds: Option<(&CellId, &CellId)>) -> Vec<Node<CellId>> {
    let gap_choices: Vec<Vec<CellId>> = target
        .gaps
        .iter()
        .map(|col| {
            a.cells(depth)
                .filter(|(_, x)| &x.c == col)
                .filter(|(_, x)| match (bounds, &x.bounds) {
                    (None, _) => true,
                    (Some((s, t)), Some((xs, xt))) => s == xs && t == xt,
                    (Some(_), None) => false,
                })
                .map(|(id, _)| id.clone())
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for gaps in product(&gap_choices) {
        let child_choices: Vec<Vec<Node<CellId>>> = target
            .children
            .iter()
            .enumerate()
            .map(|(i, ch)| lifts(a, ch, depth + 1, Some((&gaps[i], &gaps[i + 1]))))
            .collect();
        for children in product(&child_choices) {
            out.push(Node { gaps: gaps.clone(), children });
        }
    }
    out
}

pub fn pair_name(pi: &PastingDiagram<CellId>, y: &str) -> String {
    format!("{pi}|{y}")
}

/// A cell of `A ⊗ B`: a pasting of `A`-cells over the arity of `y ∈ B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorPair {
    pub dim: usize,
    pub pi: PastingDiagram<CellId>,
    pub y: CellId,
}

impl TensorPair {
    pub fn name(&self) -> String {
        pair_name(&self.pi, &self.y)
    }
}

/// The cells of `A ⊗ B` whose arity tree in `B` has at most `leaf_bound` leaves.
pub fn tensor_pairs(a: &TGraph, b: &TGraph, leaf_bound: usize) -> Vec<TensorPair> {
    let mut out = Vec::new();
    for k in 0..=a.max_dim().min(b.max_dim()) {
        for (y, ycell) in b.cells(k) {
            if ycell.d.tree().leaf_count() > leaf_bound {
                continue;
            }
            for root in lifts(a, ycell.d.root(), 0, None) {
                let pi = PastingDiagram::new(k, root).expect("same shape as an arity");
                out.push(TensorPair { dim: k, pi, y: y.clone() });
            }
        }
    }
    out
}

/// `A ⊗ B`, restricted to pairs whose arity tree in `B` has at most `leaf_bound` leaves.
pub fn tensor(a: &TGraph, b: &TGraph, leaf_bound: usize) -> Result<TGraph, TGraphError> {
    if a.arity_graph != b.arity_graph {
        return Err(TGraphError::ArityGraphMismatch);
    }
    let mut out = TGraph::new(a.arity_graph.clone());
    for pair in tensor_pairs(a, b, leaf_bound) {
        let (k, pi) = (pair.dim, &pair.pi);
        let ycell = b.get(k, &pair.y).expect("listed");
        let arity = pi.root().map_depth(&mut |j, l| a.get(j, l).expect("labels come from a").d.clone());
        let arity = PastingDiagram::new(k, arity).expect("same shape").substitute().expect("incident labels graft");
        let bounds = match &ycell.bounds {
            Some((ys, yt)) if k > 0 => {
                let s = pair_name(&pi.boundary(Side::Source, k - 1).expect("k > 0"), ys);
                let t = pair_name(&pi.boundary(Side::Target, k - 1).expect("k > 0"), yt);
                Some((s, t))
            }
            _ => None,
        };
        out.add(k, &pair.name(), bounds.as_ref().map(|(s, t)| (s.as_str(), t.as_str())), arity, &ycell.c)?;
    }
    Ok(out)
}

/// Tensor of pointed T-graphs; `g` is pointed by `(η(p_A g), p_B g)`.
pub fn pointed_tensor(a: &PointedTGraph, b: &PointedTGraph, leaf_bound: usize) -> Result<PointedTGraph, TGraphError> {
    let base = tensor(&a.base, &b.base, leaf_bound)?;
    let mut p = HashMap::new();
    for ((k, g), pb) in &b.p {
        if let Some(pa) = a.p.get(&(*k, g.clone())) {
            let pi = globe_in(&a.base.carrier(), *k, pa);
            p.insert((*k, g.clone()), cell(&pair_name(&pi, pb)));
        }
    }
    Ok(PointedTGraph { base, p })
}

/// Chosen fillers `[α, β]_k`, keyed by level and pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ContractionData {
    pub brackets: BTreeMap<(usize, CellId, CellId), CellId>,
}

impl ContractionData {
    pub fn get(&self, k: usize, a: &str, b: &str) -> Option<&CellId> {
        self.brackets.get(&(k, cell(a), cell(b)))
    }
}

#[derive(Clone, Debug, Default)]
pub struct ContractionReport {
    pub unfilled: Vec<(usize, CellId, CellId)>,
    pub violations: Vec<String>,
}

impl ContractionReport {
    pub fn is_ok(&self) -> bool {
        self.unfilled.is_empty() && self.violations.is_empty()
    }
}

/// Bracket laws on every assigned pair, and totality on `D_k` for `1 ≤ k < D`.
pub fn validate_contraction(c: &TGraph, k_data: &ContractionData) -> ContractionReport {
    let mut rep = ContractionReport::default();
    for ((k, a, b), x) in &k_data.brackets {
        let Some(xc) = c.get(k + 1, x) else {
            rep.violations.push(format!("[{a},{b}]_{k} = {x} is not a {}-cell", k + 1));
            continue;
        };
        let (Some(ac), Some(bc)) = (c.get(*k, a), c.get(*k, b)) else {
            rep.violations.push(format!("[{a},{b}]_{k}: components are not {k}-cells"));
            continue;
        };
        if ac.bounds != bc.bounds || ac.d != bc.d || ac.c != bc.c {
            rep.violations.push(format!("[{a},{b}]_{k}: components are not parallel"));
        }
        if xc.bounds != Some((a.clone(), b.clone())) {
            rep.violations.push(format!("[{a},{b}]_{k} = {x}: wrong source or target"));
        }
        if ac.d.degenerate(k + 1).ok().as_ref() != Some(&xc.d) {
            rep.violations.push(format!("[{a},{b}]_{k} = {x}: arity is not the degenerate arity of {a}"));
        }
        if xc.c != ac.c {
            rep.violations.push(format!("[{a},{b}]_{k} = {x}: wrong coarity"));
        }
    }
    for k in 1..c.max_dim() {
        match c.parallel_pairs(k) {
            Ok(pairs) => {
                for (a, b) in pairs {
                    if !k_data.brackets.contains_key(&(k, a.clone(), b.clone())) {
                        rep.unfilled.push((k, a, b));
                    }
                }
            }
            Err(e) => rep.violations.push(e.to_string()),
        }
    }
    rep
}
