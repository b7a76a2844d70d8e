//! The free monoid on a pointed T-graph as a graded colimit.
//!
//! `X_0 = I`, `X_1 = X`, and `X_{n+2}` is the coequalizer of the two maps
//! `X ⊗ X_n ⇉ X ⊗ X_{n+1}` built from `l_n` and `q_n`. Everything is computed
//! on explicit finite sets, with tensors cut off at a leaf bound.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::enumerate::Enumeration;
use crate::glob::{cell, CellId, CellMap, Color};
use crate::pasting::PastingDiagram;
use crate::term::{Kind, Operad, Term, TermError};
use crate::tgraph::{pair_name, tensor, tensor_pairs, unit_tgraph, PointedTGraph, TGraph, TGraphError, TensorPair};

/// Plain union-find over dense indices.
#[derive(Clone, Debug, Default)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn push(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// True when the two were apart.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

#[derive(Clone, Debug)]
pub struct GradedMonoid {
    /// `X_0, X_1, ...`
    pub layers: Vec<TGraph>,
    /// `l_n : X_n → X_{n+1}`
    pub l: Vec<CellMap>,
    /// `q_n : X ⊗ X_n → X_{n+1}`
    pub q: Vec<CellMap>,
    /// For layers from 2 on: each class name and the tensor pairs it glues.
    pub members: Vec<BTreeMap<(usize, CellId), Vec<TensorPair>>>,
    /// Problems with the quotient: members disagreeing on arity, coarity or bounds.
    pub violations: Vec<String>,
    /// Some relation or structure map fell outside the leaf bound.
    pub exhausted: bool,
}

fn push_point(x: &PointedTGraph, d: &PastingDiagram<CellId>) -> PastingDiagram<CellId> {
    let root = d.root().map_depth(&mut |j, g| x.point(j, g).expect("pointed at every arity cell").clone());
    PastingDiagram::new(d.dim(), root).expect("same shape")
}

fn class_name(members: &[String]) -> String {
    members.iter().min_by(|a, b| (a.len(), a).cmp(&(b.len(), b))).expect("classes are nonempty").clone()
}

/// `X_0 .. X_steps` of the free monoid on `x`.
pub fn free_monoid_layers(x: &PointedTGraph, steps: usize, leaf_bound: usize) -> Result<GradedMonoid, TGraphError> {
    let unit = unit_tgraph(&x.base.arity_graph);
    let mut l0 = CellMap::default();
    for ((k, g), px) in &x.p {
        l0.set(*k, g, px);
    }
    let mut q0 = CellMap::default();
    for pair in tensor_pairs(&x.base, &unit.base, leaf_bound) {
        q0.set(pair.dim, &pair.name(), pair.pi.globe_top().expect("units have globe arities"));
    }
    let mut gm = GradedMonoid {
        layers: vec![unit.base, x.base.clone()],
        l: vec![l0],
        q: vec![q0],
        members: vec![BTreeMap::new(), BTreeMap::new()],
        violations: Vec::new(),
        exhausted: false,
    };
    while gm.layers.len() <= steps {
        step(x, &mut gm, leaf_bound)?;
    }
    Ok(gm)
}

fn step(x: &PointedTGraph, gm: &mut GradedMonoid, leaf_bound: usize) -> Result<(), TGraphError> {
    let n = gm.layers.len() - 2;
    let (xn, xn1) = (&gm.layers[n], &gm.layers[n + 1]);
    let t = tensor(&x.base, xn1, leaf_bound)?;
    let pairs = tensor_pairs(&x.base, xn1, leaf_bound);
    let index: HashMap<(usize, String), usize> =
        pairs.iter().enumerate().map(|(i, p)| ((p.dim, p.name()), i)).collect();
    let mut uf = UnionFind::new(pairs.len());

    for e in tensor_pairs(&x.base, xn, leaf_bound) {
        let k = e.dim;
        let (Some(lz), Some(w)) = (gm.l[n].get(k, &e.y), gm.q[n].get(k, &e.name())) else {
            gm.exhausted = true;
            continue;
        };
        let y0 = pair_name(&e.pi, lz);
        let dw = &xn1.get(k, w).expect("q_n lands in X_{n+1}").d;
        let y1 = pair_name(&push_point(x, dw), w);
        match (index.get(&(k, y0)), index.get(&(k, y1))) {
            (Some(&a), Some(&b)) => {
                uf.union(a, b);
            }
            _ => gm.exhausted = true,
        }
    }

    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..pairs.len() {
        classes.entry(uf.find(i)).or_default().push(i);
    }
    let mut rep_of = vec![String::new(); pairs.len()];
    let mut members = BTreeMap::new();
    for idx in classes.values() {
        let names: Vec<String> = idx.iter().map(|&i| pairs[i].name()).collect();
        let rep = class_name(&names);
        for &i in idx {
            rep_of[i] = rep.clone();
        }
        members.insert((pairs[idx[0]].dim, cell(&rep)), idx.iter().map(|&i| pairs[i].clone()).collect::<Vec<_>>());
    }
    let name_idx = |k: usize, s: &str| index[&(k, s.to_string())];

    let mut next = TGraph::new(x.base.arity_graph.clone());
    let mut q = CellMap::default();
    for ((k, rep), ms) in &members {
        let shape = |p: &TensorPair| {
            let c = t.get(p.dim, &p.name()).expect("listed");
            let b = c
                .bounds
                .as_ref()
                .map(|(s, tt)| (rep_of[name_idx(k - 1, s)].clone(), rep_of[name_idx(k - 1, tt)].clone()));
            (c.d.clone(), c.c.clone(), b)
        };
        let first = shape(&ms[0]);
        for m in &ms[1..] {
            if shape(m) != first {
                gm.violations.push(format!("class {rep} glues cells of different shape: {}", m.name()));
            }
        }
        let (d, c, b) = first;
        next.add(*k, rep, b.as_ref().map(|(s, tt)| (s.as_str(), tt.as_str())), d, &c)?;
        for m in ms {
            q.set(*k, &m.name(), rep);
        }
    }

    // partial past the leaf bound; the next step flags it if it matters
    let mut l = CellMap::default();
    for k in 0..=xn1.max_dim() {
        for (w, wc) in xn1.cells(k) {
            if let Some(img) = q.get(k, &pair_name(&push_point(x, &wc.d), w)) {
                l.set(k, w, img);
            }
        }
    }
    gm.layers.push(next);
    gm.l.push(l);
    gm.q.push(q);
    gm.members.push(members);
    Ok(())
}

/// Composition depth: generators 1, composites one more than their deepest argument.
pub fn depth(t: &Term) -> usize {
    match t.kind() {
        Kind::Gen(_) => 1,
        Kind::Comp(_, args) => 1 + args.labels().map(depth).max().unwrap_or(0),
        Kind::Bracket(a, b) => depth(a).max(depth(b)),
    }
}

impl GradedMonoid {
    /// The term a cell of `X_layer` denotes, in the operad whose generators name the cells of `X`.
    pub fn term_of(&self, op: &Operad, layer: usize, k: usize, name: &str) -> Result<Term, TermError> {
        match layer {
            0 => {
                let c: u8 = name.parse().map_err(|_| TermError::UnknownGen(name.to_string()))?;
                op.unit(Color(c), k)
            }
            1 => op.gen(name),
            _ => {
                let ms =
                    self.members[layer].get(&(k, cell(name))).ok_or_else(|| TermError::UnknownGen(name.to_string()))?;
                self.pair_term(op, layer, &ms[0])
            }
        }
    }

    fn pair_term(&self, op: &Operad, layer: usize, p: &TensorPair) -> Result<Term, TermError> {
        let head = self.term_of(op, layer - 1, p.dim, &p.y)?;
        let root = p.pi.root().try_map(&mut |g| op.gen(g))?;
        op.compose(&head, &PastingDiagram::new(p.dim, root)?)
    }
}

#[derive(Clone, Debug, Default)]
pub struct MonoidCheck {
    pub classes: usize,
    /// Classes whose members denote different terms.
    pub split: Vec<String>,
    /// Distinct classes denoting the same term.
    pub merged: Vec<String>,
    /// Normal forms of the right depth and size that no class reaches.
    pub missing: Vec<Term>,
}

impl MonoidCheck {
    pub fn is_ok(&self) -> bool {
        self.split.is_empty() && self.merged.is_empty() && self.missing.is_empty()
    }
}

/// Compares the classes of `X_layer` in `dim` against bracket-free normal forms of depth at most `layer`.
pub fn check_layer(op: &Operad, gm: &GradedMonoid, layer: usize, dim: usize) -> Result<MonoidCheck, TermError> {
    let mut rep = MonoidCheck::default();
    let mut seen: HashMap<Term, String> = HashMap::new();
    for ((k, name), ms) in &gm.members[layer] {
        if *k != dim {
            continue;
        }
        rep.classes += 1;
        let terms: BTreeSet<Term> = ms.iter().map(|p| gm.pair_term(op, layer, p)).collect::<Result<_, _>>()?;
        if terms.len() != 1 {
            rep.split.push(format!("{name}: {terms:?}"));
        }
        let t = terms.into_iter().next().expect("nonempty");
        if let Some(other) = seen.insert(t.clone(), name.to_string()) {
            rep.merged.push(format!("{other} and {name} both denote {t}"));
        }
    }
    let max = seen.keys().map(Term::size).max().unwrap_or(0);
    let words = Enumeration::build_with(op, max, false);
    rep.missing = words.cells(dim, max).into_iter().filter(|t| depth(t) <= layer && !seen.contains_key(t)).collect();
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collections::build_c0;
    use crate::tgraph::from_collection;
    use std::sync::Arc;

    #[test]
    fn binary_x2() {
        let spec = build_c0(1).unwrap();
        let x = from_collection(&spec);
        let gm = free_monoid_layers(&x, 2, 2).unwrap();
        assert!(gm.violations.is_empty(), "{:?}", gm.violations);
        assert!(!gm.exhausted);
        assert_eq!(gm.layers[2].count(1), 5);
        assert!(gm.layers[2].validate().is_empty());
        let op = Operad::new(Arc::new(spec));
        for k in 0..=1 {
            let chk = check_layer(&op, &gm, 2, k).unwrap();
            assert!(chk.is_ok(), "{chk:?}");
        }
    }

    #[test]
    fn structure_maps_are_morphisms() {
        let x = from_collection(&build_c0(1).unwrap());
        let gm = free_monoid_layers(&x, 2, 2).unwrap();
        for n in 0..2 {
            let errs =
                crate::glob::check_morphism_report(&gm.l[n], &gm.layers[n].carrier(), &gm.layers[n + 1].carrier());
            assert!(errs.is_empty(), "l_{n}: {errs:?}");
        }
    }

    #[test]
    fn union_find() {
        let mut uf = UnionFind::new(4);
        assert!(uf.union(3, 1));
        assert!(!uf.union(1, 3));
        let e = uf.push();
        uf.union(e, 3);
        assert_eq!(uf.find(e), 1);
        assert_ne!(uf.find(0), uf.find(2));
    }
}
