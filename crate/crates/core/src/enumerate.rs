//! Bounded enumeration of normal-form terms, by dimension and size.

use crate::collections::Arity;
use crate::pasting::{Node, PastingDiagram};
use crate::term::{Operad, Term};

/// Every normal form of size at most `max_size`, indexed by `[dim][size]`.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub max_size: usize,
    table: Vec<Vec<Vec<Term>>>,
}

impl Enumeration {
    pub fn build(op: &Operad, max_size: usize) -> Enumeration {
        Enumeration::build_with(op, max_size, true)
    }

    /// Without brackets this lists the free monoid on the collection.
    pub fn build_with(op: &Operad, max_size: usize, brackets: bool) -> Enumeration {
        Enumeration::build_weighted(op, max_size, brackets, &|_| 1)
    }

    /// Sizes with each generator counted as `weight` (at least 1) instead of 1.
    pub fn build_weighted(
        op: &Operad,
        max_size: usize,
        brackets: bool,
        weight: &dyn Fn(&Term) -> usize,
    ) -> Enumeration {
        let dims = op.max_dim() + 1;
        let mut e = Enumeration { max_size, table: vec![vec![Vec::new(); max_size + 1]; dims] };
        let gens: Vec<(Term, usize)> = op
            .generators()
            .map(|g| {
                let w = weight(&g);
                (g, w)
            })
            .collect();
        for s in 1..=max_size {
            for k in 0..dims {
                let mut level: Vec<Term> =
                    gens.iter().filter(|(g, w)| g.dim() == k && *w == s).map(|(g, _)| g.clone()).collect();
                if k > 0 && brackets {
                    for a in 1..s {
                        for b in 1..s {
                            if a.max(b) + 1 != s {
                                continue;
                            }
                            for lo in e.of_size(k - 1, a) {
                                for hi in e.of_size(k - 1, b) {
                                    if op.parallel_reason(lo, hi).is_none() {
                                        level.push(op.bracket(lo, hi).expect("parallel"));
                                    }
                                }
                            }
                        }
                    }
                }
                for hs in 1..s {
                    let heads: Vec<Term> = e
                        .of_size(k, hs)
                        .iter()
                        .filter(|h| (!h.is_unit() && h.name().is_some()) || h.is_bracket())
                        .cloned()
                        .collect();
                    for h in heads {
                        for args in e.fill_arity(h.arity(), s - hs) {
                            if args.labels().all(Term::is_unit) {
                                continue;
                            }
                            if let Ok(t) = op.compose(&h, &args) {
                                level.push(t);
                            }
                        }
                    }
                }
                level.sort();
                e.table[k][s] = level;
            }
        }
        e
    }

    pub fn max_dim(&self) -> usize {
        self.table.len() - 1
    }

    pub fn of_size(&self, dim: usize, size: usize) -> &[Term] {
        self.table.get(dim).and_then(|t| t.get(size)).map_or(&[], Vec::as_slice)
    }

    /// Terms of `dim` with size at most `max`, ordered by size then structure.
    pub fn up_to(&self, dim: usize, max: usize) -> impl Iterator<Item = &Term> {
        (1..=max.min(self.max_size)).flat_map(move |s| self.of_size(dim, s))
    }

    pub fn cells(&self, dim: usize, max: usize) -> Vec<Term> {
        self.up_to(dim, max).cloned().collect()
    }

    /// Argument pastings over `arity` whose leaf labels have total size exactly `total`.
    /// Inner labels are forced by the leaves; inconsistent choices are dropped.
    pub fn fill_arity(&self, arity: &Arity, total: usize) -> Vec<PastingDiagram<Term>> {
        let leaves = arity.root().leaf_labels();
        let mut out = Vec::new();
        let mut picked = Vec::with_capacity(leaves.len());
        self.pick_leaves(&leaves, total, &mut picked, &mut |picked| {
            let mut it = picked.iter();
            if let Some(root) = derive(arity.root(), &mut it) {
                if let Ok(p) = PastingDiagram::new(arity.dim(), root) {
                    out.push(p);
                }
            }
        });
        out
    }

    fn pick_leaves(
        &self,
        leaves: &[(usize, &crate::glob::Color)],
        budget: usize,
        picked: &mut Vec<Term>,
        emit: &mut impl FnMut(&[Term]),
    ) {
        let i = picked.len();
        if i == leaves.len() {
            if budget == 0 {
                emit(picked);
            }
            return;
        }
        let rest = leaves.len() - i - 1;
        if budget < rest + 1 {
            return;
        }
        let (depth, color) = leaves[i];
        for size in 1..=budget - rest {
            for t in self.of_size(depth, size) {
                if t.coarity() != *color {
                    continue;
                }
                picked.push(t.clone());
                self.pick_leaves(leaves, budget - size, picked, emit);
                picked.pop();
            }
        }
    }
}

/// Fills a shape from leaf terms in depth-first order, deriving inner labels from boundaries.
fn derive<'a, L>(shape: &Node<L>, leaves: &mut impl Iterator<Item = &'a Term>) -> Option<Node<Term>> {
    if shape.children.is_empty() {
        return Some(Node::point(leaves.next()?.clone()));
    }
    let children = shape.children.iter().map(|c| derive(c, leaves)).collect::<Option<Vec<_>>>()?;
    let mut gaps = Vec::with_capacity(children.len() + 1);
    for (i, c) in children.iter().enumerate() {
        let (s, t) = c.gaps[0].bounds()?;
        if i == 0 {
            gaps.push(s.clone());
        } else if gaps[i] != *s {
            return None;
        }
        for g in &c.gaps {
            if g.bounds() != Some(&(s.clone(), t.clone())) {
                return None;
            }
        }
        gaps.push(t.clone());
    }
    Some(Node { gaps, children })
}

/// Every normal form of `dim` with at most `max_size` constructors, in canonical order.
pub fn enumerate_cells(op: &Operad, dim: usize, max_size: usize) -> Vec<Term> {
    if dim > op.max_dim() {
        return Vec::new();
    }
    Enumeration::build(op, max_size).cells(dim, max_size)
}
